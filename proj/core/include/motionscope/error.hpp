#pragma once

#include <stdexcept>
#include <string>

namespace motionscope {

// Raised for malformed or inconsistent user input (documents, images,
// manifests). Maps to process exit code 1 at the CLI boundary.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when the external transcoder is missing or fails. Maps to
// process exit code 2 at the CLI boundary.
class TranscoderError : public std::runtime_error {
 public:
  explicit TranscoderError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace motionscope
