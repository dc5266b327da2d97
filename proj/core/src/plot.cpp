#include "motionscope/plot.hpp"

#include <algorithm>
#include <sstream>

namespace motionscope {
namespace {

constexpr int kMargin = 40;

void polyline(std::ostringstream& svg, const std::vector<double>& values, double max_value,
              int width, int height, const char* color, double opacity) {
  if (values.empty()) return;
  const double plot_w = width - 2 * kMargin;
  const double plot_h = height - 2 * kMargin;
  const double step = values.size() > 1 ? plot_w / (values.size() - 1) : 0.0;
  svg << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-opacity=\"" << opacity
      << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = kMargin + i * step;
    const double y = height - kMargin - (max_value > 0 ? values[i] / max_value * plot_h : 0.0);
    svg << x << "," << y << " ";
  }
  svg << "\"/>\n";
}

}  // namespace

std::string energy_svg(const EnergySeries& e, const std::optional<WindowSelection>& selection,
                       int width, int height) {
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  double max_value = 0.0;
  for (double v : e.raw) max_value = std::max(max_value, v);

  if (selection && !e.raw.empty()) {
    const double plot_w = width - 2 * kMargin;
    const double step = e.raw.size() > 1 ? plot_w / (e.raw.size() - 1) : 0.0;
    const int last = static_cast<int>(e.raw.size()) - 1;
    const double x0 = kMargin + std::clamp(selection->start_frame, 0, last) * step;
    const double x1 = kMargin + std::clamp(selection->end_frame - 1, 0, last) * step;
    svg << "  <rect x=\"" << x0 << "\" y=\"" << kMargin << "\" width=\"" << (x1 - x0)
        << "\" height=\"" << (height - 2 * kMargin) << "\" fill=\"#ffd54f\" fill-opacity=\"0.4\"/>\n";
  }

  polyline(svg, e.raw, max_value, width, height, "#90a4ae", 0.9);
  polyline(svg, e.filtered, max_value, width, height, "#1565c0", 1.0);
  svg << "  <line x1=\"" << kMargin << "\" y1=\"" << (height - kMargin) << "\" x2=\""
      << (width - kMargin) << "\" y2=\"" << (height - kMargin)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace motionscope
