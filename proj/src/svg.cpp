#include "relwig/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "relwig/grid.hpp"

namespace relwig {
namespace {

constexpr int levels = 10;
constexpr const char* palette[levels] = {"#313695", "#4575b4", "#74add1", "#abd9e9", "#e0f3f8",
                                         "#fee090", "#fdae61", "#f46d43", "#d73027", "#a50026"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v, const char* f = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

std::string render_heatmap_svg(std::span<const double> values, std::size_t rows, std::size_t cols,
                               const HeatmapSpec& spec) {
  if (rows == 0 || cols == 0 || values.size() != rows * cols)
    throw std::invalid_argument("render_heatmap_svg: values do not match rows x cols");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  const double span = hi > lo ? hi - lo : 1.0;
  auto band = [&](double v) { return std::clamp(static_cast<int>((v - lo) / span * levels), 0, levels - 1); };

  const double plot = 480.0, margin = 60.0, legend = 90.0;
  const double cw = plot / static_cast<double>(cols), ch = plot / static_cast<double>(rows);
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(plot + 2 * margin + legend)
     << "\" height=\"" << fmt(plot + 2 * margin) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << fmt(margin) << "\" y=\"" << fmt(margin / 2) << "\" font-size=\"14\">"
     << escape(spec.title) << "</text>\n";
  os << "<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t r = 0; r < rows; ++r) {
    const double y = margin + plot - static_cast<double>(r + 1) * ch;
    std::size_t c = 0;
    while (c < cols) {
      const int b = band(values[r * cols + c]);
      std::size_t e = c + 1;
      while (e < cols && band(values[r * cols + e]) == b) ++e;  // merge runs of one band
      os << "<rect x=\"" << fmt(margin + static_cast<double>(c) * cw, "%.3f") << "\" y=\""
         << fmt(y, "%.3f") << "\" width=\"" << fmt(static_cast<double>(e - c) * cw, "%.3f")
         << "\" height=\"" << fmt(ch, "%.3f") << "\" fill=\"" << palette[b] << "\"/>\n";
      c = e;
    }
  }
  os << "</g>\n";
  os << "<rect x=\"" << fmt(margin) << "\" y=\"" << fmt(margin) << "\" width=\"" << fmt(plot)
     << "\" height=\"" << fmt(plot) << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double base = margin + plot;
  os << "<text x=\"" << fmt(margin) << "\" y=\"" << fmt(base + 18) << "\">" << fmt(spec.x_min) << "</text>\n";
  os << "<text x=\"" << fmt(margin + plot) << "\" y=\"" << fmt(base + 18)
     << "\" text-anchor=\"end\">" << fmt(spec.x_max) << "</text>\n";
  os << "<text x=\"" << fmt(margin + plot / 2) << "\" y=\"" << fmt(base + 36)
     << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
  os << "<text x=\"" << fmt(margin - 6) << "\" y=\"" << fmt(base) << "\" text-anchor=\"end\">"
     << fmt(spec.y_min) << "</text>\n";
  os << "<text x=\"" << fmt(margin - 6) << "\" y=\"" << fmt(margin + 10) << "\" text-anchor=\"end\">"
     << fmt(spec.y_max) << "</text>\n";
  os << "<text transform=\"translate(" << fmt(margin - 30) << "," << fmt(margin + plot / 2)
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(spec.y_label) << "</text>\n";
  const double lx = margin + plot + 20, lh = plot / levels;
  for (int b = 0; b < levels; ++b) {
    const double y = margin + plot - (b + 1) * lh;
    os << "<rect x=\"" << fmt(lx) << "\" y=\"" << fmt(y, "%.3f") << "\" width=\"16\" height=\""
       << fmt(lh, "%.3f") << "\" fill=\"" << palette[b] << "\"/>\n";
    os << "<text x=\"" << fmt(lx + 22) << "\" y=\"" << fmt(y + lh, "%.3f") << "\">"
       << fmt(lo + span * b / levels) << "</text>\n";
  }
  os << "<text x=\"" << fmt(lx + 22) << "\" y=\"" << fmt(margin + 4) << "\">" << fmt(hi) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace relwig
