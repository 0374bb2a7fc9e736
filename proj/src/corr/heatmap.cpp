#include "oilcast/corr/heatmap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "oilcast/format.hpp"
#include "oilcast/svg.hpp"

namespace oilcast::corr {

namespace {

constexpr int kCell = 72;
constexpr int kLeft = 150;
constexpr int kTop = 70;
constexpr int kLegendWidth = 18;

struct Rgb {
  double r, g, b;
};

// dark (strong inverse) -> magenta -> light (strong direct)
constexpr std::array<Rgb, 3> kStops{{{44, 15, 63}, {181, 54, 122}, {251, 233, 215}}};

std::string color_for(double value) {
  const double t = std::clamp((value + 1.0) / 2.0, 0.0, 1.0);
  const double pos = t * 2.0;
  const std::size_t seg = std::min<std::size_t>(static_cast<std::size_t>(pos), 1);
  const double u = pos - static_cast<double>(seg);
  const auto& a = kStops[seg];
  const auto& b = kStops[seg + 1];
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(a.r + (b.r - a.r) * u)),
                static_cast<int>(std::lround(a.g + (b.g - a.g) * u)), static_cast<int>(std::lround(a.b + (b.b - a.b) * u)));
  return buf;
}

}  // namespace

std::string render_heatmap_svg(const CorrelationMatrix& matrix) {
  const int n = static_cast<int>(matrix.size());
  const int grid = n * kCell;
  const int width = kLeft + grid + 90;
  const int height = kTop + grid + 30;

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
       std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " + std::to_string(height) +
       "\" font-family=\"Helvetica, Arial, sans-serif\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  s += "<text x=\"" + std::to_string(kLeft + grid / 2) +
       "\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">Correlation coefficients</text>\n";

  for (int j = 0; j < n; ++j) {
    s += "<text x=\"" + std::to_string(kLeft + j * kCell + kCell / 2) + "\" y=\"" + std::to_string(kTop - 10) +
         "\" font-size=\"11\" text-anchor=\"middle\">" + xml_escape(matrix.labels[static_cast<std::size_t>(j)]) +
         "</text>\n";
  }
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    s += "<text x=\"" + std::to_string(kLeft - 8) + "\" y=\"" + std::to_string(kTop + i * kCell + kCell / 2 + 4) +
         "\" font-size=\"11\" text-anchor=\"end\">" + xml_escape(matrix.labels[ui]) + "</text>\n";
    for (int j = 0; j < n; ++j) {
      const double v = matrix(ui, static_cast<std::size_t>(j));
      const int x = kLeft + j * kCell;
      const int y = kTop + i * kCell;
      const char* ink = v < 0.1 ? "#ffffff" : "#000000";
      s += "<g><title>" + xml_escape(matrix.labels[ui]) + " / " + xml_escape(matrix.labels[static_cast<std::size_t>(j)]) +
           ": " + format_real(v) + "</title>";
      s += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" + std::to_string(kCell) +
           "\" height=\"" + std::to_string(kCell) + "\" fill=\"" + color_for(v) + "\" stroke=\"#ffffff\"/>";
      s += "<text x=\"" + std::to_string(x + kCell / 2) + "\" y=\"" + std::to_string(y + kCell / 2 + 4) +
           "\" font-size=\"12\" text-anchor=\"middle\" fill=\"" + ink + "\">" + format_fixed(v, 2) + "</text></g>\n";
    }
  }

  // legend
  const int lx = kLeft + grid + 24;
  s += "<defs><linearGradient id=\"scale\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">";
  for (int k = 0; k <= 4; ++k) {
    const double v = -1.0 + 0.5 * k;
    s += "<stop offset=\"" + format_fixed(0.25 * k, 2) + "\" stop-color=\"" + color_for(v) + "\"/>";
  }
  s += "</linearGradient></defs>\n";
  s += "<rect x=\"" + std::to_string(lx) + "\" y=\"" + std::to_string(kTop) + "\" width=\"" +
       std::to_string(kLegendWidth) + "\" height=\"" + std::to_string(grid) + "\" fill=\"url(#scale)\"/>\n";
  for (int k = 0; k <= 2; ++k) {
    const int y = kTop + grid - k * grid / 2;
    s += "<text x=\"" + std::to_string(lx + kLegendWidth + 6) + "\" y=\"" + std::to_string(y + 4) +
         "\" font-size=\"11\">" + format_fixed(-1.0 + k, 0) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

void export_heatmap(const CorrelationMatrix& matrix, const std::filesystem::path& path) {
  write_file_atomic(path, render_heatmap_svg(matrix));
}

}  // namespace oilcast::corr
