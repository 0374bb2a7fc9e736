#include "oilcast/experiment/plot.hpp"

#include <algorithm>
#include <cmath>

#include "oilcast/error.hpp"
#include "oilcast/format.hpp"
#include "oilcast/svg.hpp"

namespace oilcast::experiment {

namespace {

constexpr double kWidth = 900;
constexpr double kHeight = 420;
constexpr double kLeft = 80;
constexpr double kRight = 30;
constexpr double kTop = 50;
constexpr double kBottom = 60;

std::string polyline(std::span<const double> ys, double lo, double hi, const char* color) {
  const double w = kWidth - kLeft - kRight;
  const double h = kHeight - kTop - kBottom;
  const double n = static_cast<double>(std::max<std::size_t>(ys.size() - 1, 1));
  std::string pts;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double x = kLeft + w * static_cast<double>(i) / n;
    const double y = kTop + h * (1.0 - (ys[i] - lo) / (hi - lo));
    if (i) pts += ' ';
    pts += format_fixed(x, 2) + "," + format_fixed(y, 2);
  }
  return "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
}

}  // namespace

std::string render_series_svg(std::string_view title, std::span<const Date> dates, std::span<const double> real,
                              std::span<const double> predicted) {
  if (real.empty()) throw DataError("nothing to plot: empty series");
  if (real.size() != predicted.size() || real.size() != dates.size())
    throw DataError("plot series lengths differ");

  double lo = std::min(*std::min_element(real.begin(), real.end()), *std::min_element(predicted.begin(), predicted.end()));
  double hi = std::max(*std::max_element(real.begin(), real.end()), *std::max_element(predicted.begin(), predicted.end()));
  if (!(hi > lo)) {
    const double pad = std::max(std::abs(lo) * 0.05, 1.0);
    lo -= pad;
    hi += pad;
  } else {
    const double pad = (hi - lo) * 0.05;
    lo -= pad;
    hi += pad;
  }

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"420\" viewBox=\"0 0 900 420\" "
       "font-family=\"Helvetica, Arial, sans-serif\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  s += "<text x=\"450\" y=\"28\" font-size=\"16\" text-anchor=\"middle\">" + xml_escape(title) + "</text>\n";
  s += "<rect x=\"" + format_fixed(kLeft, 0) + "\" y=\"" + format_fixed(kTop, 0) + "\" width=\"" + format_fixed(plot_w, 0) +
       "\" height=\"" + format_fixed(plot_h, 0) + "\" fill=\"none\" stroke=\"#888888\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    const double y = kTop + plot_h * (1.0 - k / 4.0);
    s += "<line x1=\"" + format_fixed(kLeft, 0) + "\" x2=\"" + format_fixed(kLeft + plot_w, 0) + "\" y1=\"" +
         format_fixed(y, 2) + "\" y2=\"" + format_fixed(y, 2) + "\" stroke=\"#eeeeee\"/>\n";
    s += "<text x=\"" + format_fixed(kLeft - 8, 0) + "\" y=\"" + format_fixed(y + 4, 2) +
         "\" font-size=\"11\" text-anchor=\"end\">" + format_fixed(v, 2) + "</text>\n";
  }
  const std::size_t ticks = std::min<std::size_t>(dates.size(), 5);
  for (std::size_t k = 0; k < ticks; ++k) {
    const std::size_t i = ticks == 1 ? 0 : k * (dates.size() - 1) / (ticks - 1);
    const double x = kLeft + plot_w * (dates.size() == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(dates.size() - 1));
    s += "<text x=\"" + format_fixed(x, 2) + "\" y=\"" + format_fixed(kTop + plot_h + 20, 0) +
         "\" font-size=\"11\" text-anchor=\"middle\">" + format_date(dates[i]) + "</text>\n";
  }

  s += polyline(real, lo, hi, "#1f77b4");
  s += polyline(predicted, lo, hi, "#d62728");

  const double ly = kHeight - 18;
  s += "<line x1=\"330\" x2=\"360\" y1=\"" + format_fixed(ly - 4, 0) + "\" y2=\"" + format_fixed(ly - 4, 0) +
       "\" stroke=\"#1f77b4\" stroke-width=\"2\"/><text x=\"366\" y=\"" + format_fixed(ly, 0) +
       "\" font-size=\"12\">Real Prices</text>\n";
  s += "<line x1=\"470\" x2=\"500\" y1=\"" + format_fixed(ly - 4, 0) + "\" y2=\"" + format_fixed(ly - 4, 0) +
       "\" stroke=\"#d62728\" stroke-width=\"2\"/><text x=\"506\" y=\"" + format_fixed(ly, 0) +
       "\" font-size=\"12\">Predicted Prices</text>\n";
  s += "</svg>\n";
  return s;
}

std::string render_prediction_svg(const ExperimentResult& result) {
  const std::string title = result.spec.target + " Real Prices vs Predicted Prices (" + result.spec.variant + ")";
  return render_series_svg(title, result.dates, result.truth, result.predicted);
}

void render_prediction_plot(const ExperimentResult& result, const std::filesystem::path& path) {
  write_file_atomic(path, render_prediction_svg(result));
}

}  // namespace oilcast::experiment
