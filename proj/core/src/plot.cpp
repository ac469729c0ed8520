#include "dtp/plot.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "dtp/error.hpp"

namespace dtp {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 20.0;
constexpr double kMarginBottom = 50.0;
constexpr int kTicks = 4;  // intervals per axis

// Locale-independent fixed formatting for SVG coordinates.
std::string fixed(double value, int precision) {
  std::array<char, 64> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::fixed, precision);
  if (ec != std::errc()) {
    return "0";
  }
  return std::string(buf.data(), ptr);
}

// Shortest form for tick labels.
std::string shortest(double value) {
  std::array<char, 64> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) {
    return "0";
  }
  return std::string(buf.data(), ptr);
}

std::string escape_text(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_convergence_svg(const std::vector<TracePoint>& trace,
                                   const std::string& x_label,
                                   const std::string& y_label) {
  double x_max = 1.0;
  double y_max = 1.0;
  for (const TracePoint& p : trace) {
    x_max = std::max(x_max, static_cast<double>(p.query));
    y_max = std::max(y_max, p.distance);
  }
  y_max *= 1.05;  // headroom above the first trace point
  if (!(y_max > 0.0)) {
    y_max = 1.0;
  }

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto sx = [&](double q) { return kMarginLeft + q / x_max * plot_w; };
  auto sy = [&](double d) { return kHeight - kMarginBottom - d / y_max * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth, 0)
      << "\" height=\"" << fixed(kHeight, 0) << "\" viewBox=\"0 0 "
      << fixed(kWidth, 0) << ' ' << fixed(kHeight, 0) << "\">\n";
  svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Frame.
  svg << "  <rect x=\"" << fixed(kMarginLeft, 1) << "\" y=\"" << fixed(kMarginTop, 1)
      << "\" width=\"" << fixed(plot_w, 1) << "\" height=\"" << fixed(plot_h, 1)
      << "\" fill=\"none\" stroke=\"#333\"/>\n";

  // Ticks and grid.
  for (int k = 0; k <= kTicks; ++k) {
    const double fx = x_max * k / kTicks;
    const double fy = y_max * k / kTicks;
    const double px = sx(fx);
    const double py = sy(fy);
    svg << "  <line x1=\"" << fixed(px, 1) << "\" y1=\""
        << fixed(kHeight - kMarginBottom, 1) << "\" x2=\"" << fixed(px, 1)
        << "\" y2=\"" << fixed(kHeight - kMarginBottom + 5, 1)
        << "\" stroke=\"#333\"/>\n";
    svg << "  <text x=\"" << fixed(px, 1) << "\" y=\""
        << fixed(kHeight - kMarginBottom + 18, 1)
        << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << shortest(fx) << "</text>\n";
    svg << "  <line x1=\"" << fixed(kMarginLeft - 5, 1) << "\" y1=\"" << fixed(py, 1)
        << "\" x2=\"" << fixed(kMarginLeft, 1) << "\" y2=\"" << fixed(py, 1)
        << "\" stroke=\"#333\"/>\n";
    svg << "  <text x=\"" << fixed(kMarginLeft - 8, 1) << "\" y=\""
        << fixed(py + 4, 1)
        << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">"
        << shortest(fy) << "</text>\n";
  }

  // Axis labels.
  svg << "  <text x=\"" << fixed(kMarginLeft + plot_w / 2, 1) << "\" y=\""
      << fixed(kHeight - 12, 1)
      << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">"
      << escape_text(x_label) << "</text>\n";
  svg << "  <text x=\"18\" y=\"" << fixed(kMarginTop + plot_h / 2, 1)
      << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " transform=\"rotate(-90 18 " << fixed(kMarginTop + plot_h / 2, 1)
      << ")\">" << escape_text(y_label) << "</text>\n";

  if (trace.empty()) {
    svg << "  <text x=\"" << fixed(kMarginLeft + plot_w / 2, 1) << "\" y=\""
        << fixed(kMarginTop + plot_h / 2, 1)
        << "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\""
        << " fill=\"#888\">no trace points</text>\n";
  } else {
    // Step-after envelope: the best distance holds until the next accepted
    // point.
    std::ostringstream path;
    path << "M " << fixed(sx(trace.front().query), 2) << ' '
         << fixed(sy(trace.front().distance), 2);
    for (std::size_t i = 1; i < trace.size(); ++i) {
      path << " H " << fixed(sx(trace[i].query), 2);
      path << " V " << fixed(sy(trace[i].distance), 2);
    }
    svg << "  <path d=\"" << path.str()
        << "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
    svg << "  <circle cx=\"" << fixed(sx(trace.front().query), 2) << "\" cy=\""
        << fixed(sy(trace.front().distance), 2)
        << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    svg << "  <circle cx=\"" << fixed(sx(trace.back().query), 2) << "\" cy=\""
        << fixed(sy(trace.back().distance), 2)
        << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

void emit_convergence_plot(const std::vector<TracePoint>& trace,
                           const std::string& path, const std::string& x_label,
                           const std::string& y_label) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write plot '" + path + "'");
  }
  out << render_convergence_svg(trace, x_label, y_label);
  out.flush();
  if (!out) {
    throw IoError("failed writing plot '" + path + "'");
  }
}

}  // namespace dtp
