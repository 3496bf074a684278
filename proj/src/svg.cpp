#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

#include "diachron/report.hpp"

namespace diachron {

namespace {

constexpr double kWidth = 960;
constexpr double kHeight = 540;
constexpr double kLeft = 80;
constexpr double kRight = 930;
constexpr double kTop = 70;
constexpr double kBottom = 470;

constexpr const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e",
                                    "#e6ab02", "#a6761d", "#666666", "#1f78b4", "#b2df8a"};

std::string num(double v) {
  // Avoid "-0.00".
  if (std::fabs(v) < 0.005) v = 0.0;
  return fmt::format("{:.2f}", v);
}

// Smallest 1/2/5 x 10^k step giving at most `max_ticks` intervals.
double nice_step(double span, int max_ticks) {
  if (span <= 0) return 1.0;
  double raw = span / max_ticks;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

std::string tick_label(double v) {
  if (std::fabs(v - std::round(v)) < 1e-9) return fmt::format("{}", static_cast<long long>(std::llround(v)));
  return fmt::format("{:.2f}", v);
}

std::string svg_open(const std::string& title) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      static_cast<int>(kWidth), static_cast<int>(kHeight));
  out += fmt::format("<title>{}</title>\n", xml_escape(title));
  out += "<rect x=\"0\" y=\"0\" width=\"960\" height=\"540\" fill=\"#ffffff\"/>\n";
  return out;
}

}  // namespace

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::vector<double> moving_average(const std::vector<double>& values, int width) {
  if (width < 3 || width % 2 == 0) throw std::invalid_argument("smoothing width must be odd and at least 3");
  const auto half = static_cast<std::ptrdiff_t>(width / 2);
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  std::vector<double> out(values.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
    std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + half);
    double s = 0;
    for (std::ptrdiff_t j = lo; j <= hi; ++j) s += values[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::string emit_timeline_svg(const TimelinePlotSpec& spec) {
  if (spec.series.empty()) throw std::invalid_argument("timeline needs at least one series");
  const auto& axis = spec.series.front().points;
  if (axis.size() < 2) throw std::invalid_argument("timeline series need at least two points");
  for (const auto& s : spec.series) {
    if (s.points.size() != axis.size()) throw std::invalid_argument("timeline series have mismatched axes");
    for (std::size_t i = 0; i < axis.size(); ++i)
      if (s.points[i].first != axis[i].first) throw std::invalid_argument("timeline series have mismatched axes");
  }
  if (spec.smoothing && (*spec.smoothing < 3 || *spec.smoothing % 2 == 0))
    throw std::invalid_argument("smoothing width must be odd and at least 3");

  std::vector<std::vector<double>> ys;
  for (const auto& s : spec.series) {
    std::vector<double> y;
    for (const auto& p : s.points) y.push_back(p.second);
    if (spec.smoothing) y = moving_average(y, *spec.smoothing);
    ys.push_back(std::move(y));
  }

  double x_min = axis.front().first, x_max = axis.front().first;
  for (const auto& p : axis) {
    x_min = std::min(x_min, p.first);
    x_max = std::max(x_max, p.first);
  }
  if (spec.x_range) std::tie(x_min, x_max) = *spec.x_range;
  if (x_max <= x_min) {
    x_min -= 1;
    x_max += 1;
  }

  double y_max = 1.0;
  double y_step = 0.2;
  if (spec.y_kind != YKind::dice) {
    double m = 0;
    for (const auto& y : ys)
      for (double v : y) m = std::max(m, v);
    if (m > 0) {
      y_step = nice_step(m, 5);
      y_max = std::ceil(m / y_step - 1e-9) * y_step;
    } else {
      y_step = 0.2;
    }
  }

  auto sx = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft); };
  auto sy = [&](double y) { return kBottom - y / y_max * (kBottom - kTop); };

  std::string out = svg_open(spec.title);
  out += fmt::format("<text x=\"480\" y=\"32\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">{}</text>\n",
                     xml_escape(spec.title));

  // Axes.
  out += fmt::format("<g stroke=\"#000000\" stroke-width=\"1\">\n<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\"/>\n"
                     "<line x1=\"{0}\" y1=\"{3}\" x2=\"{0}\" y2=\"{2}\"/>\n</g>\n",
                     num(kLeft), num(kRight), num(kBottom), num(kTop));

  out += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  const double x_step = nice_step(x_max - x_min, 10);
  const double x_first = std::ceil(x_min / x_step - 1e-9);
  for (int i = 0;; ++i) {
    const double t = (x_first + i) * x_step;
    if (t > x_max + 1e-9) break;
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#000000\"/>\n", num(sx(t)), num(kBottom),
                       num(kBottom + 5));
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", num(sx(t)), num(kBottom + 20),
                       tick_label(t));
  }
  for (int i = 0;; ++i) {
    const double t = i * y_step;
    if (t > y_max + 1e-9) break;
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#dddddd\"/>\n", num(kLeft), num(sy(t)),
                       num(kRight));
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", num(kLeft - 8), num(sy(t) + 4),
                       tick_label(t));
  }
  const char* y_title = spec.y_kind == YKind::count ? "occurrences" : spec.y_kind == YKind::rate ? "per million words" : "Dice";
  out += fmt::format("<text x=\"20\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {})\">{}</text>\n",
                     num((kTop + kBottom) / 2), num((kTop + kBottom) / 2), y_title);
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">year (bin midpoint)</text>\n",
                     num((kLeft + kRight) / 2), num(kHeight - 20));
  out += "</g>\n";

  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    std::string points;
    for (std::size_t i = 0; i < axis.size(); ++i) {
      if (i) points.push_back(' ');
      points += num(sx(axis[i].first)) + "," + num(sy(ys[s][i]));
    }
    out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n",
                       kPalette[s % std::size(kPalette)], points);
  }

  out += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const double y = kTop + 10 + 18 * static_cast<double>(s);
    std::string label = spec.series[s].name;
    if (spec.smoothing) label += fmt::format(" (moving average, width {})", *spec.smoothing);
    out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                       num(kLeft + 15), num(y), num(kLeft + 40), num(y), kPalette[s % std::size(kPalette)]);
    out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", num(kLeft + 46), num(y + 4), xml_escape(label));
  }
  out += "</g>\n</svg>\n";
  return out;
}

std::string emit_field_svg(const FieldGraph& graph) {
  if (graph.nodes.empty() || graph.nodes.front().lemma != graph.target)
    throw std::invalid_argument("field graph must list its target as the first node");

  const double cx = kWidth / 2, cy = kHeight / 2, radius = 210;
  const std::size_t n = graph.nodes.size() - 1;
  std::vector<std::pair<double, double>> pos(graph.nodes.size());
  pos[0] = {cx, cy};
  for (std::size_t i = 0; i < n; ++i) {
    double angle = -std::numbers::pi / 2 + 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    pos[i + 1] = {cx + radius * std::cos(angle), cy + radius * std::sin(angle)};
  }
  auto where = [&](const std::string& lemma) -> std::size_t {
    for (std::size_t i = 0; i < graph.nodes.size(); ++i)
      if (graph.nodes[i].lemma == lemma) return i;
    throw std::invalid_argument(fmt::format("edge endpoint \"{}\" is not a graph node", lemma));
  };

  std::string out = svg_open(fmt::format("semantic field of {}", graph.target));
  out += "<g stroke=\"#1f78b4\" stroke-width=\"1.5\">\n";
  for (const auto& e : graph.edges) {
    auto a = pos[where(e.a)];
    auto b = pos[where(e.b)];
    out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke-opacity=\"{:.3f}\"/>\n", num(a.first),
                       num(a.second), num(b.first), num(b.second), std::clamp(e.similarity, 0.0, 1.0));
  }
  out += "</g>\n<g font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">\n";
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const bool is_target = i == 0;
    out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>\n", num(pos[i].first), num(pos[i].second),
                       is_target ? 8 : 5, is_target ? "#d95f02" : "#1b9e77");
    out += fmt::format("<text x=\"{}\" y=\"{}\"{}>{}</text>\n", num(pos[i].first), num(pos[i].second - 10),
                       is_target ? " font-weight=\"bold\"" : "", xml_escape(graph.nodes[i].lemma));
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace diachron
