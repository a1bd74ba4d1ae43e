#include "relkit/figure.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "relkit/errors.hpp"

namespace relkit {

namespace {

constexpr double kPanelW = 900.0;
constexpr double kPanelH = 300.0;
constexpr double kMarginL = 55.0;
constexpr double kMarginR = 195.0;
constexpr double kMarginT = 34.0;
constexpr double kMarginB = 42.0;

const char* series_color(const std::string& metric) {
  static const std::map<std::string, const char*> palette = {
      {"R2_measure", "#1f77b4"}, {"R2_predict", "#aec7e8"}, {"Corr2", "#2ca02c"},
      {"Sigma", "#d62728"},      {"T_measure", "#9467bd"},  {"T_predict", "#c5b0d5"},
      {"MI", "#ff7f0e"},         {"W_measure", "#8c564b"},  {"W_predict", "#e377c2"},
      {"RRMSE", "#17becf"},      {"RAE", "#bcbd22"},
  };
  const auto it = palette.find(metric);
  return it != palette.end() ? it->second : "#7f7f7f";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Series {
  std::string name;
  std::vector<std::pair<int, double>> points;  // (m, mean), sorted by m
};

std::vector<Series> collect_series(const AggregateTable& table, Transform condition,
                                   const std::vector<std::string>& metrics) {
  std::vector<Series> out;
  for (const std::string& metric : metrics) {
    Series s;
    s.name = metric;
    for (const AggregateCell& cell : table.cells) {
      if (cell.condition == condition && cell.metric == metric) {
        s.points.emplace_back(cell.m, cell.mean);
      }
    }
    std::sort(s.points.begin(), s.points.end());
    if (!s.points.empty()) out.push_back(std::move(s));
  }
  return out;
}

void render_panel(std::string& svg, double y0, const std::string& title,
                  const std::vector<Series>& series, int m_lo, int m_hi) {
  const double plot_w = kPanelW - kMarginL - kMarginR;
  const double plot_h = kPanelH - kMarginT - kMarginB;
  const double px0 = kMarginL;
  const double py0 = y0 + kMarginT;

  const auto x_of = [&](int m) {
    if (m_hi == m_lo) return px0 + plot_w / 2.0;
    return px0 + plot_w * (static_cast<double>(m - m_lo) / static_cast<double>(m_hi - m_lo));
  };
  const auto y_of = [&](double v) {
    const double clamped = std::clamp(v, 0.0, 1.0);
    return py0 + plot_h * (1.0 - clamped);
  };

  svg += "<g>\n";
  svg += "<text x=\"" + fmt(px0) + "\" y=\"" + fmt(y0 + 22.0) +
         "\" font-family=\"sans-serif\" font-size=\"14\" font-weight=\"bold\">" + title +
         "</text>\n";
  svg += "<rect x=\"" + fmt(px0) + "\" y=\"" + fmt(py0) + "\" width=\"" + fmt(plot_w) +
         "\" height=\"" + fmt(plot_h) + "\" fill=\"none\" stroke=\"#000000\"/>\n";

  for (int t = 0; t <= 4; ++t) {
    const double v = 0.25 * t;
    const double y = y_of(v);
    svg += "<line x1=\"" + fmt(px0 - 4.0) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(px0) +
           "\" y2=\"" + fmt(y) + "\" stroke=\"#000000\"/>\n";
    svg += "<text x=\"" + fmt(px0 - 8.0) + "\" y=\"" + fmt(y + 4.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" + fmt(v) +
           "</text>\n";
  }

  std::set<int> ms;
  for (const Series& s : series) {
    for (const auto& [m, v] : s.points) ms.insert(m);
  }
  int stride = 1;
  if (ms.size() > 12) stride = static_cast<int>((ms.size() + 11) / 12);
  int index = 0;
  for (const int m : ms) {
    if (index++ % stride != 0 && m != *ms.rbegin()) continue;
    const double x = x_of(m);
    svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(py0 + plot_h) + "\" x2=\"" + fmt(x) +
           "\" y2=\"" + fmt(py0 + plot_h + 4.0) + "\" stroke=\"#000000\"/>\n";
    svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(py0 + plot_h + 17.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
           std::to_string(m) + "</text>\n";
  }
  svg += "<text x=\"" + fmt(px0 + plot_w / 2.0) + "\" y=\"" + fmt(py0 + plot_h + 33.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">test length m"
         "</text>\n";

  double legend_y = py0 + 6.0;
  for (const Series& s : series) {
    const char* color = series_color(s.name);
    if (s.points.size() > 1) {
      std::string pts;
      for (const auto& [m, v] : s.points) {
        if (!pts.empty()) pts += ' ';
        pts += fmt(x_of(m)) + "," + fmt(y_of(v));
      }
      svg += "<polyline fill=\"none\" stroke=\"";
      svg += color;
      svg += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    }
    for (const auto& [m, v] : s.points) {
      svg += "<circle cx=\"" + fmt(x_of(m)) + "\" cy=\"" + fmt(y_of(v)) + "\" r=\"2.5\" fill=\"";
      svg += color;
      svg += "\"/>\n";
    }
    const double lx = px0 + plot_w + 14.0;
    svg += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(legend_y) + "\" x2=\"" + fmt(lx + 16.0) +
           "\" y2=\"" + fmt(legend_y) + "\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt(lx + 21.0) + "\" y=\"" + fmt(legend_y + 4.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + s.name + "</text>\n";
    legend_y += 16.0;
  }
  svg += "</g>\n";
}

}  // namespace

std::string render_figure_svg(const AggregateTable& table) {
  std::vector<std::string> coefficient_metrics;
  for (const Coefficient c : all_coefficients()) coefficient_metrics.emplace_back(to_string(c));
  const std::vector<std::string> benchmark_metrics = {"RRMSE", "RAE"};

  const bool has_raw = std::any_of(table.cells.begin(), table.cells.end(), [](const auto& c) {
    return c.condition == Transform::kRaw;
  });
  const Transform bench_condition = has_raw ? Transform::kRaw : Transform::kPercentile;

  const std::vector<Series> panel_a = collect_series(table, bench_condition, benchmark_metrics);
  const std::vector<Series> panel_b =
      collect_series(table, Transform::kRaw, coefficient_metrics);
  const std::vector<Series> panel_c =
      collect_series(table, Transform::kPercentile, coefficient_metrics);

  int m_lo = 0, m_hi = 0;
  bool first = true;
  for (const AggregateCell& cell : table.cells) {
    if (first || cell.m < m_lo) m_lo = cell.m;
    if (first || cell.m > m_hi) m_hi = cell.m;
    first = false;
  }

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"900\" "
         "viewBox=\"0 0 900 900\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"900\" height=\"900\" fill=\"#ffffff\"/>\n";
  render_panel(svg, 0.0, "A: benchmark error measures", panel_a, m_lo, m_hi);
  render_panel(svg, 300.0, "B: coefficients, raw latent scores", panel_b, m_lo, m_hi);
  render_panel(svg, 600.0, "C: coefficients, percentile latent scores", panel_c, m_lo, m_hi);
  svg += "</svg>\n";
  return svg;
}

void write_figure_svg(const AggregateTable& table, const std::filesystem::path& path) {
  const std::string svg = render_figure_svg(table);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path.string());
  out << svg;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace relkit
