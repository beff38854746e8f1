#include "mstcov/boxplot.hpp"

#include "mstcov/depth.hpp"
#include "mstcov/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numeric>

namespace mstcov {

namespace {

void appendf(std::string& out, const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  const int len = std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  if (len > 0) out.append(buf, static_cast<std::size_t>(std::min<int>(len, sizeof buf - 1)));
}

// 1, 2 or 5 times a power of ten, giving about `target` ticks.
double tick_step(double span, int target) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  return (norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0) * mag;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '&': out += "&amp;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

void render_panel(std::string& svg, const TestFunctionSet& set, const TestResult* result,
                  const BoxplotSpec& spec, double x0, double y0) {
  const BoxplotGeometry g = compute_boxplot(set, spec);
  const double left = 52.0, right = 12.0, top = 28.0, bottom = 34.0;
  const double pw = spec.width - left - right;
  const double ph = spec.height - top - bottom;
  const std::size_t T = g.lags.size();
  const double u_min = g.lags.front();
  const double u_max = g.lags.back();
  const double u_span = u_max > u_min ? u_max - u_min : 1.0;
  auto sx = [&](double u) { return x0 + left + (T > 1 ? (u - u_min) / u_span * pw : pw / 2); };
  auto sy = [&](double v) { return y0 + top + (g.y_max - v) / (g.y_max - g.y_min) * ph; };

  const char* fill = "#9e9e9e";
  if (result) fill = result->p_value >= result->alpha ? "#2e9d4a" : "#d03a2f";

  appendf(svg, "<g>\n<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"white\" stroke=\"#444\" stroke-width=\"0.8\"/>\n",
          x0 + left, y0 + top, pw, ph);

  // Density cells: one column per lag, one cell per bin clipped to the
  // central envelope.
  std::size_t peak = 0;
  for (const auto& column : g.density) {
    for (std::size_t c : column) peak = std::max(peak, c);
  }
  const double half_cell = T > 1 ? pw / static_cast<double>(T - 1) / 2.0 : pw / 4.0;
  for (std::size_t s = 0; s < T && peak > 0; ++s) {
    const double lo = g.whisker_low[s];
    const double hi = g.whisker_high[s];
    const std::size_t bins = g.density[s].size();
    const double width = (hi - lo) / static_cast<double>(bins);
    const double xa = std::max(sx(g.lags[s]) - half_cell, x0 + left);
    const double xb = std::min(sx(g.lags[s]) + half_cell, x0 + left + pw);
    for (std::size_t k = 0; k < bins; ++k) {
      const std::size_t count = g.density[s][k];
      if (count == 0) continue;
      double b_lo = lo + width * static_cast<double>(k);
      double b_hi = bins == 1 ? hi : b_lo + width;
      b_lo = std::max(b_lo, g.lower[s]);
      b_hi = std::min(b_hi, g.upper[s]);
      double top_px = sy(b_hi);
      double h_px = sy(b_lo) - top_px;
      if (h_px < 1.0) {
        top_px -= (1.0 - h_px) / 2.0;
        h_px = 1.0;
      }
      appendf(svg, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"%s\" fill-opacity=\"%.3f\" stroke=\"none\"/>\n",
              xa, top_px, xb - xa, h_px, fill,
              0.15 + 0.85 * static_cast<double>(count) / static_cast<double>(peak));
    }
  }

  auto polyline = [&](const std::vector<double>& ys, const char* extra) {
    svg += "<polyline fill=\"none\" stroke=\"#1f4fd1\" ";
    svg += extra;
    svg += " points=\"";
    for (std::size_t s = 0; s < T; ++s) appendf(svg, "%s%.2f,%.2f", s ? " " : "", sx(g.lags[s]), sy(ys[s]));
    svg += "\"/>\n";
  };
  // Central region border: upper envelope, then lower envelope back.
  svg += "<polygon fill=\"none\" stroke=\"#1f4fd1\" stroke-width=\"1.6\" points=\"";
  for (std::size_t s = 0; s < T; ++s) appendf(svg, "%s%.2f,%.2f", s ? " " : "", sx(g.lags[s]), sy(g.upper[s]));
  for (std::size_t s = T; s-- > 0;) appendf(svg, " %.2f,%.2f", sx(g.lags[s]), sy(g.lower[s]));
  svg += "\"/>\n";
  polyline(g.whisker_high, "stroke-width=\"1.2\"");
  polyline(g.whisker_low, "stroke-width=\"1.2\"");

  if (spec.zero_line && g.y_min <= 0.0 && g.y_max >= 0.0) {
    appendf(svg, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\" stroke-width=\"1\" stroke-dasharray=\"2,3\"/>\n",
            x0 + left, sy(0.0), x0 + left + pw, sy(0.0));
  }

  // Axes.
  for (std::size_t s = 0; s < T; ++s) {
    if (T > 12 && s % ((T + 11) / 12) != 0) continue;
    appendf(svg, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"10\" text-anchor=\"middle\">%d</text>\n",
            sx(g.lags[s]), y0 + top + ph + 13.0, g.lags[s]);
  }
  const double step = tick_step(g.y_max - g.y_min, 5);
  for (double v = std::ceil(g.y_min / step) * step; v <= g.y_max + 1e-12 * step; v += step) {
    const double tick = std::abs(v) < 1e-9 * step ? 0.0 : v;
    appendf(svg, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#444\" stroke-width=\"0.8\"/>\n",
            x0 + left - 4.0, sy(tick), x0 + left, sy(tick));
    appendf(svg, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"10\" text-anchor=\"end\">%.3g</text>\n",
            x0 + left - 6.0, sy(tick) + 3.5, tick);
  }
  appendf(svg, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"middle\">u</text>\n",
          x0 + left + pw / 2.0, y0 + spec.height - 6.0);
  const std::string title = spec.title.empty() ? std::string(to_string(set.property)) : spec.title;
  appendf(svg, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" font-weight=\"bold\">%s</text>\n",
          x0 + left, y0 + 17.0, escape(title).c_str());
  if (result) {
    appendf(svg, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"end\">p-value = %.3f</text>\n",
            x0 + left + pw, y0 + 17.0, result->p_value);
  }
  svg += "</g>\n";
}

} // namespace

BoxplotGeometry compute_boxplot(const TestFunctionSet& set, const BoxplotSpec& spec) {
  if (set.num_curves() < 2) throw ValidationError("functional boxplot needs at least 2 curves");
  if (!(spec.central_fraction > 0.0 && spec.central_fraction <= 1.0)) {
    throw ValidationError("central fraction must lie in (0, 1]");
  }
  if (!(spec.whisker_factor >= 0.0)) throw ValidationError("whisker factor must be >= 0");
  if (spec.density_bins < 1) throw ValidationError("density bins must be >= 1");

  const std::size_t N = set.num_curves();
  const std::size_t T = set.num_lags();
  const DepthRanking ranking = rank_by_depth(as_curves(set), &set.labels);
  const auto keep = static_cast<std::size_t>(std::ceil(spec.central_fraction * static_cast<double>(N) - 1e-9));

  BoxplotGeometry g;
  g.lags = set.lags;
  for (std::size_t k = 0; k < N; ++k) {
    if (ranking.ranks[k] > N - keep) g.central.push_back(k);
  }
  g.lower.assign(T, 0.0);
  g.upper.assign(T, 0.0);
  g.whisker_low.assign(T, 0.0);
  g.whisker_high.assign(T, 0.0);
  g.density.assign(T, std::vector<std::size_t>(spec.density_bins, 0));
  double lo_all = set.values.front(), hi_all = set.values.front();
  for (double v : set.values) {
    lo_all = std::min(lo_all, v);
    hi_all = std::max(hi_all, v);
  }
  for (std::size_t s = 0; s < T; ++s) {
    double lo = set.curve(g.central.front())[s];
    double hi = lo;
    for (std::size_t k : g.central) {
      lo = std::min(lo, set.curve(k)[s]);
      hi = std::max(hi, set.curve(k)[s]);
    }
    g.lower[s] = lo;
    g.upper[s] = hi;
    const double reach = spec.whisker_factor * (hi - lo);
    g.whisker_low[s] = lo - reach;
    g.whisker_high[s] = hi + reach;
    const double span = g.whisker_high[s] - g.whisker_low[s];
    for (std::size_t k : g.central) {
      std::size_t bin = 0;
      if (span > 0.0) {
        const double pos = (set.curve(k)[s] - g.whisker_low[s]) / span * static_cast<double>(spec.density_bins);
        bin = std::min(static_cast<std::size_t>(std::max(pos, 0.0)), spec.density_bins - 1);
      }
      ++g.density[s][bin];
    }
    lo_all = std::min(lo_all, g.whisker_low[s]);
    hi_all = std::max(hi_all, g.whisker_high[s]);
  }
  if (spec.zero_line) {
    lo_all = std::min(lo_all, 0.0);
    hi_all = std::max(hi_all, 0.0);
  }
  const double pad = hi_all > lo_all ? 0.05 * (hi_all - lo_all) : std::max(std::abs(hi_all), 1.0) * 0.5;
  g.y_min = lo_all - pad;
  g.y_max = hi_all + pad;
  return g;
}

std::string render_functional_boxplot(const TestFunctionSet& set, const TestResult* result,
                                      const BoxplotSpec& spec) {
  return render_boxplot_grid({{&set, result}}, 1, spec);
}

std::string render_boxplot_grid(const std::vector<BoxplotPanel>& panels, std::size_t columns,
                                const BoxplotSpec& spec) {
  if (panels.empty()) throw ValidationError("no panels to render");
  if (columns < 1) columns = 1;
  columns = std::min(columns, panels.size());
  const std::size_t rows = (panels.size() + columns - 1) / columns;
  std::string svg;
  appendf(svg, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
  appendf(svg, "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\" font-family=\"Helvetica, Arial, sans-serif\">\n",
          spec.width * static_cast<double>(columns), spec.height * static_cast<double>(rows),
          spec.width * static_cast<double>(columns), spec.height * static_cast<double>(rows));
  for (std::size_t k = 0; k < panels.size(); ++k) {
    if (!panels[k].set) throw ValidationError("panel without test functions");
    BoxplotSpec own = spec;
    if (panels.size() > 1) own.title.clear();
    render_panel(svg, *panels[k].set, panels[k].result, own,
                 spec.width * static_cast<double>(k % columns), spec.height * static_cast<double>(k / columns));
  }
  svg += "</svg>\n";
  return svg;
}

} // namespace mstcov
