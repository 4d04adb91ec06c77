#include "fringestep/svg.hpp"

#include "fringestep/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

namespace fringestep {

namespace {

const char* const kPalette[] = {"#4e79a7", "#f28e2b", "#59a14d",
                                "#e15759", "#b07aa1", "#76b7b2"};
constexpr int kPaletteSize = 6;

std::string fmt(double v, const char* spec = "%.4g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

void write_mae_chart_svg(const std::string& path, const std::string& title,
                         const std::vector<MaeSummary>& rows) {
  if (rows.empty()) {
    throw std::invalid_argument("write_mae_chart_svg: no summary rows");
  }
  for (const MaeSummary& r : rows) {
    if (r.key.fringe_case != rows.front().key.fringe_case) {
      throw std::invalid_argument("write_mae_chart_svg: rows span multiple cases");
    }
  }

  // Series = distinct pipelines; slots = sigma levels.
  std::vector<std::pair<Prefilter, Estimator>> series;
  std::vector<double> sigmas;
  for (const MaeSummary& r : rows) {
    const std::pair<Prefilter, Estimator> s{r.key.prefilter, r.key.estimator};
    if (std::find(series.begin(), series.end(), s) == series.end()) series.push_back(s);
    if (std::find(sigmas.begin(), sigmas.end(), r.key.sigma) == sigmas.end()) {
      sigmas.push_back(r.key.sigma);
    }
  }
  std::sort(sigmas.begin(), sigmas.end());

  std::map<std::pair<int, int>, const MaeSummary*> cell;  // (series idx, sigma idx) -> row
  for (const MaeSummary& r : rows) {
    const auto si = static_cast<int>(
        std::find(series.begin(), series.end(),
                  std::pair<Prefilter, Estimator>{r.key.prefilter, r.key.estimator}) -
        series.begin());
    const auto xi = static_cast<int>(
        std::find(sigmas.begin(), sigmas.end(), r.key.sigma) - sigmas.begin());
    cell[{si, xi}] = &r;
  }

  double ymax = 0.0;
  for (const MaeSummary& r : rows) {
    if (r.n_ok > 0) ymax = std::max(ymax, std::max(r.q75, r.mae_median));
  }
  if (ymax <= 0.0) ymax = 1.0;
  ymax *= 1.08;

  const double width = 880.0;
  const double height = 440.0;
  const double left = 76.0;
  const double right = 20.0;
  const double top = 46.0;
  const double bottom = 58.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const auto x_slot = [&](int xi) {
    return left + plot_w * static_cast<double>(xi) / static_cast<double>(sigmas.size());
  };
  const double slot_w = plot_w / static_cast<double>(sigmas.size());
  const double group_pad = 0.15 * slot_w;
  const double bar_w = (slot_w - 2.0 * group_pad) / static_cast<double>(series.size());
  const auto y_of = [&](double v) { return top + plot_h * (1.0 - v / ymax); };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileFormatError("write_mae_chart_svg: cannot open '" + path + "' for writing");

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
         "text-anchor=\"middle\" fill=\"#222\">"
      << title << "</text>\n";

  // Horizontal grid and y labels.
  const int n_ticks = 5;
  for (int t = 0; t <= n_ticks; ++t) {
    const double v = ymax * static_cast<double>(t) / static_cast<double>(n_ticks);
    const double y = y_of(v);
    out << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + plot_w << "\" y2=\""
        << y << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << left - 8 << "\" y=\"" << y + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\" fill=\"#444\">"
        << fmt(v) << "</text>\n";
  }
  out << "<text x=\"18\" y=\"" << top + plot_h / 2
      << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#444\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 "
      << top + plot_h / 2 << ")\">median |error| (rad)</text>\n";

  // Bars, whiskers, x labels.
  for (std::size_t xi = 0; xi < sigmas.size(); ++xi) {
    const double gx = x_slot(static_cast<int>(xi));
    out << "<text x=\"" << gx + slot_w / 2 << "\" y=\"" << top + plot_h + 18
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" fill=\"#444\">"
        << fmt(sigmas[xi], "%.3g") << "</text>\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
      const auto it = cell.find({static_cast<int>(si), static_cast<int>(xi)});
      if (it == cell.end()) continue;
      const MaeSummary& r = *it->second;
      const double bx = gx + group_pad + static_cast<double>(si) * bar_w;
      const char* color = kPalette[si % kPaletteSize];
      if (r.n_ok == 0) {
        // Whole group failed: mark instead of a bar.
        out << "<text x=\"" << bx + bar_w / 2 << "\" y=\"" << top + plot_h - 4
            << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" fill=\""
            << color << "\">x</text>\n";
        continue;
      }
      const double y_med = y_of(std::min(r.mae_median, ymax));
      out << "<rect x=\"" << bx + 1 << "\" y=\"" << y_med << "\" width=\"" << bar_w - 2
          << "\" height=\"" << top + plot_h - y_med << "\" fill=\"" << color
          << "\" fill-opacity=\"0.85\"/>\n";
      const double cxm = bx + bar_w / 2;
      const double y_lo = y_of(std::min(r.q25, ymax));
      const double y_hi = y_of(std::min(r.q75, ymax));
      out << "<line x1=\"" << cxm << "\" y1=\"" << y_lo << "\" x2=\"" << cxm << "\" y2=\"" << y_hi
          << "\" stroke=\"#333\" stroke-width=\"1.2\"/>\n"
          << "<line x1=\"" << cxm - 3 << "\" y1=\"" << y_lo << "\" x2=\"" << cxm + 3 << "\" y2=\""
          << y_lo << "\" stroke=\"#333\" stroke-width=\"1.2\"/>\n"
          << "<line x1=\"" << cxm - 3 << "\" y1=\"" << y_hi << "\" x2=\"" << cxm + 3 << "\" y2=\""
          << y_hi << "\" stroke=\"#333\" stroke-width=\"1.2\"/>\n";
    }
  }

  // Axes.
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << top + plot_h << "\" stroke=\"#222\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
      << "\" y2=\"" << top + plot_h << "\" stroke=\"#222\"/>\n"
      << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 14
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
         "fill=\"#444\">noise level sigma</text>\n";

  // Legend.
  double ly = top + 6;
  for (std::size_t si = 0; si < series.size(); ++si) {
    const double lx = left + plot_w - 170;
    out << "<rect x=\"" << lx << "\" y=\"" << ly - 10 << "\" width=\"12\" height=\"12\" fill=\""
        << kPalette[si % kPaletteSize] << "\"/>\n"
        << "<text x=\"" << lx + 18 << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">"
        << prefilter_name(series[si].first) << " / " << estimator_name(series[si].second)
        << "</text>\n";
    ly += 18;
  }

  out << "</svg>\n";
  if (!out) throw FileFormatError("write_mae_chart_svg: write failed for '" + path + "'");
}

}  // namespace fringestep
