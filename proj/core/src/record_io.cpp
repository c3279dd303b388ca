#include "aiofl/record_io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "aiofl/presets.hpp"

namespace aiofl {

namespace {

// Column order of kRecordCsvHeader.
template <class Record>
auto columns(Record& rec) {
  std::vector<decltype(&rec.t)> cols = {&rec.t, &rec.r, &rec.r1, &rec.r2,
                                        &rec.y, &rec.y_meas, &rec.u, &rec.v};
  for (auto& c : rec.xi) cols.push_back(&c);
  for (auto& c : rec.x) cols.push_back(&c);
  return cols;
}

}  // namespace

void write_csv(const RunRecord& rec, std::ostream& out) {
  const auto cols = columns(rec);
  out << kRecordCsvHeader << '\n';
  std::string line;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    line.clear();
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) line += ',';
      line += format_number((*cols[c])[i]);
    }
    line += '\n';
    out << line;
  }
}

RunRecord read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRecordCsvHeader) {
    throw ConfigError("record csv: unexpected header");
  }
  RunRecord rec;
  auto cols = columns(rec);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::size_t start = 0;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto comma = line.find(',', start);
      const bool last = c + 1 == cols.size();
      if (last != (comma == std::string::npos)) {
        throw ConfigError("record csv: row " + std::to_string(row) + " has the wrong width");
      }
      const std::string_view cell =
          std::string_view(line).substr(start, last ? std::string::npos : comma - start);
      cols[c]->push_back(parse_number(cell, "record csv cell"));
      start = comma + 1;
    }
  }
  return rec;
}

std::string metrics_text(const MetricsReport& m) {
  return "itae=" + format_number(m.itae) + "\nisu=" + format_number(m.isu) +
         "\niau=" + format_number(m.iau) + "\nopi=" + format_number(m.opi) + "\n";
}

std::string svg_plot(const std::vector<double>& t,
                     const std::vector<std::pair<SeriesStyle, const std::vector<double>*>>& series,
                     std::string_view title, std::string_view y_label) {
  constexpr double width = 800, height = 400;
  constexpr double left = 70, right = 20, top = 40, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double t_min = t.empty() ? 0.0 : t.front();
  double t_max = t.empty() ? 1.0 : t.back();
  if (t_max <= t_min) t_max = t_min + 1.0;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& [style, values] : series) {
    for (double v : *values) {
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  if (!std::isfinite(lo)) lo = -1.0, hi = 1.0;
  if (hi <= lo) lo -= 1.0, hi += 1.0;
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  auto sx = [&](double v) { return left + (v - t_min) / (t_max - t_min) * plot_w; };
  auto sy = [&](double v) { return top + (hi - v) / (hi - lo) * plot_h; };

  std::ostringstream svg;
  svg.precision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double tv = t_min + (t_max - t_min) * k / 5.0;
    const double yv = lo + (hi - lo) * k / 5.0;
    svg << "<text x=\"" << sx(tv) << "\" y=\"" << height - bottom + 18
        << "\" text-anchor=\"middle\">" << tv << "</text>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">"
        << yv << "</text>\n";
  }
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">time (s)</text>\n";
  svg << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" transform=\"rotate(-90 16 "
      << top + plot_h / 2 << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";

  // Decimate to at most ~2000 vertices per series.
  const std::size_t stride = std::max<std::size_t>(1, t.size() / 2000);
  double legend_y = top + 16;
  for (const auto& [style, values] : series) {
    svg << "<polyline fill=\"none\" stroke=\"" << style.color << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < t.size() && i < values->size(); i += stride) {
      const double v = (*values)[i];
      if (!std::isfinite(v)) continue;
      svg << sx(t[i]) << ',' << sy(v) << ' ';
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << left + plot_w - 8 << "\" y=\"" << legend_y << "\" text-anchor=\"end\" fill=\""
        << style.color << "\">" << style.label << "</text>\n";
    legend_y += 16;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace aiofl
