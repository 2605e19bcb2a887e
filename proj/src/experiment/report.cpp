/*
 * Copyright 2026 The CoAX Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "coax/experiment/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "coax/common/error.hpp"
#include "coax/common/jsonl.hpp"

namespace coax::experiment {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 70.0;
const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string Fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string Escape(const std::string& text) {
  std::string out;
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
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

double PlotY(double v) {
  const double h = kHeight - kTop - kBottom;
  return kTop + h * (1.0 - std::clamp(v, 0.0, 1.0));
}

void Frame(std::ostringstream& svg, const std::string& title) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << Escape(title) << "</text>\n";
  for (int i = 0; i <= 10; i += 2) {
    const double v = i / 10.0, y = PlotY(v);
    svg << "<line x1=\"" << kLeft << "\" x2=\"" << kWidth - kRight << "\" y1=\"" << y
        << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
        << Fmt(v, 1) << "</text>\n";
  }
  svg << "<text x=\"14\" y=\"" << (kTop + kHeight - kBottom) / 2
      << "\" transform=\"rotate(-90 14 " << (kTop + kHeight - kBottom) / 2
      << ")\" text-anchor=\"middle\">correctness</text>\n";
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

std::string CsvCell(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void WriteCsv(const std::filesystem::path& path, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << CsvCell(cells[i]);
    out << "\n";
  };
  line(header);
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw ShapeError("CSV row width differs from header");
    line(row);
  }
  WriteText(path, out.str());
}

std::string BarChartSvg(const std::string& title, const std::vector<Bar>& bars) {
  std::ostringstream svg;
  Frame(svg, title);
  const double slot = (kWidth - kLeft - kRight) / std::max<size_t>(bars.size(), 1);
  for (size_t i = 0; i < bars.size(); ++i) {
    const Bar& b = bars[i];
    const double x = kLeft + slot * i + slot * 0.15, w = slot * 0.7;
    const double base = PlotY(0.0), top = PlotY(b.mean);
    svg << "<rect x=\"" << x << "\" y=\"" << top << "\" width=\"" << w << "\" height=\""
        << base - top << "\" fill=\"" << kPalette[i % 8] << "\"/>\n";
    const double cx = x + w / 2;
    const double lo = PlotY(b.mean - b.half_width), hi = PlotY(b.mean + b.half_width);
    svg << "<line x1=\"" << cx << "\" x2=\"" << cx << "\" y1=\"" << lo << "\" y2=\"" << hi
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << cx << "\" y=\"" << hi - 4 << "\" text-anchor=\"middle\">"
        << Fmt(b.mean) << (b.annotation.empty() ? "" : " " + Escape(b.annotation))
        << "</text>\n";
    svg << "<text x=\"" << cx << "\" y=\"" << base + 16 << "\" text-anchor=\"middle\">"
        << Escape(b.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string LineChartSvg(const std::string& title, const std::string& x_name,
                         const std::vector<Series>& series,
                         const std::vector<std::string>& x_labels) {
  std::ostringstream svg;
  Frame(svg, title);
  double x_lo = 0.0, x_hi = 1.0;
  bool first = true;
  for (const auto& s : series) {
    for (double x : s.x) {
      x_lo = first ? x : std::min(x_lo, x);
      x_hi = first ? x : std::max(x_hi, x);
      first = false;
    }
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  const double plot_w = kWidth - kLeft - kRight - 140.0;
  auto px = [&](double x) { return kLeft + 10.0 + plot_w * (x - x_lo) / (x_hi - x_lo); };
  std::vector<double> ticks;
  for (const auto& s : series) ticks.insert(ticks.end(), s.x.begin(), s.x.end());
  std::sort(ticks.begin(), ticks.end());
  ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
  for (size_t i = 0; i < ticks.size(); ++i) {
    const std::string label = i < x_labels.size() ? x_labels[i] : Fmt(ticks[i], 0);
    svg << "<text x=\"" << px(ticks[i]) << "\" y=\"" << PlotY(0.0) + 16
        << "\" text-anchor=\"middle\">" << Escape(label) << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + 10.0 + plot_w / 2 << "\" y=\"" << kHeight - 20
      << "\" text-anchor=\"middle\">" << Escape(x_name) << "</text>\n";
  for (size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = kPalette[k % 8];
    std::ostringstream band_top, band_bottom, line;
    for (size_t i = 0; i < s.x.size(); ++i) {
      band_top << px(s.x[i]) << "," << PlotY(s.mean[i] + s.half_width[i]) << " ";
      line << px(s.x[i]) << "," << PlotY(s.mean[i]) << " ";
    }
    for (size_t i = s.x.size(); i-- > 0;) {
      band_bottom << px(s.x[i]) << "," << PlotY(s.mean[i] - s.half_width[i]) << " ";
    }
    svg << "<polygon points=\"" << band_top.str() << band_bottom.str() << "\" fill=\""
        << color << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    svg << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    const double ly = kTop + 16.0 * k;
    svg << "<rect x=\"" << kWidth - 145 << "\" y=\"" << ly << "\" width=\"10\" height=\"10\" fill=\""
        << color << "\"/>\n";
    svg << "<text x=\"" << kWidth - 130 << "\" y=\"" << ly + 9 << "\">" << Escape(s.name)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void WriteConditionReport(const std::filesystem::path& dir, const std::string& stem,
                          const ConditionStudy& study) {
  std::filesystem::create_directories(dir);
  std::vector<std::vector<std::string>> rows;
  std::vector<Bar> bars;
  std::vector<Json> raw;
  for (size_t i = 0; i < study.cells.size(); ++i) {
    const CellResult& c = study.cells[i];
    const std::string letters = i < study.tukey.letters.size() ? study.tukey.letters[i] : "";
    rows.push_back({c.name, std::to_string(c.ci.n), Fmt(c.ci.mean, 4),
                    Fmt(c.ci.half_width, 4), letters});
    bars.push_back({c.name, c.ci.mean, c.ci.half_width, letters});
    raw.push_back(ToJson(c));
  }
  WriteCsv(dir / (stem + ".csv"), {"condition", "n", "mean", "ci95", "tukey"}, rows);
  WriteJsonLines(dir / (stem + ".jsonl"), raw);
  WriteText(dir / (stem + ".svg"), BarChartSvg(stem, bars));
}

void WriteSweepReport(const std::filesystem::path& dir, const std::string& stem,
                      const SweepStudy& study, const std::vector<std::string>& x_labels) {
  std::filesystem::create_directories(dir);
  std::vector<std::vector<std::string>> rows;
  std::vector<Json> raw;
  std::vector<ConditionCell> order;
  for (const auto& c : study.cells) {
    rows.push_back({study.iv_name, Fmt(c.iv, 0), c.name, c.explainer,
                    std::to_string(c.ci.n), Fmt(c.ci.mean, 4), Fmt(c.ci.half_width, 4)});
    raw.push_back(ToJson(c));
    if (std::find(order.begin(), order.end(), c.cell) == order.end()) order.push_back(c.cell);
  }
  std::vector<Series> series;
  for (const auto& cell : order) {
    Series s;
    s.name = CellName(cell);
    for (const CellResult* c : study.Series(cell)) {
      s.x.push_back(c->iv);
      s.mean.push_back(c->ci.mean);
      s.half_width.push_back(c->ci.half_width);
    }
    series.push_back(std::move(s));
  }
  WriteCsv(dir / (stem + ".csv"),
           {"iv", "value", "condition", "explainer", "n", "mean", "ci95"}, rows);
  WriteJsonLines(dir / (stem + ".jsonl"), raw);
  WriteText(dir / (stem + ".svg"), LineChartSvg(stem, study.iv_name, series, x_labels));
}

void WriteTrendReport(const std::filesystem::path& dir, const std::string& stem,
                      const TrendStudy& trend) {
  std::filesystem::create_directories(dir);
  std::vector<std::vector<std::string>> rows;
  for (size_t b = 0; b < trend.bin_centers.size(); ++b) {
    rows.push_back({ToString(trend.parameter), Fmt(trend.bin_centers[b], 4),
                    Fmt(trend.bin_means[b], 4)});
  }
  WriteCsv(dir / (stem + ".csv"), {"parameter", "bin_center", "mean"}, rows);
  WriteJsonLines(dir / (stem + ".jsonl"), {ToJson(trend)});
  Series s{ToString(trend.parameter), trend.bin_centers, trend.bin_means,
           std::vector<double>(trend.bin_means.size(), 0.0)};
  std::vector<std::string> labels;
  for (double c : trend.bin_centers) labels.push_back(Fmt(c, 2));
  WriteText(dir / (stem + ".svg"),
            LineChartSvg(stem + " (spearman " + Fmt(trend.spearman) + ")",
                         ToString(trend.parameter), {s}, labels));
}

}  // namespace coax::experiment
