// Copyright 2026 The fidsus Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "fidsus/harness.hpp"

namespace fidsus {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double cell_value(const std::string& cell) {
  if (cell == "true") return 1.0;
  if (cell == "false") return 0.0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size())
    throw Error(ErrorCode::ParseError, "bad CSV cell '" + cell + "'");
  return v;
}

std::string fmt(const char* f, double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      t.header = split(line);
      first = false;
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != t.header.size())
      throw Error(ErrorCode::ParseError, "CSV row has " + std::to_string(cells.size()) +
                                             " cells, header has " +
                                             std::to_string(t.header.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(cell_value(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string render_svg(const CsvTable& table, const std::vector<std::string>& columns) {
  if (table.header.empty() || table.rows.empty()) throw Error(ErrorCode::EmptyData, "no data rows");
  if (columns.empty()) throw Error(ErrorCode::MissingColumn, "no columns requested");
  std::vector<std::size_t> idx;
  for (const auto& c : columns) {
    auto it = std::find(table.header.begin(), table.header.end(), c);
    if (it == table.header.end()) throw Error(ErrorCode::MissingColumn, "no column '" + c + "'");
    idx.push_back(static_cast<std::size_t>(it - table.header.begin()));
  }

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& r : table.rows) {
    x0 = std::min(x0, r[0]);
    x1 = std::max(x1, r[0]);
    for (std::size_t k : idx) {
      if (!std::isfinite(r[k])) continue;
      y0 = std::min(y0, r[k]);
      y1 = std::max(y1, r[k]);
    }
  }
  if (!std::isfinite(y0)) throw Error(ErrorCode::EmptyData, "no finite values to plot");
  if (x1 == x0) { x0 -= 1.0; x1 += 1.0; }
  if (y1 == y0) { y0 -= 1.0; y1 += 1.0; }

  const double w = 720, h = 440, left = 80, right = 170, top = 20, bottom = 50;
  const double pw = w - left - right, ph = h - top - bottom;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"720\" height=\"440\" "
       "viewBox=\"0 0 720 440\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"720\" height=\"440\" fill=\"white\"/>\n";
  const std::string axis = "stroke=\"black\" stroke-width=\"1\"";
  s += "<line x1=\"" + fmt("%.2f", left) + "\" y1=\"" + fmt("%.2f", top + ph) + "\" x2=\"" +
       fmt("%.2f", left + pw) + "\" y2=\"" + fmt("%.2f", top + ph) + "\" " + axis + "/>\n";
  s += "<line x1=\"" + fmt("%.2f", left) + "\" y1=\"" + fmt("%.2f", top) + "\" x2=\"" +
       fmt("%.2f", left) + "\" y2=\"" + fmt("%.2f", top + ph) + "\" " + axis + "/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double yv = y0 + (y1 - y0) * i / 4.0;
    const double px = sx(xv), py = sy(yv);
    s += "<line x1=\"" + fmt("%.2f", px) + "\" y1=\"" + fmt("%.2f", top + ph) + "\" x2=\"" +
         fmt("%.2f", px) + "\" y2=\"" + fmt("%.2f", top + ph + 5) + "\" " + axis + "/>\n";
    s += "<text x=\"" + fmt("%.2f", px) + "\" y=\"" + fmt("%.2f", top + ph + 20) +
         "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
         fmt("%.4g", xv) + "</text>\n";
    s += "<line x1=\"" + fmt("%.2f", left - 5) + "\" y1=\"" + fmt("%.2f", py) + "\" x2=\"" +
         fmt("%.2f", left) + "\" y2=\"" + fmt("%.2f", py) + "\" " + axis + "/>\n";
    s += "<text x=\"" + fmt("%.2f", left - 8) + "\" y=\"" + fmt("%.2f", py + 4) +
         "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
         fmt("%.4g", yv) + "</text>\n";
  }
  s += "<text x=\"" + fmt("%.2f", left + pw / 2) + "\" y=\"" + fmt("%.2f", h - 10) +
       "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" + table.header[0] +
       "</text>\n";

  for (std::size_t c = 0; c < idx.size(); ++c) {
    const char* color = kPalette[c % (sizeof kPalette / sizeof kPalette[0])];
    std::string pts;
    for (const auto& r : table.rows) {
      if (!std::isfinite(r[idx[c]])) continue;
      if (!pts.empty()) pts += ' ';
      pts += fmt("%.2f", sx(r[0])) + "," + fmt("%.2f", sy(r[idx[c]]));
    }
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
         "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    const double ly = top + 16 + 18 * static_cast<double>(c);
    s += "<line x1=\"" + fmt("%.2f", left + pw + 15) + "\" y1=\"" + fmt("%.2f", ly) + "\" x2=\"" +
         fmt("%.2f", left + pw + 40) + "\" y2=\"" + fmt("%.2f", ly) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + fmt("%.2f", left + pw + 46) + "\" y=\"" + fmt("%.2f", ly + 4) +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + columns[c] + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

void emit_plot(const std::string& csv_path, const std::vector<std::string>& columns,
               const std::string& svg_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + csv_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string svg = render_svg(parse_csv(buf.str()), columns);
  std::ofstream out(svg_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + svg_path);
  out << svg;
}

}  // namespace fidsus
