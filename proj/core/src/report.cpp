#include "cdh/report.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cdh {

namespace {

std::string format_mae(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string report_to_csv(const ExperimentReport& report) {
  std::string out = "setting,query_range,system,backend,fold,count,mae\n";
  for (const auto& row : report.rows) {
    out += row.setting;
    out += ',';
    out += row.query_range;
    out += ',';
    out += row.system;
    out += ',';
    out += row.backend;
    out += ',';
    out += row.fold < 0 ? "avg" : std::to_string(row.fold);
    out += ',';
    out += std::to_string(row.count);
    out += ',';
    if (row.mae) out += format_mae(*row.mae);
    out += '\n';
  }
  return out;
}

void emit_report(const ExperimentReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_report: cannot open " + path);
  out << report_to_csv(report);
  if (!out) throw std::runtime_error("emit_report: write failed for " + path);
}

ExperimentReport parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("parse_report: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "setting,query_range,system,backend,fold,count,mae") {
    throw std::runtime_error("parse_report: unexpected header: " + line);
  }
  ExperimentReport report;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 7) {
      throw std::runtime_error("parse_report: line " + std::to_string(lineno) +
                               ": expected 7 fields");
    }
    ReportRow row;
    row.setting = fields[0];
    row.query_range = fields[1];
    row.system = fields[2];
    row.backend = fields[3];
    try {
      row.fold = fields[4] == "avg" ? -1 : std::stoi(fields[4]);
      row.count = static_cast<std::size_t>(std::stoull(fields[5]));
      if (!fields[6].empty()) row.mae = std::stod(fields[6]);
    } catch (const std::exception&) {
      throw std::runtime_error("parse_report: line " + std::to_string(lineno) +
                               ": malformed numeric field");
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

ExperimentReport parse_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("parse_report: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_report_csv(buf.str());
}

void render_table(const ExperimentReport& report, std::ostream& out) {
  const char* headers[7] = {"setting", "range", "system", "backend", "fold", "count", "mae"};
  std::vector<std::array<std::string, 7>> cells;
  for (const auto& row : report.rows) {
    cells.push_back({row.setting, row.query_range, row.system, row.backend,
                     row.fold < 0 ? "avg" : std::to_string(row.fold), std::to_string(row.count),
                     row.mae ? format_mae(*row.mae) : "-"});
  }
  std::array<std::size_t, 7> width{};
  for (std::size_t c = 0; c < 7; ++c) width[c] = std::string(headers[c]).size();
  for (const auto& r : cells) {
    for (std::size_t c = 0; c < 7; ++c) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::array<std::string, 7>& r) {
    for (std::size_t c = 0; c < 7; ++c) {
      out << std::left << std::setw(static_cast<int>(width[c]) + 2) << r[c];
    }
    out << '\n';
  };
  line({headers[0], headers[1], headers[2], headers[3], headers[4], headers[5], headers[6]});
  for (const auto& r : cells) line(r);
}

}  // namespace cdh
