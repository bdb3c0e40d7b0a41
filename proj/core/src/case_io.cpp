#include "cdh/case_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace cdh {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& field, std::size_t row, std::size_t col) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw std::runtime_error("row " + std::to_string(row) + ", column " + std::to_string(col) +
                             ": not a number: '" + field + "'");
  }
  return v;
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

CaseBase load_cases(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_cases: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_cases: " + path + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  if (header.size() < 3 || header[0] != "id" || header[1] != "label") {
    throw std::runtime_error("load_cases: " + path + ": header must be id,label,f0,...");
  }
  const std::size_t dim = header.size() - 2;
  for (std::size_t j = 0; j < dim; ++j) {
    if (header[j + 2] != "f" + std::to_string(j)) {
      throw std::runtime_error("load_cases: " + path + ": unexpected header column '" +
                               header[j + 2] + "'");
    }
  }

  std::vector<Case> cases;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != dim + 2) {
      throw std::runtime_error("load_cases: " + path + ": row " + std::to_string(row) + " has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(dim + 2));
    }
    Case c;
    c.id = fields[0];
    if (c.id.empty()) {
      throw std::runtime_error("load_cases: " + path + ": row " + std::to_string(row) +
                               ": empty id");
    }
    c.solution = parse_double(fields[1], row, 2);
    c.features.reserve(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      c.features.push_back(parse_double(fields[j + 2], row, j + 3));
    }
    cases.push_back(std::move(c));
  }
  if (cases.empty()) throw std::runtime_error("load_cases: " + path + ": no data rows");

  try {
    return CaseBase::from_cases(std::move(cases), dim);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error("load_cases: " + path + ": " + e.what());
  }
}

void save_cases(const CaseBase& cb, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_cases: cannot open " + path);
  out << "id,label";
  for (std::size_t j = 0; j < cb.feature_dim(); ++j) out << ",f" << j;
  out << '\n';
  for (const auto& c : cb.cases()) {
    out << c.id << ',' << format_double(c.solution);
    for (double f : c.features) out << ',' << format_double(f);
    out << '\n';
  }
  if (!out) throw std::runtime_error("save_cases: write failed for " + path);
}

}  // namespace cdh
