#include "stancesim/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "stancesim/errors.hpp"

namespace stancesim {

void write_csv(const SimResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw IoError("cannot open " + path + " for writing");

  for (std::size_t c = 0; c < kResultColumnCount; ++c) {
    if (c) out << ',';
    out << kResultColumnNames[c];
  }
  out << '\n';

  char buf[64];
  const std::size_t n = result.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < kResultColumnCount; ++c) {
      if (c) out << ',';
      // 15 decimals in plain notation round-trips every signal the guard
      // allows (|x| <= 1e6) well inside 1e-12.
      std::snprintf(buf, sizeof buf, "%.15f", result_column(result, c)[i]);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

CsvData read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  CsvData data;
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) data.header.push_back(cell);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(data.header.size());
    std::stringstream rs(line);
    while (std::getline(rs, cell, ',')) row.push_back(std::stod(cell));
    data.rows.push_back(std::move(row));
  }
  return data;
}

}  // namespace stancesim
