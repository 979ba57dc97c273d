#pragma once

#include <string>
#include <vector>

#include "stancesim/sim.hpp"

namespace stancesim {

// Writes the fixed 18-column header and one row per sample, plain decimal
// notation, LF line endings. Throws IoError on filesystem failures.
void write_csv(const SimResult& result, const std::string& path);

struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvData read_csv(const std::string& path);

}  // namespace stancesim
