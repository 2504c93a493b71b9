#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "debris/model.hpp"

namespace golden {

struct IndexCase {
  std::string name;
  debris::BandVector bands{};
  std::vector<std::optional<double>> expected;  // nine entries, nullopt = undefined
};

inline std::vector<IndexCase> load_index_cases(const std::string& path) {
  std::ifstream in(path);
  std::vector<IndexCase> out;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    IndexCase c;
    c.name = cells.at(0);
    for (std::size_t b = 0; b < debris::kBandCount; ++b) c.bands[b] = std::stod(cells.at(1 + b));
    for (std::size_t i = 0; i < debris::kIndexCount; ++i) {
      const auto& t = cells.at(1 + debris::kBandCount + i);
      c.expected.push_back(t.empty() ? std::nullopt : std::optional<double>(std::stod(t)));
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline bool close_rel(double got, double want, double rel = 1e-9) {
  return std::abs(got - want) <= rel * std::abs(want) + 1e-15;
}

}  // namespace golden
