#include "debris/pixel_table.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "debris/error.hpp"
#include "debris/numeric.hpp"

namespace debris {
namespace {

constexpr std::string_view kMetaHeader = "pixel_id,source,scene_or_date,label,polymer,coverage_pct";

std::string header(bool with_indices) {
  std::string h(kMetaHeader);
  for (const auto& b : kBands) {
    h += ',';
    h += b.sentinel_code;
  }
  if (with_indices) {
    for (auto name : kIndexNames) {
      h += ',';
      h += name;
    }
  }
  return h;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cells;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": " + what);
}

double number_cell(std::string_view cell, std::size_t line_no, std::string_view column) {
  double v = 0.0;
  if (!parse_double(cell, v)) {
    parse_fail(line_no, "bad number '" + std::string(cell) + "' in " + std::string(column));
  }
  return v;
}

}  // namespace

void write_pixel_table(const Dataset& dataset, std::ostream& out) {
  bool with_indices = !dataset.empty();
  for (const auto& r : dataset.records) with_indices = with_indices && r.has_indices();
  out << header(with_indices) << '\n';
  std::string line;
  for (const auto& r : dataset.records) {
    line.clear();
    line += std::to_string(r.pixel_id);
    line += ',';
    line += to_string(r.source);
    line += ',';
    line += r.scene_or_date;
    line += ',';
    line += to_string(r.label);
    line += ',';
    if (r.polymer) line += to_string(*r.polymer);
    line += ',';
    if (r.coverage_pct) {
      line += format_double(*r.coverage_pct);
    } else if (r.coverage_partial) {
      line += "partial";
    }
    for (double v : r.bands) {
      line += ',';
      line += format_double(v);
    }
    if (with_indices) {
      for (const auto& v : *r.indices) {
        line += ',';
        if (v) line += format_double(*v);
      }
    }
    line += '\n';
    out << line;
  }
}

void write_pixel_table(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_pixel_table(dataset, out);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string to_pixel_table(const Dataset& dataset) {
  std::ostringstream out;
  write_pixel_table(dataset, out);
  return out.str();
}

Dataset parse_pixel_table(std::string_view text) {
  Dataset d;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool with_indices = false;
  std::size_t expected_cells = 0;

  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    ++line_no;
    return true;
  };

  std::string_view line;
  if (!next_line(line)) throw Error(ErrorKind::Parse, "empty pixel table");
  if (line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
  if (line == header(true)) {
    with_indices = true;
  } else if (line != header(false)) {
    auto cells = split(line);
    // A header that names the metadata but misses a band is a schema problem.
    if (line.starts_with(kMetaHeader)) {
      throw Error(ErrorKind::Schema, "pixel table header does not list B2..B12 in order");
    }
    throw Error(ErrorKind::Parse, "unexpected pixel table header (" +
                                      std::to_string(cells.size()) + " columns)");
  }
  expected_cells = 6 + kBandCount + (with_indices ? kIndexCount : 0);

  while (next_line(line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != expected_cells) {
      parse_fail(line_no, "expected " + std::to_string(expected_cells) + " cells, got " +
                              std::to_string(cells.size()));
    }
    PixelRecord r;
    {
      auto c = cells[0];
      auto res = std::from_chars(c.data(), c.data() + c.size(), r.pixel_id);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size()) {
        parse_fail(line_no, "bad pixel_id '" + std::string(c) + "'");
      }
    }
    auto source = source_from_name(cells[1]);
    if (!source) throw Error(ErrorKind::Schema, "line " + std::to_string(line_no) + ": bad source");
    r.source = *source;
    r.scene_or_date = std::string(cells[2]);
    auto label = class_from_name(cells[3]);
    if (!label) {
      throw Error(ErrorKind::Schema,
                  "line " + std::to_string(line_no) + ": bad label '" + std::string(cells[3]) + "'");
    }
    r.label = *label;
    if (!cells[4].empty()) {
      auto polymer = polymer_from_name(cells[4]);
      if (!polymer) {
        throw Error(ErrorKind::Schema, "line " + std::to_string(line_no) + ": bad polymer '" +
                                           std::string(cells[4]) + "'");
      }
      r.polymer = *polymer;
    }
    if (cells[5] == "partial") {
      r.coverage_partial = true;
    } else if (!cells[5].empty()) {
      r.coverage_pct = number_cell(cells[5], line_no, "coverage_pct");
    }
    for (std::size_t b = 0; b < kBandCount; ++b) {
      if (cells[6 + b].empty()) parse_fail(line_no, "missing band " + std::string(kBands[b].sentinel_code));
      r.bands[b] = number_cell(cells[6 + b], line_no, kBands[b].sentinel_code);
    }
    if (with_indices) {
      IndexVector iv;
      for (std::size_t i = 0; i < kIndexCount; ++i) {
        auto c = cells[6 + kBandCount + i];
        if (!c.empty()) iv[i] = number_cell(c, line_no, kIndexNames[i]);
      }
      r.indices = iv;
    }
    validate(r);
    d.records.push_back(std::move(r));
  }
  check_unique_ids(d);
  return d;
}

Dataset read_pixel_table(std::istream& in, std::string provenance) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Dataset d = parse_pixel_table(text);
  d.provenance = std::move(provenance);
  return d;
}

Dataset read_pixel_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_pixel_table(in, path.string());
}

}  // namespace debris
