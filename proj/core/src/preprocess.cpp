#include "debris/preprocess.hpp"

#include "debris/error.hpp"
#include "debris/pixel_table.hpp"
#include "json_util.hpp"

namespace debris {

CleanResult clean(const Dataset& dataset) {
  CleanResult out;
  out.dataset.provenance = dataset.provenance;
  out.dataset.records.reserve(dataset.size());
  for (const auto& r : dataset.records) {
    if (!r.has_indices()) {
      throw Error(ErrorKind::NotIndexed, "pixel " + std::to_string(r.pixel_id) + " has no indices");
    }
  }
  for (const auto& r : dataset.records) {
    if (r.all_indices_defined()) {
      out.dataset.records.push_back(r);
    } else {
      ++out.report.dropped_total;
      ++out.report.dropped_by_class[static_cast<std::size_t>(r.label)];
    }
  }
  out.report.retained = out.dataset.size();
  return out;
}

std::string to_json(const CleanReport& report) {
  detail::Json by_class = detail::Json::object();
  for (auto c : kAllClasses) {
    by_class[std::string(to_string(c))] = report.dropped_by_class[static_cast<std::size_t>(c)];
  }
  detail::Json j{{"dropped_total", report.dropped_total},
                 {"dropped_by_class", by_class},
                 {"retained", report.retained}};
  return detail::dump(j);
}

Dataset ingest_pixel_table(const std::filesystem::path& path) {
  Dataset d = read_pixel_table(path);
  for (auto& r : d.records) {
    r.source = Source::Observed;
    validate(r);
  }
  return d;
}

Dataset merge(std::span<const Dataset> datasets, bool remap_ids) {
  Dataset out;
  std::size_t total = 0;
  for (const auto& d : datasets) total += d.size();
  out.records.reserve(total);
  for (const auto& d : datasets) {
    if (!d.provenance.empty()) {
      if (!out.provenance.empty()) out.provenance += " + ";
      out.provenance += d.provenance;
    }
    out.records.insert(out.records.end(), d.records.begin(), d.records.end());
  }
  if (remap_ids) {
    std::int64_t next = 0;
    for (auto& r : out.records) r.pixel_id = next++;
  } else {
    check_unique_ids(out);
  }
  return out;
}

}  // namespace debris
