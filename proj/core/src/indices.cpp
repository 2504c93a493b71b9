#include "debris/indices.hpp"

namespace debris {
namespace {

std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

}  // namespace

IndexVector compute_indices(const BandVector& b) {
  const double b3 = b[index_of(MsiBand::Green)];
  const double b4 = b[index_of(MsiBand::Red)];
  const double b6 = b[index_of(MsiBand::RedEdge2)];
  const double b8 = b[index_of(MsiBand::NIR1)];
  const double b11 = b[index_of(MsiBand::SWIR1)];
  const double b12 = b[index_of(MsiBand::SWIR2)];

  IndexVector out;
  out[0] = ratio(b3 - b8, b3 + b8);
  out[1] = ratio(b3 + b4, b8 + b12);
  out[2] = ratio(b8 - b4, b8 + b4);
  out[3] = 4.0 * (b3 - b12) - 0.25 * b8 - 2.75 * b11;
  out[4] = ratio(b3 - b12, b4 + b12);
  out[5] = ratio(b8, b4);
  out[6] = ratio(b8, b8 + b4);
  out[7] = ratio(b4 - b8, b4 + b8);
  out[8] = b8 - (b6 + (b11 - b6) * kFdi.beta() * 10.0);
  return out;
}

PixelRecord compute_all(PixelRecord record) {
  record.indices = compute_indices(record.bands);
  return record;
}

Dataset compute_all(const Dataset& dataset) {
  Dataset out;
  out.provenance = dataset.provenance;
  out.records.reserve(dataset.records.size());
  for (const auto& r : dataset.records) out.records.push_back(compute_all(r));
  return out;
}

}  // namespace debris
