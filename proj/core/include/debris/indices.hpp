#pragma once

#include "debris/bands.hpp"
#include "debris/model.hpp"

namespace debris {

// Band-centre spacing term of the floating debris index, from the NIR1, Red
// and SWIR1 central wavelengths.
struct FdiConstants {
  double lambda_nir = info(MsiBand::NIR1).central_wavelength_nm;
  double lambda_red = info(MsiBand::Red).central_wavelength_nm;
  double lambda_swir1 = info(MsiBand::SWIR1).central_wavelength_nm;

  constexpr double beta() const {
    return (lambda_nir - lambda_red) / (lambda_swir1 - lambda_red);
  }
};

inline constexpr FdiConstants kFdi{};

// The nine indices; an entry is nullopt exactly when its denominator is zero.
// AWEI and FDI have no denominator and are always defined.
//
//   NDWI  = (B3 - B8) / (B3 + B8)        WRI   = (B3 + B4) / (B8 + B12)
//   NDVI  = (B8 - B4) / (B8 + B4)        AWEI  = 4 (B3 - B12) - 0.25 B8 - 2.75 B11
//   MNDWI = (B3 - B12) / (B4 + B12)      SR    = B8 / B4
//   PI    = B8 / (B8 + B4)               RNDVI = (B4 - B8) / (B4 + B8)
//   FDI   = B8 - (B6 + (B11 - B6) * beta * 10)
IndexVector compute_indices(const BandVector& bands);

PixelRecord compute_all(PixelRecord record);
Dataset compute_all(const Dataset& dataset);

}  // namespace debris
