#include <array>
#include <cstddef>

#include "debris/spectral_library.hpp"

namespace debris {
namespace {

struct DefaultCurve {
  const char* name;
  MaterialKind kind;
  std::array<double, 211> values;
};

#include "default_library_data.inc"

static_assert(kGridSize == 211);

SignatureLibrary build() {
  SignatureLibrary lib("builtin synthetic library v1 (not measured spectra)");
  for (const auto& curve : kDefaultCurves) {
    SpectralSignature sig{curve.name, curve.kind, {}};
    sig.samples.reserve(kGridSize);
    for (std::size_t i = 0; i < kGridSize; ++i) {
      sig.samples.push_back({kGridStartNm + kGridStepNm * static_cast<double>(i), curve.values[i]});
    }
    lib.add(std::move(sig));
  }
  return lib;
}

}  // namespace

const SignatureLibrary& builtin_default_library() {
  static const SignatureLibrary lib = build();
  return lib;
}

}  // namespace debris
