#include "debris/raster.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "debris/error.hpp"
#include "debris/numeric.hpp"

namespace debris {

Raster make_raster(MsiBand band, std::uint32_t width, std::uint32_t height,
                   std::uint16_t resolution_m) {
  if (width == 0 || height == 0) throw Error(ErrorKind::ShapeMismatch, "raster with zero extent");
  if (static_cast<std::uint64_t>(width) * height > (std::uint64_t{1} << 31)) {
    throw Error(ErrorKind::ShapeMismatch, "raster too large");
  }
  if (resolution_m != 10 && resolution_m != 20) {
    throw Error(ErrorKind::Resolution, "resolution must be 10 or 20 m");
  }
  Raster r;
  r.band = band;
  r.width = width;
  r.height = height;
  r.resolution_m = resolution_m;
  r.values.assign(static_cast<std::size_t>(width) * height, 0.0f);
  return r;
}

std::string_view to_string(Resampler method) {
  switch (method) {
    case Resampler::Nearest: return "nearest";
    case Resampler::Bilinear: return "bilinear";
    case Resampler::Cubic: return "cubic";
  }
  return "bilinear";
}

Resampler resampler_from_name(std::string_view name) {
  for (auto m : {Resampler::Nearest, Resampler::Bilinear, Resampler::Cubic}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorKind::Config, "unknown resampler '" + std::string(name) + "'");
}

namespace {

// Source taps and weights for one output coordinate along an axis of n cells.
struct Taps {
  std::array<std::uint32_t, 4> index{};
  std::array<double, 4> weight{};
  int count = 0;
};

std::uint32_t clamp_index(std::int64_t i, std::uint32_t n) {
  return static_cast<std::uint32_t>(std::clamp<std::int64_t>(i, 0, n - 1));
}

Taps taps_for(std::uint32_t out, std::uint32_t n, Resampler method) {
  Taps t;
  const double s = (out + 0.5) / 2.0 - 0.5;
  const auto i0 = static_cast<std::int64_t>(std::floor(s));
  const double f = s - static_cast<double>(i0);
  switch (method) {
    case Resampler::Nearest:
      t.count = 1;
      t.index[0] = out / 2;
      t.weight[0] = 1.0;
      break;
    case Resampler::Bilinear:
      t.count = 2;
      t.index = {clamp_index(i0, n), clamp_index(i0 + 1, n), 0, 0};
      t.weight = {1.0 - f, f, 0.0, 0.0};
      break;
    case Resampler::Cubic: {
      const double f2 = f * f, f3 = f2 * f;
      t.count = 4;
      t.index = {clamp_index(i0 - 1, n), clamp_index(i0, n), clamp_index(i0 + 1, n),
                 clamp_index(i0 + 2, n)};
      t.weight = {(-f3 + 2 * f2 - f) / 2, (3 * f3 - 5 * f2 + 2) / 2, (-3 * f3 + 4 * f2 + f) / 2,
                  (f3 - f2) / 2};
      break;
    }
  }
  return t;
}

}  // namespace

Raster upsample_2x(const Raster& src, Resampler method) {
  if (src.resolution_m != 20) throw Error(ErrorKind::Resolution, "upsample_2x needs a 20 m raster");
  if (src.values.size() != static_cast<std::size_t>(src.width) * src.height) {
    throw Error(ErrorKind::ShapeMismatch, "raster value count does not match its extent");
  }
  const std::uint32_t w = src.width * 2, h = src.height * 2;
  Raster out = make_raster(src.band, w, h, 10);

  std::vector<Taps> cols(w), rows(h);
  for (std::uint32_t c = 0; c < w; ++c) cols[c] = taps_for(c, src.width, method);
  for (std::uint32_t r = 0; r < h; ++r) rows[r] = taps_for(r, src.height, method);

  // Horizontal pass over source rows, then vertical pass, both in double.
  std::vector<double> horiz(static_cast<std::size_t>(src.height) * w);
  for (std::uint32_t r = 0; r < src.height; ++r) {
    for (std::uint32_t c = 0; c < w; ++c) {
      const auto& t = cols[c];
      double acc = 0.0;
      for (int k = 0; k < t.count; ++k) acc += t.weight[k] * src.at(r, t.index[k]);
      horiz[static_cast<std::size_t>(r) * w + c] = acc;
    }
  }
  for (std::uint32_t r = 0; r < h; ++r) {
    const auto& t = rows[r];
    for (std::uint32_t c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int k = 0; k < t.count; ++k) acc += t.weight[k] * horiz[static_cast<std::size_t>(t.index[k]) * w + c];
      out.at(r, c) = static_cast<float>(acc);
    }
  }
  return out;
}

Raster round_to_4dp(const Raster& raster) {
  Raster out = raster;
  for (auto& v : out.values) v = round_to_4dp(v);
  return out;
}

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'M', 'D', 'R', 'S'};
constexpr std::uint16_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 2 + 2 + 4 + 4 + 2;

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

template <typename T>
T get_le(const std::uint8_t* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(p[i]) << (8 * i));
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_raster(const Raster& r) {
  if (r.values.size() != static_cast<std::size_t>(r.width) * r.height) {
    throw Error(ErrorKind::ShapeMismatch, "raster value count does not match its extent");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + r.values.size() * 4);
  for (auto b : kMagic) out.push_back(b);
  put_le<std::uint16_t>(out, kVersion);
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(index_of(r.band)));
  put_le<std::uint32_t>(out, r.width);
  put_le<std::uint32_t>(out, r.height);
  put_le<std::uint16_t>(out, r.resolution_m);
  for (float v : r.values) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

Raster decode_raster(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kHeaderBytes) throw Error(ErrorKind::Format, "raster shorter than its header");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw Error(ErrorKind::Format, "bad raster magic");
  }
  const auto* p = bytes.data();
  if (get_le<std::uint16_t>(p + 4) != kVersion) throw Error(ErrorKind::Format, "unsupported raster version");
  const auto code = get_le<std::uint16_t>(p + 6);
  if (code >= kBandCount) throw Error(ErrorKind::Format, "bad band code");
  const auto width = get_le<std::uint32_t>(p + 8);
  const auto height = get_le<std::uint32_t>(p + 12);
  const auto res = get_le<std::uint16_t>(p + 16);
  if (width == 0 || height == 0) throw Error(ErrorKind::Format, "raster with zero extent");
  const std::uint64_t count = static_cast<std::uint64_t>(width) * height;
  if (count > (std::uint64_t{1} << 31)) throw Error(ErrorKind::Format, "raster dimensions overflow");
  if (res != 10 && res != 20) throw Error(ErrorKind::Format, "bad resolution");
  if (bytes.size() != kHeaderBytes + count * 4) throw Error(ErrorKind::Format, "raster payload size mismatch");
  Raster r;
  r.band = static_cast<MsiBand>(code);
  r.width = width;
  r.height = height;
  r.resolution_m = res;
  r.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    r.values[i] = std::bit_cast<float>(get_le<std::uint32_t>(p + kHeaderBytes + 4 * i));
  }
  return r;
}

void write_raster(const Raster& raster, const std::filesystem::path& path) {
  const auto bytes = encode_raster(raster);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

Raster read_raster(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_raster(bytes);
}

}  // namespace debris
