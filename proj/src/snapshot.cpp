#include "nlslab/snapshot.hpp"

#include <cstring>
#include <fstream>

namespace nlslab {

namespace {

constexpr unsigned char kMagic[4] = {0x4E, 0x4C, 0x53, 0x46};
constexpr std::uint32_t kVersion = 1;

// The format is little-endian; this code targets little-endian hosts and
// writes native f64/u32 directly.
template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void write_nlsf(const std::string& path, const SpectralField& f,
                double timestamp) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error("nlsf: cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(kMagic), 4);
  put(out, kVersion);
  put(out, static_cast<std::uint8_t>(f.grid().d));
  put(out, static_cast<std::uint32_t>(f.grid().m));
  put(out, f.grid().half_len);
  put(out, timestamp);
  const auto& v = f.values();
  for (const cplx& z : v) {
    put(out, z.real());
    put(out, z.imag());
  }
  if (!out) throw validation_error("nlsf: write failed: " + path);
}

NlsfSnapshot read_nlsf(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("nlsf: cannot open: " + path);
  unsigned char magic[4];
  in.read(reinterpret_cast<char*>(magic), 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw validation_error("nlsf: bad magic: " + path);
  auto version = take<std::uint32_t>(in);
  if (version != kVersion) throw validation_error("nlsf: unsupported version");
  int d = take<std::uint8_t>(in);
  int m = static_cast<int>(take<std::uint32_t>(in));
  double half_len = take<double>(in);
  double timestamp = take<double>(in);
  GridSpec grid = GridSpec::make(d, m, half_len);
  std::vector<cplx> values(grid.size());
  for (auto& z : values) {
    double re = take<double>(in);
    double im = take<double>(in);
    z = cplx(re, im);
  }
  if (!in) throw validation_error("nlsf: truncated file: " + path);
  return NlsfSnapshot{SpectralField::from_values(std::move(grid), std::move(values)),
                      timestamp};
}

}  // namespace nlslab
