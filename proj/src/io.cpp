#include "sbp/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace sbp {

namespace {

// All scalars little-endian on disk; this code assumes a little-endian host.
static_assert(sizeof(double) == 8);

void put_u32(std::ostream& os, uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void put_f64(std::ostream& os, double v) { os.write(reinterpret_cast<const char*>(&v), 8); }

uint32_t get_u32(std::istream& is) {
  uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}
double get_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

}  // namespace

void write_field(const std::string& path, const ScalarField& u) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write("BPF1", 4);
  put_u32(os, static_cast<uint32_t>(u.grid.n));
  put_u32(os, static_cast<uint32_t>(u.grid.n));
  put_u32(os, static_cast<uint32_t>(u.grid.n));
  put_f64(os, u.grid.L);
  os.write(reinterpret_cast<const char*>(u.values.data()),
           static_cast<std::streamsize>(u.values.size() * 8));
  if (!os) throw IoError("write failed: " + path);
}

ScalarField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open for reading: " + path);
  char magic[4] = {};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "BPF1", 4) != 0) throw FormatError("bad magic in " + path);
  const uint32_t nx = get_u32(is), ny = get_u32(is), nz = get_u32(is);
  const double L = get_f64(is);
  if (!is) throw FormatError("truncated header in " + path);
  if (nx != ny || ny != nz) throw FormatError("non-cubic dims in " + path);
  GridSpec g(static_cast<int>(nx), L);
  ScalarField u(g);
  is.read(reinterpret_cast<char*>(u.values.data()),
          static_cast<std::streamsize>(u.values.size() * 8));
  if (is.gcount() != static_cast<std::streamsize>(u.values.size() * 8))
    throw FormatError("truncated payload in " + path);
  return u;
}

}  // namespace sbp
