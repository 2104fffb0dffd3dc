#include "core/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace vtf {

namespace {

void put_le(std::ostream& os, double v) {
  std::uint64_t b;
  std::memcpy(&b, &v, 8);
  if constexpr (std::endian::native == std::endian::big) b = __builtin_bswap64(b);
  os.write(reinterpret_cast<const char*>(&b), 8);
}

double get_le(std::istream& is) {
  std::uint64_t b;
  is.read(reinterpret_cast<char*>(&b), 8);
  if constexpr (std::endian::native == std::endian::big) b = __builtin_bswap64(b);
  double v;
  std::memcpy(&v, &b, 8);
  return v;
}

}  // namespace

void write_snapshot(const ComplexField& u, const std::string& path) {
  validate(u);
  std::ofstream os(path, std::ios::binary);
  require(bool(os), Errc::io, "cannot open " + path + " for writing");
  std::ostringstream hdr;
  hdr.precision(17);
  hdr << "VTF1 " << u.grid.nodes_x() << ' ' << u.grid.nodes_y() << ' ' << u.grid.lx << ' ' << u.grid.ly << ' '
      << to_string(u.grid.bc) << '\n';
  os << hdr.str();
  for (const cplx& z : u.values) {
    put_le(os, z.real());
    put_le(os, z.imag());
  }
  require(bool(os), Errc::io, "write failed for " + path);
}

ComplexField read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(bool(is), Errc::io, "cannot open " + path);
  std::string line;
  std::getline(is, line);
  std::istringstream hs(line);
  std::string magic, bc;
  int mx = 0, my = 0;
  double lx = 0, ly = 0;
  hs >> magic >> mx >> my >> lx >> ly >> bc;
  require(magic == "VTF1" && !hs.fail(), Errc::io, "bad snapshot header in " + path);
  GridSpec g;
  g.bc = boundary_from_string(bc);
  const int off = g.bc == Boundary::periodic ? 0 : 1;
  g.nx = mx - off;
  g.ny = my - off;
  g.lx = lx;
  g.ly = ly;
  ComplexField u = make_field(g);
  for (cplx& z : u.values) {
    const double re = get_le(is);
    const double im = get_le(is);
    z = cplx(re, im);
  }
  require(bool(is), Errc::io, "truncated snapshot " + path);
  u.mass_target = mass(u);
  return u;
}

}  // namespace vtf
