#include "clab/solution_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace clab {

static_assert(std::endian::native == std::endian::little, "CLAB1 I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'C', 'L', 'A', 'B', '1', 0, 0, 0};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::string& out, T v) {
  char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  out.append(b, sizeof(T));
}

struct Reader {
  std::string_view s;
  std::size_t pos = 0;
  template <typename T>
  T get() {
    if (s.size() - pos < sizeof(T)) throw IoError("solution file is truncated");
    T v;
    std::memcpy(&v, s.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
  }
};

}  // namespace

void write_file_atomic(const std::string& path, std::string_view bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into " + path);
  }
}

std::string encode_solution(const SolutionField& u) {
  const Mesh& m = u.mesh;
  if (static_cast<std::size_t>(u.values.size()) != m.num_nodes()) throw ParameterError("values do not match the mesh");
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, 2);
  put<std::uint64_t>(out, m.num_nodes());
  put<std::uint64_t>(out, m.num_cells());
  for (const auto& p : m.nodes) {
    put(out, p.x());
    put(out, p.y());
  }
  for (Eigen::Index i = 0; i < u.values.size(); ++i) put(out, u.values[i]);
  for (const auto& c : m.cells)
    for (auto v : c) put<std::uint32_t>(out, v);
  for (Side s : m.side) put<std::uint8_t>(out, s == Side::Upper ? 1 : 0);
  for (auto b : m.on_boundary) put<std::uint8_t>(out, b);
  return out;
}

SolutionField decode_solution(std::string_view bytes) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw IoError("not a CLAB1 solution file");
  Reader r{bytes, sizeof(kMagic)};
  if (r.get<std::uint32_t>() != kVersion) throw IoError("unsupported CLAB1 version");
  if (r.get<std::uint32_t>() != 2) throw IoError("only two-dimensional solutions are supported");
  const auto nn = r.get<std::uint64_t>(), nc = r.get<std::uint64_t>();
  const std::uint64_t need = nn * 16 + nn * 8 + nc * 12 + nc + nn;
  if (nn == 0 || nc == 0 || nn > (1u << 30) || nc > (1u << 30) || bytes.size() - r.pos != need)
    throw IoError("solution file has inconsistent sizes");
  SolutionField u;
  Mesh& m = u.mesh;
  m.nodes.resize(nn);
  for (auto& p : m.nodes) {
    const double x = r.get<double>(), y = r.get<double>();
    p = Point2(x, y);
  }
  u.values.resize(static_cast<Eigen::Index>(nn));
  for (std::uint64_t i = 0; i < nn; ++i) u.values[static_cast<Eigen::Index>(i)] = r.get<double>();
  m.cells.resize(nc);
  for (auto& c : m.cells)
    for (auto& v : c) {
      v = r.get<std::uint32_t>();
      if (v >= nn) throw IoError("cell references a missing node");
    }
  m.side.resize(nc);
  for (auto& s : m.side) s = r.get<std::uint8_t>() ? Side::Upper : Side::Lower;
  m.on_boundary.resize(nn);
  for (auto& b : m.on_boundary) b = r.get<std::uint8_t>();
  return u;
}

void write_solution(const std::string& path, const SolutionField& u) { write_file_atomic(path, encode_solution(u)); }

SolutionField read_solution(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open solution file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return decode_solution(ss.str());
}

}  // namespace clab
