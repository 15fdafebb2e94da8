#include "nlw/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "nlw/errors.hpp"

namespace nlw {

namespace {

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  std::vector<std::uint8_t> out;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : bytes(b) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos++]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[pos++]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  void need(std::size_t k) const {
    if (pos + k > bytes.size()) throw InvalidInput("snapshot: truncated file");
  }

  const std::vector<std::uint8_t>& bytes;
  std::size_t pos = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const Trajectory& traj) {
  Writer w;
  const Grid& g = traj.grid();
  w.out.reserve(84 + traj.size() * (8 + 16 * g.n_points));
  for (char c : {'N', 'L', 'W', 'T'}) w.out.push_back(static_cast<std::uint8_t>(c));
  w.u32(kSnapshotVersion);
  w.f64(g.x_min);
  w.f64(g.x_max);
  w.f64(g.dx);
  w.u64(g.n_points);
  w.f64(traj.model().p);
  w.u32(traj.model().defocusing_on ? 1u : 0u);
  w.f64(traj.solver().cfl);
  w.f64(traj.solver().newton_tol);
  w.u32(static_cast<std::uint32_t>(traj.solver().newton_max_iter));
  w.u32(static_cast<std::uint32_t>(traj.solver().record_stride));
  w.u64(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    w.f64(traj.time(k));
    for (double v : traj.level0(k)) w.f64(v);
    for (double v : traj.level1(k)) w.f64(v);
  }
  return std::move(w.out);
}

Trajectory decode_snapshot(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  r.need(4);
  if (std::memcmp(bytes.data(), "NLWT", 4) != 0) throw InvalidInput("snapshot: bad magic");
  r.pos = 4;
  const std::uint32_t version = r.u32();
  if (version != kSnapshotVersion) {
    throw InvalidInput("snapshot: unsupported format version " + std::to_string(version));
  }
  Grid g;
  g.x_min = r.f64();
  g.x_max = r.f64();
  g.dx = r.f64();
  g.n_points = r.u64();
  if (g.n_points < 3 || !(g.dx > 0.0)) throw InvalidInput("snapshot: invalid grid descriptor");
  ModelParams model;
  model.p = r.f64();
  model.defocusing_on = r.u32() != 0;
  SolverParams solver;
  solver.cfl = r.f64();
  solver.newton_tol = r.f64();
  solver.newton_max_iter = static_cast<int>(r.u32());
  solver.record_stride = static_cast<int>(r.u32());
  const std::uint64_t frames = r.u64();
  const std::size_t n = g.n_points;
  if ((bytes.size() - r.pos) != frames * (8 + 16 * n)) throw InvalidInput("snapshot: frame payload size mismatch");

  Trajectory traj(g, model, solver);
  std::vector<double> a(n), b(n);
  for (std::uint64_t k = 0; k < frames; ++k) {
    const double t = r.f64();
    for (auto& v : a) v = r.f64();
    for (auto& v : b) v = r.f64();
    traj.append(t, a, b);
  }
  return traj;
}

void write_snapshot(const std::filesystem::path& path, const Trajectory& traj) {
  const auto bytes = encode_snapshot(traj);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("snapshot: cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw InvalidInput("snapshot: write failed for " + path.string());
}

Trajectory read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidInput("snapshot: cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace nlw
