#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "nlw/integrator.hpp"

namespace nlw {

// Binary trajectory snapshot, all fields little-endian:
//
//   offset  type        field
//   0       char[4]     magic "NLWT"
//   4       u32         format version (kSnapshotVersion)
//   8       f64 f64 f64 grid x_min, x_max, dx
//   32      u64         grid n_points
//   40      f64         p
//   48      u32         defocusing_on (0/1)
//   52      f64         cfl
//   60      f64         newton_tol
//   68      u32         newton_max_iter
//   72      u32         record_stride
//   76      u64         frame count F
//   84      F frames:   f64 t, n_points f64 (level0), n_points f64 (level1)
//
// The energy series is recomputed on load from the stored levels, so a
// write/read round trip reproduces the trajectory bit for bit.
inline constexpr std::uint32_t kSnapshotVersion = 1;

std::vector<std::uint8_t> encode_snapshot(const Trajectory& traj);
Trajectory decode_snapshot(const std::vector<std::uint8_t>& bytes);

void write_snapshot(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_snapshot(const std::filesystem::path& path);

}  // namespace nlw
