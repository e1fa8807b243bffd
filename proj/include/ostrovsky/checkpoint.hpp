#pragma once

#include <cstdint>
#include <filesystem>

#include "ostrovsky/norms.hpp"

namespace ostrovsky {

/// Binary trajectory layout (little-endian):
///   char[8] "OSTRTRJ1", u32 version, u32 n, f64 L, i32 sign (+1/-1), f64 s,
///   f64 dt, f64 T, u64 slices, then per slice f64 t and n (re, im) f64 pairs
///   of spectral coefficients in FFT order.
/// A JSON sidecar `<path>.json` records the same header and the shapes.
inline constexpr std::uint32_t checkpoint_version = 1;

struct Checkpoint {
  Trajectory trajectory;
  double s = 0.0;
};

/// Writes both files atomically.
void write_checkpoint(const std::filesystem::path& path, const Trajectory& traj, double s);

/// Reads and validates a checkpoint; throws IoError on any mismatch.
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace ostrovsky
