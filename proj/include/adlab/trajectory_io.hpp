#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "adlab/scalarsolver.hpp"

namespace adlab::io {

/// Binary checkpoint file: 32-byte header ("ADLB", u32 version = 1, u64 n,
/// u64 count, 8 reserved bytes) followed by count row-major n x n blocks of
/// little-endian f64. A row is fixed x2.
inline constexpr unsigned kTrajectoryVersion = 1;

void write_trajectory(const std::filesystem::path& path, const solver::Trajectory& traj);

struct LoadedTrajectory {
  int n = 0;
  std::vector<ScalarField> fields;
  std::vector<double> times;  ///< from the CSV sidecar when present, else 0, 1, 2, ...
  std::vector<double> cumulative_dissipation;  ///< from the sidecar, empty otherwise
};

/// Throws std::runtime_error with the path on malformed input.
LoadedTrajectory read_trajectory(const std::filesystem::path& path);

/// CSV rows of (t, L2, Linf, grad_L2, cumulative_dissipation).
std::string sidecar_csv(const solver::Trajectory& traj);

/// Sidecar path for a binary file: same name with ".csv" appended.
std::filesystem::path sidecar_path(const std::filesystem::path& bin);

/// Writes text, creating parent directories; errors carry the path.
void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace adlab::io
