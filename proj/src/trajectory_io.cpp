#include "adlab/trajectory_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace adlab::io {

namespace {

template <class T>
void put_le(std::ostream& out, T v) {
  std::array<unsigned char, sizeof(T)> b;
  std::memcpy(b.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  out.write(reinterpret_cast<const char*>(b.data()), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> b;
  in.read(reinterpret_cast<char*>(b.data()), sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  T v;
  std::memcpy(&v, b.data(), sizeof(T));
  return v;
}

std::runtime_error io_error(const std::filesystem::path& p, const std::string& what) {
  return std::runtime_error(p.string() + ": " + what);
}

}  // namespace

void write_trajectory(const std::filesystem::path& path, const solver::Trajectory& traj) {
  if (traj.fields.size() != traj.times.size())
    throw std::invalid_argument("trajectory has no stored fields to write");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error(path, "cannot open for writing");
  out.write("ADLB", 4);
  put_le<std::uint32_t>(out, kTrajectoryVersion);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(traj.n));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(traj.fields.size()));
  put_le<std::uint64_t>(out, 0);
  for (const auto& f : traj.fields)
    for (double v : f.values()) put_le<double>(out, v);
  if (!out) throw io_error(path, "write failed");
  write_text(sidecar_path(path), sidecar_csv(traj));
}

LoadedTrajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(path, "cannot open for reading");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "ADLB", 4) != 0) throw io_error(path, "not an ADLB trajectory file");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kTrajectoryVersion) throw io_error(path, "unsupported version " + std::to_string(version));
  const auto n = get_le<std::uint64_t>(in);
  const auto count = get_le<std::uint64_t>(in);
  get_le<std::uint64_t>(in);
  if (!in || n == 0 || n > (1u << 16)) throw io_error(path, "corrupt header");

  LoadedTrajectory out;
  out.n = static_cast<int>(n);
  for (std::uint64_t c = 0; c < count; ++c) {
    ScalarField f(out.n);
    for (double& v : f.values()) v = get_le<double>(in);
    if (!in) throw io_error(path, "truncated field data");
    out.fields.push_back(std::move(f));
  }

  std::ifstream side(sidecar_path(path));
  if (side) {
    std::string line;
    std::getline(side, line);
    while (std::getline(side, line)) {
      if (line.empty()) continue;
      std::istringstream row(line);
      std::string cell;
      std::vector<double> cells;
      while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
      if (cells.size() != 5) throw io_error(sidecar_path(path), "expected 5 columns");
      out.times.push_back(cells[0]);
      out.cumulative_dissipation.push_back(cells[4]);
    }
    if (out.times.size() != out.fields.size()) throw io_error(sidecar_path(path), "row count differs from field count");
  } else {
    for (std::uint64_t c = 0; c < count; ++c) out.times.push_back(static_cast<double>(c));
  }
  return out;
}

std::string sidecar_csv(const solver::Trajectory& traj) {
  std::ostringstream out;
  out << "t,L2,Linf,grad_L2,cumulative_dissipation\n";
  char buf[200];
  for (const auto& s : traj.stats) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.l2, s.linf, s.grad_l2,
                  s.cumulative_dissipation);
    out << buf;
  }
  return out.str();
}

std::filesystem::path sidecar_path(const std::filesystem::path& bin) {
  std::filesystem::path p = bin;
  p += ".csv";
  return p;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error(path, "cannot open for writing");
  out << content;
  if (!out) throw io_error(path, "write failed");
}

}  // namespace adlab::io
