#pragma once

#include <stdexcept>
#include <string>

namespace adlab {

/// A computed quantity broke an invariant the construction guarantees
/// (energy balance, non-finite values, interleaving of viscosities, ...).
/// The CLI maps this to exit code 2.
class InvariantError : public std::runtime_error {
 public:
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

/// The grid cannot resolve the finest active shear frequency. Exit code 3.
class ResolutionError : public std::runtime_error {
 public:
  explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace adlab
