#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "porolb/lattice.hpp"

namespace porolb {

enum class CellFlag : std::uint8_t { Fluid = 0, Solid = 1, Wall = 2 };

struct Dims {
  int nx = 0, ny = 0, nz = 0;
  std::int64_t cells() const {
    return static_cast<std::int64_t>(nx) * ny * nz;
  }
  std::int64_t index(int x, int y, int z) const {
    return (static_cast<std::int64_t>(z) * ny + y) * nx + x;
  }
  bool operator==(const Dims&) const = default;
};

using PeriodicAxes = std::array<bool, 3>;

/// Double-buffered population storage, SoA per direction (k-major), plus
/// per-cell flags. Populations use the fluctuation convention: f holds
/// deviations from the rest state, sum f = delta_rho.
class LatticeField {
 public:
  LatticeField() = default;
  LatticeField(Dims dims, std::vector<std::uint8_t> flags)
      : dims_(dims),
        flags_(std::move(flags)),
        cur_(static_cast<std::size_t>(kQ) * dims.cells(), 0.0),
        nxt_(static_cast<std::size_t>(kQ) * dims.cells(), 0.0) {}

  const Dims& dims() const { return dims_; }
  std::int64_t cells() const { return dims_.cells(); }

  CellFlag flag(std::int64_t cell) const {
    return static_cast<CellFlag>(flags_[static_cast<std::size_t>(cell)]);
  }
  bool is_fluid(std::int64_t cell) const { return flag(cell) == CellFlag::Fluid; }
  const std::vector<std::uint8_t>& flags() const { return flags_; }

  double* cur(int k) { return cur_.data() + static_cast<std::size_t>(k) * cells(); }
  const double* cur(int k) const { return cur_.data() + static_cast<std::size_t>(k) * cells(); }
  double* next(int k) { return nxt_.data() + static_cast<std::size_t>(k) * cells(); }
  const double* next(int k) const { return nxt_.data() + static_cast<std::size_t>(k) * cells(); }

  Populations cell_populations(std::int64_t cell) const {
    Populations f;
    for (int k = 0; k < kQ; ++k) f[k] = cur(k)[cell];
    return f;
  }
  void set_cell_populations(std::int64_t cell, const Populations& f) {
    for (int k = 0; k < kQ; ++k) cur(k)[cell] = f[k];
  }

  void swap_buffers() { cur_.swap(nxt_); }

 private:
  Dims dims_;
  std::vector<std::uint8_t> flags_;
  std::vector<double> cur_, nxt_;
};

}  // namespace porolb
