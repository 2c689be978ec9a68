#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "vcz/errors.hpp"

namespace vcz {

using Vec = Eigen::VectorXd;

/// Axis-aligned closed box [lo, hi]. The empty box is a first-class value
/// and propagates through the set algebra.
class IntervalBox {
 public:
  IntervalBox() : empty_(true) {}
  IntervalBox(Vec lo, Vec hi);
  static IntervalBox make_empty(int dim);

  bool is_empty() const { return empty_; }
  int dim() const { return static_cast<int>(lo_.size()); }
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }
  Vec width() const { return hi_ - lo_; }
  Vec center() const { return 0.5 * (lo_ + hi_); }

  bool contains(const Vec& p) const;            // closed membership
  bool contains_box(const IntervalBox& b) const;
  bool intersects(const IntervalBox& b) const;  // closed intersection
  /// Positive-measure overlap (interiors intersect).
  bool overlaps_interior(const IntervalBox& b) const;

  IntervalBox translated(const Vec& shift) const;

 private:
  Vec lo_, hi_;
  bool empty_ = false;
};

/// [lo+margin, hi-margin]; empty when any axis collapses.
IntervalBox erode(const IntervalBox& box, const Vec& margin);
/// [lo-margin, hi+margin].
IntervalBox dilate(const IntervalBox& box, const Vec& margin);

/// Multi-index of a grid cell, or the distinguished overflow marker.
struct CellId {
  std::vector<std::int32_t> index;
  bool overflow = false;

  static CellId make_overflow() {
    CellId c;
    c.overflow = true;
    return c;
  }
  bool operator==(const CellId& o) const {
    return overflow == o.overflow && index == o.index;
  }
};

/// Uniform grid of congruent cells anchored at the domain's lower corner.
/// Cell i on an axis covers [lo + i*eta, lo + (i+1)*eta]; the quantizer
/// bins half-open so every point has exactly one cell.
class GridSpec {
 public:
  GridSpec() = default;
  GridSpec(IntervalBox domain, Vec eta);

  int dim() const { return domain_.dim(); }
  const IntervalBox& domain() const { return domain_; }
  const Vec& eta() const { return eta_; }
  const std::vector<std::int32_t>& cells_per_axis() const { return cells_; }
  std::size_t num_cells() const { return num_cells_; }
  /// Union of all cells, [lo, lo + N*eta] per axis (may exceed domain.hi).
  IntervalBox covered() const;

  CellId quantize(const Vec& point) const;
  /// Flat index of the quantized cell, or nullopt on overflow.
  std::optional<std::size_t> quantize_flat(const Vec& point) const;

  std::size_t flatten(const CellId& cell) const;
  CellId unflatten(std::size_t flat) const;
  IntervalBox cell_box(std::size_t flat) const;
  IntervalBox cell_box(const CellId& cell) const;
  Vec cell_center(std::size_t flat) const;

 private:
  IntervalBox domain_;
  Vec eta_;
  std::vector<std::int32_t> cells_;
  std::size_t num_cells_ = 0;
};

/// Exact one-step reach box of the integrator: the cell translated by h*u.
IntervalBox reach_set(const CellId& cell, const Vec& u, double h,
                      const GridSpec& grid);

}  // namespace vcz
