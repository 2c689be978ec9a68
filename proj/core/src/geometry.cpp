#include "vcz/geometry.hpp"

#include <cmath>

namespace vcz {

namespace {
constexpr double kSnapTol = 1e-9;
}

IntervalBox::IntervalBox(Vec lo, Vec hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size())
    throw ContractViolation("IntervalBox: lo/hi dimension mismatch");
  empty_ = false;
  for (int i = 0; i < lo_.size(); ++i) {
    if (lo_[i] > hi_[i]) {
      empty_ = true;
      break;
    }
  }
  if (empty_) {
    // normalize: keep the dimension, drop the bounds
    const int n = static_cast<int>(lo_.size());
    lo_ = Vec::Zero(n);
    hi_ = Vec::Constant(n, -1.0);
  }
}

IntervalBox IntervalBox::make_empty(int dim) {
  IntervalBox b;
  b.lo_ = Vec::Zero(dim);
  b.hi_ = Vec::Constant(dim, -1.0);
  b.empty_ = true;
  return b;
}

bool IntervalBox::contains(const Vec& p) const {
  if (empty_) return false;
  if (p.size() != lo_.size())
    throw ContractViolation("IntervalBox::contains: dimension mismatch");
  return (p.array() >= lo_.array()).all() && (p.array() <= hi_.array()).all();
}

bool IntervalBox::contains_box(const IntervalBox& b) const {
  if (b.empty_) return true;
  if (empty_) return false;
  return (b.lo_.array() >= lo_.array()).all() && (b.hi_.array() <= hi_.array()).all();
}

bool IntervalBox::intersects(const IntervalBox& b) const {
  if (empty_ || b.empty_) return false;
  return (lo_.array() <= b.hi_.array()).all() && (hi_.array() >= b.lo_.array()).all();
}

bool IntervalBox::overlaps_interior(const IntervalBox& b) const {
  if (empty_ || b.empty_) return false;
  return (lo_.array() < b.hi_.array()).all() && (hi_.array() > b.lo_.array()).all();
}

IntervalBox IntervalBox::translated(const Vec& shift) const {
  if (empty_) return *this;
  return IntervalBox(lo_ + shift, hi_ + shift);
}

IntervalBox erode(const IntervalBox& box, const Vec& margin) {
  if (box.is_empty()) return box;
  if (margin.size() != box.dim())
    throw ContractViolation("erode: margin dimension mismatch");
  return IntervalBox(box.lo() + margin, box.hi() - margin);
}

IntervalBox dilate(const IntervalBox& box, const Vec& margin) {
  if (box.is_empty()) return box;
  if (margin.size() != box.dim())
    throw ContractViolation("dilate: margin dimension mismatch");
  return IntervalBox(box.lo() - margin, box.hi() + margin);
}

GridSpec::GridSpec(IntervalBox domain, Vec eta)
    : domain_(std::move(domain)), eta_(std::move(eta)) {
  if (domain_.is_empty()) throw ContractViolation("GridSpec: empty domain");
  if (eta_.size() != domain_.dim())
    throw ContractViolation("GridSpec: eta dimension mismatch");
  num_cells_ = 1;
  cells_.resize(domain_.dim());
  for (int i = 0; i < domain_.dim(); ++i) {
    if (eta_[i] <= 0.0) throw ContractViolation("GridSpec: eta must be positive");
    const double w = domain_.hi()[i] - domain_.lo()[i];
    cells_[i] = static_cast<std::int32_t>(std::ceil(w / eta_[i] - kSnapTol));
    if (cells_[i] < 1) cells_[i] = 1;
    num_cells_ *= static_cast<std::size_t>(cells_[i]);
  }
}

IntervalBox GridSpec::covered() const {
  Vec hi(dim());
  for (int i = 0; i < dim(); ++i)
    hi[i] = domain_.lo()[i] + cells_[i] * eta_[i];
  return IntervalBox(domain_.lo(), hi);
}

CellId GridSpec::quantize(const Vec& point) const {
  if (point.size() != dim())
    throw ContractViolation("quantize: point dimension mismatch");
  CellId c;
  c.index.resize(dim());
  for (int i = 0; i < dim(); ++i) {
    if (!std::isfinite(point[i]))
      throw ContractViolation("quantize: non-finite coordinate");
    const double rel = (point[i] - domain_.lo()[i]) / eta_[i];
    if (rel < 0.0 || rel > cells_[i] + kSnapTol) return CellId::make_overflow();
    auto idx = static_cast<std::int64_t>(std::floor(rel));
    // the covered upper edge belongs to the last cell
    if (idx >= cells_[i]) idx = cells_[i] - 1;
    c.index[i] = static_cast<std::int32_t>(idx);
  }
  return c;
}

std::optional<std::size_t> GridSpec::quantize_flat(const Vec& point) const {
  const CellId c = quantize(point);
  if (c.overflow) return std::nullopt;
  return flatten(c);
}

std::size_t GridSpec::flatten(const CellId& cell) const {
  if (cell.overflow) throw ContractViolation("flatten: overflow cell");
  std::size_t flat = 0;
  for (int i = 0; i < dim(); ++i) {
    if (cell.index[i] < 0 || cell.index[i] >= cells_[i])
      throw ContractViolation("flatten: index outside grid");
    flat = flat * static_cast<std::size_t>(cells_[i]) +
           static_cast<std::size_t>(cell.index[i]);
  }
  return flat;
}

CellId GridSpec::unflatten(std::size_t flat) const {
  CellId c;
  c.index.resize(dim());
  for (int i = dim() - 1; i >= 0; --i) {
    const auto n = static_cast<std::size_t>(cells_[i]);
    c.index[i] = static_cast<std::int32_t>(flat % n);
    flat /= n;
  }
  return c;
}

IntervalBox GridSpec::cell_box(const CellId& cell) const {
  if (cell.overflow) throw ContractViolation("cell_box: overflow cell");
  Vec lo(dim()), hi(dim());
  for (int i = 0; i < dim(); ++i) {
    lo[i] = domain_.lo()[i] + cell.index[i] * eta_[i];
    hi[i] = lo[i] + eta_[i];
  }
  return IntervalBox(lo, hi);
}

IntervalBox GridSpec::cell_box(std::size_t flat) const {
  return cell_box(unflatten(flat));
}

Vec GridSpec::cell_center(std::size_t flat) const {
  return cell_box(flat).center();
}

IntervalBox reach_set(const CellId& cell, const Vec& u, double h,
                      const GridSpec& grid) {
  if (cell.overflow) throw ContractViolation("reach_set: overflow cell");
  if (h <= 0.0) throw ContractViolation("reach_set: h must be positive");
  if (u.size() != grid.dim())
    throw ContractViolation("reach_set: input dimension mismatch");
  return grid.cell_box(cell).translated(h * u);
}

}  // namespace vcz
