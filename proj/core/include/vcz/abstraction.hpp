#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vcz/geometry.hpp"
#include "vcz/specification.hpp"

namespace vcz {

/// Finite input sample set for the integrator: a Cartesian grid on
/// [-u_bar, u_bar] containing the componentwise extremes and zero.
/// Samples are ordered by max-normalized magnitude, then lexicographically,
/// so index 0 is always the zero input.
struct InputGrid {
  Vec bound;                               // u_bar, componentwise positive
  std::vector<int> samples_per_axis;       // odd, >= 3 unless an axis is pinned

  InputGrid() = default;
  InputGrid(Vec u_bar, std::vector<int> samples);
  static InputGrid extremes_and_zero(Vec u_bar);  // 3 samples per axis

  std::vector<Vec> samples() const;
};

/// Finite symbolic model of the sampled integrator on a uniform grid.
/// Successor lists are stored CSR-style per (cell, input) pair; an empty
/// list encodes a blocked transition (reach box leaves the covered domain).
struct SymbolicModel {
  GridSpec grid;
  std::vector<Vec> inputs;
  double h = 0.0;
  // CSR: pair index = cell * inputs.size() + input
  std::vector<std::uint64_t> offsets;  // size num_pairs + 1
  std::vector<std::uint32_t> succ;     // sorted, deduplicated per pair

  std::size_t num_inputs() const { return inputs.size(); }
  std::size_t num_pairs() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::size_t num_transitions() const { return succ.size(); }

  std::span<const std::uint32_t> post(std::size_t cell, std::size_t input) const {
    const std::size_t p = cell * inputs.size() + input;
    return {succ.data() + offsets[p], succ.data() + offsets[p + 1]};
  }
};

/// Builds the model: Post(cell, u) = all cells with positive-measure overlap
/// with the translated cell box when that box stays inside the covered
/// domain, empty otherwise. Deterministic for fixed arguments.
SymbolicModel build_model(const GridSpec& grid, const InputGrid& inputs, double h);

/// Abstract sets of one tightened sub-task over the grid.
struct AbstractTaskSets {
  std::vector<std::uint32_t> goal;    // cells fully inside some tightened goal box
  std::vector<std::uint32_t> unsafe;  // cells intersecting a tightened obstacle
  std::vector<std::uint32_t> stay;    // cells fully inside the tightened stay
};

/// Per-task abstract sets. Goal cells use containment; obstacle cells use
/// intersection so partially-unsafe cells are excluded from the winning set.
/// Throws AbstractGoalEmpty when no cell fits a task's goal.
std::vector<AbstractTaskSets> abstract_sets(const TightenedSequence& seq,
                                            const GridSpec& grid);

struct FrrWitness {
  Vec state;
  std::size_t input_index = 0;
};

struct FrrReport {
  bool pass = true;
  std::size_t trials = 0;
  std::size_t checked = 0;  // trials with a defined abstract Post
  std::vector<FrrWitness> counterexamples;
};

/// Samples random concrete states and inputs; verifies that the quantized
/// successor of x + h*u lies in Post(quantize(x), u) whenever Post is
/// non-empty.
FrrReport check_frr(const SymbolicModel& model, std::size_t trials,
                    std::uint64_t seed = 1);

}  // namespace vcz
