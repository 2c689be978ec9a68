#pragma once

#include <cstdint>
#include <vector>

#include "vcz/abstraction.hpp"

namespace vcz {

/// Robustness margin delta = u_bar*h/2 + eta, componentwise.
struct Margin {
  Vec delta;
};

Margin compute_delta(const Vec& u_bound, double h, const Vec& eta);

/// Maximally permissive controller for one sub-task: every input retained
/// at a winning cell keeps all abstract successors winning.
struct TaskController {
  std::vector<std::uint8_t> winning;            // bitmask over cells
  std::vector<std::vector<std::uint16_t>> policy;  // per winning cell: input indices
  std::vector<std::int32_t> value;              // fixed-point iteration of entry, -1 outside
  std::vector<std::uint32_t> goal_cells;        // abstract goal (switch condition)

  bool wins(std::size_t cell) const { return winning[cell] != 0; }
  std::size_t domain_size() const;
};

struct SymbolicController {
  std::vector<TaskController> tasks;
};

/// Least fixed point of Z -> goal ∪ (CPre(Z) ∩ stay \ unsafe).
TaskController solve_reach_avoid(const SymbolicModel& model,
                                 const std::vector<std::uint32_t>& goal,
                                 const std::vector<std::uint32_t>& unsafe,
                                 const std::vector<std::uint32_t>& stay);

/// Greatest fixed point of Z -> safe ∩ CPre(Z).
TaskController solve_invariance(const SymbolicModel& model,
                                const std::vector<std::uint32_t>& safe);

/// Solves every task in order and verifies the sequence composes: each
/// abstract goal cell of task i must be winning for task i+1.
SymbolicController synthesize_sequence(const SymbolicModel& model,
                                       const std::vector<AbstractTaskSets>& sets,
                                       const TightenedSequence& seq);

/// Concrete refined policy C_q ∘ Q for one task. Among permissive inputs
/// the runtime picks the one minimizing the successors' maximum value rank,
/// ties broken by smallest input index.
class ConcretePolicy {
 public:
  ConcretePolicy(const SymbolicModel& model, const TaskController& task)
      : model_(&model), task_(&task) {}

  bool in_domain(const Vec& xi) const;
  /// Selected input vector; throws OutsideDomain when xi quantizes outside
  /// the winning domain (or off the grid).
  Vec select(const Vec& xi) const;
  std::size_t select_index(const Vec& xi) const;
  std::size_t select_index_at(std::size_t cell) const;

 private:
  const SymbolicModel* model_;
  const TaskController* task_;
};

}  // namespace vcz
