#include "vcz/synthesis.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace vcz {

Margin compute_delta(const Vec& u_bound, double h, const Vec& eta) {
  if (u_bound.size() != eta.size())
    throw ContractViolation("compute_delta: dimension mismatch");
  if (h <= 0.0) throw ContractViolation("compute_delta: h must be positive");
  Margin m;
  m.delta = u_bound * (h / 2.0) + eta;
  return m;
}

std::size_t TaskController::domain_size() const {
  std::size_t s = 0;
  for (auto b : winning) s += b;
  return s;
}

namespace {

std::vector<std::uint8_t> mask_of(const std::vector<std::uint32_t>& cells,
                                  std::size_t ncells) {
  std::vector<std::uint8_t> m(ncells, 0);
  for (auto c : cells) m[c] = 1;
  return m;
}

// reverse adjacency: for each cell, the list of (cell,input) pairs that can
// reach it
struct Reverse {
  std::vector<std::uint64_t> offsets;
  std::vector<std::uint64_t> pairs;
};

Reverse transpose(const SymbolicModel& model) {
  const std::size_t ncells = model.grid.num_cells();
  Reverse rev;
  rev.offsets.assign(ncells + 1, 0);
  for (auto s : model.succ) ++rev.offsets[s + 1];
  for (std::size_t c = 0; c < ncells; ++c) rev.offsets[c + 1] += rev.offsets[c];
  rev.pairs.resize(model.succ.size());
  std::vector<std::uint64_t> cursor(rev.offsets.begin(), rev.offsets.end() - 1);
  for (std::size_t p = 0; p < model.num_pairs(); ++p)
    for (std::uint64_t k = model.offsets[p]; k < model.offsets[p + 1]; ++k)
      rev.pairs[cursor[model.succ[k]]++] = p;
  return rev;
}

void fill_policy(const SymbolicModel& model, TaskController& tc) {
  const std::size_t ncells = model.grid.num_cells();
  const std::size_t ninputs = model.num_inputs();
  tc.policy.assign(ncells, {});
  for (std::size_t c = 0; c < ncells; ++c) {
    if (!tc.winning[c]) continue;
    for (std::size_t ui = 0; ui < ninputs; ++ui) {
      const auto post = model.post(c, ui);
      if (post.empty()) continue;
      bool all_win = true;
      for (auto s : post)
        if (!tc.winning[s]) {
          all_win = false;
          break;
        }
      if (all_win) tc.policy[c].push_back(static_cast<std::uint16_t>(ui));
    }
  }
}

}  // namespace

TaskController solve_reach_avoid(const SymbolicModel& model,
                                 const std::vector<std::uint32_t>& goal,
                                 const std::vector<std::uint32_t>& unsafe,
                                 const std::vector<std::uint32_t>& stay) {
  const std::size_t ncells = model.grid.num_cells();
  const std::size_t ninputs = model.num_inputs();
  const auto unsafe_mask = mask_of(unsafe, ncells);
  const auto stay_mask = mask_of(stay, ncells);

  TaskController tc;
  tc.winning.assign(ncells, 0);
  tc.value.assign(ncells, -1);
  for (auto g : goal)
    if (!unsafe_mask[g]) tc.goal_cells.push_back(g);
  if (tc.goal_cells.empty())
    throw InfeasibleTask("solve_reach_avoid: goal empty after pruning unsafe cells");

  const Reverse rev = transpose(model);
  // pending successors outside Z, per (cell,input) pair
  std::vector<std::uint32_t> pending(model.num_pairs());
  for (std::size_t p = 0; p < model.num_pairs(); ++p)
    pending[p] = static_cast<std::uint32_t>(model.offsets[p + 1] - model.offsets[p]);

  // level-synchronized BFS so the value equals the fixed-point iteration
  std::vector<std::uint32_t> frontier = tc.goal_cells;
  for (auto g : frontier) {
    tc.winning[g] = 1;
    tc.value[g] = 0;
  }
  std::int32_t level = 0;
  std::vector<std::uint32_t> next;
  while (!frontier.empty()) {
    ++level;
    next.clear();
    for (auto cell : frontier) {
      for (std::uint64_t k = rev.offsets[cell]; k < rev.offsets[cell + 1]; ++k) {
        const std::uint64_t p = rev.pairs[k];
        if (--pending[p] != 0) continue;
        const auto c = static_cast<std::uint32_t>(p / ninputs);
        if (tc.winning[c] || !stay_mask[c] || unsafe_mask[c]) continue;
        tc.winning[c] = 1;
        tc.value[c] = level;
        next.push_back(c);
      }
    }
    frontier.swap(next);
  }
  fill_policy(model, tc);
  return tc;
}

TaskController solve_invariance(const SymbolicModel& model,
                                const std::vector<std::uint32_t>& safe) {
  if (safe.empty()) throw ContractViolation("solve_invariance: safe set empty");
  const std::size_t ncells = model.grid.num_cells();
  const std::size_t ninputs = model.num_inputs();

  TaskController tc;
  tc.winning = mask_of(safe, ncells);
  tc.value.assign(ncells, -1);

  const Reverse rev = transpose(model);
  // pairs turn bad once any successor leaves Z (or were bad from the start)
  std::vector<std::uint8_t> pair_bad(model.num_pairs(), 0);
  std::vector<std::uint32_t> good_count(ncells, 0);
  std::queue<std::uint32_t> removal;

  for (std::size_t c = 0; c < ncells; ++c) {
    if (!tc.winning[c]) continue;
    for (std::size_t ui = 0; ui < ninputs; ++ui) {
      const std::size_t p = c * ninputs + ui;
      const auto post = model.post(c, ui);
      bool ok = !post.empty();
      for (auto s : post)
        if (!tc.winning[s]) {
          ok = false;
          break;
        }
      if (ok)
        ++good_count[c];
      else
        pair_bad[p] = 1;
    }
    if (good_count[c] == 0) {
      tc.winning[c] = 0;
      removal.push(static_cast<std::uint32_t>(c));
    }
  }
  std::vector<std::uint8_t> removed(ncells, 0);
  while (!removal.empty()) {
    const std::uint32_t dead = removal.front();
    removal.pop();
    if (removed[dead]) continue;
    removed[dead] = 1;
    for (std::uint64_t k = rev.offsets[dead]; k < rev.offsets[dead + 1]; ++k) {
      const std::uint64_t p = rev.pairs[k];
      if (pair_bad[p]) continue;
      pair_bad[p] = 1;
      const auto c = static_cast<std::uint32_t>(p / ninputs);
      if (!tc.winning[c]) continue;
      if (--good_count[c] == 0) {
        tc.winning[c] = 0;
        removal.push(c);
      }
    }
  }

  bool any = false;
  for (std::size_t c = 0; c < ncells; ++c)
    if (tc.winning[c]) {
      tc.value[c] = 0;
      tc.goal_cells.push_back(static_cast<std::uint32_t>(c));
      any = true;
    }
  if (!any) throw InfeasibleTask("solve_invariance: safety fixed point is empty");
  fill_policy(model, tc);
  return tc;
}

SymbolicController synthesize_sequence(const SymbolicModel& model,
                                       const std::vector<AbstractTaskSets>& sets,
                                       const TightenedSequence& seq) {
  if (sets.size() != seq.tasks.size())
    throw ContractViolation("synthesize_sequence: set/task count mismatch");
  SymbolicController ctrl;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (seq.tasks[i].invariant_only) {
      // safe = stay cells minus unsafe cells
      std::vector<std::uint32_t> safe;
      const auto unsafe_mask = mask_of(sets[i].unsafe, model.grid.num_cells());
      for (auto c : sets[i].stay)
        if (!unsafe_mask[c]) safe.push_back(c);
      ctrl.tasks.push_back(solve_invariance(model, safe));
    } else {
      ctrl.tasks.push_back(
          solve_reach_avoid(model, sets[i].goal, sets[i].unsafe, sets[i].stay));
    }
  }
  // composition: every abstract goal cell of task i must be winning for i+1
  for (std::size_t i = 0; i + 1 < ctrl.tasks.size(); ++i) {
    std::vector<std::uint32_t> missing;
    for (auto g : ctrl.tasks[i].goal_cells)
      if (!ctrl.tasks[i + 1].wins(g)) missing.push_back(g);
    if (!missing.empty() ||
        ctrl.tasks[i].goal_cells.empty()) {
      std::string cells;
      for (std::size_t k = 0; k < missing.size() && k < 8; ++k)
        cells += (k ? "," : "") + std::to_string(missing[k]);
      throw CompositionError("synthesize_sequence: goal cells of task " +
                             std::to_string(i + 1) +
                             " not winning for task " + std::to_string(i + 2) +
                             " [" + cells + "]");
    }
  }
  return ctrl;
}

bool ConcretePolicy::in_domain(const Vec& xi) const {
  const auto c = model_->grid.quantize_flat(xi);
  return c && task_->wins(*c);
}

std::size_t ConcretePolicy::select_index_at(std::size_t cell) const {
  const auto& opts = task_->policy[cell];
  if (opts.empty())
    throw OutsideDomain("ConcretePolicy: no admissible input at cell",
                        static_cast<long long>(cell));
  std::size_t best = opts[0];
  std::int64_t best_rank = std::numeric_limits<std::int64_t>::max();
  for (auto ui : opts) {
    std::int64_t rank = 0;
    for (auto s : model_->post(cell, ui))
      rank = std::max<std::int64_t>(rank, task_->value[s]);
    if (rank < best_rank) {
      best_rank = rank;
      best = ui;
    }
  }
  return best;
}

std::size_t ConcretePolicy::select_index(const Vec& xi) const {
  const auto c = model_->grid.quantize_flat(xi);
  if (!c || !task_->wins(*c))
    throw OutsideDomain("ConcretePolicy: state outside winning domain",
                        c ? static_cast<long long>(*c) : -1);
  return select_index_at(*c);
}

Vec ConcretePolicy::select(const Vec& xi) const {
  return model_->inputs[select_index(xi)];
}

}  // namespace vcz
