#include "vcz/specification.hpp"

namespace vcz {

void RasSequence::validate() const {
  if (tasks.empty()) throw ContractViolation("RasSequence: no tasks");
  const int n = tasks.front().stay.dim();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const RasTask& t = tasks[i];
    if (t.goals.empty())
      throw ContractViolation("RasSequence: task has no goal boxes");
    if (t.stay.dim() != n)
      throw ContractViolation("RasSequence: stay dimension mismatch");
    for (const auto& g : t.goals) {
      if (g.dim() != n) throw ContractViolation("RasSequence: goal dimension mismatch");
      if (!t.stay.contains_box(g))
        throw ContractViolation("RasSequence: goal box not inside stay set");
    }
    for (const auto& o : t.obstacles)
      if (o.dim() != n)
        throw ContractViolation("RasSequence: obstacle dimension mismatch");
  }
}

TightenedSequence tighten(const RasSequence& seq, double lambda,
                          const Vec& delta) {
  seq.validate();
  if (lambda <= 0.0) throw ContractViolation("tighten: lambda must be positive");
  const int n = seq.dim();
  if (delta.size() != n) throw ContractViolation("tighten: delta dimension mismatch");
  if ((delta.array() < 0.0).any())
    throw ContractViolation("tighten: delta must be nonnegative");

  const Vec margin = Vec::Constant(n, lambda) + delta;
  TightenedSequence out;
  out.margin_used = margin;
  out.tasks.reserve(seq.tasks.size());
  for (std::size_t i = 0; i < seq.tasks.size(); ++i) {
    const RasTask& t = seq.tasks[i];
    RasTask tt;
    tt.invariant_only = t.invariant_only;
    tt.stay = erode(t.stay, margin);
    if (tt.stay.is_empty())
      throw SpecificationInfeasible("tighten: stay set of task " +
                                    std::to_string(i + 1) + " erodes to empty");
    for (std::size_t g = 0; g < t.goals.size(); ++g) {
      IntervalBox eg = erode(t.goals[g], margin);
      if (eg.is_empty())
        throw SpecificationInfeasible("tighten: goal box " + std::to_string(g + 1) +
                                      " of task " + std::to_string(i + 1) +
                                      " erodes to empty");
      tt.goals.push_back(std::move(eg));
    }
    for (const auto& o : t.obstacles) tt.obstacles.push_back(dilate(o, margin));
    out.tasks.push_back(std::move(tt));
  }
  return out;
}

namespace {
bool in_any(const Vec& p, const std::vector<IntervalBox>& boxes) {
  for (const auto& b : boxes)
    if (b.contains(p)) return true;
  return false;
}
}  // namespace

SatisfactionReport check_task_satisfaction(
    const std::vector<Vec>& positions, const std::vector<int>& active_task,
    const RasSequence& seq) {
  if (positions.empty())
    throw ContractViolation("check_task_satisfaction: empty trajectory");
  if (positions.size() != active_task.size())
    throw ContractViolation("check_task_satisfaction: trace length mismatch");
  seq.validate();

  SatisfactionReport rep;
  rep.per_task.resize(seq.tasks.size());
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const Vec& p = positions[k];
    const int a = active_task[k];
    if (a < 0 || a >= static_cast<int>(seq.tasks.size()))
      throw ContractViolation("check_task_satisfaction: bad task index in trace");
    for (std::size_t i = 0; i < seq.tasks.size(); ++i) {
      TaskVerdict& v = rep.per_task[i];
      if (!seq.tasks[i].stay.contains(p)) v.stayed = false;
      if (!v.reached_index && static_cast<std::size_t>(a) >= i &&
          in_any(p, seq.tasks[i].goals))
        v.reached_index = k;
    }
    // obstacles of the active task only
    if (in_any(p, seq.tasks[a].obstacles)) rep.per_task[a].avoided = false;
  }
  rep.satisfied = true;
  for (const auto& v : rep.per_task) rep.satisfied = rep.satisfied && v.satisfied();
  return rep;
}

}  // namespace vcz
