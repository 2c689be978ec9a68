#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vcz/geometry.hpp"

namespace vcz {

/// One reach-avoid-stay sub-task: eventually reach some goal box, never
/// enter an obstacle, always remain in the stay set.
struct RasTask {
  std::vector<IntervalBox> goals;      // union semantics
  std::vector<IntervalBox> obstacles;  // may be empty
  IntervalBox stay;
  /// Pure invariance sub-task (goal coincides with stay); solved with the
  /// safety fixed point instead of the reach-avoid one.
  bool invariant_only = false;
};

struct RasSequence {
  std::vector<RasTask> tasks;

  int dim() const { return tasks.empty() ? 0 : tasks.front().stay.dim(); }
  void validate() const;  // throws ContractViolation on malformed sequences
};

struct TightenedSequence {
  std::vector<RasTask> tasks;
  Vec margin_used;  // per-axis total margin (lambda + delta)
};

/// Erodes goals and stay by (lambda*1 + delta) per axis and dilates
/// obstacles by the same margin. Throws SpecificationInfeasible naming the
/// offending set when a goal or the stay erodes to empty.
TightenedSequence tighten(const RasSequence& seq, double lambda,
                          const Vec& delta);

struct TaskVerdict {
  std::optional<std::size_t> reached_index;  // first sample with x in some goal
  bool avoided = true;  // never in an obstacle of this task while it was active
  bool stayed = true;   // all samples of the whole trace inside stay
  bool satisfied() const { return reached_index.has_value() && avoided && stayed; }
};

struct SatisfactionReport {
  std::vector<TaskVerdict> per_task;
  bool satisfied = false;
};

/// Sampled monitor over a dense trace: positions[k] with the active task
/// index recorded at each sample. Obstacles are checked against the task
/// active at each sample; reach is checked from the first sample onward.
SatisfactionReport check_task_satisfaction(
    const std::vector<Vec>& positions, const std::vector<int>& active_task,
    const RasSequence& seq);

}  // namespace vcz
