#pragma once

#include <optional>
#include <string>
#include <vector>

#include "huntil/system.hpp"

namespace huntil {

struct SimBudget {
  double t_max = 20.0;
  int j_max = 50;
  int branch_max = 8;
  double dt = 1e-2;
  double tau_evt = Tol::evt;   // event localization, in constraint value
  double eps_zeno = 1e-6;      // inter-jump flow threshold
  int n_zeno = 10;             // consecutive-jump window for the Zeno stop rule
  double escape_norm = 1e9;
};

enum class BranchPolicy { Branch, JumpPriority };

struct ArcSample {
  double t;
  Vec x;
};

struct FlowSegment {
  int j = 0;
  std::vector<ArcSample> samples;  // at least one; degenerate segments allowed
  double t0() const { return samples.front().t; }
  double t1() const { return samples.back().t; }
  double duration() const { return t1() - t0(); }
};

struct JumpRecord {
  double t;
  int j_pre;
  Vec pre, post;
  int selection;
};

struct ArcFlags {
  bool budget_truncated = false;
  bool maximal_heuristic = false;   // ended because no extension exists
  bool complete_heuristic = false;  // ended only because a budget/stop rule hit
  bool eventually_continuous = false;
  bool eventually_discrete = false;
  bool genuinely_zeno = false;
  bool finite_escape = false;
  bool zeno_truncated = false;
  bool unbounded_both = false;
  std::string stop_reason;
  double zeno_limit_t = std::numeric_limits<double>::quiet_NaN();
};

struct HybridArc {
  std::vector<FlowSegment> segments;  // segment k has j == k
  std::vector<JumpRecord> jumps;
  ArcFlags flags;
  int flow_selection = 0;

  HybridTime start() const { return {segments.front().t0(), segments.front().j}; }
  HybridTime end() const { return {segments.back().t1(), segments.back().j}; }
  double sup_t() const { return segments.back().t1(); }
  int sup_j() const { return segments.back().j; }
  const Vec& initial_state() const { return segments.front().samples.front().x; }
  const Vec& final_state() const { return segments.back().samples.back().x; }
  bool contains_time(const HybridTime& tj) const;
  // Dense max gap between consecutive samples within segments.
  double max_sample_gap() const;
};

// Simulate all retained nondeterministic branches from x0.
// Throws std::invalid_argument when x0 violates the initial-condition rule
// (x0 must lie in cl(C) union D).
std::vector<HybridArc> simulate(const HybridSystem& H, const Vec& x0,
                                const SimBudget& budget,
                                BranchPolicy policy = BranchPolicy::Branch);

struct ArcValidation {
  double flow_inclusion_res = 0;  // re-integration defect per step
  double flow_set_res = 0;        // distance of interior samples to C
  double jump_set_res = 0;        // distance of jump pre-states to D
  double jump_map_res = 0;        // min-selection defect of jump post-states
  bool s0_ok = true;
  bool pass = false;
  std::vector<std::string> notes;
};

ArcValidation validate_arc(const HybridSystem& H, const HybridArc& arc,
                           double tau_flow = Tol::flow, double tau_jump = Tol::jump,
                           double tau_set = Tol::set);

// Fill classification flags (eventually continuous/discrete, genuinely Zeno,
// both-directions-unbounded heuristics) on a simulated arc.
ArcFlags classify_arc(const HybridArc& arc, const SimBudget& budget);

// Union of all samples over all branches from the given initial points.
std::vector<Vec> reachable_sample(const HybridSystem& H,
                                  const std::vector<Vec>& initial_points,
                                  const SimBudget& budget,
                                  BranchPolicy policy = BranchPolicy::Branch);

struct SettlingTime {
  double total = kInf;  // min t+j with the arc in A
  bool reached = false;
  bool refined_between_samples = false;  // lower-confidence localization
  bool budget_truncated = false;         // +inf may be an artifact of truncation
  HybridTime when;
  Vec state;
};

SettlingTime settling_time(const HybridArc& arc, const SetSpec& A,
                           double tau_set = Tol::set);

// One record per sample: t j x[0..n-1] in_C in_D (space separated).
std::string trajectory_dsv(const HybridSystem& H, const HybridArc& arc);

}  // namespace huntil
