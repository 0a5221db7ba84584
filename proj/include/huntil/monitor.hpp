#pragma once

#include <optional>

#include "huntil/sim.hpp"

namespace huntil {

// Propositions p, q given through their truth sets P, Q.
struct PropositionPair {
  SetSpec P, Q;
  bool p(const Vec& x, double tau = Tol::set) const { return P.contains(x, tau); }
  bool q(const Vec& x, double tau = Tol::set) const { return Q.contains(x, tau); }
  // P and Q closed (syntactically), P inside C union D on samples.
  std::vector<std::string> assumption_issues(const HybridSystem& H,
                                             const GridSpec& grid) const;
};

enum class Truth { Satisfied, Violated, Unknown };

struct Verdict {
  Truth value = Truth::Unknown;
  std::optional<HybridTime> witness_time;
  std::optional<Vec> witness_state;
  std::string reason;
};

const char* to_string(Truth t);

// Strong until (q must be reached): satisfied when q holds at start or at some
// later hybrid time with p holding at every sampled time in between.
Verdict check_strong_until(const HybridArc& arc, const PropositionPair& pq,
                           const HybridTime& start = {});

// Weak until: strong until, or p holding for the rest of the (complete or
// maximal) arc. Budget-truncated prefixes with p holding give Unknown.
Verdict check_weak_until(const HybridArc& arc, const PropositionPair& pq,
                         const HybridTime& start = {});

enum class UntilMode { Weak, Strong };

struct InitVerdict {
  Vec x0;
  Truth value;
  std::string reason;
};

struct AggregateVerdict {
  Truth value = Truth::Unknown;
  std::vector<InitVerdict> per_init;
  std::optional<Vec> witness_state;
  std::optional<HybridTime> witness_time;
  std::vector<std::string> caveats;
  int arcs_checked = 0;
};

// Check the formula over every retained branch from every sampled initial
// condition with p + q >= 1.
AggregateVerdict check_formula_over(const HybridSystem& H, const PropositionPair& pq,
                                    const GridSpec& init_grid, UntilMode mode,
                                    const SimBudget& budget,
                                    BranchPolicy policy = BranchPolicy::Branch,
                                    double dt_monitor = 1e-2);

}  // namespace huntil
