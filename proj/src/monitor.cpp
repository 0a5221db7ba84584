#include "huntil/monitor.hpp"

#include <algorithm>

namespace huntil {

const char* to_string(Truth t) {
  switch (t) {
    case Truth::Satisfied: return "satisfied";
    case Truth::Violated: return "violated";
    case Truth::Unknown: return "unknown";
  }
  return "unknown";
}

std::vector<std::string> PropositionPair::assumption_issues(
    const HybridSystem& H, const GridSpec& grid) const {
  std::vector<std::string> issues;
  if (!P.syntactically_closed()) issues.push_back("P is not syntactically closed");
  if (!Q.syntactically_closed()) issues.push_back("Q is not syntactically closed");
  SetSpec CD = H.flow_or_jump_set();
  GridSpec g = grid;
  g.res = std::min(g.res, 24);
  for (const auto& x : sample_set(P, g))
    if (!CD.contains(x, Tol::set)) {
      issues.push_back("sampled point of P outside C union D");
      break;
    }
  return issues;
}

namespace {

// Scan result: earliest q time and earliest not-p time along the arc after
// `start`, each refined by bisection on the sample interpolant.
struct Scan {
  bool q_found = false;
  HybridTime q_when;
  Vec q_state;
  bool pfail_found = false;
  HybridTime pfail_when;
  Vec pfail_state;
};

Vec lerp(const Vec& a, const Vec& b, double s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * (b[i] - a[i]);
  return r;
}

// Earliest s in [0,1] with pred(lerp(a.x,b.x,s)) true, assuming pred at 1.
double earliest_on_segment(const Vec& a, const Vec& b,
                           const std::function<bool(const Vec&)>& pred) {
  if (pred(a)) return 0.0;
  double lo = 0, hi = 1;
  // A coarse scan guards against short-lived flips inside the bracket.
  const int kScan = 32;
  for (int i = 1; i <= kScan; ++i) {
    if (pred(lerp(a, b, static_cast<double>(i) / kScan))) {
      lo = static_cast<double>(i - 1) / kScan;
      hi = static_cast<double>(i) / kScan;
      break;
    }
  }
  for (int it = 0; it < 60; ++it) {
    double m = 0.5 * (lo + hi);
    if (pred(lerp(a, b, m))) hi = m; else lo = m;
  }
  return hi;
}

Scan scan_arc(const HybridArc& arc, const PropositionPair& pq,
              const HybridTime& start) {
  Scan sc;
  double start_total = start.total();
  auto note_q = [&](const HybridTime& w, const Vec& x) {
    if (!sc.q_found || w.total() < sc.q_when.total()) {
      sc.q_found = true;
      sc.q_when = w;
      sc.q_state = x;
    }
  };
  auto note_pfail = [&](const HybridTime& w, const Vec& x) {
    if (!sc.pfail_found || w.total() < sc.pfail_when.total()) {
      sc.pfail_found = true;
      sc.pfail_when = w;
      sc.pfail_state = x;
    }
  };

  for (const auto& seg : arc.segments) {
    for (std::size_t k = 0; k < seg.samples.size(); ++k) {
      const auto& s = seg.samples[k];
      HybridTime now{s.t, seg.j};
      if (now.total() < start_total - 1e-12) continue;
      if (sc.q_found && sc.pfail_found) return sc;
      bool qs = pq.q(s.x);
      bool ps = pq.p(s.x);
      if (qs && !sc.q_found) {
        HybridTime w = now;
        Vec xs = s.x;
        if (k > 0 && !pq.q(seg.samples[k - 1].x)) {
          const auto& a = seg.samples[k - 1];
          double s_hit = earliest_on_segment(a.x, s.x, [&](const Vec& y) { return pq.q(y); });
          w = {a.t + s_hit * (s.t - a.t), seg.j};
          xs = lerp(a.x, s.x, s_hit);
        }
        note_q(w, xs);
      }
      if (!ps && !sc.pfail_found) {
        HybridTime w = now;
        Vec xs = s.x;
        if (k > 0 && pq.p(seg.samples[k - 1].x)) {
          const auto& a = seg.samples[k - 1];
          double s_hit = earliest_on_segment(a.x, s.x, [&](const Vec& y) { return !pq.p(y); });
          w = {a.t + s_hit * (s.t - a.t), seg.j};
          xs = lerp(a.x, s.x, s_hit);
        }
        note_pfail(w, xs);
      }
    }
    if (sc.q_found && sc.pfail_found) break;
  }
  return sc;
}

}  // namespace

Verdict check_strong_until(const HybridArc& arc, const PropositionPair& pq,
                           const HybridTime& start) {
  if (!arc.contains_time(start))
    throw std::invalid_argument("check_strong_until: start outside arc domain");
  Scan sc = scan_arc(arc, pq, start);
  Verdict v;
  // q wins ties: p is only required strictly before the q-time.
  if (sc.q_found &&
      (!sc.pfail_found || sc.q_when.total() <= sc.pfail_when.total() + 1e-12)) {
    v.value = Truth::Satisfied;
    v.witness_time = sc.q_when;
    v.witness_state = sc.q_state;
    v.reason = "q reached";
    return v;
  }
  if (sc.pfail_found) {
    v.value = Truth::Violated;
    v.witness_time = sc.pfail_when;
    v.witness_state = sc.pfail_state;
    v.reason = "p failed before q";
    return v;
  }
  if (arc.flags.budget_truncated) {
    v.value = Truth::Unknown;
    v.reason = "budget-truncated prefix, p held, q unseen";
    return v;
  }
  // A genuinely maximal (or escaping) arc that never reaches q.
  v.value = Truth::Violated;
  v.witness_time = arc.end();
  v.witness_state = arc.final_state();
  v.reason = "maximal prefix ended without reaching q";
  return v;
}

Verdict check_weak_until(const HybridArc& arc, const PropositionPair& pq,
                         const HybridTime& start) {
  if (!arc.contains_time(start))
    throw std::invalid_argument("check_weak_until: start outside arc domain");
  Scan sc = scan_arc(arc, pq, start);
  Verdict v;
  if (sc.q_found &&
      (!sc.pfail_found || sc.q_when.total() <= sc.pfail_when.total() + 1e-12)) {
    v.value = Truth::Satisfied;
    v.witness_time = sc.q_when;
    v.witness_state = sc.q_state;
    v.reason = "q reached";
    return v;
  }
  if (sc.pfail_found) {
    v.value = Truth::Violated;
    v.witness_time = sc.pfail_when;
    v.witness_state = sc.pfail_state;
    v.reason = "p failed before q";
    return v;
  }
  if (arc.flags.complete_heuristic) {
    v.value = Truth::Satisfied;
    v.reason = "p held on the whole (heuristically complete) arc";
    return v;
  }
  if (arc.flags.maximal_heuristic || arc.flags.finite_escape) {
    v.value = Truth::Satisfied;
    v.reason = "p held on the whole maximal prefix";
    return v;
  }
  v.value = Truth::Unknown;
  v.reason = "truncated prefix, p held, q unseen";
  return v;
}

AggregateVerdict check_formula_over(const HybridSystem& H, const PropositionPair& pq,
                                    const GridSpec& init_grid, UntilMode mode,
                                    const SimBudget& budget, BranchPolicy policy,
                                    double dt_monitor) {
  SetSpec init_set = set_intersect(set_union(pq.P, pq.Q),
                                   set_union(H.C.closure(), H.D));
  std::vector<Vec> inits = sample_set(init_set, init_grid);
  if (inits.empty())
    throw std::invalid_argument("check_formula_over: empty initial sampler");

  AggregateVerdict agg;
  bool all_satisfied = true;
  bool gap_caveat = false;
  for (const auto& x0 : inits) {
    if (pq.q(x0)) {  // satisfied at (0,0) on every branch
      agg.per_init.push_back({x0, Truth::Satisfied, "q holds at the start"});
      continue;
    }
    Truth worst = Truth::Satisfied;
    std::string reason;
    for (const auto& arc : simulate(H, x0, budget, policy)) {
      ++agg.arcs_checked;
      if (arc.max_sample_gap() > dt_monitor * 1.5) gap_caveat = true;
      Verdict v = mode == UntilMode::Weak ? check_weak_until(arc, pq)
                                          : check_strong_until(arc, pq);
      if (v.value == Truth::Violated) {
        worst = Truth::Violated;
        reason = v.reason;
        if (!agg.witness_state) {
          agg.witness_state = v.witness_state;
          agg.witness_time = v.witness_time;
        }
        break;
      }
      if (v.value == Truth::Unknown && worst == Truth::Satisfied) {
        worst = Truth::Unknown;
        reason = v.reason;
      }
    }
    agg.per_init.push_back({x0, worst, reason});
    if (worst == Truth::Violated) {
      agg.value = Truth::Violated;
      if (gap_caveat) agg.caveats.push_back("flow interiors between samples unchecked");
      return agg;
    }
    if (worst == Truth::Unknown) all_satisfied = false;
  }
  agg.value = all_satisfied ? Truth::Satisfied : Truth::Unknown;
  if (gap_caveat) agg.caveats.push_back("flow interiors between samples unchecked");
  return agg;
}

}  // namespace huntil
