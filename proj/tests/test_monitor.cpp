#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "huntil/monitor.hpp"
#include "huntil/scenarios.hpp"

using namespace huntil;

namespace {

// Hand-built arcs for the finite-prefix semantics.
HybridArc arc_from(std::vector<std::vector<ArcSample>> segs, ArcFlags flags) {
  HybridArc a;
  for (std::size_t k = 0; k < segs.size(); ++k)
    a.segments.push_back(FlowSegment{static_cast<int>(k), std::move(segs[k])});
  for (std::size_t k = 1; k < a.segments.size(); ++k)
    a.jumps.push_back({a.segments[k].t0(), static_cast<int>(k - 1),
                       a.segments[k - 1].samples.back().x,
                       a.segments[k].samples.front().x, 0});
  a.flags = std::move(flags);
  return a;
}

PropositionPair interval_pq(SpacePtr sp, double p_lo, double p_hi, double q_lo,
                            double q_hi) {
  Region rp, rq;
  rp.cons.push_back(ge(fn_coord(0, 1) - p_lo));
  rp.cons.push_back(le(fn_coord(0, 1) - p_hi));
  rq.cons.push_back(ge(fn_coord(0, 1) - q_lo));
  rq.cons.push_back(le(fn_coord(0, 1) - q_hi));
  return PropositionPair{SetSpec(sp, {rp}, "P"), SetSpec(sp, {rq}, "Q")};
}

}  // namespace

TEST_CASE("strong until satisfied immediately when q holds at the start") {
  auto sp = make_space(1);
  auto pq = interval_pq(sp, 0.0, 1.0, 0.4, 0.6);
  ArcFlags f;
  f.stop_reason = "t_max";
  f.budget_truncated = true;
  f.complete_heuristic = true;
  auto a = arc_from({{{0.0, {0.5}}, {1.0, {0.5}}}}, f);
  auto v = check_strong_until(a, pq);
  CHECK(v.value == Truth::Satisfied);
  REQUIRE(v.witness_time.has_value());
  CHECK(v.witness_time->total() == doctest::Approx(0.0));
}

TEST_CASE("thermostat arcs satisfy strong until with the jump witness") {
  auto sc = build_thermostat();
  SimBudget b;
  auto arcs = simulate(sc.H, {1.0, 0.7}, b);
  REQUIRE_FALSE(arcs.empty());
  auto v = check_strong_until(arcs[0], sc.pq);
  CHECK(v.value == Truth::Satisfied);
  REQUIRE(v.witness_state.has_value());
  // Reaches Q by jumping from (1, z_max) to (0, z_max).
  CHECK((*v.witness_state)[0] == doctest::Approx(0.0));
  CHECK((*v.witness_state)[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("violation is witnessed when p fails before q") {
  auto sp = make_space(1);
  auto pq = interval_pq(sp, 0.0, 0.5, 2.0, 3.0);
  ArcFlags f;
  f.stop_reason = "t_max";
  f.budget_truncated = true;
  f.complete_heuristic = true;
  // Flow 0 -> 1: leaves P at 0.5 before ever reaching Q at 2.
  std::vector<ArcSample> seg;
  for (int k = 0; k <= 20; ++k) seg.push_back({0.05 * k, {0.05 * k}});
  auto a = arc_from({seg}, f);
  auto vs = check_strong_until(a, pq);
  CHECK(vs.value == Truth::Violated);
  REQUIRE(vs.witness_state.has_value());
  CHECK((*vs.witness_state)[0] == doctest::Approx(0.5).epsilon(1e-6));
  auto vw = check_weak_until(a, pq);
  CHECK(vw.value == Truth::Violated);
}

TEST_CASE("finite-prefix semantics: truncated vs complete vs maximal") {
  auto sp = make_space(1);
  auto pq = interval_pq(sp, 0.0, 2.0, 5.0, 6.0);
  std::vector<ArcSample> seg{{0.0, {1.0}}, {1.0, {1.0}}};

  ArcFlags truncated;
  truncated.stop_reason = "t_max";
  truncated.budget_truncated = true;
  truncated.complete_heuristic = false;
  auto a1 = arc_from({seg}, truncated);
  CHECK(check_strong_until(a1, pq).value == Truth::Unknown);
  CHECK(check_weak_until(a1, pq).value == Truth::Unknown);

  ArcFlags complete = truncated;
  complete.complete_heuristic = true;
  auto a2 = arc_from({seg}, complete);
  CHECK(check_strong_until(a2, pq).value == Truth::Unknown);
  CHECK(check_weak_until(a2, pq).value == Truth::Satisfied);  // p forever

  ArcFlags dead;
  dead.stop_reason = "dead_end";
  dead.maximal_heuristic = true;
  auto a3 = arc_from({seg}, dead);
  // A maximal prefix that never reaches q decides the strong formula.
  CHECK(check_strong_until(a3, pq).value == Truth::Violated);
  CHECK(check_weak_until(a3, pq).value == Truth::Satisfied);
}

TEST_CASE("start outside the arc domain is rejected") {
  auto sp = make_space(1);
  auto pq = interval_pq(sp, 0.0, 1.0, 2.0, 3.0);
  ArcFlags f;
  f.stop_reason = "t_max";
  auto a = arc_from({{{0.0, {0.5}}, {1.0, {0.6}}}}, f);
  CHECK_THROWS_AS(check_strong_until(a, pq, HybridTime{5.0, 0}),
                  std::invalid_argument);
}

TEST_CASE("aggregate monitor over sampled initial conditions") {
  SUBCASE("timer: weak until satisfied over the whole sampler") {
    auto sc = build_timer();
    auto agg = check_formula_over(sc.H, sc.pq, GridSpec{sc.H.bounding_box, 20, 2},
                                  UntilMode::Weak, sc.budget);
    CHECK(agg.value == Truth::Satisfied);
    CHECK(agg.per_init.size() >= 20);
  }
  SUBCASE("thermostat: strong until satisfied") {
    auto sc = build_thermostat();
    auto agg = check_formula_over(sc.H, sc.pq, GridSpec{sc.H.bounding_box, 16, 2},
                                  UntilMode::Strong, sc.budget);
    CHECK(agg.value == Truth::Satisfied);
  }
  SUBCASE("counterexample systems stay satisfied under branching") {
    auto w = build_counterexample_weak();
    CHECK(check_formula_over(w.H, w.pq, GridSpec{w.H.bounding_box, 16, 2},
                             UntilMode::Weak, w.budget)
              .value == Truth::Satisfied);
    auto s = build_counterexample_strong();
    CHECK(check_formula_over(s.H, s.pq, GridSpec{s.H.bounding_box, 16, 2},
                             UntilMode::Strong, s.budget)
              .value == Truth::Satisfied);
  }
  SUBCASE("empty sampler is an error") {
    auto sc = build_timer();
    PropositionPair far = sc.pq;
    Region r;
    r.cons.push_back(ge(fn_coord(0, 1) - 100.0));
    far.P = SetSpec(sc.H.space, {r}, "farP");
    far.Q = SetSpec(sc.H.space, {r}, "farQ");
    CHECK_THROWS_AS(check_formula_over(sc.H, far, GridSpec{sc.H.bounding_box, 8, 2},
                                       UntilMode::Weak, sc.budget),
                    std::invalid_argument);
  }
}

namespace {

// Randomized piecewise-linear 1-D arcs for the semantic properties.
HybridArc random_arc(std::mt19937_64& rng, bool complete) {
  std::uniform_real_distribution<double> ux(-2.0, 2.0);
  std::uniform_int_distribution<int> usegs(1, 4);
  std::uniform_int_distribution<int> usamps(2, 6);
  std::vector<std::vector<ArcSample>> segs;
  double t = 0;
  int nseg = usegs(rng);
  for (int s = 0; s < nseg; ++s) {
    std::vector<ArcSample> seg;
    int n = usamps(rng);
    for (int k = 0; k < n; ++k) {
      seg.push_back({t, {ux(rng)}});
      t += 0.25;
    }
    t -= 0.25;  // jumps do not advance t
    segs.push_back(std::move(seg));
  }
  ArcFlags f;
  f.stop_reason = complete ? "t_max" : "truncated";
  f.budget_truncated = true;
  f.complete_heuristic = complete;
  return arc_from(std::move(segs), f);
}

}  // namespace

TEST_CASE("strong implies weak and verdicts are prefix-monotone (randomized)") {
  auto sp = make_space(1);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ub(-2.0, 2.0);
  int strong_sat = 0, violated = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    double p_lo = ub(rng), q_lo = ub(rng);
    auto pq = interval_pq(sp, std::min(p_lo, p_lo + 1.5), std::max(p_lo, p_lo + 1.5),
                          std::min(q_lo, q_lo + 0.8), std::max(q_lo, q_lo + 0.8));
    HybridArc a = random_arc(rng, trial % 2 == 0);
    auto vs = check_strong_until(a, pq);
    auto vw = check_weak_until(a, pq);
    if (vs.value == Truth::Satisfied) {
      ++strong_sat;
      CHECK(vw.value == Truth::Satisfied);
    }

    // Extended arc: append one more flow segment after a jump.
    HybridArc ext = a;
    double t_end = ext.segments.back().t1();
    const Vec x_end = ext.segments.back().samples.back().x;
    Vec x_next{x_end[0] + 0.3};
    ext.segments.push_back(
        FlowSegment{static_cast<int>(ext.segments.size()),
                    {{t_end, x_next}, {t_end + 0.25, {x_next[0] - 0.1}}}});
    ext.jumps.push_back({t_end, static_cast<int>(ext.segments.size()) - 2, x_end,
                         x_next, 0});
    auto es = check_strong_until(ext, pq);
    if (vs.value == Truth::Violated) {
      ++violated;
      CHECK(es.value == Truth::Violated);
      // The violation witness never moves later under extension.
      CHECK(es.witness_time->total() <= vs.witness_time->total() + 1e-9);
    }
    if (vs.value == Truth::Satisfied)
      CHECK(es.value == Truth::Satisfied);
  }
  // The generator actually exercises both outcomes.
  CHECK(strong_sat > 50);
  CHECK(violated > 50);
}

TEST_CASE("start-shift consistency on a satisfied arc") {
  auto sc = build_thermostat();
  SimBudget b;
  auto arcs = simulate(sc.H, {1.0, 0.6}, b, BranchPolicy::JumpPriority);
  const auto& a = arcs[0];
  auto v0 = check_strong_until(a, sc.pq);
  REQUIRE(v0.value == Truth::Satisfied);
  double t_star = v0.witness_time->total();
  // Any later start inside P (before the witness) still satisfies.
  for (double s : {0.1, 0.2, 0.3}) {
    if (s >= t_star) continue;
    auto vs = check_strong_until(a, sc.pq, HybridTime{s, 0});
    CHECK(vs.value == Truth::Satisfied);
  }
}
