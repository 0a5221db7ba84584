#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "huntil/scenarios.hpp"
#include "huntil/sim.hpp"

using namespace huntil;

TEST_CASE("timer arc flows to one, resets, and repeats") {
  auto sc = build_timer();
  SimBudget b;
  auto arcs = simulate(sc.H, {0.3}, b);
  REQUIRE(arcs.size() == 1);
  const auto& a = arcs[0];
  CHECK(a.jumps.size() == 20);  // first at t = 0.7, then every second
  CHECK(a.jumps[0].t == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(a.jumps[1].t == doctest::Approx(1.7).epsilon(1e-9));
  for (const auto& j : a.jumps) {
    CHECK(j.pre[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(j.post[0] == doctest::Approx(0.0));
  }
  CHECK(a.flags.stop_reason == "t_max");
  CHECK(a.flags.unbounded_both);
  CHECK_FALSE(a.flags.eventually_continuous);
  CHECK_FALSE(a.flags.genuinely_zeno);
}

TEST_CASE("bouncing ball is genuinely Zeno with geometric gaps") {
  auto sc = build_bouncing_ball();  // gamma = 1, lambda = 1/2
  SimBudget b;
  auto arcs = simulate(sc.H, {0.0, 2.0}, b);
  REQUIRE_FALSE(arcs.empty());
  const auto& a = arcs[0];
  // Oracle: ballistic flight time per hop is 2 x2 / gamma, speed halves.
  CHECK(a.jumps[0].t == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(a.jumps[1].t == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(a.jumps[2].t == doctest::Approx(7.0).epsilon(1e-9));
  CHECK(a.jumps[0].pre[1] == doctest::Approx(-2.0).epsilon(1e-8));
  CHECK(a.jumps[0].post[1] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(a.flags.genuinely_zeno);
  CHECK(a.flags.stop_reason == "zeno_stop");
  CHECK(a.flags.complete_heuristic);
  // Zeno limit extrapolation: total flight time 4 + 2 + 1 + ... = 8.
  CHECK(a.flags.zeno_limit_t == doctest::Approx(8.0).epsilon(1e-6));
}

TEST_CASE("initial conditions outside cl(C) u D are rejected") {
  auto sc = build_bouncing_ball();
  SimBudget b;
  CHECK_THROWS_AS(simulate(sc.H, {-1.0, 0.0}, b), std::invalid_argument);
}

TEST_CASE("arc validation accepts simulated arcs and catches tampering") {
  auto sc = build_thermostat();
  SimBudget b;
  auto arcs = simulate(sc.H, {1.0, 0.6}, b);
  REQUIRE_FALSE(arcs.empty());
  auto rep = validate_arc(sc.H, arcs[0]);
  CHECK(rep.pass);
  CHECK(rep.flow_inclusion_res <= 1e-6);
  CHECK(rep.jump_map_res <= 1e-6);

  // A jump whose pre-state is in C \ D violates the jump condition.
  HybridArc bad = arcs[0];
  REQUIRE_FALSE(bad.jumps.empty());
  bad.jumps[0].pre = Vec{1.0, 0.8};  // heater on, interior of C, not in D
  auto rep2 = validate_arc(sc.H, bad);
  CHECK_FALSE(rep2.pass);
  CHECK(rep2.jump_set_res > 1e-6);

  // The trivial single-point arc from an admissible point passes.
  HybridArc trivial;
  trivial.segments.push_back(FlowSegment{0, {{0.0, Vec{1.0, 0.6}}}});
  CHECK(validate_arc(sc.H, trivial).pass);
}

TEST_CASE("domain structure: contiguous segments, jumps increment j by one") {
  auto sc = build_bouncing_ball();
  SimBudget b;
  for (const auto& a : simulate(sc.H, {0.1, -0.5}, b)) {
    for (std::size_t k = 0; k < a.segments.size(); ++k) {
      CHECK(a.segments[k].j == static_cast<int>(k));
      if (k > 0)
        CHECK(a.segments[k].t0() ==
              doctest::Approx(a.segments[k - 1].t1()).epsilon(1e-12));
    }
    CHECK(a.jumps.size() + 1 == a.segments.size());
  }
}

TEST_CASE("jump-map soundness on recorded jumps") {
  auto sc = build_bouncing_ball();
  SimBudget b;
  for (const auto& a : simulate(sc.H, {0.0, 2.0}, b))
    for (const auto& j : a.jumps) {
      double best = kInf;
      for (const auto& v : sc.H.G.sample(j.pre)) best = std::min(best, dist2(v, j.post));
      CHECK(best <= 1e-6);
    }
}

TEST_CASE("simulation is deterministic") {
  auto sc = build_thermostat();
  SimBudget b;
  auto a1 = simulate(sc.H, {1.0, 0.6}, b);
  auto a2 = simulate(sc.H, {1.0, 0.6}, b);
  REQUIRE(a1.size() == a2.size());
  for (std::size_t i = 0; i < a1.size(); ++i) {
    REQUIRE(a1[i].segments.size() == a2[i].segments.size());
    for (std::size_t s = 0; s < a1[i].segments.size(); ++s) {
      const auto& sa = a1[i].segments[s].samples;
      const auto& sb = a2[i].segments[s].samples;
      REQUIRE(sa.size() == sb.size());
      for (std::size_t k = 0; k < sa.size(); ++k) {
        CHECK(sa[k].t == sb[k].t);  // bit-identical
        CHECK(sa[k].x == sb[k].x);
      }
    }
  }
}

TEST_CASE("integrator order: halving dt on an exponential flow") {
  // The thermostat flow dz/dt = -z + 2 has a smooth exponential solution, so
  // the one-segment terminal error contracts at fourth order.
  auto sc = build_thermostat();
  auto term = [&](double dt) {
    SimBudget b;
    b.dt = dt;
    b.t_max = 0.3;  // stop before the first jump
    auto arcs = simulate(sc.H, {1.0, 0.3}, b, BranchPolicy::JumpPriority);
    return arcs[0].final_state()[1];
  };
  double exact = 2.0 - 1.7 * std::exp(-0.3);
  double e1 = std::abs(term(0.02) - exact);
  double e2 = std::abs(term(0.01) - exact);
  REQUIRE(e1 > 1e-13);  // above roundoff, the ratio is meaningful
  CHECK(e1 / e2 >= 8.0);
}

TEST_CASE("integrator order: ballistic flight is exact to roundoff") {
  // The flight map is polynomial (nilpotent linear part), so both step sizes
  // reproduce the closed form and the refinement check passes at the floor.
  auto sc = build_bouncing_ball();
  auto term = [&](double dt) {
    SimBudget b;
    b.dt = dt;
    b.t_max = 1.5;
    auto arcs = simulate(sc.H, {0.0, 2.0}, b, BranchPolicy::JumpPriority);
    return arcs[0].final_state();
  };
  Vec exact{2.0 * 1.5 - 0.5 * 1.5 * 1.5, 2.0 - 1.5};
  double e1 = dist2(term(0.02), exact);
  double e2 = dist2(term(0.01), exact);
  CHECK(e1 <= 1e-9);
  CHECK(e2 <= 1e-9);
}

TEST_CASE("settling time of simulated arcs") {
  auto sc = build_bouncing_ball();
  auto sp = sc.H.space;
  Region r;
  r.cons.push_back(le(fn_coord(1, 2)));
  SetSpec A(sp, {r}, "x2<=0");
  SimBudget b;
  auto arcs = simulate(sc.H, {0.0, 2.0}, b, BranchPolicy::JumpPriority);

  SUBCASE("arc starting inside the target settles at zero") {
    auto arcs0 = simulate(sc.H, {1.0, -0.1}, b, BranchPolicy::JumpPriority);
    auto st = settling_time(arcs0[0], A);
    CHECK(st.reached);
    CHECK(st.total == doctest::Approx(0.0));
  }
  SUBCASE("descent from (0,2) reaches x2 = 0 at t = 2") {
    auto st = settling_time(arcs[0], A);
    CHECK(st.reached);
    CHECK(st.total == doctest::Approx(2.0).epsilon(1e-6));
  }
  SUBCASE("unreachable target is flagged against the budget") {
    Region far;
    far.cons.push_back(ge(fn_coord(0, 2) - 100.0));
    SetSpec Afar(sp, {far}, "far");
    auto st = settling_time(arcs[0], Afar);
    CHECK_FALSE(st.reached);
    CHECK(st.total == kInf);
    CHECK(st.budget_truncated);
  }
  SUBCASE("settling never increases when the arc is extended") {
    HybridArc prefix = arcs[0];
    // Keep only the first two segments.
    prefix.segments.resize(2);
    prefix.jumps.resize(1);
    auto st_prefix = settling_time(prefix, A);
    auto st_full = settling_time(arcs[0], A);
    if (st_prefix.reached) CHECK(st_full.total <= st_prefix.total + 1e-9);
  }
}

TEST_CASE("classification of the thermostat cool-down arc") {
  auto sc = build_thermostat();
  SimBudget b;
  auto arcs = simulate(sc.H, {0.0, 1.8}, b, BranchPolicy::JumpPriority);
  REQUIRE_FALSE(arcs.empty());
  const auto& a = arcs[0];
  // Cools to z_min, toggles the heater, then alternates.
  CHECK(a.jumps[0].pre[1] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(a.flags.complete_heuristic);
  CHECK_FALSE(a.flags.genuinely_zeno);
  CHECK(a.flags.unbounded_both);
}

TEST_CASE("reachable samples from the bouncing-ball strip stay below the energy cap") {
  auto sc = build_bouncing_ball();
  GridSpec g{sc.H.bounding_box, 8, 2};
  auto inits = sample_set(sc.sets.at("O41"), g);
  REQUIRE_FALSE(inits.empty());
  SimBudget b;
  auto pts = reachable_sample(sc.H, inits, b);
  REQUIRE_FALSE(pts.empty());
  for (const auto& p : pts) CHECK(2.0 * p[0] + p[1] * p[1] <= 9.0 + 1e-6);
}

TEST_CASE("reachable set of an equilibrium is a single point") {
  auto sp = make_space(1);
  Region c;
  c.cons.push_back(ge(fn_coord(0, 1)));
  HybridSystem H;
  H.space = sp;
  H.C = SetSpec(sp, {c}, "C");
  H.D = SetSpec::empty(sp, "D");
  H.F = single_map([](const Vec&) { return Vec{0.0}; });
  H.G = single_map([](const Vec& x) { return x; });
  H.bounding_box = Box{{-1.0}, {1.0}};
  SimBudget b;
  b.t_max = 2.0;
  auto pts = reachable_sample(H, {{0.5}}, b);
  for (const auto& p : pts) CHECK(p[0] == doctest::Approx(0.5));
}

TEST_CASE("finite escape is flagged") {
  auto sp = make_space(1);
  Region c;
  c.cons.push_back(ge(fn_coord(0, 1) - 1.0));
  HybridSystem H;
  H.space = sp;
  H.C = SetSpec(sp, {c}, "C");
  H.D = SetSpec::empty(sp, "D");
  H.F = single_map([](const Vec& x) { return Vec{x[0] * x[0]}; });
  H.G = single_map([](const Vec& x) { return x; });
  H.bounding_box = Box{{0.0}, {10.0}};
  SimBudget b;
  auto arcs = simulate(H, {2.0}, b);
  REQUIRE(arcs.size() == 1);
  CHECK(arcs[0].flags.finite_escape);
  CHECK_FALSE(arcs[0].flags.complete_heuristic);
}

TEST_CASE("branch policy explores both flow and jumps from C & D") {
  auto sc = build_counterexample_weak();  // D = [1, inf) inside C
  SimBudget b;
  auto arcs = simulate(sc.H, {1.5}, b, BranchPolicy::Branch);
  bool any_jumped = false, any_flowed_past = false;
  for (const auto& a : arcs) {
    if (!a.jumps.empty() && a.jumps[0].t < 1e-9) any_jumped = true;
    if (a.jumps.empty() && a.sup_t() >= b.t_max - 1e-6) any_flowed_past = true;
  }
  CHECK(any_jumped);
  CHECK(any_flowed_past);

  auto jp = simulate(sc.H, {1.5}, b, BranchPolicy::JumpPriority);
  REQUIRE(jp.size() == 1);
  CHECK(jp[0].jumps.size() >= 10);  // jumps immediately, then cycles via x = 1
  CHECK(jp[0].jumps[0].t == doctest::Approx(0.0));
}
