#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "huntil/aux_systems.hpp"
#include "huntil/scenarios.hpp"

using namespace huntil;

TEST_CASE("derived system of the timer freezes the jump on Q") {
  auto sc = build_timer();
  auto Hw = build_Hw(sc.H, sc.pq.Q);
  // C_w = [0,1), D_w = [1,inf), identity jumps there.
  CHECK(Hw.C.contains({0.5}));
  CHECK_FALSE(Hw.C.contains({1.0}));
  CHECK(Hw.D.contains({1.0}));
  CHECK(Hw.G.sample({1.2}).front()[0] == doctest::Approx(1.2));
}

TEST_CASE("derived systems of the bouncing ball match the published sets") {
  auto sc = build_bouncing_ball();
  auto Hw = build_Hw(sc.H, sc.pq.Q);
  // C_w = R>=0 x R<0.
  CHECK(Hw.C.contains({0.5, -0.1}));
  CHECK_FALSE(Hw.C.contains({0.5, 0.0}));
  CHECK_FALSE(Hw.C.contains({-0.1, -0.1}));
  // D_w = ({0} x R<0) u (R>=0 x R>=0).
  CHECK(Hw.D.contains({0.0, -1.0}));
  CHECK(Hw.D.contains({0.5, 0.5}));
  CHECK_FALSE(Hw.D.contains({0.5, -0.5}));
  // Identity on Q, the restitution map on D \ Q.
  CHECK(Hw.G.sample({0.5, 0.5}).front() == Vec{0.5, 0.5});
  CHECK(Hw.G.sample({0.0, -1.0}).front()[1] == doctest::Approx(0.5));
}

TEST_CASE("empty Q leaves the system unchanged up to membership") {
  auto sc = build_timer();
  SetSpec empty = SetSpec::empty(sc.H.space, "empty");
  auto Hw = build_Hw(sc.H, empty);
  for (double x : {0.0, 0.3, 0.9, 1.0, 1.5}) {
    CHECK(Hw.C.contains({x}) == sc.H.C.contains({x}));
    CHECK(Hw.D.contains({x}) == sc.H.D.contains({x}));
    if (sc.H.D.contains({x}))
      CHECK(Hw.G.sample({x}).front() == sc.H.G.sample({x}).front());
  }
}

TEST_CASE("restriction identities of the strong-route system") {
  auto sc = build_thermostat();
  auto Hw = build_Hw(sc.H, sc.pq.Q);
  auto Hs = build_Hs(sc.H, sc.pq.P, sc.pq.Q);
  // Published form: C_s = {1} x (-inf, z_max], D_s = ({0} x [z_min, inf)) u
  // {(1, z_max)}.
  CHECK(Hs.C.contains({1.0, 0.3}));
  CHECK(Hs.C.contains({1.0, 1.0}));
  CHECK_FALSE(Hs.C.contains({0.0, 0.8}));
  CHECK(Hs.D.contains({0.0, 0.7}));
  CHECK(Hs.D.contains({1.0, 1.0}));
  CHECK_FALSE(Hs.D.contains({1.0, 0.9}));
  CHECK_FALSE(Hs.D.contains({0.0, 0.4}));

  // C_s = C_w & (P u Q), D_s = D_w & (P u Q), pointwise on a grid.
  SetSpec PQ = set_union(sc.pq.P, sc.pq.Q);
  GridSpec g{sc.H.bounding_box, 24, 2};
  for (const auto& x : sample_box(sc.H.space, g)) {
    CHECK(Hs.C.contains(x) == (Hw.C.contains(x) && PQ.contains(x)));
    CHECK(Hs.D.contains(x) == (Hw.D.contains(x) && PQ.contains(x)));
    if (Hs.C.contains(x)) CHECK(Hw.C.contains(x));
    if (Hs.D.contains(x)) CHECK(Hw.D.contains(x));
    if (sc.pq.Q.contains(x)) {
      auto gs = Hs.G.sample(x);
      REQUIRE_FALSE(gs.empty());
      CHECK(gs.front() == x);  // identity, exactly
    }
  }
}

TEST_CASE("one-dimensional counterexample restriction") {
  auto sc = build_counterexample_strong();  // eps = 1/2
  auto Hs = build_Hs(sc.H, sc.pq.P, sc.pq.Q);
  // C_s = (0, 1.5): both endpoints excluded.
  CHECK(Hs.C.contains({0.7}));
  CHECK_FALSE(Hs.C.contains({0.0}));
  CHECK_FALSE(Hs.C.contains({1.5}));
  // D_s = [-1, 0] u [1, inf).
  CHECK(Hs.D.contains({0.0}));
  CHECK(Hs.D.contains({-0.5}));
  CHECK(Hs.D.contains({1.2}));
  CHECK_FALSE(Hs.D.contains({0.5}));
}

TEST_CASE("reduced comparison system iterates the jump map") {
  // Energy-style data: flow keeps y, jumps divide by four; from y0 = 9 the
  // iterates are 2.25, 0.5625, 0.140625, so convergence below 1/2 takes
  // exactly three jumps.
  double y = 9.0;
  int jumps = 0;
  while (y >= 0.5) {
    y /= 4.0;
    ++jumps;
  }
  CHECK(jumps == 3);
  CHECK(y == doctest::Approx(0.140625));

  FlowLengthSet I;
  I.intervals = {{1.0, 6.6}};
  auto Hr = build_Hr([](double) { return 0.0; }, [](double yy) { return yy / 4.0; },
                     I);
  SimBudget b;
  b.t_max = 50;
  auto arcs = simulate(Hr, {9.0, 0.0}, b, BranchPolicy::JumpPriority);
  REQUIRE_FALSE(arcs.empty());
  Region target;
  target.cons.push_back(le(fn_coord(0, 2) - 0.5 + 1e-7));
  SetSpec S(Hr.space, {target}, "y<1/2");
  auto st = settling_time(arcs[0], S);
  CHECK(st.reached);
  CHECK(st.when.j == 3);

  CHECK_THROWS_AS(build_Hr([](double) { return 0.0; },
                           [](double yy) { return yy; }, FlowLengthSet{}),
                  std::invalid_argument);
}

TEST_CASE("reduced system with exponential flow decays between jumps") {
  FlowLengthSet I;
  I.intervals = {{1.0, 1.0}};
  auto Hr = build_Hr([](double yy) { return -yy; },
                     [](double yy) { return 0.5 * yy; }, I);
  SimBudget b;
  b.t_max = 3.5;
  auto arcs = simulate(Hr, {1.0, 0.0}, b, BranchPolicy::JumpPriority);
  const auto& a = arcs[0];
  REQUIRE(a.jumps.size() >= 2);
  // One unit of flow decays by e^{-1}, then the jump halves.
  CHECK(a.jumps[0].pre[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
  CHECK(a.jumps[0].post[0] == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("solutions of the base and derived systems coincide before Q") {
  SimBudget b;
  SUBCASE("bouncing ball against the frozen system") {
    auto sc = build_bouncing_ball();
    auto Hw = build_Hw(sc.H, sc.pq.Q);
    auto rep = correspondence_test(sc.H, Hw, sc.pq.Q, {0.1, -0.5}, b);
    CHECK(rep.match);
    CHECK(rep.max_deviation <= 1e-6);
  }
  SUBCASE("thermostat against the restriction") {
    auto sc = build_thermostat();
    auto Hs = build_Hs(sc.H, sc.pq.P, sc.pq.Q);
    auto rep = correspondence_test(sc.H, Hs, sc.pq.Q, {1.0, 0.8}, b);
    CHECK(rep.match);
  }
  SUBCASE("starting inside Q the overlap is trivial") {
    auto sc = build_bouncing_ball();
    auto Hw = build_Hw(sc.H, sc.pq.Q);
    auto rep = correspondence_test(sc.H, Hw, sc.pq.Q, {1.0, 1.0}, b);
    CHECK(rep.match);
  }
}

TEST_CASE("arcs of the frozen system that avoid Q validate against the base system") {
  auto sc = build_bouncing_ball();
  auto Hw = build_Hw(sc.H, sc.pq.Q);
  SimBudget b;
  b.t_max = 0.15;  // stop before the ball reaches the ground
  auto arcs = simulate(Hw, {0.1, -0.5}, b, BranchPolicy::JumpPriority);
  REQUIRE_FALSE(arcs.empty());
  CHECK(arcs[0].jumps.empty());
  auto rep = validate_arc(sc.H, arcs[0]);
  CHECK(rep.pass);
  auto rep2 = validate_arc(Hw, arcs[0]);
  CHECK(rep2.pass);
}

TEST_CASE("flow length sets answer membership with closed intervals") {
  FlowLengthSet I;
  I.intervals = {{1.0, 2.0}, {4.0, 5.0}};
  CHECK(I.contains(1.5));
  CHECK(I.contains(2.0));
  CHECK_FALSE(I.contains(3.0));
  CHECK(I.sup() == doctest::Approx(5.0));
}
