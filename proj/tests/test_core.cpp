#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "huntil/core.hpp"
#include "huntil/system.hpp"

using namespace huntil;

namespace {

SetSpec interval(SpacePtr sp, double lo, double hi, const std::string& name = "I") {
  Region r;
  r.cons.push_back(ge(fn_coord(0, 1) - lo));
  r.cons.push_back(le(fn_coord(0, 1) - hi));
  return SetSpec(sp, {r}, name);
}

}  // namespace

TEST_CASE("set membership with tolerance") {
  auto sp = make_space(1);
  SetSpec I = interval(sp, 0.0, 1.0);
  CHECK(I.contains({0.5}, 1e-9));
  CHECK_FALSE(I.contains({1.0 + 1e-6}, 1e-9));
  CHECK(I.contains({1.0 + 1e-10}, 1e-9));  // within slack

  // Bouncing-ball jump set: x1 = 0 and x2 <= 0.
  auto sp2 = make_space(2);
  Region d;
  d.cons.push_back(eq(fn_coord(0, 2)));
  d.cons.push_back(le(fn_coord(1, 2)));
  SetSpec D(sp2, {d}, "D");
  CHECK(D.contains({0.0, -1.0}));
  CHECK_FALSE(D.contains({0.1, -1.0}));
  CHECK_FALSE(D.contains({0.0, 0.5}));

  CHECK_THROWS_AS(D.contains({0.0}), std::invalid_argument);
}

TEST_CASE("strict constraints demand a margin") {
  auto sp = make_space(1);
  Region r;
  r.cons.push_back(gt(fn_coord(0, 1)));  // x > 0
  SetSpec open_ray(sp, {r}, "x>0");
  CHECK(open_ray.contains({1e-6}, 1e-9));
  CHECK_FALSE(open_ray.contains({0.0}, 1e-9));
  CHECK_FALSE(open_ray.contains({5e-10}, 1e-9));  // inside, but not beyond the margin
  CHECK_FALSE(open_ray.syntactically_closed());
  CHECK(open_ray.closure().contains({0.0}, 1e-9));
  CHECK(open_ray.closure().syntactically_closed());
}

TEST_CASE("boolean algebra laws on sampled points") {
  auto sp = make_space(1);
  SetSpec A = interval(sp, -1.0, 0.5, "A");
  SetSpec B = interval(sp, 0.0, 2.0, "B");
  SetSpec U = set_union(A, B);
  SetSpec N = set_intersect(A, B);
  SetSpec Dif = set_difference(A, B);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 3.0);
  for (int k = 0; k < 500; ++k) {
    Vec x{u(rng)};
    bool a = A.contains(x), b = B.contains(x);
    CHECK(U.contains(x) == (a || b));
    CHECK(N.contains(x) == (a && b));
    CHECK(Dif.contains(x) == (a && !B.contains(x)));
    CHECK(A.complement().contains(x) == !a);
  }
}

TEST_CASE("complement respects the discrete universe") {
  auto sp = make_space(2, {Space::Disc{0, {0.0, 1.0}}});
  Region q;
  q.disc.push_back(DiscConstraint{0, {0.0}});
  q.cons.push_back(ge(fn_coord(1, 2) - 0.5));
  SetSpec Q(sp, {q}, "Q");
  SetSpec notQ = Q.complement();
  CHECK(notQ.contains({1.0, 2.0}));   // other discrete value
  CHECK(notQ.contains({0.0, 0.2}));   // below the threshold
  CHECK_FALSE(notQ.contains({0.0, 2.0}));
}

TEST_CASE("tangent cone at a half-line boundary") {
  auto sp = make_space(1);
  Region r;
  r.cons.push_back(ge(fn_coord(0, 1)));
  SetSpec ray(sp, {r}, "x>=0");
  CHECK(tangent_cone_member(ray, {0.0}, {1.0}));
  CHECK_FALSE(tangent_cone_member(ray, {0.0}, {-1.0}));
  CHECK_THROWS_AS(tangent_cone_member(ray, {-1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("tangent cone of the planar wedge admits the flow direction") {
  // C = {x1 >= 0, x1 >= x2}, x = (0,-1), v = F(x) = (1, 1).
  auto sp = make_space(2);
  Region r;
  r.cons.push_back(ge(fn_coord(0, 2)));
  r.cons.push_back(le(fn_coord(1, 2) - fn_coord(0, 2)));
  SetSpec C(sp, {r}, "C");
  Vec x{0.0, -1.0};
  Vec v{1.0, 1.0};
  // Oracle: direct membership of x + h v for the probe steps.
  for (double h : {1e-3, 1e-4, 1e-5, 1e-6}) CHECK(C.contains(axpy(h, v, x)));
  CHECK(tangent_cone_member(C, x, v));
  CHECK_FALSE(tangent_cone_member(C, x, {-1.0, 0.0}));
}

TEST_CASE("tangent cone is full at interior points") {
  auto sp = make_space(2);
  Region r;
  r.cons.push_back(ge(fn_coord(0, 2)));
  SetSpec C(sp, {r}, "C");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    Vec v{u(rng), u(rng)};
    CHECK(tangent_cone_member(C, {0.5, 0.0}, v));
  }
}

TEST_CASE("hybrid time ordering matches the domain order") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ut(0.0, 10.0);
  std::uniform_int_distribution<int> uj(0, 10);
  for (int k = 0; k < 200; ++k) {
    HybridTime a{ut(rng), uj(rng)}, b{ut(rng), uj(rng)};
    if (a.t <= b.t && a.j <= b.j) CHECK(a.total() <= b.total() + 1e-12);
    CHECK(a <= a);
  }
}

TEST_CASE("boundary shell construction") {
  auto sp = make_space(1);
  SetSpec C = interval(sp, 0.0, 10.0, "C");
  ScalarFn B = fn_coord(0, 1) - 0.3;  // zero level at x = 0.3
  SetSpec shell = boundary_shell(C, B, 0.1);
  CHECK(shell.contains({0.35}));
  CHECK_FALSE(shell.contains({0.3}));   // B = 0 excluded
  CHECK_FALSE(shell.contains({0.45}));  // beyond the shell width
  CHECK_FALSE(shell.contains({0.2}));   // inside the zero sublevel set

  CHECK_THROWS_AS(boundary_shell(C, B, 0.0), std::invalid_argument);

  // No zero level set inside C: the shell has no members, checks are vacuous.
  ScalarFn far = fn_coord(0, 1) - 100.0;
  SetSpec empty_shell = boundary_shell(C, far, 0.1);
  GridSpec g{Box{{-1.0}, {11.0}}, 64, 4};
  CHECK(sample_set(empty_shell, g).empty());
}

TEST_CASE("set distance via projection search") {
  auto sp = make_space(2);
  Region r;
  r.cons.push_back(eq(fn_coord(0, 2)));
  r.cons.push_back(le(fn_coord(1, 2)));
  SetSpec D(sp, {r}, "D");
  CHECK(set_distance(D, {0.0, -1.0}) == doctest::Approx(0.0));
  CHECK(set_distance(D, {0.3, -1.0}) == doctest::Approx(0.3).epsilon(1e-3));
}

TEST_CASE("grid sampling finds measure-zero equality sets") {
  auto sp = make_space(2);
  Region r;
  r.cons.push_back(eq(fn_coord(0, 2)));
  r.cons.push_back(le(fn_coord(1, 2)));
  SetSpec D(sp, {r}, "D");
  GridSpec g{Box{{-1.0, -2.0}, {3.0, 2.0}}, 16, 4};
  auto xs = sample_set(D, g);
  REQUIRE_FALSE(xs.empty());
  for (const auto& x : xs) {
    CHECK(std::abs(x[0]) <= 1e-8);
    CHECK(x[1] <= 1e-8);
  }
}

TEST_CASE("scalar combinators carry consistent gradients") {
  auto sp = make_space(2);
  ScalarFn x1 = fn_coord(0, 2), x2 = fn_coord(1, 2);
  ScalarFn f = 2.0 * x1 + fn_square(x2) - 1.0;
  Vec at{0.7, -1.3};
  Vec gr = f.grad(at);
  CHECK(gr[0] == doctest::Approx(2.0));
  CHECK(gr[1] == doctest::Approx(-2.6));
  ScalarFn m = fn_max(f, fn_const(0.0));
  CHECK(m({0.0, 0.1}) == doctest::Approx(0.0));
  CHECK(m({1.0, 1.0}) == doctest::Approx(2.0));
  (void)sp;
}
