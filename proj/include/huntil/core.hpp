#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Core vocabulary: state vectors, differentiable scalar fields, implicit set
// specifications with boolean algebra, grids, and tangent-cone tests.

namespace huntil {

using Vec = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Default tolerances, shared across modules.
struct Tol {
  static constexpr double set = 1e-9;    // membership slack
  static constexpr double cert = 1e-7;   // certificate inequality slack
  static constexpr double flow = 1e-6;   // arc flow residual
  static constexpr double jump = 1e-6;   // arc jump residual
  static constexpr double evt = 1e-10;   // event localization (constraint value)
};

double norm(const Vec& a);
double dist2(const Vec& a, const Vec& b);
Vec axpy(double a, const Vec& x, const Vec& y);  // a*x + y
Vec scale(double a, const Vec& x);

// Hybrid time (t, j). Ordered by t+j as induced by hybrid time domains.
struct HybridTime {
  double t = 0.0;
  int j = 0;
  double total() const { return t + static_cast<double>(j); }
};
inline bool operator<=(const HybridTime& a, const HybridTime& b) {
  return a.t <= b.t + 1e-15 && a.j <= b.j;
}

// State space descriptor: dimension plus which coordinates are logically
// discrete (finite value sets, held constant along flows).
struct Space {
  int dim = 0;
  struct Disc {
    int coord;
    std::vector<double> values;
  };
  std::vector<Disc> discrete;

  bool is_discrete(int coord) const;
  const std::vector<double>* values_of(int coord) const;
};
using SpacePtr = std::shared_ptr<const Space>;

SpacePtr make_space(int dim, std::vector<Space::Disc> discrete = {});

// A scalar field with gradient access. Gradients are analytic when the field
// is built from the combinators below, central differences otherwise.
class ScalarFn {
 public:
  ScalarFn() = default;
  ScalarFn(std::function<double(const Vec&)> value,
           std::function<Vec(const Vec&)> gradient, std::string label = {});
  // Finite-difference gradient with step h.
  static ScalarFn from_value(std::function<double(const Vec&)> value,
                             std::string label = {}, double h = 1e-6);

  double operator()(const Vec& x) const { return value_(x); }
  Vec grad(const Vec& x) const { return grad_(x); }
  const std::string& label() const { return label_; }
  bool valid() const { return static_cast<bool>(value_); }

 private:
  std::function<double(const Vec&)> value_;
  std::function<Vec(const Vec&)> grad_;
  std::string label_;
};

// Combinators (all carry analytic gradients).
ScalarFn fn_const(double c);
ScalarFn fn_coord(int i, int dim);
ScalarFn fn_add(ScalarFn a, ScalarFn b);
ScalarFn fn_sub(ScalarFn a, ScalarFn b);
ScalarFn fn_mul(ScalarFn a, ScalarFn b);
ScalarFn fn_scale(double c, ScalarFn a);
ScalarFn fn_shift(ScalarFn a, double c);
ScalarFn fn_square(ScalarFn a);
ScalarFn fn_abs(ScalarFn a);
ScalarFn fn_max(ScalarFn a, ScalarFn b);
ScalarFn fn_min(ScalarFn a, ScalarFn b);
ScalarFn fn_exp(ScalarFn a);

inline ScalarFn operator+(ScalarFn a, ScalarFn b) { return fn_add(std::move(a), std::move(b)); }
inline ScalarFn operator-(ScalarFn a, ScalarFn b) { return fn_sub(std::move(a), std::move(b)); }
inline ScalarFn operator*(ScalarFn a, ScalarFn b) { return fn_mul(std::move(a), std::move(b)); }
inline ScalarFn operator*(double c, ScalarFn a) { return fn_scale(c, std::move(a)); }
inline ScalarFn operator+(ScalarFn a, double c) { return fn_shift(std::move(a), c); }
inline ScalarFn operator-(ScalarFn a, double c) { return fn_shift(std::move(a), -c); }
inline ScalarFn operator-(double c, ScalarFn a) { return fn_shift(fn_scale(-1.0, std::move(a)), c); }

// Relation of a canonical constraint g(x) REL 0.
enum class Rel { Le, Lt, Eq };

struct Constraint {
  ScalarFn g;
  Rel rel = Rel::Le;

  // Satisfied with slack tau; strict relations require margin beyond tau.
  bool satisfied(const Vec& x, double tau) const;
  double value(const Vec& x) const { return g(x); }
};

Constraint le(ScalarFn g);          // g <= 0
Constraint lt(ScalarFn g);          // g < 0
Constraint eq(ScalarFn g);          // g == 0
Constraint ge(ScalarFn g);          // g >= 0  (stored as -g <= 0)
Constraint gt(ScalarFn g);          // g > 0   (stored as -g < 0)

// Restriction of a discrete coordinate to a finite value set.
struct DiscConstraint {
  int coord;
  std::vector<double> values;
  bool satisfied(const Vec& x, double tau) const;
};

// Conjunction of constraints.
struct Region {
  std::vector<Constraint> cons;
  std::vector<DiscConstraint> disc;
  bool contains(const Vec& x, double tau) const;
};

// Axis-aligned box, used for grids and truncation of unbounded sets.
struct Box {
  Vec lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
  double diameter() const;
  bool contains(const Vec& x, double tau = 0.0) const;
};

// Implicit set: finite union of constraint-conjunction regions.
class SetSpec {
 public:
  SetSpec() = default;
  SetSpec(SpacePtr space, std::vector<Region> regions, std::string name = {});

  static SetSpec empty(SpacePtr space, std::string name = "empty");
  static SetSpec whole(SpacePtr space, std::string name = "Rn");

  bool contains(const Vec& x, double tau = Tol::set) const;
  bool is_empty_spec() const { return regions_.empty(); }
  // All relations non-strict, so the description denotes a closed set.
  bool syntactically_closed() const;

  SetSpec closure() const;     // relax strict relations
  SetSpec complement() const;  // De Morgan over regions (needs discrete universe)
  const std::vector<Region>& regions() const { return regions_; }
  const SpacePtr& space() const { return space_; }
  const std::string& name() const { return name_; }
  SetSpec renamed(std::string name) const;

  friend SetSpec set_union(const SetSpec& a, const SetSpec& b);
  friend SetSpec set_intersect(const SetSpec& a, const SetSpec& b);
  friend SetSpec set_difference(const SetSpec& a, const SetSpec& b);

 private:
  SpacePtr space_;
  std::vector<Region> regions_;
  std::string name_;
};

SetSpec set_union(const SetSpec& a, const SetSpec& b);
SetSpec set_intersect(const SetSpec& a, const SetSpec& b);
SetSpec set_difference(const SetSpec& a, const SetSpec& b);

// Convenience builders on a space.
SetSpec box_set(SpacePtr space, const Box& b, std::string name = {});
SetSpec halfplane(SpacePtr space, int coord, double bound, bool upper,
                  std::string name = {});  // upper: x_i <= bound, else x_i >= bound

// Approximate distance from x to S via per-region projection search.
// Returns +inf when the local search does not converge.
double set_distance(const SetSpec& S, const Vec& x, int max_iter = 40);

// Bouligand tangent cone membership, tested by perturbed small steps:
// for every h in h_seq, dist(x + h v, S) <= h * tol * (1 + |v|).
struct TangentConeParams {
  std::vector<double> h_seq{1e-3, 1e-4, 1e-5};
  double tol = 1e-3;
};
bool tangent_cone_member(const SetSpec& S, const Vec& x, const Vec& v,
                         const TangentConeParams& p = {}, double tau_set = Tol::set);

// Grid specification for sampling-based checks.
struct GridSpec {
  Box box;
  int res = 64;              // points per continuous dimension
  int boundary_refine = 4;   // local refinement factor near constraint zero sets
  std::size_t max_samples = 200000;
};

// Samples of S within the grid box: lattice members, locally refined points
// near constraint boundaries, and solved points on equality constraints.
std::vector<Vec> sample_set(const SetSpec& S, const GridSpec& grid,
                            double tau = Tol::set);
// Lattice over the whole box (discrete coords enumerated), no membership filter.
std::vector<Vec> sample_box(const SpacePtr& space, const GridSpec& grid);

// Points on the (slice-wise) boundary of S inside the box: zeros of active
// constraints that still satisfy the remaining ones.
std::vector<Vec> sample_boundary(const SetSpec& S, const GridSpec& grid,
                                 double tau = Tol::set);

}  // namespace huntil
