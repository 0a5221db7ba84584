#include "huntil/core.hpp"

#include <algorithm>
#include <cassert>

namespace huntil {

double norm(const Vec& a) {
  double s = 0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

double dist2(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

Vec axpy(double a, const Vec& x, const Vec& y) {
  Vec r(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) r[i] = a * x[i] + y[i];
  return r;
}

Vec scale(double a, const Vec& x) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i];
  return r;
}

bool Space::is_discrete(int coord) const {
  for (const auto& d : discrete)
    if (d.coord == coord) return true;
  return false;
}

const std::vector<double>* Space::values_of(int coord) const {
  for (const auto& d : discrete)
    if (d.coord == coord) return &d.values;
  return nullptr;
}

SpacePtr make_space(int dim, std::vector<Space::Disc> discrete) {
  auto s = std::make_shared<Space>();
  s->dim = dim;
  s->discrete = std::move(discrete);
  return s;
}

ScalarFn::ScalarFn(std::function<double(const Vec&)> value,
                   std::function<Vec(const Vec&)> gradient, std::string label)
    : value_(std::move(value)), grad_(std::move(gradient)), label_(std::move(label)) {}

ScalarFn ScalarFn::from_value(std::function<double(const Vec&)> value,
                              std::string label, double h) {
  auto v = value;
  auto g = [v, h](const Vec& x) {
    Vec grad(x.size());
    Vec xp = x, xm = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
      xp[i] = x[i] + h;
      xm[i] = x[i] - h;
      grad[i] = (v(xp) - v(xm)) / (2 * h);
      xp[i] = x[i];
      xm[i] = x[i];
    }
    return grad;
  };
  return ScalarFn(std::move(value), std::move(g), std::move(label));
}

ScalarFn fn_const(double c) {
  return ScalarFn([c](const Vec&) { return c; },
                  [](const Vec& x) { return Vec(x.size(), 0.0); },
                  "const");
}

ScalarFn fn_coord(int i, int dim) {
  return ScalarFn([i](const Vec& x) { return x[i]; },
                  [i, dim](const Vec&) {
                    Vec g(dim, 0.0);
                    g[i] = 1.0;
                    return g;
                  },
                  "x" + std::to_string(i));
}

ScalarFn fn_add(ScalarFn a, ScalarFn b) {
  return ScalarFn([a, b](const Vec& x) { return a(x) + b(x); },
                  [a, b](const Vec& x) {
                    Vec g = a.grad(x), gb = b.grad(x);
                    for (std::size_t i = 0; i < g.size(); ++i) g[i] += gb[i];
                    return g;
                  });
}

ScalarFn fn_sub(ScalarFn a, ScalarFn b) {
  return ScalarFn([a, b](const Vec& x) { return a(x) - b(x); },
                  [a, b](const Vec& x) {
                    Vec g = a.grad(x), gb = b.grad(x);
                    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= gb[i];
                    return g;
                  });
}

ScalarFn fn_mul(ScalarFn a, ScalarFn b) {
  return ScalarFn([a, b](const Vec& x) { return a(x) * b(x); },
                  [a, b](const Vec& x) {
                    double va = a(x), vb = b(x);
                    Vec g = a.grad(x), gb = b.grad(x);
                    for (std::size_t i = 0; i < g.size(); ++i) g[i] = g[i] * vb + gb[i] * va;
                    return g;
                  });
}

ScalarFn fn_scale(double c, ScalarFn a) {
  return ScalarFn([c, a](const Vec& x) { return c * a(x); },
                  [c, a](const Vec& x) { return scale(c, a.grad(x)); });
}

ScalarFn fn_shift(ScalarFn a, double c) {
  return ScalarFn([c, a](const Vec& x) { return a(x) + c; },
                  [a](const Vec& x) { return a.grad(x); });
}

ScalarFn fn_square(ScalarFn a) {
  return ScalarFn([a](const Vec& x) { double v = a(x); return v * v; },
                  [a](const Vec& x) { return scale(2.0 * a(x), a.grad(x)); });
}

ScalarFn fn_abs(ScalarFn a) {
  return ScalarFn([a](const Vec& x) { return std::abs(a(x)); },
                  [a](const Vec& x) {
                    double s = a(x) >= 0 ? 1.0 : -1.0;
                    return scale(s, a.grad(x));
                  });
}

ScalarFn fn_max(ScalarFn a, ScalarFn b) {
  return ScalarFn([a, b](const Vec& x) { return std::max(a(x), b(x)); },
                  [a, b](const Vec& x) { return a(x) >= b(x) ? a.grad(x) : b.grad(x); });
}

ScalarFn fn_min(ScalarFn a, ScalarFn b) {
  return ScalarFn([a, b](const Vec& x) { return std::min(a(x), b(x)); },
                  [a, b](const Vec& x) { return a(x) <= b(x) ? a.grad(x) : b.grad(x); });
}

ScalarFn fn_exp(ScalarFn a) {
  return ScalarFn([a](const Vec& x) { return std::exp(a(x)); },
                  [a](const Vec& x) { return scale(std::exp(a(x)), a.grad(x)); });
}

bool Constraint::satisfied(const Vec& x, double tau) const {
  double v = g(x);
  switch (rel) {
    case Rel::Le: return v <= tau;
    case Rel::Lt: return v < -tau;
    case Rel::Eq: return std::abs(v) <= tau;
  }
  return false;
}

Constraint le(ScalarFn g) { return Constraint{std::move(g), Rel::Le}; }
Constraint lt(ScalarFn g) { return Constraint{std::move(g), Rel::Lt}; }
Constraint eq(ScalarFn g) { return Constraint{std::move(g), Rel::Eq}; }
Constraint ge(ScalarFn g) { return Constraint{fn_scale(-1.0, std::move(g)), Rel::Le}; }
Constraint gt(ScalarFn g) { return Constraint{fn_scale(-1.0, std::move(g)), Rel::Lt}; }

bool DiscConstraint::satisfied(const Vec& x, double tau) const {
  for (double v : values)
    if (std::abs(x[coord] - v) <= std::max(tau, 1e-9)) return true;
  return false;
}

bool Region::contains(const Vec& x, double tau) const {
  for (const auto& d : disc)
    if (!d.satisfied(x, tau)) return false;
  for (const auto& c : cons)
    if (!c.satisfied(x, tau)) return false;
  return true;
}

double Box::diameter() const {
  double s = 0;
  for (int i = 0; i < dim(); ++i) s += (hi[i] - lo[i]) * (hi[i] - lo[i]);
  return std::sqrt(s);
}

bool Box::contains(const Vec& x, double tau) const {
  for (int i = 0; i < dim(); ++i)
    if (x[i] < lo[i] - tau || x[i] > hi[i] + tau) return false;
  return true;
}

SetSpec::SetSpec(SpacePtr space, std::vector<Region> regions, std::string name)
    : space_(std::move(space)), regions_(std::move(regions)), name_(std::move(name)) {}

SetSpec SetSpec::empty(SpacePtr space, std::string name) {
  return SetSpec(std::move(space), {}, std::move(name));
}

SetSpec SetSpec::whole(SpacePtr space, std::string name) {
  return SetSpec(std::move(space), {Region{}}, std::move(name));
}

bool SetSpec::contains(const Vec& x, double tau) const {
  if (static_cast<int>(x.size()) != space_->dim)
    throw std::invalid_argument("SetSpec::contains: dimension mismatch");
  for (const auto& r : regions_)
    if (r.contains(x, tau)) return true;
  return false;
}

bool SetSpec::syntactically_closed() const {
  for (const auto& r : regions_)
    for (const auto& c : r.cons)
      if (c.rel == Rel::Lt) return false;
  return true;
}

SetSpec SetSpec::closure() const {
  std::vector<Region> rs = regions_;
  for (auto& r : rs)
    for (auto& c : r.cons)
      if (c.rel == Rel::Lt) c.rel = Rel::Le;
  return SetSpec(space_, std::move(rs), name_.empty() ? "" : "cl(" + name_ + ")");
}

SetSpec SetSpec::renamed(std::string name) const {
  SetSpec s = *this;
  s.name_ = std::move(name);
  return s;
}

SetSpec SetSpec::complement() const {
  // not(g <= 0) is g > 0 i.e. -g < 0; not(g < 0) is -g <= 0; not(g == 0) splits.
  if (regions_.empty()) return whole(space_, "Rn");
  std::vector<Region> acc{Region{}};
  for (const auto& r : regions_) {
    // Complement of one region: disjunction of negated atoms.
    std::vector<Region> alts;
    for (const auto& c : r.cons) {
      if (c.rel == Rel::Le) {
        Region a; a.cons.push_back(gt(c.g)); alts.push_back(a);
      } else if (c.rel == Rel::Lt) {
        Region a; a.cons.push_back(ge(c.g)); alts.push_back(a);
      } else {
        Region a; a.cons.push_back(gt(c.g)); alts.push_back(a);
        Region b; b.cons.push_back(lt(c.g)); alts.push_back(b);
      }
    }
    for (const auto& d : r.disc) {
      const auto* universe = space_->values_of(d.coord);
      if (!universe) continue;
      std::vector<double> rest;
      for (double u : *universe) {
        bool in = false;
        for (double v : d.values)
          if (std::abs(u - v) <= 1e-12) in = true;
        if (!in) rest.push_back(u);
      }
      if (!rest.empty()) {
        Region a; a.disc.push_back(DiscConstraint{d.coord, rest}); alts.push_back(a);
      }
    }
    if (alts.empty()) return empty(space_, "empty");  // region was the whole space
    // acc = acc AND (union of alts): distribute.
    std::vector<Region> next;
    for (const auto& base : acc)
      for (const auto& alt : alts) {
        Region m = base;
        m.cons.insert(m.cons.end(), alt.cons.begin(), alt.cons.end());
        m.disc.insert(m.disc.end(), alt.disc.begin(), alt.disc.end());
        next.push_back(m);
      }
    acc = std::move(next);
  }
  return SetSpec(space_, std::move(acc), name_.empty() ? "" : "not(" + name_ + ")");
}

SetSpec set_union(const SetSpec& a, const SetSpec& b) {
  std::vector<Region> rs = a.regions_;
  rs.insert(rs.end(), b.regions_.begin(), b.regions_.end());
  return SetSpec(a.space_ ? a.space_ : b.space_, std::move(rs),
                 a.name_ + "|" + b.name_);
}

SetSpec set_intersect(const SetSpec& a, const SetSpec& b) {
  std::vector<Region> rs;
  for (const auto& ra : a.regions_)
    for (const auto& rb : b.regions_) {
      Region m = ra;
      m.cons.insert(m.cons.end(), rb.cons.begin(), rb.cons.end());
      m.disc.insert(m.disc.end(), rb.disc.begin(), rb.disc.end());
      rs.push_back(m);
    }
  return SetSpec(a.space_ ? a.space_ : b.space_, std::move(rs),
                 a.name_ + "&" + b.name_);
}

SetSpec set_difference(const SetSpec& a, const SetSpec& b) {
  return set_intersect(a, b.complement()).renamed(a.name() + "\\" + b.name());
}

SetSpec box_set(SpacePtr space, const Box& b, std::string name) {
  Region r;
  for (int i = 0; i < b.dim(); ++i) {
    if (space->is_discrete(i)) continue;
    r.cons.push_back(le(fn_coord(i, b.dim()) - b.hi[i]));
    r.cons.push_back(ge(fn_coord(i, b.dim()) - b.lo[i]));
  }
  return SetSpec(std::move(space), {r}, std::move(name));
}

SetSpec halfplane(SpacePtr space, int coord, double bound, bool upper, std::string name) {
  Region r;
  ScalarFn c = fn_coord(coord, space->dim);
  r.cons.push_back(upper ? le(c - bound) : ge(c - bound));
  return SetSpec(std::move(space), {r}, std::move(name));
}

namespace {

// Projection search toward one region. Returns distance or +inf.
double region_distance(const Region& r, const SpacePtr& space, const Vec& x,
                       int max_iter) {
  Vec z = x;
  // Snap discrete coordinates to the nearest allowed value once.
  for (const auto& d : r.disc) {
    double best = d.values.front();
    for (double v : d.values)
      if (std::abs(v - z[d.coord]) < std::abs(best - z[d.coord])) best = v;
    z[d.coord] = best;
  }
  (void)space;
  for (int it = 0; it < max_iter; ++it) {
    bool ok = true;
    for (const auto& c : r.cons) {
      double v = c.g(z);
      double target = 0.0;
      bool violated = false;
      switch (c.rel) {
        case Rel::Le: violated = v > 0; target = 0.0; break;
        case Rel::Lt: violated = v >= -Tol::set; target = -2 * Tol::set; break;
        case Rel::Eq: violated = std::abs(v) > Tol::set; target = 0.0; break;
      }
      if (!violated) continue;
      ok = false;
      Vec g = c.g.grad(z);
      // Do not move along discrete coordinates.
      for (const auto& d : r.disc) g[d.coord] = 0.0;
      double gn = 0;
      for (double gv : g) gn += gv * gv;
      if (gn < 1e-30) return kInf;
      double step = (v - target) / gn;
      for (std::size_t i = 0; i < z.size(); ++i) z[i] -= step * g[i];
    }
    if (ok) return dist2(z, x);
  }
  return r.contains(x, Tol::set) ? 0.0 : kInf;
}

}  // namespace

double set_distance(const SetSpec& S, const Vec& x, int max_iter) {
  if (S.contains(x, Tol::set)) return 0.0;
  double best = kInf;
  for (const auto& r : S.regions())
    best = std::min(best, region_distance(r, S.space(), x, max_iter));
  return best;
}

bool tangent_cone_member(const SetSpec& S, const Vec& x, const Vec& v,
                         const TangentConeParams& p, double tau_set) {
  if (!S.contains(x, tau_set))
    throw std::invalid_argument("tangent_cone_member: x not in S");
  double vn = norm(v);
  for (double h : p.h_seq) {
    Vec y = axpy(h, v, x);
    double d = set_distance(S, y);
    if (!(d <= h * p.tol * (1.0 + vn))) return false;
  }
  return true;
}

namespace {

void enumerate_lattice(const SpacePtr& space, const GridSpec& grid,
                       const std::function<void(const Vec&)>& emit) {
  int n = space->dim;
  std::vector<int> cont;
  for (int i = 0; i < n; ++i)
    if (!space->is_discrete(i)) cont.push_back(i);
  std::vector<const std::vector<double>*> dvals;
  std::vector<int> dcoord;
  for (const auto& d : space->discrete) {
    dcoord.push_back(d.coord);
    dvals.push_back(&d.values);
  }
  std::vector<std::size_t> didx(dcoord.size(), 0);
  Vec x(n, 0.0);
  auto walk_cont = [&](auto&& self, std::size_t k) -> void {
    if (k == cont.size()) {
      emit(x);
      return;
    }
    int c = cont[k];
    for (int i = 0; i < grid.res; ++i) {
      double t = grid.res == 1 ? 0.5 : static_cast<double>(i) / (grid.res - 1);
      x[c] = grid.box.lo[c] + t * (grid.box.hi[c] - grid.box.lo[c]);
      self(self, k + 1);
    }
  };
  auto walk_disc = [&](auto&& self, std::size_t k) -> void {
    if (k == dcoord.size()) {
      walk_cont(walk_cont, 0);
      return;
    }
    for (double v : *dvals[k]) {
      x[dcoord[k]] = v;
      self(self, k + 1);
    }
  };
  walk_disc(walk_disc, 0);
}

// Bisect g along the segment x(a) -> x(b) varying coordinate c only.
std::optional<Vec> bisect_zero(const ScalarFn& g, Vec x, int c, double a, double b) {
  x[c] = a;
  double fa = g(x);
  x[c] = b;
  double fb = g(x);
  if (fa == 0) { x[c] = a; return x; }
  if (fb == 0) { x[c] = b; return x; }
  if ((fa > 0) == (fb > 0)) return std::nullopt;
  for (int it = 0; it < 80; ++it) {
    double m = 0.5 * (a + b);
    x[c] = m;
    double fm = g(x);
    if (std::abs(fm) <= Tol::evt || b - a < 1e-15) return x;
    if ((fm > 0) == (fa > 0)) { a = m; fa = fm; } else { b = m; }
  }
  return x;
}

}  // namespace

std::vector<Vec> sample_box(const SpacePtr& space, const GridSpec& grid) {
  std::vector<Vec> out;
  enumerate_lattice(space, grid, [&](const Vec& x) {
    if (out.size() < grid.max_samples) out.push_back(x);
  });
  return out;
}

std::vector<Vec> sample_set(const SetSpec& S, const GridSpec& grid, double tau) {
  std::vector<Vec> out;
  const auto& space = S.space();
  auto push = [&](const Vec& x) {
    if (out.size() < grid.max_samples && S.contains(x, tau) && grid.box.contains(x, 1e-12))
      out.push_back(x);
  };
  enumerate_lattice(space, grid, push);

  // Refined points near constraint boundaries and solved points on equality
  // constraints: scan each axis line at base resolution, then subdivide
  // cells where a constraint changes sign.
  std::vector<int> cont;
  for (int i = 0; i < space->dim; ++i)
    if (!space->is_discrete(i)) cont.push_back(i);
  if (cont.empty()) return out;

  // Lines: lattice over all coords except one continuous axis.
  for (int axis : cont) {
    GridSpec line_grid = grid;
    // Walk the lattice with 'axis' fixed at lo; then scan along axis.
    enumerate_lattice(space, line_grid, [&](const Vec& base) {
      // Only use one representative per line: points whose 'axis' value is lo.
      if (std::abs(base[axis] - grid.box.lo[axis]) > 1e-12) return;
      Vec x = base;
      double lo = grid.box.lo[axis], hi = grid.box.hi[axis];
      int n = grid.res;
      double step = n > 1 ? (hi - lo) / (n - 1) : 0.0;
      for (const auto& r : S.regions()) {
        for (const auto& c : r.cons) {
          double prev = 0;
          bool have_prev = false;
          for (int i = 0; i < n; ++i) {
            x[axis] = lo + i * step;
            double v = c.g(x);
            if (have_prev && ((prev > 0) != (v > 0) || std::abs(v) < 1e-12)) {
              double a = lo + (i - 1) * step, b = lo + i * step;
              // Solve the zero and keep it when it satisfies the region.
              if (auto z = bisect_zero(c.g, x, axis, a, b)) push(*z);
              // Locally finer lattice inside the cell.
              for (int k = 1; k < grid.boundary_refine; ++k) {
                Vec y = x;
                y[axis] = a + (b - a) * k / grid.boundary_refine;
                push(y);
              }
            }
            prev = v;
            have_prev = true;
          }
        }
      }
      if (out.size() >= grid.max_samples) return;
    });
    if (out.size() >= grid.max_samples) break;
  }
  return out;
}

std::vector<Vec> sample_boundary(const SetSpec& S, const GridSpec& grid, double tau) {
  std::vector<Vec> out;
  const auto& space = S.space();
  std::vector<int> cont;
  for (int i = 0; i < space->dim; ++i)
    if (!space->is_discrete(i)) cont.push_back(i);
  auto push = [&](const Vec& x) {
    if (out.size() < grid.max_samples && S.closure().contains(x, tau) &&
        grid.box.contains(x, 1e-12))
      out.push_back(x);
  };
  for (int axis : cont) {
    enumerate_lattice(space, grid, [&](const Vec& base) {
      if (std::abs(base[axis] - grid.box.lo[axis]) > 1e-12) return;
      Vec x = base;
      double lo = grid.box.lo[axis], hi = grid.box.hi[axis];
      int n = grid.res;
      double step = n > 1 ? (hi - lo) / (n - 1) : 0.0;
      for (const auto& r : S.regions()) {
        for (const auto& c : r.cons) {
          double prev = 0;
          bool have_prev = false;
          for (int i = 0; i < n; ++i) {
            x[axis] = lo + i * step;
            double v = c.g(x);
            if (have_prev && ((prev > 0) != (v > 0) || std::abs(v) <= tau)) {
              double a = lo + (i - 1) * step, b = lo + i * step;
              if (auto z = bisect_zero(c.g, x, axis, a, b)) push(*z);
            }
            prev = v;
            have_prev = true;
          }
        }
      }
    });
  }
  return out;
}

}  // namespace huntil
