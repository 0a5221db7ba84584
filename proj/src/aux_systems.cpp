#include "huntil/aux_systems.hpp"

#include <algorithm>

namespace huntil {

namespace {

// Each original selection, rerouted through the identity on Q. On Q every
// selection evaluates to x, realizing the case split of the derived map.
SetValuedMap gate_on(const SetValuedMap& G, const SetSpec& Q) {
  std::vector<Selection> sels;
  for (const auto& s : G.selections()) {
    auto f = s.f;
    SetSpec Qc = Q;
    sels.push_back(Selection{
        s.name + "|idQ",
        [f, Qc](const Vec& x) { return Qc.contains(x, Tol::set) ? x : f(x); }});
  }
  return SetValuedMap(std::move(sels));
}

}  // namespace

HybridSystem build_Hw(const HybridSystem& H, const SetSpec& Q) {
  HybridSystem W = H;
  W.name = H.name + "_w";
  W.C = set_difference(H.C, Q).renamed("Cw");
  W.D = set_union(H.D, Q).renamed("Dw");
  W.G = gate_on(H.G, Q);
  return W;
}

HybridSystem build_Hs(const HybridSystem& H, const SetSpec& P, const SetSpec& Q) {
  HybridSystem S = H;
  S.name = H.name + "_s";
  S.C = set_intersect(set_difference(H.C, Q), P).renamed("Cs");
  S.D = set_union(set_intersect(H.D, P), Q).renamed("Ds");
  S.G = gate_on(H.G, Q);
  return S;
}

double FlowLengthSet::sup() const {
  double m = 0;
  for (const auto& iv : intervals) m = std::max(m, iv.second);
  return m;
}

bool FlowLengthSet::contains(double t, double tau) const {
  for (const auto& iv : intervals)
    if (t >= iv.first - tau && t <= iv.second + tau) return true;
  return false;
}

HybridSystem build_Hr(const std::function<double(double)>& f_c,
                      const std::function<double(double)>& f_d,
                      const FlowLengthSet& I, double y_escape) {
  if (I.intervals.empty())
    throw std::invalid_argument("build_Hr: empty flow-length set");
  double tau_M = I.sup();
  auto space = make_space(2);
  HybridSystem R;
  R.space = space;
  R.name = "Hr";
  Region cr;
  cr.cons.push_back(ge(fn_coord(1, 2)));
  cr.cons.push_back(le(fn_coord(1, 2) - tau_M));
  R.C = SetSpec(space, {cr}, "Cr");
  std::vector<Region> dr;
  for (const auto& iv : I.intervals) {
    Region r;
    if (iv.second - iv.first <= Tol::set) {
      // Degenerate interval: an equality keeps the crossing detectable.
      r.cons.push_back(eq(fn_coord(1, 2) - iv.first));
    } else {
      r.cons.push_back(ge(fn_coord(1, 2) - iv.first));
      r.cons.push_back(le(fn_coord(1, 2) - iv.second));
    }
    dr.push_back(r);
  }
  R.D = SetSpec(space, dr, "Dr");
  R.F = single_map([f_c](const Vec& x) { return Vec{f_c(x[0]), 1.0}; }, "fc");
  R.G = single_map([f_d](const Vec& x) { return Vec{f_d(x[0]), 0.0}; }, "fd");
  R.bounding_box = Box{{-y_escape, 0.0}, {y_escape, tau_M}};
  return R;
}

CorrespondenceReport correspondence_test(const HybridSystem& H,
                                         const HybridSystem& aux,
                                         const SetSpec& Q, const Vec& x0,
                                         const SimBudget& budget, double tol) {
  CorrespondenceReport rep;
  auto arcs_h = simulate(H, x0, budget, BranchPolicy::JumpPriority);
  auto arcs_a = simulate(aux, x0, budget, BranchPolicy::JumpPriority);
  if (arcs_h.empty() || arcs_a.empty()) {
    rep.note = "no arcs produced";
    return rep;
  }
  const HybridArc& ah = arcs_h.front();
  const HybridArc& aa = arcs_a.front();

  SettlingTime tq = settling_time(ah, Q);
  double horizon = tq.reached ? tq.total : ah.end().total();
  rep.compared_until = std::min(horizon, aa.end().total());

  // Compare states of the H-arc against the aux-arc at matched (t, j) by
  // interpolating within segments.
  auto state_at = [](const HybridArc& arc, double t, int j) -> std::optional<Vec> {
    for (const auto& seg : arc.segments) {
      if (seg.j != j) continue;
      if (t < seg.t0() - 1e-9 || t > seg.t1() + 1e-9) continue;
      for (std::size_t k = 1; k < seg.samples.size(); ++k) {
        const auto& a = seg.samples[k - 1];
        const auto& b = seg.samples[k];
        if (t <= b.t + 1e-12) {
          double s = b.t > a.t ? (t - a.t) / (b.t - a.t) : 0.0;
          Vec r(a.x.size());
          for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = a.x[i] + s * (b.x[i] - a.x[i]);
          return r;
        }
      }
      return seg.samples.back().x;
    }
    return std::nullopt;
  };

  double dev = 0;
  int compared = 0;
  for (const auto& seg : ah.segments) {
    for (const auto& s : seg.samples) {
      if (s.t + seg.j > rep.compared_until + 1e-9) break;
      auto other = state_at(aa, s.t, seg.j);
      if (!other) continue;
      dev = std::max(dev, dist2(s.x, *other));
      ++compared;
    }
  }
  rep.max_deviation = dev;
  rep.match = compared > 0 ? dev <= tol * (1.0 + norm(x0)) : true;
  if (compared == 0) rep.note = "trivial overlap (T_Q = 0)";
  return rep;
}

}  // namespace huntil
