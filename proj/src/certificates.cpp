#include "huntil/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace huntil {

bool gradient_consistent(const ScalarFn& f, const std::vector<Vec>& points,
                         double rel_err, double h) {
  for (const auto& x : points) {
    Vec g = f.grad(x);
    Vec xp = x, xm = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
      xp[i] = x[i] + h;
      xm[i] = x[i] - h;
      double fd = (f(xp) - f(xm)) / (2 * h);
      xp[i] = x[i];
      xm[i] = x[i];
      if (std::abs(fd - g[i]) > rel_err * (1.0 + std::abs(fd))) return false;
    }
  }
  return true;
}

std::optional<double> nondecreasing_violation(const ScalarMap& f_d, double lo,
                                              double hi, int n) {
  double prev = f_d(lo);
  for (int i = 1; i <= n; ++i) {
    double z = lo + (hi - lo) * i / n;
    double cur = f_d(z);
    if (cur < prev - 1e-12 * (1.0 + std::abs(prev))) return z;
    prev = cur;
  }
  return std::nullopt;
}

void CheckReport::add(SubReport item) {
  if (item.verdict == "fail") verdict = "fail";
  else if (item.verdict == "inconclusive" && verdict == "pass")
    verdict = "inconclusive";
  items.push_back(std::move(item));
}

const SubReport* CheckReport::find(const std::string& item_id) const {
  for (const auto& it : items)
    if (it.id == item_id) return &it;
  return nullptr;
}

const char* to_string(PreEciVariant v) {
  switch (v) {
    case PreEciVariant::V3a: return "3a";
    case PreEciVariant::V3b: return "3b";
    case PreEciVariant::V3c: return "3c";
    case PreEciVariant::V3d: return "3d";
  }
  return "?";
}

const char* to_string(Notion n) {
  switch (n) {
    case Notion::CI: return "CI";
    case Notion::ECI: return "ECI";
    case Notion::PreECI: return "pre-ECI";
    case Notion::FTA: return "FTA";
    case Notion::PreFTA: return "pre-FTA";
  }
  return "?";
}

namespace {

void note_witness(SubReport& sub, const Vec& x, const Vec& eta,
                  const std::string& cond, double residual, int cap) {
  sub.verdict = "fail";
  sub.residual_max = std::max(sub.residual_max, residual);
  if (static_cast<int>(sub.witnesses.size()) < cap)
    sub.witnesses.push_back({x, eta, cond, residual});
}

std::vector<Vec> o_samples(const SetSpec& O, const CheckConfig& cfg, int res_cap = 16) {
  GridSpec g = cfg.grid;
  g.res = std::min(g.res, res_cap);
  return sample_set(O, g, cfg.tau_set);
}

}  // namespace

SubReport check_flow_inequality(const std::string& id, const SetSpec& X,
                                const SetSpec& cone_set, const SetValuedMap& F,
                                const ScalarFn& v,
                                const std::function<double(const Vec&)>& rhs,
                                const CheckConfig& cfg) {
  SubReport sub;
  sub.id = id;
  for (const auto& x : sample_set(X, cfg.grid, cfg.tau_set)) {
    ++sub.points_checked;
    Vec gv = v.grad(x);
    for (const auto& eta : F.sample(x)) {
      bool in_cone = true;
      try {
        in_cone = tangent_cone_member(cone_set, x, eta);
      } catch (const std::invalid_argument&) {
        in_cone = true;  // x off the cone set by tolerance; keep eta
      }
      if (!in_cone) continue;
      double lhs = 0;
      for (std::size_t i = 0; i < gv.size(); ++i) lhs += gv[i] * eta[i];
      double resid = lhs - rhs(x);
      if (resid > cfg.tau_cert)
        note_witness(sub, x, eta, id, resid, cfg.max_witnesses);
      else
        sub.residual_max = std::max(sub.residual_max, resid);
    }
  }
  if (sub.points_checked == 0) sub.notes.push_back("vacuous: no sample in domain");
  return sub;
}

SubReport check_jump_inequality(
    const std::string& id, const SetSpec& X, const SetValuedMap& G,
    const std::function<double(const Vec&, const Vec&)>& lhs,
    const std::function<double(const Vec&, const Vec&)>& rhs,
    const CheckConfig& cfg) {
  SubReport sub;
  sub.id = id;
  for (const auto& x : sample_set(X, cfg.grid, cfg.tau_set)) {
    ++sub.points_checked;
    for (const auto& eta : G.sample(x)) {
      double resid = lhs(x, eta) - rhs(x, eta);
      if (resid > cfg.tau_cert)
        note_witness(sub, x, eta, id, resid, cfg.max_witnesses);
      else
        sub.residual_max = std::max(sub.residual_max, resid);
    }
  }
  if (sub.points_checked == 0) sub.notes.push_back("vacuous: no sample in domain");
  return sub;
}

SubReport check_subset(const std::string& id, const SetSpec& domain,
                       const std::function<bool(const Vec&)>& member,
                       const SetSpec& B, const CheckConfig& cfg) {
  SubReport sub;
  sub.id = id;
  for (const auto& x : sample_set(domain, cfg.grid, cfg.tau_set)) {
    if (!member(x)) continue;
    ++sub.points_checked;
    if (!B.contains(x, cfg.tau_set)) {
      double d = set_distance(B, x);
      note_witness(sub, x, {}, id, std::isfinite(d) ? d : 1.0, cfg.max_witnesses);
    }
  }
  if (sub.points_checked == 0) sub.notes.push_back("vacuous: no member sampled");
  return sub;
}

SubReport check_image_in(const std::string& id, const SetSpec& X,
                         const SetValuedMap& G, const SetSpec* filter,
                         const SetSpec& B, const CheckConfig& cfg) {
  SubReport sub;
  sub.id = id;
  for (const auto& x : sample_set(X, cfg.grid, cfg.tau_set)) {
    ++sub.points_checked;
    for (const auto& eta : G.sample(x)) {
      if (filter && !filter->contains(eta, cfg.tau_set)) continue;
      if (!B.contains(eta, cfg.tau_set)) {
        double d = set_distance(B, eta);
        note_witness(sub, x, eta, id, std::isfinite(d) ? d : 1.0, cfg.max_witnesses);
      }
    }
  }
  if (sub.points_checked == 0) sub.notes.push_back("vacuous: no sample in domain");
  return sub;
}

SubReport check_finite_escape(const std::string& id, const HybridSystem& H,
                              const SetSpec& X, const CheckConfig& cfg) {
  SubReport sub;
  sub.id = id;
  auto xs = sample_set(X, cfg.grid, cfg.tau_set);
  if (xs.empty()) {
    sub.notes.push_back("vacuous: no sample in domain");
    return sub;
  }
  const Box& box = cfg.grid.box;
  double margin = 0;
  for (int i = 0; i < box.dim(); ++i)
    margin = std::max(margin, (box.hi[i] - box.lo[i]) / std::max(cfg.grid.res - 1, 1));
  bool compact = true;
  for (const auto& x : xs) {
    for (int i = 0; i < box.dim(); ++i) {
      if (H.space->is_discrete(i)) continue;
      if (x[i] < box.lo[i] + margin || x[i] > box.hi[i] - margin) compact = false;
    }
    if (!compact) break;
  }
  if (compact) {
    sub.notes.push_back("domain compact inside the grid box");
    return sub;
  }
  // Growth envelope |F(x)| <= a|x| + b, least-squares fitted on the inner
  // half by radius and validated (with slack) on the outer half; superlinear
  // growth breaks the extrapolation and leaves the item inconclusive.
  std::vector<std::pair<double, double>> rn;
  for (const auto& x : xs) {
    double fmax = 0;
    for (const auto& eta : H.F.sample(x)) fmax = std::max(fmax, norm(eta));
    rn.push_back({norm(x), fmax});
  }
  sub.points_checked = static_cast<int>(rn.size());
  std::sort(rn.begin(), rn.end());
  std::size_t half = std::max<std::size_t>(rn.size() / 2, 2);
  double sr = 0, sf = 0, srr = 0, srf = 0;
  for (std::size_t k = 0; k < half && k < rn.size(); ++k) {
    sr += rn[k].first;
    sf += rn[k].second;
    srr += rn[k].first * rn[k].first;
    srf += rn[k].first * rn[k].second;
  }
  double n = static_cast<double>(std::min(half, rn.size()));
  double det = n * srr - sr * sr;
  double a = det > 1e-12 ? (n * srf - sr * sf) / det : 0.0;
  double bb = (sf - a * sr) / n;
  a = std::max(a, 0.0);
  double floor = 0;
  for (std::size_t k = 0; k < half && k < rn.size(); ++k)
    floor = std::max(floor, rn[k].second);
  for (std::size_t k = half; k < rn.size(); ++k)
    if (rn[k].second > 1.25 * (a * rn[k].first + std::max(bb, 0.0)) + floor +
                           cfg.tau_cert) {
      sub.verdict = "inconclusive";
      sub.notes.push_back("no linear growth envelope validated on the sample split");
      return sub;
    }
  std::ostringstream os;
  os << "linear growth |F| <= " << a << "*|x| + " << std::max(bb, 0.0) + floor
     << " fitted and validated";
  sub.notes.push_back(os.str());
  return sub;
}

SubReport check_nontriviality(const std::string& id, const HybridSystem& H,
                              const SetSpec& restrict_to, const SetSpec& cone_set,
                              const CheckConfig& cfg) {
  SubReport sub;
  sub.id = id;
  for (const auto& x : sample_boundary(H.C, cfg.grid, cfg.tau_set)) {
    if (!restrict_to.contains(x, cfg.tau_set)) continue;
    if (H.D.contains(x, cfg.tau_set)) continue;
    if (!cone_set.closure().contains(x, cfg.tau_set)) continue;
    ++sub.points_checked;
    bool any = false;
    for (const auto& eta : H.F.sample(x)) {
      try {
        if (tangent_cone_member(cone_set.closure(), x, eta)) any = true;
      } catch (const std::invalid_argument&) {
      }
      if (any) break;
    }
    if (!any)
      note_witness(sub, x, {}, id + ": no flow direction in the tangent cone", 1.0,
                   cfg.max_witnesses);
  }
  if (sub.points_checked == 0)
    sub.notes.push_back("vacuous: no boundary sample in the restricted set");
  return sub;
}

SubReport check_scalar_flow_convergence(const std::string& id, const ScalarFn& v,
                                        const ScalarMap& f_c, double r1,
                                        const SetSpec& from, const CheckConfig& cfg) {
  SubReport sub;
  sub.id = id;
  auto xs = o_samples(from, cfg);
  if (xs.empty()) {
    sub.verdict = "inconclusive";
    sub.notes.push_back("no initial sample for the scalar comparison");
    return sub;
  }
  double ymax = -kInf;
  for (const auto& x : xs) ymax = std::max(ymax, v(x));
  // Monotone shortcut: f_c strictly negative on [r1, ymax] means convergence
  // from the largest sample implies convergence from all of v(from).
  bool monotone = true;
  for (int k = 0; k <= 64 && ymax > r1; ++k)
    if (f_c(r1 + (ymax - r1) * k / 64.0) >= 0) monotone = false;
  std::vector<double> starts;
  if (monotone && ymax > r1) starts.push_back(ymax);
  else
    for (const auto& x : xs) starts.push_back(v(x));
  for (double y0 : starts) {
    ++sub.points_checked;
    auto res = simulate_scalar_flow(f_c, y0, r1, cfg.scalar_t_budget, cfg.tau_cert);
    if (!res.converged) {
      sub.verdict = res.note == "budget exhausted" ? "inconclusive" : "fail";
      sub.notes.push_back("scalar flow from y0=" + std::to_string(y0) + ": " +
                          (res.note.empty() ? "no convergence" : res.note));
      return sub;
    }
    sub.residual_max = std::max(sub.residual_max, res.t_star);
  }
  if (monotone && ymax > r1) sub.notes.push_back("monotone shortcut from max sample");
  sub.notes.push_back("residual_max reports the worst convergence time");
  return sub;
}

SubReport check_scalar_jump_convergence(const std::string& id, const ScalarFn& w,
                                        const ScalarMap& f_d, double r2,
                                        const SetSpec& from, const CheckConfig& cfg) {
  SubReport sub;
  sub.id = id;
  auto xs = o_samples(from, cfg);
  if (xs.empty()) {
    sub.verdict = "inconclusive";
    sub.notes.push_back("no initial sample for the scalar comparison");
    return sub;
  }
  for (const auto& x : xs) {
    ++sub.points_checked;
    auto res = iterate_scalar_jump(f_d, w(x), r2, cfg.scalar_j_budget, cfg.tau_cert);
    if (!res.converged) {
      sub.verdict = res.note == "budget exhausted" ? "inconclusive" : "fail";
      sub.notes.push_back("scalar iteration from z0=" + std::to_string(w(x)) + ": " +
                          (res.note.empty() ? "no convergence" : res.note));
      return sub;
    }
    sub.residual_max = std::max(sub.residual_max, static_cast<double>(res.j_star));
  }
  sub.notes.push_back("residual_max reports the worst jump count");
  return sub;
}

SubReport check_arc_classes(const std::string& id, const HybridSystem& H,
                            const SetSpec& from, PreEciVariant variant,
                            const CheckConfig& cfg) {
  SubReport sub;
  sub.id = id;
  sub.notes.push_back("empirical: simulated arcs, classification flags");
  GridSpec g = cfg.grid;
  g.res = std::min(g.res, 6);
  for (const auto& x0 : sample_set(from, g, cfg.tau_set)) {
    for (const auto& arc : simulate(H, x0, cfg.sim, BranchPolicy::Branch)) {
      if (!arc.flags.complete_heuristic) continue;
      ++sub.points_checked;
      const auto& f = arc.flags;
      bool ok = false;
      switch (variant) {
        case PreEciVariant::V3a: ok = f.eventually_continuous; break;
        case PreEciVariant::V3b: ok = f.eventually_discrete; break;
        case PreEciVariant::V3c:
          ok = f.eventually_continuous || f.eventually_discrete || f.unbounded_both;
          break;
        default: ok = true;
      }
      if (!ok)
        note_witness(sub, arc.final_state(), {},
                     id + ": arc class outside the variant's assumption (" +
                         f.stop_reason + ")",
                     1.0, cfg.max_witnesses);
    }
  }
  return sub;
}

SubReport check_positive_definite(const std::string& id, const ScalarFn& V,
                                  const SetSpec& A, const SetSpec& domain,
                                  const CheckConfig& cfg) {
  SubReport sub;
  sub.id = id;
  double alpha = kInf;
  double on_a_max = -kInf;
  int off = 0, on = 0;
  for (const auto& x : sample_set(domain, cfg.grid, cfg.tau_set)) {
    if (A.contains(x, cfg.tau_set)) {
      ++on;
      on_a_max = std::max(on_a_max, V(x));
      continue;
    }
    double d = set_distance(A, x);
    if (!std::isfinite(d) || d < 10 * cfg.tau_set) continue;  // boundary dust
    ++off;
    double val = V(x);
    if (val <= cfg.tau_cert) {
      note_witness(sub, x, {}, id + ": V not positive off A", -val, cfg.max_witnesses);
      continue;
    }
    alpha = std::min(alpha, val * (1.0 + d) / d);
  }
  sub.points_checked = on + off;
  if (off == 0) sub.notes.push_back("vacuous: no off-A sample");
  else if (sub.verdict == "pass") {
    std::ostringstream os;
    os << "class-K envelope mu(d)=" << alpha << "*d/(1+d) fitted on " << off
       << " off-A samples";
    sub.notes.push_back(os.str());
  }
  if (on > 0 && on_a_max > cfg.tau_cert) {
    std::ostringstream os;
    os << "note: max V on A-grid is " << on_a_max;
    sub.notes.push_back(os.str());
  }
  return sub;
}

CheckReport check_barrier_candidate(const ScalarFn& B, const SetSpec& O,
                                    const SetSpec& Xu, const HybridSystem& H,
                                    const CheckConfig& cfg) {
  CheckReport rep;
  rep.id = "barrier-candidate";
  SubReport on_o;
  on_o.id = "B<=0 on O";
  for (const auto& x : sample_set(O, cfg.grid, cfg.tau_set)) {
    ++on_o.points_checked;
    double b = B(x);
    if (b > cfg.tau_cert) note_witness(on_o, x, {}, on_o.id, b, cfg.max_witnesses);
    else on_o.residual_max = std::max(on_o.residual_max, b);
  }
  SubReport on_xu;
  on_xu.id = "B>0 on (CuD)&Xu";
  SetSpec bad = set_intersect(H.flow_or_jump_set(), Xu);
  for (const auto& x : sample_set(bad, cfg.grid, cfg.tau_set)) {
    ++on_xu.points_checked;
    double b = B(x);
    if (b <= cfg.tau_cert) note_witness(on_xu, x, {}, on_xu.id, -b, cfg.max_witnesses);
  }
  if (on_o.points_checked == 0 && on_xu.points_checked == 0) {
    on_o.verdict = "inconclusive";
    on_o.notes.push_back("grid missed both O and the unsafe region");
  }
  rep.add(on_o);
  rep.add(on_xu);
  return rep;
}

namespace {

// The three conditions of the conditional-invariance proposition on
// K = {x in C u D : B <= 0}.
void ci_conditions(CheckReport& rep, const HybridSystem& H, const ScalarFn& B,
                   const CheckConfig& cfg) {
  SetSpec CD = H.flow_or_jump_set();
  Region ble;
  ble.cons.push_back(le(B));
  SetSpec K = set_intersect(CD, SetSpec(H.space, {ble}, "B<=0")).renamed("K");

  SetSpec shell = boundary_shell(H.C, B, cfg.shell_delta(cfg.grid.box));
  rep.add(check_flow_inequality("flow: <gradB,eta><=0 on shell&C", shell, H.C, H.F,
                                B, [](const Vec&) { return 0.0; }, cfg));

  SetSpec DK = set_intersect(H.D, K);
  rep.add(check_jump_inequality(
      "jump: B(eta)<=0 on D&K", DK, H.G,
      [&](const Vec&, const Vec& eta) { return B(eta); },
      [](const Vec&, const Vec&) { return 0.0; }, cfg));
  rep.add(check_image_in("jump: G(D&K) in CuD", DK, H.G, nullptr, CD, cfg));
}

}  // namespace

CheckReport check_CI(const HybridSystem& H, const ScalarFn& B, const SetSpec& O,
                     const SetSpec& Xu, const CheckConfig& cfg) {
  CheckReport rep;
  rep.id = "conditional-invariance";
  CheckReport cand = check_barrier_candidate(B, O, Xu, H, cfg);
  for (auto& it : cand.items) rep.add(it);
  if (rep.failed()) return rep;
  ci_conditions(rep, H, B, cfg);
  return rep;
}

CheckReport check_forward_invariance(const HybridSystem& H, const ScalarFn& B,
                                     const SetSpec& K, const CheckConfig& cfg) {
  CheckReport rep;
  rep.id = "forward-invariance";
  if (!K.syntactically_closed()) rep.notes.push_back("K is not syntactically closed");
  CheckReport cand = check_barrier_candidate(B, K, K.complement(), H, cfg);
  for (auto& it : cand.items) rep.add(it);
  if (rep.failed()) return rep;
  ci_conditions(rep, H, B, cfg);
  rep.add(check_finite_escape("completeness(a): finite-escape heuristic", H,
                              set_intersect(K, H.C), cfg));
  rep.add(check_nontriviality("completeness(b): nontrivial continuation", H, K,
                              set_intersect(K, H.C), cfg));
  return rep;
}

ScalarFlowResult simulate_scalar_flow(const ScalarMap& f_c, double y0, double r1,
                                      double t_budget, double tau) {
  ScalarFlowResult r;
  if (y0 < r1 - tau) {
    r.converged = true;
    r.t_star = 0;
    return r;
  }
  double y = y0, t = 0;
  const double dt = 1e-3;
  auto step = [&](double yy, double h) {
    double k1 = f_c(yy);
    double k2 = f_c(yy + h / 2 * k1);
    double k3 = f_c(yy + h / 2 * k2);
    double k4 = f_c(yy + h * k3);
    return yy + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  };
  while (t < t_budget) {
    double y1 = step(y, dt);
    if (y1 < -1e9) {  // blow-down: reaches (-inf, r1) before escaping
      r.converged = true;
      r.t_star = t;
      r.note = "escape to -inf";
      return r;
    }
    if (y1 > 1e9) {
      r.note = "blow-up";
      return r;
    }
    if (y1 < r1 - tau) {
      double lo = 0, hi = 1;
      for (int it = 0; it < 60; ++it) {
        double m = 0.5 * (lo + hi);
        if (step(y, m * dt) < r1 - tau) hi = m; else lo = m;
      }
      r.converged = true;
      r.t_star = t + hi * dt;
      // Persistence below r1 (uniqueness of the scalar solution).
      double yy = step(y, hi * dt);
      for (double tt = r.t_star; tt < t_budget; tt += dt) {
        yy = step(yy, dt);
        if (yy >= r1) {
          r.converged = false;
          r.note = "re-crossed r1 after convergence";
          return r;
        }
        if (yy < -1e9) break;
      }
      return r;
    }
    y = y1;
    t += dt;
  }
  r.note = "budget exhausted";
  return r;
}

ScalarJumpResult iterate_scalar_jump(const ScalarMap& f_d, double z0, double r2,
                                     int j_budget, double tau) {
  ScalarJumpResult r;
  double z = z0;
  for (int j = 0; j <= j_budget; ++j) {
    if (z < r2 - tau) {
      r.converged = true;
      r.j_star = j;
      // Nondecreasing f_d keeps iterates below r2 once there; verify a few.
      double zz = z;
      for (int k = 0; k < 8; ++k) {
        zz = f_d(zz);
        if (zz >= r2) {
          r.converged = false;
          r.note = "iterate re-crossed r2";
          return r;
        }
      }
      return r;
    }
    z = f_d(z);
    if (z > 1e12) {
      r.note = "divergence";
      return r;
    }
  }
  r.note = "budget exhausted";
  return r;
}

CheckReport check_preECI(const HybridSystem& H, const SetSpec& O, const SetSpec& A,
                         const CertV& cv, const CertW& cw, PreEciVariant variant,
                         const CheckConfig& cfg) {
  CheckReport rep;
  rep.id = std::string("pre-ECI(") + to_string(variant) + ")";

  // Gate: f_d must be nondecreasing before anything else is evaluated.
  double wlo = kInf, whi = -kInf;
  for (const auto& x : sample_box(H.space, cfg.grid)) {
    double wv = cw.w(x);
    wlo = std::min(wlo, wv);
    whi = std::max(whi, wv);
  }
  if (auto bad = nondecreasing_violation(cw.f_d, wlo - 1.0, whi + 1.0)) {
    SubReport gate;
    gate.id = "gate: f_d nondecreasing";
    note_witness(gate, {*bad}, {}, "f_d decreases", 1.0, cfg.max_witnesses);
    rep.add(gate);
    return rep;
  }

  rep.add(check_flow_inequality("1a: <gradv,eta><=fc(v) on C", H.C, H.C, H.F, cv.v,
                                [&](const Vec& x) { return cv.f_c(cv.v(x)); }, cfg));
  rep.add(check_jump_inequality(
      "1a: v(eta)<=v(x) on D", H.D, H.G,
      [&](const Vec&, const Vec& eta) { return cv.v(eta); },
      [&](const Vec& x, const Vec&) { return cv.v(x); }, cfg));
  rep.add(check_scalar_flow_convergence("1b: scalar flow reaches (-inf,r1)", cv.v,
                                        cv.f_c, cv.r1, O, cfg));
  rep.add(check_flow_inequality("2a: <gradw,eta><=0 on C", H.C, H.C, H.F, cw.w,
                                [](const Vec&) { return 0.0; }, cfg));
  rep.add(check_jump_inequality(
      "2a: w(eta)<=fd(w(x)) on D", H.D, H.G,
      [&](const Vec&, const Vec& eta) { return cw.w(eta); },
      [&](const Vec& x, const Vec&) { return cw.f_d(cw.w(x)); }, cfg));
  rep.add(check_scalar_jump_convergence("2b: scalar iteration reaches (-inf,r2)",
                                        cw.w, cw.f_d, cw.r2, O, cfg));

  auto in_S1 = [&](const Vec& x) { return cv.v(x) < cv.r1 - cfg.tau_cert; };
  auto in_S2 = [&](const Vec& x) { return cw.w(x) < cw.r2 - cfg.tau_cert; };
  if (variant != PreEciVariant::V3b)
    rep.add(check_subset("3: S1={x in C: v<r1} subset A", H.C, in_S1, A, cfg));
  if (variant != PreEciVariant::V3a)
    rep.add(check_subset("3: S2={x in D: w<r2} subset A", H.D, in_S2, A, cfg));
  if (variant == PreEciVariant::V3d) {
    SubReport g3d;
    g3d.id = "3d: G(S2)&C subset S1";
    for (const auto& x : sample_set(H.D, cfg.grid, cfg.tau_set)) {
      if (!in_S2(x)) continue;
      ++g3d.points_checked;
      for (const auto& eta : H.G.sample(x)) {
        if (!H.C.contains(eta, cfg.tau_set)) continue;
        double resid = cv.v(eta) - cv.r1;
        if (resid > cfg.tau_cert)
          note_witness(g3d, x, eta, g3d.id, resid, cfg.max_witnesses);
      }
    }
    if (g3d.points_checked == 0) g3d.notes.push_back("vacuous: S2 not sampled");
    rep.add(g3d);
  } else {
    rep.add(check_arc_classes(std::string("3") + to_string(variant)[1] +
                                  ": solution classes from O",
                              H, O, variant, cfg));
  }
  return rep;
}

CheckReport check_preECI_flows(const HybridSystem& H, const SetSpec& O,
                               const SetSpec& A, const CertV& cv,
                               const CheckConfig& cfg) {
  CheckReport rep;
  rep.id = "pre-ECI-via-flows";
  rep.add(check_flow_inequality("1: <gradv,eta><=fc(v) on C", H.C, H.C, H.F, cv.v,
                                [&](const Vec& x) { return cv.f_c(cv.v(x)); }, cfg));
  rep.add(check_jump_inequality(
      "1: v(eta)<=v(x) on D", H.D, H.G,
      [&](const Vec&, const Vec& eta) { return cv.v(eta); },
      [&](const Vec& x, const Vec&) { return cv.v(x); }, cfg));
  auto in_S1 = [&](const Vec& x) { return cv.v(x) < cv.r1 - cfg.tau_cert; };
  rep.add(check_subset("1: S1 subset A", H.C, in_S1, A, cfg));

  SubReport per_arc;
  per_arc.id = "2: t_star within each complete arc's flow horizon";
  for (const auto& x0 : o_samples(O, cfg, 6)) {
    auto res = simulate_scalar_flow(cv.f_c, cv.v(x0), cv.r1, cfg.scalar_t_budget,
                                    cfg.tau_cert);
    for (const auto& arc : simulate(H, x0, cfg.sim, BranchPolicy::Branch)) {
      if (!arc.flags.complete_heuristic) continue;
      ++per_arc.points_checked;
      if (!res.converged || res.t_star > arc.sup_t() + cfg.tau_cert)
        note_witness(per_arc, x0, {}, "t_star exceeds sup_t of a complete arc",
                     res.converged ? res.t_star - arc.sup_t() : kInf,
                     cfg.max_witnesses);
    }
  }
  rep.add(per_arc);

  // G(A) n D subset A, with the eventually-continuous class as fallback.
  SetSpec ACD = set_intersect(A, H.flow_or_jump_set());
  SubReport img = check_image_in("3: G(A)&D subset A", ACD, H.G, &H.D, A, cfg);
  if (img.verdict != "pass") {
    SubReport alt = check_arc_classes("3: eventually-continuous fallback", H, O,
                                      PreEciVariant::V3a, cfg);
    if (alt.verdict == "pass") {
      alt.notes.push_back("G(A)&D subset A not confirmed; class check used");
      rep.add(alt);
    } else {
      rep.add(img);
    }
  } else {
    rep.add(img);
  }
  return rep;
}

CheckReport check_preECI_jumps(const HybridSystem& H, const SetSpec& O,
                               const SetSpec& A, const CertW& cw,
                               const CheckConfig& cfg) {
  CheckReport rep;
  rep.id = "pre-ECI-via-jumps";
  if (auto bad = nondecreasing_violation(cw.f_d, -1e3, 1e3)) {
    SubReport gate;
    gate.id = "gate: f_d nondecreasing";
    note_witness(gate, {*bad}, {}, "f_d decreases", 1.0, cfg.max_witnesses);
    rep.add(gate);
    return rep;
  }
  rep.add(check_flow_inequality("2a: <gradw,eta><=0 on C", H.C, H.C, H.F, cw.w,
                                [](const Vec&) { return 0.0; }, cfg));
  rep.add(check_jump_inequality(
      "2a: w(eta)<=fd(w(x)) on D", H.D, H.G,
      [&](const Vec&, const Vec& eta) { return cw.w(eta); },
      [&](const Vec& x, const Vec&) { return cw.f_d(cw.w(x)); }, cfg));
  rep.add(check_scalar_jump_convergence("2b: scalar iteration reaches (-inf,r2)",
                                        cw.w, cw.f_d, cw.r2, O, cfg));
  auto in_S2t = [&](const Vec& x) { return cw.w(x) < cw.r2 - cfg.tau_cert; };
  rep.add(check_subset("1: S2~={x in CuD: w<r2} subset A", H.flow_or_jump_set(),
                       in_S2t, A, cfg));

  SubReport per_arc;
  per_arc.id = "2: j_star within each complete arc's jump horizon";
  for (const auto& x0 : o_samples(O, cfg, 6)) {
    auto res = iterate_scalar_jump(cw.f_d, cw.w(x0), cw.r2, cfg.scalar_j_budget,
                                   cfg.tau_cert);
    for (const auto& arc : simulate(H, x0, cfg.sim, BranchPolicy::Branch)) {
      if (!arc.flags.complete_heuristic) continue;
      ++per_arc.points_checked;
      if (!res.converged || res.j_star > arc.sup_j())
        note_witness(per_arc, x0, {}, "j_star exceeds sup_j of a complete arc",
                     res.converged ? res.j_star - arc.sup_j() : kInf,
                     cfg.max_witnesses);
    }
  }
  rep.add(per_arc);
  return rep;
}

FlowLengthEstimate estimate_flow_lengths(const HybridSystem& H, const SetSpec& O,
                                         const SetSpec& K, const CheckConfig& cfg,
                                         double inflation) {
  FlowLengthEstimate est;
  double max_all = 0;
  double min_inner = kInf;
  bool any_jump = false;
  for (const auto& x0 : o_samples(O, cfg)) {
    for (const auto& arc : simulate(H, x0, cfg.sim, BranchPolicy::JumpPriority)) {
      double prev_t = 0;
      bool first = true;
      for (const auto& jr : arc.jumps) {
        if (K.contains(jr.pre, cfg.tau_set)) break;  // reached K: stop collecting
        double gap = jr.t - prev_t;
        any_jump = true;
        max_all = std::max(max_all, gap);
        if (!first) min_inner = std::min(min_inner, gap);
        prev_t = jr.t;
        first = false;
      }
    }
  }
  if (!any_jump) {
    est.jumps_observed = false;
    est.I.intervals = {{0.0, cfg.sim.t_max}};
    est.notes.push_back("no jumps observed from O; returning [0, t_max]");
    return est;
  }
  if (!std::isfinite(min_inner)) min_inner = 0.0;
  est.I.intervals = {{std::max(0.0, min_inner / (1.0 + inflation)),
                      max_all * (1.0 + inflation)}};
  return est;
}

CheckReport check_preECI_flowlengths(const HybridSystem& H, const SetSpec& O,
                                     const SetSpec& A, const SetSpec& K,
                                     const ScalarFn& v, const ScalarMap& f_c,
                                     const ScalarMap& f_d, double r,
                                     const FlowLengthSet& I, const CheckConfig& cfg) {
  CheckReport rep;
  rep.id = "pre-ECI-flow-lengths";
  SetSpec CK = set_difference(H.C, K);
  SetSpec DK = set_difference(H.D, K);
  rep.add(check_flow_inequality("1: <gradv,eta><=fc(v) on C\\K", CK, H.C, H.F, v,
                                [&](const Vec& x) { return f_c(v(x)); }, cfg));
  rep.add(check_jump_inequality(
      "1: v(eta)<=fd(v(x)) on D\\K", DK, H.G,
      [&](const Vec&, const Vec& eta) { return v(eta); },
      [&](const Vec& x, const Vec&) { return f_d(v(x)); }, cfg));
  auto in_S = [&](const Vec& x) { return v(x) < r - cfg.tau_cert; };
  rep.add(check_subset("2: S={x in CuD: v<r} subset A", H.flow_or_jump_set(), in_S,
                       A, cfg));

  // Item 3: every solution of the reduced system from v(O) x {0} reaches y < r.
  SubReport red;
  red.id = "3: reduced system converges to (-inf,r)";
  HybridSystem Hr = build_Hr(f_c, f_d, I);
  Region yr;
  yr.cons.push_back(le(fn_coord(0, 2) - (r - cfg.tau_cert)));
  SetSpec target(Hr.space, {yr}, "y<r");
  SimBudget rb = cfg.sim;
  rb.t_max = cfg.scalar_t_budget;
  rb.j_max = cfg.scalar_j_budget;
  for (const auto& x0 : o_samples(O, cfg)) {
    double y0 = v(x0);
    ++red.points_checked;
    double worst_jumps = 0;
    bool all_reach = true;
    for (const auto& arc : simulate(Hr, {y0, 0.0}, rb, BranchPolicy::Branch)) {
      SettlingTime st = settling_time(arc, target, cfg.tau_set);
      if (!st.reached) {
        all_reach = false;
        break;
      }
      worst_jumps = std::max(worst_jumps, static_cast<double>(st.when.j));
    }
    if (!all_reach)
      note_witness(red, {y0, 0.0}, {}, "reduced solution missed (-inf,r)", 1.0,
                   cfg.max_witnesses);
    else
      red.residual_max = std::max(red.residual_max, worst_jumps);
  }
  red.notes.push_back("residual_max reports the worst jump count to convergence");
  rep.add(red);
  return rep;
}

CheckReport check_pre_to_nonpre(const HybridSystem& H, const SetSpec& O,
                                const SetSpec& A, const SetSpec& S,
                                const ScalarFn& B_S, bool pre_report_passed,
                                const CheckConfig& cfg) {
  CheckReport rep;
  rep.id = "pre-to-nonpre(*)";
  if (!pre_report_passed) {
    SubReport pre;
    pre.id = "precondition: pre-variant check";
    pre.verdict = "inconclusive";
    pre.notes.push_back("underlying pre-ECI/pre-FTA report did not pass");
    rep.add(pre);
    return rep;
  }
  if (!B_S.valid()) {
    SubReport pre;
    pre.id = "precondition: barrier for S";
    pre.verdict = "inconclusive";
    pre.notes.push_back("no barrier supplied for S");
    rep.add(pre);
    return rep;
  }
  SetSpec OA = set_union(O, A);
  rep.add(check_subset("OuA subset S", OA, [](const Vec&) { return true; }, S, cfg));
  SetSpec CDA = set_union(H.flow_or_jump_set(), A);
  rep.add(check_subset("S subset CuDuA", S, [](const Vec&) { return true; }, CDA,
                       cfg));

  HybridSystem Hw = build_Hw(H, A);
  CheckReport fwd = check_forward_invariance(Hw, B_S, S, cfg);
  for (auto& it : fwd.items) {
    it.id = "S fwd-invariant for Hw: " + it.id;
    rep.add(it);
  }
  return rep;
}

PreFtaReport check_preFTA(const HybridSystem& H, const SetSpec& O, const SetSpec& A,
                          const ScalarFn& V, const ScalarFn& W, double c1, double c2,
                          double c, const SetSpec& N, double r,
                          const CheckConfig& cfg) {
  if (!(c1 > 0) || !(c2 >= 0 && c2 < 1) || !(c > 0))
    throw std::invalid_argument(
        "check_preFTA: need c1 > 0, c2 in [0,1), c > 0 (the flow-rate constant "
        "enters with its positive orientation)");
  PreFtaReport out;
  CheckReport& rep = out.report;
  rep.id = "pre-FTA";
  if (!A.syntactically_closed()) rep.notes.push_back("A is not syntactically closed");

  SetSpec CD = H.flow_or_jump_set();
  SetSpec NCD = set_intersect(N, CD);

  rep.add(check_image_in("precondition: G(N&D) subset N", set_intersect(N, H.D),
                         H.G, nullptr, N, cfg));
  rep.add(check_positive_definite("precondition: V positive definite wrt A", V, A,
                                  NCD, cfg));
  rep.add(check_positive_definite("precondition: W positive definite wrt A", W, A,
                                  NCD, cfg));

  SubReport lev;
  lev.id = "precondition: O subset L_V(r)&L_W(r)&(CuD)";
  for (const auto& x : sample_set(O, cfg.grid, cfg.tau_set)) {
    ++lev.points_checked;
    if (V(x) > r + cfg.tau_cert || W(x) > r + cfg.tau_cert ||
        !CD.contains(x, cfg.tau_set))
      note_witness(lev, x, {}, lev.id, std::max(V(x) - r, W(x) - r),
                   cfg.max_witnesses);
  }
  rep.add(lev);

  SetSpec CNA = set_difference(set_intersect(H.C, N), A).renamed("(C&N)\\A");
  SetSpec DNA = set_difference(set_intersect(H.D, N), A).renamed("(D&N)\\A");
  rep.add(check_flow_inequality(
      "1: <gradV,eta><=-c1*V^c2 on (C&N)\\A", CNA, H.C, H.F, V,
      [&](const Vec& x) { return -c1 * std::pow(std::max(V(x), 0.0), c2); }, cfg));
  rep.add(check_jump_inequality(
      "1: V(eta)-V(x)<=0 on (D&N)\\A", DNA, H.G,
      [&](const Vec&, const Vec& eta) { return V(eta); },
      [&](const Vec& x, const Vec&) { return V(x); }, cfg));
  rep.add(check_flow_inequality("2: <gradW,eta><=0 on (C&N)\\A", CNA, H.C, H.F, W,
                                [](const Vec&) { return 0.0; }, cfg));
  rep.add(check_jump_inequality(
      "2: W(eta)-W(x)<=-min(c,W(x)) on (D&N)\\A", DNA, H.G,
      [&](const Vec&, const Vec& eta) { return W(eta); },
      [&](const Vec& x, const Vec&) { return W(x) - std::min(c, W(x)); }, cfg));

  for (const auto& xi : o_samples(O, cfg)) {
    double tv = std::pow(std::max(V(xi), 0.0), 1.0 - c2) / (c1 * (1.0 - c2));
    double jv = std::ceil(std::max(W(xi), 0.0) / c);
    out.bounds.push_back({xi, tv, jv});
  }
  return out;
}

OracleReport empirical_notion_oracle(const HybridSystem& H, const SetSpec& O,
                                     const SetSpec& target, Notion notion,
                                     const CheckConfig& cfg, BranchPolicy policy) {
  OracleReport rep;
  auto lerp = [](const Vec& a, const Vec& b, double s) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * (b[i] - a[i]);
    return r;
  };
  for (const auto& x0 : o_samples(O, cfg)) {
    for (const auto& arc : simulate(H, x0, cfg.sim, policy)) {
      ++rep.arcs_checked;
      bool pre_variant = notion == Notion::PreECI || notion == Notion::PreFTA;
      if (pre_variant && !arc.flags.complete_heuristic) continue;

      if (notion == Notion::CI) {
        for (const auto& seg : arc.segments) {
          for (std::size_t k = 0; k < seg.samples.size(); ++k) {
            const auto& s = seg.samples[k];
            if (target.contains(s.x, cfg.tau_set)) continue;
            Vec wx = s.x;
            double wt = s.t;
            if (k > 0 && target.contains(seg.samples[k - 1].x, cfg.tau_set)) {
              const auto& a = seg.samples[k - 1];
              double lo = 0, hi = 1;
              for (int it = 0; it < 60; ++it) {
                double m = 0.5 * (lo + hi);
                if (!target.contains(lerp(a.x, s.x, m), cfg.tau_set)) hi = m;
                else lo = m;
              }
              wx = lerp(a.x, s.x, hi);
              wt = a.t + hi * (s.t - a.t);
            }
            rep.falsified = true;
            rep.witness_state = wx;
            rep.witness_time = HybridTime{wt, seg.j};
            rep.summary = "arc left the target set";
            return rep;
          }
        }
      } else if (notion == Notion::ECI || notion == Notion::PreECI) {
        // No settled suffix on the prefix: exits from the target either
        // persist into the last tenth of the hybrid-time span, or recur
        // (several entry/exit cycles) past its midpoint.
        double span = arc.end().total();
        double last_out = -1;
        int exits = 0;
        bool was_in = false;
        Vec out_state;
        HybridTime out_when{};
        for (const auto& seg : arc.segments)
          for (const auto& s : seg.samples) {
            bool in = target.contains(s.x, cfg.tau_set);
            if (!in) {
              if (was_in) ++exits;
              last_out = s.t + seg.j;
              out_state = s.x;
              out_when = {s.t, seg.j};
            }
            was_in = in;
          }
        bool tail_out = last_out >= 0 && span > 0 && last_out >= 0.9 * span;
        bool recurrent = exits >= 2 && last_out >= 0.5 * span;
        if (tail_out || recurrent) {
          rep.falsified = true;
          rep.witness_state = out_state;
          rep.witness_time = out_when;
          rep.summary = "no settled suffix inside the target set";
          return rep;
        }
      } else {  // FTA / pre-FTA
        SettlingTime st = settling_time(arc, target, cfg.tau_set);
        if (!st.reached && arc.flags.complete_heuristic) {
          rep.falsified = true;
          rep.witness_state = arc.final_state();
          rep.witness_time = arc.end();
          rep.summary = "complete arc never reached the target set";
          return rep;
        }
      }
    }
  }
  rep.summary = "not falsified";
  return rep;
}

}  // namespace huntil
