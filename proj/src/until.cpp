#include "huntil/until.hpp"

#include <algorithm>
#include <cmath>

namespace huntil {

namespace {

void merge_items(CheckReport& into, CheckReport from, const std::string& prefix) {
  for (auto& it : from.items) {
    it.id = prefix + it.id;
    into.add(it);
  }
  for (auto& n : from.notes) into.notes.push_back(prefix + n);
}

void add_assumption_item(CheckReport& rep, const HybridSystem& H,
                         const PropositionPair& pq, const CheckConfig& cfg) {
  SubReport as;
  as.id = "assumption: P,Q closed and P subset CuD";
  auto issues = pq.assumption_issues(H, cfg.grid);
  if (!issues.empty()) {
    as.verdict = "inconclusive";
    as.notes = issues;
  }
  rep.add(as);
}

UntilCertReport finalize(CheckReport rep) {
  UntilCertReport out;
  if (rep.verdict == "pass") out.certification = "certified";
  else if (rep.verdict == "fail") out.certification = "failed";
  else out.certification = "inconclusive";
  out.report = std::move(rep);
  return out;
}

struct StrongContext {
  SetSpec Cs_cl, DP, PmQ, Ds;
};

StrongContext strong_context(const HybridSystem& H, const PropositionPair& pq) {
  return StrongContext{
      set_intersect(set_difference(H.C, pq.Q), pq.P).closure().renamed("cl(Cs)"),
      set_intersect(H.D, pq.P).renamed("D&P"),
      set_difference(pq.P, pq.Q).renamed("P\\Q"),
      set_union(set_intersect(H.D, pq.P), pq.Q).renamed("Ds"),
  };
}

// The weak-until barrier items (candidacy plus items 1-3 over the derived
// system data); reused as item 1 of every strong route.
CheckReport weak_until_items(const HybridSystem& H, const PropositionPair& pq,
                             const ScalarFn& B, const CheckConfig& cfg) {
  CheckReport rep;
  rep.id = "weak-until-via-CI";
  add_assumption_item(rep, H, pq, cfg);

  SetSpec PQ = set_union(pq.P, pq.Q);
  SetSpec PmQ = set_difference(pq.P, pq.Q).renamed("P\\Q");
  merge_items(rep, check_barrier_candidate(B, PmQ, PQ.complement(), H, cfg),
              "candidate: ");
  if (rep.failed()) return rep;

  SetSpec CDQ = set_union(H.flow_or_jump_set(), pq.Q).renamed("CuDuQ");
  Region ble;
  ble.cons.push_back(le(B));
  SetSpec K = set_intersect(CDQ, SetSpec(H.space, {ble}, "B<=0")).renamed("K");
  SetSpec CmQ = set_difference(H.C, pq.Q).renamed("C\\Q");

  SetSpec shell = boundary_shell(CmQ, B, cfg.shell_delta(cfg.grid.box));
  rep.add(check_flow_inequality("1: <gradB,eta><=0 on (C\\Q)&shell", shell, CmQ,
                                H.F, B, [](const Vec&) { return 0.0; }, cfg));

  SetSpec KDmQ = set_intersect(K, set_difference(H.D, pq.Q)).renamed("K&(D\\Q)");
  rep.add(check_jump_inequality(
      "2: B(eta)<=0 on K&(D\\Q)", KDmQ, H.G,
      [&](const Vec&, const Vec& eta) { return B(eta); },
      [](const Vec&, const Vec&) { return 0.0; }, cfg));
  rep.add(check_image_in("3: G(K&(D\\Q)) subset CuDuQ", KDmQ, H.G, nullptr, CDQ,
                         cfg));
  return rep;
}

SubReport finite_escape_item(const HybridSystem& H, const SetSpec& PmQ,
                             const CheckConfig& cfg) {
  SubReport sub = check_finite_escape("5: no finite escape in (P\\Q)&C", H,
                                      set_intersect(PmQ, H.C), cfg);
  return sub;
}

SubReport nontriviality_item(const HybridSystem& H, const SetSpec& PmQ,
                             const CheckConfig& cfg) {
  return check_nontriviality("6: nontrivial continuation from ((P\\Q)&bdC)\\D", H,
                             PmQ, H.C, cfg);
}

}  // namespace

UntilCertReport certify_weak_until(const HybridSystem& H, const PropositionPair& pq,
                                   const ScalarFn& B, const CertifyOptions& opt) {
  if (opt.monitor_fallback_for_weak) {
    CheckReport rep;
    rep.id = "weak-until-via-monitor";
    AggregateVerdict mv =
        check_formula_over(H, pq, opt.cfg.grid, UntilMode::Weak, opt.cfg.sim);
    SubReport sub;
    sub.id = "monitor: weak until over sampled initial conditions";
    sub.notes.push_back("empirically supported only; not a certificate");
    if (mv.value == Truth::Violated) sub.verdict = "fail";
    else if (mv.value == Truth::Unknown) sub.verdict = "inconclusive";
    rep.add(sub);
    UntilCertReport out = finalize(std::move(rep));
    if (out.certification == "certified") out.certification = "empirically-supported";
    return out;
  }
  return finalize(weak_until_items(H, pq, B, opt.cfg));
}

UntilCertReport certify_strong_until_ECI(const HybridSystem& H,
                                         const PropositionPair& pq, const ScalarFn& B,
                                         const CertV& cv, const CertW& cw,
                                         PreEciVariant variant,
                                         const CertifyOptions& opt) {
  const CheckConfig& cfg = opt.cfg;
  CheckReport rep;
  rep.id = std::string("strong-until-via-ECI(4") + to_string(variant)[1] + ")";
  merge_items(rep, weak_until_items(H, pq, B, cfg), "1/");

  if (auto bad = nondecreasing_violation(cw.f_d, -1e3, 1e3)) {
    SubReport gate;
    gate.id = "gate: f_d nondecreasing";
    gate.verdict = "fail";
    gate.witnesses.push_back({{*bad}, {}, "f_d decreases", 1.0});
    rep.add(gate);
    return finalize(std::move(rep));
  }

  StrongContext c = strong_context(H, pq);
  rep.add(check_flow_inequality("2.1: <gradv,eta><=fc(v) on cl(Cs)", c.Cs_cl,
                                c.Cs_cl, H.F, cv.v,
                                [&](const Vec& x) { return cv.f_c(cv.v(x)); }, cfg));
  rep.add(check_jump_inequality(
      "2.2: v(eta)<=v(x) on D&P", c.DP, H.G,
      [&](const Vec&, const Vec& eta) { return cv.v(eta); },
      [&](const Vec& x, const Vec&) { return cv.v(x); }, cfg));
  rep.add(check_scalar_flow_convergence(
      "2.3: scalar flow from v(P\\Q) reaches (-inf,r1)", cv.v, cv.f_c, cv.r1, c.PmQ,
      cfg));
  rep.add(check_flow_inequality("3.1: <gradw,eta><=0 on cl(Cs)", c.Cs_cl, c.Cs_cl,
                                H.F, cw.w, [](const Vec&) { return 0.0; }, cfg));
  rep.add(check_jump_inequality(
      "3.2: w(eta)<=fd(w(x)) on D&P", c.DP, H.G,
      [&](const Vec&, const Vec& eta) { return cw.w(eta); },
      [&](const Vec& x, const Vec&) { return cw.f_d(cw.w(x)); }, cfg));
  rep.add(check_scalar_jump_convergence(
      "3.3: scalar iteration from w(P\\Q) reaches (-inf,r2)", cw.w, cw.f_d, cw.r2,
      c.PmQ, cfg));

  auto in_S1 = [&](const Vec& x) { return cv.v(x) < cv.r1 - cfg.tau_cert; };
  auto in_S2 = [&](const Vec& x) { return cw.w(x) < cw.r2 - cfg.tau_cert; };
  if (variant != PreEciVariant::V3b)
    rep.add(check_subset("4: S1={x in cl(Cs): v<r1} subset Q", c.Cs_cl, in_S1, pq.Q,
                         cfg));
  if (variant != PreEciVariant::V3a)
    rep.add(check_subset("4: S2={x in Ds: w<r2} subset Q", c.Ds, in_S2, pq.Q, cfg));
  if (variant == PreEciVariant::V3d) {
    SubReport g4d;
    g4d.id = "4d: G(S2)&cl(Cs) subset S1";
    for (const auto& x : sample_set(c.Ds, cfg.grid, cfg.tau_set)) {
      if (!in_S2(x)) continue;
      ++g4d.points_checked;
      for (const auto& eta : H.G.sample(x)) {
        if (!c.Cs_cl.contains(eta, cfg.tau_set)) continue;
        double resid = cv.v(eta) - cv.r1;
        if (resid > cfg.tau_cert) {
          g4d.verdict = "fail";
          g4d.residual_max = std::max(g4d.residual_max, resid);
          if (static_cast<int>(g4d.witnesses.size()) < cfg.max_witnesses)
            g4d.witnesses.push_back({x, eta, g4d.id, resid});
        }
      }
    }
    if (g4d.points_checked == 0) g4d.notes.push_back("vacuous: S2 not sampled");
    rep.add(g4d);
  } else {
    rep.add(check_arc_classes(std::string("4") + to_string(variant)[1] +
                                  ": solution classes from P\\Q",
                              H, c.PmQ, variant, cfg));
  }
  rep.add(finite_escape_item(H, c.PmQ, cfg));
  rep.add(nontriviality_item(H, c.PmQ, cfg));
  return finalize(std::move(rep));
}

UntilCertReport certify_strong_until_ECI_flows(const HybridSystem& H,
                                               const PropositionPair& pq,
                                               const ScalarFn& B, const CertV& cv,
                                               const CertifyOptions& opt) {
  const CheckConfig& cfg = opt.cfg;
  CheckReport rep;
  rep.id = "strong-until-via-ECI-flows";
  merge_items(rep, weak_until_items(H, pq, B, cfg), "1/");
  StrongContext c = strong_context(H, pq);
  rep.add(check_flow_inequality("2.1: <gradv,eta><=fc(v) on cl(Cs)", c.Cs_cl,
                                c.Cs_cl, H.F, cv.v,
                                [&](const Vec& x) { return cv.f_c(cv.v(x)); }, cfg));
  rep.add(check_jump_inequality(
      "2.2: v(eta)<=v(x) on D&P", c.DP, H.G,
      [&](const Vec&, const Vec& eta) { return cv.v(eta); },
      [&](const Vec& x, const Vec&) { return cv.v(x); }, cfg));
  rep.add(check_scalar_flow_convergence(
      "2.3: scalar flow from v(P\\Q) reaches (-inf,r1)", cv.v, cv.f_c, cv.r1, c.PmQ,
      cfg));
  auto in_S1 = [&](const Vec& x) { return cv.v(x) < cv.r1 - cfg.tau_cert; };
  rep.add(check_subset("2.3: S1 subset Q", c.Cs_cl, in_S1, pq.Q, cfg));

  SubReport per_arc;
  per_arc.id = "3: t_star within each arc's flow horizon";
  GridSpec g = cfg.grid;
  g.res = std::min(g.res, 6);
  for (const auto& x0 : sample_set(c.PmQ, g, cfg.tau_set)) {
    auto res = simulate_scalar_flow(cv.f_c, cv.v(x0), cv.r1, cfg.scalar_t_budget,
                                    cfg.tau_cert);
    for (const auto& arc : simulate(H, x0, cfg.sim, BranchPolicy::Branch)) {
      ++per_arc.points_checked;
      if (!res.converged || res.t_star > arc.sup_t() + cfg.tau_cert) {
        per_arc.verdict = "fail";
        if (static_cast<int>(per_arc.witnesses.size()) < cfg.max_witnesses)
          per_arc.witnesses.push_back(
              {x0, {}, "t_star exceeds sup_t",
               res.converged ? res.t_star - arc.sup_t() : kInf});
      }
    }
  }
  rep.add(per_arc);
  return finalize(std::move(rep));
}

UntilCertReport certify_strong_until_ECI_jumps(const HybridSystem& H,
                                               const PropositionPair& pq,
                                               const ScalarFn& B, const CertW& cw,
                                               const CertifyOptions& opt) {
  const CheckConfig& cfg = opt.cfg;
  CheckReport rep;
  rep.id = "strong-until-via-ECI-jumps";
  merge_items(rep, weak_until_items(H, pq, B, cfg), "1/");
  if (auto bad = nondecreasing_violation(cw.f_d, -1e3, 1e3)) {
    SubReport gate;
    gate.id = "gate: f_d nondecreasing";
    gate.verdict = "fail";
    gate.witnesses.push_back({{*bad}, {}, "f_d decreases", 1.0});
    rep.add(gate);
    return finalize(std::move(rep));
  }
  StrongContext c = strong_context(H, pq);
  rep.add(check_flow_inequality("2.1: <gradw,eta><=0 on cl(Cs)", c.Cs_cl, c.Cs_cl,
                                H.F, cw.w, [](const Vec&) { return 0.0; }, cfg));
  rep.add(check_jump_inequality(
      "2.2: w(eta)<=fd(w(x)) on D&P", c.DP, H.G,
      [&](const Vec&, const Vec& eta) { return cw.w(eta); },
      [&](const Vec& x, const Vec&) { return cw.f_d(cw.w(x)); }, cfg));
  rep.add(check_scalar_jump_convergence(
      "2.3: scalar iteration from w(P\\Q) reaches (-inf,r2)", cw.w, cw.f_d, cw.r2,
      c.PmQ, cfg));
  SetSpec DsCs = set_union(c.Ds, c.Cs_cl).renamed("Ds u cl(Cs)");
  auto in_S2 = [&](const Vec& x) { return cw.w(x) < cw.r2 - cfg.tau_cert; };
  rep.add(check_subset("2.3: S2={x in Ds u cl(Cs): w<r2} subset Q", DsCs, in_S2,
                       pq.Q, cfg));

  SubReport per_arc;
  per_arc.id = "3: j_star within each arc's jump horizon";
  GridSpec g = cfg.grid;
  g.res = std::min(g.res, 6);
  for (const auto& x0 : sample_set(c.PmQ, g, cfg.tau_set)) {
    auto res = iterate_scalar_jump(cw.f_d, cw.w(x0), cw.r2, cfg.scalar_j_budget,
                                   cfg.tau_cert);
    for (const auto& arc : simulate(H, x0, cfg.sim, BranchPolicy::Branch)) {
      ++per_arc.points_checked;
      if (!res.converged || res.j_star > arc.sup_j()) {
        per_arc.verdict = "fail";
        if (static_cast<int>(per_arc.witnesses.size()) < cfg.max_witnesses)
          per_arc.witnesses.push_back(
              {x0, {}, "j_star exceeds sup_j",
               res.converged ? static_cast<double>(res.j_star - arc.sup_j()) : kInf});
      }
    }
  }
  rep.add(per_arc);
  return finalize(std::move(rep));
}

UntilCertReport certify_strong_until_FTA(const HybridSystem& H,
                                         const PropositionPair& pq, const ScalarFn& B,
                                         const ScalarFn& V, const ScalarFn& W,
                                         double c1, double c2, double c,
                                         const SetSpec& N, double r,
                                         const CertifyOptions& opt) {
  if (!(c1 > 0))
    throw std::invalid_argument(
        "certify_strong_until_FTA: c1 must be positive (the flow decrease rate "
        "enters with its positive orientation; see the recorded sign note)");
  if (!(c2 >= 0 && c2 < 1) || !(c > 0))
    throw std::invalid_argument("certify_strong_until_FTA: need c2 in [0,1), c > 0");
  const CheckConfig& cfg = opt.cfg;
  CheckReport rep;
  rep.id = "strong-until-via-FTA";
  merge_items(rep, weak_until_items(H, pq, B, cfg), "1/");

  StrongContext ctx = strong_context(H, pq);
  SetSpec CD = H.flow_or_jump_set();
  SetSpec NCD = set_intersect(N, CD);
  rep.add(check_image_in("pre: G(N&D) subset N", set_intersect(N, H.D), H.G,
                         nullptr, N, cfg));
  rep.add(check_positive_definite("pre: V positive definite wrt Q", V, pq.Q, NCD,
                                  cfg));
  rep.add(check_positive_definite("pre: W positive definite wrt Q", W, pq.Q, NCD,
                                  cfg));

  SubReport lev;
  lev.id = "pre: P\\Q subset L_V(r)&L_W(r)&(CuD)";
  for (const auto& x : sample_set(ctx.PmQ, cfg.grid, cfg.tau_set)) {
    ++lev.points_checked;
    if (V(x) > r + cfg.tau_cert || W(x) > r + cfg.tau_cert ||
        !CD.contains(x, cfg.tau_set)) {
      lev.verdict = "fail";
      if (static_cast<int>(lev.witnesses.size()) < cfg.max_witnesses)
        lev.witnesses.push_back({x, {}, lev.id, std::max(V(x) - r, W(x) - r)});
    }
  }
  rep.add(lev);

  SetSpec CNPmQ = set_difference(set_intersect(set_intersect(H.C, N), pq.P), pq.Q)
                      .renamed("(C&N&P)\\Q");
  SetSpec DNPmQ = set_difference(set_intersect(set_intersect(H.D, N), pq.P), pq.Q)
                      .renamed("(D&N&P)\\Q");
  rep.add(check_flow_inequality(
      "2: <gradV,eta><=-c1*V^c2 on (C&N&P)\\Q", CNPmQ, H.C, H.F, V,
      [&](const Vec& x) { return -c1 * std::pow(std::max(V(x), 0.0), c2); }, cfg));
  rep.add(check_jump_inequality(
      "2: V(eta)-V(x)<=0 on (D&N&P)\\Q", DNPmQ, H.G,
      [&](const Vec&, const Vec& eta) { return V(eta); },
      [&](const Vec& x, const Vec&) { return V(x); }, cfg));
  rep.add(check_flow_inequality("3: <gradW,eta><=0 on (C&N&P)\\Q", CNPmQ, H.C, H.F,
                                W, [](const Vec&) { return 0.0; }, cfg));
  rep.add(check_jump_inequality(
      "3: W(eta)-W(x)<=-min(c,W(x)) on (D&N&P)\\Q", DNPmQ, H.G,
      [&](const Vec&, const Vec& eta) { return W(eta); },
      [&](const Vec& x, const Vec&) { return W(x) - std::min(c, W(x)); }, cfg));
  rep.add(finite_escape_item(H, ctx.PmQ, cfg));
  rep.add(nontriviality_item(H, ctx.PmQ, cfg));
  return finalize(std::move(rep));
}

CrossReference cross_reference(const AggregateVerdict& monitor,
                               const UntilCertReport& cert) {
  CrossReference cr;
  bool certified = cert.certified();
  if (monitor.value == Truth::Satisfied && certified) {
    cr.quadrant = Quadrant::CertifiedSatisfied;
    cr.summary = "certified and satisfied";
  } else if (monitor.value == Truth::Violated && certified) {
    cr.quadrant = Quadrant::CertifiedViolated;
    cr.summary = "certified but violated: checker bug, the conditions are sufficient";
  } else if (monitor.value == Truth::Satisfied) {
    cr.quadrant = Quadrant::UncertifiedSatisfied;
    cr.summary = "satisfied but uncertified: the conditions are one-directional";
  } else if (monitor.value == Truth::Violated) {
    cr.quadrant = Quadrant::UncertifiedViolated;
    cr.summary = "uncertified and violated";
  } else {
    cr.quadrant = Quadrant::Undecided;
    cr.summary = "monitor undecided";
  }
  return cr;
}

}  // namespace huntil
