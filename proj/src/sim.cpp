#include "huntil/sim.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace huntil {

namespace {

using Field = std::function<Vec(const Vec&)>;

Vec rk4_step(const Field& f, const Vec& x, double h) {
  Vec k1 = f(x);
  Vec k2 = f(axpy(h / 2, k1, x));
  Vec k3 = f(axpy(h / 2, k2, x));
  Vec k4 = f(axpy(h, k3, x));
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] = x[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return y;
}

void pin_discrete(const SpacePtr& space, const Vec& ref, Vec& x) {
  for (const auto& d : space->discrete) x[d.coord] = ref[d.coord];
}

struct FlowStop {
  enum Kind { DEntry, CExit, TMax, Escape } kind;
};

// Earliest parameter s in (0,1] on the substep x -> rk4(x, s*h) where the
// predicate flips false -> true, converged to the flip point itself so the
// stop state sits on the constraint boundary up to roundoff. Stopping on the
// far side of the tolerance band would pump energy into grazing cycles.
double bisect_flip(const Field& f, const Vec& x, double h,
                   const std::function<bool(const Vec&)>& pred) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 80 && hi - lo >= 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    Vec xm = rk4_step(f, x, mid * h);
    if (pred(xm)) hi = mid; else lo = mid;
  }
  return hi;
}

// Actions: s >= 0 is "jump with G selection s"; s < 0 is "flow with F
// selection -1-s".
struct Branch {
  HybridArc arc;
  Vec x;
  double t = 0;
  int j = 0;
  bool arrived_by_jump = false;
  int zeno_count = 0;
  int fixpoint_count = 0;
  double last_jump_t = 0;
  std::vector<char> d_armed;
  bool done = false;
  int sel = 0;
  int forced_action = 0;
  bool has_forced = false;
};

class Simulator {
 public:
  Simulator(const HybridSystem& H, const SimBudget& b, BranchPolicy policy)
      : H_(H), b_(b), policy_(policy) {}

  std::vector<HybridArc> run(const Vec& x0);

 private:
  bool can_flow(const Vec& x, int sel) const;
  bool in_D(const Vec& x) const { return H_.D.contains(x, Tol::set); }
  void run_branch(Branch br);
  bool apply_action(Branch& br, int act);  // returns false when branch ended
  FlowStop flow_until_event(Branch& br);
  void do_jump(Branch& br, int sel);
  void finish(Branch& br, const std::string& reason, bool complete, bool maximal);
  void arm_regions(Branch& br) const;
  void disarm_current(Branch& br) const;

  const HybridSystem& H_;
  SimBudget b_;
  BranchPolicy policy_;
  std::vector<HybridArc> arcs_;
  std::deque<Branch> seeds_;
  int admitted_ = 0;
};

bool Simulator::can_flow(const Vec& x, int sel) const {
  if (!H_.C.closure().contains(x, Tol::set)) return false;
  // Short forward trial step must stay in the flow set; this admits flowing
  // from points of cl(C) \ C reached by a jump.
  const double h_trial = 1e-6;
  Vec xh = rk4_step(H_.F.selections()[sel].f, x, h_trial);
  pin_discrete(H_.space, x, xh);
  return H_.C.contains(xh, Tol::set);
}

void Simulator::arm_regions(Branch& br) const {
  br.d_armed.assign(H_.D.regions().size(), 1);
  disarm_current(br);
}

void Simulator::disarm_current(Branch& br) const {
  for (std::size_t r = 0; r < H_.D.regions().size(); ++r)
    if (H_.D.regions()[r].contains(br.x, 1e-8)) br.d_armed[r] = 0;
}

void Simulator::finish(Branch& br, const std::string& reason, bool complete,
                       bool maximal) {
  br.arc.flags.stop_reason = reason;
  br.arc.flags.complete_heuristic = complete;
  br.arc.flags.maximal_heuristic = maximal;
  br.done = true;
}

FlowStop Simulator::flow_until_event(Branch& br) {
  const auto& f = H_.F.selections()[br.sel].f;
  Field step = [&](const Vec& x) {
    Vec d = f(x);
    for (const auto& dc : H_.space->discrete) d[dc.coord] = 0.0;
    return d;
  };
  auto& seg = br.arc.segments.back();
  while (true) {
    if (br.t >= b_.t_max - 1e-15) return {FlowStop::TMax};
    double h = std::min(b_.dt, b_.t_max - br.t);
    Vec x1 = rk4_step(step, br.x, h);
    pin_discrete(H_.space, br.x, x1);

    if (norm(x1) > b_.escape_norm) return {FlowStop::Escape};

    double s_exit = 2.0;
    if (!H_.C.contains(x1, Tol::set)) {
      // Localize against zero slack so the stop point sits on the boundary
      // and inside D's membership tolerance when exit and jump sets touch.
      auto pred = [&](const Vec& y) { return !H_.C.contains(y, 0.0); };
      s_exit = pred(br.x) ? 0.0 : bisect_flip(step, br.x, h, pred);
    }

    double s_entry = 2.0;
    for (std::size_t r = 0; r < H_.D.regions().size(); ++r) {
      const auto& reg = H_.D.regions()[r];
      if (!br.d_armed[r]) {
        if (!reg.contains(x1, 1e-8)) br.d_armed[r] = 1;
        continue;
      }
      bool has_eq = false;
      for (const auto& c : reg.cons)
        if (c.rel == Rel::Eq) has_eq = true;
      double s_r = 2.0;
      if (has_eq) {
        // Equality-carrying regions: bracket the sign change of each equality
        // and verify the rest of the region at the crossing. A plain
        // membership test would step over the zero set.
        for (const auto& c : reg.cons) {
          if (c.rel != Rel::Eq) continue;
          double v0 = c.g(br.x), v1 = c.g(x1);
          if (std::abs(v0) <= b_.tau_evt) continue;  // departing the zero set
          if ((v0 > 0) == (v1 > 0) && std::abs(v1) > b_.tau_evt) continue;
          auto pred = [&](const Vec& y) {
            return (c.g(y) > 0) != (v0 > 0) || std::abs(c.g(y)) <= b_.tau_evt;
          };
          double s = bisect_flip(step, br.x, h, pred);
          Vec xs = rk4_step(step, br.x, s * h);
          pin_discrete(H_.space, br.x, xs);
          if (reg.contains(xs, Tol::set)) s_r = std::min(s_r, s);
        }
      } else if (reg.contains(x1, Tol::set)) {
        auto pred = [&](const Vec& y) { return reg.contains(y, 0.0); };
        s_r = pred(x1) ? bisect_flip(step, br.x, h, pred) : 1.0;
      }
      s_entry = std::min(s_entry, s_r);
    }

    double s_stop = std::min(s_exit, s_entry);
    if (s_stop <= 1.0) {
      // Keep one interior sample so segments shorter than dt still expose
      // their excursion to the monitor and the oracles.
      if (s_stop * h > 16 * b_.tau_evt) {
        Vec xm = rk4_step(step, br.x, 0.5 * s_stop * h);
        pin_discrete(H_.space, br.x, xm);
        seg.samples.push_back({br.t + 0.5 * s_stop * h, xm});
      }
      Vec xs = rk4_step(step, br.x, s_stop * h);
      pin_discrete(H_.space, br.x, xs);
      br.t += s_stop * h;
      br.x = xs;
      seg.samples.push_back({br.t, br.x});
      return {s_entry <= s_exit ? FlowStop::DEntry : FlowStop::CExit};
    }

    br.x = x1;
    br.t += h;
    seg.samples.push_back({br.t, br.x});
  }
}

void Simulator::do_jump(Branch& br, int sel) {
  Vec pre = br.x;
  Vec post = H_.G.eval(sel, pre);
  br.arc.jumps.push_back({br.t, br.j, pre, post, sel});
  double gap = br.t - br.last_jump_t;
  if (br.arc.jumps.size() > 1 && gap < b_.eps_zeno) ++br.zeno_count;
  else br.zeno_count = 0;
  if (dist2(post, pre) <= 1e-12 * (1.0 + norm(pre))) ++br.fixpoint_count;
  else br.fixpoint_count = 0;
  br.last_jump_t = br.t;
  br.j += 1;
  br.x = post;
  br.arc.segments.push_back(FlowSegment{br.j, {{br.t, br.x}}});
  br.arrived_by_jump = true;
  arm_regions(br);
}

bool Simulator::apply_action(Branch& br, int act) {
  if (act >= 0) {
    do_jump(br, act);
    return true;
  }
  br.sel = -1 - act;
  br.arc.flow_selection = br.sel;
  double t_before = br.t;
  FlowStop stop = flow_until_event(br);
  br.arrived_by_jump = false;
  switch (stop.kind) {
    case FlowStop::TMax:
      finish(br, "t_max", true, false);
      return false;
    case FlowStop::Escape:
      br.arc.flags.finite_escape = true;
      finish(br, "finite_escape", false, false);
      return false;
    case FlowStop::DEntry:
      disarm_current(br);
      return true;
    case FlowStop::CExit:
      if (br.t - t_before < 1e-13 && !in_D(br.x)) {
        finish(br, "dead_end", false, true);
        return false;
      }
      return true;
  }
  return true;
}

void Simulator::run_branch(Branch br) {
  if (br.has_forced) {
    br.has_forced = false;
    if (!apply_action(br, br.forced_action)) {
      arcs_.push_back(std::move(br.arc));
      return;
    }
  }
  while (!br.done) {
    if (br.fixpoint_count >= 3) {
      finish(br, "fixpoint_jump", true, false);
      break;
    }
    if (br.zeno_count >= b_.n_zeno) {
      br.arc.flags.zeno_truncated = true;
      finish(br, "zeno_stop", true, false);
      break;
    }

    bool jumpable = in_D(br.x) && br.j < b_.j_max;
    std::vector<int> flow_acts;
    if (br.t < b_.t_max - 1e-15)
      for (std::size_t s = 0; s < H_.F.size(); ++s)
        if (can_flow(br.x, static_cast<int>(s)))
          flow_acts.push_back(-1 - static_cast<int>(s));

    if (!jumpable && flow_acts.empty()) {
      bool at_budget = br.t >= b_.t_max - 1e-15 ||
                       (br.j >= b_.j_max && in_D(br.x));
      if (at_budget)
        finish(br, br.t >= b_.t_max - 1e-15 ? "t_max" : "j_max", true, false);
      else
        finish(br, "dead_end", false, true);
      break;
    }

    std::vector<int> actions;
    std::vector<int> jump_acts;
    if (jumpable)
      for (std::size_t s = 0; s < H_.G.size(); ++s)
        jump_acts.push_back(static_cast<int>(s));
    if (policy_ == BranchPolicy::JumpPriority) {
      actions = jumpable ? jump_acts : flow_acts;
    } else if (br.arrived_by_jump) {
      // Prefer switching mode after a jump (flow first) and jumping when D
      // was reached by flowing. Keeps qualitatively distinct branches alive
      // under the branch cap.
      actions = flow_acts;
      actions.insert(actions.end(), jump_acts.begin(), jump_acts.end());
    } else {
      actions = jump_acts;
      actions.insert(actions.end(), flow_acts.begin(), flow_acts.end());
    }

    for (std::size_t k = 1; k < actions.size(); ++k) {
      if (admitted_ >= b_.branch_max) break;
      Branch child = br;
      child.forced_action = actions[k];
      child.has_forced = true;
      seeds_.push_back(std::move(child));
      ++admitted_;
    }

    if (!apply_action(br, actions.front())) break;
  }
  arcs_.push_back(std::move(br.arc));
}

std::vector<HybridArc> Simulator::run(const Vec& x0) {
  if (!set_union(H_.C.closure(), H_.D).contains(x0, Tol::set))
    throw std::invalid_argument("simulate: x0 outside cl(C) union D");
  Branch root;
  root.x = x0;
  root.arc.segments.push_back(FlowSegment{0, {{0.0, x0}}});
  arm_regions(root);
  admitted_ = 1;
  run_branch(std::move(root));
  while (!seeds_.empty()) {
    Branch next = std::move(seeds_.front());
    seeds_.pop_front();
    run_branch(std::move(next));
  }
  for (auto& a : arcs_) a.flags = classify_arc(a, b_);
  return arcs_;
}

}  // namespace

std::vector<HybridArc> simulate(const HybridSystem& H, const Vec& x0,
                                const SimBudget& budget, BranchPolicy policy) {
  Simulator sim(H, budget, policy);
  return sim.run(x0);
}

bool HybridArc::contains_time(const HybridTime& tj) const {
  for (const auto& s : segments)
    if (s.j == tj.j && tj.t >= s.t0() - 1e-12 && tj.t <= s.t1() + 1e-12) return true;
  return false;
}

double HybridArc::max_sample_gap() const {
  double g = 0;
  for (const auto& s : segments)
    for (std::size_t k = 1; k < s.samples.size(); ++k)
      g = std::max(g, s.samples[k].t - s.samples[k - 1].t);
  return g;
}

ArcValidation validate_arc(const HybridSystem& H, const HybridArc& arc,
                           double tau_flow, double tau_jump, double tau_set) {
  ArcValidation r;
  const auto& x0 = arc.initial_state();
  r.s0_ok = set_union(H.C.closure(), H.D).contains(x0, tau_set);
  if (!r.s0_ok) r.notes.push_back("initial state outside cl(C) union D");

  int sel = arc.flow_selection;
  std::function<Vec(const Vec&)> f = [&](const Vec& x) {
    Vec d = H.F.selections()[sel].f(x);
    for (const auto& dc : H.space->discrete) d[dc.coord] = 0.0;
    return d;
  };
  auto rk4 = [&](const Vec& x, double h) {
    Vec k1 = f(x);
    Vec k2 = f(axpy(h / 2, k1, x));
    Vec k3 = f(axpy(h / 2, k2, x));
    Vec k4 = f(axpy(h, k3, x));
    Vec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      y[i] = x[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return y;
  };
  for (const auto& seg : arc.segments) {
    for (std::size_t k = 1; k < seg.samples.size(); ++k) {
      const auto& a = seg.samples[k - 1];
      const auto& b = seg.samples[k];
      double h = b.t - a.t;
      if (h <= 0) continue;
      Vec pred = rk4(rk4(a.x, h / 2), h / 2);
      r.flow_inclusion_res = std::max(r.flow_inclusion_res, dist2(pred, b.x));
    }
    for (std::size_t k = 1; k + 1 < seg.samples.size(); ++k) {
      const auto& s = seg.samples[k];
      if (!H.C.contains(s.x, tau_set))
        r.flow_set_res = std::max(r.flow_set_res, set_distance(H.C, s.x));
    }
  }
  for (const auto& jr : arc.jumps) {
    if (!H.D.contains(jr.pre, tau_set))
      r.jump_set_res = std::max(r.jump_set_res, set_distance(H.D, jr.pre));
    double best = kInf;
    for (const auto& v : H.G.sample(jr.pre)) best = std::min(best, dist2(v, jr.post));
    r.jump_map_res = std::max(r.jump_map_res, best);
  }
  r.pass = r.s0_ok && r.flow_inclusion_res <= tau_flow &&
           r.flow_set_res <= tau_set * 10 && r.jump_set_res <= tau_jump &&
           r.jump_map_res <= tau_jump;
  return r;
}

ArcFlags classify_arc(const HybridArc& arc, const SimBudget& budget) {
  ArcFlags f = arc.flags;
  double t_end = arc.sup_t();
  double last_jump_t = arc.jumps.empty() ? 0.0 : arc.jumps.back().t;
  double span = std::max(t_end, 1e-12);

  if (f.stop_reason == "fixpoint_jump") f.eventually_discrete = true;
  if (arc.jumps.size() >= 2 && f.stop_reason == "j_max") {
    std::size_t n = arc.jumps.size();
    bool tail_instant = true;
    std::size_t window = std::min<std::size_t>(n - 1, 3);
    for (std::size_t k = n - window; k < n; ++k)
      if (arc.jumps[k].t - arc.jumps[k - 1].t > 1e-12) tail_instant = false;
    if (tail_instant) f.eventually_discrete = true;
  }

  if (f.stop_reason == "zeno_stop") {
    std::size_t n = arc.jumps.size();
    std::size_t w = std::min<std::size_t>(n, static_cast<std::size_t>(budget.n_zeno));
    bool nonzero = false;
    for (std::size_t k = n - w + 1; k < n; ++k)
      if (arc.jumps[k].t - arc.jumps[k - 1].t > 1e-13) nonzero = true;
    if (nonzero) {
      f.genuinely_zeno = true;
      if (n >= 3) {
        double d1 = arc.jumps[n - 1].t - arc.jumps[n - 2].t;
        double d2 = arc.jumps[n - 2].t - arc.jumps[n - 3].t;
        if (d2 > 0 && d1 > 0 && d1 < d2) {
          double rho = d1 / d2;
          f.zeno_limit_t = arc.jumps[n - 1].t + d1 * rho / (1 - rho);
        }
      }
    } else {
      f.eventually_discrete = true;
    }
  }

  if (f.stop_reason == "t_max") {
    double tail = t_end - last_jump_t;
    if (arc.jumps.empty() || tail >= 0.2 * span) f.eventually_continuous = true;
    else if (arc.jumps.size() >= 3) f.unbounded_both = true;
  }
  if (f.stop_reason == "j_max" && !f.eventually_discrete &&
      last_jump_t > 0.5 * span && arc.jumps.size() >= 3)
    f.unbounded_both = true;

  f.budget_truncated = f.stop_reason == "t_max" || f.stop_reason == "j_max" ||
                       f.stop_reason == "zeno_stop";
  return f;
}

std::vector<Vec> reachable_sample(const HybridSystem& H,
                                  const std::vector<Vec>& initial_points,
                                  const SimBudget& budget, BranchPolicy policy) {
  std::vector<Vec> out;
  for (const auto& x0 : initial_points) {
    for (const auto& arc : simulate(H, x0, budget, policy)) {
      for (const auto& seg : arc.segments)
        for (const auto& s : seg.samples) out.push_back(s.x);
      for (const auto& j : arc.jumps) out.push_back(j.post);
    }
  }
  return out;
}

SettlingTime settling_time(const HybridArc& arc, const SetSpec& A, double tau_set) {
  SettlingTime st;
  st.budget_truncated = arc.flags.budget_truncated;
  for (const auto& seg : arc.segments) {
    for (std::size_t k = 0; k < seg.samples.size(); ++k) {
      const auto& s = seg.samples[k];
      if (A.contains(s.x, tau_set)) {
        double t_hit = s.t;
        Vec x_hit = s.x;
        if (k > 0 && !A.contains(seg.samples[k - 1].x, tau_set)) {
          const auto& a = seg.samples[k - 1];
          double lo = 0, hi = 1;
          for (int it = 0; it < 60; ++it) {
            double m = 0.5 * (lo + hi);
            Vec xm(a.x.size());
            for (std::size_t i = 0; i < xm.size(); ++i)
              xm[i] = a.x[i] + m * (s.x[i] - a.x[i]);
            if (A.contains(xm, tau_set)) hi = m; else lo = m;
          }
          t_hit = a.t + hi * (s.t - a.t);
          for (std::size_t i = 0; i < x_hit.size(); ++i)
            x_hit[i] = a.x[i] + hi * (s.x[i] - a.x[i]);
          st.refined_between_samples = true;
        }
        st.total = t_hit + seg.j;
        st.reached = true;
        st.when = {t_hit, seg.j};
        st.state = x_hit;
        return st;
      }
    }
  }
  return st;
}

std::string trajectory_dsv(const HybridSystem& H, const HybridArc& arc) {
  std::ostringstream os;
  os.precision(17);
  os << "t j";
  for (int i = 0; i < H.dim(); ++i) os << " x" << i;
  os << " in_C in_D\n";
  for (const auto& seg : arc.segments)
    for (const auto& s : seg.samples) {
      os << s.t << ' ' << seg.j;
      for (double v : s.x) os << ' ' << v;
      os << ' ' << (H.C.contains(s.x, Tol::set) ? 1 : 0) << ' '
         << (H.D.contains(s.x, Tol::set) ? 1 : 0) << '\n';
    }
  return os.str();
}

}  // namespace huntil
