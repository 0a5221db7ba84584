// Command-line front end: simulate hybrid systems, monitor until formulas
// along their solutions, and run the certificate checks, from bundled
// scenarios or config files.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "huntil/config.hpp"
#include "huntil/report.hpp"

namespace fs = std::filesystem;
using namespace huntil;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBadInit = 3;
constexpr int kExitUnknown = 4;

struct CommonFlags {
  int grid_res = 64;
  double tol = Tol::cert;
  double t_max = 20.0;
  int j_max = 50;
  int branches = 8;
  unsigned seed = 0;
  std::string policy = "branch";
  std::string out = ".";

  void attach(CLI::App* cmd) {
    cmd->add_option("--grid-res", grid_res, "grid points per dimension")
        ->envname("HUNTIL_GRID_RES");
    cmd->add_option("--tol", tol, "certificate inequality tolerance")
        ->envname("HUNTIL_TOL");
    cmd->add_option("--tmax", t_max, "flow-time budget")->envname("HUNTIL_TMAX");
    cmd->add_option("--jmax", j_max, "jump budget")->envname("HUNTIL_JMAX");
    cmd->add_option("--branches", branches, "max nondeterministic branches")
        ->envname("HUNTIL_BRANCHES");
    cmd->add_option("--seed", seed, "seed for randomized samplers")
        ->envname("HUNTIL_SEED");
    cmd->add_option("--policy", policy, "branch | jump-priority")
        ->check(CLI::IsMember({"branch", "jump-priority"}))
        ->envname("HUNTIL_POLICY");
    cmd->add_option("--out", out, "output directory")->envname("HUNTIL_OUT");
  }

  CheckConfig check_config(const Scenario& sc) const {
    CheckConfig cfg;
    cfg.grid = GridSpec{sc.H.bounding_box, grid_res, 4};
    cfg.tau_cert = tol;
    cfg.sim = sim_budget();
    return cfg;
  }
  SimBudget sim_budget() const {
    SimBudget b;
    b.t_max = t_max;
    b.j_max = j_max;
    b.branch_max = branches;
    return b;
  }
  BranchPolicy branch_policy() const {
    return policy == "jump-priority" ? BranchPolicy::JumpPriority
                                     : BranchPolicy::Branch;
  }
  Json echo(const std::string& scenario) const {
    Json j;
    j["scenario"] = scenario;
    j["grid_res"] = grid_res;
    j["tol"] = tol;
    j["tmax"] = t_max;
    j["jmax"] = j_max;
    j["branches"] = branches;
    j["seed"] = seed;
    j["policy"] = policy;
    return j;
  }
};

Vec parse_x0(const std::string& text) {
  Vec x;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) x.push_back(std::stod(tok));
  return x;
}

void emit(const CommonFlags& flags, const std::string& name, const Json& body,
          const std::string& summary) {
  fs::create_directories(flags.out);
  write_report_file((fs::path(flags.out) / (name + ".json")).string(), body);
  std::cout << summary;
}

int run_simulate(const std::string& target, const std::string& x0_text,
                 const CommonFlags& flags) {
  Scenario sc = resolve_scenario(target);
  Vec x0 = parse_x0(x0_text);
  if (static_cast<int>(x0.size()) != sc.H.dim()) {
    std::cerr << "error: x0 has dimension " << x0.size() << ", system needs "
              << sc.H.dim() << "\n";
    return kExitConfig;
  }
  std::vector<HybridArc> arcs;
  try {
    arcs = simulate(sc.H, x0, flags.sim_budget(), flags.branch_policy());
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInit;
  }
  Json body;
  body["schema"] = "huntil-report/1";
  body["command"] = "simulate";
  body["config"] = flags.echo(sc.id);
  body["x0"] = to_json(x0);
  Json ja = Json::array();
  fs::create_directories(flags.out);
  std::ostringstream summary;
  summary << "simulate " << sc.id << ": " << arcs.size() << " arc(s)\n";
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    ja.push_back(arc_summary_json(arcs[k]));
    std::string traj = (fs::path(flags.out) /
                        ("trajectory-" + sc.id + "-" + std::to_string(k) + ".dsv"))
                           .string();
    std::ofstream tf(traj);
    tf << trajectory_dsv(sc.H, arcs[k]);
    const auto& f = arcs[k].flags;
    summary << "  arc " << k << ": jumps=" << arcs[k].jumps.size()
            << " sup_t=" << arcs[k].sup_t() << " stop=" << f.stop_reason
            << (f.genuinely_zeno ? " [genuinely Zeno]" : "")
            << (f.eventually_discrete ? " [eventually discrete]" : "")
            << (f.eventually_continuous ? " [eventually continuous]" : "") << "\n";
  }
  body["arcs"] = ja;
  emit(flags, "simulate-" + sc.id, body, summary.str());
  return kExitOk;
}

int run_monitor(const std::string& target, const std::string& mode,
                const CommonFlags& flags) {
  Scenario sc = resolve_scenario(target);
  GridSpec init_grid{sc.H.bounding_box, std::min(flags.grid_res, 20), 2};
  AggregateVerdict agg =
      check_formula_over(sc.H, sc.pq, init_grid,
                         mode == "strong" ? UntilMode::Strong : UntilMode::Weak,
                         flags.sim_budget(), flags.branch_policy());
  Json body = to_json(agg);
  body["command"] = "monitor";
  body["mode"] = mode;
  body["config"] = flags.echo(sc.id);
  std::ostringstream summary;
  summary << "monitor " << sc.id << " (" << mode << "): " << to_string(agg.value)
          << " over " << agg.per_init.size() << " initial conditions, "
          << agg.arcs_checked << " arcs\n";
  emit(flags, "monitor-" + sc.id + "-" + mode, body, summary.str());
  switch (agg.value) {
    case Truth::Satisfied: return kExitOk;
    case Truth::Violated: return kExitFailed;
    case Truth::Unknown: return kExitUnknown;
  }
  return kExitUnknown;
}

PreEciVariant parse_variant(std::string v) {
  if (!v.empty() && (v[0] == '3' || v[0] == '4')) v = v.substr(1);
  if (v == "a") return PreEciVariant::V3a;
  if (v == "b") return PreEciVariant::V3b;
  if (v == "c") return PreEciVariant::V3c;
  return PreEciVariant::V3d;
}

int run_certify(const std::string& target, const std::string& theorem,
                const std::string& variant, const CommonFlags& flags) {
  Scenario sc = resolve_scenario(target);
  CertifyOptions opt;
  opt.cfg = flags.check_config(sc);
  auto need = [&](bool ok, const std::string& field) {
    if (!ok) {
      std::cerr << "error: scenario/config lacks certificate field: " << field
                << "\n";
      std::exit(kExitConfig);
    }
  };
  UntilCertReport rep;
  if (theorem == "weak") {
    need(sc.weak_B.valid(), "certificates.weak_B");
    rep = certify_weak_until(sc.H, sc.pq, sc.weak_B, opt);
  } else if (theorem == "strong-eci") {
    need(sc.weak_B.valid(), "certificates.weak_B");
    need(sc.v.has_value(), "certificates.v");
    need(sc.w.has_value(), "certificates.w");
    rep = certify_strong_until_ECI(sc.H, sc.pq, sc.weak_B, *sc.v, *sc.w,
                                   parse_variant(variant), opt);
  } else if (theorem == "strong-eci-flows") {
    need(sc.weak_B.valid(), "certificates.weak_B");
    need(sc.v.has_value(), "certificates.v");
    rep = certify_strong_until_ECI_flows(sc.H, sc.pq, sc.weak_B, *sc.v, opt);
  } else if (theorem == "strong-eci-jumps") {
    need(sc.weak_B.valid(), "certificates.weak_B");
    need(sc.w.has_value(), "certificates.w");
    rep = certify_strong_until_ECI_jumps(sc.H, sc.pq, sc.weak_B, *sc.w, opt);
  } else {  // strong-fta
    need(sc.weak_B.valid(), "certificates.weak_B");
    need(sc.fta.has_value(), "certificates.fta");
    const auto& f = *sc.fta;
    try {
      rep = certify_strong_until_FTA(sc.H, sc.pq, sc.weak_B, f.V, f.W, f.c1, f.c2,
                                     f.c, f.N, f.r, opt);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitConfig;
    }
  }
  Json body = to_json(rep);
  body["command"] = "certify";
  body["theorem"] = theorem;
  body["config"] = flags.echo(sc.id);
  std::ostringstream summary;
  summary << "certify " << sc.id << " (" << theorem << "): " << rep.certification
          << "\n"
          << human_summary(rep.report);
  emit(flags, "certify-" + sc.id + "-" + theorem, body, summary.str());
  if (rep.certification == "certified" ||
      rep.certification == "empirically-supported")
    return kExitOk;
  return rep.certification == "failed" ? kExitFailed : kExitUnknown;
}

void print_defaults() {
  CommonFlags flags;
  SimBudget b;
  Json j;
  j["grid_res"] = flags.grid_res;
  j["boundary_refine"] = 4;
  j["tol_cert"] = Tol::cert;
  j["tol_set"] = Tol::set;
  j["tol_flow"] = Tol::flow;
  j["tol_jump"] = Tol::jump;
  j["tol_event"] = Tol::evt;
  j["tmax"] = b.t_max;
  j["jmax"] = b.j_max;
  j["branches"] = b.branch_max;
  j["dt"] = b.dt;
  j["eps_zeno"] = b.eps_zeno;
  j["n_zeno"] = b.n_zeno;
  j["policy"] = flags.policy;
  j["seed"] = flags.seed;
  j["scenarios"] = scenario_ids();
  std::cout << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybrid-system until-formula monitoring and certification"};
  app.require_subcommand(0, 1);
  bool print_cfg = false;
  app.add_flag("--print-config", print_cfg, "print all defaults and exit");

  std::string target, x0_text = "0", mode = "weak", theorem = "weak",
              variant = "3d";
  CommonFlags flags;

  auto* sim_cmd = app.add_subcommand("simulate", "integrate hybrid arcs");
  sim_cmd->add_option("scenario", target, "scenario id or config path")->required();
  sim_cmd->add_option("--x0", x0_text, "initial state, comma separated")->required();
  flags.attach(sim_cmd);

  auto* mon_cmd = app.add_subcommand("monitor", "evaluate an until formula");
  mon_cmd->add_option("scenario", target, "scenario id or config path")->required();
  mon_cmd->add_option("--mode", mode, "weak | strong")
      ->check(CLI::IsMember({"weak", "strong"}));
  flags.attach(mon_cmd);

  auto* cert_cmd = app.add_subcommand("certify", "run a certificate route");
  cert_cmd->add_option("scenario", target, "scenario id or config path")->required();
  cert_cmd->add_option("--theorem", theorem, "certificate route")
      ->check(CLI::IsMember({"weak", "strong-eci", "strong-eci-flows",
                             "strong-eci-jumps", "strong-fta"}));
  cert_cmd->add_option("--variant", variant, "3a|3b|3c|3d (strong-eci)");
  flags.attach(cert_cmd);

  CLI11_PARSE(app, argc, argv);

  if (print_cfg) {
    print_defaults();
    return kExitOk;
  }
  try {
    if (sim_cmd->parsed()) return run_simulate(target, x0_text, flags);
    if (mon_cmd->parsed()) return run_monitor(target, mode, flags);
    if (cert_cmd->parsed()) return run_certify(target, theorem, variant, flags);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::cout << app.help();
  return kExitOk;
}
