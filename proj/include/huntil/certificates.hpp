#pragma once

#include <map>

#include "huntil/aux_systems.hpp"
#include "huntil/monitor.hpp"
#include "huntil/sim.hpp"

namespace huntil {

// A certificate function with gradient access plus its role-specific data.
struct ScalarCertificate {
  ScalarFn fn;
  std::string role;  // barrier | v_flow | w_jump | V_fta | W_fta
};

// Relative consistency of the gradient against central differences at the
// given points (kinks excluded by choice of points).
bool gradient_consistent(const ScalarFn& f, const std::vector<Vec>& points,
                         double rel_err = 1e-4, double h = 1e-5);

// Scalar comparison dynamics: flow rate f_c (locally Lipschitz) and jump map
// f_d (nondecreasing).
using ScalarMap = std::function<double(double)>;

// First violation of monotonicity on a 1-D grid, if any.
std::optional<double> nondecreasing_violation(const ScalarMap& f_d, double lo,
                                              double hi, int n = 512);

struct Witness {
  Vec x;
  Vec eta;  // image/direction involved, empty when not applicable
  std::string condition;
  double residual = 0;
};

struct SubReport {
  std::string id;
  std::string verdict = "pass";  // pass | fail | inconclusive
  double residual_max = 0;
  std::vector<Witness> witnesses;
  std::vector<std::string> notes;
  int points_checked = 0;
};

struct CheckReport {
  std::string id;
  std::string verdict = "pass";
  std::vector<SubReport> items;
  std::vector<std::string> notes;

  void add(SubReport item);
  bool passed() const { return verdict == "pass"; }
  bool failed() const { return verdict == "fail"; }
  const SubReport* find(const std::string& item_id) const;
};

struct CheckConfig {
  GridSpec grid;
  double tau_cert = Tol::cert;
  double tau_set = Tol::set;
  double delta_shell = 0;       // 0: derived as 0.05 * box diameter
  double scalar_t_budget = 100;
  int scalar_j_budget = 200;
  int max_witnesses = 8;
  SimBudget sim;
  double shell_delta(const Box& box) const {
    return delta_shell > 0 ? delta_shell : 0.05 * box.diameter();
  }
};

enum class PreEciVariant { V3a, V3b, V3c, V3d };
const char* to_string(PreEciVariant v);

// ---- Generic sampled-condition helpers ----------------------------------------
// Shared by the certificate checks and the until-certifier routes.

// <grad v(x), eta> <= rhs(x) + tau for sampled x in X and eta in F(x)
// restricted to the tangent cone of cone_set at x.
SubReport check_flow_inequality(const std::string& id, const SetSpec& X,
                                const SetSpec& cone_set, const SetValuedMap& F,
                                const ScalarFn& v,
                                const std::function<double(const Vec&)>& rhs,
                                const CheckConfig& cfg);

// lhs(x, eta) <= rhs(x, eta) + tau for sampled x in X, eta in G(x).
SubReport check_jump_inequality(
    const std::string& id, const SetSpec& X, const SetValuedMap& G,
    const std::function<double(const Vec&, const Vec&)>& lhs,
    const std::function<double(const Vec&, const Vec&)>& rhs,
    const CheckConfig& cfg);

// Sampled points of `domain` passing `member` must lie in B.
SubReport check_subset(const std::string& id, const SetSpec& domain,
                       const std::function<bool(const Vec&)>& member,
                       const SetSpec& B, const CheckConfig& cfg);

// Images G(X) (optionally only those landing in `filter`) must lie in B.
SubReport check_image_in(const std::string& id, const SetSpec& X,
                         const SetValuedMap& G, const SetSpec* filter,
                         const SetSpec& B, const CheckConfig& cfg);

// Positive definiteness of V with respect to A over `domain`: strictly
// positive off A under a fitted class-K envelope of the distance; values on A
// are reported, not constrained (the settling argument only uses positivity
// off the target).
SubReport check_positive_definite(const std::string& id, const ScalarFn& V,
                                  const SetSpec& A, const SetSpec& domain,
                                  const CheckConfig& cfg);

// Finite-escape heuristic on X: compact inside the grid box, or |F| under a
// validated linear-growth envelope.
SubReport check_finite_escape(const std::string& id, const HybridSystem& H,
                              const SetSpec& X, const CheckConfig& cfg);

// Nontrivial continuation: on ((restrict) & bd C) \ D, some flow direction
// lies in the tangent cone of cone_set.
SubReport check_nontriviality(const std::string& id, const HybridSystem& H,
                              const SetSpec& restrict_to, const SetSpec& cone_set,
                              const CheckConfig& cfg);

// Scalar-comparison convergence from the image of a start set.
SubReport check_scalar_flow_convergence(const std::string& id, const ScalarFn& v,
                                        const ScalarMap& f_c, double r1,
                                        const SetSpec& from, const CheckConfig& cfg);
SubReport check_scalar_jump_convergence(const std::string& id, const ScalarFn& w,
                                        const ScalarMap& f_d, double r2,
                                        const SetSpec& from, const CheckConfig& cfg);

// Empirical solution-class check backing the 3a/3b/3c-style assumptions.
SubReport check_arc_classes(const std::string& id, const HybridSystem& H,
                            const SetSpec& from, PreEciVariant variant,
                            const CheckConfig& cfg);

// ---- Barrier-based invariance checks ----------------------------------------

// B <= tau on O, B > tau on (C u D) n Xu.
CheckReport check_barrier_candidate(const ScalarFn& B, const SetSpec& O,
                                    const SetSpec& Xu, const HybridSystem& H,
                                    const CheckConfig& cfg);

// Conditional invariance of K = {x in C u D : B <= 0} w.r.t. O: flow
// inequality on the outer shell of K, jump nonpositivity on D n K, and
// G(D n K) inside C u D.
CheckReport check_CI(const HybridSystem& H, const ScalarFn& B, const SetSpec& O,
                     const SetSpec& Xu, const CheckConfig& cfg);

// Forward (pre-)invariance of K plus the completeness side conditions:
// (a) a finite-escape heuristic (linear growth fit or compact-in-box) and
// (b) nontrivial continuation from (bd C n K) \ D via the tangent condition.
CheckReport check_forward_invariance(const HybridSystem& H, const ScalarFn& B,
                                     const SetSpec& K, const CheckConfig& cfg);

// ---- Scalar comparison dynamics ---------------------------------------------

struct ScalarFlowResult {
  bool converged = false;
  double t_star = kInf;
  std::string note;
};

// Integrate dy/dt = f_c(y) from y0 until y < r1 (strictly, with margin), then
// verify persistence below r1 for the rest of the budget. Blow-down to -inf
// counts as converged; blow-up does not.
ScalarFlowResult simulate_scalar_flow(const ScalarMap& f_c, double y0, double r1,
                                      double t_budget = 100, double tau = Tol::cert);

struct ScalarJumpResult {
  bool converged = false;
  int j_star = -1;
  std::string note;
};

ScalarJumpResult iterate_scalar_jump(const ScalarMap& f_d, double z0, double r2,
                                     int j_budget = 200, double tau = Tol::cert);

// ---- pre-ECI family ----------------------------------------------------------

struct CertV {
  ScalarFn v;
  ScalarMap f_c;
  double r1 = 0;
};

struct CertW {
  ScalarFn w;
  ScalarMap f_d;
  double r2 = 0;
};

CheckReport check_preECI(const HybridSystem& H, const SetSpec& O, const SetSpec& A,
                         const CertV& cv, const CertW& cw, PreEciVariant variant,
                         const CheckConfig& cfg);

CheckReport check_preECI_flows(const HybridSystem& H, const SetSpec& O,
                               const SetSpec& A, const CertV& cv,
                               const CheckConfig& cfg);

CheckReport check_preECI_jumps(const HybridSystem& H, const SetSpec& O,
                               const SetSpec& A, const CertW& cw,
                               const CheckConfig& cfg);

// ---- Approximate flow lengths ------------------------------------------------

struct FlowLengthEstimate {
  FlowLengthSet I;
  bool jumps_observed = true;
  std::vector<std::string> notes;
};

FlowLengthEstimate estimate_flow_lengths(const HybridSystem& H, const SetSpec& O,
                                         const SetSpec& K, const CheckConfig& cfg,
                                         double inflation = 0.1);

CheckReport check_preECI_flowlengths(const HybridSystem& H, const SetSpec& O,
                                     const SetSpec& A, const SetSpec& K,
                                     const ScalarFn& v, const ScalarMap& f_c,
                                     const ScalarMap& f_d, double r,
                                     const FlowLengthSet& I, const CheckConfig& cfg);

// ---- pre to non-pre ----------------------------------------------------------

// The condition: O u A inside S inside C u D u A, and S forward invariant for
// the system with identity jumps on A. B_S is the user barrier describing S.
CheckReport check_pre_to_nonpre(const HybridSystem& H, const SetSpec& O,
                                const SetSpec& A, const SetSpec& S,
                                const ScalarFn& B_S, bool pre_report_passed,
                                const CheckConfig& cfg);

// ---- pre-FTA -----------------------------------------------------------------

struct PreFtaBound {
  Vec xi;
  double t_star;
  double j_star;
};

struct PreFtaReport {
  CheckReport report;
  std::vector<PreFtaBound> bounds;  // per sampled initial condition
};

PreFtaReport check_preFTA(const HybridSystem& H, const SetSpec& O, const SetSpec& A,
                          const ScalarFn& V, const ScalarFn& W, double c1, double c2,
                          double c, const SetSpec& N, double r,
                          const CheckConfig& cfg);

// ---- Empirical oracles ---------------------------------------------------

enum class Notion { CI, ECI, PreECI, FTA, PreFTA };
const char* to_string(Notion n);

struct OracleReport {
  bool falsified = false;
  std::string summary;
  std::optional<Vec> witness_state;
  std::optional<HybridTime> witness_time;
  int arcs_checked = 0;
};

// Simulation-based falsification of the notion itself, independent of any
// certificate: CI keeps arcs in target; ECI requires a settled suffix; FTA
// requires finite settling time on complete arcs.
OracleReport empirical_notion_oracle(const HybridSystem& H, const SetSpec& O,
                                     const SetSpec& target, Notion notion,
                                     const CheckConfig& cfg,
                                     BranchPolicy policy = BranchPolicy::Branch);

}  // namespace huntil
