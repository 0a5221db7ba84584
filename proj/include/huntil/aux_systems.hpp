#pragma once

#include "huntil/sim.hpp"

namespace huntil {

enum class AuxKind { Hw, Hs, Hr };

struct AuxSystem {
  AuxKind kind;
  HybridSystem derived;
};

// Flow on C \ Q, jump on D union Q; identity jumps on all of Q, the original
// map only on D \ Q.
HybridSystem build_Hw(const HybridSystem& H, const SetSpec& Q);

// Restriction of the system above to P union Q: flow on (C \ Q) intersect P,
// jump on (D intersect P) union Q.
HybridSystem build_Hs(const HybridSystem& H, const SetSpec& P, const SetSpec& Q);

// Closed set of admissible inter-jump flow lengths.
struct FlowLengthSet {
  std::vector<std::pair<double, double>> intervals;  // closed, within [0, inf)
  double sup() const;
  bool contains(double t, double tau = Tol::set) const;
};

// Scalar comparison system with a flow-length timer: state (y, tau),
// flow (f_c(y), 1) while tau <= tau_M, jump (f_d(y), 0) when tau lies in I.
HybridSystem build_Hr(const std::function<double(double)>& f_c,
                      const std::function<double(double)>& f_d,
                      const FlowLengthSet& I, double y_escape = 1e6);

struct CorrespondenceReport {
  bool match = false;
  double max_deviation = 0;
  double compared_until = 0;  // t+j horizon of the comparison (T_Q or arc end)
  std::string note;
};

// Arcs of H and of the auxiliary system from x0 coincide up to the first time
// the auxiliary target set Q is reached.
CorrespondenceReport correspondence_test(const HybridSystem& H,
                                         const HybridSystem& aux,
                                         const SetSpec& Q, const Vec& x0,
                                         const SimBudget& budget,
                                         double tol = 1e-6);

}  // namespace huntil
