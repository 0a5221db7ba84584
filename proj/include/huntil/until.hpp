#pragma once

#include "huntil/certificates.hpp"

namespace huntil {

// Solution-free certification of weak/strong until formulas by composing the
// barrier, comparison, and Lyapunov-pair checks over the derived systems.

struct CertifyOptions {
  CheckConfig cfg;
  // Discharge the weak-until item by running the monitor instead of the
  // barrier check; the result is then only empirically supported.
  bool monitor_fallback_for_weak = false;
};

struct UntilCertReport {
  CheckReport report;
  std::string certification;  // certified | failed | inconclusive | empirically-supported
  bool certified() const { return certification == "certified"; }
};

UntilCertReport certify_weak_until(const HybridSystem& H, const PropositionPair& pq,
                                   const ScalarFn& B, const CertifyOptions& opt);

UntilCertReport certify_strong_until_ECI(const HybridSystem& H,
                                         const PropositionPair& pq, const ScalarFn& B,
                                         const CertV& cv, const CertW& cw,
                                         PreEciVariant variant,
                                         const CertifyOptions& opt);

UntilCertReport certify_strong_until_ECI_flows(const HybridSystem& H,
                                               const PropositionPair& pq,
                                               const ScalarFn& B, const CertV& cv,
                                               const CertifyOptions& opt);

UntilCertReport certify_strong_until_ECI_jumps(const HybridSystem& H,
                                               const PropositionPair& pq,
                                               const ScalarFn& B, const CertW& cw,
                                               const CertifyOptions& opt);

UntilCertReport certify_strong_until_FTA(const HybridSystem& H,
                                         const PropositionPair& pq, const ScalarFn& B,
                                         const ScalarFn& V, const ScalarFn& W,
                                         double c1, double c2, double c,
                                         const SetSpec& N, double r,
                                         const CertifyOptions& opt);

enum class Quadrant {
  CertifiedSatisfied,
  CertifiedViolated,  // a checker bug: the theorems are sufficient conditions
  UncertifiedSatisfied,
  UncertifiedViolated,
  Undecided,
};

struct CrossReference {
  Quadrant quadrant;
  std::string summary;
};

CrossReference cross_reference(const AggregateVerdict& monitor,
                               const UntilCertReport& cert);

}  // namespace huntil
