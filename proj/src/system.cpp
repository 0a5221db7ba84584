#include "huntil/system.hpp"

namespace huntil {

std::vector<Vec> SetValuedMap::sample(const Vec& x, double tol) const {
  std::vector<Vec> out;
  for (const auto& s : selections_) {
    Vec v = s.f(x);
    bool dup = false;
    for (const auto& u : out)
      if (dist2(u, v) <= tol * (1.0 + norm(v))) dup = true;
    if (!dup) out.push_back(std::move(v));
  }
  return out;
}

SetValuedMap single_map(std::function<Vec(const Vec&)> f, std::string name) {
  return SetValuedMap({Selection{std::move(name), std::move(f)}});
}

std::vector<std::string> standing_assumption_issues(const HybridSystem& H,
                                                    const GridSpec& grid) {
  std::vector<std::string> issues;
  if (!H.C.syntactically_closed())
    issues.push_back("flow set is not syntactically closed");
  if (H.F.size() == 0) issues.push_back("flow map has no selections");
  if (H.G.size() == 0) issues.push_back("jump map has no selections");
  GridSpec g = grid;
  g.res = std::min(g.res, 16);
  for (const auto& x : sample_set(H.C, g))
    if (H.F.sample(x).empty()) {
      issues.push_back("flow map empty at a sampled point of C");
      break;
    }
  for (const auto& x : sample_set(H.D, g))
    if (H.G.sample(x).empty()) {
      issues.push_back("jump map empty at a sampled point of D");
      break;
    }
  return issues;
}

SetSpec boundary_shell(const SetSpec& S, const ScalarFn& B, double delta_shell) {
  if (!(delta_shell > 0))
    throw std::invalid_argument("boundary_shell: delta_shell must be positive");
  Region r;
  r.cons.push_back(gt(B));                 // B > 0
  r.cons.push_back(le(B - delta_shell));   // B <= delta
  SetSpec shell(S.space(), {r}, "shell");
  return set_intersect(shell, S);
}

}  // namespace huntil
