#pragma once

#include <string>
#include <vector>

#include "huntil/core.hpp"

namespace huntil {

// Set-valued map presented as a finite family of single-valued selections.
// The simulator follows one selection per branch; condition checkers use
// sample(), which by default evaluates every selection.
struct Selection {
  std::string name;
  std::function<Vec(const Vec&)> f;
};

class SetValuedMap {
 public:
  SetValuedMap() = default;
  explicit SetValuedMap(std::vector<Selection> selections)
      : selections_(std::move(selections)) {}

  const std::vector<Selection>& selections() const { return selections_; }
  std::size_t size() const { return selections_.size(); }
  Vec eval(std::size_t sel, const Vec& x) const { return selections_[sel].f(x); }

  // Representative values at x (deduplicated selections).
  std::vector<Vec> sample(const Vec& x, double tol = 1e-12) const;

 private:
  std::vector<Selection> selections_;
};

SetValuedMap single_map(std::function<Vec(const Vec&)> f, std::string name = "f");

// Hybrid system (C, F, D, G) with a bounding box for grid-based checks.
struct HybridSystem {
  SpacePtr space;
  SetSpec C;
  SetValuedMap F;
  SetSpec D;
  SetValuedMap G;
  Box bounding_box;
  std::string name;

  int dim() const { return space->dim; }
  SetSpec flow_or_jump_set() const { return set_union(C, D); }
};

// Standing-assumption spot checks on samples: C syntactically closed, F
// nonempty on C, G nonempty on D. Returns human-readable failures.
std::vector<std::string> standing_assumption_issues(const HybridSystem& H,
                                                    const GridSpec& grid);

// The shell {x : 0 < B(x) <= delta} intersected with S; realizes an open
// neighborhood of the zero level set of B from outside.
SetSpec boundary_shell(const SetSpec& S, const ScalarFn& B, double delta_shell);

}  // namespace huntil
