#pragma once

#include <map>

#include "huntil/certificates.hpp"
#include "huntil/monitor.hpp"

namespace huntil {

struct FtaBundle {
  ScalarFn V, W;
  double c1 = 0, c2 = 0, c = 0, r = kInf;
  SetSpec N;
};

// A bundled system: data, propositions, certificates, and the regression
// expectations its tests pin down.
struct Scenario {
  std::string id;
  HybridSystem H;
  PropositionPair pq;
  SimBudget budget;  // scenario-appropriate defaults; callers may override
  ScalarFn weak_B;
  std::optional<CertV> v;
  std::optional<CertW> w;
  std::optional<FtaBundle> fta;
  std::map<std::string, SetSpec> sets;
  std::map<std::string, ScalarFn> fns;
  std::map<std::string, ScalarMap> maps;
  std::map<std::string, double> consts;
  std::map<std::string, std::string> expected;
  std::vector<std::string> notes;

  GridSpec default_grid(int res = 64) const {
    return GridSpec{H.bounding_box, res, 4};
  }
};

Scenario build_timer();
Scenario build_bouncing_ball(double gamma = 1.0, double lambda = 0.5,
                             double eps = 0.2);
Scenario build_thermostat(double z_o = 0.0, double z_delta = 2.0,
                          double z_min = 0.5, double z_max = 1.0);
Scenario build_planar_example();
Scenario build_counterexample_weak();
Scenario build_counterexample_strong(double eps = 0.5);
Scenario build_zeno_counterexample();

std::vector<std::string> scenario_ids();
Scenario scenario_by_id(const std::string& id);

}  // namespace huntil
