#include "huntil/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "huntil/expr.hpp"

namespace huntil {

namespace {

using nlohmann::json;

[[noreturn]] void missing(const std::string& path) {
  throw ConfigError("missing or malformed config field: " + path);
}

// "name in v1,v2" restricts a discrete coordinate; anything else is an
// expression constraint.
bool parse_disc(const std::string& text, const ExprEnv& env, Region& region) {
  auto at = text.find(" in ");
  if (at == std::string::npos) return false;
  std::string name = text.substr(0, at);
  name.erase(std::remove_if(name.begin(), name.end(), ::isspace), name.end());
  auto it = env.coords.find(name);
  if (it == env.coords.end()) missing("constraint '" + text + "': unknown coord");
  DiscConstraint dc;
  dc.coord = it->second;
  std::stringstream vals(text.substr(at + 4));
  std::string tok;
  while (std::getline(vals, tok, ',')) dc.values.push_back(std::stod(tok));
  if (dc.values.empty()) missing("constraint '" + text + "': empty value list");
  region.disc.push_back(std::move(dc));
  return true;
}

SetSpec parse_set(const json& regions, const SpacePtr& space, const ExprEnv& env,
                  const std::string& name) {
  if (!regions.is_array()) missing("sets." + name);
  std::vector<Region> rs;
  for (const auto& jr : regions) {
    Region r;
    for (const auto& jc : jr) {
      std::string text = jc.get<std::string>();
      if (!parse_disc(text, env, r)) r.cons.push_back(parse_constraint(text, env));
    }
    rs.push_back(std::move(r));
  }
  return SetSpec(space, std::move(rs), name);
}

SetValuedMap parse_field(const json& exprs, const ExprEnv& env, int dim,
                         const std::string& path) {
  // Either one selection (array of per-coordinate expressions) or several
  // (array of such arrays).
  if (!exprs.is_array() || exprs.empty()) missing(path);
  json sel_list = exprs.front().is_array() ? exprs : json::array({exprs});
  std::vector<Selection> sels;
  int idx = 0;
  for (const auto& sel : sel_list) {
    if (static_cast<int>(sel.size()) != dim) missing(path + "[" + std::to_string(idx) + "]");
    std::vector<ScalarFn> comps;
    for (const auto& e : sel)
      comps.push_back(parse_expression(e.get<std::string>(), env));
    sels.push_back(Selection{
        path + std::to_string(idx),
        [comps](const Vec& x) {
          Vec out(comps.size());
          for (std::size_t i = 0; i < comps.size(); ++i) out[i] = comps[i](x);
          return out;
        }});
    ++idx;
  }
  return SetValuedMap(std::move(sels));
}

ScalarMap parse_scalar_map(const std::string& text, const std::string& var,
                           const ExprEnv& base) {
  ExprEnv env = base;
  env.dim = 1;
  env.coords.clear();
  env.coords[var] = 0;
  ScalarFn f = parse_expression(text, env);
  return [f](double y) { return f(Vec{y}); };
}

}  // namespace

Scenario load_config(const json& doc) {
  Scenario sc;
  sc.id = doc.value("name", "config");

  if (!doc.contains("state") || !doc["state"].is_array()) missing("state");
  ExprEnv env;
  env.dim = static_cast<int>(doc["state"].size());
  int idx = 0;
  for (const auto& n : doc["state"]) env.coords[n.get<std::string>()] = idx++;
  std::vector<Space::Disc> disc;
  if (doc.contains("discrete"))
    for (auto it = doc["discrete"].begin(); it != doc["discrete"].end(); ++it) {
      auto cit = env.coords.find(it.key());
      if (cit == env.coords.end()) missing("discrete." + it.key());
      Space::Disc d{cit->second, it.value().get<std::vector<double>>()};
      disc.push_back(std::move(d));
    }
  auto space = make_space(env.dim, std::move(disc));
  if (doc.contains("params"))
    for (auto it = doc["params"].begin(); it != doc["params"].end(); ++it)
      env.params[it.key()] = it.value().get<double>();

  if (!doc.contains("box")) missing("box");
  Box box{doc["box"].value("lo", std::vector<double>{}),
          doc["box"].value("hi", std::vector<double>{})};
  if (box.dim() != env.dim || static_cast<int>(box.hi.size()) != env.dim)
    missing("box.lo/hi");

  sc.H.space = space;
  sc.H.name = sc.id;
  sc.H.bounding_box = box;
  if (!doc.contains("sets")) missing("sets");
  const auto& sets = doc["sets"];
  if (!sets.contains("C")) missing("sets.C");
  if (!sets.contains("D")) missing("sets.D");
  sc.H.C = parse_set(sets["C"], space, env, "C");
  sc.H.D = parse_set(sets["D"], space, env, "D");
  if (!doc.contains("flow")) missing("flow");
  if (!doc.contains("jump")) missing("jump");
  sc.H.F = parse_field(doc["flow"], env, env.dim, "flow");
  sc.H.G = parse_field(doc["jump"], env, env.dim, "jump");

  if (sets.contains("P")) sc.pq.P = parse_set(sets["P"], space, env, "P");
  else sc.pq.P = SetSpec::empty(space, "P");
  if (sets.contains("Q")) sc.pq.Q = parse_set(sets["Q"], space, env, "Q");
  else sc.pq.Q = SetSpec::empty(space, "Q");
  for (auto it = sets.begin(); it != sets.end(); ++it) {
    std::string key = it.key();
    if (key == "C" || key == "D" || key == "P" || key == "Q") continue;
    sc.sets[key] = parse_set(it.value(), space, env, key);
  }

  if (doc.contains("certificates")) {
    const auto& certs = doc["certificates"];
    if (certs.contains("weak_B"))
      sc.weak_B = parse_expression(certs["weak_B"].get<std::string>(), env);
    if (certs.contains("v")) {
      const auto& jv = certs["v"];
      if (!jv.contains("fn") || !jv.contains("f_c") || !jv.contains("r1"))
        missing("certificates.v.{fn,f_c,r1}");
      CertV cv;
      cv.v = parse_expression(jv["fn"].get<std::string>(), env);
      cv.f_c = parse_scalar_map(jv["f_c"].get<std::string>(), "y", env);
      cv.r1 = jv["r1"].get<double>();
      sc.v = cv;
    }
    if (certs.contains("w")) {
      const auto& jw = certs["w"];
      if (!jw.contains("fn") || !jw.contains("f_d") || !jw.contains("r2"))
        missing("certificates.w.{fn,f_d,r2}");
      CertW cw;
      cw.w = parse_expression(jw["fn"].get<std::string>(), env);
      cw.f_d = parse_scalar_map(jw["f_d"].get<std::string>(), "z", env);
      cw.r2 = jw["r2"].get<double>();
      sc.w = cw;
    }
    if (certs.contains("fta")) {
      const auto& jf = certs["fta"];
      for (const char* k : {"V", "W", "c1", "c2", "c", "r", "N"})
        if (!jf.contains(k)) missing(std::string("certificates.fta.") + k);
      FtaBundle fta;
      fta.V = parse_expression(jf["V"].get<std::string>(), env);
      fta.W = parse_expression(jf["W"].get<std::string>(), env);
      fta.c1 = jf["c1"].get<double>();
      fta.c2 = jf["c2"].get<double>();
      fta.c = jf["c"].get<double>();
      fta.r = jf["r"].get<double>();
      fta.N = parse_set(jf["N"], space, env, "N");
      sc.fta = fta;
    }
  }
  return sc;
}

Scenario load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    f >> doc;
  } catch (const std::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  try {
    return load_config(doc);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config error in " + path + ": " + e.what());
  }
}

Scenario resolve_scenario(const std::string& id_or_path) {
  for (const auto& id : scenario_ids())
    if (id == id_or_path) return scenario_by_id(id);
  if (std::filesystem::exists(id_or_path)) return load_config_file(id_or_path);
  throw ConfigError("unknown scenario id or missing config file: " + id_or_path);
}

}  // namespace huntil
