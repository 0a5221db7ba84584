#include "huntil/report.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

namespace huntil {

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Json to_json(const HybridTime& tj) {
  return Json{{"t", tj.t}, {"j", tj.j}};
}

Json to_json(const SubReport& sub) {
  Json j;
  j["id"] = sub.id;
  j["verdict"] = sub.verdict;
  j["residual_max"] = sub.residual_max;
  j["points_checked"] = sub.points_checked;
  Json ws = Json::array();
  for (const auto& w : sub.witnesses) {
    Json jw;
    jw["x"] = to_json(w.x);
    if (!w.eta.empty()) jw["eta"] = to_json(w.eta);
    jw["condition"] = w.condition;
    jw["residual"] = w.residual;
    ws.push_back(jw);
  }
  j["witnesses"] = ws;
  j["notes"] = sub.notes;
  return j;
}

Json to_json(const CheckReport& rep) {
  Json j;
  j["schema"] = "huntil-report/1";
  j["id"] = rep.id;
  j["verdict"] = rep.verdict;
  Json items = Json::array();
  for (const auto& it : rep.items) items.push_back(to_json(it));
  j["items"] = items;
  j["notes"] = rep.notes;
  return j;
}

Json to_json(const Verdict& v) {
  Json j;
  j["value"] = to_string(v.value);
  if (v.witness_time) j["witness_time"] = to_json(*v.witness_time);
  if (v.witness_state) j["witness_state"] = to_json(*v.witness_state);
  j["reason"] = v.reason;
  return j;
}

Json to_json(const AggregateVerdict& v) {
  Json j;
  j["schema"] = "huntil-report/1";
  j["value"] = to_string(v.value);
  if (v.witness_time) j["witness_time"] = to_json(*v.witness_time);
  if (v.witness_state) j["witness_state"] = to_json(*v.witness_state);
  j["arcs_checked"] = v.arcs_checked;
  j["caveats"] = v.caveats;
  Json rows = Json::array();
  for (const auto& r : v.per_init) {
    Json row;
    row["x0"] = to_json(r.x0);
    row["value"] = to_string(r.value);
    row["reason"] = r.reason;
    rows.push_back(row);
  }
  j["per_init"] = rows;
  return j;
}

Json to_json(const UntilCertReport& rep) {
  Json j = to_json(rep.report);
  j["certification"] = rep.certification;
  return j;
}

Json to_json(const OracleReport& rep) {
  Json j;
  j["schema"] = "huntil-report/1";
  j["falsified"] = rep.falsified;
  j["summary"] = rep.summary;
  if (rep.witness_state) j["witness_state"] = to_json(*rep.witness_state);
  if (rep.witness_time) j["witness_time"] = to_json(*rep.witness_time);
  j["arcs_checked"] = rep.arcs_checked;
  return j;
}

Json arc_summary_json(const HybridArc& arc) {
  Json j;
  j["segments"] = arc.segments.size();
  j["jumps"] = arc.jumps.size();
  j["sup_t"] = arc.sup_t();
  j["sup_j"] = arc.sup_j();
  j["final_state"] = to_json(arc.final_state());
  const auto& f = arc.flags;
  Json flags;
  flags["stop_reason"] = f.stop_reason;
  flags["budget_truncated"] = f.budget_truncated;
  flags["maximal_heuristic"] = f.maximal_heuristic;
  flags["complete_heuristic"] = f.complete_heuristic;
  flags["eventually_continuous"] = f.eventually_continuous;
  flags["eventually_discrete"] = f.eventually_discrete;
  flags["genuinely_zeno"] = f.genuinely_zeno;
  flags["finite_escape"] = f.finite_escape;
  flags["unbounded_both"] = f.unbounded_both;
  if (std::isfinite(f.zeno_limit_t)) flags["zeno_limit_t"] = f.zeno_limit_t;
  j["flags"] = flags;
  return j;
}

std::string report_body(const Json& j) { return j.dump(2) + "\n"; }

void write_report_file(const std::string& path, const Json& body) {
  std::ofstream f(path);
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[64];
  std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&tt));
  f << "# huntil report " << buf << "\n" << report_body(body);
}

std::string human_summary(const CheckReport& rep) {
  std::ostringstream os;
  os << rep.id << ": " << rep.verdict << "\n";
  for (const auto& it : rep.items) {
    os << "  [" << it.verdict << "] " << it.id;
    if (!it.witnesses.empty()) {
      os << "  (witness x=";
      const auto& w = it.witnesses.front();
      os << "[";
      for (std::size_t i = 0; i < w.x.size(); ++i)
        os << (i ? "," : "") << w.x[i];
      os << "], residual " << w.residual << ")";
    }
    os << "\n";
  }
  for (const auto& n : rep.notes) os << "  note: " << n << "\n";
  return os.str();
}

}  // namespace huntil
