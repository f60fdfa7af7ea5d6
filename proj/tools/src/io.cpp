#include "slogcert_tools/io.hpp"

#include <cmath>
#include <fstream>

#include "slogcert/parser.hpp"

namespace slogcert::tools {

namespace {

template <class T>
T field(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) throw InputError(std::string(where) + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string(where) + ": field '" + key + "' has the wrong type");
  }
}

template <class T>
std::optional<T> optional_field(const json& j, const char* key, const char* where) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return field<T>(j, key, where);
}

SystemParams parse_params(const json& j, const SystemParams& fallback) {
  SystemParams p = fallback;
  if (!j.is_object()) throw InputError("params: expected an object");
  if (auto l = optional_field<std::vector<double>>(j, "l", "params")) p.l = *l;
  if (auto e = optional_field<std::vector<double>>(j, "eps", "params")) p.eps = *e;
  if (auto d = optional_field<double>(j, "delta", "params")) p.delta = *d;
  return p;
}

Eigen::MatrixXd parse_matrix(const json& j, std::size_t n) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.size() != n) throw InputError("tilt: expected " + std::to_string(n) + " rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw InputError("tilt: expected " + std::to_string(n) + " columns");
    for (std::size_t k = 0; k < n; ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  return m;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Rel parse_rel(const std::string& s) {
  for (Rel r : {Rel::Eq, Rel::Gt, Rel::Lt, Rel::Ge, Rel::Le, Rel::Ne}) {
    if (s == to_string(r)) return r;
  }
  throw InputError("dnf: unknown relation '" + s + "'");
}

json boxes(const std::vector<Box>& bs) {
  json a = json::array();
  for (const auto& b : bs) a.push_back(to_json(b));
  return a;
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

SystemFile parse_system_file(const json& j) {
  if (!j.is_object()) throw InputError("system: expected an object");
  SystemFile f;
  f.vars = field<std::vector<std::string>>(j, "vars", "system");
  f.equations = field<std::vector<std::string>>(j, "equations", "system");
  if (j.contains("params")) f.params = parse_params(j.at("params"), {});
  f.radius = optional_field<double>(j, "radius", "system");
  if (f.radius && !(*f.radius > 0.0)) throw InputError("system: radius must be positive");
  return f;
}

SquareSystem build_system(const SystemFile& f, std::shared_ptr<const AbelFunction> abel) {
  const std::size_t n = f.vars.size();
  // unknowns first, then the parameter slots under their fixed names
  std::vector<std::string> names = SquareSystem::names(n);
  std::copy(f.vars.begin(), f.vars.end(), names.begin());
  std::vector<Term> eqs;
  eqs.reserve(f.equations.size());
  for (const auto& e : f.equations) eqs.push_back(parse_term(e, names));
  return SquareSystem::build(std::move(eqs), n, f.params, std::move(abel));
}

DeformationPath parse_path_file(const json& j, const SquareSystem& system) {
  const std::size_t n = system.dimension();
  if (!j.is_object() || !j.contains("points") || !j.at("points").is_array()) {
    throw InputError("path: expected an object with a 'points' array");
  }
  std::vector<PathPoint> pts;
  for (const auto& p : j.at("points")) {
    PathPoint q;
    q.t = field<double>(p, "t", "path point");
    q.tilt = p.contains("tilt") ? parse_matrix(p.at("tilt"), n)
                                : Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    q.target = optional_field<std::vector<double>>(p, "target", "path point").value_or(std::vector<double>(n, 0.0));
    q.params = p.contains("params") ? parse_params(p.at("params"), system.params()) : system.params();
    pts.push_back(std::move(q));
  }
  return DeformationPath(std::move(pts));
}

FormulaFile parse_formula_file(const json& j) {
  if (!j.is_object()) throw InputError("formula: expected an object");
  FormulaFile f;
  f.vars = field<std::vector<std::string>>(j, "vars", "formula");
  if (f.vars.empty()) throw InputError("formula: need at least one variable");
  if (j.contains("formula")) {
    f.formula = normalize(parse_formula(field<std::string>(j, "formula", "formula"), f.vars));
  } else if (j.contains("dnf")) {
    std::vector<Formula> ors;
    for (const auto& conj : j.at("dnf")) {
      std::vector<Formula> ands;
      for (const auto& a : conj) {
        const Term t = parse_term(field<std::string>(a, "term", "dnf atom"), f.vars);
        ands.push_back(Formula::atom(t, parse_rel(field<std::string>(a, "rel", "dnf atom"))));
      }
      ors.push_back(Formula::conjunction(std::move(ands)));
    }
    f.formula = normalize(Formula::disjunction(std::move(ors)));
  } else {
    throw InputError("formula: need 'formula' or 'dnf'");
  }
  f.affine.n = f.vars.size();
  if (j.contains("affine")) {
    f.affine.rows = field<std::vector<std::vector<double>>>(j, "affine", "formula");
    try {
      f.affine.validate();
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("formula: ") + e.what());
    }
  }
  f.radius = optional_field<double>(j, "radius", "formula");
  if (f.radius && !(*f.radius > 0.0)) throw InputError("formula: radius must be positive");
  if (j.contains("schedule")) {
    for (const auto& s : field<std::vector<std::vector<double>>>(j, "schedule", "formula")) {
      if (s.size() != 2) throw InputError("formula: schedule entries are [eps, delta]");
      f.schedule.stages.emplace_back(s[0], s[1]);
    }
    try {
      f.schedule.validate();
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("formula: ") + e.what());
    }
  }
  return f;
}

json to_json(const Box& b) {
  json a = json::array();
  for (const auto& c : b) a.push_back({c.lo(), c.hi()});
  return a;
}

json to_json(const CensusReport& r) {
  return {{"certified_count", r.certified_count},
          {"exact", r.exact()},
          {"search_radius", r.search_radius},
          {"depth_used", r.depth_used},
          {"boxes_examined", r.boxes_examined},
          {"zero_boxes", boxes(r.zero_boxes)},
          {"unknown_boxes", boxes(r.unknown_boxes)}};
}

json to_json(const SearchRadius& r) {
  return {{"radius", r.radius}, {"heuristic", r.heuristic}, {"s", r.s}, {"d_iii", r.d_iii}, {"d_iv", r.d_iv}};
}

json to_json(const TrackReport& r) {
  json steps = json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"t", s.t},
                     {"certified_count", s.census.certified_count},
                     {"exact", s.census.exact()},
                     {"unknown_boxes", boxes(s.census.unknown_boxes)}});
  }
  json j = {{"constant", r.constant}, {"steps", std::move(steps)}};
  j["first_irregular"] = r.first_irregular ? json(*r.first_irregular) : json(nullptr);
  j["first_change"] = r.first_change ? json(*r.first_change) : json(nullptr);
  return j;
}

json to_json(const MilnorSchedule& s) {
  json a = json::array();
  for (auto [e, d] : s.stages) a.push_back({e, d});
  return a;
}

json to_json(const ComponentReport& r) {
  json stages = json::array();
  for (const auto& s : r.stages) {
    stages.push_back({{"eps", s.eps},
                      {"delta", s.delta},
                      {"critical_count", s.critical_count},
                      {"rotations", s.rotations},
                      {"delta_resamples", s.delta_resamples},
                      {"rotation", matrix_json(s.rotation)}});
  }
  json j = {{"critical_count", r.critical_count},
            {"component_bound", r.component_bound},
            {"dimension", r.dimension},
            {"schedule", to_json(r.schedule)},
            {"stages", std::move(stages)},
            {"nested", r.nested},
            {"assumption", ComponentReport::kAssumption}};
  j["oracle_components"] = r.oracle_components ? json(*r.oracle_components) : json(nullptr);
  return j;
}

json to_json(const GammaReport& r) {
  json trials = json::array();
  for (const auto& t : r.trials) {
    trials.push_back({{"rows", t.rows}, {"oracle", t.oracle}, {"bound", t.bound ? json(*t.bound) : json(nullptr)}});
  }
  json j = {{"estimate", r.estimate},
            {"max_component_bound", r.max_component_bound},
            {"uncertified_trials", r.uncertified_trials},
            {"bound_respected", r.bound_respected},
            {"trials", std::move(trials)}};
  if (r.estimate == 0) j["note"] = "empty set: no pieces needed; conventions requiring N >= 1 differ";
  return j;
}

json to_json(const CheckResult& r) {
  return {{"name", r.name},
          {"passed", r.passed},
          {"measured", std::isfinite(r.measured) ? json(r.measured) : json(nullptr)},
          {"threshold", r.threshold},
          {"detail", r.detail}};
}

json report_header(const std::string& command) {
  return {{"format", "slogcert-report"}, {"version", kReportVersion}, {"command", command}};
}

}  // namespace slogcert::tools
