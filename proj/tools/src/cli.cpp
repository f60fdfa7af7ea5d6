#include "slogcert_tools/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "slogcert/analysis.hpp"
#include "slogcert/evaluate.hpp"
#include "slogcert/parser.hpp"
#include "slogcert/reduce.hpp"
#include "slogcert_tools/io.hpp"

namespace slogcert::tools {

namespace {

struct Config {
  std::uint64_t seed = 0;
  std::optional<double> radius;
  int depth = 40;
  unsigned threads = 0;
  std::string abel_file;
  std::string out_file;

  int order = 3;
  double tol = 1e-8;
  std::string write_abel;

  std::string expr;
  std::vector<double> point;
  std::vector<std::string> vars;

  std::string system_file;
  std::string path_file;
  std::string formula_file;
  bool reduce = false;
  std::size_t steps = 100;
  std::size_t trials = 50;
  std::size_t resolution = 0;
  bool no_oracle = false;
};

class Failure : public std::runtime_error {
 public:
  Failure(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

std::shared_ptr<const AbelFunction> load_abel(const Config& c) {
  if (c.abel_file.empty()) return default_abel_ptr();
  std::ifstream in(c.abel_file);
  if (!in) throw InputError("cannot open '" + c.abel_file + "'");
  std::ostringstream s;
  s << in.rdbuf();
  try {
    return std::make_shared<const AbelFunction>(AbelFunction::deserialize(s.str()));
  } catch (const std::runtime_error& e) {
    throw InputError(c.abel_file + ": " + e.what());
  }
}

void add_common(CLI::App* sub, Config& c, bool abel, bool seed) {
  if (seed) sub->add_option("--seed", c.seed, "RNG seed")->required();
  sub->add_option("--radius", c.radius, "search radius")->check(CLI::PositiveNumber);
  sub->add_option("--depth", c.depth, "maximum subdivision depth")->check(CLI::Range(0, 200));
  sub->add_option("--threads", c.threads, "worker cap (0: hardware concurrency)");
  if (abel) sub->add_option("--abel", c.abel_file, "serialized phi to use instead of the default build");
  sub->add_option("--out", c.out_file, "write the report here instead of stdout");
}

// ---------------------------------------------------------------- commands

int cmd_slog_check(const Config& c, json& rep) {
  std::shared_ptr<const AbelFunction> phi;
  double tol = c.tol;
  if (!c.abel_file.empty()) {
    phi = load_abel(c);
  } else {
    try {
      phi = std::make_shared<const AbelFunction>(AbelFunction::build(c.order, c.tol));
    } catch (const AbelBuildError& e) {
      rep["passed"] = false;
      rep["error"] = e.what();
      rep["achieved_residual"] = e.achieved_residual();
      return kExitCheckFailed;
    }
  }
  if (!c.write_abel.empty()) {
    std::ofstream f(c.write_abel);
    if (!f) throw Failure(kExitCheckFailed, "cannot write '" + c.write_abel + "'");
    f << phi->serialize();
  }
  SlogCheckOptions opt;
  opt.tol = tol;
  const auto results = run_slog_checks(*phi, opt);
  rep["abel"] = {{"order", phi->order()},
                 {"seed_error", phi->seed_error()},
                 {"sup_dphi_fundamental", phi->sup_dphi_fundamental()},
                 {"coefficients", phi->coefficients()}};
  rep["tol"] = tol;
  json checks = json::array();
  for (const auto& r : results) checks.push_back(to_json(r));
  rep["checks"] = std::move(checks);
  rep["passed"] = all_passed(results);
  return all_passed(results) ? kExitOk : kExitCheckFailed;
}

int cmd_eval(const Config& c, json& rep) {
  const auto phi = load_abel(c);
  const std::vector<std::string> names = c.vars.empty() ? default_var_names(c.point.size()) : c.vars;
  if (names.size() != c.point.size()) throw InputError("eval: --vars and --point differ in length");
  const Term t = parse_term(c.expr, names);
  rep["expr"] = to_string(t, names);
  rep["point"] = c.point;
  rep["fcpx"] = fcpx(t);
  try {
    rep["growth_exponent"] = growth_exponent(t, *phi);
  } catch (const GrowthError&) {
    rep["growth_exponent"] = nullptr;
  }
  try {
    const auto [v, g] = value_and_gradient(t, c.point, *phi);
    rep["value"] = v;
    rep["gradient"] = g;
  } catch (const DomainError& e) {
    rep["error"] = e.what();
    return kExitCheckFailed;
  }
  return kExitOk;
}

// --radius, then the file, then the growth argument (phi systems) or the
// default radius
double choose_radius(const Config& c, const SystemFile& f, const SquareSystem& sys, json& rep) {
  if (c.radius) {
    rep["radius_source"] = "flag";
    return *c.radius;
  }
  if (f.radius) {
    rep["radius_source"] = "file";
    return *f.radius;
  }
  try {
    const SearchRadius r = search_radius(sys);
    rep["radius_source"] = r.heuristic ? "default" : "growth";
    rep["search_radius"] = to_json(r);
    return r.radius;
  } catch (const GrowthError& e) {
    throw Failure(kExitIncomplete, std::string("no search radius: ") + e.what() + "; pass --radius");
  }
}

int census_exit(const CensusReport& r, std::ostream& err) {
  if (r.exact()) return kExitOk;
  err << "incomplete: " << r.unknown_boxes.size() << " unknown box(es)\n";
  for (const auto& b : r.unknown_boxes) err << "  " << b << "\n";
  return kExitIncomplete;
}

int cmd_zeros(const Config& c, json& rep, std::ostream& err) {
  const SystemFile f = parse_system_file(read_json_file(c.system_file));
  const SquareSystem sys = build_system(f, load_abel(c));
  const double radius = choose_radius(c, f, sys, rep);
  const CensusReport r = count_nonsingular_zeros(sys, radius, c.depth);
  rep["dimension"] = sys.dimension();
  rep["census"] = to_json(r);
  int code = census_exit(r, err);
  if (c.reduce) {
    const ReducedSystem red = [&] {
      try {
        return reduce_phi_complexity(sys, radius);
      } catch (const ReduceError& e) {
        throw Failure(kExitIncomplete, e.what());
      }
    }();
    const CensusReport rr = count_nonsingular_zeros(red.system, radius, c.depth);
    rep["reduced"] = {{"replaced", red.replaced},
                      {"fidelity", red.fidelity},
                      {"census", to_json(rr)},
                      {"counts_agree", rr.certified_count == r.certified_count && rr.exact() && r.exact()}};
    code = std::max(code, census_exit(rr, err));
  }
  return code;
}

int cmd_track(const Config& c, json& rep, std::ostream& err) {
  const SystemFile f = parse_system_file(read_json_file(c.system_file));
  const SquareSystem sys = build_system(f, load_abel(c));
  const DeformationPath path = parse_path_file(read_json_file(c.path_file), sys);
  const double radius = choose_radius(c, f, sys, rep);
  const TrackReport r = track_path(sys, path, c.steps, radius, c.depth);
  rep["radius"] = radius;
  rep["track"] = to_json(r);
  if (r.first_irregular) {
    err << "incomplete: step " << *r.first_irregular << " (t = " << r.steps[*r.first_irregular].t
        << ") has unknown boxes\n";
    return kExitIncomplete;
  }
  return kExitOk;
}

int cmd_components(const Config& c, json& rep) {
  const FormulaFile f = parse_formula_file(read_json_file(c.formula_file));
  ComponentOptions opt;
  opt.radius = c.radius.value_or(f.radius.value_or(2.0));
  opt.schedule = f.schedule;
  opt.seed = c.seed;
  opt.max_depth = c.depth;
  opt.threads = c.threads;
  opt.oracle = !c.no_oracle;
  opt.oracle_resolution = c.resolution;
  rep["formula"] = to_string(f.formula, f.vars);
  rep["radius"] = opt.radius;
  rep["seed"] = c.seed;
  try {
    rep["report"] = to_json(component_bound(f.formula, f.vars.size(), f.affine, opt));
  } catch (const MorseError& e) {
    throw Failure(kExitIncomplete, e.what());
  }
  return kExitOk;
}

int cmd_gamma(const Config& c, json& rep) {
  const FormulaFile f = parse_formula_file(read_json_file(c.formula_file));
  GammaOptions opt;
  opt.trials = c.trials;
  opt.radius = c.radius.value_or(f.radius.value_or(2.0));
  opt.seed = c.seed;
  opt.max_depth = c.depth;
  opt.threads = c.threads;
  opt.oracle_resolution = c.resolution;
  const GammaReport r = gamma_estimate(f.formula, f.vars.size(), opt);
  rep["formula"] = to_string(f.formula, f.vars);
  rep["radius"] = opt.radius;
  rep["seed"] = c.seed;
  rep["report"] = to_json(r);
  return r.uncertified_trials == 0 ? kExitOk : kExitIncomplete;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Certified zero counting and component bounds for exp-log-phi terms", "slogcert"};
  app.require_subcommand(1);

  auto* slog = app.add_subcommand("slog-check", "build phi and run its property suite");
  slog->add_option("--order", c.order, "smoothness order of the seed")->check(CLI::Range(1, 3));
  slog->add_option("--tol", c.tol, "build tolerance; check thresholds scale with it")->check(CLI::PositiveNumber);
  slog->add_option("--write-abel", c.write_abel, "save the checked phi");
  add_common(slog, c, true, false);

  auto* ev = app.add_subcommand("eval", "value, gradient, fcpx and growth exponent of a term");
  ev->add_option("expr", c.expr, "term")->required();
  ev->add_option("--point", c.point, "comma-separated coordinates")->delimiter(',');
  ev->add_option("--vars", c.vars, "comma-separated variable names (default x1..xn)")->delimiter(',');
  add_common(ev, c, true, false);

  auto* zeros = app.add_subcommand("zeros", "certified count of non-singular zeros");
  zeros->add_option("system", c.system_file, "system file (JSON)")->required()->check(CLI::ExistingFile);
  zeros->add_flag("--reduce", c.reduce, "also count after replacing phi nodes by splines");
  add_common(zeros, c, true, false);

  auto* track = app.add_subcommand("track", "census along a deformation path");
  track->add_option("system", c.system_file, "system file (JSON)")->required()->check(CLI::ExistingFile);
  track->add_option("path", c.path_file, "path file (JSON)")->required()->check(CLI::ExistingFile);
  track->add_option("--steps", c.steps, "number of steps")->check(CLI::Range(2, 100000));
  add_common(track, c, true, false);

  auto* comp = app.add_subcommand("components", "Morse bound on connected components");
  comp->add_option("formula", c.formula_file, "formula file (JSON)")->required()->check(CLI::ExistingFile);
  comp->add_option("--resolution", c.resolution, "oracle cells per axis (0: by dimension)");
  comp->add_flag("--no-oracle", c.no_oracle, "skip the flood-fill comparison");
  add_common(comp, c, false, true);

  auto* gamma = app.add_subcommand("gamma", "sampled estimate of the affine-section component count");
  gamma->add_option("formula", c.formula_file, "formula file (JSON)")->required()->check(CLI::ExistingFile);
  gamma->add_option("--trials", c.trials, "sampled affine subspaces")->check(CLI::Range(1, 100000));
  gamma->add_option("--resolution", c.resolution, "oracle cells per axis (0: half the default)");
  add_common(gamma, c, false, true);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitParseError;
  }

  CLI::App* sub = app.get_subcommands().front();
  json rep = report_header(sub->get_name());
  int code = kExitOk;
  try {
    if (sub == slog) code = cmd_slog_check(c, rep);
    if (sub == ev) code = cmd_eval(c, rep);
    if (sub == zeros) code = cmd_zeros(c, rep, err);
    if (sub == track) code = cmd_track(c, rep, err);
    if (sub == comp) code = cmd_components(c, rep);
    if (sub == gamma) code = cmd_gamma(c, rep);
  } catch (const ParseError& e) {
    err << "parse error at column " << e.column() << ": " << e.what() << "\n";
    return kExitParseError;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const Failure& e) {
    err << e.what() << "\n";
    rep["error"] = e.what();
    code = e.code();
  } catch (const std::invalid_argument& e) {
    // SystemError, PathError and rejected option values
    err << "invalid input: " << e.what() << "\n";
    return kExitParseError;
  }
  rep["exit_code"] = code;

  const std::string text = rep.dump(2) + "\n";
  if (c.out_file.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out_file);
    if (!f) {
      err << "cannot write '" << c.out_file << "'\n";
      return kExitCheckFailed;
    }
    f << text;
  }
  return code;
}

}  // namespace slogcert::tools
