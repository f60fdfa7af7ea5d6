#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slogcert/abel_checks.hpp"
#include "slogcert/census.hpp"
#include "slogcert/deformation.hpp"
#include "slogcert/formula.hpp"
#include "slogcert/morse.hpp"
#include "slogcert/system.hpp"

namespace slogcert::tools {

using nlohmann::json;

inline constexpr int kReportVersion = 1;

/// Malformed input file (bad JSON, missing field, wrong shape).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path);

/// {"vars": [...], "equations": [...], "params": {"l", "eps", "delta"}, "radius"?}
struct SystemFile {
  std::vector<std::string> vars;
  std::vector<std::string> equations;
  SystemParams params;
  std::optional<double> radius;
};

SystemFile parse_system_file(const json& j);
/// Throws ParseError or SystemError.
SquareSystem build_system(const SystemFile& f, std::shared_ptr<const AbelFunction> abel);

/// {"points": [{"t", "tilt"?, "target"?, "params"?}, ...]}; omitted fields
/// default to identity, zero and the system's params.
DeformationPath parse_path_file(const json& j, const SquareSystem& system);

/// {"vars": [...], "formula": "..."} or {"vars": [...], "dnf": [[{"term", "rel"}, ...], ...]},
/// plus optional "affine" rows, "radius" and "schedule" [[eps, delta], ...].
struct FormulaFile {
  std::vector<std::string> vars;
  QFFormula formula;
  AffineSubspace affine;
  std::optional<double> radius;
  MilnorSchedule schedule;
};

FormulaFile parse_formula_file(const json& j);

json to_json(const Box& b);
json to_json(const CensusReport& r);
json to_json(const SearchRadius& r);
json to_json(const TrackReport& r);
json to_json(const ComponentReport& r);
json to_json(const GammaReport& r);
json to_json(const CheckResult& r);
json to_json(const MilnorSchedule& s);

/// Report skeleton: {"format", "version", "command"}.
json report_header(const std::string& command);

}  // namespace slogcert::tools
