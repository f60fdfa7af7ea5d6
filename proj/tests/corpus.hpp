#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "slogcert/census.hpp"
#include "slogcert/oracle.hpp"
#include "slogcert/system.hpp"

namespace slogcert::testing {

struct CorpusEntry {
  std::string name;
  std::size_t n;
  std::vector<std::string> equations;
  // 0: take search_radius()
  double radius;
  bool has_phi;
};

inline void PrintTo(const CorpusEntry& e, std::ostream* os) { *os << e.name; }

// Desk corpus: dimensions 1-3, two systems with phi.
inline std::vector<CorpusEntry> census_corpus() {
  return {
      {"two_roots", 1, {"x1*x1 - 1"}, 2.0, false},
      {"cubic", 1, {"x1*x1*x1 - x1"}, 2.0, false},
      {"exp_shift", 1, {"exp(x1) - 2"}, 2.0, false},
      {"sine", 1, {"sin(x1)"}, 4.0, false},
      {"phi_level", 1, {"phi(x1) - 0.5"}, 0.0, true},
      {"circle_line", 2, {"x1*x1 + x2*x2 - 1", "x1 - x2"}, 2.0, false},
      {"origin", 2, {"x1", "x2"}, 2.0, false},
      {"circle_hyperbola", 2, {"x1*x1 + x2*x2 - 4", "x1*x2 - 1"}, 3.0, false},
      {"phi_plane", 2, {"phi(x1) + x2*x2 - 0.5", "x1 - 2*x2 - 1"}, 4.0, true},
      {"sphere_line", 3, {"x1*x1 + x2*x2 + x3*x3 - 1", "x1 - x2", "x2 - x3"}, 2.0, false},
      {"product", 3, {"x1*x1 - 1", "x2*x2 - 1", "x3"}, 2.0, false},
  };
}

inline SquareSystem build(const CorpusEntry& e) { return SquareSystem::parse(e.equations, e.n); }

inline double radius_of(const CorpusEntry& e, const SquareSystem& s) {
  return e.radius > 0.0 ? e.radius : search_radius(s).radius;
}

// Grid resolution for the zero-cell oracle by dimension.
inline std::size_t oracle_resolution(std::size_t n) {
  switch (n) {
    case 1:
      return 8192;
    case 2:
      return 1024;
    default:
      return 96;
  }
}

inline std::size_t oracle_count(const SquareSystem& s, double radius) {
  return oracle_zero_count(s, GridSpec::uniform(Box::cube(s.dimension(), radius), oracle_resolution(s.dimension())));
}

}  // namespace slogcert::testing
