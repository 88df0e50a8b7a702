#include <ostream>

#include "lscsp/csv.hpp"
#include "lscsp/milp.hpp"

namespace lscsp {

// Layout:
//   minimize
//     obj: <coef> <name> + ... + <offset>
//   subject to
//     <row>: <coef> <name> ... <= | = | >= <rhs>
//   bounds
//     <lower> <= <name> <= <upper>
//   integer
//     <name> ...
//   end
void write_lp_text(std::ostream &out, const MilpProblem &problem) {
  auto term = [&](double coef, const std::string &name, bool first) {
    if (!first) out << (coef < 0.0 ? " - " : " + ");
    else out << (coef < 0.0 ? " -" : " ");
    out << format_double(std::abs(coef)) << ' ' << name;
  };
  out << "minimize\n  obj:";
  bool first = true;
  for (int j = 0; j < problem.num_variables(); ++j) {
    if (problem.objective[j] == 0.0) continue;
    term(problem.objective[j], problem.variables[j].name, first);
    first = false;
  }
  if (problem.offset != 0.0 || first) out << (first ? " " : " + ") << format_double(problem.offset);
  out << "\nsubject to\n";
  for (const Row &row : problem.rows) {
    out << "  " << row.name << ':';
    bool head = true;
    for (auto [j, a] : row.terms) {
      term(a, problem.variables[j].name, head);
      head = false;
    }
    const char *sense = row.sense == Sense::LessEqual ? "<=" : row.sense == Sense::Equal ? "=" : ">=";
    out << ' ' << sense << ' ' << format_double(row.rhs) << '\n';
  }
  out << "bounds\n";
  for (const Variable &v : problem.variables)
    out << "  " << format_double(v.lower) << " <= " << v.name << " <= " << format_double(v.upper) << '\n';
  out << "integer\n";
  for (const Variable &v : problem.variables)
    if (v.integer) out << "  " << v.name << '\n';
  out << "end\n";
}

} // namespace lscsp
