#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "dcopt/expr.hpp"
#include "dcopt/penalty.hpp"
#include "dcopt/types.hpp"

namespace dcopt {

/// Parse failure with the 1-based position of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line(line),
        column(column) {}

  int line;
  int column;
};

/// A parsed problem document: the problem itself plus the optional solver
/// knobs a file may carry.
struct ProblemDoc {
  Problemd problem;
  std::optional<VectorX<double>> point;
  std::optional<double> lambda;
  std::optional<double> alpha_star;
  std::optional<double> mu;
  std::optional<int> max_iters;
  std::optional<double> tol_opt;
};

/// Grammar (see README for the EBNF): one `dim` and one `objective` are
/// required; `ineq`, `eq` repeat; `ipcq`, `ipcq_note`, `point`, `lambda`,
/// `alpha_star`, `mu`, `max_iters`, `tol_opt` are optional. Expressions are
/// const/affine/abs/neg/scale/sum/max/min calls; `#` comments run to end of
/// line. Throws ParseError with line/column on syntax errors and
/// invalid_argument naming the node path on dimension mismatches.
ProblemDoc parse_problem(const std::string& text);

ProblemDoc parse_problem_file(const std::string& path);

/// Canonical text form; floats carry enough digits that
/// parse_problem(serialize_problem(doc)) reproduces doc exactly.
std::string serialize_problem(const ProblemDoc& doc);

/// Structural equality of expression trees (same shape, bitwise-equal
/// scalars).
bool expr_equal(const Exprd& a, const Exprd& b);

/// Shortest-round-trip-safe float formatting used across reports and files.
std::string format_real(double value);

} // namespace dcopt
