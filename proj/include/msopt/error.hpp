#pragma once

#include <stdexcept>
#include <string>

namespace msopt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MSOPT_DEFINE_ERROR(Name)          \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

MSOPT_DEFINE_ERROR(InvalidProblem);
MSOPT_DEFINE_ERROR(MaxPivotsExceeded);
MSOPT_DEFINE_ERROR(NumericalBreakdown);
MSOPT_DEFINE_ERROR(ShapeMismatch);
MSOPT_DEFINE_ERROR(DimensionMismatch);
MSOPT_DEFINE_ERROR(SchemaVersionMismatch);
MSOPT_DEFINE_ERROR(SubproblemUnbounded);
MSOPT_DEFINE_ERROR(MasterInfeasible);
MSOPT_DEFINE_ERROR(InfeasibleInstance);
MSOPT_DEFINE_ERROR(UnboundedInstance);
MSOPT_DEFINE_ERROR(NonConformableSubperiods);

#undef MSOPT_DEFINE_ERROR

// Carries the offending field (and line, when the parser knows it).
class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + field + ": " + what
                       : field + ": " + what),
        field_(std::move(field)),
        line_(line) {}

  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

}  // namespace msopt
