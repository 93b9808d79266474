#pragma once

#include <stdexcept>
#include <string>

namespace noregret {

/// Error categories. The CLI maps each category onto a process exit code.
enum class ErrorKind {
  Config,          // invalid configuration or arguments
  Schema,          // attribute/id lookups against a population schema
  Parameter,       // theta point of the wrong dimension or out of domain
  Argument,        // precondition on a scalar argument (k, N, epsilon, ...)
  Spec,            // fairness spec inconsistent with the data
  Ingestion,       // CSV parsing
  Infeasible,      // empty feasible set
  SingularHessian,
  Complexity,      // enumeration cap exceeded
  Consistency,     // completion inconsistent with interval records
  Domain,          // projection failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define NOREGRET_DEFINE_ERROR(Name, Kind)                                   \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

NOREGRET_DEFINE_ERROR(ConfigError, Config)
NOREGRET_DEFINE_ERROR(SchemaError, Schema)
NOREGRET_DEFINE_ERROR(ParameterError, Parameter)
NOREGRET_DEFINE_ERROR(ArgumentError, Argument)
NOREGRET_DEFINE_ERROR(SpecError, Spec)
NOREGRET_DEFINE_ERROR(IngestionError, Ingestion)
NOREGRET_DEFINE_ERROR(InfeasibleError, Infeasible)
NOREGRET_DEFINE_ERROR(SingularHessianError, SingularHessian)
NOREGRET_DEFINE_ERROR(ComplexityError, Complexity)
NOREGRET_DEFINE_ERROR(ConsistencyError, Consistency)
NOREGRET_DEFINE_ERROR(DomainError, Domain)

#undef NOREGRET_DEFINE_ERROR

/// Process exit code for an error category: 2 config, 3 ingestion,
/// 4 infeasible, 5 singular Hessian, 6 complexity cap.
int exit_code(ErrorKind kind) noexcept;

}  // namespace noregret
