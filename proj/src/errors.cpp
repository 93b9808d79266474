#include "noregret/errors.hpp"

namespace noregret {

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Ingestion:
      return 3;
    case ErrorKind::Infeasible:
      return 4;
    case ErrorKind::SingularHessian:
      return 5;
    case ErrorKind::Complexity:
      return 6;
    default:
      return 2;
  }
}

}  // namespace noregret
