#include "noregret/continuous_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "noregret/errors.hpp"

namespace noregret {

void AscentConfig::validate() const {
  if (!(alpha > 0) || !(beta > 0)) throw ArgumentError("learning rates must be positive");
  if (max_iterations < 1) throw ArgumentError("iteration cap must be at least 1");
  if (!(tolerance > 0)) throw ArgumentError("tolerance must be positive");
}

const char* to_string(Termination reason) {
  switch (reason) {
    case Termination::Converged: return "converged";
    case Termination::IterationCap: return "cap";
    case Termination::SingularHessian: return "singular-hessian";
  }
  return "unknown";
}

namespace {

Vector checked(const Vector& v, std::size_t dim, const char* what) {
  if (static_cast<std::size_t>(v.size()) != dim || !v.allFinite()) {
    throw DomainError(std::string(what) + " left its domain or changed dimension");
  }
  return v;
}

}  // namespace

Vector fairness_gradient(const SmoothProblem& problem, const Vector& theta, const Vector& s) {
  const Matrix hessian = problem.hessian_s(theta, s);
  const Matrix mixed = problem.mixed(theta, s);
  const Vector grad_f = problem.grad_fairness(s);

  if (!hessian.allFinite() || hessian.isZero(0.0)) {
    throw SingularHessianError("Hessian of U in s vanishes: the utility is linear in s and "
                               "the implicit gradient is undefined");
  }
  Eigen::PartialPivLU<Matrix> lu(hessian);
  const double rcond = lu.rcond();
  if (!(rcond * kSingularConditionLimit >= 1.0)) {
    throw SingularHessianError("Hessian of U in s is singular (condition estimate " +
                               std::to_string(rcond > 0 ? 1.0 / rcond : INFINITY) + ")");
  }
  return -mixed * lu.solve(grad_f);
}

Vector inner_step(const SmoothProblem& problem, const Vector& theta, const Vector& s, double alpha) {
  if (!(alpha > 0)) throw ArgumentError("alpha must be positive");
  return checked(problem.project_s(s + alpha * problem.grad_s(theta, s)), problem.solution_dim,
                 "inner step");
}

Vector outer_step(const SmoothProblem& problem, const Vector& theta, const Vector& s, double beta) {
  if (!(beta > 0)) throw ArgumentError("beta must be positive");
  return checked(problem.project_theta(theta + beta * fairness_gradient(problem, theta, s)),
                 problem.theta_dim, "outer step");
}

AscentTrace alternating_ascent(const SmoothProblem& problem, const AscentConfig& config,
                               const Vector& s0, const Vector& theta0) {
  config.validate();
  const bool needs_exact = config.inner == InnerMode::ExactSolve ||
                           config.gradient_at == OuterGradientAt::ExactOptimum;
  if (needs_exact && !problem.exact_inner) {
    throw ArgumentError("problem '" + problem.name + "' has no exact inner solver");
  }

  AscentTrace trace;
  Vector s = checked(problem.project_s(s0), problem.solution_dim, "initial s");
  Vector theta = checked(problem.project_theta(theta0), problem.theta_dim, "initial theta");
  trace.steps.push_back({0, s, theta, problem.utility(theta, s), problem.fairness(s), 0, 0});

  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    const Vector s_next = config.inner == InnerMode::ExactSolve
                              ? checked(problem.project_s(problem.exact_inner(theta)),
                                        problem.solution_dim, "exact inner solve")
                              : inner_step(problem, theta, s, config.alpha);
    const Vector& s_for_gradient =
        config.gradient_at == OuterGradientAt::ExactOptimum ? problem.exact_inner(theta) : s_next;

    Vector theta_next;
    try {
      theta_next = outer_step(problem, theta, s_for_gradient, config.beta);
    } catch (const SingularHessianError& e) {
      trace.reason = Termination::SingularHessian;
      trace.message = e.what();
      return trace;
    }

    AscentStep step;
    step.iteration = it;
    step.s_step = (s_next - s).norm();
    step.theta_step = (theta_next - theta).norm();
    s = s_next;
    theta = theta_next;
    step.s = s;
    step.theta = theta;
    step.utility = problem.utility(theta, s);
    step.fairness = problem.fairness(s);
    trace.steps.push_back(std::move(step));

    if (trace.steps.back().s_step < config.tolerance &&
        trace.steps.back().theta_step < config.tolerance) {
      trace.reason = Termination::Converged;
      return trace;
    }
  }
  trace.reason = Termination::IterationCap;
  return trace;
}

GradientAudit finite_difference_audit(const SmoothProblem& problem, const Vector& theta,
                                      double epsilon) {
  if (!(epsilon > 0)) throw ArgumentError("finite-difference step must be positive");
  if (!problem.exact_inner) {
    throw ArgumentError("problem '" + problem.name + "' has no exact inner solver");
  }
  GradientAudit audit;
  audit.analytic = fairness_gradient(problem, theta, problem.exact_inner(theta));
  audit.finite_difference.resize(theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    Vector up = theta, down = theta;
    up[j] += epsilon;
    down[j] -= epsilon;
    audit.finite_difference[j] = (problem.fairness(problem.exact_inner(up)) -
                                  problem.fairness(problem.exact_inner(down))) /
                                 (2 * epsilon);
  }
  audit.max_abs_deviation = (audit.analytic - audit.finite_difference).cwiseAbs().maxCoeff();
  return audit;
}

// ---------------------------------------------------------------------------

std::function<Vector(const Vector&)> identity_projection() {
  return [](const Vector& v) { return v; };
}

std::function<Vector(const Vector&)> box_projection(Vector lo, Vector hi) {
  return [lo = std::move(lo), hi = std::move(hi)](const Vector& v) -> Vector {
    return v.cwiseMax(lo).cwiseMin(hi);
  };
}

std::function<Vector(const Vector&)> simplex_projection(double total) {
  return [total](const Vector& v) -> Vector {
    // Sort-and-threshold projection onto the scaled simplex.
    std::vector<double> u(v.data(), v.data() + v.size());
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0;
    double shift = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      cumulative += u[i];
      const double candidate = (cumulative - total) / static_cast<double>(i + 1);
      if (u[i] - candidate > 0) shift = candidate;
    }
    return (v.array() - shift).cwiseMax(0.0).matrix();
  };
}

// ---------------------------------------------------------------------------

SmoothProblem quadratic_toy() {
  SmoothProblem p;
  p.name = "quadratic-toy";
  p.solution_dim = 2;
  p.theta_dim = 1;
  p.utility = [](const Vector& th, const Vector& s) {
    const double t = th[0];
    return -(s[0] - t) * (s[0] - t) - (s[1] - t * t) * (s[1] - t * t);
  };
  p.grad_s = [](const Vector& th, const Vector& s) {
    const double t = th[0];
    return Vector{{-2 * (s[0] - t), -2 * (s[1] - t * t)}};
  };
  p.mixed = [](const Vector& th, const Vector&) {
    Matrix m(1, 2);
    m << 2, 4 * th[0];
    return m;
  };
  p.hessian_s = [](const Vector&, const Vector&) { return Matrix(-2 * Matrix::Identity(2, 2)); };
  p.fairness = [](const Vector& s) { return s[1] - s[0]; };
  p.grad_fairness = [](const Vector&) { return Vector{{-1.0, 1.0}}; };
  p.project_s = identity_projection();
  p.project_theta = box_projection(Vector::Constant(1, 0.0), Vector::Constant(1, 1.0));
  p.exact_inner = [](const Vector& th) { return Vector{{th[0], th[0] * th[0]}}; };
  return p;
}

SmoothProblem log_utility() {
  SmoothProblem p;
  p.name = "log-utility";
  p.solution_dim = 2;
  p.theta_dim = 2;
  p.utility = [](const Vector& th, const Vector& s) {
    return th[0] * std::log(s[0]) + th[1] * std::log(s[1]) - s.sum();
  };
  p.grad_s = [](const Vector& th, const Vector& s) {
    return Vector{{th[0] / s[0] - 1, th[1] / s[1] - 1}};
  };
  p.mixed = [](const Vector&, const Vector& s) {
    return Matrix(Vector{{1 / s[0], 1 / s[1]}}.asDiagonal());
  };
  p.hessian_s = [](const Vector& th, const Vector& s) {
    return Matrix(Vector{{-th[0] / (s[0] * s[0]), -th[1] / (s[1] * s[1])}}.asDiagonal());
  };
  p.fairness = [](const Vector& s) {
    const double d = s[0] - 2 * s[1];
    return std::sin(s[0]) - d * d;
  };
  p.grad_fairness = [](const Vector& s) {
    const double d = s[0] - 2 * s[1];
    return Vector{{std::cos(s[0]) - 2 * d, 4 * d}};
  };
  p.project_s = box_projection(Vector::Constant(2, 1e-3), Vector::Constant(2, 10.0));
  p.project_theta = box_projection(Vector::Constant(2, 0.5), Vector::Constant(2, 2.0));
  p.exact_inner = [](const Vector& th) { return th; };
  return p;
}

SmoothProblem simplex_relaxation(std::vector<double> first, std::vector<double> second,
                                 std::vector<int> group_sign, double k) {
  const std::size_t n = first.size();
  if (second.size() != n || group_sign.size() != n) {
    throw ArgumentError("simplex relaxation needs one entry per item");
  }
  const Vector a = Eigen::Map<const Vector>(first.data(), static_cast<Eigen::Index>(n));
  const Vector b = Eigen::Map<const Vector>(second.data(), static_cast<Eigen::Index>(n));
  Vector sign(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) sign[static_cast<Eigen::Index>(i)] = group_sign[i];

  SmoothProblem p;
  p.name = "simplex-relaxation";
  p.solution_dim = n;
  p.theta_dim = 1;
  p.utility = [a, b](const Vector& th, const Vector& s) {
    return (th[0] * a + (1 - th[0]) * b).dot(s);
  };
  p.grad_s = [a, b](const Vector& th, const Vector&) -> Vector { return th[0] * a + (1 - th[0]) * b; };
  p.mixed = [a, b](const Vector&, const Vector&) -> Matrix { return (a - b).transpose(); };
  p.hessian_s = [n](const Vector&, const Vector&) -> Matrix {
    return Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  };
  p.fairness = [sign](const Vector& s) {
    const double d = sign.dot(s);
    return -d * d;
  };
  p.grad_fairness = [sign](const Vector& s) -> Vector { return -2 * sign.dot(s) * sign; };
  p.project_s = simplex_projection(k);
  p.project_theta = box_projection(Vector::Constant(1, 0.0), Vector::Constant(1, 1.0));
  return p;
}

std::vector<std::string> registered_problems() {
  return {"quadratic-toy", "log-utility", "simplex-relaxation"};
}

SmoothProblem make_problem(const std::string& name) {
  if (name == "quadratic-toy") return quadratic_toy();
  if (name == "log-utility") return log_utility();
  throw ConfigError("unknown or data-dependent problem '" + name + "'");
}

}  // namespace noregret
