#pragma once

// Alternating projected gradient ascent for continuous solution and
// parameter spaces. The inner step climbs U_θ(s) in s; the outer step moves θ
// along the implicit-differentiation gradient of F(s*_θ).

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace noregret {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Reciprocal-condition threshold below which a Hessian counts as singular
/// (condition number above 1e12).
inline constexpr double kSingularConditionLimit = 1e12;

/// A smooth bilevel problem over S ⊆ ℝ^{d′} and Θ ⊆ ℝ^d. Evaluators must be
/// safe to call concurrently.
struct SmoothProblem {
  std::string name;
  std::size_t solution_dim = 0;  // d′
  std::size_t theta_dim = 0;     // d

  std::function<double(const Vector& theta, const Vector& s)> utility;
  std::function<Vector(const Vector& theta, const Vector& s)> grad_s;
  /// ∇_θ∇_sᵀ U, shape d × d′.
  std::function<Matrix(const Vector& theta, const Vector& s)> mixed;
  /// ∇_s∇_sᵀ U, shape d′ × d′.
  std::function<Matrix(const Vector& theta, const Vector& s)> hessian_s;
  std::function<double(const Vector& s)> fairness;
  std::function<Vector(const Vector& s)> grad_fairness;
  std::function<Vector(const Vector& s)> project_s;
  std::function<Vector(const Vector& theta)> project_theta;
  /// Optional: argmax_s U_θ(s).
  std::function<Vector(const Vector& theta)> exact_inner;
};

enum class InnerMode { GradientStep, ExactSolve };

/// Where the outer step evaluates G: at the s just produced by the inner
/// update (the default), or at a freshly solved s*_θ.
enum class OuterGradientAt { CurrentIterate, ExactOptimum };

struct AscentConfig {
  double alpha = 0.01;
  double beta = 0.01;
  std::size_t max_iterations = 10'000;
  double tolerance = 1e-8;
  InnerMode inner = InnerMode::GradientStep;
  OuterGradientAt gradient_at = OuterGradientAt::CurrentIterate;

  /// Throws ArgumentError on non-positive rates/tolerance or a zero cap.
  void validate() const;
};

struct AscentStep {
  std::size_t iteration = 0;
  Vector s;
  Vector theta;
  double utility = 0;
  double fairness = 0;
  double s_step = 0;
  double theta_step = 0;
};

enum class Termination { Converged, IterationCap, SingularHessian };

const char* to_string(Termination reason);

struct AscentTrace {
  std::vector<AscentStep> steps;  // steps[0] is the projected starting point
  Termination reason = Termination::IterationCap;
  std::string message;
};

/// G_θ(s) = −∇_θ∇_sᵀU · [∇_s∇_sᵀU]⁻¹ · ∇_sF, computed with an LU solve.
/// Throws SingularHessianError when the Hessian is singular or its condition
/// estimate exceeds kSingularConditionLimit; utilities linear in s always do.
Vector fairness_gradient(const SmoothProblem& problem, const Vector& theta, const Vector& s);

/// s ← Π_S[s + α ∇_s U_θ(s)]
Vector inner_step(const SmoothProblem& problem, const Vector& theta, const Vector& s, double alpha);

/// θ ← Π_Θ[θ + β G_θ(s)]
Vector outer_step(const SmoothProblem& problem, const Vector& theta, const Vector& s, double beta);

/// Alternates inner and outer steps until both step norms fall below the
/// tolerance or the cap is hit. A singular Hessian ends the run early with
/// the partial trace.
AscentTrace alternating_ascent(const SmoothProblem& problem, const AscentConfig& config,
                               const Vector& s0, const Vector& theta0);

struct GradientAudit {
  Vector analytic;
  Vector finite_difference;
  double max_abs_deviation = 0;
};

/// Compares G at (θ, s*_θ) with central differences of F(s*_θ) using step
/// `epsilon`. Needs `exact_inner`.
GradientAudit finite_difference_audit(const SmoothProblem& problem, const Vector& theta,
                                      double epsilon);

// --- projections -----------------------------------------------------------

std::function<Vector(const Vector&)> identity_projection();
std::function<Vector(const Vector&)> box_projection(Vector lo, Vector hi);
/// Euclidean projection onto {s >= 0, Σ s = total}.
std::function<Vector(const Vector&)> simplex_projection(double total);

// --- registered problems ---------------------------------------------------

/// U_θ(s) = −(s₁−θ)² − (s₂−θ²)², F(s) = s₂ − s₁, S = ℝ², Θ = [0,1].
/// s*_θ = (θ, θ²), so F(s*_θ) = θ² − θ and G = 2θ − 1.
SmoothProblem quadratic_toy();

/// U_θ(s) = Σ θ_i log s_i − Σ s_i with F(s) = sin(s₁) − (s₁ − 2 s₂)²,
/// S = [1e-3, 10]², Θ = [1/2, 2]². s*_θ = θ, so G = ∇F(θ).
SmoothProblem log_utility();

/// Relaxed subset selection: s over {s >= 0, Σ s = k}, U_θ(s) = Σ s_i·U_θ(item_i)
/// with U_θ(item) = θ·a + (1−θ)·b and F(s) = −(Σ_{g₁} s − Σ_{g₂} s)².
/// Linear in s, so every gradient evaluation raises SingularHessianError.
SmoothProblem simplex_relaxation(std::vector<double> first, std::vector<double> second,
                                 std::vector<int> group_sign, double k);

/// Names accepted by make_problem().
std::vector<std::string> registered_problems();
/// quadratic-toy and log-utility; simplex-relaxation needs data.
SmoothProblem make_problem(const std::string& name);

}  // namespace noregret
