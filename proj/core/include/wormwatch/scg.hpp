#pragma once

#include <cstddef>
#include <functional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

namespace wormwatch::scg {

struct ScgConfig {
  int max_cycles = 100;
  double sigma0 = 1e-4;   // finite-difference step for the curvature probe
  double lambda0 = 1e-6;  // initial scale (trust-region) parameter
  double grad_tol = 1e-6; // stop once ||g|| < grad_tol

  /// Throws Error(BadParams) when an invariant is violated.
  void validate() const;
};

enum class StopReason { Budget, GradientTolerance, NonFiniteObjective };

const char* to_string(StopReason reason) noexcept;

struct TrainReport {
  double initial_loss = 0.0;
  /// Loss at the accepted point after each cycle. Non-increasing, except that
  /// steps accepted at the rounding resolution of f may rise by up to 64 ulps.
  std::vector<double> loss_history;
  /// Whether each cycle's trial step was accepted.
  std::vector<bool> accepted;
  int cycles_run = 0;
  StopReason stop_reason = StopReason::Budget;
  std::size_t objective_evaluations = 0;
  std::size_t gradient_evaluations = 0;

  double final_loss() const noexcept {
    return loss_history.empty() ? initial_loss : loss_history.back();
  }
};

struct ScgResult {
  Eigen::VectorXd x;
  TrainReport report;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;
using Gradient = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Scaled Conjugate Gradient (Moller 1993): conjugate directions with a
/// Levenberg-Marquardt style scale lambda in place of a line search. One
/// cycle is one SCG iteration: at most one curvature-probe gradient, one
/// objective evaluation at the trial point, and one gradient at an accepted
/// point. The direction restarts to steepest descent every x0.size() accepted
/// steps and whenever it stops being a descent direction.
///
/// When the predicted reduction is below the resolution of f, the reduction
/// used in the accept test comes from the trapezoid rule on the directional
/// derivatives at both ends of the step.
///
/// A non-finite value at x0 throws Error(NonFiniteObjective); one met later
/// ends the run at the last accepted point with stop_reason
/// NonFiniteObjective.
ScgResult scg_minimize(const Objective& f, const Gradient& g, const Eigen::VectorXd& x0,
                       const ScgConfig& cfg = {});

/// CSV with header `cycle,loss`; cycle 0 is the starting loss.
void write_report_csv(std::ostream& out, const TrainReport& report);

}  // namespace wormwatch::scg
