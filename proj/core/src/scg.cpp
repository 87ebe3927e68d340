#include "wormwatch/scg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wormwatch/error.hpp"

namespace wormwatch::scg {

void ScgConfig::validate() const {
  if (max_cycles < 1) throw Error(Errc::BadParams, "max_cycles must be at least 1");
  if (!(sigma0 > 0.0)) throw Error(Errc::BadParams, "sigma0 must be positive");
  if (!(lambda0 >= 0.0)) throw Error(Errc::BadParams, "lambda0 must be non-negative");
  if (!(grad_tol >= 0.0)) throw Error(Errc::BadParams, "grad_tol must be non-negative");
}

const char* to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::Budget: return "budget";
    case StopReason::GradientTolerance: return "gradient-tolerance";
    case StopReason::NonFiniteObjective: return "non-finite-objective";
  }
  return "unknown";
}

namespace {

constexpr double kLambdaMin = 1e-15;
constexpr double kNoiseUlps = 64.0;

bool finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

ScgResult scg_minimize(const Objective& f, const Gradient& g, const Eigen::VectorXd& x0,
                       const ScgConfig& cfg) {
  cfg.validate();
  if (!finite(x0)) throw Error(Errc::NonFiniteObjective, "start point is not finite");

  ScgResult result;
  auto& rep = result.report;
  auto eval_f = [&](const Eigen::VectorXd& x) {
    ++rep.objective_evaluations;
    return f(x);
  };
  auto eval_g = [&](const Eigen::VectorXd& x) {
    ++rep.gradient_evaluations;
    return g(x);
  };

  Eigen::VectorXd x = x0;
  double fx = eval_f(x);
  Eigen::VectorXd r = -eval_g(x);  // steepest-descent direction
  if (!std::isfinite(fx) || !finite(r))
    throw Error(Errc::NonFiniteObjective, "objective or gradient is not finite at the start point");
  rep.initial_loss = fx;

  auto stationary = [&](const Eigen::VectorXd& residual) {
    double n = residual.norm();
    return n == 0.0 || n < cfg.grad_tol;
  };
  auto finish = [&](StopReason why) {
    rep.stop_reason = why;
    result.x = x;
    return result;
  };

  if (stationary(r)) return finish(StopReason::GradientTolerance);

  const auto dim = static_cast<std::size_t>(x.size());
  Eigen::VectorXd p = r;
  double lambda = cfg.lambda0;
  double lambda_bar = 0.0;
  double delta = 0.0;
  bool success = true;
  std::size_t steps_since_restart = 0;

  for (int cycle = 1; cycle <= cfg.max_cycles; ++cycle) {
    rep.cycles_run = cycle;
    const double p2 = p.squaredNorm();

    if (success) {
      const double sigma = cfg.sigma0 / std::sqrt(p2);
      Eigen::VectorXd g_probe = eval_g(x + sigma * p);
      if (!finite(g_probe)) {
        rep.loss_history.push_back(fx);
        rep.accepted.push_back(false);
        return finish(StopReason::NonFiniteObjective);
      }
      // r = -g(x), so g(x + sigma p) - g(x) = g_probe + r.
      delta = p.dot(g_probe + r) / sigma;
    }

    // Scale the curvature estimate and force it positive.
    delta += (lambda - lambda_bar) * p2;
    if (delta <= 0.0) {
      lambda_bar = 2.0 * (lambda - delta / p2);
      delta = -delta + lambda * p2;
      lambda = lambda_bar;
    }

    const double mu = p.dot(r);
    const double alpha = mu / delta;
    Eigen::VectorXd x_trial = x + alpha * p;
    const double f_trial = eval_f(x_trial);
    if (!std::isfinite(f_trial)) {
      rep.loss_history.push_back(fx);
      rep.accepted.push_back(false);
      return finish(StopReason::NonFiniteObjective);
    }

    // Comparison parameter: actual vs. predicted reduction. Below the
    // resolution of f the measured reduction is rounding noise, so estimate it
    // from the directional derivatives at both ends of the step instead.
    double comparison = 2.0 * delta * (fx - f_trial) / (mu * mu);
    const double resolution = kNoiseUlps * std::numeric_limits<double>::epsilon() *
                              std::max(std::abs(fx), std::abs(f_trial));
    Eigen::VectorXd r_new;
    auto eval_residual = [&] {
      r_new = -eval_g(x_trial);
      return finite(r_new);
    };
    if (mu * mu / (2.0 * delta) <= resolution) {
      if (!eval_residual()) {
        rep.loss_history.push_back(fx);
        rep.accepted.push_back(false);
        return finish(StopReason::NonFiniteObjective);
      }
      const double reduction = 0.5 * alpha * (mu + p.dot(r_new));
      if (f_trial <= fx + resolution) comparison = 2.0 * delta * reduction / (mu * mu);
    }

    if (comparison >= 0.0) {
      if (r_new.size() == 0 && !eval_residual()) {
        rep.loss_history.push_back(fx);
        rep.accepted.push_back(false);
        return finish(StopReason::NonFiniteObjective);
      }
      x = std::move(x_trial);
      fx = f_trial;
      lambda_bar = 0.0;
      success = true;
      rep.loss_history.push_back(fx);
      rep.accepted.push_back(true);

      if (stationary(r_new)) {
        r = std::move(r_new);
        return finish(StopReason::GradientTolerance);
      }

      if (++steps_since_restart >= dim) {
        p = r_new;
        steps_since_restart = 0;
      } else {
        const double beta = (r_new.squaredNorm() - r_new.dot(r)) / mu;
        p = r_new + beta * p;
      }
      r = std::move(r_new);
      if (p.dot(r) <= 0.0) {
        p = r;
        steps_since_restart = 0;
      }
      if (comparison >= 0.75) lambda = std::max(lambda / 4.0, kLambdaMin);
    } else {
      lambda_bar = lambda;
      success = false;
      rep.loss_history.push_back(fx);
      rep.accepted.push_back(false);
    }

    if (comparison < 0.25) lambda += delta * (1.0 - comparison) / p2;
  }
  return finish(StopReason::Budget);
}

void write_report_csv(std::ostream& out, const TrainReport& report) {
  out << "cycle,loss\n";
  auto old_precision = out.precision(17);
  out << 0 << ',' << report.initial_loss << '\n';
  for (std::size_t i = 0; i < report.loss_history.size(); ++i)
    out << i + 1 << ',' << report.loss_history[i] << '\n';
  out.precision(old_precision);
}

}  // namespace wormwatch::scg
