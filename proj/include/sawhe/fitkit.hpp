#pragma once

#include <Eigen/Dense>
#include <functional>

// Small damped Gauss-Newton (Levenberg-Marquardt) least-squares engine.
// Deterministic: no random restarts, no timing dependence. Used for
// conductivity extraction from transfer curves and for exponential decay
// fits of pumping transients.

namespace sawhe::fit {

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

struct FitProblem {
    ResidualFn residual;       // r(x), length m >= number of params
    Eigen::VectorXd x0;        // initial guess, length p
    Eigen::VectorXd lower;     // box bounds; empty = unbounded
    Eigen::VectorXd upper;
    JacobianFn jacobian;       // optional; forward differences when absent
};

struct FitOptions {
    int max_iterations = 200;
    double gtol = 1e-10;        // stop when every |cos| between the residual and
                                // a Jacobian column falls below gtol (scale-free)
    double xtol = 1e-10;        // stop on accepted relative step below xtol
    double fd_rel_step = 1e-6;  // forward-difference step, relative to |x_j|
};

enum class FitStatus {
    converged,
    max_iterations,   // budget exhausted without meeting tolerances
    stalled,          // damping grew past its cap without an acceptable step
    non_finite,       // residual evaluated to NaN/Inf; x holds last good iterate
    invalid_input,
};

struct FitResult {
    Eigen::VectorXd x;
    double residual_norm = 0.0;  // ||r(x)||_2
    int iterations = 0;
    bool converged = false;
    FitStatus status = FitStatus::invalid_input;
    Eigen::VectorXd std_errors;  // sqrt(diag cov), empty when m <= p
};

// Damped Gauss-Newton with multiplicative Levenberg damping:
// accepted steps never increase the residual norm.
FitResult least_squares(const FitProblem& problem, const FitOptions& opts = {});

struct ExpFitResult {
    double amplitude = 0.0;  // A in A*exp(-(t-t0)/tau) + B
    double tau = 0.0;        // decay time, units of t
    double offset = 0.0;     // B (0 when fitted without offset)
    double t0 = 0.0;         // window start, fixed to t.front()
    bool converged = false;
    double residual_norm = 0.0;
    int iterations = 0;
};

// Fit y(t) ~ A exp(-(t - t0)/tau) + B on an ascending time grid.
// Initial tau comes from the log-slope between first- and last-quartile
// means; on failure a deterministic 3-point spread of tau guesses is tried.
ExpFitResult exp_fit(const Eigen::VectorXd& t, const Eigen::VectorXd& y,
                     bool with_offset = true);

}  // namespace sawhe::fit
