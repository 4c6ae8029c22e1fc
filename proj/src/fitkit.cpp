#include "sawhe/fitkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace sawhe::fit {

namespace {

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

Eigen::VectorXd clamp_to_box(Eigen::VectorXd x, const Eigen::VectorXd& lo,
                             const Eigen::VectorXd& hi) {
    if (lo.size() == x.size()) x = x.cwiseMax(lo);
    if (hi.size() == x.size()) x = x.cwiseMin(hi);
    return x;
}

// Largest |cos| between the residual vector and a Jacobian column. Invariant
// under rescaling of data or parameters, unlike a raw gradient norm, which on
// picoampere-scale traces is microscopic long before the fit is anywhere
// near an optimum.
double gradient_cosine(const Eigen::MatrixXd& J, const Eigen::VectorXd& g,
                       double cost) {
    const double rn = std::sqrt(cost);
    if (rn == 0.0) return 0.0;  // perfect fit
    double worst = 0.0;
    for (Eigen::Index j = 0; j < g.size(); ++j) {
        const double cn = J.col(j).norm();
        if (cn > 0.0) worst = std::max(worst, std::abs(g[j]) / (rn * cn));
    }
    return worst;
}

Eigen::MatrixXd forward_difference_jacobian(const ResidualFn& f,
                                            const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& r0,
                                            const Eigen::VectorXd& lo,
                                            const Eigen::VectorXd& hi,
                                            double rel_step) {
    const Eigen::Index m = r0.size(), p = x.size();
    Eigen::MatrixXd J(m, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        double h = rel_step * std::abs(x[j]);
        if (h == 0.0) h = rel_step;
        Eigen::VectorXd xp = x;
        xp[j] += h;
        // keep the probe inside the box; step backward if pinned at the top
        if (hi.size() == p && xp[j] > hi[j]) {
            xp[j] = x[j] - h;
            h = -h;
        }
        if (lo.size() == p && xp[j] < lo[j])
            throw std::invalid_argument("fit: bounds too tight for FD probe");
        J.col(j) = (f(xp) - r0) / h;
    }
    return J;
}

}  // namespace

FitResult least_squares(const FitProblem& problem, const FitOptions& opts) {
    FitResult out;
    const Eigen::Index p = problem.x0.size();
    if (!problem.residual || p == 0) {
        out.status = FitStatus::invalid_input;
        return out;
    }
    const Eigen::VectorXd& lo = problem.lower;
    const Eigen::VectorXd& hi = problem.upper;
    if ((lo.size() != 0 && lo.size() != p) || (hi.size() != 0 && hi.size() != p)) {
        out.status = FitStatus::invalid_input;
        return out;
    }

    Eigen::VectorXd x = clamp_to_box(problem.x0, lo, hi);
    Eigen::VectorXd r = problem.residual(x);
    if (!all_finite(r)) {
        out.x = x;
        out.status = FitStatus::non_finite;
        return out;
    }
    double cost = r.squaredNorm();

    constexpr double lambda_cap = 1e15;
    double lambda = -1.0;   // initialized from the first J^T J below
    double lambda0 = 1.0;   // remembered so step-size stops can tell
                            // convergence apart from overdamped crawling
    Eigen::MatrixXd J;
    bool have_jacobian = false;
    out.status = FitStatus::max_iterations;

    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        if (!have_jacobian) {
            J = problem.jacobian
                    ? problem.jacobian(x)
                    : forward_difference_jacobian(problem.residual, x, r, lo, hi,
                                                  opts.fd_rel_step);
            if (!J.allFinite()) {
                out.status = FitStatus::non_finite;
                break;
            }
            have_jacobian = true;
        }
        Eigen::MatrixXd JtJ = J.transpose() * J;
        Eigen::VectorXd g = J.transpose() * r;
        if (gradient_cosine(J, g, cost) <= opts.gtol) {
            out.status = FitStatus::converged;
            break;
        }
        if (lambda < 0.0) {
            const double dmax = JtJ.diagonal().maxCoeff();
            lambda = lambda0 = 1e-3 * (dmax > 0.0 ? dmax : 1.0);
        }

        Eigen::MatrixXd A = JtJ;
        A.diagonal().array() += lambda;
        Eigen::VectorXd step = A.ldlt().solve(-g);
        Eigen::VectorXd x_try = clamp_to_box(x + step, lo, hi);
        Eigen::VectorXd r_try = problem.residual(x_try);
        if (!all_finite(r_try)) {
            out.status = FitStatus::non_finite;  // x still holds last good iterate
            break;
        }
        const double cost_try = r_try.squaredNorm();
        if (cost_try < cost) {
            // component-wise relative step: badly scaled parameter vectors
            // (amplitude ~1 next to tau ~1e-6) must not mask progress
            double rel_step = 0.0;
            for (Eigen::Index k = 0; k < p; ++k)
                rel_step = std::max(rel_step, std::abs(x_try[k] - x[k]) /
                                                  (std::abs(x[k]) + opts.xtol));
            x = x_try;
            r = r_try;
            cost = cost_try;
            lambda = std::max(lambda * 0.1, 1e-15);
            have_jacobian = false;
            // a tiny accepted step only means convergence once damping has
            // relaxed below its initial value; at high lambda every step is tiny
            if (rel_step <= opts.xtol && lambda < lambda0) {
                out.status = FitStatus::converged;
                ++iter;
                break;
            }
        } else {
            lambda *= 10.0;
            if (lambda > lambda_cap) {
                // damping saturated: the quadratic model cannot improve further,
                // which at a flat gradient is convergence in all but name
                out.status = gradient_cosine(J, g, cost) <= 1e-6
                                 ? FitStatus::converged
                                 : FitStatus::stalled;
                break;
            }
        }
    }

    out.x = x;
    out.residual_norm = std::sqrt(cost);
    out.iterations = iter;
    out.converged = out.status == FitStatus::converged;

    // covariance from the Gauss-Newton Hessian at the solution
    const Eigen::Index m = r.size();
    if (out.converged && m > p) {
        Eigen::MatrixXd Jf = problem.jacobian
                                 ? problem.jacobian(x)
                                 : forward_difference_jacobian(
                                       problem.residual, x, r, lo, hi, opts.fd_rel_step);
        Eigen::MatrixXd JtJ = Jf.transpose() * Jf;
        const double s2 = cost / double(m - p);
        Eigen::MatrixXd cov = JtJ.ldlt().solve(
            Eigen::MatrixXd::Identity(p, p) * s2);
        out.std_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    }
    return out;
}

namespace {

ExpFitResult run_exp_fit(const Eigen::VectorXd& t, const Eigen::VectorXd& y,
                         bool with_offset, double a0, double tau0, double b0,
                         double tau_lo, double tau_hi) {
    const double t0 = t[0];
    const Eigen::Index p = with_offset ? 3 : 2;
    FitProblem prob;
    prob.x0 = Eigen::VectorXd(p);
    prob.x0[0] = a0;
    prob.x0[1] = tau0;
    if (with_offset) prob.x0[2] = b0;
    prob.lower = Eigen::VectorXd::Constant(p, -std::numeric_limits<double>::infinity());
    prob.upper = Eigen::VectorXd::Constant(p, std::numeric_limits<double>::infinity());
    prob.lower[1] = tau_lo;
    prob.upper[1] = tau_hi;
    prob.residual = [&t, &y, t0, with_offset](const Eigen::VectorXd& th) {
        const double A = th[0], tau = th[1];
        const double B = with_offset ? th[2] : 0.0;
        Eigen::ArrayXd model = A * ((-(t.array() - t0)) / tau).exp() + B;
        return Eigen::VectorXd(model - y.array());
    };
    FitResult r = least_squares(prob);
    ExpFitResult e;
    e.amplitude = r.x[0];
    e.tau = r.x[1];
    e.offset = with_offset ? r.x[2] : 0.0;
    e.t0 = t0;
    e.converged = r.converged;
    e.residual_norm = r.residual_norm;
    e.iterations = r.iterations;
    return e;
}

}  // namespace

ExpFitResult exp_fit(const Eigen::VectorXd& t, const Eigen::VectorXd& y,
                     bool with_offset) {
    const Eigen::Index n = t.size();
    if (n < 4 || y.size() != n)
        throw std::invalid_argument("exp_fit: need >= 4 samples and matching sizes");
    for (Eigen::Index i = 1; i < n; ++i)
        if (!(t[i] > t[i - 1]))
            throw std::invalid_argument("exp_fit: time grid must be ascending");

    const double span = t[n - 1] - t[0];
    const double tau_lo = 1e-6 * span, tau_hi = 1e6 * span;

    // quartile means anchor the initial decay estimate
    const Eigen::Index q = std::max<Eigen::Index>(n / 4, 1);
    const double m1 = y.head(q).mean(), m2 = y.tail(q).mean();
    const double t1 = t.head(q).mean(), t2 = t.tail(q).mean();
    double b0 = with_offset ? y.tail(std::max<Eigen::Index>(n / 10, 1)).mean() : 0.0;
    double a1 = m1 - b0, a2 = m2 - b0;
    double tau0 = span / 3.0;
    if (a1 != 0.0) {
        if (std::abs(a2) < 1e-3 * std::abs(a1) || a1 * a2 < 0.0)
            a2 = 1e-3 * a1;
        const double ratio = a1 / a2;
        if (ratio > 1.0) tau0 = (t2 - t1) / std::log(ratio);
    }
    tau0 = std::clamp(tau0, tau_lo, tau_hi);
    double a0 = a1 * std::exp((t1 - t[0]) / tau0);
    if (a0 == 0.0) a0 = m1 - b0;

    ExpFitResult best = run_exp_fit(t, y, with_offset, a0, tau0, b0, tau_lo, tau_hi);
    if (!best.converged) {
        for (double s : {0.3, 3.0}) {  // deterministic spread retries
            ExpFitResult alt =
                run_exp_fit(t, y, with_offset, a0, std::clamp(tau0 * s, tau_lo, tau_hi),
                            b0, tau_lo, tau_hi);
            if (alt.converged &&
                (!best.converged || alt.residual_norm < best.residual_norm))
                best = alt;
        }
    }
    return best;
}

}  // namespace sawhe::fit
