#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace sawhe {

/**
 * @brief Solve a tridiagonal system A x = d by the Thomas algorithm.
 *
 * The matrix is given by three diagonals:
 *   lower[i] = A(i, i-1)  (lower[0] unused)
 *   diag[i]  = A(i, i)
 *   upper[i] = A(i, i+1)  (upper[n-1] unused)
 *
 * O(n) forward elimination + back substitution, no pivoting. The caller is
 * responsible for diagonal dominance or otherwise well-conditioned input;
 * a vanishing pivot raises std::runtime_error.
 *
 * Scalar may be real or complex (double, std::complex<double>).
 */
template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> solve_tridiagonal(
    const Eigen::Vector<Scalar, Eigen::Dynamic>& lower,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& diag,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& upper,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& rhs) {
    using Vec = Eigen::Vector<Scalar, Eigen::Dynamic>;
    const Eigen::Index n = diag.size();
    if (n == 0) throw std::invalid_argument("solve_tridiagonal: empty system");
    if (lower.size() != n || upper.size() != n || rhs.size() != n)
        throw std::invalid_argument("solve_tridiagonal: diagonal size mismatch");

    Vec c_star(n), d_star(n);
    Scalar pivot = diag[0];
    if (pivot == Scalar(0)) throw std::runtime_error("solve_tridiagonal: zero pivot");
    c_star[0] = upper[0] / pivot;
    d_star[0] = rhs[0] / pivot;
    for (Eigen::Index i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i] * c_star[i - 1];
        if (pivot == Scalar(0)) throw std::runtime_error("solve_tridiagonal: zero pivot");
        c_star[i] = (i + 1 < n) ? upper[i] / pivot : Scalar(0);
        d_star[i] = (rhs[i] - lower[i] * d_star[i - 1]) / pivot;
    }
    Vec x(n);
    x[n - 1] = d_star[n - 1];
    for (Eigen::Index i = n - 2; i >= 0; --i)
        x[i] = d_star[i] - c_star[i] * x[i + 1];
    return x;
}

}  // namespace sawhe
