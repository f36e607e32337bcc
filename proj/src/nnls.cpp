#include "qpac/nnls.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "qpac/errors.hpp"

namespace qpac {

NnlsResult nnls(const std::vector<double> &a, std::size_t rows, std::size_t cols,
                const std::vector<double> &b, int max_iterations) {
    if (a.size() != rows * cols || b.size() != rows)
        throw DimensionError("nnls: shape mismatch");
    using Matrix = Eigen::MatrixXd;
    using Vector = Eigen::VectorXd;

    Matrix A(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a[r * cols + c];
    Vector rhs(rows);
    for (std::size_t r = 0; r < rows; ++r)
        rhs(static_cast<Eigen::Index>(r)) = b[r];

    const Eigen::Index n = static_cast<Eigen::Index>(cols);
    Vector x = Vector::Zero(n);
    std::vector<bool> passive(cols, false);
    if (max_iterations <= 0)
        max_iterations = 3 * static_cast<int>(cols) + 30;

    const double grad_tol = 1e-12 * std::max(1.0, rhs.norm()) *
                            std::max(1.0, A.lpNorm<Eigen::Infinity>());

    NnlsResult out;
    Vector residual = rhs;
    for (int iter = 0; iter < max_iterations; ++iter) {
        // Most-violated KKT multiplier among the active (clamped) variables.
        Vector w = A.transpose() * residual;
        Eigen::Index best = -1;
        double best_w = grad_tol;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
                best_w = w(j);
                best = j;
            }
        }
        if (best < 0) {
            out.converged = true;
            break;
        }
        passive[static_cast<std::size_t>(best)] = true;

        // Inner loop: least squares on the passive set, stepping back to the
        // boundary whenever a passive variable would go negative.
        for (int inner = 0; inner < max_iterations; ++inner) {
            std::vector<Eigen::Index> idx;
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)])
                    idx.push_back(j);
            Matrix Ap(rows, static_cast<Eigen::Index>(idx.size()));
            for (std::size_t k = 0; k < idx.size(); ++k)
                Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
            Vector z = Ap.colPivHouseholderQr().solve(rhs);

            bool all_positive = true;
            double alpha = 1.0;
            for (std::size_t k = 0; k < idx.size(); ++k) {
                if (z(static_cast<Eigen::Index>(k)) <= 0.0) {
                    all_positive = false;
                    const double xj = x(idx[k]);
                    const double denom = xj - z(static_cast<Eigen::Index>(k));
                    if (denom > 0.0)
                        alpha = std::min(alpha, xj / denom);
                }
            }
            if (all_positive) {
                x.setZero();
                for (std::size_t k = 0; k < idx.size(); ++k)
                    x(idx[k]) = z(static_cast<Eigen::Index>(k));
                break;
            }
            for (std::size_t k = 0; k < idx.size(); ++k) {
                const double stepped =
                    x(idx[k]) + alpha * (z(static_cast<Eigen::Index>(k)) - x(idx[k]));
                x(idx[k]) = stepped;
                if (stepped <= 1e-14) {
                    x(idx[k]) = 0.0;
                    passive[static_cast<std::size_t>(idx[k])] = false;
                }
            }
        }
        residual = rhs - A * x;
    }

    out.residual2 = (rhs - A * x).norm();
    out.x.assign(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index j = 0; j < n; ++j)
        out.x[static_cast<std::size_t>(j)] = x(j);
    if (!out.converged) {
        // Iteration budget exhausted; the KKT conditions may be slightly
        // violated but the residual reported is still the achieved one.
        Vector w = A.transpose() * (rhs - A * x);
        out.converged = (w.maxCoeff() <= 10 * grad_tol);
    }
    return out;
}

} // namespace qpac
