#pragma once

#include <vector>

namespace qpac {

struct NnlsResult {
    std::vector<double> x; // the nonnegative solution
    double residual2 = 0;  // 2-norm of A x - b
    bool converged = false;
};

/// Lawson-Hanson active-set solver for min ||A x - b||_2 subject to x >= 0.
/// `a` is row-major with shape rows x cols. Small dense problems only.
NnlsResult nnls(const std::vector<double> &a, std::size_t rows, std::size_t cols,
                const std::vector<double> &b, int max_iterations = 0);

} // namespace qpac
