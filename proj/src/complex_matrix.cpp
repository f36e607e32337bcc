#include "qpac/complex_matrix.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace qpac {

namespace {

using EigenMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EigenMap = Eigen::Map<const EigenMatrix>;

Eigen::MatrixXcd symmetrized_eigen(const HermitianOperator &h) {
    const ComplexMatrix sym = h.symmetrized();
    EigenMap map(sym.data(), static_cast<Eigen::Index>(sym.rows()),
                 static_cast<Eigen::Index>(sym.cols()));
    return Eigen::MatrixXcd(map);
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_)
        throw DimensionError("ComplexMatrix: entry count does not match shape");
    if (!all_finite())
        throw NumericalError("ComplexMatrix: non-finite entry");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = Complex(1.0, 0.0);
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            out(c, r) = std::conj((*this)(r, c));
    return out;
}

Complex ComplexMatrix::trace() const {
    if (!is_square())
        throw DimensionError("trace: matrix not square");
    Complex t(0.0, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
        t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const Complex &z : entries_)
        s += std::norm(z);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const Complex &z : entries_)
        m = std::max(m, std::abs(z));
    return m;
}

bool ComplexMatrix::all_finite() const {
    for (const Complex &z : entries_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            return false;
    return true;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix &other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionError("matrix add: shape mismatch");
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        out.entries_[i] = entries_[i] + other.entries_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix &other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionError("matrix subtract: shape mismatch");
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        out.entries_[i] = entries_[i] - other.entries_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix &other) const {
    if (cols_ != other.rows_)
        throw DimensionError("matrix multiply: inner dimension mismatch");
    ComplexMatrix out(rows_, other.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Complex a = (*this)(r, k);
            if (a == Complex(0.0, 0.0))
                continue;
            for (std::size_t c = 0; c < other.cols_; ++c)
                out(r, c) += a * other(k, c);
        }
    }
    return out;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionError("matrix add: shape mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i)
        entries_[i] += other.entries_[i];
    return *this;
}

ComplexMatrix ComplexMatrix::scaled(Complex factor) const {
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        out.entries_[i] = entries_[i] * factor;
    return out;
}

bool ComplexMatrix::approx_equal(const ComplexMatrix &other, double tolval) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        return false;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (std::abs(entries_[i] - other.entries_[i]) > tolval)
            return false;
    return true;
}

void ComplexMatrix::add_outer_product(const Complex *v, double weight) {
    for (std::size_t r = 0; r < rows_; ++r) {
        const Complex wr = weight * v[r];
        for (std::size_t c = 0; c < cols_; ++c)
            (*this)(r, c) += wr * std::conj(v[c]);
    }
}

ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar)
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const Complex av = a(ar, ac);
            for (std::size_t br = 0; br < b.rows(); ++br)
                for (std::size_t bc = 0; bc < b.cols(); ++bc)
                    out(ar * b.rows() + br, ac * b.cols() + bc) = av * b(br, bc);
        }
    return out;
}

Complex trace_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows() || b.cols() != a.rows())
        throw DimensionError("trace_product: dimensions incompatible with a square product");
    Complex t(0.0, 0.0);
    for (std::size_t j = 0; j < a.rows(); ++j)
        for (std::size_t k = 0; k < a.cols(); ++k)
            t += a(j, k) * b(k, j);
    return t;
}

HermitianOperator::HermitianOperator(ComplexMatrix m) : matrix_(std::move(m)) {
    if (!matrix_.is_square())
        throw DimensionError("HermitianOperator: matrix not square");
    if (!matrix_.all_finite())
        throw NumericalError("HermitianOperator: non-finite entry");
    const double norm = matrix_.frobenius_norm();
    const double dev = (matrix_ - matrix_.adjoint()).frobenius_norm();
    if (dev > tol::HERMITIAN_TOL * norm)
        throw ValidationError("HermitianOperator: matrix is not Hermitian within tolerance");
}

ComplexMatrix HermitianOperator::symmetrized() const {
    const ComplexMatrix adj = matrix_.adjoint();
    ComplexMatrix out(matrix_.rows(), matrix_.cols());
    for (std::size_t r = 0; r < matrix_.rows(); ++r)
        for (std::size_t c = 0; c < matrix_.cols(); ++c)
            out(r, c) = 0.5 * (matrix_(r, c) + adj(r, c));
    return out;
}

std::vector<double> eigenvalues(const HermitianOperator &h) {
    if (h.dim() == 0)
        throw DimensionError("eigenvalues: empty operator");
    if (!h.matrix().all_finite())
        throw NumericalError("eigenvalues: non-finite entries");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(symmetrized_eigen(h),
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigenvalues: eigensolver failed to converge");
    const auto &vals = solver.eigenvalues();
    return std::vector<double>(vals.data(), vals.data() + vals.size());
}

double max_eigenvalue(const HermitianOperator &h) {
    const auto vals = eigenvalues(h);
    return vals.back();
}

double min_eigenvalue(const HermitianOperator &h) {
    const auto vals = eigenvalues(h);
    return vals.front();
}

double spectral_norm(const HermitianOperator &h) {
    const auto vals = eigenvalues(h);
    return std::max(std::abs(vals.front()), std::abs(vals.back()));
}

double quadratic_form(const ComplexMatrix &m, const Complex *v) {
    return sesquilinear_form(m, v, v).real();
}

Complex sesquilinear_form(const ComplexMatrix &m, const Complex *u, const Complex *v) {
    Complex acc(0.0, 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Complex row(0.0, 0.0);
        for (std::size_t c = 0; c < m.cols(); ++c)
            row += m(r, c) * v[c];
        acc += std::conj(u[r]) * row;
    }
    return acc;
}

} // namespace qpac
