#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qpac/errors.hpp"
#include "qpac/tolerances.hpp"

namespace qpac {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major. Target scale is dim <= 64; everything is
/// value-semantic and immutable from the caller's point of view once built.
class ComplexMatrix {
  public:
    ComplexMatrix() : rows_(0), cols_(0) {}

    /// Uninitialized (zero) matrix of the given shape.
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, Complex(0.0, 0.0)) {}

    /// From row-major entries. Rejects shape mismatch and non-finite values.
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex &operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const {
        return entries_[r * cols_ + c];
    }

    const std::vector<Complex> &entries() const { return entries_; }
    Complex *data() { return entries_.data(); }
    const Complex *data() const { return entries_.data(); }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    bool all_finite() const;

    ComplexMatrix operator+(const ComplexMatrix &other) const;
    ComplexMatrix operator-(const ComplexMatrix &other) const;
    ComplexMatrix operator*(const ComplexMatrix &other) const;
    ComplexMatrix &operator+=(const ComplexMatrix &other);
    ComplexMatrix scaled(Complex factor) const;

    /// Entrywise comparison: max |a - b| <= tol.
    bool approx_equal(const ComplexMatrix &other, double tol) const;

    /// result += weight * v v^dag for a column vector v of length rows().
    void add_outer_product(const Complex *v, double weight);

  private:
    std::size_t rows_, cols_;
    std::vector<Complex> entries_;
};

/// Kronecker product with big-endian ordering: the first factor owns the most
/// significant index block. Each output entry is a single multiplication, so
/// chained products keep the association order of the calls.
ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b);

/// tr(A B) without forming the product. Inner dimensions must be compatible
/// and the (virtual) product square.
Complex trace_product(const ComplexMatrix &a, const ComplexMatrix &b);

/// Square matrix certified Hermitian at construction:
/// ||M - M^dag||_F <= HERMITIAN_TOL * ||M||_F.
class HermitianOperator {
  public:
    explicit HermitianOperator(ComplexMatrix m);

    const ComplexMatrix &matrix() const { return matrix_; }
    std::size_t dim() const { return matrix_.rows(); }

    /// (M + M^dag) / 2; exact no-op for exactly Hermitian input.
    ComplexMatrix symmetrized() const;

  private:
    ComplexMatrix matrix_;
};

/// Largest eigenvalue of the symmetrized operator.
double max_eigenvalue(const HermitianOperator &h);

/// Smallest eigenvalue of the symmetrized operator.
double min_eigenvalue(const HermitianOperator &h);

/// All eigenvalues, ascending.
std::vector<double> eigenvalues(const HermitianOperator &h);

/// Spectral norm (largest |eigenvalue|) of a Hermitian operator.
double spectral_norm(const HermitianOperator &h);

/// Real part of a Hermitian quadratic form <v|M|v>.
double quadratic_form(const ComplexMatrix &m, const Complex *v);

/// <u|M|v> for column vectors u, v of length m.rows().
Complex sesquilinear_form(const ComplexMatrix &m, const Complex *u, const Complex *v);

} // namespace qpac
