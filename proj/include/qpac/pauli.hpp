#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qpac/complex_matrix.hpp"

namespace qpac {

// Qubit ordering is big-endian throughout: qubit 0 is the first tensor factor
// and owns the most significant bit of a basis index.

ComplexMatrix pauli_i();
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// Single-qubit Pauli by code: 0 -> I, 1 -> X, 2 -> Y, 3 -> Z.
const ComplexMatrix &pauli(int code);

/// Dense matrix of a Pauli string (codes in {0,1,2,3}, one per qubit).
ComplexMatrix pauli_string_matrix(const std::vector<int> &codes);

/// Number of non-identity factors.
int pauli_weight(const std::vector<int> &codes);

/// Coefficients of a Hermitian operator in the normalized Pauli-string basis:
/// o = sum_s coeff(s) * sigma_s with coeff(s) = tr(sigma_s o) / dim.
/// Index s enumerates codes in base-4, qubit 0 most significant.
std::vector<Complex> pauli_decompose(const ComplexMatrix &o, int qubits);

/// Rebuild a dense operator from base-4-indexed Pauli coefficients.
ComplexMatrix pauli_recompose(const std::vector<Complex> &coeffs, int qubits);

/// Weight (non-identity count) of the base-4-encoded string index.
int pauli_index_weight(std::uint64_t index, int qubits);

/// Partial trace over one qubit, re-embedded with an identity on that qubit:
/// X -> (Tr_q X) (x) I_q placed back at qubit q's slot.
ComplexMatrix partial_trace_embed(const ComplexMatrix &x, int qubits, int qubit);

/// Embed an operator acting on `support` (ascending qubit positions) into the
/// full d-qubit space, identity elsewhere.
ComplexMatrix embed_operator(const ComplexMatrix &op, const std::vector<int> &support,
                             int qubits);

/// Measurement-basis eigenvectors for the single-qubit X/Y/Z bases.
/// basis: 0 -> X, 1 -> Y, 2 -> Z; outcome in {0, 1}.
std::array<Complex, 2> basis_eigenvector(int basis, int outcome);

/// Basis letter for persistence: X, Y or Z.
char basis_letter(int basis);
int basis_from_letter(char c);

} // namespace qpac
