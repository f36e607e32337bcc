#include "qpac/pauli.hpp"

#include <cmath>

#include "qpac/errors.hpp"

namespace qpac {

namespace {
constexpr Complex c0(0.0, 0.0);
constexpr Complex c1(1.0, 0.0);
constexpr Complex ci(0.0, 1.0);
const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
} // namespace

ComplexMatrix pauli_i() { return ComplexMatrix::identity(2); }

ComplexMatrix pauli_x() { return ComplexMatrix(2, 2, {c0, c1, c1, c0}); }

ComplexMatrix pauli_y() { return ComplexMatrix(2, 2, {c0, -ci, ci, c0}); }

ComplexMatrix pauli_z() { return ComplexMatrix(2, 2, {c1, c0, c0, -c1}); }

const ComplexMatrix &pauli(int code) {
    static const ComplexMatrix table[4] = {pauli_i(), pauli_x(), pauli_y(), pauli_z()};
    if (code < 0 || code > 3)
        throw RangeError("pauli: code must be 0..3");
    return table[code];
}

ComplexMatrix pauli_string_matrix(const std::vector<int> &codes) {
    if (codes.empty())
        throw RangeError("pauli_string_matrix: empty code list");
    ComplexMatrix out = pauli(codes[0]);
    for (std::size_t q = 1; q < codes.size(); ++q)
        out = tensor_product(out, pauli(codes[q]));
    return out;
}

int pauli_weight(const std::vector<int> &codes) {
    int w = 0;
    for (int c : codes)
        if (c != 0)
            ++w;
    return w;
}

int pauli_index_weight(std::uint64_t index, int qubits) {
    int w = 0;
    for (int q = 0; q < qubits; ++q) {
        if (index % 4 != 0)
            ++w;
        index /= 4;
    }
    return w;
}

namespace {

std::vector<int> codes_from_index(std::uint64_t index, int qubits) {
    // Base-4 digits, qubit 0 most significant.
    std::vector<int> codes(static_cast<std::size_t>(qubits));
    for (int q = qubits - 1; q >= 0; --q) {
        codes[static_cast<std::size_t>(q)] = static_cast<int>(index % 4);
        index /= 4;
    }
    return codes;
}

} // namespace

std::vector<Complex> pauli_decompose(const ComplexMatrix &o, int qubits) {
    const std::size_t dim = std::size_t{1} << qubits;
    if (o.rows() != dim || o.cols() != dim)
        throw DimensionError("pauli_decompose: operator dimension is not 2^qubits");
    const std::uint64_t strings = std::uint64_t{1} << (2 * qubits);
    std::vector<Complex> coeffs(strings);
    for (std::uint64_t s = 0; s < strings; ++s) {
        const ComplexMatrix sigma = pauli_string_matrix(codes_from_index(s, qubits));
        coeffs[s] = trace_product(sigma, o) / static_cast<double>(dim);
    }
    return coeffs;
}

ComplexMatrix pauli_recompose(const std::vector<Complex> &coeffs, int qubits) {
    const std::size_t dim = std::size_t{1} << qubits;
    const std::uint64_t strings = std::uint64_t{1} << (2 * qubits);
    if (coeffs.size() != strings)
        throw DimensionError("pauli_recompose: coefficient count is not 4^qubits");
    ComplexMatrix out(dim, dim);
    for (std::uint64_t s = 0; s < strings; ++s) {
        if (coeffs[s] == c0)
            continue;
        out += pauli_string_matrix(codes_from_index(s, qubits)).scaled(coeffs[s]);
    }
    return out;
}

ComplexMatrix partial_trace_embed(const ComplexMatrix &x, int qubits, int qubit) {
    const std::size_t dim = std::size_t{1} << qubits;
    if (x.rows() != dim || x.cols() != dim)
        throw DimensionError("partial_trace_embed: dimension mismatch");
    if (qubit < 0 || qubit >= qubits)
        throw RangeError("partial_trace_embed: qubit out of range");
    const std::size_t bit = std::size_t{1} << (qubits - 1 - qubit);
    ComplexMatrix out(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            // Row/col must agree on the traced qubit; sum over its two values.
            if ((r & bit) != (c & bit))
                continue;
            const Complex v = x(r & ~bit, c & ~bit) + x(r | bit, c | bit);
            out(r, c) = v;
        }
    }
    return out;
}

ComplexMatrix embed_operator(const ComplexMatrix &op, const std::vector<int> &support,
                             int qubits) {
    const std::size_t k = support.size();
    const std::size_t opdim = std::size_t{1} << k;
    if (op.rows() != opdim || op.cols() != opdim)
        throw DimensionError("embed_operator: operator dimension is not 2^|support|");
    for (std::size_t i = 0; i < k; ++i) {
        if (support[i] < 0 || support[i] >= qubits)
            throw RangeError("embed_operator: support qubit out of range");
        if (i > 0 && support[i] <= support[i - 1])
            throw RangeError("embed_operator: support must be strictly ascending");
    }
    const std::size_t dim = std::size_t{1} << qubits;
    auto sub_index = [&](std::size_t full) {
        std::size_t s = 0;
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t bit = std::size_t{1} << (qubits - 1 - support[i]);
            s = (s << 1) | ((full & bit) ? 1u : 0u);
        }
        return s;
    };
    std::size_t rest_mask = dim - 1;
    for (std::size_t i = 0; i < k; ++i)
        rest_mask &= ~(std::size_t{1} << (qubits - 1 - support[i]));

    ComplexMatrix out(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        const std::size_t rr = r & rest_mask;
        for (std::size_t c = 0; c < dim; ++c) {
            if ((c & rest_mask) != rr)
                continue;
            out(r, c) = op(sub_index(r), sub_index(c));
        }
    }
    return out;
}

std::array<Complex, 2> basis_eigenvector(int basis, int outcome) {
    if (outcome != 0 && outcome != 1)
        throw RangeError("basis_eigenvector: outcome must be 0 or 1");
    switch (basis) {
    case 0: // X: |+>, |->
        return {Complex(inv_sqrt2, 0.0), Complex(outcome == 0 ? inv_sqrt2 : -inv_sqrt2, 0.0)};
    case 1: // Y: |+i>, |-i>
        return {Complex(inv_sqrt2, 0.0), Complex(0.0, outcome == 0 ? inv_sqrt2 : -inv_sqrt2)};
    case 2: // Z: |0>, |1>
        return {Complex(outcome == 0 ? 1.0 : 0.0, 0.0), Complex(outcome == 0 ? 0.0 : 1.0, 0.0)};
    default:
        throw RangeError("basis_eigenvector: basis must be 0..2");
    }
}

char basis_letter(int basis) {
    switch (basis) {
    case 0:
        return 'X';
    case 1:
        return 'Y';
    case 2:
        return 'Z';
    default:
        throw RangeError("basis_letter: basis must be 0..2");
    }
}

int basis_from_letter(char c) {
    switch (c) {
    case 'X':
        return 0;
    case 'Y':
        return 1;
    case 'Z':
        return 2;
    default:
        throw RangeError("basis_from_letter: expected X, Y or Z");
    }
}

} // namespace qpac
