#include "qpac/clifford.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <mutex>
#include <unordered_map>

#include "qpac/errors.hpp"
#include "qpac/pauli.hpp"
#include "qpac/tolerances.hpp"

namespace qpac {

namespace {

// ---------------------------------------------------------------------------
// Group enumeration (1-2 qubits): breadth-first closure from generators,
// canonicalized modulo global phase and hashed on a fixed grid.
// ---------------------------------------------------------------------------

ComplexMatrix hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    return ComplexMatrix(2, 2, {Complex(s, 0), Complex(s, 0), Complex(s, 0), Complex(-s, 0)});
}

ComplexMatrix phase_gate() {
    return ComplexMatrix(2, 2, {Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(0, 1)});
}

ComplexMatrix cnot(bool control_first) {
    ComplexMatrix m(4, 4);
    for (std::size_t j = 0; j < 4; ++j) {
        // Big-endian: bit 1 is qubit 0, bit 0 is qubit 1.
        const std::size_t control = control_first ? (j >> 1) & 1 : j & 1;
        std::size_t out = j;
        if (control)
            out ^= control_first ? 1 : 2;
        m(out, j) = Complex(1, 0);
    }
    return m;
}

ComplexMatrix phase_canonical(const ComplexMatrix &u) {
    // Multiply by a unit phase making the first significantly large entry
    // real positive. Clifford entries have magnitude >= 1/2 when nonzero.
    for (const Complex &z : u.entries()) {
        if (std::abs(z) > 0.3) {
            const Complex phase = std::conj(z) / std::abs(z);
            return u.scaled(phase);
        }
    }
    throw NumericalError("phase_canonical: matrix has no large entry");
}

std::string grid_key(const ComplexMatrix &u) {
    // 2^-20 grid; closure error is ~1e-14, grid spacing ~1e-6.
    std::string key;
    key.reserve(u.entries().size() * 8);
    for (const Complex &z : u.entries()) {
        const std::int32_t re = static_cast<std::int32_t>(std::lround(z.real() * 1048576.0));
        const std::int32_t im = static_cast<std::int32_t>(std::lround(z.imag() * 1048576.0));
        key.append(reinterpret_cast<const char *>(&re), 4);
        key.append(reinterpret_cast<const char *>(&im), 4);
    }
    return key;
}

std::vector<ComplexMatrix> enumerate_clifford_group(int qubits) {
    std::vector<ComplexMatrix> generators;
    if (qubits == 1) {
        generators = {hadamard(), phase_gate()};
    } else if (qubits == 2) {
        const ComplexMatrix i2 = ComplexMatrix::identity(2);
        generators = {tensor_product(hadamard(), i2), tensor_product(i2, hadamard()),
                      tensor_product(phase_gate(), i2), tensor_product(i2, phase_gate()),
                      cnot(true), cnot(false)};
    } else {
        throw UnsupportedError("clifford_group_unitaries: enumeration limited to 1-2 qubits");
    }

    const std::size_t dim = std::size_t{1} << qubits;
    std::vector<ComplexMatrix> group;
    std::unordered_map<std::string, std::size_t> seen;
    std::deque<std::size_t> frontier;

    const ComplexMatrix identity = ComplexMatrix::identity(dim);
    group.push_back(phase_canonical(identity));
    seen.emplace(grid_key(group[0]), 0);
    frontier.push_back(0);

    while (!frontier.empty()) {
        const std::size_t at = frontier.front();
        frontier.pop_front();
        for (const ComplexMatrix &g : generators) {
            ComplexMatrix next = phase_canonical(g * group[at]);
            std::string key = grid_key(next);
            if (seen.emplace(std::move(key), group.size()).second) {
                group.push_back(std::move(next));
                frontier.push_back(group.size() - 1);
            }
        }
    }
    const std::size_t expected = qubits == 1 ? 24 : 11520;
    if (group.size() != expected)
        throw NumericalError("clifford group enumeration produced an unexpected count");
    return group;
}

// ---------------------------------------------------------------------------
// Uniform symplectic sampling via transvection decomposition.
// Vectors live in F_2^(2n) with the symplectic form pairing bits (2q, 2q+1).
// ---------------------------------------------------------------------------

using Bits = std::vector<std::uint8_t>;
using u128 = unsigned __int128;

int symplectic_inner(const Bits &v, const Bits &w) {
    int t = 0;
    for (std::size_t i = 0; i < v.size() / 2; ++i) {
        t ^= v[2 * i] & w[2 * i + 1];
        t ^= w[2 * i] & v[2 * i + 1];
    }
    return t;
}

// v -> v + <k, v> k
void apply_transvection(const Bits &k, Bits &v) {
    if (symplectic_inner(k, v) == 0)
        return;
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] ^= k[i];
}

Bits int_to_bits(u128 value, std::size_t n) {
    Bits out(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = static_cast<std::uint8_t>(value & 1);
        value >>= 1;
    }
    return out;
}

// Two transvections taking x to y (either may be the zero vector, which
// acts as the identity). Assumes x, y nonzero.
std::pair<Bits, Bits> find_transvection(const Bits &x, const Bits &y) {
    const std::size_t nn = x.size();
    Bits zero(nn, 0);
    if (x == y)
        return {zero, zero};
    if (symplectic_inner(x, y) == 1) {
        Bits h(nn, 0);
        for (std::size_t i = 0; i < nn; ++i)
            h[i] = x[i] ^ y[i];
        return {h, zero};
    }
    Bits z(nn, 0);
    // A qubit pair where both x and y act.
    for (std::size_t i = 0; i < nn / 2; ++i) {
        const std::size_t ii = 2 * i;
        if ((x[ii] | x[ii + 1]) && (y[ii] | y[ii + 1])) {
            z[ii] = static_cast<std::uint8_t>(x[ii] ^ y[ii]);
            z[ii + 1] = static_cast<std::uint8_t>(x[ii + 1] ^ y[ii + 1]);
            if ((z[ii] | z[ii + 1]) == 0) {
                z[ii + 1] = 1;
                if (x[ii] != x[ii + 1])
                    z[ii] = 1;
            }
            Bits h1(nn), h2(nn);
            for (std::size_t j = 0; j < nn; ++j) {
                h1[j] = x[j] ^ z[j];
                h2[j] = y[j] ^ z[j];
            }
            return {h1, h2};
        }
    }
    // A pair where x acts and y does not...
    for (std::size_t i = 0; i < nn / 2; ++i) {
        const std::size_t ii = 2 * i;
        if ((x[ii] | x[ii + 1]) && !(y[ii] | y[ii + 1])) {
            if (x[ii] == x[ii + 1]) {
                z[ii + 1] = 1;
            } else {
                z[ii + 1] = x[ii];
                z[ii] = x[ii + 1];
            }
            break;
        }
    }
    // ...and a pair where y acts and x does not.
    for (std::size_t i = 0; i < nn / 2; ++i) {
        const std::size_t ii = 2 * i;
        if (!(x[ii] | x[ii + 1]) && (y[ii] | y[ii + 1])) {
            if (y[ii] == y[ii + 1]) {
                z[ii + 1] ^= 1;
            } else {
                z[ii + 1] ^= y[ii];
                z[ii] ^= y[ii + 1];
            }
            break;
        }
    }
    Bits h1(nn), h2(nn);
    for (std::size_t j = 0; j < nn; ++j) {
        h1[j] = x[j] ^ z[j];
        h2[j] = y[j] ^ z[j];
    }
    return {h1, h2};
}

// Rows are images of the symplectic basis vectors (x1, z1, x2, z2, ...).
std::vector<Bits> symplectic_matrix(u128 index, int n) {
    const std::size_t nn = 2 * static_cast<std::size_t>(n);
    const u128 s = (u128{1} << nn) - 1;
    const u128 k = (index % s) + 1;
    index /= s;

    Bits f1 = int_to_bits(k, nn);
    Bits e1(nn, 0);
    e1[0] = 1;
    auto [t0, t1] = find_transvection(e1, f1);

    const u128 bit_count = u128{1} << (nn - 1);
    Bits bits = int_to_bits(index % bit_count, nn - 1);
    index /= bit_count;

    Bits eprime = e1;
    for (std::size_t j = 2; j < nn; ++j)
        eprime[j] = bits[j - 1];
    Bits h0 = eprime;
    apply_transvection(t0, h0);
    apply_transvection(t1, h0);

    // The final transvection is skipped when the first drawn bit is set.
    const bool extra = bits[0] == 0;

    std::vector<Bits> g;
    if (n == 1) {
        g = {Bits{1, 0}, Bits{0, 1}};
    } else {
        auto inner_rows = symplectic_matrix(index, n - 1);
        g.assign(nn, Bits(nn, 0));
        g[0][0] = 1;
        g[1][1] = 1;
        for (std::size_t r = 0; r < nn - 2; ++r)
            for (std::size_t c = 0; c < nn - 2; ++c)
                g[r + 2][c + 2] = inner_rows[r][c];
    }
    for (Bits &row : g) {
        apply_transvection(t0, row);
        apply_transvection(t1, row);
        apply_transvection(h0, row);
        if (extra)
            apply_transvection(f1, row);
    }
    return g;
}

// Dense Hermitian Pauli for a symplectic row: (-1)^sign i^(x.z) X^x Z^z.
ComplexMatrix pauli_from_row(const Bits &row, bool sign, int qubits) {
    ComplexMatrix out(1, 1);
    out(0, 0) = Complex(sign ? -1.0 : 1.0, 0.0);
    for (int q = 0; q < qubits; ++q) {
        const int x = row[2 * static_cast<std::size_t>(q)];
        const int z = row[2 * static_cast<std::size_t>(q) + 1];
        int code;
        if (x == 0 && z == 0)
            code = 0;
        else if (x == 1 && z == 0)
            code = 1;
        else if (x == 1 && z == 1)
            code = 2; // Y = i X Z
        else
            code = 3;
        out = tensor_product(out, pauli(code));
    }
    return out;
}

void matvec(const ComplexMatrix &m, const std::vector<Complex> &v, std::vector<Complex> &out) {
    const std::size_t n = m.rows();
    out.assign(n, Complex(0, 0));
    for (std::size_t r = 0; r < n; ++r) {
        Complex acc(0, 0);
        for (std::size_t c = 0; c < n; ++c)
            acc += m(r, c) * v[c];
        out[r] = acc;
    }
}

} // namespace

const std::vector<ComplexMatrix> &clifford_group_unitaries(int qubits) {
    static std::mutex mutex;
    static std::vector<ComplexMatrix> cache[3];
    if (qubits != 1 && qubits != 2)
        throw UnsupportedError("clifford_group_unitaries: enumeration limited to 1-2 qubits");
    std::lock_guard<std::mutex> lock(mutex);
    if (cache[qubits].empty())
        cache[qubits] = enumerate_clifford_group(qubits);
    return cache[qubits];
}

unsigned __int128 symplectic_group_order(int n) {
    if (n < 1 || n > 6)
        throw RangeError("symplectic_group_order: supported for 1..6 qubits");
    u128 order = 1;
    for (int j = 1; j <= n; ++j) {
        order *= (u128{1} << (2 * j)) - 1; // 4^j - 1
        order <<= 2 * j - 1;               // 2^(2j-1)
    }
    return order;
}

std::string SampledClifford::encode() const {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "K%016llx%016llx.%04llx",
                  static_cast<unsigned long long>(index_hi),
                  static_cast<unsigned long long>(index_lo),
                  static_cast<unsigned long long>(signs));
    return std::string(buf);
}

SampledClifford SampledClifford::decode(const std::string &text) {
    SampledClifford out;
    if (text.size() < 6 || text[0] != 'K')
        throw ValidationError("SampledClifford: malformed identifier");
    const auto dot = text.find('.');
    if (dot == std::string::npos || dot != 33)
        throw ValidationError("SampledClifford: malformed identifier");
    out.index_hi = std::stoull(text.substr(1, 16), nullptr, 16);
    out.index_lo = std::stoull(text.substr(17, 16), nullptr, 16);
    out.signs = std::stoull(text.substr(dot + 1), nullptr, 16);
    return out;
}

SampledClifford draw_sampled_clifford(int qubits, RngStream &rng) {
    const u128 order = symplectic_group_order(qubits);
    // Rejection sampling for an unbiased 128-bit index below `order`.
    const u128 limit = (~u128{0}) - ((~u128{0}) % order + 1) % order;
    u128 draw;
    do {
        draw = (u128{rng.next_u64()} << 64) | rng.next_u64();
    } while (draw > limit);
    const u128 index = draw % order;

    SampledClifford out;
    out.index_hi = static_cast<std::uint64_t>(index >> 64);
    out.index_lo = static_cast<std::uint64_t>(index);
    out.signs = rng.uniform_index(std::uint64_t{1} << (2 * qubits));
    return out;
}

ComplexMatrix sampled_clifford_unitary(int qubits, const SampledClifford &sample) {
    if (qubits < 1 || qubits > 6)
        throw RangeError("sampled_clifford_unitary: supported for 1..6 qubits");
    const u128 index = (u128{sample.index_hi} << 64) | sample.index_lo;
    if (index >= symplectic_group_order(qubits))
        throw RangeError("sampled_clifford_unitary: index out of range");
    const auto rows = symplectic_matrix(index, qubits);
    const std::size_t dim = std::size_t{1} << qubits;

    // Stabilizer generators are the images of Z_q, destabilizers of X_q.
    std::vector<ComplexMatrix> stabilizers, destabilizers;
    for (int q = 0; q < qubits; ++q) {
        const bool sx = ((sample.signs >> (2 * q)) & 1) != 0;
        const bool sz = ((sample.signs >> (2 * q + 1)) & 1) != 0;
        destabilizers.push_back(pauli_from_row(rows[2 * static_cast<std::size_t>(q)], sx, qubits));
        stabilizers.push_back(
            pauli_from_row(rows[2 * static_cast<std::size_t>(q) + 1], sz, qubits));
    }

    // |phi_0>: project a computational basis vector onto the joint +1
    // eigenspace of the stabilizers (rank 1), then normalize.
    std::vector<Complex> v, tmp;
    double norm = 0.0;
    for (std::size_t start = 0; start < dim; ++start) {
        v.assign(dim, Complex(0, 0));
        v[start] = Complex(1, 0);
        for (const ComplexMatrix &s : stabilizers) {
            matvec(s, v, tmp);
            for (std::size_t i = 0; i < dim; ++i)
                v[i] = 0.5 * (v[i] + tmp[i]);
        }
        norm = 0.0;
        for (const Complex &z : v)
            norm += std::norm(z);
        if (norm > 1e-9)
            break;
    }
    if (norm <= 1e-9)
        throw NumericalError("sampled_clifford_unitary: stabilizer projector annihilated basis");
    const double inv = 1.0 / std::sqrt(norm);
    for (Complex &z : v)
        z *= inv;

    // Column j applies the destabilizers selected by j's bits (qubit 0 is the
    // most significant bit).
    ComplexMatrix u(dim, dim);
    std::vector<Complex> col = v;
    for (std::size_t j = 0; j < dim; ++j) {
        col = v;
        for (int q = 0; q < qubits; ++q) {
            if ((j >> (qubits - 1 - q)) & 1) {
                matvec(destabilizers[static_cast<std::size_t>(q)], col, tmp);
                col = tmp;
            }
        }
        for (std::size_t r = 0; r < dim; ++r)
            u(r, j) = col[r];
    }
    return u;
}

} // namespace qpac
