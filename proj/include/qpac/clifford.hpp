#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpac/complex_matrix.hpp"
#include "qpac/rng.hpp"

namespace qpac {

/// The full Clifford group modulo global phase, as dense unitaries.
/// Supported at 1 qubit (24 elements) and 2 qubits (11520 elements); the
/// list is generated once per process and cached. Element order is the
/// deterministic closure order from a fixed generator set.
const std::vector<ComplexMatrix> &clifford_group_unitaries(int qubits);

/// Identifier of one uniformly sampled Clifford basis: an index into the
/// binary symplectic group plus sign bits for the 2n Pauli generator images.
struct SampledClifford {
    std::uint64_t index_hi = 0;
    std::uint64_t index_lo = 0;
    std::uint64_t signs = 0;

    std::string encode() const;
    static SampledClifford decode(const std::string &text);
};

/// Draw a uniformly random Clifford (modulo phase) for `qubits` qubits.
/// Uniformity comes from a uniform index into the symplectic group (selected
/// by transvection decomposition) and uniform generator signs.
SampledClifford draw_sampled_clifford(int qubits, RngStream &rng);

/// Dense unitary whose columns are the stabilizer basis described by the
/// sample. The global and per-column phases are a fixed deterministic choice;
/// only the column projectors matter to measurement statistics.
ComplexMatrix sampled_clifford_unitary(int qubits, const SampledClifford &sample);

/// Number of elements of the binary symplectic group Sp(2n, F2).
/// Needed to bound the sampling index; fits 128 bits through n = 6.
unsigned __int128 symplectic_group_order(int n);

} // namespace qpac
