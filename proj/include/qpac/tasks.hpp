#pragma once

#include <cstdint>
#include <vector>

#include "qpac/concept_class.hpp"
#include "qpac/loss.hpp"
#include "qpac/quantum_model.hpp"
#include "qpac/rng.hpp"

namespace qpac {

/// A ready-to-run learning problem: predictors, data distribution, loss.
struct LearningTask {
    ConceptClass concepts;
    LabeledStateSource source;
    LossFunction loss;
    std::vector<int> labels;
};

/// Two-state discrimination on `qubits` qubits with 0/1 loss. The class has
/// `class_size` members: the perfect projective measurement (id c00), the
/// label-swapped one (last id), and evenly spaced mixtures of the two in
/// between, so the extreme points stay fixed at the two projective members
/// for every class size. `label_noise` flips each sample's label with the
/// given probability.
LearningTask make_state_discrimination(int qubits, std::size_t class_size, double label_noise,
                                       std::uint64_t seed);

/// Random projective two-outcome measurements on random pure-state atoms.
LearningTask make_random_projective_class(int qubits, std::size_t class_size,
                                          std::size_t atom_count, std::uint64_t seed);

// Random object builders shared by the task generators and the test suites.

PureState random_pure_state(std::size_t dim, RngStream &rng);
ComplexMatrix random_unitary(std::size_t dim, RngStream &rng);
HermitianOperator random_hermitian(std::size_t dim, RngStream &rng);

/// Random Hermitian acting on `k` qubits embedded at a random position of a
/// `qubits`-qubit register (identity elsewhere).
HermitianOperator random_k_local_hermitian(int qubits, int k, RngStream &rng);

/// Projective POVM from the column partition of a random unitary; outcome y
/// gets dim/labels columns (the remainder goes to the last outcome).
Povm random_projective_povm(std::size_t dim, const std::vector<int> &labels, RngStream &rng);

/// Loss table with independent uniform [0, 1] entries.
LossFunction random_loss(const std::vector<int> &labels, RngStream &rng);

} // namespace qpac
