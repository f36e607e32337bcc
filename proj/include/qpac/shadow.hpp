#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpac/complex_matrix.hpp"
#include "qpac/loss.hpp"
#include "qpac/quantum_model.hpp"
#include "qpac/rng.hpp"

namespace qpac {

enum class EnsembleKind { PauliTensor, CliffordExact, CliffordSampled, Custom };

std::string ensemble_kind_name(EnsembleKind kind);
EnsembleKind ensemble_kind_from_name(const std::string &name);

/// A randomized-measurement ensemble: a distribution over unitaries whose
/// rotated computational-basis measurements drive the shadow channel.
///
/// Kinds:
///  - PauliTensor: independent uniform X/Y/Z basis per qubit.
///  - CliffordExact: the full Clifford group, enumerated (1-2 qubits).
///  - CliffordSampled: uniform Cliffords drawn per shadow via the symplectic
///    decomposition; the channel and its inverse use the closed forms
///    Gamma[O] = (O + tr(O) I) / (dim+1), Gamma^-1[O] = (dim+1) O - tr(O) I.
///  - Custom: an explicit finite list of (weight, unitary).
///
/// Tomographic completeness is verified at construction; `custom` can opt
/// out for test fixtures, in which case the channel inverse degrades to a
/// pseudo-inverse on the channel's range.
class UnitaryEnsemble {
  public:
    static UnitaryEnsemble pauli_tensor(int qubits);
    static UnitaryEnsemble clifford_exact(int qubits);
    static UnitaryEnsemble clifford_sampled(int qubits);
    static UnitaryEnsemble custom(std::size_t dim,
                                  std::vector<std::pair<double, ComplexMatrix>> members,
                                  bool require_complete = true);

    EnsembleKind kind() const;
    std::size_t dim() const;
    int qubits() const; // 0 for custom ensembles of non-power-of-two dim
    bool complete() const;

    /// True when the (member, outcome) pairs can be enumerated exactly.
    bool enumerable() const;
    std::size_t member_count() const;

    /// Visit every (member, outcome) pair of an enumerable ensemble with the
    /// member weight and the measured basis vector psi (omega = psi psi^dag).
    void for_each_outcome(
        const std::function<void(double weight, std::span<const Complex> psi)> &visit) const;

    /// The channel as a dense matrix on row-major-vectorized operators
    /// (dim^2 x dim^2). Enumerable ensembles only.
    const ComplexMatrix &channel_matrix() const;

    /// Inverse (or pseudo-inverse, for an incomplete ensemble built with the
    /// completeness check disabled) of the channel matrix.
    const ComplexMatrix &channel_inverse_matrix() const;

    /// Member unitary of an enumerated ensemble (CliffordExact / Custom).
    const ComplexMatrix &member(std::size_t index) const;

    /// Member weights of an enumerated ensemble (uniform for CliffordExact).
    double member_weight(std::size_t index) const;

  private:
    UnitaryEnsemble() = default;
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

/// Gamma[O]: the expected measure-and-prepare action of the ensemble,
/// computed by exact enumeration (or the closed form for sampled Cliffords).
ComplexMatrix gamma_apply(const UnitaryEnsemble &ens, const ComplexMatrix &o);
HermitianOperator gamma_apply(const UnitaryEnsemble &ens, const HermitianOperator &o);

/// Gamma^-1[O]. PauliTensor uses the factorwise per-qubit closed form,
/// CliffordSampled the global closed form, and enumerated kinds the
/// numerical inverse of the channel matrix.
ComplexMatrix gamma_inverse(const UnitaryEnsemble &ens, const ComplexMatrix &o);
HermitianOperator gamma_inverse(const UnitaryEnsemble &ens, const HermitianOperator &o);

/// Compact record of one randomized measurement: which unitary, which
/// outcome. For PauliTensor the id is the basis string (e.g. "XZY", qubit 0
/// first); for enumerated ensembles a decimal member index; for sampled
/// Cliffords the encoded symplectic index and signs.
struct ShadowSnapshot {
    std::string unitary_id;
    std::size_t outcome = 0;
};

/// The reconstructed state estimate: trace 1, Hermitian, not necessarily
/// positive semidefinite. Carries the label of the sample it came from.
struct ClassicalShadow {
    ShadowSnapshot snapshot;
    HermitianOperator matrix;
    int label = 0;
};

struct ShadowDatasetMeta {
    std::uint64_t seed = 0;
    EnsembleKind ensemble = EnsembleKind::PauliTensor;
    std::size_t dim = 0;
    std::size_t n = 0;
};

struct ShadowDataset {
    std::vector<ClassicalShadow> shadows;
    ShadowDatasetMeta meta;
};

/// Measure one sample through the ensemble and reconstruct its shadow.
/// Consumes the sample (it collapses); a second measurement throws.
ClassicalShadow generate_shadow(const UnitaryEnsemble &ens, LabeledSample &sample,
                                RngStream &rng);

/// One shadow per sample; shadow i uses the stream (seed, ShadowUnitary, i),
/// so any worker count produces the identical dataset.
ShadowDataset generate_dataset(const UnitaryEnsemble &ens, std::vector<LabeledSample> &samples,
                               std::uint64_t seed, unsigned threads = 1);

/// Rebuild the dense estimate from a persisted snapshot.
ClassicalShadow reconstruct_shadow(const UnitaryEnsemble &ens, const ShadowSnapshot &snapshot,
                                   int label);

/// tr(L_M(y) rho_hat) for the shadow's own label. May fall outside [0, 1].
double shadow_loss_single(const ClassicalShadow &shadow, const Povm &m, const LossFunction &l);

/// Mean of shadow_loss_single over the dataset, pairwise-summed in index
/// order for bit-stable results.
double shadow_empirical_loss(const ShadowDataset &ds, const Povm &m, const LossFunction &l);

/// Single-qubit estimate factor 3|v><v| - I for a PauliTensor snapshot slot;
/// the full estimate is the tensor product of the per-qubit factors.
ComplexMatrix shadow_factor_matrix(int basis, int outcome);

/// Text persistence: a JSON header line followed by one tab-separated record
/// per shadow (index, unitary_id, outcome, label). Dense matrices are
/// recomputed on load.
void save_shadow_dataset(const std::string &path, const ShadowDataset &ds);
ShadowDataset load_shadow_dataset(const std::string &path, const UnitaryEnsemble &ens);

} // namespace qpac
