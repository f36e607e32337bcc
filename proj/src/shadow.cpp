#include "qpac/shadow.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>

#include "qpac/clifford.hpp"
#include "qpac/errors.hpp"
#include "qpac/parallel.hpp"
#include "qpac/pauli.hpp"
#include "qpac/tolerances.hpp"
#include "qpac/version.hpp"

namespace qpac {

std::string ensemble_kind_name(EnsembleKind kind) {
    switch (kind) {
    case EnsembleKind::PauliTensor:
        return "pauli";
    case EnsembleKind::CliffordExact:
        return "clifford_exact";
    case EnsembleKind::CliffordSampled:
        return "clifford_sampled";
    case EnsembleKind::Custom:
        return "custom";
    }
    throw RangeError("ensemble_kind_name: unknown kind");
}

EnsembleKind ensemble_kind_from_name(const std::string &name) {
    if (name == "pauli")
        return EnsembleKind::PauliTensor;
    if (name == "clifford_exact")
        return EnsembleKind::CliffordExact;
    if (name == "clifford_sampled")
        return EnsembleKind::CliffordSampled;
    if (name == "custom")
        return EnsembleKind::Custom;
    throw ConfigError("unknown ensemble kind: " + name);
}

namespace {

int qubit_count_for_dim(std::size_t dim) {
    int q = 0;
    std::size_t d = 1;
    while (d < dim) {
        d <<= 1;
        ++q;
    }
    return d == dim ? q : 0;
}

// Row-major flattening; tr(A^dag B) is the plain inner product of the
// flattened entries, which is what the channel Gram matrix below relies on.
void flatten_outer_accumulate(ComplexMatrix &gram, const std::vector<Complex> &flat,
                              double weight) {
    const std::size_t n = flat.size();
    for (std::size_t r = 0; r < n; ++r) {
        const Complex wr = weight * flat[r];
        for (std::size_t c = 0; c < n; ++c)
            gram(r, c) += wr * std::conj(flat[c]);
    }
}

std::vector<Complex> projector_flat(std::span<const Complex> psi) {
    const std::size_t d = psi.size();
    std::vector<Complex> flat(d * d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            flat[r * d + c] = psi[r] * std::conj(psi[c]);
    return flat;
}

} // namespace

struct UnitaryEnsemble::Impl {
    EnsembleKind kind = EnsembleKind::Custom;
    std::size_t dim = 0;
    int qubits = 0;
    bool complete = false;
    bool strict = true;

    // Enumerated members (CliffordExact points into the static group cache).
    const std::vector<ComplexMatrix> *shared_members = nullptr;
    std::vector<ComplexMatrix> owned_members;
    std::vector<double> weights; // empty means uniform

    ComplexMatrix gram;         // channel matrix on vectorized operators
    ComplexMatrix gram_inverse; // inverse or pseudo-inverse of `gram`

    const std::vector<ComplexMatrix> &members() const {
        return shared_members ? *shared_members : owned_members;
    }

    double weight(std::size_t i) const {
        return weights.empty() ? 1.0 / static_cast<double>(members().size()) : weights[i];
    }

    void for_each_outcome(
        const std::function<void(double, std::span<const Complex>)> &visit) const {
        if (kind == EnsembleKind::PauliTensor) {
            std::size_t strings = 1;
            for (int q = 0; q < qubits; ++q)
                strings *= 3;
            const double w = 1.0 / static_cast<double>(strings);
            std::vector<int> bases(static_cast<std::size_t>(qubits));
            std::vector<Complex> psi(dim);
            for (std::size_t s = 0; s < strings; ++s) {
                std::size_t rem = s;
                for (int q = qubits - 1; q >= 0; --q) {
                    bases[static_cast<std::size_t>(q)] = static_cast<int>(rem % 3);
                    rem /= 3;
                }
                for (std::size_t j = 0; j < dim; ++j) {
                    // Product eigenvector: qubit 0 owns the top bit of j.
                    for (std::size_t r = 0; r < dim; ++r) {
                        Complex amp(1.0, 0.0);
                        for (int q = 0; q < qubits; ++q) {
                            const int jbit = static_cast<int>((j >> (qubits - 1 - q)) & 1);
                            const int rbit = static_cast<int>((r >> (qubits - 1 - q)) & 1);
                            amp *= basis_eigenvector(bases[static_cast<std::size_t>(q)],
                                                     jbit)[static_cast<std::size_t>(rbit)];
                        }
                        psi[r] = amp;
                    }
                    visit(w, std::span<const Complex>(psi.data(), psi.size()));
                }
            }
            return;
        }
        if (kind == EnsembleKind::CliffordExact || kind == EnsembleKind::Custom) {
            const auto &list = members();
            std::vector<Complex> col(dim);
            for (std::size_t u = 0; u < list.size(); ++u) {
                const double w = weight(u);
                for (std::size_t j = 0; j < dim; ++j) {
                    for (std::size_t r = 0; r < dim; ++r)
                        col[r] = list[u](r, j);
                    visit(w, std::span<const Complex>(col.data(), col.size()));
                }
            }
            return;
        }
        throw UnsupportedError("for_each_outcome: ensemble is not enumerable");
    }

    void build_channel_matrices() {
        const std::size_t n = dim * dim;
        gram = ComplexMatrix(n, n);
        for_each_outcome([&](double w, std::span<const Complex> psi) {
            flatten_outer_accumulate(gram, projector_flat(psi), w);
        });

        // Eigendecomposition gives both the completeness check and the
        // (pseudo-)inverse in one pass. The channel matrix is Hermitian PSD.
        using EigenMatrix =
            Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        Eigen::Map<const EigenMatrix> map(gram.data(), static_cast<Eigen::Index>(n),
                                          static_cast<Eigen::Index>(n));
        const Eigen::MatrixXcd dense(map);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
        if (solver.info() != Eigen::Success)
            throw NumericalError("ensemble channel: eigendecomposition failed");
        const auto &vals = solver.eigenvalues();
        const auto &vecs = solver.eigenvectors();
        const double largest = vals(static_cast<Eigen::Index>(n) - 1);
        const double cutoff = tol::COMPLETENESS_TOL * std::max(largest, 1.0);
        complete = vals(0) > cutoff;
        if (!complete && strict)
            throw NotCompleteError("ensemble is not tomographically complete");

        Eigen::VectorXd inv_vals(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i)
            inv_vals(i) = vals(i) > cutoff ? 1.0 / vals(i) : 0.0;
        Eigen::MatrixXcd inv =
            vecs * inv_vals.asDiagonal() * vecs.adjoint();
        gram_inverse = ComplexMatrix(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                gram_inverse(r, c) = inv(static_cast<Eigen::Index>(r),
                                         static_cast<Eigen::Index>(c));
    }
};

UnitaryEnsemble UnitaryEnsemble::pauli_tensor(int qubits) {
    if (qubits < 1 || qubits > 6)
        throw RangeError("pauli_tensor: qubits must be in 1..6");
    auto impl = std::make_shared<Impl>();
    impl->kind = EnsembleKind::PauliTensor;
    impl->qubits = qubits;
    impl->dim = std::size_t{1} << qubits;

    // Completeness holds per qubit and tensors through: check the
    // single-qubit channel matrix has full rank.
    ComplexMatrix gram1(4, 4);
    for (int b = 0; b < 3; ++b)
        for (int out = 0; out < 2; ++out) {
            const auto v = basis_eigenvector(b, out);
            flatten_outer_accumulate(gram1, projector_flat(std::span<const Complex>(v)),
                                     1.0 / 3.0);
        }
    HermitianOperator h(gram1);
    if (min_eigenvalue(h) <= tol::COMPLETENESS_TOL)
        throw NotCompleteError("pauli_tensor: single-qubit channel is rank-deficient");
    impl->complete = true;
    // The dense channel matrix is a test/diagnostic facility; keep it for
    // sizes where it is cheap.
    if (qubits <= 3)
        impl->build_channel_matrices();

    UnitaryEnsemble out;
    out.impl_ = std::move(impl);
    return out;
}

UnitaryEnsemble UnitaryEnsemble::clifford_exact(int qubits) {
    if (qubits != 1 && qubits != 2)
        throw RangeError("clifford_exact: enumerated group available for 1 or 2 qubits");
    auto impl = std::make_shared<Impl>();
    impl->kind = EnsembleKind::CliffordExact;
    impl->qubits = qubits;
    impl->dim = std::size_t{1} << qubits;
    impl->shared_members = &clifford_group_unitaries(qubits);
    for (const ComplexMatrix &u : *impl->shared_members) {
        const ComplexMatrix dev = u.adjoint() * u - ComplexMatrix::identity(impl->dim);
        if (dev.frobenius_norm() > tol::UNITARY_TOL)
            throw ValidationError("clifford_exact: non-unitary group member");
    }
    impl->build_channel_matrices();

    UnitaryEnsemble out;
    out.impl_ = std::move(impl);
    return out;
}

UnitaryEnsemble UnitaryEnsemble::clifford_sampled(int qubits) {
    if (qubits < 1 || qubits > 6)
        throw RangeError("clifford_sampled: qubits must be in 1..6");
    auto impl = std::make_shared<Impl>();
    impl->kind = EnsembleKind::CliffordSampled;
    impl->qubits = qubits;
    impl->dim = std::size_t{1} << qubits;
    impl->complete = true; // uniform Cliffords: closed-form invertible channel

    UnitaryEnsemble out;
    out.impl_ = std::move(impl);
    return out;
}

UnitaryEnsemble UnitaryEnsemble::custom(std::size_t dim,
                                        std::vector<std::pair<double, ComplexMatrix>> members,
                                        bool require_complete) {
    if (dim == 0 || dim > 64)
        throw RangeError("custom ensemble: dim must be in 1..64");
    if (members.empty())
        throw ValidationError("custom ensemble: no members");
    auto impl = std::make_shared<Impl>();
    impl->kind = EnsembleKind::Custom;
    impl->dim = dim;
    impl->qubits = qubit_count_for_dim(dim);
    impl->strict = require_complete;

    double total = 0.0;
    for (auto &[w, u] : members) {
        if (w < 0.0)
            throw ValidationError("custom ensemble: negative weight");
        if (u.rows() != dim || u.cols() != dim)
            throw DimensionError("custom ensemble: member dimension mismatch");
        const ComplexMatrix dev = u.adjoint() * u - ComplexMatrix::identity(dim);
        if (dev.frobenius_norm() > tol::UNITARY_TOL)
            throw ValidationError("custom ensemble: member is not unitary");
        total += w;
        impl->weights.push_back(w);
        impl->owned_members.push_back(std::move(u));
    }
    if (std::abs(total - 1.0) > tol::PROB_SUM_TOL)
        throw ValidationError("custom ensemble: weights must sum to 1");
    impl->build_channel_matrices();

    UnitaryEnsemble out;
    out.impl_ = std::move(impl);
    return out;
}

EnsembleKind UnitaryEnsemble::kind() const { return impl_->kind; }
std::size_t UnitaryEnsemble::dim() const { return impl_->dim; }
int UnitaryEnsemble::qubits() const { return impl_->qubits; }
bool UnitaryEnsemble::complete() const { return impl_->complete; }

bool UnitaryEnsemble::enumerable() const {
    return impl_->kind != EnsembleKind::CliffordSampled;
}

std::size_t UnitaryEnsemble::member_count() const {
    if (impl_->kind == EnsembleKind::PauliTensor) {
        std::size_t s = 1;
        for (int q = 0; q < impl_->qubits; ++q)
            s *= 3;
        return s;
    }
    if (!enumerable())
        throw UnsupportedError("member_count: ensemble is not enumerable");
    return impl_->members().size();
}

void UnitaryEnsemble::for_each_outcome(
    const std::function<void(double, std::span<const Complex>)> &visit) const {
    impl_->for_each_outcome(visit);
}

const ComplexMatrix &UnitaryEnsemble::channel_matrix() const {
    if (impl_->gram.rows() == 0)
        throw UnsupportedError("channel_matrix: not available for this ensemble");
    return impl_->gram;
}

const ComplexMatrix &UnitaryEnsemble::channel_inverse_matrix() const {
    channel_matrix();
    return impl_->gram_inverse;
}

const ComplexMatrix &UnitaryEnsemble::member(std::size_t index) const {
    if (impl_->kind != EnsembleKind::CliffordExact && impl_->kind != EnsembleKind::Custom)
        throw UnsupportedError("member: only enumerated ensembles expose unitaries");
    if (index >= impl_->members().size())
        throw RangeError("member: index out of range");
    return impl_->members()[index];
}

double UnitaryEnsemble::member_weight(std::size_t index) const {
    if (impl_->kind != EnsembleKind::CliffordExact && impl_->kind != EnsembleKind::Custom)
        throw UnsupportedError("member_weight: only enumerated ensembles have weights");
    if (index >= impl_->members().size())
        throw RangeError("member_weight: index out of range");
    return impl_->weight(index);
}

// ---------------------------------------------------------------------------
// Channel application and inverse
// ---------------------------------------------------------------------------

namespace {

ComplexMatrix symmetrize(const ComplexMatrix &m) {
    const ComplexMatrix adj = m.adjoint();
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            out(r, c) = 0.5 * (m(r, c) + adj(r, c));
    return out;
}

bool nearly_hermitian(const ComplexMatrix &m) {
    return (m - m.adjoint()).frobenius_norm() <= 1e-12 * std::max(m.frobenius_norm(), 1.0);
}

ComplexMatrix apply_vectorized(const ComplexMatrix &channel, const ComplexMatrix &o) {
    const std::size_t d = o.rows();
    const std::vector<Complex> &flat = o.entries();
    ComplexMatrix out(d, d);
    for (std::size_t r = 0; r < d * d; ++r) {
        Complex acc(0, 0);
        for (std::size_t c = 0; c < d * d; ++c)
            acc += channel(r, c) * flat[c];
        out(r / d, r % d) = acc;
    }
    return out;
}

void check_operator_dim(const UnitaryEnsemble &ens, const ComplexMatrix &o, const char *who) {
    if (!o.is_square() || o.rows() != ens.dim())
        throw DimensionError(std::string(who) + ": operator dimension mismatch");
}

} // namespace

ComplexMatrix gamma_apply(const UnitaryEnsemble &ens, const ComplexMatrix &o) {
    check_operator_dim(ens, o, "gamma_apply");
    const std::size_t d = ens.dim();
    if (ens.kind() == EnsembleKind::CliffordSampled) {
        // Uniform Cliffords average to the depolarizing closed form.
        ComplexMatrix out = o;
        const Complex tr = o.trace();
        for (std::size_t i = 0; i < d; ++i)
            out(i, i) += tr;
        return out.scaled(1.0 / static_cast<double>(d + 1));
    }
    ComplexMatrix out(d, d);
    ens.for_each_outcome([&](double w, std::span<const Complex> psi) {
        // tr(omega O) can be complex for a non-Hermitian O; the channel is
        // linear over the full operator space.
        const Complex coeff = sesquilinear_form(o, psi.data(), psi.data()) * w;
        for (std::size_t r = 0; r < d; ++r) {
            const Complex wr = coeff * psi[r];
            for (std::size_t c = 0; c < d; ++c)
                out(r, c) += wr * std::conj(psi[c]);
        }
    });
    return out;
}

HermitianOperator gamma_apply(const UnitaryEnsemble &ens, const HermitianOperator &o) {
    return HermitianOperator(symmetrize(gamma_apply(ens, o.matrix())));
}

ComplexMatrix gamma_inverse(const UnitaryEnsemble &ens, const ComplexMatrix &o) {
    check_operator_dim(ens, o, "gamma_inverse");
    const std::size_t d = ens.dim();
    switch (ens.kind()) {
    case EnsembleKind::PauliTensor: {
        // Factorwise closed form: 3 X - (Tr_q X) (x) I_q on every qubit.
        ComplexMatrix acc = o;
        for (int q = 0; q < ens.qubits(); ++q) {
            const ComplexMatrix traced = partial_trace_embed(acc, ens.qubits(), q);
            acc = acc.scaled(3.0) - traced;
        }
        return acc;
    }
    case EnsembleKind::CliffordSampled: {
        ComplexMatrix out = o.scaled(static_cast<double>(d + 1));
        const Complex tr = o.trace();
        for (std::size_t i = 0; i < d; ++i)
            out(i, i) -= tr;
        return out;
    }
    case EnsembleKind::CliffordExact:
    case EnsembleKind::Custom: {
        // A strict incomplete ensemble cannot be constructed, so reaching an
        // incomplete channel here means the caller opted into the
        // pseudo-inverse at construction.
        ComplexMatrix result = apply_vectorized(ens.channel_inverse_matrix(), o);
        // The inverse preserves Hermiticity; scrub the rounding residue.
        return nearly_hermitian(o) ? symmetrize(result) : result;
    }
    }
    throw UnsupportedError("gamma_inverse: unknown ensemble kind");
}

HermitianOperator gamma_inverse(const UnitaryEnsemble &ens, const HermitianOperator &o) {
    return HermitianOperator(gamma_inverse(ens, o.matrix()));
}

// ---------------------------------------------------------------------------
// Shadow generation
// ---------------------------------------------------------------------------

namespace {

// Sample an outcome from |<psi_j|phi>|^2 given the amplitudes in the rotated
// basis. Probabilities are renormalized against harmless rounding drift.
std::size_t sample_outcome(std::span<const double> probs, RngStream &rng) {
    return rng.discrete(probs);
}

std::vector<double> outcome_probs_from_columns(const ComplexMatrix &u,
                                               const std::vector<Complex> &phi) {
    const std::size_t d = u.rows();
    std::vector<double> probs(d);
    for (std::size_t j = 0; j < d; ++j) {
        Complex amp(0, 0);
        for (std::size_t r = 0; r < d; ++r)
            amp += std::conj(u(r, j)) * phi[r];
        probs[j] = std::norm(amp);
    }
    return probs;
}

ComplexMatrix pauli_estimate_matrix(const std::vector<int> &bases, std::size_t outcome,
                                    int qubits) {
    ComplexMatrix acc(1, 1);
    acc(0, 0) = Complex(1, 0);
    for (int q = 0; q < qubits; ++q) {
        const int bit = static_cast<int>((outcome >> (qubits - 1 - q)) & 1);
        acc = tensor_product(acc, shadow_factor_matrix(bases[static_cast<std::size_t>(q)], bit));
    }
    return acc;
}

ClassicalShadow make_shadow(ShadowSnapshot snapshot, ComplexMatrix estimate, int label) {
    HermitianOperator h(std::move(estimate));
    if (std::abs(h.matrix().trace() - Complex(1.0, 0.0)) > 1e-9)
        throw NumericalError("classical shadow: estimate trace deviates from 1");
    return ClassicalShadow{std::move(snapshot), std::move(h), label};
}

ClassicalShadow shadow_from_snapshot(const UnitaryEnsemble &ens, const ShadowSnapshot &snap,
                                     int label) {
    const std::size_t d = ens.dim();
    if (snap.outcome >= d)
        throw RangeError("shadow: outcome index out of range");
    switch (ens.kind()) {
    case EnsembleKind::PauliTensor: {
        if (snap.unitary_id.size() != static_cast<std::size_t>(ens.qubits()))
            throw ValidationError("shadow: basis string length mismatch");
        std::vector<int> bases;
        bases.reserve(snap.unitary_id.size());
        for (char c : snap.unitary_id)
            bases.push_back(basis_from_letter(c));
        return make_shadow(snap, pauli_estimate_matrix(bases, snap.outcome, ens.qubits()),
                           label);
    }
    case EnsembleKind::CliffordExact:
    case EnsembleKind::Custom: {
        std::size_t index = 0;
        try {
            index = std::stoull(snap.unitary_id);
        } catch (const std::exception &) {
            throw ValidationError("shadow: malformed member index: " + snap.unitary_id);
        }
        const ComplexMatrix &u = ens.member(index);
        std::vector<Complex> col(d);
        for (std::size_t r = 0; r < d; ++r)
            col[r] = u(r, snap.outcome);
        ComplexMatrix omega(d, d);
        omega.add_outer_product(col.data(), 1.0);
        return make_shadow(snap, gamma_inverse(ens, omega), label);
    }
    case EnsembleKind::CliffordSampled: {
        const SampledClifford sc = SampledClifford::decode(snap.unitary_id);
        const ComplexMatrix u = sampled_clifford_unitary(ens.qubits(), sc);
        std::vector<Complex> col(d);
        for (std::size_t r = 0; r < d; ++r)
            col[r] = u(r, snap.outcome);
        ComplexMatrix estimate(d, d);
        estimate.add_outer_product(col.data(), static_cast<double>(d + 1));
        for (std::size_t i = 0; i < d; ++i)
            estimate(i, i) -= Complex(1.0, 0.0);
        return make_shadow(snap, std::move(estimate), label);
    }
    }
    throw UnsupportedError("shadow: unknown ensemble kind");
}

} // namespace

ComplexMatrix shadow_factor_matrix(int basis, int outcome) {
    const auto v = basis_eigenvector(basis, outcome);
    ComplexMatrix f(2, 2);
    f.add_outer_product(v.data(), 3.0);
    f(0, 0) -= Complex(1.0, 0.0);
    f(1, 1) -= Complex(1.0, 0.0);
    return f;
}

ClassicalShadow generate_shadow(const UnitaryEnsemble &ens, LabeledSample &sample,
                                RngStream &rng) {
    if (sample.state().dim() != ens.dim())
        throw DimensionError("generate_shadow: sample and ensemble dimensions differ");
    sample.consume();
    const std::size_t d = ens.dim();
    const std::vector<Complex> &phi = sample.state().amplitudes();

    switch (ens.kind()) {
    case EnsembleKind::PauliTensor: {
        const int qubits = ens.qubits();
        std::vector<int> bases(static_cast<std::size_t>(qubits));
        std::string id(static_cast<std::size_t>(qubits), 'Z');
        for (int q = 0; q < qubits; ++q) {
            bases[static_cast<std::size_t>(q)] = static_cast<int>(rng.uniform_index(3));
            id[static_cast<std::size_t>(q)] = basis_letter(bases[static_cast<std::size_t>(q)]);
        }
        // Rotate into the measurement basis one qubit at a time.
        std::vector<Complex> amps = phi;
        for (int q = 0; q < qubits; ++q) {
            const auto v0 = basis_eigenvector(bases[static_cast<std::size_t>(q)], 0);
            const auto v1 = basis_eigenvector(bases[static_cast<std::size_t>(q)], 1);
            const std::size_t stride = std::size_t{1} << (qubits - 1 - q);
            for (std::size_t block = 0; block < d; block += 2 * stride) {
                for (std::size_t off = 0; off < stride; ++off) {
                    const Complex a = amps[block + off];
                    const Complex b = amps[block + off + stride];
                    amps[block + off] = std::conj(v0[0]) * a + std::conj(v0[1]) * b;
                    amps[block + off + stride] = std::conj(v1[0]) * a + std::conj(v1[1]) * b;
                }
            }
        }
        std::vector<double> probs(d);
        for (std::size_t j = 0; j < d; ++j)
            probs[j] = std::norm(amps[j]);
        const std::size_t outcome = sample_outcome(probs, rng);
        return make_shadow(ShadowSnapshot{id, outcome},
                           pauli_estimate_matrix(bases, outcome, qubits), sample.label());
    }
    case EnsembleKind::CliffordExact:
    case EnsembleKind::Custom: {
        const std::size_t count = ens.member_count();
        std::size_t index;
        if (ens.kind() == EnsembleKind::CliffordExact) {
            index = rng.uniform_index(count);
        } else {
            std::vector<double> w(count);
            for (std::size_t i = 0; i < count; ++i)
                w[i] = ens.member_weight(i);
            index = rng.discrete(w);
        }
        const ComplexMatrix &u = ens.member(index);
        const auto probs = outcome_probs_from_columns(u, phi);
        const std::size_t outcome = sample_outcome(probs, rng);
        return shadow_from_snapshot(ens, ShadowSnapshot{std::to_string(index), outcome},
                                    sample.label());
    }
    case EnsembleKind::CliffordSampled: {
        const SampledClifford sc = draw_sampled_clifford(ens.qubits(), rng);
        const ComplexMatrix u = sampled_clifford_unitary(ens.qubits(), sc);
        const auto probs = outcome_probs_from_columns(u, phi);
        const std::size_t outcome = sample_outcome(probs, rng);
        return shadow_from_snapshot(ens, ShadowSnapshot{sc.encode(), outcome}, sample.label());
    }
    }
    throw UnsupportedError("generate_shadow: unknown ensemble kind");
}

ShadowDataset generate_dataset(const UnitaryEnsemble &ens, std::vector<LabeledSample> &samples,
                               std::uint64_t seed, unsigned threads) {
    if (samples.empty())
        throw EmptyInputError("generate_dataset: no samples");
    ShadowDataset ds;
    ds.meta = ShadowDatasetMeta{seed, ens.kind(), ens.dim(), samples.size()};
    ds.shadows.reserve(samples.size());
    std::vector<std::optional<ClassicalShadow>> slots(samples.size());
    parallel_for(samples.size(), threads, [&](std::size_t i) {
        RngStream rng(seed, StreamDomain::ShadowUnitary, i);
        slots[i] = generate_shadow(ens, samples[i], rng);
    });
    for (auto &slot : slots)
        ds.shadows.push_back(std::move(*slot));
    return ds;
}

ClassicalShadow reconstruct_shadow(const UnitaryEnsemble &ens, const ShadowSnapshot &snapshot,
                                   int label) {
    return shadow_from_snapshot(ens, snapshot, label);
}

double shadow_loss_single(const ClassicalShadow &shadow, const Povm &m, const LossFunction &l) {
    const HermitianOperator cond = conditional_loss_operator(m, l, shadow.label);
    return trace_product(cond.matrix(), shadow.matrix.matrix()).real();
}

double shadow_empirical_loss(const ShadowDataset &ds, const Povm &m, const LossFunction &l) {
    if (ds.shadows.empty())
        throw EmptyDatasetError("shadow_empirical_loss: empty dataset");
    // One conditional operator per label, reused across the dataset.
    std::map<int, ComplexMatrix> cond;
    std::vector<double> terms(ds.shadows.size());
    for (std::size_t i = 0; i < ds.shadows.size(); ++i) {
        const ClassicalShadow &s = ds.shadows[i];
        auto it = cond.find(s.label);
        if (it == cond.end())
            it = cond.emplace(s.label, conditional_loss_operator(m, l, s.label).matrix()).first;
        terms[i] = trace_product(it->second, s.matrix.matrix()).real();
    }
    return pairwise_sum(terms) / static_cast<double>(ds.shadows.size());
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

void save_shadow_dataset(const std::string &path, const ShadowDataset &ds) {
    std::ofstream out(path);
    if (!out)
        throw IoError("save_shadow_dataset: cannot open " + path);
    out << "{\"version\":\"" << QPAC_VERSION << "\",\"dim\":" << ds.meta.dim
        << ",\"ensemble\":\"" << ensemble_kind_name(ds.meta.ensemble)
        << "\",\"seed\":" << ds.meta.seed << ",\"n\":" << ds.meta.n << "}\n";
    for (std::size_t i = 0; i < ds.shadows.size(); ++i) {
        const ClassicalShadow &s = ds.shadows[i];
        out << i << '\t' << s.snapshot.unitary_id << '\t' << s.snapshot.outcome << '\t'
            << s.label << '\n';
    }
    if (!out)
        throw IoError("save_shadow_dataset: write failed for " + path);
}

ShadowDataset load_shadow_dataset(const std::string &path, const UnitaryEnsemble &ens) {
    std::ifstream in(path);
    if (!in)
        throw IoError("load_shadow_dataset: cannot open " + path);
    std::string header;
    if (!std::getline(in, header))
        throw IoError("load_shadow_dataset: missing header");

    auto field = [&](const std::string &key) -> std::string {
        const std::string quoted = "\"" + key + "\":";
        const auto at = header.find(quoted);
        if (at == std::string::npos)
            throw IoError("load_shadow_dataset: header missing field " + key);
        std::size_t start = at + quoted.size();
        std::size_t end = start;
        if (header[start] == '"') {
            ++start;
            end = header.find('"', start);
        } else {
            end = header.find_first_of(",}", start);
        }
        return header.substr(start, end - start);
    };

    ShadowDataset ds;
    ds.meta.dim = std::stoull(field("dim"));
    ds.meta.ensemble = ensemble_kind_from_name(field("ensemble"));
    ds.meta.seed = std::stoull(field("seed"));
    ds.meta.n = std::stoull(field("n"));
    if (ds.meta.dim != ens.dim() || ds.meta.ensemble != ens.kind())
        throw ValidationError("load_shadow_dataset: ensemble does not match the header");

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream row(line);
        std::size_t index, outcome;
        std::string unitary_id;
        int label;
        if (!(row >> index >> unitary_id >> outcome >> label))
            throw IoError("load_shadow_dataset: malformed record: " + line);
        ds.shadows.push_back(reconstruct_shadow(ens, ShadowSnapshot{unitary_id, outcome}, label));
    }
    if (ds.shadows.size() != ds.meta.n)
        throw ValidationError("load_shadow_dataset: record count does not match header n");
    return ds;
}

} // namespace qpac
