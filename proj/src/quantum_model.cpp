#include "qpac/quantum_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qpac/errors.hpp"
#include "qpac/tolerances.hpp"

namespace qpac {

PureState::PureState(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty())
        throw ValidationError("PureState: empty amplitude vector");
    double norm2 = 0.0;
    for (const Complex &a : amplitudes_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw NumericalError("PureState: non-finite amplitude");
        norm2 += std::norm(a);
    }
    if (std::abs(std::sqrt(norm2) - 1.0) > tol::STATE_NORM_TOL)
        throw ValidationError("PureState: vector is not normalized");
}

ComplexMatrix PureState::projector() const {
    ComplexMatrix p(dim(), dim());
    p.add_outer_product(amplitudes_.data(), 1.0);
    return p;
}

PureState PureState::basis_state(std::size_t dim, std::size_t index) {
    if (index >= dim)
        throw RangeError("basis_state: index out of range");
    std::vector<Complex> amp(dim, Complex(0.0, 0.0));
    amp[index] = Complex(1.0, 0.0);
    return PureState(std::move(amp));
}

DensityOperator::DensityOperator(HermitianOperator op) : op_(std::move(op)) {
    if (std::abs(op_.matrix().trace() - Complex(1.0, 0.0)) > tol::TRACE_TOL)
        throw ValidationError("DensityOperator: trace is not 1");
    if (min_eigenvalue(op_) < -tol::PSD_TOL)
        throw ValidationError("DensityOperator: operator is not positive semidefinite");
}

DensityOperator DensityOperator::from_pure(const PureState &state) {
    return DensityOperator(HermitianOperator(state.projector()));
}

Povm::Povm(std::vector<int> outcomes, std::vector<HermitianOperator> effects)
    : outcomes_(std::move(outcomes)), effects_(std::move(effects)) {
    if (outcomes_.empty() || outcomes_.size() != effects_.size())
        throw ValidationError("Povm: outcomes and effects must be nonempty and match");
    const std::size_t d = effects_.front().dim();
    ComplexMatrix sum(d, d);
    for (std::size_t i = 0; i < effects_.size(); ++i) {
        if (effects_[i].dim() != d)
            throw DimensionError("Povm: effects have mixed dimensions");
        if (min_eigenvalue(effects_[i]) < -tol::PSD_TOL)
            throw ValidationError("Povm: effect is not positive semidefinite");
        sum += effects_[i].matrix();
    }
    if (!sum.approx_equal(ComplexMatrix::identity(d), tol::POVM_SUM_TOL))
        throw ValidationError("Povm: effects do not sum to identity");
    std::set<int> seen(outcomes_.begin(), outcomes_.end());
    if (seen.size() != outcomes_.size())
        throw ValidationError("Povm: duplicate outcome labels");
}

std::size_t Povm::outcome_index(int label) const {
    for (std::size_t i = 0; i < outcomes_.size(); ++i)
        if (outcomes_[i] == label)
            return i;
    throw LabelDomainError("Povm: label is not an outcome");
}

Povm Povm::mix(const std::vector<const Povm *> &povms, const std::vector<double> &weights) {
    if (povms.empty() || povms.size() != weights.size())
        throw ValidationError("Povm::mix: need matching nonempty povms and weights");
    const Povm &first = *povms.front();
    std::vector<HermitianOperator> effects;
    effects.reserve(first.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        ComplexMatrix acc(first.dim(), first.dim());
        for (std::size_t j = 0; j < povms.size(); ++j) {
            if (povms[j]->outcomes() != first.outcomes())
                throw LabelDomainError("Povm::mix: outcome sets differ");
            acc += povms[j]->effect(i).matrix().scaled(weights[j]);
        }
        effects.emplace_back(std::move(acc));
    }
    return Povm(first.outcomes(), std::move(effects));
}

LabeledStateSource::LabeledStateSource(std::vector<SourceAtom> atoms, std::uint64_t rng_seed)
    : atoms_(std::move(atoms)), rng_seed_(rng_seed) {
    if (atoms_.empty())
        throw ValidationError("LabeledStateSource: no atoms");
    const std::size_t d = atoms_.front().state.dim();
    double total = 0.0;
    for (const SourceAtom &a : atoms_) {
        if (a.probability < 0.0)
            throw ValidationError("LabeledStateSource: negative probability");
        if (a.state.dim() != d)
            throw DimensionError("LabeledStateSource: atoms have mixed dimensions");
        if (a.label < 0)
            throw ValidationError("LabeledStateSource: labels must be nonnegative");
        total += a.probability;
    }
    if (std::abs(total - 1.0) > tol::PROB_SUM_TOL)
        throw ValidationError("LabeledStateSource: probabilities do not sum to 1");
}

std::vector<int> LabeledStateSource::labels() const {
    std::set<int> s;
    for (const SourceAtom &a : atoms_)
        s.insert(a.label);
    return std::vector<int>(s.begin(), s.end());
}

std::size_t LabeledStateSource::sample_atom(RngStream &rng) const {
    const double u = rng.uniform01();
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < atoms_.size(); ++i) {
        cum += atoms_[i].probability;
        if (u < cum)
            return i;
    }
    return atoms_.size() - 1;
}

void LabeledSample::consume() {
    if (consumed_)
        throw SampleReuseError("LabeledSample: sample already measured (state collapsed)");
    consumed_ = true;
}

std::vector<LabeledSample> draw_samples(const LabeledStateSource &source, std::size_t n) {
    return draw_samples(source, n, source.rng_seed());
}

std::vector<LabeledSample> draw_samples(const LabeledStateSource &source, std::size_t n,
                                        std::uint64_t seed) {
    if (n == 0)
        throw RangeError("draw_samples: n must be at least 1");
    std::vector<LabeledSample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream rng(seed, StreamDomain::SampleDraw, i);
        const SourceAtom &atom = source.atoms()[source.sample_atom(rng)];
        out.emplace_back(atom.state, atom.label);
    }
    return out;
}

namespace {

int born_sample(const Povm &m, const std::vector<double> &raw, RngStream &rng) {
    double total = 0.0;
    std::vector<double> probs(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        probs[i] = std::clamp(raw[i], 0.0, 1.0);
        total += probs[i];
    }
    if (std::abs(total - 1.0) > tol::BORN_TOTAL_TOL)
        throw InvalidPovmError("born_measure: outcome probabilities do not sum to 1");
    for (double &p : probs)
        p /= total;
    return m.outcome(rng.discrete(probs));
}

} // namespace

int born_measure(const Povm &m, const DensityOperator &rho, RngStream &rng) {
    if (m.dim() != rho.dim())
        throw DimensionError("born_measure: dimension mismatch");
    std::vector<double> raw(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        raw[i] = trace_product(m.effect(i).matrix(), rho.matrix()).real();
    return born_sample(m, raw, rng);
}

int born_measure(const Povm &m, const PureState &state, RngStream &rng) {
    if (m.dim() != state.dim())
        throw DimensionError("born_measure: dimension mismatch");
    std::vector<double> raw(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        raw[i] = quadratic_form(m.effect(i).matrix(), state.amplitudes().data());
    return born_sample(m, raw, rng);
}

DensityOperator joint_state(const LabeledStateSource &source, std::size_t label_count) {
    int max_label = 0;
    for (const SourceAtom &a : source.atoms())
        max_label = std::max(max_label, a.label);
    const std::size_t labels = label_count == 0 ? static_cast<std::size_t>(max_label) + 1
                                                : label_count;
    if (static_cast<std::size_t>(max_label) >= labels)
        throw LabelDomainError("joint_state: label register too small for source labels");
    const std::size_t d = source.dim();
    ComplexMatrix acc(d * labels, d * labels);
    for (const SourceAtom &a : source.atoms()) {
        const ComplexMatrix proj = a.state.projector();
        ComplexMatrix reg(labels, labels);
        reg(static_cast<std::size_t>(a.label), static_cast<std::size_t>(a.label)) =
            Complex(1.0, 0.0);
        acc += tensor_product(proj, reg).scaled(a.probability);
    }
    return DensityOperator(HermitianOperator(std::move(acc)));
}

} // namespace qpac
