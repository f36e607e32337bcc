#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qpac/complex_matrix.hpp"
#include "qpac/rng.hpp"

namespace qpac {

/// Normalized state vector on a 2^d-dimensional space.
class PureState {
  public:
    explicit PureState(std::vector<Complex> amplitudes);

    std::size_t dim() const { return amplitudes_.size(); }
    const std::vector<Complex> &amplitudes() const { return amplitudes_; }

    /// Rank-1 projector |psi><psi|.
    ComplexMatrix projector() const;

    static PureState basis_state(std::size_t dim, std::size_t index);

  private:
    std::vector<Complex> amplitudes_;
};

/// Trace-1 positive semidefinite operator.
class DensityOperator {
  public:
    explicit DensityOperator(HermitianOperator op);

    static DensityOperator from_pure(const PureState &state);

    const HermitianOperator &op() const { return op_; }
    const ComplexMatrix &matrix() const { return op_.matrix(); }
    std::size_t dim() const { return op_.dim(); }

  private:
    HermitianOperator op_;
};

/// Labeled family of positive effects summing to identity.
class Povm {
  public:
    Povm(std::vector<int> outcomes, std::vector<HermitianOperator> effects);

    std::size_t size() const { return outcomes_.size(); }
    std::size_t dim() const { return effects_.front().dim(); }
    const std::vector<int> &outcomes() const { return outcomes_; }
    const std::vector<HermitianOperator> &effects() const { return effects_; }
    const HermitianOperator &effect(std::size_t i) const { return effects_[i]; }
    int outcome(std::size_t i) const { return outcomes_[i]; }

    /// Index of a label among the outcomes; throws LabelDomainError if absent.
    std::size_t outcome_index(int label) const;

    /// Effectwise convex combination sum_i weights[i] * povms[i].
    static Povm mix(const std::vector<const Povm *> &povms, const std::vector<double> &weights);

  private:
    std::vector<int> outcomes_;
    std::vector<HermitianOperator> effects_;
};

struct SourceAtom {
    double probability;
    PureState state;
    int label;
};

/// Finite-support distribution over labeled pure states.
class LabeledStateSource {
  public:
    LabeledStateSource(std::vector<SourceAtom> atoms, std::uint64_t rng_seed);

    const std::vector<SourceAtom> &atoms() const { return atoms_; }
    std::uint64_t rng_seed() const { return rng_seed_; }
    std::size_t dim() const { return atoms_.front().state.dim(); }

    /// Distinct labels appearing in the atoms, ascending.
    std::vector<int> labels() const;

    /// Atom index drawn with the atom probabilities.
    std::size_t sample_atom(RngStream &rng) const;

  private:
    std::vector<SourceAtom> atoms_;
    std::uint64_t rng_seed_;
};

/// One training sample. Move-only: a quantum sample cannot be duplicated, and
/// measuring it collapses it, so consumption is recorded and enforced.
class LabeledSample {
  public:
    LabeledSample(PureState state, int label) : state_(std::move(state)), label_(label) {}

    LabeledSample(const LabeledSample &) = delete;
    LabeledSample &operator=(const LabeledSample &) = delete;
    LabeledSample(LabeledSample &&other) noexcept
        : state_(std::move(other.state_)), label_(other.label_),
          consumed_(std::exchange(other.consumed_, true)) {}
    LabeledSample &operator=(LabeledSample &&other) noexcept {
        state_ = std::move(other.state_);
        label_ = other.label_;
        consumed_ = std::exchange(other.consumed_, true);
        return *this;
    }

    const PureState &state() const { return state_; }
    int label() const { return label_; }
    bool consumed() const { return consumed_; }

    /// Mark the sample as measured; throws SampleReuseError the second time.
    void consume();

  private:
    PureState state_;
    int label_;
    bool consumed_ = false;
};

/// n iid draws. Sample i uses the stream derived from (seed, SampleDraw, i),
/// so serial and parallel generation agree and two calls with one seed match.
std::vector<LabeledSample> draw_samples(const LabeledStateSource &source, std::size_t n);

/// Same, but with an explicit seed in place of the source's own. Trial
/// harnesses use this to get fresh draws per trial.
std::vector<LabeledSample> draw_samples(const LabeledStateSource &source, std::size_t n,
                                        std::uint64_t seed);

/// Born-rule measurement: outcome v with probability tr(M_v rho). Outcome
/// probabilities are clamped to [0,1] and renormalized when the total is
/// within BORN_TOTAL_TOL of 1; otherwise InvalidPovmError.
int born_measure(const Povm &m, const DensityOperator &rho, RngStream &rng);

/// Same measurement on a pure state without forming the density matrix.
int born_measure(const Povm &m, const PureState &state, RngStream &rng);

/// The mixed state sum_atoms p * |phi><phi| (x) |y><y| on the joint
/// (state (x) label-register) space. label_count 0 means 1 + max label.
DensityOperator joint_state(const LabeledStateSource &source, std::size_t label_count = 0);

} // namespace qpac
