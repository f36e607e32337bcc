#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpac/concept_class.hpp"
#include "qpac/loss.hpp"
#include "qpac/quantum_model.hpp"
#include "qpac/shadow.hpp"

namespace qpac {

struct LearnerOutput {
    std::string chosen_id;
    std::map<std::string, double> empirical_losses;
    std::size_t n_used = 0;
    std::optional<EnsembleKind> ensemble;
    std::uint64_t seed = 0;
};

/// Shadow risk minimization: one classical shadow per training sample, the
/// same dataset scored against every extreme-point member, argmin returned.
/// Ties break to the lexicographically smallest id. Every sample is consumed
/// exactly once.
LearnerOutput qsrm_learn(const ConceptClass &parent, const ExtremePointSet &cstar,
                         std::vector<LabeledSample> &samples, const UnitaryEnsemble &ens,
                         const LossFunction &l, std::uint64_t seed, unsigned threads = 1);

/// The fresh-samples baseline: samples are split round-robin into one block
/// per concept (block j gets indices i with i mod |C| = j); block j is
/// measured with concept j's loss observable and the block means compete.
LearnerOutput naive_qerm_learn(const ConceptClass &c, std::vector<LabeledSample> &samples,
                               const LossFunction &l, std::uint64_t seed);

/// Sample size sufficient for the (epsilon, delta) guarantee:
/// ceil(constant * 4 max(v, v_floor) / (epsilon/2)^2
///      * ln(2 * size_cstar * label_factor / delta)).
/// The 4 comes from the variance denominator of the tail bound, the 2 from
/// its prefactor, and epsilon/2 from the argmin comparison chain.
std::int64_t theorem1_sample_size(double v_cstar, std::size_t size_cstar, double epsilon,
                                  double delta, double constant = 1.0, double v_floor = 1e-6,
                                  double label_factor = 1.0);

enum class LearnerKind { Qsrm, NaiveQerm };

struct PacTrialReport {
    std::size_t trials = 0;
    double epsilon = 0;
    double delta = 0;
    std::size_t success_count = 0;
    double opt_value = 0;
    std::vector<double> excess_losses; // one per trial
    std::vector<std::string> chosen_ids;

    double success_fraction() const {
        return trials == 0 ? 0.0
                           : static_cast<double>(success_count) / static_cast<double>(trials);
    }
};

/// Repeated independent learning runs with fresh samples; success means the
/// exact loss of the returned measurement is within epsilon of the optimum
/// over the extreme points.
PacTrialReport pac_evaluate(LearnerKind learner, const ConceptClass &c,
                            const LabeledStateSource &source, const LossFunction &l,
                            const UnitaryEnsemble &ens, std::size_t n, double epsilon,
                            std::size_t trials, std::uint64_t seed, double delta = 0.0,
                            unsigned threads = 1);

} // namespace qpac
