#include "qpac/qsrm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qpac/errors.hpp"
#include "qpac/parallel.hpp"
#include "qpac/rng.hpp"

namespace qpac {

namespace {

std::string argmin_by_id(const std::map<std::string, double> &losses) {
    // std::map iterates ids in lexicographic order; strict less keeps the
    // first of any tie.
    std::string best_id;
    double best = std::numeric_limits<double>::infinity();
    for (const auto &[id, loss] : losses) {
        if (loss < best) {
            best = loss;
            best_id = id;
        }
    }
    return best_id;
}

} // namespace

LearnerOutput qsrm_learn(const ConceptClass &parent, const ExtremePointSet &cstar,
                         std::vector<LabeledSample> &samples, const UnitaryEnsemble &ens,
                         const LossFunction &l, std::uint64_t seed, unsigned threads) {
    if (samples.empty())
        throw EmptyInputError("qsrm_learn: no samples");
    if (cstar.size() == 0)
        throw EmptyInputError("qsrm_learn: empty extreme-point set");

    const ShadowDataset ds = generate_dataset(ens, samples, seed, threads);

    LearnerOutput out;
    out.n_used = samples.size();
    out.ensemble = ens.kind();
    out.seed = seed;
    for (std::size_t k = 0; k < cstar.size(); ++k) {
        const Povm &m = parent.member(cstar.member_indices[k]);
        out.empirical_losses[cstar.ids[k]] = shadow_empirical_loss(ds, m, l);
    }
    out.chosen_id = argmin_by_id(out.empirical_losses);
    return out;
}

LearnerOutput naive_qerm_learn(const ConceptClass &c, std::vector<LabeledSample> &samples,
                               const LossFunction &l, std::uint64_t seed) {
    if (samples.empty())
        throw EmptyInputError("naive_qerm_learn: no samples");
    if (samples.size() < c.size())
        throw InsufficientSamplesError("naive_qerm_learn: need at least one sample per concept");

    const std::size_t k = c.size();
    std::vector<LossObservable> observables;
    std::vector<Povm> loss_povms;
    observables.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        observables.push_back(build_loss_observable(c.member(j), l, l.labels()));
        loss_povms.push_back(observables.back().as_povm());
    }

    const std::size_t label_count = l.labels().size();
    std::vector<std::vector<double>> block_values(k);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::size_t j = i % k; // round-robin block assignment
        LabeledSample &sample = samples[i];
        sample.consume();
        // Joint pure state |phi> (x) |y> for the loss-observable measurement.
        const std::vector<Complex> &phi = sample.state().amplitudes();
        const std::size_t y_index = l.label_index(sample.label());
        std::vector<Complex> joint(phi.size() * label_count, Complex(0, 0));
        for (std::size_t r = 0; r < phi.size(); ++r)
            joint[r * label_count + y_index] = phi[r];
        RngStream rng(seed, StreamDomain::BornMeasure, i);
        const PureState joint_state_vec{std::move(joint)};
        const int value_index = born_measure(loss_povms[j], joint_state_vec, rng);
        block_values[j].push_back(observables[j].values[static_cast<std::size_t>(value_index)]);
    }

    LearnerOutput out;
    out.n_used = samples.size();
    out.seed = seed;
    for (std::size_t j = 0; j < k; ++j) {
        const auto &vals = block_values[j];
        out.empirical_losses[c.id(j)] =
            pairwise_sum(vals) / static_cast<double>(vals.size());
    }
    out.chosen_id = argmin_by_id(out.empirical_losses);
    return out;
}

std::int64_t theorem1_sample_size(double v_cstar, std::size_t size_cstar, double epsilon,
                                  double delta, double constant, double v_floor,
                                  double label_factor) {
    if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0))
        throw RangeError("theorem1_sample_size: epsilon and delta must lie in (0, 1)");
    if (v_cstar < 0.0)
        throw RangeError("theorem1_sample_size: v_cstar must be nonnegative");
    if (size_cstar == 0)
        throw RangeError("theorem1_sample_size: size_cstar must be positive");
    const double v = std::max(v_cstar, v_floor);
    const double half = epsilon / 2.0;
    const double log_arg = 2.0 * static_cast<double>(size_cstar) * label_factor / delta;
    const double raw = constant * 4.0 * v / (half * half) * std::log(log_arg);
    return static_cast<std::int64_t>(std::ceil(raw));
}

PacTrialReport pac_evaluate(LearnerKind learner, const ConceptClass &c,
                            const LabeledStateSource &source, const LossFunction &l,
                            const UnitaryEnsemble &ens, std::size_t n, double epsilon,
                            std::size_t trials, std::uint64_t seed, double delta,
                            unsigned threads) {
    if (trials == 0)
        throw RangeError("pac_evaluate: trials must be at least 1");

    const ExtremePointSet cstar = extreme_points(c);
    double opt = std::numeric_limits<double>::infinity();
    for (std::size_t idx : cstar.member_indices)
        opt = std::min(opt, expected_loss(c.member(idx), l, source));

    PacTrialReport report;
    report.trials = trials;
    report.epsilon = epsilon;
    report.delta = delta;
    report.opt_value = opt;
    report.excess_losses.assign(trials, 0.0);
    report.chosen_ids.assign(trials, "");

    parallel_for(trials, threads, [&](std::size_t t) {
        const std::uint64_t trial_seed = derive_stream(seed, StreamDomain::Trial, t);
        std::vector<LabeledSample> samples = draw_samples(source, n, trial_seed);
        LearnerOutput out;
        if (learner == LearnerKind::Qsrm)
            out = qsrm_learn(c, cstar, samples, ens, l, trial_seed);
        else
            out = naive_qerm_learn(c, samples, l, trial_seed);
        const double exact = expected_loss(c.member(c.index_of(out.chosen_id)), l, source);
        report.excess_losses[t] = exact - opt;
        report.chosen_ids[t] = out.chosen_id;
    });

    for (double excess : report.excess_losses)
        if (excess <= epsilon + 1e-12)
            ++report.success_count;
    return report;
}

} // namespace qpac
