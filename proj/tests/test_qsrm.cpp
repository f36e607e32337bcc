#include <doctest.h>

#include <cmath>

#include "qpac/qsrm.hpp"
#include "qpac/tasks.hpp"

using namespace qpac;

namespace {

struct Discrimination {
    LearningTask task;
    ExtremePointSet cstar;
};

Discrimination make_discrimination(std::size_t class_size, double noise, std::uint64_t seed) {
    LearningTask task = make_state_discrimination(1, class_size, noise, seed);
    ExtremePointSet cstar = extreme_points(task.concepts);
    return Discrimination{std::move(task), std::move(cstar)};
}

} // namespace

TEST_CASE("qsrm: a singleton extreme set is returned unconditionally") {
    const Povm trivial({0, 1},
                       {HermitianOperator(ComplexMatrix::identity(2).scaled(0.5)),
                        HermitianOperator(ComplexMatrix::identity(2).scaled(0.5))});
    const ConceptClass c({"only"}, {trivial});
    const ExtremePointSet cstar = extreme_points(c);
    LabeledStateSource source({SourceAtom{1.0, PureState::basis_state(2, 0), 0}}, 1);
    std::vector<LabeledSample> samples = draw_samples(source, 10);
    const LearnerOutput out = qsrm_learn(c, cstar, samples, UnitaryEnsemble::pauli_tensor(1),
                                         LossFunction::zero_one({0, 1}), 2);
    CHECK(out.chosen_id == "only");
    CHECK(out.n_used == 10);
    CHECK(out.ensemble == EnsembleKind::PauliTensor);
}

TEST_CASE("qsrm: separates orthogonal states essentially always") {
    const Discrimination d = make_discrimination(2, 0.0, 201);
    REQUIRE(d.cstar.size() == 2);
    const UnitaryEnsemble ens = UnitaryEnsemble::pauli_tensor(1);
    int correct = 0;
    const int trials = 50;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t seed = derive_stream(202, StreamDomain::Trial, t);
        std::vector<LabeledSample> samples = draw_samples(d.task.source, 200, seed);
        const LearnerOutput out =
            qsrm_learn(d.task.concepts, d.cstar, samples, ens, d.task.loss, seed);
        correct += out.chosen_id == "c00" ? 1 : 0;
    }
    CHECK(correct >= 49); // exact-loss gap is 1; failures are astronomically rare
}

TEST_CASE("qsrm: all-zero losses tie-break to the lexicographically first id") {
    const Discrimination d = make_discrimination(2, 0.0, 203);
    std::vector<LabeledSample> samples = draw_samples(d.task.source, 20);
    const LearnerOutput out =
        qsrm_learn(d.task.concepts, d.cstar, samples, UnitaryEnsemble::pauli_tensor(1),
                   LossFunction::constant({0, 1}, 0.0), 204);
    CHECK(out.chosen_id == "c00");
    for (const auto &[id, loss] : out.empirical_losses)
        CHECK(loss == doctest::Approx(0.0));
}

TEST_CASE("qsrm: both concepts score the same shared dataset") {
    // The two conditional loss operators add to the identity, so the two
    // empirical losses must add to exactly 1 when they come from one shadow
    // dataset. Fresh datasets would only satisfy this in expectation.
    const Discrimination d = make_discrimination(2, 0.0, 205);
    std::vector<LabeledSample> samples = draw_samples(d.task.source, 151, 206);
    const LearnerOutput out = qsrm_learn(d.task.concepts, d.cstar, samples,
                                         UnitaryEnsemble::pauli_tensor(1), d.task.loss, 207);
    const double total =
        out.empirical_losses.at("c00") + out.empirical_losses.at("c01");
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("qsrm: deterministic for a fixed seed and single-use on samples") {
    const Discrimination d = make_discrimination(3, 0.1, 208);
    const UnitaryEnsemble ens = UnitaryEnsemble::pauli_tensor(1);

    std::vector<LabeledSample> s1 = draw_samples(d.task.source, 60, 209);
    std::vector<LabeledSample> s2 = draw_samples(d.task.source, 60, 209);
    const LearnerOutput a = qsrm_learn(d.task.concepts, d.cstar, s1, ens, d.task.loss, 210);
    const LearnerOutput b = qsrm_learn(d.task.concepts, d.cstar, s2, ens, d.task.loss, 210);
    CHECK(a.chosen_id == b.chosen_id);
    for (const auto &[id, loss] : a.empirical_losses)
        CHECK(loss == b.empirical_losses.at(id));

    for (const LabeledSample &s : s1)
        CHECK(s.consumed());
    CHECK_THROWS_AS(qsrm_learn(d.task.concepts, d.cstar, s1, ens, d.task.loss, 211),
                    SampleReuseError);

    std::vector<LabeledSample> empty;
    CHECK_THROWS_AS(qsrm_learn(d.task.concepts, d.cstar, empty, ens, d.task.loss, 212),
                    EmptyInputError);
}

TEST_CASE("naive learner: single concept reduces to a plain loss average") {
    const Povm trivial({0, 1},
                       {HermitianOperator(ComplexMatrix::identity(2).scaled(0.5)),
                        HermitianOperator(ComplexMatrix::identity(2).scaled(0.5))});
    const ConceptClass c({"only"}, {trivial});
    LabeledStateSource source({SourceAtom{1.0, PureState::basis_state(2, 0), 0}}, 1);
    std::vector<LabeledSample> samples = draw_samples(source, 400, 220);
    const LearnerOutput out =
        naive_qerm_learn(c, samples, LossFunction::zero_one({0, 1}), 221);
    CHECK(out.chosen_id == "only");
    // Uniform guessing loses half the time.
    CHECK(out.empirical_losses.at("only") == doctest::Approx(0.5).epsilon(0.2));
    for (const LabeledSample &s : samples)
        CHECK(s.consumed());
}

TEST_CASE("naive learner: block structure and sample-count precondition") {
    const Discrimination d = make_discrimination(2, 0.0, 222);
    std::vector<LabeledSample> samples = draw_samples(d.task.source, 200, 223);
    const LearnerOutput out = naive_qerm_learn(d.task.concepts, samples, d.task.loss, 224);
    CHECK(out.chosen_id == "c00");
    // Per-concept block means: perfect sees loss 0, swapped sees loss 1.
    CHECK(out.empirical_losses.at("c00") == doctest::Approx(0.0));
    CHECK(out.empirical_losses.at("c01") == doctest::Approx(1.0));

    std::vector<LabeledSample> tiny = draw_samples(d.task.source, 1, 225);
    CHECK_THROWS_AS(naive_qerm_learn(d.task.concepts, tiny, d.task.loss, 226),
                    InsufficientSamplesError);
}

TEST_CASE("theorem sample size: formula, frozen value, and scalings") {
    // Direct evaluation of the formula is the oracle.
    const double v = 3.0, eps = 0.1, delta = 0.05;
    const double raw = 4.0 * v / ((eps / 2.0) * (eps / 2.0)) * std::log(2.0 * 2.0 / delta);
    CHECK(theorem1_sample_size(v, 2, eps, delta) ==
          static_cast<std::int64_t>(std::ceil(raw)));
    CHECK(theorem1_sample_size(v, 2, eps, delta) == 21034); // regression constant

    // Doubling the class size adds 4 v / (eps/2)^2 * ln 2 before the ceiling.
    const double increment = 4.0 * v / ((eps / 2.0) * (eps / 2.0)) * std::log(2.0);
    const auto n2 = theorem1_sample_size(v, 2, eps, delta);
    const auto n4 = theorem1_sample_size(v, 4, eps, delta);
    CHECK(std::abs(static_cast<double>(n4 - n2) - increment) <= 1.0);

    // Halving epsilon quadruples the count, up to the ceiling.
    const auto n_half = theorem1_sample_size(v, 2, eps / 2.0, delta);
    CHECK(n_half >= 4 * (n2 - 1));
    CHECK(n_half <= 4 * n2 + 4);

    // The variance floor keeps degenerate classes learnable.
    CHECK(theorem1_sample_size(0.0, 2, eps, delta) >= 1);

    CHECK_THROWS_AS(theorem1_sample_size(v, 2, 0.0, delta), RangeError);
    CHECK_THROWS_AS(theorem1_sample_size(v, 2, eps, 1.0), RangeError);
    CHECK_THROWS_AS(theorem1_sample_size(-1.0, 2, eps, delta), RangeError);
    CHECK_THROWS_AS(theorem1_sample_size(v, 0, eps, delta), RangeError);
}

TEST_CASE("pac evaluation: epsilon covering the loss range always succeeds") {
    const Discrimination d = make_discrimination(2, 0.0, 230);
    const PacTrialReport report =
        pac_evaluate(LearnerKind::Qsrm, d.task.concepts, d.task.source, d.task.loss,
                     UnitaryEnsemble::pauli_tensor(1), 5, 1.0, 20, 231);
    CHECK(report.success_count == report.trials);
    CHECK(report.opt_value == doctest::Approx(0.0));
    for (double excess : report.excess_losses)
        CHECK(excess >= -1e-9);
}

TEST_CASE("pac evaluation: success fraction grows with the sample budget") {
    const Discrimination d = make_discrimination(2, 0.25, 232);
    const UnitaryEnsemble ens = UnitaryEnsemble::pauli_tensor(1);
    std::vector<double> fractions;
    for (std::size_t n : {25, 50, 100, 200}) {
        const PacTrialReport report = pac_evaluate(
            LearnerKind::Qsrm, d.task.concepts, d.task.source, d.task.loss, ens, n, 0.1,
            200, 233, 0.0, 4);
        fractions.push_back(report.success_fraction());
    }
    for (std::size_t k = 1; k < fractions.size(); ++k)
        CHECK(fractions[k] >= fractions[k - 1] - 0.02); // monotone up to trial noise
    CHECK(fractions.back() > fractions.front() - 0.02);
    CHECK(fractions.back() >= 0.99);
}

TEST_CASE("pac evaluation is deterministic given the seed") {
    const Discrimination d = make_discrimination(2, 0.2, 234);
    const UnitaryEnsemble ens = UnitaryEnsemble::pauli_tensor(1);
    const PacTrialReport a = pac_evaluate(LearnerKind::NaiveQerm, d.task.concepts,
                                          d.task.source, d.task.loss, ens, 40, 0.1, 50, 235);
    const PacTrialReport b = pac_evaluate(LearnerKind::NaiveQerm, d.task.concepts,
                                          d.task.source, d.task.loss, ens, 40, 0.1, 50, 235,
                                          0.0, 8);
    CHECK(a.success_count == b.success_count);
    CHECK(a.chosen_ids == b.chosen_ids);
    for (std::size_t t = 0; t < a.excess_losses.size(); ++t)
        CHECK(a.excess_losses[t] == b.excess_losses[t]);
}
