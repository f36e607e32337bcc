#include <doctest.h>

#include <cmath>
#include <map>

#include "qpac/quantum_model.hpp"
#include "qpac/tasks.hpp"

using namespace qpac;

namespace {

PureState plus_state() {
    const double s = 1.0 / std::sqrt(2.0);
    return PureState({Complex(s, 0), Complex(s, 0)});
}

Povm z_projective() {
    ComplexMatrix p0(2, 2), p1(2, 2);
    p0(0, 0) = Complex(1, 0);
    p1(1, 1) = Complex(1, 0);
    return Povm({0, 1}, {HermitianOperator(p0), HermitianOperator(p1)});
}

} // namespace

TEST_CASE("draw_samples: deterministic single-atom source") {
    LabeledStateSource source({SourceAtom{1.0, PureState::basis_state(2, 0), 7}}, 5);
    const auto samples = draw_samples(source, 5);
    REQUIRE(samples.size() == 5);
    for (const LabeledSample &s : samples) {
        CHECK(s.label() == 7);
        CHECK(s.state().amplitudes()[0] == Complex(1, 0));
    }
}

TEST_CASE("draw_samples: empirical frequency matches the atom weights") {
    LabeledStateSource source({SourceAtom{0.5, PureState::basis_state(2, 0), 0},
                               SourceAtom{0.5, PureState::basis_state(2, 1), 1}},
                              99);
    const auto samples = draw_samples(source, 100000);
    std::size_t zeros = 0;
    for (const LabeledSample &s : samples)
        zeros += s.label() == 0 ? 1 : 0;
    CHECK(std::abs(zeros / 100000.0 - 0.5) < 0.01);
}

TEST_CASE("draw_samples: same seed, same list") {
    LabeledStateSource source({SourceAtom{0.3, PureState::basis_state(2, 0), 0},
                               SourceAtom{0.7, PureState::basis_state(2, 1), 1}},
                              1234);
    const auto a = draw_samples(source, 200);
    const auto b = draw_samples(source, 200);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a[i].label() == b[i].label());
}

TEST_CASE("born_measure: eigenstate is deterministic") {
    const Povm m = z_projective();
    const DensityOperator rho = DensityOperator::from_pure(PureState::basis_state(2, 0));
    RngStream rng(5, StreamDomain::BornMeasure, 0);
    for (int i = 0; i < 50; ++i)
        CHECK(born_measure(m, rho, rng) == 0);
}

TEST_CASE("born_measure: |+> splits evenly; all outcomes concentrate at 5/sqrt(N)") {
    const Povm m = z_projective();
    const DensityOperator rho = DensityOperator::from_pure(plus_state());
    constexpr std::size_t shots = 100000;
    std::map<int, std::size_t> counts;
    for (std::size_t i = 0; i < shots; ++i) {
        RngStream rng(6, StreamDomain::BornMeasure, i);
        ++counts[born_measure(m, rho, rng)];
    }
    const double bound = 5.0 / std::sqrt(static_cast<double>(shots));
    CHECK(std::abs(counts[0] / static_cast<double>(shots) - 0.5) < 0.01);
    for (const auto &[outcome, count] : counts)
        CHECK(std::abs(count / static_cast<double>(shots) - 0.5) <= bound);
}

TEST_CASE("born_measure: trivial POVM always returns its outcome") {
    const Povm m({3}, {HermitianOperator(ComplexMatrix::identity(2))});
    const DensityOperator rho = DensityOperator::from_pure(plus_state());
    RngStream rng(7, StreamDomain::BornMeasure, 0);
    for (int i = 0; i < 10; ++i)
        CHECK(born_measure(m, rho, rng) == 3);
}

TEST_CASE("born_measure: rejects probability totals beyond the tolerance") {
    // Entrywise the effects sum to identity within the POVM tolerance, but a
    // state aligned with the defect sees a total off by more than 1e-8.
    const std::size_t dim = 32;
    ComplexMatrix defect(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            defect(r, c) = Complex(0.9e-9, 0);
    ComplexMatrix m0 = ComplexMatrix::identity(dim).scaled(0.5) + defect;
    ComplexMatrix m1 = ComplexMatrix::identity(dim).scaled(0.5);
    const Povm m({0, 1}, {HermitianOperator(m0), HermitianOperator(m1)});

    std::vector<Complex> uniform(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0));
    const DensityOperator rho = DensityOperator::from_pure(PureState(uniform));
    RngStream rng(8, StreamDomain::BornMeasure, 0);
    CHECK_THROWS_AS(born_measure(m, rho, rng), InvalidPovmError);
}

TEST_CASE("joint_state: single atom embeds the label register") {
    LabeledStateSource source({SourceAtom{1.0, PureState::basis_state(2, 0), 0}}, 1);
    const DensityOperator joint = joint_state(source, 2);
    CHECK(joint.dim() == 4);
    CHECK(joint.matrix()(0, 0) == Complex(1, 0));
    CHECK(std::abs(joint.matrix().trace() - Complex(1, 0)) < 1e-12);
}

TEST_CASE("joint_state: orthogonal atoms give a block-diagonal trace-1 state") {
    LabeledStateSource source({SourceAtom{0.5, PureState::basis_state(2, 0), 0},
                               SourceAtom{0.5, PureState::basis_state(2, 1), 1}},
                              1);
    const DensityOperator joint = joint_state(source);
    CHECK(joint.dim() == 4);
    CHECK(std::abs(joint.matrix().trace() - Complex(1, 0)) < 1e-12);
    CHECK(joint.matrix()(0, 0).real() == doctest::Approx(0.5));
    CHECK(joint.matrix()(3, 3).real() == doctest::Approx(0.5));
    // Density invariants were checked by the DensityOperator constructor.
}

TEST_CASE("joint_state: random sources produce valid density operators") {
    RngStream rng(123, StreamDomain::TaskBuild, 0);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<SourceAtom> atoms;
        const std::size_t count = 1 + rng.uniform_index(4);
        for (std::size_t a = 0; a < count; ++a)
            atoms.push_back(SourceAtom{1.0 / static_cast<double>(count),
                                       random_pure_state(4, rng),
                                       static_cast<int>(rng.uniform_index(3))});
        LabeledStateSource source(std::move(atoms), 5);
        CHECK_NOTHROW(joint_state(source));
    }
}

TEST_CASE("samples collapse on measurement and refuse reuse") {
    LabeledSample sample(PureState::basis_state(2, 0), 0);
    CHECK_FALSE(sample.consumed());
    sample.consume();
    CHECK(sample.consumed());
    CHECK_THROWS_AS(sample.consume(), SampleReuseError);

    LabeledSample moved = std::move(sample);
    CHECK(moved.consumed());
}

TEST_CASE("source validation") {
    CHECK_THROWS_AS(LabeledStateSource({}, 1), ValidationError);
    CHECK_THROWS_AS(
        LabeledStateSource({SourceAtom{0.8, PureState::basis_state(2, 0), 0}}, 1),
        ValidationError);
    CHECK_THROWS_AS(
        LabeledStateSource({SourceAtom{1.0, PureState::basis_state(2, 0), -2}}, 1),
        ValidationError);
}
