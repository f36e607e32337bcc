#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "qpac/pauli.hpp"
#include "qpac/shadow.hpp"
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

// Independent single-qubit channel oracle: hardcoded X/Y/Z eigenvectors,
// direct sum over the six (basis, outcome) pairs.
ComplexMatrix gamma_oracle_1q(const ComplexMatrix &o) {
    const double s = 1.0 / std::sqrt(2.0);
    const Complex eigenvectors[6][2] = {
        {Complex(s, 0), Complex(s, 0)},  // |+>
        {Complex(s, 0), Complex(-s, 0)}, // |->
        {Complex(s, 0), Complex(0, s)},  // |+i>
        {Complex(s, 0), Complex(0, -s)}, // |-i>
        {Complex(1, 0), Complex(0, 0)},  // |0>
        {Complex(0, 0), Complex(1, 0)},  // |1>
    };
    ComplexMatrix acc(2, 2);
    for (const auto &v : eigenvectors) {
        Complex coeff(0, 0);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                coeff += std::conj(v[r]) *
                         o(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) * v[c];
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                acc(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) +=
                    (coeff / 3.0) * v[r] * std::conj(v[c]);
    }
    return acc;
}

double frobenius_distance(const ComplexMatrix &a, const ComplexMatrix &b) {
    return (a - b).frobenius_norm();
}

} // namespace

TEST_CASE("channel fixes the identity for every complete ensemble") {
    for (const UnitaryEnsemble &ens :
         {UnitaryEnsemble::pauli_tensor(1), UnitaryEnsemble::pauli_tensor(2),
          UnitaryEnsemble::clifford_exact(1), UnitaryEnsemble::clifford_exact(2),
          UnitaryEnsemble::clifford_sampled(3)}) {
        const ComplexMatrix id = ComplexMatrix::identity(ens.dim());
        CHECK(gamma_apply(ens, id).approx_equal(id, 1e-12));
        CHECK(gamma_inverse(ens, id).approx_equal(id, 1e-9));
    }
}

TEST_CASE("single-qubit pauli channel: X contracts by 3 and matches the oracle") {
    const UnitaryEnsemble ens = UnitaryEnsemble::pauli_tensor(1);
    const ComplexMatrix x = pauli_x();
    const ComplexMatrix out = gamma_apply(ens, x);
    CHECK(out.approx_equal(x.scaled(1.0 / 3.0), 1e-12));
    CHECK(out.approx_equal(gamma_oracle_1q(x), 1e-12));

    RngStream rng(41, StreamDomain::MonteCarlo, 0);
    for (int rep = 0; rep < 10; ++rep) {
        const HermitianOperator o = random_hermitian(2, rng);
        CHECK(gamma_apply(ens, o.matrix()).approx_equal(gamma_oracle_1q(o.matrix()), 1e-12));
    }

    CHECK(gamma_inverse(ens, x).approx_equal(x.scaled(3.0), 1e-12));
}

TEST_CASE("channel is linear") {
    RngStream rng(42, StreamDomain::MonteCarlo, 0);
    const UnitaryEnsemble ens = UnitaryEnsemble::pauli_tensor(2);
    const HermitianOperator a = random_hermitian(4, rng);
    const HermitianOperator b = random_hermitian(4, rng);
    const double alpha = 0.37, beta = -1.25;
    const ComplexMatrix lhs =
        gamma_apply(ens, a.matrix().scaled(alpha) + b.matrix().scaled(beta));
    const ComplexMatrix rhs =
        gamma_apply(ens, a.matrix()).scaled(alpha) + gamma_apply(ens, b.matrix()).scaled(beta);
    CHECK(lhs.approx_equal(rhs, 1e-12));
}

TEST_CASE("inverse composes to the identity on random operators") {
    RngStream rng(43, StreamDomain::MonteCarlo, 0);
    for (const UnitaryEnsemble &ens :
         {UnitaryEnsemble::pauli_tensor(2), UnitaryEnsemble::clifford_exact(2)}) {
        for (int rep = 0; rep < 10; ++rep) {
            const HermitianOperator o = random_hermitian(4, rng);
            const ComplexMatrix round = gamma_inverse(ens, gamma_apply(ens, o.matrix()));
            CHECK(frobenius_distance(round, o.matrix()) <=
                  1e-9 * o.matrix().frobenius_norm());
        }
    }
}

TEST_CASE("pauli inverse agrees with the string-weight closed form") {
    RngStream rng(44, StreamDomain::MonteCarlo, 0);
    const UnitaryEnsemble ens = UnitaryEnsemble::pauli_tensor(3);
    const HermitianOperator o = random_hermitian(8, rng);
    auto coeffs = pauli_decompose(o.matrix(), 3);
    for (std::size_t s = 0; s < coeffs.size(); ++s)
        coeffs[s] *= std::pow(3.0, pauli_index_weight(s, 3));
    const ComplexMatrix expected = pauli_recompose(coeffs, 3);
    CHECK(gamma_inverse(ens, o.matrix()).approx_equal(expected, 1e-9));
}

TEST_CASE("clifford-sampled closed forms agree with the enumerated channel at 2 qubits") {
    RngStream rng(45, StreamDomain::MonteCarlo, 0);
    const UnitaryEnsemble sampled = UnitaryEnsemble::clifford_sampled(2);
    const UnitaryEnsemble exact = UnitaryEnsemble::clifford_exact(2);
    for (int rep = 0; rep < 5; ++rep) {
        const HermitianOperator o = random_hermitian(4, rng);
        CHECK(gamma_apply(sampled, o.matrix())
                  .approx_equal(gamma_apply(exact, o.matrix()), 1e-10));
        CHECK(gamma_inverse(sampled, o.matrix())
                  .approx_equal(gamma_inverse(exact, o.matrix()), 1e-9));
    }
}

TEST_CASE("channel matrix is self-adjoint, positive, and inverts cleanly") {
    for (const UnitaryEnsemble &ens :
         {UnitaryEnsemble::pauli_tensor(1), UnitaryEnsemble::pauli_tensor(2),
          UnitaryEnsemble::clifford_exact(1)}) {
        const ComplexMatrix &gram = ens.channel_matrix();
        const HermitianOperator as_op(gram); // throws if not self-adjoint
        CHECK(min_eigenvalue(as_op) > 0.0);
        const ComplexMatrix product = ens.channel_inverse_matrix() * gram;
        CHECK(product.approx_equal(ComplexMatrix::identity(gram.rows()), 1e-9));
    }
}

TEST_CASE("ensemble validation") {
    CHECK_THROWS_AS(UnitaryEnsemble::pauli_tensor(0), RangeError);
    CHECK_THROWS_AS(UnitaryEnsemble::clifford_exact(3), RangeError);
    // Non-unitary custom member.
    CHECK_THROWS_AS(
        UnitaryEnsemble::custom(2, {{1.0, ComplexMatrix::identity(2).scaled(2.0)}}),
        ValidationError);
    // Measuring only the computational basis cannot be complete.
    CHECK_THROWS_AS(UnitaryEnsemble::custom(2, {{1.0, ComplexMatrix::identity(2)}}),
                    NotCompleteError);
    const UnitaryEnsemble bypass =
        UnitaryEnsemble::custom(2, {{1.0, ComplexMatrix::identity(2)}}, false);
    CHECK_FALSE(bypass.complete());
}

TEST_CASE("incomplete test ensemble: deterministic branch uses the channel range") {
    const UnitaryEnsemble bypass =
        UnitaryEnsemble::custom(2, {{1.0, ComplexMatrix::identity(2)}}, false);
    LabeledSample sample(PureState::basis_state(2, 0), 5);
    RngStream rng(46, StreamDomain::ShadowUnitary, 0);
    const ClassicalShadow shadow = generate_shadow(bypass, sample, rng);
    CHECK(shadow.snapshot.outcome == 0);
    CHECK(shadow.snapshot.unitary_id == "0");
    CHECK(shadow.label == 5);
    // |0><0| is diagonal, so the pseudo-inverse reproduces it exactly.
    ComplexMatrix expected(2, 2);
    expected(0, 0) = Complex(1, 0);
    CHECK(shadow.matrix.matrix().approx_equal(expected, 1e-9));
}

TEST_CASE("shadow estimates always have unit trace") {
    const UnitaryEnsemble ens = UnitaryEnsemble::pauli_tensor(2);
    RngStream source_rng(47, StreamDomain::TaskBuild, 0);
    const PureState phi = random_pure_state(4, source_rng);
    for (std::size_t i = 0; i < 10000; ++i) {
        LabeledSample sample(phi, 0);
        RngStream rng(48, StreamDomain::ShadowUnitary, i);
        const ClassicalShadow shadow = generate_shadow(ens, sample, rng);
        CHECK(std::abs(shadow.matrix.matrix().trace() - Complex(1, 0)) <= 1e-9);
    }
    // A few draws through the global-Clifford path too.
    const UnitaryEnsemble sampled = UnitaryEnsemble::clifford_sampled(3);
    const PureState phi3 = random_pure_state(8, source_rng);
    for (std::size_t i = 0; i < 200; ++i) {
        LabeledSample sample(phi3, 1);
        RngStream rng(49, StreamDomain::ShadowUnitary, i);
        const ClassicalShadow shadow = generate_shadow(sampled, sample, rng);
        CHECK(std::abs(shadow.matrix.matrix().trace() - Complex(1, 0)) <= 1e-9);
    }
}

TEST_CASE("shadow mean converges to the state (pauli, |+>)") {
    const UnitaryEnsemble ens = UnitaryEnsemble::pauli_tensor(1);
    const PureState phi = plus_state();
    const ComplexMatrix target = phi.projector();
    ComplexMatrix mean(2, 2);
    double err_1e3 = 0, err_1e4 = 0, err_1e5 = 0;
    for (std::size_t i = 0; i < 100000; ++i) {
        LabeledSample sample(phi, 0);
        RngStream rng(50, StreamDomain::ShadowUnitary, i);
        mean += generate_shadow(ens, sample, rng).matrix.matrix();
        if (i + 1 == 1000)
            err_1e3 = frobenius_distance(mean.scaled(1.0 / 1000.0), target);
        if (i + 1 == 10000)
            err_1e4 = frobenius_distance(mean.scaled(1.0 / 10000.0), target);
        if (i + 1 == 100000)
            err_1e5 = frobenius_distance(mean.scaled(1.0 / 100000.0), target);
    }
    CHECK(err_1e5 < 0.05);
    CHECK(err_1e4 < err_1e3);
    CHECK(err_1e5 < err_1e4);
}

TEST_CASE("shadow mean converges to the state (enumerated clifford, 2 qubits)") {
    const UnitaryEnsemble ens = UnitaryEnsemble::clifford_exact(2);
    RngStream source_rng(51, StreamDomain::TaskBuild, 0);
    const PureState phi = random_pure_state(4, source_rng);
    const ComplexMatrix target = phi.projector();
    ComplexMatrix mean(4, 4);
    const std::size_t n = 20000;
    for (std::size_t i = 0; i < n; ++i) {
        LabeledSample sample(phi, 0);
        RngStream rng(52, StreamDomain::ShadowUnitary, i);
        mean += generate_shadow(ens, sample, rng).matrix.matrix();
    }
    CHECK(frobenius_distance(mean.scaled(1.0 / static_cast<double>(n)), target) < 0.1);
}

TEST_CASE("shadow mean converges for the remaining complete ensembles at dim <= 4") {
    RngStream source_rng(55, StreamDomain::TaskBuild, 0);

    // Enumerated Clifford at one qubit.
    {
        const UnitaryEnsemble ens = UnitaryEnsemble::clifford_exact(1);
        const PureState phi = random_pure_state(2, source_rng);
        ComplexMatrix mean(2, 2);
        const std::size_t n = 20000;
        for (std::size_t i = 0; i < n; ++i) {
            LabeledSample sample(phi, 0);
            RngStream rng(56, StreamDomain::ShadowUnitary, i);
            mean += generate_shadow(ens, sample, rng).matrix.matrix();
        }
        CHECK(frobenius_distance(mean.scaled(1.0 / static_cast<double>(n)),
                                 phi.projector()) < 0.1);
    }

    // A custom ensemble (the three single-qubit bases as explicit unitaries)
    // whose estimates go through the numerical channel inverse.
    {
        const double s = 1.0 / std::sqrt(2.0);
        const ComplexMatrix x_basis(
            2, 2, {Complex(s, 0), Complex(s, 0), Complex(s, 0), Complex(-s, 0)});
        const ComplexMatrix y_basis(
            2, 2, {Complex(s, 0), Complex(s, 0), Complex(0, s), Complex(0, -s)});
        const UnitaryEnsemble ens = UnitaryEnsemble::custom(
            2, {{1.0 / 3, ComplexMatrix::identity(2)}, {1.0 / 3, x_basis},
                {1.0 / 3, y_basis}});
        CHECK(ens.complete());
        const PureState phi = random_pure_state(2, source_rng);
        ComplexMatrix mean(2, 2);
        const std::size_t n = 20000;
        for (std::size_t i = 0; i < n; ++i) {
            LabeledSample sample(phi, 0);
            RngStream rng(57, StreamDomain::ShadowUnitary, i);
            mean += generate_shadow(ens, sample, rng).matrix.matrix();
        }
        CHECK(frobenius_distance(mean.scaled(1.0 / static_cast<double>(n)),
                                 phi.projector()) < 0.1);
    }
}

TEST_CASE("largest supported register: 6-qubit paths stay consistent") {
    const UnitaryEnsemble pauli6 = UnitaryEnsemble::pauli_tensor(6);
    RngStream source_rng(58, StreamDomain::TaskBuild, 0);
    const PureState phi = random_pure_state(64, source_rng);
    for (std::size_t i = 0; i < 100; ++i) {
        LabeledSample sample(phi, 0);
        RngStream rng(59, StreamDomain::ShadowUnitary, i);
        const ClassicalShadow shadow = generate_shadow(pauli6, sample, rng);
        CHECK(shadow.snapshot.unitary_id.size() == 6);
        CHECK(std::abs(shadow.matrix.matrix().trace() - Complex(1, 0)) <= 1e-9);
    }
    // The factorwise inverse still matches the channel on a product operator.
    const HermitianOperator id64(ComplexMatrix::identity(64));
    CHECK(gamma_inverse(pauli6, id64.matrix()).approx_equal(id64.matrix(), 1e-9));

    const UnitaryEnsemble sampled6 = UnitaryEnsemble::clifford_sampled(6);
    LabeledSample sample(phi, 2);
    RngStream rng(60, StreamDomain::ShadowUnitary, 0);
    const ClassicalShadow shadow = generate_shadow(sampled6, sample, rng);
    CHECK(std::abs(shadow.matrix.matrix().trace() - Complex(1, 0)) <= 1e-9);
    const ClassicalShadow rebuilt = reconstruct_shadow(sampled6, shadow.snapshot, 2);
    CHECK(rebuilt.matrix.matrix().approx_equal(shadow.matrix.matrix(), 1e-10));
}

TEST_CASE("shadow loss: constant losses give exact values") {
    const UnitaryEnsemble ens = UnitaryEnsemble::pauli_tensor(1);
    const Povm m = z_projective();
    LabeledSample sample(plus_state(), 1);
    RngStream rng(53, StreamDomain::ShadowUnitary, 0);
    const ClassicalShadow shadow = generate_shadow(ens, sample, rng);

    CHECK(shadow_loss_single(shadow, m, LossFunction::constant({0, 1}, 0.0)) ==
          doctest::Approx(0.0));
    CHECK(shadow_loss_single(shadow, m, LossFunction::constant({0, 1}, 1.0)) ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("shadow loss mean approaches the exact per-atom loss") {
    const UnitaryEnsemble ens = UnitaryEnsemble::pauli_tensor(1);
    const Povm m = z_projective();
    const LossFunction l = LossFunction::zero_one({0, 1});
    // Exact loss of the atom (|+>, 0): <+|M_1|+> = 1/2.
    const PureState phi = plus_state();
    double acc = 0.0;
    const std::size_t n = 100000;
    for (std::size_t i = 0; i < n; ++i) {
        LabeledSample sample(phi, 0);
        RngStream rng(54, StreamDomain::ShadowUnitary, i);
        acc += shadow_loss_single(generate_shadow(ens, sample, rng), m, l);
    }
    CHECK(std::abs(acc / static_cast<double>(n) - 0.5) < 0.05);
}

TEST_CASE("shadow empirical loss: datasets behave") {
    const UnitaryEnsemble ens = UnitaryEnsemble::pauli_tensor(1);
    const Povm m = z_projective();
    const LossFunction l = LossFunction::zero_one({0, 1});
    LabeledStateSource source({SourceAtom{0.5, PureState::basis_state(2, 0), 0},
                               SourceAtom{0.5, PureState::basis_state(2, 1), 1}},
                              60);

    SUBCASE("single-shadow dataset equals the single-shadow loss") {
        std::vector<LabeledSample> samples = draw_samples(source, 1);
        ShadowDataset ds = generate_dataset(ens, samples, 61);
        const double single = shadow_loss_single(ds.shadows[0], m, l);
        CHECK(shadow_empirical_loss(ds, m, l) == doctest::Approx(single));
    }

    SUBCASE("constant loss 1 gives exactly 1") {
        std::vector<LabeledSample> samples = draw_samples(source, 37);
        ShadowDataset ds = generate_dataset(ens, samples, 62);
        CHECK(shadow_empirical_loss(ds, m, LossFunction::constant({0, 1}, 1.0)) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("large dataset approaches the exact expected loss") {
        std::vector<LabeledSample> samples = draw_samples(source, 10000);
        ShadowDataset ds = generate_dataset(ens, samples, 63);
        const double exact = expected_loss(m, l, source); // 0 for the perfect measurement
        CHECK(std::abs(shadow_empirical_loss(ds, m, l) - exact) < 0.05);
    }

    SUBCASE("empty dataset is rejected") {
        ShadowDataset empty;
        CHECK_THROWS_AS(shadow_empirical_loss(empty, m, l), EmptyDatasetError);
    }
}

TEST_CASE("empirical loss estimator is unbiased across datasets") {
    const UnitaryEnsemble ens = UnitaryEnsemble::pauli_tensor(1);
    LabeledStateSource source({SourceAtom{0.5, plus_state(), 0},
                               SourceAtom{0.5, PureState::basis_state(2, 1), 1}},
                              64);
    const Povm m = z_projective();
    const LossFunction l = LossFunction::zero_one({0, 1});
    const double exact = expected_loss(m, l, source);

    const std::size_t datasets = 200, n = 100;
    std::vector<double> estimates;
    for (std::size_t t = 0; t < datasets; ++t) {
        std::vector<LabeledSample> samples =
            draw_samples(source, n, derive_stream(65, StreamDomain::Trial, t));
        ShadowDataset ds =
            generate_dataset(ens, samples, derive_stream(66, StreamDomain::Trial, t));
        estimates.push_back(shadow_empirical_loss(ds, m, l));
    }
    double mean = 0;
    for (double e : estimates)
        mean += e;
    mean /= static_cast<double>(datasets);
    double var = 0;
    for (double e : estimates)
        var += (e - mean) * (e - mean);
    var /= static_cast<double>(datasets - 1);
    const double se = std::sqrt(var / static_cast<double>(datasets));
    CHECK(std::abs(mean - exact) <= 3.0 * se);
}

TEST_CASE("product observables factor through pauli snapshots") {
    const UnitaryEnsemble ens = UnitaryEnsemble::pauli_tensor(3);
    RngStream source_rng(67, StreamDomain::TaskBuild, 0);
    const PureState phi = random_pure_state(8, source_rng);
    RngStream factor_rng(68, StreamDomain::MonteCarlo, 0);
    const HermitianOperator a = random_hermitian(2, factor_rng);
    const HermitianOperator b = random_hermitian(2, factor_rng);
    const HermitianOperator c = random_hermitian(2, factor_rng);
    const ComplexMatrix dense_op =
        tensor_product(tensor_product(a.matrix(), b.matrix()), c.matrix());
    const ComplexMatrix *factors[3] = {&a.matrix(), &b.matrix(), &c.matrix()};

    for (std::size_t i = 0; i < 50; ++i) {
        LabeledSample sample(phi, 0);
        RngStream rng(69, StreamDomain::ShadowUnitary, i);
        const ClassicalShadow shadow = generate_shadow(ens, sample, rng);
        const double dense = trace_product(dense_op, shadow.matrix.matrix()).real();
        double factored = 1.0;
        for (int q = 0; q < 3; ++q) {
            const int basis =
                basis_from_letter(shadow.snapshot.unitary_id[static_cast<std::size_t>(q)]);
            const int bit = static_cast<int>((shadow.snapshot.outcome >> (2 - q)) & 1);
            factored *= trace_product(*factors[q], shadow_factor_matrix(basis, bit)).real();
        }
        CHECK(dense == doctest::Approx(factored).epsilon(1e-12));
    }
}

TEST_CASE("dataset generation is worker-count invariant and single-use") {
    const UnitaryEnsemble ens = UnitaryEnsemble::pauli_tensor(2);
    RngStream source_rng(70, StreamDomain::TaskBuild, 0);
    LabeledStateSource source({SourceAtom{1.0, random_pure_state(4, source_rng), 0}}, 71);

    std::vector<LabeledSample> serial = draw_samples(source, 64);
    std::vector<LabeledSample> parallel = draw_samples(source, 64);
    const ShadowDataset ds1 = generate_dataset(ens, serial, 72, 1);
    const ShadowDataset ds2 = generate_dataset(ens, parallel, 72, 8);
    REQUIRE(ds1.shadows.size() == ds2.shadows.size());
    for (std::size_t i = 0; i < ds1.shadows.size(); ++i) {
        CHECK(ds1.shadows[i].snapshot.unitary_id == ds2.shadows[i].snapshot.unitary_id);
        CHECK(ds1.shadows[i].snapshot.outcome == ds2.shadows[i].snapshot.outcome);
    }
    for (const LabeledSample &s : serial)
        CHECK(s.consumed());
    // A consumed batch cannot be measured again.
    CHECK_THROWS_AS(generate_dataset(ens, serial, 73), SampleReuseError);
}

TEST_CASE("shadow datasets persist and reload through the compact snapshot") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "qpac_shadow_io_test";
    fs::create_directories(dir);

    RngStream source_rng(74, StreamDomain::TaskBuild, 0);
    for (const UnitaryEnsemble &ens :
         {UnitaryEnsemble::pauli_tensor(2), UnitaryEnsemble::clifford_exact(2),
          UnitaryEnsemble::clifford_sampled(3)}) {
        LabeledStateSource source(
            {SourceAtom{0.5, random_pure_state(ens.dim(), source_rng), 0},
             SourceAtom{0.5, random_pure_state(ens.dim(), source_rng), 1}},
            75);
        std::vector<LabeledSample> samples = draw_samples(source, 50);
        const ShadowDataset ds = generate_dataset(ens, samples, 76);
        const std::string path =
            (dir / (ensemble_kind_name(ens.kind()) + ".shadows")).string();
        save_shadow_dataset(path, ds);
        const ShadowDataset loaded = load_shadow_dataset(path, ens);
        REQUIRE(loaded.shadows.size() == ds.shadows.size());
        CHECK(loaded.meta.seed == ds.meta.seed);
        CHECK(loaded.meta.dim == ds.meta.dim);
        for (std::size_t i = 0; i < ds.shadows.size(); ++i) {
            CHECK(loaded.shadows[i].label == ds.shadows[i].label);
            CHECK(loaded.shadows[i].matrix.matrix().approx_equal(
                ds.shadows[i].matrix.matrix(), 1e-12));
        }
    }

    // Mismatched ensemble on load.
    const std::string path = (dir / "pauli.shadows").string();
    CHECK_THROWS_AS(load_shadow_dataset(path, UnitaryEnsemble::pauli_tensor(1)),
                    ValidationError);
    fs::remove_all(dir);
}
