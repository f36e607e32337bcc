#include "qpac/shadow_norm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "qpac/clifford.hpp"
#include "qpac/errors.hpp"
#include "qpac/parallel.hpp"
#include "qpac/pauli.hpp"
#include "qpac/tolerances.hpp"

namespace qpac {

namespace {

std::string render(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ComplexMatrix kernel_matrix_exact(const UnitaryEnsemble &ens, const HermitianOperator &o) {
    if (!ens.complete())
        throw NotCompleteError("shadow_norm: ensemble is not tomographically complete");
    if (!ens.enumerable())
        throw UnsupportedError("shadow_norm: exact mode needs an enumerable ensemble");
    const std::size_t d = ens.dim();
    const ComplexMatrix inv = gamma_inverse(ens, o.matrix());
    ComplexMatrix kernel(d, d);
    ens.for_each_outcome([&](double w, std::span<const Complex> psi) {
        const double coeff = quadratic_form(inv, psi.data());
        kernel.add_outer_product(psi.data(), w * coeff * coeff);
    });
    return kernel;
}

} // namespace

HermitianOperator shadow_norm_kernel(const UnitaryEnsemble &ens, const HermitianOperator &o) {
    return HermitianOperator(kernel_matrix_exact(ens, o));
}

double shadow_norm(const UnitaryEnsemble &ens, const HermitianOperator &o) {
    const double top = max_eigenvalue(shadow_norm_kernel(ens, o));
    return std::sqrt(std::max(top, 0.0));
}

double shadow_norm_monte_carlo(const UnitaryEnsemble &ens, const HermitianOperator &o,
                               std::size_t samples, RngStream &rng, double *std_error) {
    if (samples == 0)
        throw RangeError("shadow_norm_monte_carlo: need at least one sample");
    if (!ens.complete())
        throw NotCompleteError("shadow_norm: ensemble is not tomographically complete");
    const std::size_t d = ens.dim();
    const ComplexMatrix inv = gamma_inverse(ens, o.matrix());

    // Per-draw contribution: sum_j tr(Gamma^-1[O] omega_j)^2 omega_j.
    std::vector<ComplexMatrix> contributions;
    contributions.reserve(samples);
    ComplexMatrix mean(d, d);
    std::vector<Complex> col(d);
    for (std::size_t s = 0; s < samples; ++s) {
        ComplexMatrix unitary(0, 0);
        switch (ens.kind()) {
        case EnsembleKind::CliffordSampled:
            unitary = sampled_clifford_unitary(ens.qubits(), draw_sampled_clifford(ens.qubits(), rng));
            break;
        case EnsembleKind::CliffordExact:
        case EnsembleKind::Custom: {
            std::vector<double> w(ens.member_count());
            for (std::size_t i = 0; i < w.size(); ++i)
                w[i] = ens.member_weight(i);
            unitary = ens.member(rng.discrete(w));
            break;
        }
        case EnsembleKind::PauliTensor: {
            const int qubits = ens.qubits();
            unitary = ComplexMatrix::identity(1);
            for (int q = 0; q < qubits; ++q) {
                const int b = static_cast<int>(rng.uniform_index(3));
                ComplexMatrix basis(2, 2);
                for (int out = 0; out < 2; ++out) {
                    const auto v = basis_eigenvector(b, out);
                    basis(0, static_cast<std::size_t>(out)) = v[0];
                    basis(1, static_cast<std::size_t>(out)) = v[1];
                }
                unitary = tensor_product(unitary, basis);
            }
            break;
        }
        }
        ComplexMatrix contribution(d, d);
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t r = 0; r < d; ++r)
                col[r] = unitary(r, j);
            const double coeff = quadratic_form(inv, col.data());
            contribution.add_outer_product(col.data(), coeff * coeff);
        }
        mean += contribution;
        contributions.push_back(std::move(contribution));
    }
    mean = mean.scaled(1.0 / static_cast<double>(samples));

    // Top eigenvalue and its eigenvector.
    using EigenMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const EigenMatrix> map(mean.data(), static_cast<Eigen::Index>(d),
                                      static_cast<Eigen::Index>(d));
    const Eigen::MatrixXcd dense = (Eigen::MatrixXcd(map) + Eigen::MatrixXcd(map).adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
    if (solver.info() != Eigen::Success)
        throw NumericalError("shadow_norm_monte_carlo: eigensolver failed");
    const double top = solver.eigenvalues()(static_cast<Eigen::Index>(d) - 1);
    if (std_error != nullptr) {
        const Eigen::VectorXcd u = solver.eigenvectors().col(static_cast<Eigen::Index>(d) - 1);
        std::vector<Complex> uv(u.data(), u.data() + u.size());
        double s1 = 0.0, s2 = 0.0;
        for (const ComplexMatrix &contribution : contributions) {
            const double x = quadratic_form(contribution, uv.data());
            s1 += x;
            s2 += x * x;
        }
        const double ns = static_cast<double>(samples);
        const double var = std::max(0.0, s2 / ns - (s1 / ns) * (s1 / ns));
        const double lambda_se = std::sqrt(var / ns);
        // Delta method through the square root.
        *std_error = top > 0 ? lambda_se / (2.0 * std::sqrt(top)) : std::sqrt(lambda_se);
    }
    return std::sqrt(std::max(top, 0.0));
}

std::string ShadowNormReport::to_json() const {
    std::ostringstream out;
    out << "{\"operator_id\":\"" << operator_id << "\",\"shadow_norm\":" << render(shadow_norm)
        << ",\"hs_bound\":" << render(hs_bound);
    if (locality_bound)
        out << ",\"locality_bound\":" << render(*locality_bound);
    out << ",\"method\":\"" << method << "\"";
    if (std_error)
        out << ",\"std_error\":" << render(*std_error);
    out << "}";
    return out.str();
}

ShadowNormReport shadow_norm_report(const UnitaryEnsemble &ens, const HermitianOperator &o,
                                    const std::string &operator_id) {
    ShadowNormReport report;
    report.operator_id = operator_id;
    report.method = "exact";
    report.shadow_norm = shadow_norm(ens, o);
    const double tr_o2 = trace_product(o.matrix(), o.matrix()).real();
    report.hs_bound = std::sqrt(3.0 * tr_o2);

    if (ens.kind() == EnsembleKind::CliffordExact &&
        report.shadow_norm > report.hs_bound * (1.0 + 1e-6))
        throw NumericalError("shadow_norm_report: Hilbert-Schmidt bound violated");

    if (ens.kind() == EnsembleKind::PauliTensor) {
        // Locality from the Pauli support of the operator.
        const int qubits = ens.qubits();
        const auto coeffs = pauli_decompose(o.matrix(), qubits);
        std::vector<bool> touched(static_cast<std::size_t>(qubits), false);
        for (std::size_t s = 0; s < coeffs.size(); ++s) {
            if (std::abs(coeffs[s]) <= 1e-12)
                continue;
            std::size_t rem = s;
            for (int q = qubits - 1; q >= 0; --q) {
                if (rem % 4 != 0)
                    touched[static_cast<std::size_t>(q)] = true;
                rem /= 4;
            }
        }
        int k = 0;
        for (bool t : touched)
            if (t)
                ++k;
        const double bound = std::pow(2.0, k) * spectral_norm(o);
        report.locality_bound = bound;
        if (report.shadow_norm > bound * (1.0 + 1e-6))
            throw NumericalError("shadow_norm_report: Pauli locality bound violated");
    }
    return report;
}

double shadow_estimator_variance(const UnitaryEnsemble &ens, const HermitianOperator &o,
                                 const DensityOperator &rho) {
    if (ens.dim() != rho.dim())
        throw DimensionError("shadow_estimator_variance: dimension mismatch");
    if (!ens.enumerable())
        throw UnsupportedError("shadow_estimator_variance: ensemble is not enumerable");
    const ComplexMatrix inv = gamma_inverse(ens, o.matrix());
    double first = 0.0, second = 0.0;
    ens.for_each_outcome([&](double w, std::span<const Complex> psi) {
        const double p = quadratic_form(rho.matrix(), psi.data());
        const double x = quadratic_form(inv, psi.data());
        first += w * p * x;
        second += w * p * x * x;
    });
    return std::max(0.0, second - first * first);
}

double class_constant_v(const UnitaryEnsemble &ens, const ConceptClass &parent,
                        const ExtremePointSet &cstar, const LossFunction &l,
                        const std::vector<int> &labels) {
    if (cstar.size() == 0)
        throw EmptyInputError("class_constant_v: empty extreme-point set");
    const std::size_t d = ens.dim();
    double v = 0.0;
    for (std::size_t idx : cstar.member_indices) {
        const Povm &m = parent.member(idx);
        for (int y : labels) {
            const HermitianOperator cond = conditional_loss_operator(m, l, y);
            ComplexMatrix centered = cond.matrix();
            const Complex shift = centered.trace() / static_cast<double>(d);
            for (std::size_t i = 0; i < d; ++i)
                centered(i, i) -= shift;
            const double norm = shadow_norm(ens, HermitianOperator(std::move(centered)));
            v = std::max(v, norm * norm);
        }
    }
    return v;
}

std::string ConcentrationReport::to_json() const {
    std::ostringstream out;
    out << "{\"n\":" << n << ",\"epsilon\":" << render(epsilon) << ",\"trials\":" << trials
        << ",\"exact_loss\":" << render(exact_loss)
        << ",\"max_variance\":" << render(max_variance)
        << ",\"estimate_range\":" << render(estimate_range) << ",\"bound\":" << render(bound)
        << ",\"empirical_exceedance\":" << render(empirical_exceedance)
        << ",\"binomial_slack\":" << render(binomial_slack) << ",\"epsilon_in_valid_range\":"
        << (epsilon_in_valid_range ? "true" : "false") << ",\"pass\":" << (pass ? "true" : "false")
        << "}";
    return out.str();
}

ConcentrationReport verify_concentration(const UnitaryEnsemble &ens,
                                         const LabeledStateSource &source, const Povm &m,
                                         const LossFunction &l, std::size_t n, double epsilon,
                                         std::size_t trials, std::uint64_t seed,
                                         unsigned threads) {
    if (n == 0 || trials == 0)
        throw RangeError("verify_concentration: n and trials must be positive");
    if (!(epsilon > 0))
        throw RangeError("verify_concentration: epsilon must be positive");

    ConcentrationReport report;
    report.n = n;
    report.epsilon = epsilon;
    report.trials = trials;
    report.exact_loss = expected_loss(m, l, source);

    // Exact variance and range of the per-shadow loss estimate, atom
    // randomness included.
    double mean = 0.0, mean_sq = 0.0;
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -std::numeric_limits<double>::infinity();
    for (const SourceAtom &atom : source.atoms()) {
        const ComplexMatrix cond = conditional_loss_operator(m, l, atom.label).matrix();
        const ComplexMatrix inv = gamma_inverse(ens, cond);
        const ComplexMatrix proj = atom.state.projector();
        ens.for_each_outcome([&](double w, std::span<const Complex> psi) {
            const double p = quadratic_form(proj, psi.data());
            const double x = quadratic_form(inv, psi.data());
            mean += atom.probability * w * p * x;
            mean_sq += atom.probability * w * p * x * x;
            if (atom.probability > 0 && w > 0) {
                x_min = std::min(x_min, x);
                x_max = std::max(x_max, x);
            }
        });
    }
    report.max_variance = std::max(0.0, mean_sq - mean * mean);
    report.estimate_range = x_max - x_min;

    report.bound = report.max_variance > 0
                       ? 2.0 * std::exp(-(static_cast<double>(n) * epsilon * epsilon) /
                                        (4.0 * report.max_variance))
                       : 0.0;

    // Validity window of the underlying martingale bound:
    // epsilon <= 2 V_n / max c_i with V_n = var/n and c_i = range/n.
    report.epsilon_in_valid_range =
        report.estimate_range > 0
            ? epsilon <= 2.0 * report.max_variance / report.estimate_range
            : true;

    std::vector<unsigned char> exceeded(trials, 0);
    parallel_for(trials, threads, [&](std::size_t t) {
        const std::uint64_t trial_seed = derive_stream(seed, StreamDomain::Trial, t);
        std::vector<LabeledSample> samples = draw_samples(source, n, trial_seed);
        const ShadowDataset ds = generate_dataset(ens, samples, trial_seed);
        const double estimate = shadow_empirical_loss(ds, m, l);
        exceeded[t] = std::abs(estimate - report.exact_loss) > epsilon ? 1 : 0;
    });
    std::size_t count = 0;
    for (unsigned char e : exceeded)
        count += e;
    report.empirical_exceedance = static_cast<double>(count) / static_cast<double>(trials);

    const double b = std::clamp(report.bound, 0.0, 1.0);
    report.binomial_slack = 3.0 * std::sqrt(b * (1.0 - b) / static_cast<double>(trials));
    report.pass = report.empirical_exceedance <= report.bound + report.binomial_slack;
    return report;
}

} // namespace qpac
