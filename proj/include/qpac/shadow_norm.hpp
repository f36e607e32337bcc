#pragma once

#include <optional>
#include <string>

#include "qpac/concept_class.hpp"
#include "qpac/loss.hpp"
#include "qpac/shadow.hpp"

namespace qpac {

/// The variance-controlling norm of the randomized-measurement ensemble:
/// ||O||_shadow^2 = max over states sigma of
///     E_U sum_j tr(sigma omega_Uj) * tr(Gamma^-1[O] omega_Uj)^2.
/// The bracket is linear in sigma, so the maximum over density operators is
/// the top eigenvalue of A_O = E_U sum_j tr(Gamma^-1[O] omega_Uj)^2 omega_Uj.
double shadow_norm(const UnitaryEnsemble &ens, const HermitianOperator &o);

/// The A_O matrix itself (exact enumeration). Exposed for validation.
HermitianOperator shadow_norm_kernel(const UnitaryEnsemble &ens, const HermitianOperator &o);

/// Monte Carlo estimate for non-enumerable ensembles: A_O averaged over
/// `samples` drawn unitaries. The standard error reported is that of the top
/// eigenvalue, estimated by projecting per-draw contributions onto the top
/// eigenvector.
double shadow_norm_monte_carlo(const UnitaryEnsemble &ens, const HermitianOperator &o,
                               std::size_t samples, RngStream &rng,
                               double *std_error = nullptr);

struct ShadowNormReport {
    std::string operator_id;
    double shadow_norm = 0;
    double hs_bound = 0;                  // sqrt(3 tr O^2)
    std::optional<double> locality_bound; // 2^k ||O||_inf, PauliTensor only
    std::string method;                   // "exact" or "monte_carlo(n)"
    std::optional<double> std_error;

    std::string to_json() const;
};

/// Full report, including the ensemble-specific bound checks: the
/// Hilbert-Schmidt bound for the exact Clifford ensemble and the 2^k bound
/// for Pauli measurements of k-local operators. Violation of a bound that is
/// a theorem for the ensemble raises NumericalError.
ShadowNormReport shadow_norm_report(const UnitaryEnsemble &ens, const HermitianOperator &o,
                                    const std::string &operator_id);

/// Exact Var(tr(O rho_hat)) for one shadow of `rho`, by enumeration over the
/// (unitary, outcome) pairs.
double shadow_estimator_variance(const UnitaryEnsemble &ens, const HermitianOperator &o,
                                 const DensityOperator &rho);

/// The class constant: max over extreme-point members and labels of
/// ||L_M(y) - (tr L_M(y)/dim) I||_shadow^2.
double class_constant_v(const UnitaryEnsemble &ens, const ConceptClass &parent,
                        const ExtremePointSet &cstar, const LossFunction &l,
                        const std::vector<int> &labels);

struct ConcentrationReport {
    std::size_t n = 0;
    double epsilon = 0;
    std::size_t trials = 0;
    double exact_loss = 0;
    double max_variance = 0;     // exact per-sample variance of the estimate
    double estimate_range = 0;   // max - min of the per-shadow loss estimate
    double bound = 0;            // 2 exp(-n eps^2 / (4 max_variance))
    double empirical_exceedance = 0;
    double binomial_slack = 0;   // 3 sqrt(b(1-b)/trials), b clamped to [0,1]
    bool epsilon_in_valid_range = false;
    bool pass = false;

    std::string to_json() const;
};

/// Empirically checks the tail bound on |shadow empirical loss - exact loss|
/// over independent datasets of size n. The variance entering the bound is
/// exact (enumerated), never estimated.
ConcentrationReport verify_concentration(const UnitaryEnsemble &ens,
                                         const LabeledStateSource &source, const Povm &m,
                                         const LossFunction &l, std::size_t n, double epsilon,
                                         std::size_t trials, std::uint64_t seed,
                                         unsigned threads = 1);

} // namespace qpac
