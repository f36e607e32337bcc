#pragma once

// Single audit point for the numerical policy. Every tolerance used by the
// library lives here; nothing else hard-codes an epsilon.

namespace qpac::tol {

// Hermiticity: ||M - M^dag||_F <= HERMITIAN_TOL * ||M||_F.
inline constexpr double HERMITIAN_TOL = 1e-10;

// Positive semidefiniteness: min eigenvalue >= -PSD_TOL.
inline constexpr double PSD_TOL = 1e-9;

// Relative accuracy target of Hermitian eigensolves (dim <= 64).
inline constexpr double EIG_TOL = 1e-9;

// State vector normalization: | ||psi||_2 - 1 | <= STATE_NORM_TOL.
inline constexpr double STATE_NORM_TOL = 1e-10;

// Density operator trace: |tr(rho) - 1| <= TRACE_TOL.
inline constexpr double TRACE_TOL = 1e-10;

// Mixture weights of a labeled-state source must sum to 1 within this.
inline constexpr double PROB_SUM_TOL = 1e-12;

// POVM completeness: sum of effects equals identity entrywise within this.
inline constexpr double POVM_SUM_TOL = 1e-9;

// Ensemble members must be unitary: ||U^dag U - I||_F <= UNITARY_TOL.
inline constexpr double UNITARY_TOL = 1e-10;

// Born sampling tolerates outcome probabilities whose total deviates from 1
// by at most this much before renormalizing; beyond it the POVM is rejected.
inline constexpr double BORN_TOTAL_TOL = 1e-8;

// Inverting the measurement channel must round-trip to this accuracy.
inline constexpr double GAMMA_INV_TOL = 1e-9;

// Rank threshold for declaring a measurement channel tomographically
// complete (smallest eigenvalue of its operator-space matrix).
inline constexpr double COMPLETENESS_TOL = 1e-9;

// Default feasibility tolerance of the extreme-point test.
inline constexpr double EXTREME_TOL = 1e-9;

// Loss values are rounded to this many decimals before being grouped into
// the finite image set, so float noise cannot split one value into two.
inline constexpr int LOSS_ROUND_DECIMALS = 12;

} // namespace qpac::tol
