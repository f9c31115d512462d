#pragma once

#include <span>
#include <vector>

#include "ccrit/series.hpp"

namespace ccrit::lattice {

/// Inputs for the massive lattice sums A_d^{c^2}(nu; b_1..b_d):
/// exponent nu, the d inverse-length parameters, and the mass parameter c.
struct LatticeQuery {
    double nu = 0.0;
    std::vector<double> lengths; // b_1..b_d (or L_1..L_d), 1 <= d <= 3
    double mass_param = 0.0;     // c >= 0; c > 0 required for A_d

    void validate(bool require_mass) const;
};

/// A_d^{c^2}(nu; b) = sum over Z^d of (b_1^2 n_1^2 + ... + c^2)^{-nu},
/// summed directly through the 2^d subset decomposition. Requires c > 0 and
/// nu > d/2 (nonconvergence_error otherwise).
SeriesValue a_d_direct(const LatticeQuery& q, const TruncationPolicy& t);

/// The same quantity through the Bessel-function representation
/// (exponentially convergent; valid for any real nu off the Gamma pole set).
SeriesValue a_d_bessel(const LatticeQuery& q, const TruncationPolicy& t);

/// sum_{n>=1} (n^2 + p^2)^{-nu}, nu > 1/2, by direct summation with an
/// Euler-Maclaurin-accelerated tail.
SeriesValue epstein_hurwitz_direct(double nu, double p, const TruncationPolicy& t);

/// The analytic continuation of the same sum:
/// -p^{-2nu}/2 + sqrt(pi)/(2 p^{2nu-1} Gamma(nu)) [Gamma(nu-1/2)
///   + 4 sum (pi p n)^{nu-1/2} K_{nu-1/2}(2 pi p n)], valid for nu off the
/// poles of Gamma(nu-1/2).
SeriesValue epstein_hurwitz_continued(double nu, double p, const TruncationPolicy& t);

/// E_d(nu; L) = sum_{n_i >= 1} (L_1^2 n_1^2 + ... + L_d^2 n_d^2)^{-nu},
/// direct positive-orthant sum, nu > d/2.
SeriesValue epstein_d_direct(double nu, std::span<const double> lengths,
                             const TruncationPolicy& t);

/// E_d via one Epstein-Hurwitz reduction per summation ordering, averaged
/// over all d! orderings (the symmetrized definition). d in {2, 3}.
SeriesValue epstein_d_recurrence(double nu, std::span<const double> lengths,
                                 const TruncationPolicy& t);

/// Diagnostic: the continuation obtained from one fixed summation ordering
/// (innermost index last). Equals the symmetrized value wherever all
/// orderings agree.
SeriesValue epstein_d_single_ordering(double nu, std::span<const double> lengths,
                                      const TruncationPolicy& t);

/// W_d(eta; L) = sum_i (1/L_i) sum_{n} (pi n_i / (L_i s_i))^eta
///   K_eta(2 pi n_i s_i / L_i),  s_i^2 = sum_{j != i} L_j^2 n_j^2.
/// Exponentially convergent for any real eta; d in {2, 3}.
SeriesValue w_d(double eta, std::span<const double> lengths, const TruncationPolicy& t);

/// E_2((D-2)/2; L1, L2) through its three-term continued form
/// (zeta(D-2), zeta(D-3) and W_2((D-3)/2) pieces). Refuses D within 1e-6 of
/// the poles {3, 4}; the D -> 3 physics limit lives in the criticality module.
SeriesValue e2_continued(double D, double L1, double L2, const TruncationPolicy& t);

/// E_3((D-2)/2; L1, L2, L3) by the symmetrized recurrence, with the
/// distinct-index cyclic weighting. Refuses D within 1e-6 of {3, 4, 5}.
SeriesValue e3_continued(double D, std::span<const double> lengths,
                         const TruncationPolicy& t);

} // namespace ccrit::lattice
