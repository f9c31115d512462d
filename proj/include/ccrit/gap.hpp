#pragma once

#include <vector>

#include "ccrit/series.hpp"

namespace ccrit::gap {

/// Inputs of the boundary-dependent mass (gap) equation. Natural units with
/// the mass scale set to 1; m0_sq carries the sign of alpha (T - T0) freely.
struct GapProblem {
    double dimension = 3.0;      // D, the analytic-continuation parameter
    int compactified = 1;        // d in {1, 2, 3}
    std::vector<double> lengths; // L_1..L_d
    double m0_sq = 0.0;          // bare mass squared
    double coupling = 0.0;       // renormalized lambda (>= 0; 0 = free theory)
    int s_max = 8;               // order cap for the effective-potential series

    void validate() const;
};

struct GapSolution {
    double m_sq = 0.0;    // boundary-modified squared mass
    double residual = 0.0; // gap-equation defect at the returned mass
    int iterations = 0;    // defect evaluations spent
};

/// One-loop effective-potential series: partial sum over s = 1..s_max of
/// [12 lambda phi0^2]^s h(D,s) [Gamma-term + compactified Bessel sums].
/// The series is asymptotic; error_bound carries the last s-term (an
/// alternating-series bound while the terms decrease, a divergence report
/// once they grow) plus the inner Bessel tails. Throws pole_error when
/// Gamma(s - D/2) hits a pole for some s <= s_max.
SeriesValue u1_effective_potential(double phi0_sq, const GapProblem& p, double m,
                                   const TruncationPolicy& t);

/// The square bracket of the gap equation: the full subset hierarchy of
/// K_{D/2-1} sums (singles, pairs, triple), with the L-independent
/// Gamma(1 - D/2) m^{D-2} parcel already subtracted for every D.
SeriesValue mass_correction_sum(const GapProblem& p, double m, const TruncationPolicy& t);

/// Solve m^2 = m0_sq + 24 lambda / (2 pi)^{D/2} * mass_correction_sum(m)
/// by damped fixed-point iteration that seeds a bracketed bisection on the
/// (strictly increasing) defect. Throws no_solution_error when no root with
/// m^2 >= 0 exists, nonconvergence_error after the iteration cap.
GapSolution solve_gap(const GapProblem& p, const TruncationPolicy& t, double solver_tol);

/// Independent oracle for D = 3, d = 1 (half-integer Bessel reduction):
/// returns m^2 - m0_sq + (6 lambda / pi L) ln(1 - e^{-m L}).
double closed_form_gap_defect_d1_D3(double m, double L, double m0_sq, double coupling);

} // namespace ccrit::gap
