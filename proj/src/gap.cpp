#include "ccrit/gap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>

#include "ccrit/compensated.hpp"
#include "ccrit/lattice_sums.hpp"
#include "ccrit/specfun.hpp"

namespace ccrit::gap {

namespace {

constexpr double kPi = std::numbers::pi;

// Shell enumeration over the positive orthant, local copy of the summation
// idiom used by the lattice module (the contracts there are per-operation;
// here the summand order is fixed by the subset hierarchy of the gap
// equation).
template <class F>
void for_shell(int k, std::int64_t s, F&& f)
{
    std::array<double, 3> n{};
    switch (k) {
    case 1:
        n[0] = static_cast<double>(s);
        f(n);
        break;
    case 2:
        for (std::int64_t i = 1; i < s; ++i) {
            n[0] = static_cast<double>(i);
            n[1] = static_cast<double>(s - i);
            f(n);
        }
        break;
    default:
        for (std::int64_t i = 1; i + 2 <= s; ++i) {
            n[0] = static_cast<double>(i);
            for (std::int64_t j = 1; i + j + 1 <= s; ++j) {
                n[1] = static_cast<double>(j);
                n[2] = static_cast<double>(s - i - j);
                f(n);
            }
        }
        break;
    }
}

// sum over one subset S of the compactified directions:
//   sum_{n_S >= 1} (m / R)^order K_order(m R),  R = sqrt(sum L_i^2 n_i^2).
SeriesValue bessel_subset_sum(double order, double m, std::span<const double> L,
                              const TruncationPolicy& t)
{
    const int k = static_cast<int>(L.size());
    CompensatedSum acc;
    std::int64_t terms = 0;
    double prev_shell = 0.0;
    double last_shell = 0.0;
    int small_streak = 0;
    const std::int64_t s_cap = t.max_index + k - 1;
    for (std::int64_t s = k;; ++s) {
        if (s > s_cap)
            throw budget_error("mass correction sum: max_index = " +
                               std::to_string(t.max_index) + " exhausted (m L likely tiny)");
        double shell_abs = 0.0;
        for_shell(k, s, [&](const std::array<double, 3>& n) {
            double r2 = 0.0;
            for (int i = 0; i < k; ++i)
                r2 += L[i] * L[i] * n[i] * n[i];
            const double r = std::sqrt(r2);
            const double v = std::pow(m / r, order) * specfun::bessel_k(order, m * r);
            acc.add(v);
            shell_abs += std::fabs(v);
            ++terms;
        });
        if (shell_abs <= std::max(t.abs_tol, t.rel_tol * std::fabs(acc.value()))) {
            if (++small_streak >= 2) {
                double ratio = 0.0;
                if (prev_shell > 0.0 && last_shell > 0.0)
                    ratio = std::min(0.9, last_shell / prev_shell);
                const double first_omitted =
                    shell_abs > 0.0 ? shell_abs * std::max(ratio, 1e-3) : 0.0;
                const double bound =
                    (ratio < 1.0) ? first_omitted / (1.0 - ratio) : first_omitted * 10.0;
                return {acc.value(), bound, terms};
            }
        } else {
            small_streak = 0;
        }
        prev_shell = last_shell;
        last_shell = shell_abs;
    }
}

// The square bracket of the gap equation at Bessel order `order`
// (order = D/2 - s for the potential, D/2 - 1 for the mass): subset weights
// 1, 2, ..., 2^{d-1}.
SeriesValue bracket_sum(double order, double m, std::span<const double> L,
                        const TruncationPolicy& t)
{
    const int d = static_cast<int>(L.size());
    CompensatedSum acc;
    double err = 0.0;
    std::int64_t terms = 0;
    for (int mask = 1; mask < (1 << d); ++mask) {
        std::array<double, 3> sub{};
        int k = 0;
        for (int i = 0; i < d; ++i)
            if (mask & (1 << i))
                sub[k++] = L[i];
        const double weight = static_cast<double>(std::int64_t{1} << (k - 1));
        const SeriesValue part =
            bessel_subset_sum(order, m, std::span<const double>(sub.data(), k), t);
        acc.add(weight * part.value);
        err += weight * part.error_bound;
        terms += part.terms_used;
    }
    return {acc.value(), err, terms};
}

double gap_coupling_factor(double D, double coupling)
{
    return 24.0 * coupling / std::pow(2.0 * kPi, 0.5 * D);
}

} // namespace

void GapProblem::validate() const
{
    if (!(dimension > 0.0) || !std::isfinite(dimension))
        throw domain_error("GapProblem: dimension must be positive and finite");
    if (compactified < 1 || compactified > 3)
        throw domain_error("GapProblem: d must be 1, 2 or 3");
    if (static_cast<int>(lengths.size()) != compactified)
        throw domain_error("GapProblem: expected " + std::to_string(compactified) +
                           " lengths, got " + std::to_string(lengths.size()));
    if (compactified > dimension)
        throw domain_error("GapProblem: d <= D required");
    for (double L : lengths)
        if (!(L > 0.0) || !std::isfinite(L))
            throw domain_error("GapProblem: lengths must be positive and finite");
    if (!(coupling >= 0.0) || !std::isfinite(coupling))
        throw domain_error("GapProblem: coupling must be >= 0");
    if (s_max < 1)
        throw domain_error("GapProblem: s_max must be >= 1");
    if (!std::isfinite(m0_sq))
        throw domain_error("GapProblem: m0_sq must be finite");
}

SeriesValue u1_effective_potential(double phi0_sq, const GapProblem& p, double m,
                                   const TruncationPolicy& t)
{
    p.validate();
    t.validate();
    if (!(m > 0.0))
        throw domain_error("u1_effective_potential: m > 0 required");
    if (!(phi0_sq >= 0.0))
        throw domain_error("u1_effective_potential: phi0_sq >= 0 required");
    const double D = p.dimension;
    for (int s = 1; s <= p.s_max; ++s) {
        const double g = s - 0.5 * D;
        if (g <= 0.0 && g == std::floor(g))
            throw pole_error("u1_effective_potential: Gamma(s - D/2) pole at s = " +
                             std::to_string(s));
    }

    const double y = 12.0 * p.coupling * phi0_sq;
    if (y == 0.0)
        return {0.0, 0.0, 1}; // every term carries [12 lambda phi0^2]^s

    CompensatedSum acc;
    double inner_err = 0.0;
    std::int64_t terms = 0;
    double ypow = 1.0;
    double last_term = 0.0;
    for (int s = 1; s <= p.s_max; ++s) {
        ypow *= y;
        const double sign = (s % 2 == 1) ? 1.0 : -1.0;
        const double h = sign / (std::pow(2.0, 0.5 * D + s - 1.0) * std::pow(kPi, 0.5 * D) *
                                 s * specfun::gamma(static_cast<double>(s)));
        const double order = 0.5 * D - s;
        const double gamma_term = std::pow(2.0, s - 0.5 * D - 2.0) *
                                  specfun::gamma(s - 0.5 * D) * std::pow(m, D - 2.0 * s);
        const SeriesValue ks = bracket_sum(order, m, p.lengths, t);
        last_term = ypow * h * (gamma_term + ks.value);
        acc.add(last_term);
        inner_err += std::fabs(ypow * h) * ks.error_bound;
        terms += ks.terms_used + 1;
    }
    // |last s-term| is the alternating-series bound while the terms shrink;
    // once they grow it reports the asymptotic divergence instead.
    return {acc.value(), std::fabs(last_term) + inner_err, terms};
}

SeriesValue mass_correction_sum(const GapProblem& p, double m, const TruncationPolicy& t)
{
    p.validate();
    t.validate();
    if (!(m > 0.0))
        throw domain_error("mass_correction_sum: m > 0 required");
    return bracket_sum(0.5 * p.dimension - 1.0, m, p.lengths, t);
}

double closed_form_gap_defect_d1_D3(double m, double L, double m0_sq, double coupling)
{
    return m * m - m0_sq + 6.0 * coupling / (kPi * L) * std::log1p(-std::exp(-m * L));
}

GapSolution solve_gap(const GapProblem& p, const TruncationPolicy& t, double solver_tol)
{
    p.validate();
    t.validate();
    if (!(solver_tol > 0.0))
        throw domain_error("solve_gap: solver_tol must be > 0");

    if (p.coupling == 0.0) {
        if (p.m0_sq < 0.0)
            throw no_solution_error("solve_gap: free theory with m0_sq < 0 has no "
                                    "disordered-phase solution");
        return {p.m0_sq, 0.0, 0};
    }

    const double factor = gap_coupling_factor(p.dimension, p.coupling);
    int evals = 0;
    const auto defect = [&](double m) {
        ++evals;
        return m * m - p.m0_sq - factor * mass_correction_sum(p, m, t).value;
    };

    // The correction needs ~1/(m L) Bessel terms as m -> 0, so the m -> 0+
    // endpoint is probed at a small positive floor instead (coarser for the
    // multi-dimensional sums, whose shell count grows like (1/m L)^d).
    const double lmax = *std::max_element(p.lengths.begin(), p.lengths.end());
    const double m_floor = (p.compactified == 1 ? 1e-3 : 5e-2) / lmax;

    double lo = m_floor;
    const double d_lo = defect(lo);
    if (d_lo > 0.0)
        throw no_solution_error(
            "solve_gap: no disordered-phase root with m^2 >= 0; defect at m -> 0+ (m = " +
            std::to_string(m_floor) + ") is " + std::to_string(d_lo));
    if (d_lo == 0.0)
        return {lo * lo, 0.0, evals};

    double hi = std::max(1.0, std::sqrt(std::max(p.m0_sq, 0.0)) + 1.0);
    double d_hi = defect(hi);
    while (d_hi < 0.0) {
        hi *= 2.0;
        if (hi > 1e154)
            throw nonconvergence_error("solve_gap: failed to bracket the gap root");
        d_hi = defect(hi);
    }

    // Damped fixed-point iterates tighten the bracket before bisection.
    double x = std::clamp(p.m0_sq, lo * lo, hi * hi);
    for (int i = 0; i < 6; ++i) {
        const double fixed =
            p.m0_sq + factor * mass_correction_sum(p, std::sqrt(std::max(x, lo * lo)), t).value;
        ++evals;
        x = 0.5 * x + 0.5 * fixed;
        const double mx = std::sqrt(std::clamp(x, lo * lo, hi * hi));
        const double dx = defect(mx);
        if (dx < 0.0)
            lo = mx;
        else
            hi = mx;
    }

    double mid = 0.5 * (lo + hi);
    double d_mid = defect(mid);
    constexpr int kMaxBisect = 300;
    for (int i = 0; i < kMaxBisect; ++i) {
        if (std::fabs(d_mid) <= solver_tol)
            return {mid * mid, d_mid, evals};
        if (d_mid < 0.0)
            lo = mid;
        else
            hi = mid;
        mid = 0.5 * (lo + hi);
        d_mid = defect(mid);
    }
    throw nonconvergence_error("solve_gap: bisection did not reach solver_tol = " +
                               std::to_string(solver_tol) + "; last defect = " +
                               std::to_string(d_mid));
}

} // namespace ccrit::gap
