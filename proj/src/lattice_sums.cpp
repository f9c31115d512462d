#include "ccrit/lattice_sums.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include "ccrit/compensated.hpp"
#include "ccrit/specfun.hpp"

namespace ccrit {

void TruncationPolicy::validate() const
{
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
        throw domain_error("TruncationPolicy: rel_tol must lie in (0, 1)");
    if (!(abs_tol > 0.0 && abs_tol < 1.0))
        throw domain_error("TruncationPolicy: abs_tol must lie in (0, 1)");
    if (max_index < 2)
        throw domain_error("TruncationPolicy: max_index must be >= 2");
}

} // namespace ccrit

namespace ccrit::lattice {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.772453850905516027298167483341;
constexpr double kPoleWindow = 1e-6;

// x^n for small integer n, cheaper and exacter than pow on the hot paths.
double ipow(double x, int n)
{
    double r = 1.0;
    for (int i = 0; i < n; ++i)
        r *= x;
    return r;
}

// Visit every (n_1..n_k), n_i >= 1, with n_1 + ... + n_k = s, in
// lexicographic order. k <= 3.
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
    case 3:
        for (std::int64_t i = 1; i + 2 <= s; ++i) {
            n[0] = static_cast<double>(i);
            for (std::int64_t j = 1; i + j + 1 <= s; ++j) {
                n[1] = static_cast<double>(j);
                n[2] = static_cast<double>(s - i - j);
                f(n);
            }
        }
        break;
    default:
        throw domain_error("lattice sums support 1 <= d <= 3");
    }
}

double stop_threshold(const TruncationPolicy& t, double current)
{
    return std::max(t.abs_tol, t.rel_tol * std::fabs(current));
}

// sum over the positive orthant of (sum_i a_i n_i^2 + c2)^{-nu}, nu > k/2,
// by shells of constant n_1 + ... + n_k with an integral-comparison tail
// bound anchored at the shell corner.
SeriesValue power_orthant_sum(double nu, std::span<const double> a, double c2,
                              const TruncationPolicy& t)
{
    const int k = static_cast<int>(a.size());
    const double amin = *std::min_element(a.begin(), a.end());
    double fact_km1 = 1.0;
    for (int i = 2; i < k; ++i)
        fact_km1 *= i;
    const double tail_coeff =
        std::pow(k / amin, nu) / ((2.0 * nu - k) * fact_km1);
    const int fast = (nu == std::floor(nu) && nu >= 1.0 && nu <= 12.0)
                         ? static_cast<int>(nu)
                         : 0;

    CompensatedSum acc;
    std::int64_t terms = 0;
    const std::int64_t s_cap = t.max_index + k - 1;
    for (std::int64_t s = k;; ++s) {
        if (s > s_cap)
            throw budget_error("power-law lattice sum: max_index = " +
                               std::to_string(t.max_index) +
                               " exhausted before reaching rel_tol");
        for_shell(k, s, [&](const std::array<double, 3>& n) {
            double base = c2;
            for (int i = 0; i < k; ++i)
                base += a[i] * n[i] * n[i];
            acc.add(fast ? 1.0 / ipow(base, fast) : std::pow(base, -nu));
            ++terms;
        });
        const double tail = tail_coeff * std::pow(static_cast<double>(s), k - 2.0 * nu);
        if (tail <= stop_threshold(t, acc.value()))
            return {acc.value(), tail, terms};
    }
}

// Exponentially decaying orthant sum (Bessel-type summands). Stops once two
// consecutive shells fall below the threshold; the reported bound is the
// first omitted shell extrapolated geometrically.
template <class Term>
SeriesValue exp_shell_sum(int k, const TruncationPolicy& t, Term&& term)
{
    CompensatedSum acc;
    std::int64_t terms = 0;
    double prev_shell = 0.0;
    double last_shell = 0.0;
    int small_streak = 0;
    const std::int64_t s_cap = t.max_index + k - 1;
    for (std::int64_t s = k;; ++s) {
        if (s > s_cap)
            throw budget_error("Bessel lattice sum: max_index = " +
                               std::to_string(t.max_index) +
                               " exhausted before reaching rel_tol");
        double shell_abs = 0.0;
        for_shell(k, s, [&](const std::array<double, 3>& n) {
            const double v = term(n);
            acc.add(v);
            shell_abs += std::fabs(v);
            ++terms;
        });
        if (shell_abs <= stop_threshold(t, acc.value())) {
            if (++small_streak >= 2) {
                double ratio = 0.0;
                if (prev_shell > 0.0 && last_shell > 0.0)
                    ratio = std::min(0.9, last_shell / prev_shell);
                const double first_omitted = shell_abs > 0.0 ? shell_abs * std::max(ratio, 1e-3)
                                                             : 0.0;
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

// Hurwitz tail  sum_{m>=0} (a+m)^{-s}  by Euler-Maclaurin, a >= 2, s > 1.
double hurwitz_tail(double s, double a)
{
    static constexpr double bern[13] = {
        0.0,
        8.3333333333333333e-02,
        -1.3888888888888889e-03,
        3.3068783068783069e-05,
        -8.2671957671957672e-07,
        2.0876756987868099e-08,
        -5.2841901386874932e-10,
        1.3382536530684679e-11,
        -3.3896802963225829e-13,
        8.5860620562778446e-15,
        -2.1748686985580619e-16,
        5.5090028283602295e-18,
        -1.3954464685812523e-19,
    };
    CompensatedSum acc;
    acc.add(std::pow(a, 1.0 - s) / (s - 1.0));
    acc.add(0.5 * std::pow(a, -s));
    double poch = s;
    double apow = std::pow(a, -s - 1.0);
    for (int k = 1; k <= 12; ++k) {
        acc.add(bern[k] * poch * apow);
        poch *= (s + 2.0 * k - 1.0) * (s + 2.0 * k);
        apow /= a * a;
    }
    return acc.value();
}

// Core of the accelerated Epstein-Hurwitz sum: explicit terms to N, then the
// remainder expanded binomially in (p/n)^2 against Hurwitz tails.
SeriesValue eh_direct_core(double nu, double p, const TruncationPolicy& t)
{
    const std::int64_t N =
        std::max<std::int64_t>(16, static_cast<std::int64_t>(std::ceil(2.5 * p)));
    if (N > t.max_index)
        throw budget_error("epstein_hurwitz_direct: explicit range " + std::to_string(N) +
                           " exceeds max_index = " + std::to_string(t.max_index));
    const double p2 = p * p;
    const int fast = (nu == std::floor(nu) && nu >= 1.0 && nu <= 12.0)
                         ? static_cast<int>(nu)
                         : 0;
    CompensatedSum acc;
    for (std::int64_t n = 1; n <= N; ++n) {
        const double base = static_cast<double>(n) * n + p2;
        acc.add(fast ? 1.0 / ipow(base, fast) : std::pow(base, -nu));
    }
    std::int64_t terms = N;

    const double a = static_cast<double>(N) + 1.0;
    double coef = 1.0; // binom(-nu, k) (-p^2)^k, accumulated
    double last = 0.0;
    for (int k = 0; k <= 200; ++k) {
        const double piece = coef * hurwitz_tail(2.0 * nu + 2.0 * k, a);
        acc.add(piece);
        ++terms;
        last = std::fabs(piece);
        if (k > nu && last <= 1e-18 * std::fabs(acc.value()))
            break;
        coef *= -(nu + k) / (k + 1.0) * p2;
    }
    const double bound = 2.0 * last + 8.0 * std::numeric_limits<double>::epsilon() *
                                          std::fabs(acc.value());
    return {acc.value(), bound, terms};
}

// One i-term of W_d: the d-dimensional sum whose Bessel argument is tied to
// index i.
SeriesValue w_d_single(double eta, std::span<const double> L, int i,
                       const TruncationPolicy& t)
{
    const int d = static_cast<int>(L.size());
    const double Li = L[i];
    return exp_shell_sum(d, t, [&](const std::array<double, 3>& n) {
        double s2 = 0.0;
        for (int j = 0; j < d; ++j)
            if (j != i)
                s2 += L[j] * L[j] * n[j] * n[j];
        const double s = std::sqrt(s2);
        const double z = 2.0 * kPi * n[i] * s / Li;
        const double pw = (eta == 0.0) ? 1.0 : std::pow(kPi * n[i] / (Li * s), eta);
        return pw * specfun::bessel_k(eta, z) / Li;
    });
}

void require_positive_lengths(std::span<const double> L, const char* who)
{
    if (L.empty() || L.size() > 3)
        throw domain_error(std::string(who) + ": 1 to 3 lengths required");
    for (double x : L)
        if (!(x > 0.0) || !std::isfinite(x))
            throw domain_error(std::string(who) + ": lengths must be positive and finite");
}

// Single-ordering continuation, innermost (last) index reduced first:
// E_k(nu; L_1..L_k) = -E_{k-1}(nu; prefix)/2
//   + sqrt(pi) Gamma(nu-1/2) / (2 Gamma(nu) L_k) E_{k-1}(nu-1/2; prefix)
//   + 2 sqrt(pi)/Gamma(nu) * [i = k piece of W_k(nu-1/2)].
SeriesValue epstein_ordered(double nu, std::span<const double> L,
                            const TruncationPolicy& t)
{
    const int k = static_cast<int>(L.size());
    if (k == 1) {
        if (2.0 * nu == 1.0)
            throw pole_error("E_1(nu; L): zeta(2 nu) pole at nu = 1/2");
        const double v = std::pow(L[0], -2.0 * nu) * specfun::riemann_zeta(2.0 * nu);
        return {v, 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(v), 1};
    }
    if (nu - 0.5 <= 0.0 && nu - 0.5 == std::floor(nu - 0.5))
        throw pole_error("epstein recurrence: Gamma(nu - 1/2) pole at nu = " +
                         std::to_string(nu));
    const auto prefix = L.first(k - 1);
    const SeriesValue A = epstein_ordered(nu, prefix, t);
    const SeriesValue B = epstein_ordered(nu - 0.5, prefix, t);
    const double coef = 0.5 * kSqrtPi * specfun::gamma_ratio(nu - 0.5, nu);
    const double rg = specfun::reciprocal_gamma(nu);
    SeriesValue W{0.0, 0.0, 0};
    if (rg != 0.0)
        W = w_d_single(nu - 0.5, L, k - 1, t);
    const double v = -0.5 * A.value + coef / L[k - 1] * B.value + 2.0 * kSqrtPi * rg * W.value;
    const double eb = 0.5 * A.error_bound + std::fabs(coef / L[k - 1]) * B.error_bound +
                      2.0 * kSqrtPi * std::fabs(rg) * W.error_bound;
    return {v, eb, A.terms_used + B.terms_used + W.terms_used};
}

} // namespace

void LatticeQuery::validate(bool require_mass) const
{
    require_positive_lengths(lengths, "LatticeQuery");
    if (!(mass_param >= 0.0) || !std::isfinite(mass_param))
        throw domain_error("LatticeQuery: mass_param must be >= 0 and finite");
    if (require_mass && mass_param == 0.0)
        throw domain_error("LatticeQuery: mass_param must be > 0 for A_d sums; "
                           "the c = 0 limit is the Epstein function E_d");
}

SeriesValue a_d_direct(const LatticeQuery& q, const TruncationPolicy& t)
{
    q.validate(true);
    t.validate();
    const int d = static_cast<int>(q.lengths.size());
    if (!(q.nu > 0.5 * d))
        throw nonconvergence_error("a_d_direct: requires nu > d/2 (nu = " +
                                   std::to_string(q.nu) + ", d = " + std::to_string(d) + ")");
    const double c = q.mass_param;
    const double c2 = c * c;

    CompensatedSum acc;
    acc.add(std::pow(c, -2.0 * q.nu));
    double err = 0.0;
    std::int64_t terms = 1;
    for (int mask = 1; mask < (1 << d); ++mask) {
        std::array<double, 3> sub{};
        int k = 0;
        for (int i = 0; i < d; ++i)
            if (mask & (1 << i))
                sub[k++] = q.lengths[i];
        const double weight = static_cast<double>(1 << k);
        SeriesValue part;
        if (k == 1) {
            // b^{-2nu} sum (n^2 + (c/b)^2)^{-nu}
            part = eh_direct_core(q.nu, c / sub[0], t);
            const double scale = std::pow(sub[0], -2.0 * q.nu);
            part.value *= scale;
            part.error_bound *= scale;
        } else {
            std::array<double, 3> a2{};
            for (int i = 0; i < k; ++i)
                a2[i] = sub[i] * sub[i];
            part = power_orthant_sum(q.nu, std::span<const double>(a2.data(), k), c2, t);
        }
        acc.add(weight * part.value);
        err += weight * part.error_bound;
        terms += part.terms_used;
    }
    return {acc.value(), err, terms};
}

SeriesValue a_d_bessel(const LatticeQuery& q, const TruncationPolicy& t)
{
    q.validate(true);
    t.validate();
    const int d = static_cast<int>(q.lengths.size());
    const double nu = q.nu;
    const double eta = nu - 0.5 * d;
    if (eta <= 0.0 && eta == std::floor(eta) && !(nu <= 0.0 && nu == std::floor(nu)))
        throw pole_error("a_d_bessel: Gamma(nu - d/2) pole at nu = " + std::to_string(nu) +
                         " with d = " + std::to_string(d));
    const double c = q.mass_param;
    const double twopic = 2.0 * kPi * c;

    double pref = std::pow(2.0, eta + 1.0) * std::pow(kPi, 2.0 * nu - 0.5 * d);
    for (double b : q.lengths)
        pref /= b;

    CompensatedSum bracket;
    bracket.add(std::pow(2.0, eta - 1.0) * specfun::gamma_ratio(eta, nu) *
                std::pow(twopic, d - 2.0 * nu));
    double err = 0.0;
    std::int64_t terms = 1;

    const double rg = specfun::reciprocal_gamma(nu);
    if (rg != 0.0) {
        for (int mask = 1; mask < (1 << d); ++mask) {
            std::array<double, 3> invb2{};
            int k = 0;
            for (int i = 0; i < d; ++i)
                if (mask & (1 << i))
                    invb2[k++] = 1.0 / (q.lengths[i] * q.lengths[i]);
            const double weight = static_cast<double>(1 << k) * rg;
            const SeriesValue part = exp_shell_sum(k, t, [&](const std::array<double, 3>& n) {
                double r2 = 0.0;
                for (int i = 0; i < k; ++i)
                    r2 += invb2[i] * n[i] * n[i];
                const double r = std::sqrt(r2);
                return std::pow(r / twopic, eta) * specfun::bessel_k(eta, twopic * r);
            });
            bracket.add(weight * part.value);
            err += std::fabs(weight) * part.error_bound;
            terms += part.terms_used;
        }
    }
    const double value = pref * bracket.value();
    return {value, pref * err + 8.0 * std::numeric_limits<double>::epsilon() * std::fabs(value),
            terms};
}

SeriesValue epstein_hurwitz_direct(double nu, double p, const TruncationPolicy& t)
{
    t.validate();
    if (!(p > 0.0))
        throw domain_error("epstein_hurwitz_direct: p > 0 required");
    if (!(nu > 0.5))
        throw nonconvergence_error("epstein_hurwitz_direct: requires nu > 1/2, got nu = " +
                                   std::to_string(nu));
    return eh_direct_core(nu, p, t);
}

SeriesValue epstein_hurwitz_continued(double nu, double p, const TruncationPolicy& t)
{
    t.validate();
    if (!(p > 0.0))
        throw domain_error("epstein_hurwitz_continued: p > 0 required");
    const double half = nu - 0.5;
    if (half <= 0.0 && half == std::floor(half))
        throw pole_error("epstein_hurwitz_continued: Gamma(nu - 1/2) pole at nu = " +
                         std::to_string(nu));

    CompensatedSum acc;
    acc.add(-0.5 * std::pow(p, -2.0 * nu));
    const double shell_pref = 0.5 * kSqrtPi * std::pow(p, 1.0 - 2.0 * nu);
    acc.add(shell_pref * specfun::gamma_ratio(half, nu));
    double err = 0.0;
    std::int64_t terms = 2;

    const double rg = specfun::reciprocal_gamma(nu);
    if (rg != 0.0) {
        const SeriesValue ks = exp_shell_sum(1, t, [&](const std::array<double, 3>& n) {
            const double z = 2.0 * kPi * p * n[0];
            return std::pow(kPi * p * n[0], half) * specfun::bessel_k(half, z);
        });
        acc.add(shell_pref * rg * 4.0 * ks.value);
        err += std::fabs(shell_pref * rg * 4.0) * ks.error_bound;
        terms += ks.terms_used;
    }
    const double value = acc.value();
    return {value, err + 8.0 * std::numeric_limits<double>::epsilon() * std::fabs(value), terms};
}

SeriesValue epstein_d_direct(double nu, std::span<const double> lengths,
                             const TruncationPolicy& t)
{
    t.validate();
    require_positive_lengths(lengths, "epstein_d_direct");
    const int d = static_cast<int>(lengths.size());
    if (!(nu > 0.5 * d))
        throw nonconvergence_error("epstein_d_direct: requires nu > d/2 (nu = " +
                                   std::to_string(nu) + ", d = " + std::to_string(d) + ")");
    std::array<double, 3> a2{};
    for (int i = 0; i < d; ++i)
        a2[i] = lengths[i] * lengths[i];
    return power_orthant_sum(nu, std::span<const double>(a2.data(), d), 0.0, t);
}

SeriesValue epstein_d_single_ordering(double nu, std::span<const double> lengths,
                                      const TruncationPolicy& t)
{
    t.validate();
    require_positive_lengths(lengths, "epstein_d_single_ordering");
    if (lengths.size() < 2)
        throw domain_error("epstein_d_single_ordering: d in {2, 3} required");
    return epstein_ordered(nu, lengths, t);
}

SeriesValue epstein_d_recurrence(double nu, std::span<const double> lengths,
                                 const TruncationPolicy& t)
{
    t.validate();
    require_positive_lengths(lengths, "epstein_d_recurrence");
    const int d = static_cast<int>(lengths.size());
    if (d < 2)
        throw domain_error("epstein_d_recurrence: d in {2, 3} required");

    std::array<int, 3> idx{0, 1, 2};
    std::vector<double> vals;
    double err = 0.0;
    std::int64_t terms = 0;
    do {
        std::array<double, 3> perm{};
        for (int i = 0; i < d; ++i)
            perm[i] = lengths[idx[i]];
        const SeriesValue one =
            epstein_ordered(nu, std::span<const double>(perm.data(), d), t);
        vals.push_back(one.value);
        err += one.error_bound;
        terms += one.terms_used;
    } while (std::next_permutation(idx.begin(), idx.begin() + d));

    // Averaging in sorted order keeps the result exactly permutation
    // symmetric in the input lengths.
    std::sort(vals.begin(), vals.end());
    CompensatedSum acc;
    for (double v : vals)
        acc.add(v);
    const double inv = 1.0 / static_cast<double>(vals.size());
    return {acc.value() * inv, err * inv, terms};
}

SeriesValue w_d(double eta, std::span<const double> lengths, const TruncationPolicy& t)
{
    t.validate();
    require_positive_lengths(lengths, "w_d");
    const int d = static_cast<int>(lengths.size());
    if (d < 2)
        throw domain_error("w_d: d in {2, 3} required");
    CompensatedSum acc;
    double err = 0.0;
    std::int64_t terms = 0;
    for (int i = 0; i < d; ++i) {
        const SeriesValue part = w_d_single(eta, lengths, i, t);
        acc.add(part.value);
        err += part.error_bound;
        terms += part.terms_used;
    }
    return {acc.value(), err, terms};
}

SeriesValue e2_continued(double D, double L1, double L2, const TruncationPolicy& t)
{
    t.validate();
    const std::array<double, 2> L{L1, L2};
    require_positive_lengths(L, "e2_continued");
    for (double pole : {3.0, 4.0})
        if (std::fabs(D - pole) < kPoleWindow)
            throw pole_error("e2_continued: D = " + std::to_string(D) +
                             " is inside the refusal window of the pole at D = " +
                             std::to_string(pole) +
                             "; use the criticality module for the D -> 3 limit");
    const double nu = 0.5 * (D - 2.0);
    CompensatedSum acc;
    acc.add(-0.25 * (std::pow(L1, 2.0 - D) + std::pow(L2, 2.0 - D)) *
            specfun::riemann_zeta(D - 2.0));
    acc.add(0.25 * kSqrtPi * specfun::gamma_ratio(nu - 0.5, nu) *
            (1.0 / (L1 * std::pow(L2, D - 3.0)) + 1.0 / (std::pow(L1, D - 3.0) * L2)) *
            specfun::riemann_zeta(D - 3.0));
    const double rg = specfun::reciprocal_gamma(nu);
    SeriesValue W{0.0, 0.0, 0};
    if (rg != 0.0)
        W = w_d(0.5 * (D - 3.0), L, t);
    acc.add(kSqrtPi * rg * W.value);
    const double value = acc.value();
    return {value,
            kSqrtPi * std::fabs(rg) * W.error_bound +
                8.0 * std::numeric_limits<double>::epsilon() * std::fabs(value),
            W.terms_used + 2};
}

SeriesValue e3_continued(double D, std::span<const double> lengths,
                         const TruncationPolicy& t)
{
    t.validate();
    require_positive_lengths(lengths, "e3_continued");
    if (lengths.size() != 3)
        throw domain_error("e3_continued: exactly three lengths required");
    for (double pole : {3.0, 4.0, 5.0})
        if (std::fabs(D - pole) < kPoleWindow)
            throw pole_error("e3_continued: D = " + std::to_string(D) +
                             " is inside the refusal window of the pole at D = " +
                             std::to_string(pole));
    const double nu = 0.5 * (D - 2.0);
    const double L1 = lengths[0], L2 = lengths[1], L3 = lengths[2];

    CompensatedSum acc;
    double err = 0.0;
    std::int64_t terms = 0;

    // pairs i < j at order nu
    const std::array<std::array<double, 2>, 3> pairs{{{L1, L2}, {L1, L3}, {L2, L3}}};
    for (const auto& pr : pairs) {
        const SeriesValue e2 = e2_continued(D, pr[0], pr[1], t);
        acc.add(-e2.value / 6.0);
        err += e2.error_bound / 6.0;
        terms += e2.terms_used;
    }

    // distinct-index cyclic terms (the (1 + eps_ijk)/2 weighting keeps the
    // even permutations of {1,2,3}); E_2 at order nu - 1/2, i.e. D - 1.
    const double coef = kSqrtPi / 6.0 * specfun::gamma_ratio(nu - 0.5, nu);
    const std::array<std::array<double, 3>, 3> cyc{{{L1, L2, L3}, {L2, L3, L1}, {L3, L1, L2}}};
    for (const auto& c : cyc) {
        const SeriesValue e2 = e2_continued(D - 1.0, c[1], c[2], t);
        acc.add(coef / c[0] * e2.value);
        err += std::fabs(coef / c[0]) * e2.error_bound;
        terms += e2.terms_used;
    }

    const double rg = specfun::reciprocal_gamma(nu);
    SeriesValue W{0.0, 0.0, 0};
    if (rg != 0.0)
        W = w_d(0.5 * (D - 3.0), lengths, t);
    acc.add(2.0 * kSqrtPi / 3.0 * rg * W.value);
    err += 2.0 * kSqrtPi / 3.0 * std::fabs(rg) * W.error_bound;
    terms += W.terms_used;

    const double value = acc.value();
    return {value, err + 8.0 * std::numeric_limits<double>::epsilon() * std::fabs(value), terms};
}

} // namespace ccrit::lattice
