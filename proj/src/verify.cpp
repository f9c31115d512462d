#include "ccrit/verify.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <sstream>

#include "ccrit/criticality.hpp"
#include "ccrit/gap.hpp"
#include "ccrit/lattice_sums.hpp"
#include "ccrit/specfun.hpp"

namespace ccrit::verify {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.772453850905516027298167483341;

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

struct Runner {
    const TruncationPolicy& base;
    std::vector<CheckResult> results;

    TruncationPolicy policy(double rel, std::int64_t want_index) const
    {
        TruncationPolicy t = base;
        t.rel_tol = rel;
        t.max_index = std::min(base.max_index, want_index);
        return t;
    }

    void check(const std::string& name, const std::function<std::pair<bool, std::string>()>& f)
    {
        CheckResult r;
        r.name = name;
        const auto start = std::chrono::steady_clock::now();
        try {
            auto [ok, detail] = f();
            r.passed = ok;
            r.detail = std::move(detail);
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.milliseconds =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        results.push_back(std::move(r));
    }
};

// deterministic pseudo-random doubles in [lo, hi] (implementation-independent)
struct SplitMix {
    std::uint64_t state;
    double next(double lo, double hi)
    {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }
};

} // namespace

bool all_passed(const std::vector<CheckResult>& results)
{
    for (const auto& r : results)
        if (!r.passed)
            return false;
    return true;
}

std::vector<CheckResult> run_all(const TruncationPolicy& base)
{
    Runner run{base, {}};

    run.check("C1 = 6 gamma/pi vs paper 1.1024", [&] {
        const double c1 = crit::c1_constant();
        const double diff = std::fabs(c1 - 1.1024);
        return std::make_pair(diff <= 5e-5, "C1 = " + fmt(c1) + ", |C1 - 1.1024| = " + fmt(diff));
    });

    run.check("C2 vs paper 1.6571", [&] {
        const SeriesValue c2 = crit::c2_constant(run.policy(1e-13, 1000000));
        const double diff = std::fabs(c2.value - 1.6571);
        return std::make_pair(diff <= 1e-4 && c2.error_bound <= 1e-10,
                              "C2 = " + fmt(c2.value) + ", |C2 - 1.6571| = " + fmt(diff) +
                                  ", bound = " + fmt(c2.error_bound));
    });

    run.check("C3 matches Conclusions 2.6757, not Eq. (C3) 2.7657", [&] {
        const SeriesValue c3 = crit::c3_constant(run.policy(1e-13, 1000000));
        const bool ok =
            std::fabs(c3.value - 2.6757) <= 1e-3 && std::fabs(c3.value - 2.7657) > 5e-2;
        return std::make_pair(ok, "computed C3 = " + fmt(c3.value) +
                                      "; paper prints 2.7657 at the defining equation and "
                                      "2.6757 in the conclusions; the sum decides for 2.6757");
    });

    run.check("A_d direct vs Bessel representation, d = 1", [&] {
        lattice::LatticeQuery q{2.0, {1.0}, 1.0};
        const auto t = run.policy(1e-12, 1000000);
        const double a = lattice::a_d_direct(q, t).value;
        const double b = lattice::a_d_bessel(q, t).value;
        const double diff = std::fabs(a - b);
        return std::make_pair(diff <= 1e-10, "direct = " + fmt(a) + ", bessel = " + fmt(b) +
                                                 ", |diff| = " + fmt(diff));
    });

    run.check("A_d direct vs Bessel representation, d = 2", [&] {
        lattice::LatticeQuery q{3.0, {1.0, 1.0}, 1.0};
        const auto t = run.policy(1e-10, 1000000);
        const double a = lattice::a_d_direct(q, t).value;
        const double b = lattice::a_d_bessel(q, t).value;
        const double diff = std::fabs(a - b);
        return std::make_pair(diff <= 1e-8, "direct = " + fmt(a) + ", bessel = " + fmt(b) +
                                                ", |diff| = " + fmt(diff));
    });

    run.check("Epstein-Hurwitz identity on the 20-point grid", [&] {
        const auto t = run.policy(1e-13, 1000000);
        double worst = 0.0;
        for (double nu : {1.0, 1.5, 2.0, 3.0})
            for (double p : {0.3, 0.5, 1.0, 2.0, 5.0}) {
                const double lhs = lattice::epstein_hurwitz_direct(nu, p, t).value;
                const double rhs = lattice::epstein_hurwitz_continued(nu, p, t).value;
                worst = std::max(worst, std::fabs(lhs - rhs));
            }
        return std::make_pair(worst <= 1e-11, "worst |direct - continued| = " + fmt(worst));
    });

    run.check("Epstein-Hurwitz closed form at nu = 1, p = 1", [&] {
        const double lhs =
            lattice::epstein_hurwitz_direct(1.0, 1.0, run.policy(1e-13, 1000000)).value;
        const double rhs = (kPi / std::tanh(kPi) - 1.0) / 2.0;
        const double diff = std::fabs(lhs - rhs);
        return std::make_pair(diff <= 1e-12, "sum = " + fmt(lhs) + ", (pi coth pi - 1)/2 = " +
                                                 fmt(rhs) + ", |diff| = " + fmt(diff));
    });

    run.check("E2(2;1,1): direct, recurrence and zeta-beta identity", [&] {
        const std::array<double, 2> L{1.0, 1.0};
        const double direct = lattice::epstein_d_direct(2.0, L, run.policy(1.5e-8, 100000)).value;
        const double recur = lattice::epstein_d_recurrence(2.0, L, run.policy(1e-13, 1000000)).value;
        constexpr double kCatalan = 0.915965594177219015054603514932; // beta(2)
        const double ident =
            specfun::riemann_zeta(2.0) * kCatalan - specfun::riemann_zeta(4.0);
        const double worst = std::max({std::fabs(direct - recur), std::fabs(direct - ident),
                                       std::fabs(recur - ident)});
        return std::make_pair(worst <= 1e-8, "direct = " + fmt(direct) + ", recurrence = " +
                                                 fmt(recur) + ", identity = " + fmt(ident) +
                                                 ", worst pair = " + fmt(worst));
    });

    run.check("E3(3;1,1,1): direct vs recurrence", [&] {
        const std::array<double, 3> L{1.0, 1.0, 1.0};
        const double direct = lattice::epstein_d_direct(3.0, L, run.policy(3e-8, 100000)).value;
        const double recur =
            lattice::e3_continued(8.0, L, run.policy(1e-13, 1000000)).value;
        const double diff = std::fabs(direct - recur);
        return std::make_pair(diff <= 1e-8, "direct = " + fmt(direct) + ", recurrence = " +
                                                fmt(recur) + ", |diff| = " + fmt(diff));
    });

    run.check("Gap solver vs closed form on 20 random triples", [&] {
        const auto t = run.policy(1e-13, 1000000);
        SplitMix rng{20250809ULL};
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double L = rng.next(0.5, 3.0);
            const double lam = rng.next(0.01, 0.5);
            const double m0sq = rng.next(0.01, 1.0);
            gap::GapProblem p{3.0, 1, {L}, m0sq, lam, 8};
            const double solved = gap::solve_gap(p, t, 1e-12).m_sq;
            // oracle root by bisection on the closed-form defect
            double lo = 1e-8, hi = 10.0;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (gap::closed_form_gap_defect_d1_D3(mid, L, m0sq, lam) < 0.0 ? lo : hi) = mid;
            }
            const double oracle = 0.25 * (lo + hi) * (lo + hi);
            worst = std::max(worst, std::fabs(solved - oracle));
        }
        return std::make_pair(worst <= 1e-9, "worst |m^2 - oracle| = " + fmt(worst));
    });

    run.check("Pole cancellation extrapolates to the Tc coefficient", [&] {
        const auto t = run.policy(1e-13, 1000000);
        const double v2 = crit::bracket_pole_cancellation(1.0, 1.0, 1e-2, t);
        const double v3 = crit::bracket_pole_cancellation(1.0, 1.0, 1e-3, t);
        // Richardson over the O(eps^2) pair {1e-2, 1e-3}
        const double extrap = (100.0 * v3 - v2) / 99.0;
        const double w2 = lattice::w_d(0.0, std::array<double, 2>{1.0, 1.0}, t).value;
        const double target = kSqrtPi * (3.0 * specfun::euler_gamma() + 2.0 * w2);
        const double rel = std::fabs(extrap - target) / std::fabs(target);
        return std::make_pair(rel <= 1e-4, "extrapolated = " + fmt(extrap) + ", target = " +
                                               fmt(target) + ", rel diff = " + fmt(rel));
    });

    run.check("Pole-cancellation residual shrinks >= 5x from eps 1e-3 to 1e-4", [&] {
        const auto t = run.policy(1e-13, 1000000);
        const double v3 = crit::bracket_pole_cancellation(1.0, 1.0, 1e-3, t);
        const double v4 = crit::bracket_pole_cancellation(1.0, 1.0, 1e-4, t);
        const double w2 = lattice::w_d(0.0, std::array<double, 2>{1.0, 1.0}, t).value;
        const double limit = kSqrtPi * (3.0 * specfun::euler_gamma() + 2.0 * w2);
        const double r3 = std::fabs(v3 - limit);
        const double r4 = std::fabs(v4 - limit);
        return std::make_pair(r4 * 5.0 <= r3, "residual(1e-3) = " + fmt(r3) +
                                                  ", residual(1e-4) = " + fmt(r4));
    });

    run.check("tc vanishes exactly at the minimal sizes", [&] {
        const crit::GLParams g{1.0, 1.0, 1.0};
        const double lmin = crit::tc_film(g, 1.0).min_size;
        const double amin = crit::tc_wire_square(g, 1.0).min_size;
        const double vmin = crit::tc_grain_cubic(g, 1.0).min_size;
        const double worst = std::max({std::fabs(crit::tc_film(g, lmin).tc),
                                       std::fabs(crit::tc_wire_square(g, amin).tc),
                                       std::fabs(crit::tc_grain_cubic(g, vmin).tc)});
        return std::make_pair(worst <= 1e-14, "worst |tc(min size)| = " + fmt(worst));
    });

    run.check("tc is collinear in the inverse linear size", [&] {
        const crit::GLParams g{1.3, 0.7, 2.1};
        double worst = 0.0;
        const auto resid = [&](double x1, double t1, double x2, double t2, double x3, double t3) {
            const double pred = t1 + (t3 - t1) * (x2 - x1) / (x3 - x1);
            worst = std::max(worst, std::fabs(t2 - pred));
        };
        const std::array<double, 3> Ls{1.5, 2.5, 4.0};
        resid(1.0 / Ls[0], crit::tc_film(g, Ls[0]).tc, 1.0 / Ls[1], crit::tc_film(g, Ls[1]).tc,
              1.0 / Ls[2], crit::tc_film(g, Ls[2]).tc);
        resid(1.0 / Ls[0], crit::tc_wire_square(g, Ls[0] * Ls[0]).tc, 1.0 / Ls[1],
              crit::tc_wire_square(g, Ls[1] * Ls[1]).tc, 1.0 / Ls[2],
              crit::tc_wire_square(g, Ls[2] * Ls[2]).tc);
        resid(1.0 / Ls[0], crit::tc_grain_cubic(g, std::pow(Ls[0], 3)).tc, 1.0 / Ls[1],
              crit::tc_grain_cubic(g, std::pow(Ls[1], 3)).tc, 1.0 / Ls[2],
              crit::tc_grain_cubic(g, std::pow(Ls[2], 3)).tc);
        return std::make_pair(worst <= 1e-12, "worst collinearity residual = " + fmt(worst));
    });

    run.check("Constant ordering C1 < C2 < C3", [&] {
        const double c1 = crit::c1_constant();
        const double c2 = crit::c2_constant(run.policy(1e-13, 1000000)).value;
        const double c3 = crit::c3_constant(run.policy(1e-13, 1000000)).value;
        return std::make_pair(c1 < c2 && c2 < c3, "C1 = " + fmt(c1) + ", C2 = " + fmt(c2) +
                                                      ", C3 = " + fmt(c3));
    });

    run.check("Riemann zeta reflection formula", [&] {
        double worst = 0.0;
        for (double s : {-3.0, -2.5, -1.5, -0.5}) {
            const double lhs = specfun::riemann_zeta(s);
            const double rhs = specfun::gamma_ratio(0.5 * (1.0 - s), 0.5 * s) *
                               std::pow(kPi, s - 0.5) * specfun::riemann_zeta(1.0 - s);
            const double scale = std::max(std::fabs(lhs), 1e-30);
            worst = std::max(worst, std::fabs(lhs - rhs) / scale);
        }
        return std::make_pair(worst <= 1e-11, "worst relative defect = " + fmt(worst));
    });

    run.check("Bessel K symmetry and three-term recurrence", [&] {
        double worst = 0.0;
        for (double nu : {0.0, 0.5, 1.0, 2.5, 4.0})
            for (double z : {0.1, 1.0, 5.0, 50.0}) {
                const double sym =
                    std::fabs(specfun::bessel_k(nu, z) - specfun::bessel_k(-nu, z));
                const double k0 = specfun::bessel_k(nu, z);
                const double kp = specfun::bessel_k(nu + 1.0, z);
                const double km = specfun::bessel_k(std::fabs(nu - 1.0), z);
                const double rec = std::fabs(kp - km - 2.0 * nu / z * k0) / kp;
                worst = std::max({worst, sym, rec});
            }
        return std::make_pair(worst <= 1e-10, "worst defect = " + fmt(worst));
    });

    run.check("W_d positivity", [&] {
        const auto t = run.policy(1e-13, 1000000);
        bool ok = true;
        for (double eta : {-0.5, 0.0, 0.3, 1.5}) {
            ok = ok && lattice::w_d(eta, std::array<double, 2>{1.0, 2.0}, t).value > 0.0;
            ok = ok && lattice::w_d(eta, std::array<double, 3>{1.0, 1.5, 2.0}, t).value > 0.0;
        }
        return std::make_pair(ok, std::string("every W_d on the grid is > 0"));
    });

    return run.results;
}

} // namespace ccrit::verify
