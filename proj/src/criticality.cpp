#include "ccrit/criticality.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include "ccrit/compensated.hpp"
#include "ccrit/lattice_sums.hpp"
#include "ccrit/specfun.hpp"

namespace ccrit::crit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.772453850905516027298167483341;

// K_0 arguments beyond this leave no residue at double precision
// (e^-76 ~ 1e-33); products n1 n2 <= 12 already clear it.
constexpr double kBesselCut = 76.0;

// sum_{n1,n2 >= 1} K_0(2 pi n1 n2), by rows of fixed n1.
SeriesValue k0_product_sum(const TruncationPolicy& t)
{
    CompensatedSum acc;
    std::int64_t terms = 0;
    const std::int64_t n1_cap = static_cast<std::int64_t>(kBesselCut / (2.0 * kPi)) + 1;
    if (n1_cap > t.max_index)
        throw budget_error("c2/c3 Bessel sum: max_index too small");
    for (std::int64_t n1 = 1; n1 <= n1_cap; ++n1) {
        for (std::int64_t n2 = 1; 2.0 * kPi * n1 * n2 <= kBesselCut; ++n2) {
            acc.add(specfun::bessel_k(0.0, 2.0 * kPi * n1 * n2));
            ++terms;
        }
    }
    // first omitted diagonal, geometrically extended
    const double bound = 2.0 * (n1_cap + 1) *
                         std::sqrt(0.25 / (n1_cap + 1)) * std::exp(-kBesselCut) /
                         (1.0 - std::exp(-2.0 * kPi));
    return {acc.value(), bound, terms};
}

CriticalResult linear_law(const GLParams& g, double c_constant, double linear_size,
                          double size, int power)
{
    const double min_linear = c_constant * g.coupling / (g.alpha * g.t0);
    double min_size = min_linear;
    for (int i = 1; i < power; ++i)
        min_size *= min_linear;
    // tc = t0 (1 - min_linear / linear_size) vanishes exactly at the minimal size
    const double tc = g.t0 * (1.0 - min_linear / linear_size);
    return {tc, c_constant, min_size, size > min_size};
}

} // namespace

void GLParams::validate() const
{
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw domain_error("GLParams: alpha must be > 0");
    if (!(coupling > 0.0) || !std::isfinite(coupling))
        throw domain_error("GLParams: coupling must be > 0");
    if (!(t0 > 0.0) || !std::isfinite(t0))
        throw domain_error("GLParams: t0 must be > 0");
}

void Geometry::validate() const
{
    const std::size_t expected =
        kind == GeometryKind::film ? 1 : kind == GeometryKind::wire ? 2 : 3;
    if (lengths.size() != expected)
        throw domain_error("Geometry: length count does not match kind");
    for (double L : lengths)
        if (!(L > 0.0) || !std::isfinite(L))
            throw domain_error("Geometry: lengths must be positive and finite");
    if (kind == GeometryKind::wire && lengths[0] != lengths[1])
        throw domain_error("Geometry: the closed-form wire law requires L1 = L2");
    if (kind == GeometryKind::grain &&
        (lengths[0] != lengths[1] || lengths[1] != lengths[2]))
        throw domain_error("Geometry: the closed-form grain law requires a cube");
}

double c1_constant()
{
    return 6.0 * specfun::euler_gamma() / kPi;
}

SeriesValue c2_constant(const TruncationPolicy& t)
{
    t.validate();
    const SeriesValue k0 = k0_product_sum(t);
    return {9.0 * specfun::euler_gamma() / kPi + 12.0 / kPi * k0.value,
            12.0 / kPi * k0.error_bound + 4.0 * std::numeric_limits<double>::epsilon(),
            k0.terms_used + 1};
}

SeriesValue c3_constant(const TruncationPolicy& t)
{
    t.validate();
    CompensatedSum acc;
    double err = 0.0;
    std::int64_t terms = 1;
    acc.add(1.0);
    acc.add(9.0 * specfun::euler_gamma() / kPi);

    // (12/pi) sum e^{-2 pi n1 n2} / n1
    {
        CompensatedSum s;
        for (std::int64_t n1 = 1; 2.0 * kPi * n1 <= kBesselCut; ++n1)
            for (std::int64_t n2 = 1; 2.0 * kPi * n1 * n2 <= kBesselCut; ++n2) {
                s.add(std::exp(-2.0 * kPi * n1 * n2) / n1);
                ++terms;
            }
        acc.add(12.0 / kPi * s.value());
        err += 12.0 / kPi * 2.0 * std::exp(-kBesselCut);
    }

    // (48/pi) sum K_0(2 pi n1 n2)
    {
        const SeriesValue k0 = k0_product_sum(t);
        acc.add(48.0 / kPi * k0.value);
        err += 48.0 / kPi * k0.error_bound;
        terms += k0.terms_used;
    }

    // (48/pi) sum K_0(2 pi n1 sqrt(n2^2 + n3^2))
    {
        CompensatedSum s;
        const double rmax = kBesselCut / (2.0 * kPi);
        for (std::int64_t n2 = 1; n2 * n2 < rmax * rmax; ++n2)
            for (std::int64_t n3 = 1; n2 * n2 + n3 * n3 < rmax * rmax; ++n3) {
                const double r = std::sqrt(static_cast<double>(n2 * n2 + n3 * n3));
                for (std::int64_t n1 = 1; n1 * r <= rmax; ++n1) {
                    s.add(specfun::bessel_k(0.0, 2.0 * kPi * n1 * r));
                    ++terms;
                }
            }
        acc.add(48.0 / kPi * s.value());
        err += 48.0 / kPi * 4.0 * rmax * rmax * std::exp(-kBesselCut);
    }

    return {acc.value(), err + 8.0 * std::numeric_limits<double>::epsilon() * acc.value(), terms};
}

CriticalResult tc_film(const GLParams& g, double thickness)
{
    g.validate();
    if (!(thickness > 0.0))
        throw domain_error("tc_film: thickness must be > 0");
    return linear_law(g, c1_constant(), thickness, thickness, 1);
}

CriticalResult tc_wire_general(const GLParams& g, double L1, double L2)
{
    g.validate();
    if (!(L1 > 0.0) || !(L2 > 0.0))
        throw domain_error("tc_wire_general: lengths must be > 0");
    const TruncationPolicy t{};
    const std::array<double, 2> L{L1, L2};
    const double w2 = lattice::w_d(0.0, L, t).value;
    const double tc = g.t0 -
                      9.0 * g.coupling * specfun::euler_gamma() / (2.0 * kPi * g.alpha) *
                          (1.0 / L1 + 1.0 / L2) -
                      6.0 * g.coupling / (kPi * g.alpha) * w2;
    const double c2 = c2_constant(t).value;
    const double min_linear = c2 * g.coupling / (g.alpha * g.t0);
    return {tc, c2, min_linear * min_linear, tc > 0.0};
}

CriticalResult tc_wire_square(const GLParams& g, double area)
{
    g.validate();
    if (!(area > 0.0))
        throw domain_error("tc_wire_square: area must be > 0");
    const double side = std::sqrt(area);
    CriticalResult r = tc_wire_general(g, side, side);
    r.transition_exists = area > r.min_size;
    return r;
}

CriticalResult tc_grain_cubic(const GLParams& g, double volume)
{
    g.validate();
    if (!(volume > 0.0))
        throw domain_error("tc_grain_cubic: volume must be > 0");
    const double c3 = c3_constant(TruncationPolicy{}).value;
    return linear_law(g, c3, std::cbrt(volume), volume, 3);
}

double bracket_pole_cancellation(double L1, double L2, double eps,
                                 const TruncationPolicy& t)
{
    t.validate();
    if (!(L1 > 0.0) || !(L2 > 0.0))
        throw domain_error("bracket_pole_cancellation: lengths must be > 0");
    if (!(eps > 0.0) || eps > 1e-2)
        throw domain_error("bracket_pole_cancellation: 0 < eps <= 1e-2 required");

    const std::array<double, 2> L{L1, L2};
    const auto bracket = [&](double D) {
        const double u = 0.5 * (D - 3.0);
        const double S1 = std::pow(L1, 2.0 - D) + std::pow(L2, 2.0 - D);
        const double S2 =
            1.0 / (L1 * std::pow(L2, D - 3.0)) + 1.0 / (std::pow(L1, D - 3.0) * L2);
        // finite parts of zeta(D-2) and Gamma((D-3)/2) against their full
        // companion factors
        const double finite_zeta =
            S1 * specfun::gamma(0.5 * (D - 2.0)) * specfun::zeta_minus_pole(D - 2.0);
        const double finite_gamma =
            kSqrtPi * S2 * specfun::riemann_zeta(D - 3.0) * specfun::gamma_minus_pole(u);
        const double wterm = 2.0 * kSqrtPi * lattice::w_d(u, L, t).value;
        // paired pole remnant: residues sqrt(pi) S1 and -sqrt(pi) S2 cancel
        // identically at L1 = L2 and leave the ln(L2/L1) piece otherwise
        const double remnant = kSqrtPi * (S1 - S2) / (D - 3.0);
        return finite_zeta + finite_gamma + wterm + remnant;
    };
    return 0.5 * (bracket(3.0 + eps) + bracket(3.0 - eps));
}

} // namespace ccrit::crit
