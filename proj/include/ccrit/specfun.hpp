#pragma once

namespace ccrit::specfun {

/// Euler-Mascheroni constant gamma = 0.5772156649015329.
double euler_gamma();

/// Gamma(x) for real x. Lanczos approximation with reflection for x < 1/2.
/// Relative error < 1e-13 for |x| <= 50. Throws pole_error at x = 0, -1, -2, ...
double gamma(double x);

/// 1/Gamma(x); returns exactly 0 at the poles of Gamma.
double reciprocal_gamma(double x);

/// Gamma(a)/Gamma(b) with the usual limits when a and/or b sit on poles:
/// both on poles -> finite limit, only b -> 0, only a -> pole_error.
double gamma_ratio(double a, double b);

/// Gamma(x) - 1/x, continuous through x = 0 (value -euler_gamma there).
/// Domain |x| <= 1/2.
double gamma_minus_pole(double x);

/// Digamma psi(x); psi(1) = -euler_gamma.
double digamma(double x);

/// Riemann zeta. Euler-Maclaurin tail for s > -1/2, reflection formula
/// zeta(s) = Gamma((1-s)/2) pi^(s-1/2) zeta(1-s) / Gamma(s/2) below.
/// Relative error <= 1e-12 on [-10, 50] \ {1}. Throws pole_error at s = 1.
double riemann_zeta(double s);

/// zeta(s) - 1/(s-1), continuous through s = 1 with value euler_gamma.
/// Domain |s - 1| < 1/2.
double zeta_minus_pole(double s);

/// Modified Bessel function of the second kind K_nu(z), z > 0, any real nu
/// (K_{-nu} = K_nu). Half-integer orders use the exact closed forms
/// sqrt(pi/2z) e^{-z} x polynomial; otherwise Temme's series (z <= 2) or the
/// Steed continued fraction (z > 2) seeds the upward recurrence.
/// Relative error <= 1e-12 for z in [1e-6, 700], |nu| <= 60. Underflows
/// gracefully to 0 once e^{-z} leaves the double range (z > ~745); callers
/// that need error semantics treat the first omitted term as the bound.
/// Throws domain_error for z <= 0.
double bessel_k(double nu, double z);

} // namespace ccrit::specfun
