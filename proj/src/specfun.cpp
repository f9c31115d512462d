#include "ccrit/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ccrit/compensated.hpp"
#include "ccrit/series.hpp"

namespace ccrit::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_nonpositive_integer(double x)
{
    return x <= 0.0 && x == std::floor(x);
}

// Taylor coefficients of 1/Gamma(x) = sum_k c[k] x^(k+1)
// (Abramowitz & Stegun 6.1.34). Used for 1/Gamma(1+x) on |x| <= 1/2 and for
// the Temme series auxiliaries below.
constexpr double kRecipGammaCoeff[26] = {
    1.0,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
    0.0000000061160951,
    0.0000000050020075,
    -0.0000000011812746,
    0.0000000001043427,
    0.0000000000077823,
    -0.0000000000036968,
    0.0000000000005100,
    -0.0000000000000206,
    -0.0000000000000054,
    0.0000000000000014,
    0.0000000000000001,
};

// 1/Gamma(1+x), |x| <= 1/2, by the Taylor series above.
double recip_gamma_1p(double x)
{
    double p = 1.0;
    CompensatedSum s;
    for (double c : kRecipGammaCoeff) {
        s.add(c * p);
        p *= x;
    }
    return s.value();
}

// gam1(mu) = [1/Gamma(1-mu) - 1/Gamma(1+mu)] / (2 mu)  (even series, exact at mu=0)
double temme_gam1(double mu)
{
    const double mu2 = mu * mu;
    double p = 1.0;
    CompensatedSum s;
    for (int k = 1; k < 26; k += 2) {
        s.add(kRecipGammaCoeff[k] * p);
        p *= mu2;
    }
    return -s.value();
}

// gam2(mu) = [1/Gamma(1-mu) + 1/Gamma(1+mu)] / 2
double temme_gam2(double mu)
{
    const double mu2 = mu * mu;
    double p = 1.0;
    CompensatedSum s;
    for (int k = 0; k < 26; k += 2) {
        s.add(kRecipGammaCoeff[k] * p);
        p *= mu2;
    }
    return s.value();
}

// Lanczos g = 7, 9 terms.
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double gamma_positive(double x)
{
    // x >= 1/2 assumed
    const double z = x - 1.0;
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i)
        a += kLanczos[i] / (z + i);
    const double t = z + 7.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

// B_{2k}/(2k)! for the Euler-Maclaurin corrections.
constexpr double kBernOverFact[13] = {
    0.0, // unused
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

double expm1_over_x(double u)
{
    if (u == 0.0)
        return 1.0;
    return std::expm1(u) / u;
}

// Euler-Maclaurin evaluation of zeta(s) for s > -1; with subtract_pole the
// N^{1-s}/(s-1) term is replaced by (N^{1-s}-1)/(s-1), which is regular at
// s = 1 and turns the routine into zeta(s) - 1/(s-1).
double zeta_euler_maclaurin(double s, bool subtract_pole)
{
    constexpr int N = 24;
    constexpr int K = 12;
    CompensatedSum acc;
    for (int n = 1; n < N; ++n)
        acc.add(std::pow(static_cast<double>(n), -s));

    const double lnN = std::log(static_cast<double>(N));
    if (subtract_pole) {
        acc.add(-lnN * expm1_over_x((1.0 - s) * lnN));
    } else {
        acc.add(std::pow(static_cast<double>(N), 1.0 - s) / (s - 1.0));
    }

    acc.add(0.5 * std::pow(static_cast<double>(N), -s));

    double poch = s;                               // (s)_{2k-1}
    double npow = std::pow(static_cast<double>(N), -s - 1.0);
    for (int k = 1; k <= K; ++k) {
        acc.add(kBernOverFact[k] * poch * npow);
        poch *= (s + 2.0 * k - 1.0) * (s + 2.0 * k);
        npow /= static_cast<double>(N) * N;
    }
    return acc.value();
}

// --- Bessel K kernels -------------------------------------------------------

constexpr double kBesselEps = 1e-16;
constexpr int kBesselMaxIter = 20000;

// Temme series for x <= 2: returns K_mu and K_{mu+1}, |mu| <= 1/2.
void bessel_k_temme(double mu, double x, double& kmu, double& kmu1)
{
    const double mu2 = mu * mu;
    const double x2 = 0.5 * x;
    const double d = -std::log(x2);
    const double e = mu * d;
    const double pimu = kPi * mu;
    const double fact = (pimu == 0.0) ? 1.0 : pimu / std::sin(pimu);
    const double fact2 = (e == 0.0) ? 1.0 : std::sinh(e) / e;
    const double gam1 = temme_gam1(mu);
    const double gam2 = temme_gam2(mu);
    const double gampl = recip_gamma_1p(mu);  // 1/Gamma(1+mu)
    const double gammi = recip_gamma_1p(-mu); // 1/Gamma(1-mu)

    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    const double ee = std::exp(e);
    double p = 0.5 * ee / gampl;
    double q = 0.5 / (ee * gammi);
    double c = 1.0;
    const double x24 = x2 * x2;
    double sum1 = p;
    for (int i = 1; i <= kBesselMaxIter; ++i) {
        ff = (i * ff + p + q) / (i * i - mu2);
        c *= x24 / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * ff;
        sum += del;
        sum1 += c * (p - i * ff);
        if (std::fabs(del) < std::fabs(sum) * kBesselEps)
            break;
    }
    kmu = sum;
    kmu1 = sum1 * (2.0 / x);
}

// Steed continued fraction CF2 for x > 2: returns K_mu and K_{mu+1}, |mu| <= 1/2.
void bessel_k_steed(double mu, double x, double& kmu, double& kmu1)
{
    const double mu2 = mu * mu;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double delh = d;
    double h = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= kBesselMaxIter; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::fabs(dels / s) < kBesselEps)
            break;
    }
    h = a1 * h;
    kmu = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
    kmu1 = kmu * (mu + x + 0.5 - h) / x;
}

// Exact half-integer orders: K_{1/2} = sqrt(pi/2z) e^{-z}, recurrence upward.
double bessel_k_half_integer(int k, double z)
{
    const double base = std::sqrt(kPi / (2.0 * z));
    const double damp = std::exp(-z);
    if (damp == 0.0)
        return 0.0;
    double km = base; // scaled K_{-1/2} e^{z}
    double k0 = base; // scaled K_{+1/2} e^{z}
    for (int j = 0; j < k; ++j) {
        const double kp = km + (2.0 * j + 1.0) / z * k0;
        km = k0;
        k0 = kp;
    }
    return k0 * damp;
}

} // namespace

double euler_gamma()
{
    return 0.577215664901532860606512090082;
}

double gamma(double x)
{
    if (is_nonpositive_integer(x))
        throw pole_error("gamma: pole at nonpositive integer x = " + std::to_string(x));
    if (x < 0.5)
        return kPi / (std::sin(kPi * x) * gamma_positive(1.0 - x));
    return gamma_positive(x);
}

double reciprocal_gamma(double x)
{
    if (is_nonpositive_integer(x))
        return 0.0;
    return 1.0 / gamma(x);
}

double gamma_ratio(double a, double b)
{
    const bool pa = is_nonpositive_integer(a);
    const bool pb = is_nonpositive_integer(b);
    if (pa && pb) {
        // Gamma(-m+e)/Gamma(-n+e) -> (-1)^{m+n} n!/m!
        const double m = -a;
        const double n = -b;
        const double sign = (std::fmod(m + n, 2.0) == 0.0) ? 1.0 : -1.0;
        return sign * gamma(n + 1.0) / gamma(m + 1.0);
    }
    if (pb)
        return 0.0;
    if (pa)
        throw pole_error("gamma_ratio: Gamma(" + std::to_string(a) + ") is at a pole");
    return gamma(a) / gamma(b);
}

double gamma_minus_pole(double x)
{
    if (std::fabs(x) > 0.5)
        throw domain_error("gamma_minus_pole: |x| <= 1/2 required, got " + std::to_string(x));
    // Gamma(x) - 1/x = (1 - S)/(x S) with S = 1/Gamma(1+x); 1 - S = -x T(x).
    double p = 1.0;
    CompensatedSum t;
    for (int k = 1; k < 26; ++k) {
        t.add(kRecipGammaCoeff[k] * p);
        p *= x;
    }
    return -t.value() / recip_gamma_1p(x);
}

double digamma(double x)
{
    if (is_nonpositive_integer(x))
        throw pole_error("digamma: pole at nonpositive integer x = " + std::to_string(x));
    if (x < 0.0)
        return digamma(1.0 - x) - kPi / std::tan(kPi * x);
    double r = 0.0;
    while (x < 6.0) {
        r -= 1.0 / x;
        x += 1.0;
    }
    // asymptotic series, B_{2k}/(2k x^{2k})
    static constexpr double coeff[7] = {
        1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0,
        1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0,
    };
    const double inv2 = 1.0 / (x * x);
    double p = inv2;
    double s = std::log(x) - 0.5 / x;
    for (double c : coeff) {
        s -= c * p;
        p *= inv2;
    }
    return s + r;
}

double riemann_zeta(double s)
{
    if (s == 1.0)
        throw pole_error("riemann_zeta: pole at s = 1");
    if (s >= -0.5)
        return zeta_euler_maclaurin(s, false);
    if (std::fmod(s, 2.0) == 0.0)
        return 0.0; // trivial zeros
    // reflection: zeta(s) = Gamma((1-s)/2) pi^{s-1/2} zeta(1-s) / Gamma(s/2)
    const double z1ms = zeta_euler_maclaurin(1.0 - s, false);
    return gamma(0.5 * (1.0 - s)) * std::pow(kPi, s - 0.5) * z1ms / gamma(0.5 * s);
}

double zeta_minus_pole(double s)
{
    if (std::fabs(s - 1.0) >= 0.5)
        throw domain_error("zeta_minus_pole: |s - 1| < 1/2 required, got s = " + std::to_string(s));
    return zeta_euler_maclaurin(s, true);
}

double bessel_k(double nu, double z)
{
    if (!(z > 0.0))
        throw domain_error("bessel_k: z > 0 required, got z = " + std::to_string(z));
    nu = std::fabs(nu); // K_{-nu} = K_nu

    const double two_nu = 2.0 * nu;
    if (two_nu == std::floor(two_nu) && std::fmod(two_nu, 2.0) == 1.0)
        return bessel_k_half_integer(static_cast<int>(nu - 0.5), z);

    const int nl = static_cast<int>(nu + 0.5);
    const double mu = nu - nl; // in [-1/2, 1/2]
    double kmu, kmu1;
    if (z <= 2.0)
        bessel_k_temme(mu, z, kmu, kmu1);
    else
        bessel_k_steed(mu, z, kmu, kmu1);
    for (int i = 1; i <= nl; ++i) {
        const double knext = 2.0 * (mu + i) / z * kmu1 + kmu;
        kmu = kmu1;
        kmu1 = knext;
    }
    return kmu;
}

} // namespace ccrit::specfun
