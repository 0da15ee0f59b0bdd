#pragma once

#include <complex>
#include <cstdint>

namespace epd::specfun {

// Truncation control shared by the hypergeometric series.
struct SeriesControl {
    double tol = 1e-12;
    int max_terms = 10'000;

    void validate() const;
};

// Result of a series evaluation. `converged` implies
// est_error <= tol * max(1, |value|).
struct HyperResult {
    double value = 0.0;
    int terms_used = 0;
    bool converged = false;
    double est_error = 0.0;
};

// ---------------------------------------------------------------------------
// Gamma family
// ---------------------------------------------------------------------------

/// Gamma function for real, non-pole arguments. Lanczos approximation for
/// x >= 1/2, reflection below. Throws PoleError at 0, -1, -2, ...
double gamma_fn(double x);

// log|Gamma(x)| together with the sign of Gamma(x).
struct LogGamma {
    double log_abs;
    int sign;
};
LogGamma log_gamma(double x);

/// 1/Gamma(x); zero at the poles instead of throwing. Used wherever a
/// connection formula legitimately has a vanishing coefficient.
double rgamma(double x);

/// B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b), evaluated in log space.
double beta_fn(double a, double b);

/// Rising factorial a(a+1)...(a+k-1); 1 for k == 0.
double pochhammer(double a, int k);

bool is_nonpositive_integer(double x);

// sin(pi x) and cos(pi x) with exact zeros and no loss near the integers.
double sin_pi(double x);
double cos_pi(double x);

// ---------------------------------------------------------------------------
// Hypergeometric functions
// ---------------------------------------------------------------------------

/// Gauss 2F1(a, b; c; z) on the real line.
///
/// Strategy: terminating polynomials are summed directly for any z; the power
/// series is used for |z| <= 0.9; Pfaff's transformation z -> z/(z-1) maps
/// z < -0.9 into (0.47, 1); the z -> 1-z connection formula covers (0.9, 1)
/// when c-a-b is not an integer; z == 1 uses Gauss's summation. z > 1 is a
/// DomainError.
HyperResult gauss_2f1(double a, double b, double c, double z,
                      const SeriesControl& ctl = {});

/// Convenience: value only, throwing NoConvergence if the series did not
/// converge.
double hyp2f1(double a, double b, double c, double z, const SeriesControl& ctl = {});

/// Appell F4(a, b; c, d; x, y) = sum (a)_{m+n}(b)_{m+n}/((c)_m (d)_n m! n!) x^m y^n,
/// summed over anti-diagonals m + n = s. Requires sqrt|x| + sqrt|y| < 1.
HyperResult appell_f4(double a, double b, double c, double d, double x, double y,
                      const SeriesControl& ctl = {});

// ---------------------------------------------------------------------------
// Bessel functions of real order and non-negative real argument
// ---------------------------------------------------------------------------

double bessel_j(double order, double z);
double bessel_y(double order, double z);

// Large-argument envelope: H^(1)_order(z) = envelope * exp(i(z - order*pi/2 - pi/4)).
// Valid when z is well inside the asymptotic regime (see bessel.cpp).
std::complex<double> hankel1_envelope(double order, double z);

// True when z > 12 and the smallest kept term of the expansion is below 1e-10.
bool hankel_asymptotic_ok(double order, double z);

// ---------------------------------------------------------------------------
// Associated Legendre functions in their hypergeometric representations
// ---------------------------------------------------------------------------

/// P^mu_nu(z) = ((1+z)/(1-z))^{mu/2} 2F1(-nu, nu+1; 1-mu; (1-z)/2) / Gamma(1-mu),
/// for |z - 1| < 2. On (1, 3) the ratio is taken as (z+1)/(z-1) so the value
/// stays real.
double legendre_p(double mu, double nu, double z, const SeriesControl& ctl = {});

/// Q^mu_nu(z) for z > 1, including the e^{i pi mu} phase:
/// e^{i pi mu} sqrt(pi) Gamma(nu+mu+1) / (2^{nu+1} Gamma(nu+3/2)) (z^2-1)^{mu/2}
///   z^{-nu-mu-1} 2F1((nu+mu)/2+1, (nu+mu+1)/2; nu+3/2; 1/z^2).
std::complex<double> legendre_q(double mu, double nu, double z,
                                const SeriesControl& ctl = {});

}  // namespace epd::specfun
