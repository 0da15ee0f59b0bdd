#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "epd/errors.hpp"
#include "epd/specfun.hpp"

namespace epd::specfun {

double legendre_p(double mu, double nu, double z, const SeriesControl& ctl) {
    if (!(std::abs(z - 1.0) < 2.0))
        throw DomainError("legendre_p: requires |z - 1| < 2, got z = " + std::to_string(z));
    if (is_nonpositive_integer(1.0 - mu))
        throw PoleError("legendre_p: 1 - mu is a non-positive integer");
    const double f = hyp2f1(-nu, nu + 1.0, 1.0 - mu, 0.5 * (1.0 - z), ctl);
    if (mu == 0.0) return f * rgamma(1.0);
    if (z == 1.0) {
        if (mu > 0.0) return std::numeric_limits<double>::infinity();
        return 0.0;
    }
    // Beyond z = 1 the ratio (1+z)/(1-z) turns negative; use its modulus.
    const double ratio = z < 1.0 ? (1.0 + z) / (1.0 - z) : (z + 1.0) / (z - 1.0);
    return std::pow(ratio, 0.5 * mu) * f * rgamma(1.0 - mu);
}

std::complex<double> legendre_q(double mu, double nu, double z, const SeriesControl& ctl) {
    if (!(z > 1.0)) throw DomainError("legendre_q: requires z > 1, got z = " + std::to_string(z));
    const double s = nu + mu;
    if (is_nonpositive_integer(s + 1.0) || is_nonpositive_integer(nu + 1.5))
        throw PoleError("legendre_q: Gamma pole in the prefactor");
    const double f = hyp2f1(0.5 * s + 1.0, 0.5 * (s + 1.0), nu + 1.5, 1.0 / (z * z), ctl);
    const double mag = std::sqrt(std::numbers::pi) * gamma_fn(s + 1.0) * rgamma(nu + 1.5) /
                       std::pow(2.0, nu + 1.0) * std::pow(z * z - 1.0, 0.5 * mu) *
                       std::pow(z, -s - 1.0) * f;
    return std::polar(1.0, std::numbers::pi * mu) * mag;
}

}  // namespace epd::specfun
