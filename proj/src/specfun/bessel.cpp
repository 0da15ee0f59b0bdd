#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "epd/errors.hpp"
#include "epd/specfun.hpp"

namespace epd::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesMax = 12.0;
// Half-width of the band around integer order where Y is interpolated. The
// connection formula divides by sin(pi v), so the offset trades cancellation
// (~1/(pi d)) against interpolation error (~d^4 with four nodes).
constexpr double kIntegerOffset = 1e-3;
// The optimal truncation error of the Hankel expansion is about exp(-2z), so at
// the z = 12 crossover it is ~1e-11; the series loses the same amount to
// cancellation there.
constexpr double kAsymTol = 1e-10;

// Ascending series. Fine for z <= 12, and for larger z as long as order >= z.
double j_series(double order, double z) {
    if (z == 0.0) {
        if (order == 0.0) return 1.0;
        if (order > 0.0 || std::floor(order) == order) return 0.0;
        return std::numeric_limits<double>::infinity();
    }
    const double h = 0.5 * z;
    const double q = -h * h;
    double term = rgamma(order + 1.0);
    // Negative integer order: the first |order| terms vanish; start at the
    // first nonzero one instead of dividing by a pole.
    int k0 = 0;
    if (is_nonpositive_integer(order + 1.0)) {
        k0 = static_cast<int>(-order);
        term = std::pow(-1.0, k0) * std::pow(h * h, k0);
        double kf = 1.0;
        for (int i = 2; i <= k0; ++i) kf *= i;
        term /= kf;  // (k0)! * Gamma(k0 + order + 1) = k0! * 0! = k0!
    }
    double sum = term;
    for (int k = k0 + 1; k < 500; ++k) {
        term *= q / (k * (k + order));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum * std::pow(h, order);
}

struct Asym {
    std::complex<double> env;
    double last;  // magnitude of the smallest term kept
};

// Hankel expansion, stopped at the smallest term.
Asym hankel_sum(double order, double z) {
    const double m4 = 4.0 * order * order;
    std::complex<double> sum = 1.0;
    std::complex<double> ik = 1.0;
    double ak = 1.0;
    double best = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = ak * (m4 - odd * odd) / (k * 8.0 * z);
        if (std::abs(next) >= best && k > 1) break;
        ak = next;
        ik *= std::complex<double>(0.0, 1.0);
        sum += ik * ak;
        best = std::abs(ak);
        if (best < 1e-18) break;
    }
    return {std::sqrt(2.0 / (kPi * z)) * sum, best};
}

double phase(double order, double z) { return z - 0.5 * order * kPi - 0.25 * kPi; }

// J and Y together for z > 12, order of either sign.
void jy_large(double order, double z, double& j, double& y) {
    if (std::abs(order) < 2.0 || hankel_asymptotic_ok(order, z)) {
        const std::complex<double> h = hankel1_envelope(order, z) * std::polar(1.0, phase(order, z));
        j = h.real();
        y = h.imag();
        return;
    }
    // Recur upward from a low order where the expansion is accurate.
    const double base = order - std::floor(order);
    double j0;
    double y0;
    double j1;
    double y1;
    jy_large(base, z, j0, y0);
    jy_large(base + 1.0, z, j1, y1);
    for (double v = base + 1.0; v < order - 0.5; v += 1.0) {
        const double j2 = 2.0 * v / z * j1 - j0;
        const double y2 = 2.0 * v / z * y1 - y0;
        j0 = j1;
        y0 = y1;
        j1 = j2;
        y1 = y2;
    }
    j = j1;
    y = y1;
}

double y_small_nonint(double order, double z) {
    const double s = sin_pi(order);
    return (j_series(order, z) * cos_pi(order) - j_series(-order, z)) / s;
}

}  // namespace

std::complex<double> hankel1_envelope(double order, double z) { return hankel_sum(order, z).env; }

bool hankel_asymptotic_ok(double order, double z) {
    if (z <= kSeriesMax) return false;
    return hankel_sum(order, z).last < kAsymTol;
}

double bessel_j(double order, double z) {
    if (std::isnan(order) || std::isnan(z)) return std::numeric_limits<double>::quiet_NaN();
    if (z < 0.0) throw DomainError("bessel_j: z < 0");
    if (z <= kSeriesMax || order >= z) return j_series(order, z);
    if (order < 0.0 && !hankel_asymptotic_ok(order, z)) {
        // J_{-v} = cos(v pi) J_v - sin(v pi) Y_v
        double j;
        double y;
        jy_large(-order, z, j, y);
        return cos_pi(order) * j + sin_pi(order) * y;
    }
    double j;
    double y;
    jy_large(order, z, j, y);
    return j;
}

double bessel_y(double order, double z) {
    if (std::isnan(order) || std::isnan(z)) return std::numeric_limits<double>::quiet_NaN();
    if (!(z > 0.0)) throw DomainError("bessel_y: z must be positive");
    if (order < 0.0) {
        // Y_{-v} = sin(v pi) J_v + cos(v pi) Y_v
        const double v = -order;
        return sin_pi(v) * bessel_j(v, z) + cos_pi(v) * bessel_y(v, z);
    }
    if (z > kSeriesMax && order < z) {
        double j;
        double y;
        jy_large(order, z, j, y);
        return y;
    }
    const double n = std::round(order);
    const double u = (order - n) / kIntegerOffset;
    if (std::abs(u) < 1.0) {
        // Cubic Lagrange interpolation through n -/+ d, n -/+ 2d.
        const double nodes[4] = {-2.0, -1.0, 1.0, 2.0};
        double y = 0.0;
        for (int i = 0; i < 4; ++i) {
            double w = 1.0;
            for (int j = 0; j < 4; ++j)
                if (j != i) w *= (u - nodes[j]) / (nodes[i] - nodes[j]);
            y += w * y_small_nonint(n + nodes[i] * kIntegerOffset, z);
        }
        return y;
    }
    return y_small_nonint(order, z);
}

}  // namespace epd::specfun
