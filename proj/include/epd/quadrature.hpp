#pragma once

#include <functional>
#include <vector>

namespace epd {

enum class QuadScheme { TanhSinh, GaussKronrod };

struct QuadratureSpec {
    QuadScheme scheme = QuadScheme::TanhSinh;
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    // Bisection depth for the adaptive fallback.
    int max_subdivisions = 12;
    // Used by the infinite-range oscillatory integrals only.
    bool oscillatory_partitioning = true;

    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double est_error = 0.0;
};

namespace quad {

using Fn = std::function<double(double)>;

// Smooth or mildly singular integrand on a finite interval.
QuadResult integrate(const Fn& f, double a, double b, const QuadratureSpec& spec);

// int_a^b (y-a)^ea (b-y)^eb g(y) dy with g smooth and ea, eb > -1.
// The weight is applied analytically at each endpoint (subtracting g there),
// so exponents arbitrarily close to -1 stay accurate.
QuadResult integrate_jacobi(const Fn& g, double a, double b, double ea, double eb,
                            const QuadratureSpec& spec);

struct BesselFactor {
    double order;
    double scale;  // argument is scale * rho
};

struct OscillatoryControl {
    double rel_tol = 1e-11;
    double abs_tol = 1e-15;
    int max_half_periods = 400;
};

// int_0^inf amplitude(rho) prod_j J_{order_j}(scale_j rho) d rho, where the
// amplitude is smooth and non-oscillatory for rho > 0 and the integrand
// behaves like rho^origin_exponent at 0. The finite part is Gauss-Kronrod on
// half-period panels; beyond the point where every factor is in its Hankel
// regime the product is split into single-frequency pieces, each summed over
// half periods and extrapolated with Wynn's epsilon algorithm.
QuadResult bessel_product_integral(const Fn& amplitude, const std::vector<BesselFactor>& factors,
                                   double origin_exponent, const OscillatoryControl& ctl = {});

// Limit of a sequence of partial sums by Wynn's epsilon algorithm.
double wynn_epsilon(const std::vector<double>& partial_sums);

}  // namespace quad
}  // namespace epd
