#pragma once

#include <complex>
#include <span>
#include <string>

#include "epd/specfun.hpp"

namespace epd::kernels {

// (mu, nu, n, q). Which fields matter depends on the kernel: W uses (n, mu),
// N uses (n, mu, q), K uses (mu, nu), H uses (mu, nu, q).
struct EPDParameters {
    double mu = 0.25;
    double nu = 0.0;
    int n = 1;
    double q = 0.0;
};

// Radial kernels use OutsideCone / Shell / InnerCone (z > 1, |z| < 1, z < -1).
// Classical kernels use OutsideCone (t < |x-x'|) and InsideCone (|x-x'| < t).
enum class Region { OutsideCone, Shell, InnerCone, InsideCone };

std::string to_string(Region r);

struct KernelGeometry {
    double t = 0.0;
    double x = 0.0;
    double xp = 0.0;
    double z = 0.0;
    double X = 0.0;            // (1 - z)/2
    double one_minus_z = 0.0;  // computed in factored form, exact near z = 1
    double one_plus_z = 0.0;   // likewise near z = -1
    Region region = Region::OutsideCone;
    bool boundary_adjacent = false;  // |z - 1| or |z + 1| below 1e-12
};

struct NormalizationConstants {
    double alpha_n_mu = 0.0;
    double beta_n = 0.0;
    double c_n_mu = 0.0;
    std::complex<double> k_nu_q;
};

struct KernelValue {
    double profile = 0.0;
    std::complex<double> phase{1.0, 0.0};
    Region region = Region::OutsideCone;
    bool boundary_adjacent = false;

    std::complex<double> value() const { return profile * phase; }
};

inline constexpr double kLightConeBand = 1e-9;
inline constexpr double kBoundaryFlag = 1e-12;

// Radial geometry. t, x, xp > 0.
KernelGeometry classify_region(double t, double x, double xp);
// Classical geometry: only the distance r = |x - x'| matters.
KernelGeometry classify_region_classical(double t, double r);

double alpha_n_mu(int n, double mu);
double beta_n(int n);
double c_n_mu(int n, double mu);
std::complex<double> k_nu_q(double nu, double q);
NormalizationConstants normalization_constants(const EPDParameters& p);

// ---------------------------------------------------------------------------
// W_{n,mu} = C_{n,mu} (t^2 - r^2)^{mu - n/2} inside the cone, 0 outside.
// ---------------------------------------------------------------------------
KernelValue w_kernel(const EPDParameters& p, double t, std::span<const double> x,
                     std::span<const double> xp);
KernelValue w_kernel_r(const EPDParameters& p, double t, double r);

// alpha_{n,mu} (d/t dt)^{(n-1)/2} s^{mu-1/2} (odd n) or beta_n (d/t dt)^{n/2} s^mu
// (even n), s = t^2 - r^2, with the derivatives taken in closed form.
double w_derivative_form(const EPDParameters& p, double t, double r);
// Closed-form Laplacian of W in x.
double w_laplacian(const EPDParameters& p, double t, double r);
// Closed-form (d^2/dt^2 + (1-2mu)/t d/dt) W.
double w_time_operator(const EPDParameters& p, double t, double r);

// ---------------------------------------------------------------------------
// N_mu: two branches split by the light cone t = |x - x'|.
// ---------------------------------------------------------------------------
KernelValue n_kernel(const EPDParameters& p, double t, std::span<const double> x,
                     std::span<const double> xp);
KernelValue n_kernel_r(const EPDParameters& p, double t, double r);

// One-sided limits of N_mu at t = r (both hypergeometric factors at argument 1).
struct ConeLimits {
    double outside = 0.0;  // t -> r-, branch 0 < t < r
    double inside = 0.0;   // t -> r+, branch r < t
    double ratio = 0.0;    // inside / outside
};
ConeLimits n_kernel_cone_limits(const EPDParameters& p, double r);

// ---------------------------------------------------------------------------
// K_mu (radial). p.mu may be negative: the f-term of the radial solution uses
// K_{-mu}. Accepts -1/2 <= mu <= 1/2.
// ---------------------------------------------------------------------------
KernelValue k_kernel(const EPDParameters& p, double t, double x, double xp);

double k_shell_constant(double mu);
double k_inner_constant(double mu, double nu);

// Shell and InnerCone branch values as z -> -1 from either side, with the
// common singular factor |1 - z^2|^{mu - 1/2} divided out.
struct BranchJoin {
    double shell = 0.0;
    double inner = 0.0;
    double ratio = 0.0;
};
BranchJoin k_kernel_branch_join(const EPDParameters& p, double t, double x);

// ---------------------------------------------------------------------------
// H_mu = x^{2nu} x'^{-2(q+1)} F4(q+1, q+1+nu, 1+mu, 1+nu, t^2/x'^2, x^2/x'^2).
// For x' > x+t the F4 series is summed directly when (x+t)/x' <= kF4Direct;
// otherwise (and for x' < x+t) the triple-Bessel integral is used.
// ---------------------------------------------------------------------------
inline constexpr double kF4Direct = 0.97;

enum class HMethod { Auto, Series, Integral };

KernelValue h_kernel(const EPDParameters& p, double t, double x, double xp,
                     HMethod method = HMethod::Auto);

// Parameter validation for each theorem regime.
void require_classical(const EPDParameters& p);            // n in {1,2,3}, 0<mu<1/2
void require_modified_classical(const EPDParameters& p);   // + -n/2 < q < -mu/2 - n/4
void require_radial(const EPDParameters& p);               // nu > -1/2, 0<mu<1/2
void require_modified_radial(const EPDParameters& p);      // + -1/2 < q < -mu/2 - 1/4

}  // namespace epd::kernels
