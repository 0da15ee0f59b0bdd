#include "epd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "epd/errors.hpp"
#include "epd/quadrature.hpp"

namespace epd::kernels {

namespace sf = epd::specfun;

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) { return std::to_string(v); }

double distance(std::span<const double> x, std::span<const double> xp) {
    if (x.size() != xp.size() || x.empty()) throw DomainError("kernel: points must have equal, non-zero dimension");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - xp[i]) * (x[i] - xp[i]);
    return std::sqrt(s);
}

void require_dimension(int n) {
    if (n < 1 || n > 3) throw DomainError("kernel: dimension n must be 1, 2 or 3, got " + std::to_string(n));
}

// Falling factorial e (e-1) ... (e-k+1).
double falling(double e, int k) {
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= e - i;
    return p;
}

}  // namespace

std::string to_string(Region r) {
    switch (r) {
        case Region::OutsideCone: return "OutsideCone";
        case Region::Shell: return "Shell";
        case Region::InnerCone: return "InnerCone";
        case Region::InsideCone: return "InsideCone";
    }
    return "?";
}

KernelGeometry classify_region(double t, double x, double xp) {
    if (!(t > 0.0) || !(x > 0.0) || !(xp > 0.0))
        throw DomainError("classify_region: t, x, x' must be positive");
    KernelGeometry g;
    g.t = t;
    g.x = x;
    g.xp = xp;
    const double den = 2.0 * x * xp;
    g.z = (x * x + xp * xp - t * t) / den;
    g.one_minus_z = (t - x + xp) * (t + x - xp) / den;
    g.one_plus_z = (x + xp - t) * (x + xp + t) / den;
    g.X = 0.5 * g.one_minus_z;
    if (g.one_minus_z < 0.0)
        g.region = Region::OutsideCone;
    else if (g.one_plus_z > 0.0)
        g.region = Region::Shell;
    else
        g.region = Region::InnerCone;
    g.boundary_adjacent = std::abs(g.one_minus_z) < kBoundaryFlag || std::abs(g.one_plus_z) < kBoundaryFlag;
    return g;
}

KernelGeometry classify_region_classical(double t, double r) {
    if (!(t > 0.0) || !(r >= 0.0)) throw DomainError("classify_region: requires t > 0, r >= 0");
    KernelGeometry g;
    g.t = t;
    g.x = r;
    g.region = r < t ? Region::InsideCone : Region::OutsideCone;
    g.boundary_adjacent = std::abs(t - r) < kBoundaryFlag * (t + r);
    return g;
}

double alpha_n_mu(int n, double mu) {
    require_dimension(n);
    return sf::gamma_fn(1.0 + mu) * sf::rgamma(0.5 + mu) /
           (std::pow(2.0, 0.5 * (n - 1)) * std::pow(kPi, 0.5 * n));
}

double beta_n(int n) {
    require_dimension(n);
    return std::pow(2.0 * kPi, -0.5 * n);
}

double c_n_mu(int n, double mu) {
    require_dimension(n);
    return sf::gamma_fn(1.0 + mu) * sf::rgamma(1.0 + mu - 0.5 * n) / std::pow(kPi, 0.5 * n);
}

std::complex<double> k_nu_q(double nu, double q) {
    const double mag = std::pow(2.0, 2.0 * q + 1.0) * sf::gamma_fn(q + 1.0 + nu) * sf::rgamma(1.0 + nu) *
                       sf::rgamma(-q);
    return std::polar(1.0, kPi * q) * mag;
}

NormalizationConstants normalization_constants(const EPDParameters& p) {
    NormalizationConstants c;
    c.alpha_n_mu = alpha_n_mu(p.n, p.mu);
    c.beta_n = beta_n(p.n);
    c.c_n_mu = c_n_mu(p.n, p.mu);
    c.k_nu_q = k_nu_q(p.nu, p.q);
    return c;
}

void require_classical(const EPDParameters& p) {
    require_dimension(p.n);
    if (!(p.mu > 0.0 && p.mu < 0.5)) throw DomainError("classical problem requires 0 < mu < 1/2, got mu = " + fmt(p.mu));
}

void require_modified_classical(const EPDParameters& p) {
    require_classical(p);
    const double lo = -0.5 * p.n;
    const double hi = -0.5 * p.mu - 0.25 * p.n;
    if (!(p.q > lo && p.q < hi))
        throw DomainError("modified classical problem requires " + fmt(lo) + " < q < " + fmt(hi) + ", got q = " + fmt(p.q));
}

void require_radial(const EPDParameters& p) {
    if (!(p.nu > -0.5)) throw DomainError("radial problem requires nu > -1/2, got nu = " + fmt(p.nu));
    if (!(p.mu > 0.0 && p.mu < 0.5)) throw DomainError("radial problem requires 0 < mu < 1/2, got mu = " + fmt(p.mu));
}

void require_modified_radial(const EPDParameters& p) {
    require_radial(p);
    const double hi = -0.5 * p.mu - 0.25;
    if (!(p.q > -0.5 && p.q < hi))
        throw DomainError("modified radial problem requires -1/2 < q < " + fmt(hi) + ", got q = " + fmt(p.q));
}

// ---------------------------------------------------------------------------
// W
// ---------------------------------------------------------------------------

KernelValue w_kernel_r(const EPDParameters& p, double t, double r) {
    require_dimension(p.n);
    const KernelGeometry g = classify_region_classical(t, r);
    KernelValue v;
    v.region = g.region;
    v.boundary_adjacent = g.boundary_adjacent;
    if (g.region == Region::OutsideCone) return v;
    const double s = (t - r) * (t + r);
    v.profile = c_n_mu(p.n, p.mu) * std::pow(s, p.mu - 0.5 * p.n);
    return v;
}

KernelValue w_kernel(const EPDParameters& p, double t, std::span<const double> x, std::span<const double> xp) {
    return w_kernel_r(p, t, distance(x, xp));
}

double w_derivative_form(const EPDParameters& p, double t, double r) {
    require_dimension(p.n);
    if (!(r < t)) return 0.0;
    const double s = (t - r) * (t + r);
    // (1/t d/dt)^k s^e = 2^k e(e-1)...(e-k+1) s^{e-k}
    if (p.n % 2 == 1) {
        const int k = (p.n - 1) / 2;
        const double e = p.mu - 0.5;
        return alpha_n_mu(p.n, p.mu) * std::ldexp(1.0, k) * falling(e, k) * std::pow(s, e - k);
    }
    const int k = p.n / 2;
    const double e = p.mu;
    return beta_n(p.n) * std::ldexp(1.0, k) * falling(e, k) * std::pow(s, e - k);
}

double w_laplacian(const EPDParameters& p, double t, double r) {
    require_dimension(p.n);
    const double s = (t - r) * (t + r);
    const double a = p.mu - 0.5 * p.n;
    return 2.0 * a * c_n_mu(p.n, p.mu) * std::pow(s, a - 2.0) * (2.0 * (p.mu - 1.0) * r * r - p.n * t * t);
}

double w_time_operator(const EPDParameters& p, double t, double r) {
    require_dimension(p.n);
    const double s = (t - r) * (t + r);
    const double a = p.mu - 0.5 * p.n;
    return 4.0 * a * c_n_mu(p.n, p.mu) * std::pow(s, a - 2.0) * ((1.0 - p.mu) * s + (a - 1.0) * t * t);
}

// ---------------------------------------------------------------------------
// N
// ---------------------------------------------------------------------------

namespace {

double n_outside_prefactor(const EPDParameters& p) {
    const double h = 0.5 * p.n;
    return std::pow(2.0, 2.0 * p.q + h) * sf::gamma_fn(p.q + h) * sf::rgamma(-p.q) / std::pow(2.0 * kPi, p.n);
}

double n_inside_prefactor(const EPDParameters& p) {
    const double h = 0.5 * p.n;
    return std::pow(2.0, 2.0 * p.q + h) * sf::gamma_fn(1.0 + p.mu) * sf::gamma_fn(p.q + h) * sf::rgamma(h) *
           sf::rgamma(1.0 + p.mu - p.q - h) / std::pow(2.0 * kPi, p.n);
}

}  // namespace

KernelValue n_kernel_r(const EPDParameters& p, double t, double r) {
    require_dimension(p.n);
    if (!(t > 0.0) || !(r >= 0.0)) throw DomainError("n_kernel: requires t > 0, r >= 0");
    if (std::abs(t - r) < kLightConeBand * (t + r))
        throw LightConeError("n_kernel: t = " + fmt(t) + " is on the light cone |x - x'| = " + fmt(r));
    const double h = 0.5 * p.n;
    KernelValue v;
    v.phase = std::polar(1.0, kPi * p.q);
    if (t < r) {
        v.region = Region::OutsideCone;
        const double w = (t / r) * (t / r);
        v.profile = n_outside_prefactor(p) * std::pow(r, -2.0 * p.q - p.n) *
                    sf::hyp2f1(p.q + h, p.q + 1.0, p.mu + 1.0, w);
    } else {
        v.region = Region::InsideCone;
        const double w = (r / t) * (r / t);
        v.profile = n_inside_prefactor(p) * std::pow(t, -2.0 * p.q - p.n) *
                    sf::hyp2f1(p.q + h, p.q + h - p.mu, h, w);
    }
    v.boundary_adjacent = std::abs(t - r) < kBoundaryFlag * (t + r);
    return v;
}

KernelValue n_kernel(const EPDParameters& p, double t, std::span<const double> x, std::span<const double> xp) {
    return n_kernel_r(p, t, distance(x, xp));
}

ConeLimits n_kernel_cone_limits(const EPDParameters& p, double r) {
    require_dimension(p.n);
    const double h = 0.5 * p.n;
    const double pw = std::pow(r, -2.0 * p.q - p.n);
    ConeLimits c;
    c.outside = n_outside_prefactor(p) * pw * sf::hyp2f1(p.q + h, p.q + 1.0, p.mu + 1.0, 1.0);
    c.inside = n_inside_prefactor(p) * pw * sf::hyp2f1(p.q + h, p.q + h - p.mu, h, 1.0);
    c.ratio = c.inside / c.outside;
    return c;
}

// ---------------------------------------------------------------------------
// K
// ---------------------------------------------------------------------------

double k_shell_constant(double mu) {
    return std::pow(2.0, mu - 0.5) * sf::gamma_fn(1.0 + mu) * sf::rgamma(0.5 + mu) / std::sqrt(kPi);
}

double k_inner_constant(double mu, double nu) {
    return std::pow(2.0, mu - nu) * sf::gamma_fn(1.0 + mu) * sf::gamma_fn(1.0 - mu + nu) * sf::sin_pi(mu - nu) *
           sf::rgamma(nu + 1.0) / kPi;
}

namespace {

void require_k_params(const EPDParameters& p) {
    if (!(p.nu > -0.5)) throw DomainError("k_kernel: requires nu > -1/2, got " + fmt(p.nu));
    if (!(std::abs(p.mu) <= 0.5)) throw DomainError("k_kernel: requires |mu| <= 1/2, got " + fmt(p.mu));
}

}  // namespace

KernelValue k_kernel(const EPDParameters& p, double t, double x, double xp) {
    require_k_params(p);
    const KernelGeometry g = classify_region(t, x, xp);
    KernelValue v;
    v.region = g.region;
    v.boundary_adjacent = g.boundary_adjacent;
    if (g.region == Region::OutsideCone) return v;
    if (std::abs(g.one_minus_z) < kLightConeBand || std::abs(g.one_plus_z) < kLightConeBand)
        throw LightConeError("k_kernel: z within 1e-9 of +/-1 at (t, x, x') = (" + fmt(t) + ", " + fmt(x) + ", " +
                             fmt(xp) + ")");
    const double mu = p.mu;
    const double nu = p.nu;
    const double xx = std::pow(x * xp, nu + mu - 1.0);
    if (g.region == Region::Shell) {
        v.profile = k_shell_constant(mu) * xx * std::pow(g.one_minus_z, mu - 0.5) *
                    sf::hyp2f1(0.5 - nu, 0.5 + nu, 0.5 + mu, g.X);
        return v;
    }
    // z < -1: the power z^{mu-nu-1} is taken on |z|.
    const double az = -g.z;
    v.profile = k_inner_constant(mu, nu) * xx * std::pow(az, mu - nu - 1.0) *
                sf::hyp2f1(0.5 * (nu - mu + 1.0), 0.5 * (nu - mu) + 1.0, nu + 1.0, 1.0 / (az * az));
    return v;
}

BranchJoin k_kernel_branch_join(const EPDParameters& p, double t, double x) {
    require_k_params(p);
    if (!(t > x)) throw DomainError("k_kernel_branch_join: the InnerCone exists only for t > x");
    const double mu = p.mu;
    const double nu = p.nu;
    const double xx = std::pow(x * (t - x), nu + mu - 1.0);
    // Leading behaviour of each branch at |1 + z| = e, divided by (2e)^{mu - 1/2}.
    // Shell: (1-z)^{mu-1/2} -> 2^{mu-1/2}; 2F1 at X -> 1 gives
    // Gamma(c)Gamma(a+b-c)/(Gamma(a)Gamma(b)) ((1+z)/2)^{mu-1/2}.
    const double shell_f = sf::gamma_fn(0.5 + mu) * sf::gamma_fn(0.5 - mu) * sf::rgamma(0.5 - nu) * sf::rgamma(0.5 + nu);
    const double shell = k_shell_constant(mu) * xx * std::pow(2.0, mu - 0.5) * shell_f * std::pow(0.25, mu - 0.5);
    // InnerCone: |z|^{...} -> 1; 1 - 1/z^2 ~ 2e.
    const double inner_f = sf::gamma_fn(nu + 1.0) * sf::gamma_fn(0.5 - mu) * sf::rgamma(0.5 * (nu - mu + 1.0)) *
                           sf::rgamma(0.5 * (nu - mu) + 1.0);
    const double inner = k_inner_constant(mu, nu) * xx * inner_f;
    BranchJoin b;
    b.shell = shell;
    b.inner = inner;
    b.ratio = inner / shell;
    return b;
}

// ---------------------------------------------------------------------------
// H
// ---------------------------------------------------------------------------

namespace {

// int_0^inf lambda^{2a-1-mu} J_mu(lambda t) J_nu(lambda x) J_nu(lambda x') d lambda
double triple_integral(double a, double mu, double nu, double t, double x, double xp) {
    const double pw = 2.0 * a - 1.0 - mu;
    const auto amp = [pw](double l) { return std::pow(l, pw); };
    const std::vector<quad::BesselFactor> f{{mu, t}, {nu, x}, {nu, xp}};
    return quad::bessel_product_integral(amp, f, pw + mu + 2.0 * nu).value;
}

}  // namespace

KernelValue h_kernel(const EPDParameters& p, double t, double x, double xp, HMethod method) {
    if (!(p.nu > -0.5)) throw DomainError("h_kernel: requires nu > -1/2");
    if (!(std::abs(p.mu) < 0.5)) throw DomainError("h_kernel: requires |mu| < 1/2");
    if (!(t > 0.0) || !(x > 0.0) || !(xp > 0.0)) throw DomainError("h_kernel: t, x, x' must be positive");
    const double a = p.q + 1.0;
    const double mu = p.mu;
    const double nu = p.nu;
    KernelValue v;
    v.phase = 1.0;
    const KernelGeometry g = classify_region(t, x, xp);
    v.region = g.region;
    v.boundary_adjacent = g.boundary_adjacent;
    const double reach = (x + t) / xp;
    bool series = reach < 1.0 && (method == HMethod::Series || (method == HMethod::Auto && reach <= kF4Direct));
    if (method == HMethod::Series && !(reach < 1.0))
        throw DomainError("h_kernel: F4 series requires x' > x + t");
    if (series) {
        sf::SeriesControl ctl;
        ctl.max_terms = 20'000;
        const double f4 = sf::appell_f4(a, a + nu, 1.0 + mu, 1.0 + nu, (t / xp) * (t / xp), (x / xp) * (x / xp), ctl).value;
        v.profile = std::pow(x, 2.0 * nu) * std::pow(xp, -2.0 * a) * f4;
        return v;
    }
    if (!(a > -nu && a < 0.75 + 0.5 * mu))
        throw DomainError("h_kernel: continuation integral needs -nu < q+1 < 3/4 + mu/2");
    // I = C t^mu x^nu x'^{-nu-2a} F4, so H = x^nu x'^nu I / (C t^mu).
    const double c = std::pow(2.0, 2.0 * a - 1.0 - mu) * sf::gamma_fn(a + nu) * sf::rgamma(1.0 + mu) *
                     sf::rgamma(1.0 + nu) * sf::rgamma(1.0 - a);
    const double integral = triple_integral(a, mu, nu, t, x, xp);
    v.profile = std::pow(x * xp, nu) * integral / (c * std::pow(t, mu));
    return v;
}

}  // namespace epd::kernels
