#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

#include <boost/math/quadrature/gauss.hpp>

#include "epd/errors.hpp"
#include "epd/specfun.hpp"
#include "epd/verify.hpp"

namespace epd::verify {

namespace sf = epd::specfun;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double rel_diff(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Weber-Schafheitlin and the triple-Bessel integral
// ---------------------------------------------------------------------------

OracleResult weber_schafheitlin_oracle(double rho, double mu, double nu, double a, double b) {
    if (!(nu + mu - rho + 1.0 > 0.0)) throw DomainError("weber_schafheitlin_oracle: requires nu + mu - rho + 1 > 0");
    if (!(rho > -1.0)) throw DomainError("weber_schafheitlin_oracle: requires rho > -1");
    if (!(a > b && b > 0.0)) throw DomainError("weber_schafheitlin_oracle: requires a > b > 0");
    const auto amp = [rho](double r) { return std::pow(r, -rho); };
    const std::vector<quad::BesselFactor> fac{{mu, a}, {nu, b}};
    OracleResult o;
    o.numeric = quad::bessel_product_integral(amp, fac, -rho + mu + nu).value;
    const double p = 0.5 * (1.0 + nu + mu - rho);
    const double pre = std::pow(2.0, -rho) * std::pow(a, rho - nu - 1.0) * std::pow(b, nu) * sf::gamma_fn(p) *
                       sf::rgamma(1.0 + nu) * sf::rgamma(0.5 * (1.0 - nu + mu + rho));
    o.closed_form = pre * sf::hyp2f1(p, 0.5 * (1.0 + nu - mu - rho), nu + 1.0, (b / a) * (b / a));
    o.difference = o.numeric - o.closed_form;
    return o;
}

OracleResult triple_bessel_oracle(double a, double mu, double nu, double t, double x, double xp) {
    if (!(t > 0.0 && x > 0.0 && xp > 0.0)) throw DomainError("triple_bessel_oracle: t, x, x' must be positive");
    if (!(a > -nu && a < 1.25 + 0.5 * mu))
        throw DomainError("triple_bessel_oracle: requires -nu < a < 5/4 + mu/2");
    const bool closed = xp > x + t;
    if (!closed && !(a < 0.75 + 0.5 * mu))
        throw DomainError("triple_bessel_oracle: for x' < x + t the integral needs a < 3/4 + mu/2");
    const double pw = 2.0 * a - 1.0 - mu;
    const auto amp = [pw](double l) { return std::pow(l, pw); };
    const std::vector<quad::BesselFactor> fac{{mu, t}, {nu, x}, {nu, xp}};
    OracleResult o;
    o.numeric = quad::bessel_product_integral(amp, fac, pw + mu + 2.0 * nu).value;
    if (closed) {
        const double c = std::pow(2.0, 2.0 * a - 1.0 - mu) * sf::gamma_fn(a + nu) * sf::rgamma(1.0 + mu) *
                         sf::rgamma(1.0 + nu) * sf::rgamma(1.0 - a);
        sf::SeriesControl ctl;
        ctl.max_terms = 20'000;
        const double f4 =
            sf::appell_f4(a, a + nu, 1.0 + mu, 1.0 + nu, (t / xp) * (t / xp), (x / xp) * (x / xp), ctl).value;
        o.closed_form = c * std::pow(t, mu) * std::pow(x, nu) * std::pow(xp, -nu - 2.0 * a) * f4;
        o.difference = o.numeric - o.closed_form;
    } else {
        o.closed_form = kNaN;
        o.difference = kNaN;
    }
    return o;
}

OracleResult n_kernel_oracle(const EPDParameters& p, double t, double r) {
    if (p.n < 1 || p.n > 3) throw DomainError("n_kernel_oracle: n must be 1, 2 or 3");
    if (!(t > 0.0 && r > 0.0)) throw DomainError("n_kernel_oracle: t, r must be positive");
    const double h = 0.5 * p.n;
    const double pw = 2.0 * p.q - p.mu + h;
    const auto amp = [pw](double l) { return std::pow(l, pw); };
    const std::vector<quad::BesselFactor> fac{{p.mu, t}, {h - 1.0, r}};
    const double integral = quad::bessel_product_integral(amp, fac, pw + p.mu + h - 1.0).value;
    OracleResult o;
    o.numeric = std::pow(2.0 * kPi, -p.n) * std::pow(2.0, p.mu) * sf::gamma_fn(1.0 + p.mu) * std::pow(t, -p.mu) *
                std::pow(r, 1.0 - h) * integral;
    o.closed_form = kernels::n_kernel_r(p, t, r).profile;
    o.difference = o.numeric - o.closed_form;
    return o;
}

OracleResult h_kernel_oracle(const EPDParameters& p, double t, double x, double xp) {
    if (!(xp > x + t)) throw DomainError("h_kernel_oracle: requires x' > x + t");
    const double a = p.q + 1.0;
    const OracleResult tb = triple_bessel_oracle(a, p.mu, p.nu, t, x, xp);
    const double c = std::pow(2.0, 2.0 * a - 1.0 - p.mu) * sf::gamma_fn(a + p.nu) * sf::rgamma(1.0 + p.mu) *
                     sf::rgamma(1.0 + p.nu) * sf::rgamma(1.0 - a);
    OracleResult o;
    o.numeric = std::pow(x * xp, p.nu) * tb.numeric / (c * std::pow(t, p.mu));
    o.closed_form = kernels::h_kernel(p, t, x, xp, kernels::HMethod::Series).profile;
    o.difference = o.numeric - o.closed_form;
    return o;
}

VerificationReport check_weber_schafheitlin(int draws, std::uint64_t seed, double tol) {
    VerificationReport rep;
    rep.name = "weber-schafheitlin";
    rep.tolerance = tol;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < draws; ++k) {
        const double rho = -0.5 + 2.0 * u(rng);
        const double mu = 2.0 * u(rng);
        double nu = 2.0 * u(rng);
        if (nu + mu - rho + 1.0 < 0.2) nu = rho - mu - 0.8;
        if (nu < 0.0) nu = 0.0;
        const double a = 1.0 + 2.0 * u(rng);
        const double b = a * (0.1 + 0.8 * u(rng));
        const OracleResult o = weber_schafheitlin_oracle(rho, mu, nu, a, b);
        rep.add({rho, mu, nu, a, b}, std::abs(o.difference));
    }
    rep.notes.push_back("probe = (rho, mu, nu, a, b); residual = |numeric - closed form|");
    return rep.finalize();
}

VerificationReport check_triple_bessel(int draws, std::uint64_t seed, double tol) {
    VerificationReport rep;
    rep.name = "triple-bessel";
    rep.tolerance = tol;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < draws; ++k) {
        const double mu = u(rng);
        const double nu = 1.5 * u(rng);
        const double lo = -nu + 0.1;
        const double hi = std::min(1.1, 1.25 + 0.5 * mu - 0.15);
        const double a = lo + (hi - lo) * u(rng);
        const double t = 0.2 + 1.3 * u(rng);
        const double x = 0.2 + 1.3 * u(rng);
        const double xp = (x + t) * (1.5 + 2.5 * u(rng));
        const OracleResult o = triple_bessel_oracle(a, mu, nu, t, x, xp);
        rep.add({a, mu, nu, t, x, xp}, std::abs(o.difference));
    }
    rep.notes.push_back("probe = (a, mu, nu, t, x, x'); residual = |numeric - closed form|");
    return rep.finalize();
}

VerificationReport check_n_kernel_oracle(const EPDParameters& p, int points_per_branch, std::uint64_t seed,
                                         double tol) {
    VerificationReport rep;
    rep.name = "n-kernel-oracle n=" + std::to_string(p.n) + " mu=" + num(p.mu) + " q=" + num(p.q);
    rep.tolerance = tol;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int branch = 0; branch < 2; ++branch) {
        for (int k = 0; k < points_per_branch; ++k) {
            double t;
            double r;
            if (branch == 0) {
                r = 0.3 + 1.7 * u(rng);
                t = r * (0.1 + 0.8 * u(rng));
            } else {
                t = 0.3 + 1.7 * u(rng);
                r = t * (0.1 + 0.8 * u(rng));
            }
            const OracleResult o = n_kernel_oracle(p, t, r);
            rep.add({t, r}, rel_diff(o.numeric, o.closed_form));
        }
    }
    rep.notes.push_back("probe = (t, r), first half t < r; residual relative");
    const kernels::ConeLimits cl = kernels::n_kernel_cone_limits(p, 1.0);
    rep.notes.push_back("cone limits at r = 1: outside " + num(cl.outside) + ", inside " + num(cl.inside) +
                        ", ratio " + num(cl.ratio));
    return rep.finalize();
}

VerificationReport check_h_kernel_oracle(const EPDParameters& p, int points, std::uint64_t seed, double tol) {
    VerificationReport rep;
    rep.name = "h-kernel-oracle mu=" + num(p.mu) + " nu=" + num(p.nu) + " q=" + num(p.q);
    rep.tolerance = tol;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < points; ++k) {
        const double t = 0.2 + u(rng);
        const double x = 0.2 + u(rng);
        const double xp = (x + t) * (1.2 + 2.0 * u(rng));
        const OracleResult o = h_kernel_oracle(p, t, x, xp);
        rep.add({t, x, xp}, rel_diff(o.numeric, o.closed_form));
    }
    rep.notes.push_back("probe = (t, x, x'), x' > x + t; residual relative");
    return rep.finalize();
}

// ---------------------------------------------------------------------------
// Hankel transform
// ---------------------------------------------------------------------------

namespace {

QuadratureSpec hankel_spec() {
    QuadratureSpec s;
    s.scheme = QuadScheme::GaussKronrod;
    s.rel_tol = 1e-12;
    s.abs_tol = 1e-15;
    s.max_subdivisions = 16;
    return s;
}

std::pair<double, double> transform_range(const solver::DataFunction& f) {
    const auto sup = f.effective_support();
    if (!sup) throw DomainError("hankel_transform: data needs a finite effective support, got " + f.describe());
    return {std::max(0.0, sup->first), std::max(0.0, sup->second)};
}

// (l y)^nu J_nu(l y)
double kernel(double nu, double l, double y) {
    const double z = l * y;
    if (z == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    return std::pow(z, nu) * sf::bessel_j(nu, z);
}

double transform_of(const std::function<double(double)>& h, double nu, double lambda, double lo, double hi,
                    const QuadratureSpec& quad) {
    if (!(hi > lo)) return 0.0;
    const quad::Fn g = [&](double y) {
        const double v = h(y);
        if (v == 0.0) return 0.0;
        return v * kernel(nu, lambda, y) * std::pow(y, 1.0 - 2.0 * nu);
    };
    // Panels of a few oscillations keep the adaptive rule honest.
    const double panel = std::max(hi - lo, 1.0) / std::max(1.0, std::ceil(lambda * (hi - lo) / (4.0 * kPi)));
    double total = 0.0;
    for (double a = lo; a < hi; a += panel) total += quad::integrate(g, a, std::min(hi, a + panel), quad).value;
    return total;
}

// Upper limit for the inverse transform: past the last lambda where |f^| is
// above 1e-12 of its peak, scanning on a grid fine enough to follow the
// oscillation. The computed transform has an absolute noise floor near 1e-15,
// so a lower threshold never triggers.
double inverse_cutoff(const std::function<double(double)>& fhat, double reach) {
    const double step = 0.5 / std::max(1.0, reach);
    double peak = 0.0;
    double last = step;
    for (double l = step; l < 400.0; l += step) {
        const double v = std::abs(fhat(l));
        peak = std::max(peak, v);
        if (v > 1e-12 * peak) last = l;
        if (l > last + 60.0 * step && l > 4.0) break;
    }
    return last + 20.0 * step;
}

}  // namespace

double hankel_transform(const solver::DataFunction& f, double nu, double lambda, const QuadratureSpec& quad) {
    if (!(lambda > 0.0)) throw DomainError("hankel_transform: requires lambda > 0");
    if (!(nu > -1.0)) throw DomainError("hankel_transform: requires nu > -1");
    if (f.is_zero()) return 0.0;
    const auto [lo, hi] = transform_range(f);
    return transform_of([&](double y) { return f(y); }, nu, lambda, lo, hi, quad);
}

double hankel_inverse(const std::function<double(double)>& fhat, double nu, double x, double lambda_max) {
    if (!(x > 0.0)) throw DomainError("hankel_inverse: requires x > 0");
    if (!(lambda_max > 0.0)) throw DomainError("hankel_inverse: requires lambda_max > 0");
    using GL = boost::math::quadrature::gauss<double, 20>;
    const auto g = [&](double l) { return fhat(l) * kernel(nu, x, l) * std::pow(l, 1.0 - 2.0 * nu); };
    // Panels of about a quarter period, graded towards 0 where the integrand
    // behaves like l^{1 + 2 nu'} with a non-integer power.
    const double width = std::min(0.5, 0.5 * kPi / x);
    const int panels = static_cast<int>(std::ceil(lambda_max / width));
    const double h = lambda_max / panels;
    double total = 0.0;
    double a = h;
    for (int k = 0; k < 40; ++k) {
        total += GL::integrate(g, 0.5 * a, a);
        a *= 0.5;
    }
    for (int k = 1; k < panels; ++k) total += GL::integrate(g, k * h, (k + 1) * h);
    return total;
}

VerificationReport hankel_roundtrip(const solver::DataFunction& f, double nu, const std::vector<double>& xs,
                                    double tol) {
    VerificationReport rep;
    rep.name = "hankel-roundtrip nu=" + num(nu) + " " + f.describe();
    rep.tolerance = tol;
    if (f.is_zero()) {
        for (double x : xs) rep.add({x}, 0.0);
        return rep.finalize();
    }
    const QuadratureSpec spec = hankel_spec();
    const double hi = transform_range(f).second;
    std::unordered_map<double, double> cache;
    const auto fhat = [&](double l) {
        const auto it = cache.find(l);
        if (it != cache.end()) return it->second;
        return cache[l] = hankel_transform(f, nu, l, spec);
    };
    const double lmax = inverse_cutoff(fhat, hi);
    rep.notes.push_back("inverse integrated over (0, " + num(lmax) + ")");
    for (double x : xs) {
        // The inverse has the same form with the roles of x and lambda swapped.
        const double back = hankel_inverse(fhat, nu, x, lmax);
        rep.add({x}, std::abs(back - f(x)));
    }
    return rep.finalize();
}

VerificationReport check_hankel_symbol(const solver::DataFunction& f, double nu, const std::vector<double>& lambdas,
                                       double tol) {
    VerificationReport rep;
    rep.name = "hankel-symbol nu=" + num(nu) + " " + f.describe();
    rep.tolerance = tol;
    const QuadratureSpec spec = hankel_spec();
    if (f.is_zero()) {
        for (double l : lambdas) rep.add({l}, 0.0);
        return rep.finalize();
    }
    const auto [lo, hi] = transform_range(f);
    const std::function<double(double)> fy = [&](double y) { return f(y); };
    // Finite differences leave ~1e-10 of noise in the integrand.
    QuadratureSpec fd_spec = spec;
    fd_spec.rel_tol = 1e-9;
    fd_spec.abs_tol = 1e-11;
    // The stencil may reach y < 0; data functions are defined on the whole line,
    // and shrinking h with y would blow up the f'/y term with roundoff.
    const auto lam_f = [&](double y) {
        const double h = 1e-3 * std::max(1.0, y);
        return fd_second(fy, y, h, 3) + (1.0 - 2.0 * nu) / y * fd_first(fy, y, h, 3);
    };
    for (double l : lambdas) {
        const double lhs = transform_of(lam_f, nu, l, lo, hi, fd_spec);
        const double rhs = -l * l * hankel_transform(f, nu, l, spec);
        const double boundary = 2.0 * nu * f(0.0) * std::pow(l, 2.0 * nu) * std::pow(2.0, -nu) * sf::rgamma(nu + 1.0);
        rep.add({l}, std::abs(lhs - rhs));
        rep.notes.push_back("lambda " + num(l) + ": (Lf)^ = " + num(lhs) + ", -lambda^2 f^ = " + num(rhs) +
                            ", boundary term 2 nu f(0) lambda^{2nu}/(2^nu Gamma(nu+1)) = " + num(boundary));
    }
    return rep.finalize();
}

}  // namespace epd::verify
