#include "epd/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "epd/errors.hpp"
#include "epd/specfun.hpp"

namespace epd::solver {

namespace sf = epd::specfun;
using kernels::k_inner_constant;
using kernels::k_shell_constant;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

bool is_radial_profile(const DataFunction& f) {
    return std::holds_alternative<RadialProfile>(f.variant());
}

// Trapezoid on the circle, doubling until two passes agree.
double circle_mean(const std::function<double(double)>& h) {
    int m = 16;
    double prev = 0.0;
    for (int j = 0; j < m; ++j) prev += h(2.0 * kPi * j / m);
    prev *= 2.0 * kPi / m;
    while (m < (1 << 14)) {
        double odd = 0.0;
        for (int j = 0; j < m; ++j) odd += h(2.0 * kPi * (j + 0.5) / m);
        const double cur = 0.5 * prev + odd * kPi / m;
        m *= 2;
        if (std::abs(cur - prev) <= 1e-14 * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::ClassicalQuad: return "ClassicalQuad";
        case Method::ModifiedQuad: return "ModifiedQuad";
        case Method::RadialQuad: return "RadialQuad";
        case Method::RadialSeries: return "RadialSeries";
        case Method::ModifiedRadialQuad: return "ModifiedRadialQuad";
    }
    return "?";
}

double spherical_mean(const DataFunction& f, std::span<const double> x, double r, int n) {
    if (n < 1 || n > 3) throw DomainError("spherical_mean: n must be 1, 2 or 3, got " + std::to_string(n));
    if (static_cast<int>(x.size()) != n) throw DomainError("spherical_mean: point has wrong dimension");
    if (!(r >= 0.0)) throw DomainError("spherical_mean: r must be >= 0");
    if (n == 1) {
        const double a[1] = {x[0] + r};
        const double b[1] = {x[0] - r};
        return f(std::span<const double>(a, 1)) + f(std::span<const double>(b, 1));
    }
    if (n == 2) {
        return circle_mean([&](double th) {
            const double y[2] = {x[0] + r * std::cos(th), x[1] + r * std::sin(th)};
            return f(std::span<const double>(y, 2));
        });
    }
    if (r == 0.0) return 4.0 * kPi * f(x);
    QuadratureSpec spec;
    spec.scheme = QuadScheme::GaussKronrod;
    spec.rel_tol = 1e-12;
    spec.abs_tol = 1e-16;
    if (is_radial_profile(f)) {
        // Only the angle to x - origin matters: 2 pi int_{-1}^{1} f0(|x - o + r w|) du.
        const auto& rp = std::get<RadialProfile>(f.variant());
        double d2 = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double o = i < static_cast<int>(rp.origin.size()) ? rp.origin[i] : 0.0;
            d2 += (x[i] - o) * (x[i] - o);
        }
        const double d = std::sqrt(d2);
        const DataFunction& f0 = *rp.inner;
        if (d == 0.0) return 4.0 * kPi * f0(r);
        const quad::Fn ring = [&](double u) { return 2.0 * kPi * f0(std::sqrt(std::max(0.0, d2 + r * r + 2.0 * d * r * u))); };
        std::vector<double> cuts{-1.0, 1.0};
        if (const auto sup = f0.effective_support()) {
            for (double rho : {sup->first, sup->second}) {
                if (!(rho > 0.0)) continue;
                const double u = (rho * rho - d2 - r * r) / (2.0 * d * r);
                if (u > -1.0 && u < 1.0) cuts.push_back(u);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            if (cuts[i + 1] > cuts[i]) total += quad::integrate(ring, cuts[i], cuts[i + 1], spec).value;
        return total;
    }
    // u = cos(theta) by adaptive Gauss-Kronrod, trapezoid in phi.
    const quad::Fn ring = [&](double u) {
        const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
        return circle_mean([&](double ph) {
            const double y[3] = {x[0] + r * s * std::cos(ph), x[1] + r * s * std::sin(ph), x[2] + r * u};
            return f(std::span<const double>(y, 3));
        });
    };
    return quad::integrate(ring, -1.0, 1.0, spec).value;
}

// ---------------------------------------------------------------------------
// Classical
// ---------------------------------------------------------------------------

namespace {

// Phi_e(t) = int_0^1 h#_x(ts) (1-s^2)^e s^{n-1} ds
QuadResult phi(const DataFunction& h, std::span<const double> x, int n, double e, double t,
               const QuadratureSpec& spec) {
    const quad::Fn g = [&](double s) {
        return spherical_mean(h, x, t * s, n) * std::pow(1.0 + s, e) * std::pow(s, n - 1);
    };
    return quad::integrate_jacobi(g, 0.0, 1.0, 0.0, e, spec);
}

struct Term {
    double value = 0.0;
    double err = 0.0;
};

// k = 0: Phi(t). k = 1: m Phi(t) + t Phi'(t), the derivative by central
// differences at h and h/2 combined by Richardson.
Term classical_term(const DataFunction& h, std::span<const double> x, int n, double e, double m, double t,
                    const QuadratureSpec& quad) {
    if (h.is_zero()) return {};
    if (n == 1) {
        const QuadResult r = phi(h, x, n, e, t, quad);
        return {r.value, r.est_error};
    }
    QuadratureSpec fine = quad;
    fine.rel_tol = std::min(quad.rel_tol, 1e-13);
    fine.abs_tol = std::min(quad.abs_tol, 1e-15);
    const double step = 1e-3 * t;
    const auto at = [&](double tt) { return phi(h, x, n, e, tt, fine).value; };
    const QuadResult p0 = phi(h, x, n, e, t, fine);
    const double d1 = (at(t + step) - at(t - step)) / (2.0 * step);
    const double d2 = (at(t + 0.5 * step) - at(t - 0.5 * step)) / step;
    const double deriv = (4.0 * d2 - d1) / 3.0;
    Term out;
    out.value = m * p0.value + t * deriv;
    out.err = m * p0.est_error + t * std::abs(deriv - d2) + 10.0 * fine.rel_tol * std::abs(p0.value) / 1e-3;
    return out;
}

}  // namespace

SolutionSample solve_classical(const EPDParameters& p, const CauchyData& data, double t, std::span<const double> x,
                               const QuadratureSpec& quad) {
    kernels::require_classical(p);
    quad.validate();
    if (!(t > 0.0)) throw DomainError("solve_classical: requires t > 0");
    if (static_cast<int>(x.size()) != p.n) throw DomainError("solve_classical: point dimension must equal n");
    const double mu = p.mu;
    const int n = p.n;
    const bool odd = n % 2 == 1;
    const double ef = odd ? -mu - 0.5 : -mu;
    const double eg = odd ? mu - 0.5 : mu;
    const double cf = odd ? kernels::alpha_n_mu(n, -mu) : kernels::beta_n(n);
    const double cg = (odd ? kernels::alpha_n_mu(n, mu) : kernels::beta_n(n)) / (2.0 * mu);
    const Term tf = classical_term(data.f, x, n, ef, 2.0 - 2.0 * mu, t, quad);
    const Term tg = classical_term(data.g, x, n, eg, 2.0 + 2.0 * mu, t, quad);
    const double t2m = std::pow(t, 2.0 * mu);
    SolutionSample s;
    s.t = t;
    s.x.assign(x.begin(), x.end());
    s.value = cf * tf.value + cg * t2m * tg.value;
    s.est_error = std::abs(cf) * tf.err + std::abs(cg) * t2m * tg.err;
    s.method = Method::ClassicalQuad;
    s.region = "interior";
    return s;
}

// ---------------------------------------------------------------------------
// Classical, modified conditions
// ---------------------------------------------------------------------------

namespace {

// Range of r = |x' - x| over which h can be non-zero, or nullopt if h == 0.
std::optional<std::pair<double, double>> radius_range(const DataFunction& h, std::span<const double> x, int n) {
    if (h.is_zero()) return std::nullopt;
    if (n == 1) {
        const auto sup = h.effective_support();
        if (!sup) throw DomainError("modified problem requires compactly supported data, got " + h.describe());
        const double lo = sup->first - x[0];
        const double hi = sup->second - x[0];
        const double rmin = (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(std::abs(lo), std::abs(hi));
        return std::make_pair(rmin, std::max(std::abs(lo), std::abs(hi)));
    }
    if (!is_radial_profile(h))
        throw DomainError("modified problem in R^" + std::to_string(n) +
                          " requires a radial profile with compact support, got " + h.describe());
    const auto& rp = std::get<RadialProfile>(h.variant());
    const auto sup = rp.inner->effective_support();
    if (!sup) throw DomainError("modified problem requires compactly supported data, got " + h.describe());
    const double reach = std::max(std::abs(sup->first), std::abs(sup->second));
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double o = i < static_cast<int>(rp.origin.size()) ? rp.origin[i] : 0.0;
        d2 += (x[i] - o) * (x[i] - o);
    }
    const double d = std::sqrt(d2);
    return std::make_pair(std::max(0.0, d - reach), d + reach);
}

// int_{R^n} h(x') N_m(t, x, x') dx' over the support, split at the light cone.
QuadResult modified_term(const EPDParameters& p, double m, const DataFunction& h, std::span<const double> x,
                         double t, const QuadratureSpec& quad) {
    const auto range = radius_range(h, x, p.n);
    if (!range) return {};
    EPDParameters pk = p;
    pk.mu = m;
    const double band = 4.0 * kernels::kLightConeBand * t;
    const quad::Fn g = [&](double r) {
        if (std::abs(r - t) < band) r = r < t ? t - band : t + band;
        const double mean = spherical_mean(h, x, r, p.n);
        if (mean == 0.0) return 0.0;
        return mean * kernels::n_kernel_r(pk, t, r).profile * std::pow(r, p.n - 1);
    };
    QuadratureSpec spec = quad;
    spec.scheme = QuadScheme::TanhSinh;
    const double lo = range->first;
    const double hi = range->second;
    if (lo < t && t < hi) {
        const QuadResult a = quad::integrate(g, lo, t, spec);
        const QuadResult b = quad::integrate(g, t, hi, spec);
        return {a.value + b.value, a.est_error + b.est_error};
    }
    return quad::integrate(g, lo, hi, spec);
}

}  // namespace

SolutionSample solve_classical_modified(const EPDParameters& p, const CauchyData& data, double t,
                                        std::span<const double> x, const QuadratureSpec& quad) {
    kernels::require_modified_classical(p);
    quad.validate();
    if (!(t > 0.0)) throw DomainError("solve_classical_modified: requires t > 0");
    if (static_cast<int>(x.size()) != p.n) throw DomainError("solve_classical_modified: point dimension must equal n");
    const QuadResult a = modified_term(p, -p.mu, data.f, x, t, quad);
    const QuadResult b = modified_term(p, p.mu, data.g, x, t, quad);
    const double c = std::pow(t, 2.0 * p.mu) / (2.0 * p.mu);
    SolutionSample s;
    s.t = t;
    s.x.assign(x.begin(), x.end());
    s.value = a.value + c * b.value;
    s.est_error = a.est_error + c * b.est_error;
    s.phase = std::polar(1.0, kPi * p.q);
    s.method = Method::ModifiedQuad;
    s.region = "interior";
    return s;
}

// ---------------------------------------------------------------------------
// Radial
// ---------------------------------------------------------------------------

namespace {

// int_L^R (x'-L)^ea (R-x')^eb G(x') dx' restricted to the support of the data.
// When the support cuts an interval short, the weight at the cut end is
// smooth and folded back into the integrand.
QuadResult weighted(const quad::Fn& g, double L, double R, double ea, double eb,
                    const std::optional<std::pair<double, double>>& sup, const QuadratureSpec& spec) {
    double a = L;
    double b = R;
    if (sup) {
        a = std::max(a, sup->first);
        b = std::min(b, sup->second);
    }
    if (!(b > a)) return {};
    const bool cut_a = a > L;
    const bool cut_b = b < R;
    if (!cut_a && !cut_b) return quad::integrate_jacobi(g, a, b, ea, eb, spec);
    const quad::Fn h = [&](double y) {
        double w = g(y);
        if (cut_a) w *= std::pow(y - L, ea);
        if (cut_b) w *= std::pow(R - y, eb);
        return w;
    };
    return quad::integrate_jacobi(h, a, b, cut_a ? 0.0 : ea, cut_b ? 0.0 : eb, spec);
}

QuadResult operator+(QuadResult a, QuadResult b) { return {a.value + b.value, a.est_error + b.est_error}; }

// Connection coefficients for 2F1(a,b;c;w) = A F(a,b;1-gam;1-w) + B (1-w)^gam F(c-a,c-b;1+gam;1-w),
// gam = c - a - b non-integer.
struct Connection {
    double a, b, c, gam, A, B;
};

Connection connection(double a, double b, double c) {
    Connection k{a, b, c, c - a - b, 0.0, 0.0};
    k.A = sf::gamma_fn(c) * sf::gamma_fn(k.gam) * sf::rgamma(c - a) * sf::rgamma(c - b);
    k.B = sf::gamma_fn(c) * sf::gamma_fn(-k.gam) * sf::rgamma(a) * sf::rgamma(b);
    return k;
}

// int_0^inf h(x') K_m(t, x, x') x'^{1-2nu} dx'
QuadResult radial_term(double m, double nu, const DataFunction& h, double t, double x, const QuadratureSpec& spec) {
    if (h.is_zero()) return {};
    const auto sup = h.effective_support();
    const double e = m - 0.5;
    const double cs = k_shell_constant(m);
    // Shared part of the Shell integrand: h(x') x'^{1-2nu} C (x x')^{nu+m-1}.
    const auto base = [&](double xp) {
        const double v = h(xp);
        if (v == 0.0) return 0.0;
        return v * std::pow(xp, 1.0 - 2.0 * nu) * std::pow(x * xp, nu + m - 1.0);
    };
    const auto X_of = [&](double xp) {
        // (1 - z)/2 with 1 - z = (t - x + x')(t + x - x')/(2 x x')
        return (t - x + xp) * (t + x - xp) / (4.0 * x * xp);
    };
    const double fa = 0.5 - nu;
    const double fb = 0.5 + nu;
    const double fc = 0.5 + m;

    if (t < x) {
        // Both Shell ends are z = 1; the weight (1-z)^e splits as
        // (x' - (x-t))^e (x+t - x')^e (2 x x')^{-e}.
        const quad::Fn g = [&](double xp) {
            const double b = base(xp);
            if (b == 0.0) return 0.0;
            return cs * b * std::pow(2.0 * x * xp, -e) * sf::hyp2f1(fa, fb, fc, X_of(xp));
        };
        return weighted(g, x - t, x + t, e, e, sup, spec);
    }

    // t > x. Upper Shell half [t, t+x]: singular only at z = 1.
    const quad::Fn upper = [&](double xp) {
        const double b = base(xp);
        if (b == 0.0) return 0.0;
        return cs * b * std::pow((t - x + xp) / (2.0 * x * xp), e) * sf::hyp2f1(fa, fb, fc, X_of(xp));
    };
    QuadResult total = weighted(upper, t, t + x, 0.0, e, sup, spec);

    // Lower Shell half [t-x, t]: X -> 1 at x' = t - x. With 1 - X = d (x+x'+t)/(4 x x'),
    // d = x' - (t-x), the 2F1 splits into a smooth part and d^gam times a smooth part.
    const Connection kc = connection(fa, fb, fc);
    const auto one_minus_z = [&](double xp) { return (t - x + xp) * (t + x - xp) / (2.0 * x * xp); };
    const auto w_of = [&](double xp) { return (x + xp - t) * (x + xp + t) / (4.0 * x * xp); };
    const quad::Fn lower_a = [&](double xp) {
        const double b = base(xp);
        if (b == 0.0 || kc.A == 0.0) return 0.0;
        return cs * b * std::pow(one_minus_z(xp), e) * kc.A * sf::hyp2f1(kc.a, kc.b, 1.0 - kc.gam, w_of(xp));
    };
    const quad::Fn lower_b = [&](double xp) {
        const double b = base(xp);
        if (b == 0.0 || kc.B == 0.0) return 0.0;
        return cs * b * std::pow(one_minus_z(xp), e) * kc.B * std::pow((x + xp + t) / (4.0 * x * xp), kc.gam) *
               sf::hyp2f1(kc.c - kc.a, kc.c - kc.b, 1.0 + kc.gam, w_of(xp));
    };
    total = total + weighted(lower_a, t - x, t, 0.0, 0.0, sup, spec);
    total = total + weighted(lower_b, t - x, t, kc.gam, 0.0, sup, spec);

    // InnerCone (0, t-x), |z| = (t^2 - x^2 - x'^2)/(2 x x') > 1.
    const double ci = k_inner_constant(m, nu);
    if (ci == 0.0) return total;
    const double ia = 0.5 * (nu - m + 1.0);
    const double ib = 0.5 * (nu - m) + 1.0;
    const double ic = nu + 1.0;
    const auto az_of = [&](double xp) { return (t * t - x * x - xp * xp) / (2.0 * x * xp); };
    // h(x') x'^{1-2nu} (x x')^{nu+m-1} |z|^{m-nu-1} = h(x') x' x^{nu+m-1} ((t^2-x^2-x'^2)/2x)^{m-nu-1};
    // the combined form stays finite as x' -> 0.
    const auto inner_base = [&](double xp) {
        const double v = h(xp);
        if (v == 0.0) return 0.0;
        return v * xp * std::pow(x, nu + m - 1.0) * std::pow((t * t - x * x - xp * xp) / (2.0 * x), m - nu - 1.0);
    };
    const double mid = 0.5 * (t - x);
    const quad::Fn inner_lo = [&](double xp) {
        const double b = inner_base(xp);
        if (b == 0.0) return 0.0;
        const double az = az_of(xp);
        return ci * b * sf::hyp2f1(ia, ib, ic, 1.0 / (az * az));
    };
    {
        QuadratureSpec s = spec;
        s.scheme = QuadScheme::TanhSinh;
        double a = 0.0;
        double b = mid;
        if (sup) {
            a = std::max(a, sup->first);
            b = std::min(b, sup->second);
        }
        if (b > a) total = total + quad::integrate(inner_lo, a, b, s);
    }
    // Near x' = t - x: 1 - 1/z^2 = d' (t+x+x') (|z|+1) / (2 x x' z^2), d' = t - x - x'.
    const Connection ki = connection(ia, ib, ic);
    const auto v_of = [&](double xp) {
        const double az = az_of(xp);
        return (t - x - xp) * (t + x + xp) * (az + 1.0) / (2.0 * x * xp * az * az);
    };
    const quad::Fn inner_a = [&](double xp) {
        const double b = inner_base(xp);
        if (b == 0.0 || ki.A == 0.0) return 0.0;
        return ci * b * ki.A * sf::hyp2f1(ki.a, ki.b, 1.0 - ki.gam, v_of(xp));
    };
    const quad::Fn inner_b = [&](double xp) {
        const double b = inner_base(xp);
        if (b == 0.0 || ki.B == 0.0) return 0.0;
        const double az = az_of(xp);
        const double rest = (t + x + xp) * (az + 1.0) / (2.0 * x * xp * az * az);
        return ci * b * ki.B * std::pow(rest, ki.gam) *
               sf::hyp2f1(ki.c - ki.a, ki.c - ki.b, 1.0 + ki.gam, v_of(xp));
    };
    total = total + weighted(inner_a, mid, t - x, 0.0, 0.0, sup, spec);
    total = total + weighted(inner_b, mid, t - x, 0.0, ki.gam, sup, spec);
    return total;
}

}  // namespace

SolutionSample solve_radial(const EPDParameters& p, const CauchyData& data, double t, double x,
                            const QuadratureSpec& quad) {
    kernels::require_radial(p);
    quad.validate();
    if (!(t > 0.0) || !(x > 0.0)) throw DomainError("solve_radial: requires t > 0 and x > 0");
    if (std::abs(t - x) < kernels::kLightConeBand * x)
        throw LightConeError("solve_radial: t = x = " + fmt(x) + " puts the origin on the light cone");
    const double mu = p.mu;
    const QuadResult a = radial_term(-mu, p.nu, data.f, t, x, quad);
    const QuadResult b = radial_term(mu, p.nu, data.g, t, x, quad);
    const double t2m = std::pow(t, 2.0 * mu);
    SolutionSample s;
    s.t = t;
    s.x = {x};
    s.value = t2m * a.value + b.value / (2.0 * mu);
    s.est_error = t2m * a.est_error + b.est_error / (2.0 * mu);
    s.method = Method::RadialQuad;
    s.region = t < x ? "t<x" : "t>x";
    return s;
}

SolutionSample solve_radial_series(const EPDParameters& p, const SeriesCoefficients& coeffs, double t, double x) {
    coeffs.validate();
    const double mu = p.mu;
    if (!(mu > 0.0 && mu < 1.0)) throw DomainError("solve_radial_series: requires 0 < mu < 1, got " + fmt(mu));
    if (!(x > 0.0) || !(t >= 0.0)) throw DomainError("solve_radial_series: requires x > 0, t >= 0");
    if (!(t < x)) throw DomainError("solve_radial_series: requires t < x, got t = " + fmt(t) + ", x = " + fmt(x));
    const double w = (t / x) * (t / x);
    const double t2m = std::pow(t, 2.0 * mu) / (2.0 * mu);
    double value = 0.0;
    double err = 0.0;
    double xl = 1.0;
    const std::size_t len = std::max(coeffs.a.size(), coeffs.b.size());
    for (std::size_t l = 0; l < len; ++l, xl *= x) {
        const double hl = 0.5 * static_cast<double>(l);
        if (l < coeffs.a.size() && coeffs.a[l] != 0.0) {
            const sf::HyperResult r = sf::gauss_2f1(-hl, p.nu - hl, 1.0 - mu, w);
            value += coeffs.a[l] * xl * r.value;
            err += std::abs(coeffs.a[l] * xl) * r.est_error;
        }
        if (l < coeffs.b.size() && coeffs.b[l] != 0.0) {
            const sf::HyperResult r = sf::gauss_2f1(-hl, p.nu - hl, 1.0 + mu, w);
            value += coeffs.b[l] * t2m * xl * r.value;
            err += std::abs(coeffs.b[l] * t2m * xl) * r.est_error;
        }
    }
    SolutionSample s;
    s.t = t;
    s.x = {x};
    s.value = value;
    s.est_error = err + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(value);
    s.method = Method::RadialSeries;
    s.region = "t<x";
    return s;
}

// ---------------------------------------------------------------------------
// Radial, modified conditions
// ---------------------------------------------------------------------------

namespace {

QuadResult modified_radial_term(const EPDParameters& p, double m, const DataFunction& h, double t, double x,
                                const QuadratureSpec& quad) {
    if (h.is_zero()) return {};
    const auto sup = h.effective_support();
    if (!sup) throw DomainError("modified radial problem requires compactly supported data, got " + h.describe());
    const double lo = std::max(sup->first, 0.0);
    const double hi = sup->second;
    if (!(hi > lo)) return {};
    EPDParameters pk = p;
    pk.mu = m;
    const quad::Fn g = [&](double xp) {
        if (!(xp > 0.0)) return 0.0;
        const double v = h(xp);
        if (v == 0.0) return 0.0;
        return v * kernels::h_kernel(pk, t, x, xp).profile * std::pow(xp, 1.0 - 2.0 * p.nu);
    };
    // The kernel is not smooth where x' crosses |x - t| or x + t.
    std::vector<double> cuts{lo};
    for (double c : {std::abs(x - t), x + t})
        if (c > lo && c < hi) cuts.push_back(c);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    QuadratureSpec spec = quad;
    spec.scheme = QuadScheme::TanhSinh;
    QuadResult total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        total = total + quad::integrate(g, cuts[i], cuts[i + 1], spec);
    }
    return total;
}

}  // namespace

SolutionSample solve_radial_modified(const EPDParameters& p, const CauchyData& data, double t, double x,
                                     const QuadratureSpec& quad) {
    kernels::require_modified_radial(p);
    quad.validate();
    if (!(t > 0.0) || !(x > 0.0)) throw DomainError("solve_radial_modified: requires t > 0 and x > 0");
    // K(nu,q) = kmag e^{i pi q} with kmag real; the phase is reported separately.
    const double kmag = std::real(kernels::k_nu_q(p.nu, p.q) * std::polar(1.0, -kPi * p.q));
    const QuadResult a = modified_radial_term(p, -p.mu, data.f, t, x, quad);
    const QuadResult b = modified_radial_term(p, p.mu, data.g, t, x, quad);
    const double c = std::pow(t, 2.0 * p.mu) / (2.0 * p.mu);
    SolutionSample s;
    s.t = t;
    s.x = {x};
    s.value = kmag * (a.value + c * b.value);
    s.est_error = std::abs(kmag) * (a.est_error + c * b.est_error);
    s.phase = std::polar(1.0, kPi * p.q);
    s.method = Method::ModifiedRadialQuad;
    s.region = t < x ? "t<x" : "t>x";
    return s;
}

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

std::string to_string(Problem p) {
    switch (p) {
        case Problem::Classical: return "classical";
        case Problem::ClassicalModified: return "classical-modified";
        case Problem::Radial: return "radial";
        case Problem::RadialSeries: return "radial-series";
        case Problem::RadialModified: return "radial-modified";
    }
    return "?";
}

Problem problem_from_string(const std::string& s) {
    for (Problem p : {Problem::Classical, Problem::ClassicalModified, Problem::Radial, Problem::RadialSeries,
                      Problem::RadialModified})
        if (to_string(p) == s) return p;
    throw DomainError("unknown problem '" + s + "'");
}

std::vector<double> Range::values() const {
    if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step))
        throw DomainError("grid range must be finite");
    if (stop == start) return {start};
    if (!(step > 0.0) || !(stop > start)) throw DomainError("grid range must be increasing with a positive step");
    const double span = (stop - start) / step;
    const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
    if (count > 10'000'000) throw DomainError("grid range has too many points");
    std::vector<double> v(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = start + static_cast<double>(i) * step;
    return v;
}

SolutionSample solve_point(const SolveInput& in, double t, double x) {
    const int n = in.params.n;
    std::vector<double> pt(static_cast<std::size_t>(std::max(n, 1)), 0.0);
    pt[0] = x;
    switch (in.problem) {
        case Problem::Classical: return solve_classical(in.params, in.data, t, pt, in.quad);
        case Problem::ClassicalModified: return solve_classical_modified(in.params, in.data, t, pt, in.quad);
        case Problem::Radial: return solve_radial(in.params, in.data, t, x, in.quad);
        case Problem::RadialSeries: return solve_radial_series(in.params, in.coeffs, t, x);
        case Problem::RadialModified: return solve_radial_modified(in.params, in.data, t, x, in.quad);
    }
    throw DomainError("unknown problem");
}

namespace {

Method method_of(Problem p) {
    switch (p) {
        case Problem::Classical: return Method::ClassicalQuad;
        case Problem::ClassicalModified: return Method::ModifiedQuad;
        case Problem::Radial: return Method::RadialQuad;
        case Problem::RadialSeries: return Method::RadialSeries;
        case Problem::RadialModified: return Method::ModifiedRadialQuad;
    }
    return Method::RadialQuad;
}

}  // namespace

std::vector<SolutionSample> solve_grid(const SolveInput& in, const GridSpec& grid) {
    const std::vector<double> ts = grid.t.values();
    const std::vector<double> xs = grid.x.values();
    const std::size_t total = ts.size() * xs.size();
    std::vector<SolutionSample> out(total);
    std::vector<std::exception_ptr> errors(total);
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            const double t = ts[i / xs.size()];
            const double x = xs[i % xs.size()];
            try {
                out[i] = solve_point(in, t, x);
            } catch (const DomainError& e) {
                SolutionSample s;
                s.t = t;
                s.x = {x};
                s.value = kNaN;
                s.method = method_of(in.problem);
                s.region = "skipped";
                s.skipped = true;
                s.note = e.what();
                out[i] = std::move(s);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned threads = grid.threads > 0 ? static_cast<unsigned>(grid.threads) : std::thread::hardware_concurrency();
    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(total, 1)));
    if (threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace epd::solver
