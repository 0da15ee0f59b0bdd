#include "epd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "epd/errors.hpp"
#include "epd/specfun.hpp"

namespace epd {

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("QuadratureSpec: tolerances must be positive");
    if (max_subdivisions < 0) throw DomainError("QuadratureSpec: max_subdivisions must be >= 0");
}

namespace quad {

namespace {

using GK31 = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr double kPi = std::numbers::pi;

boost::math::quadrature::tanh_sinh<double>& ts_engine() {
    thread_local boost::math::quadrature::tanh_sinh<double> engine(15);
    return engine;
}

bool good_enough(double err, double l1, const QuadratureSpec& spec) {
    return err <= std::max(spec.abs_tol, spec.rel_tol * l1);
}

// One pass of the chosen rule; returns value, error and L1 norm. The rules run
// on [-1, 1]: Boost's error estimates degrade on short intervals far from the
// origin. Nodes are kept strictly inside (a, b).
std::string gfmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string interval(double a, double b) { return "[" + gfmt(a) + ", " + gfmt(b) + "]"; }

void one_pass(const Fn& f, double a, double b, const QuadratureSpec& spec, double& v, double& err,
              double& l1) {
    err = 0.0;
    l1 = 0.0;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const auto g = [&](double u) {
        double y = mid + half * u;
        if (y <= a) y = std::nextafter(a, b);
        if (y >= b) y = std::nextafter(b, a);
        return f(y);
    };
    // Tanh-sinh also hands over the distance to the nearest endpoint, which keeps
    // y exact next to an endpoint singularity.
    const auto gc = [&](double u, double uc) {
        double y = (u < 0.0 ? a : b) - half * uc;
        if (y <= a) y = std::nextafter(a, b);
        if (y >= b) y = std::nextafter(b, a);
        return f(y);
    };
    try {
        if (spec.scheme == QuadScheme::TanhSinh) {
            v = ts_engine().integrate(gc, -1.0, 1.0, spec.rel_tol, &err, &l1);
        } else {
            v = GK31::integrate(g, -1.0, 1.0, 15, spec.rel_tol, &err, &l1);
        }
    } catch (const EpdError&) {
        throw;
    } catch (const std::exception& e) {
        throw QuadratureFailure(std::string("quadrature: ") + e.what());
    }
    v *= half;
    err *= half;
    l1 *= half;
}

QuadResult bisect(const Fn& f, double a, double b, const QuadratureSpec& spec, int depth) {
    double v;
    double err;
    double l1;
    one_pass(f, a, b, spec, v, err, l1);
    if (!std::isfinite(v)) throw QuadratureFailure("quadrature: non-finite value on " + interval(a, b));
    if (good_enough(err, l1, spec) || depth >= spec.max_subdivisions) {
        if (!good_enough(err, l1, spec) && err > 1e3 * std::max(spec.abs_tol, spec.rel_tol * l1))
            throw QuadratureFailure("quadrature: error estimate " + gfmt(err) + " (integral of |f| " + gfmt(l1) +
                                    ") after " + std::to_string(depth) + " bisections on " + interval(a, b));
        return {v, err};
    }
    const double m = 0.5 * (a + b);
    QuadratureSpec half = spec;
    half.abs_tol = 0.5 * spec.abs_tol;
    const QuadResult lo = bisect(f, a, m, half, depth + 1);
    const QuadResult hi = bisect(f, m, b, half, depth + 1);
    return {lo.value + hi.value, lo.est_error + hi.est_error};
}

// int_0^L d^e (H(d) - H(0)) dd + H(0) L^{e+1}/(e+1), with H given in d.
QuadResult one_sided(const Fn& h, double len, double e, const QuadratureSpec& spec) {
    const double h0 = h(0.0);
    const double head = h0 * std::pow(len, e + 1.0) / (e + 1.0);
    const Fn rem = [&](double d) {
        if (d <= 0.0) return 0.0;
        return std::pow(d, e) * (h(d) - h0);
    };
    QuadratureSpec s = spec;
    s.abs_tol = std::max(spec.abs_tol, 0.1 * spec.rel_tol * std::abs(head));
    const QuadResult r = bisect(rem, 0.0, len, s, 0);
    return {head + r.value, r.est_error + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(head)};
}

}  // namespace

QuadResult integrate(const Fn& f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (a == b) return {};
    if (b < a) {
        const QuadResult r = integrate(f, b, a, spec);
        return {-r.value, r.est_error};
    }
    return bisect(f, a, b, spec, 0);
}

QuadResult integrate_jacobi(const Fn& g, double a, double b, double ea, double eb, const QuadratureSpec& spec) {
    spec.validate();
    if (!(ea > -1.0) || !(eb > -1.0)) throw DomainError("integrate_jacobi: exponents must exceed -1");
    if (!(b > a)) throw DomainError("integrate_jacobi: requires a < b");
    const double len = b - a;
    const double half = 0.5 * len;
    const Fn left = [&](double d) { return std::pow(len - d, eb) * g(a + d); };
    const Fn right = [&](double d) { return std::pow(len - d, ea) * g(b - d); };
    const QuadResult l = one_sided(left, half, ea, spec);
    const QuadResult r = one_sided(right, half, eb, spec);
    return {l.value + r.value, l.est_error + r.est_error};
}

double wynn_epsilon(const std::vector<double>& s) {
    const std::size_t n = s.size();
    if (n == 0) return 0.0;
    if (n < 3) return s.back();
    std::vector<double> prev(n + 1, 0.0);
    std::vector<double> cur(s);
    double best = s.back();
    for (int j = 0; cur.size() > 1; ++j) {
        std::vector<double> next(cur.size() - 1);
        for (std::size_t k = 0; k + 1 < cur.size(); ++k) {
            const double d = cur[k + 1] - cur[k];
            if (d == 0.0) {
                // Column converged exactly; an even column already holds the limit.
                return (j % 2 == 0) ? cur[k + 1] : best;
            }
            next[k] = prev[k + 1] + 1.0 / d;
        }
        prev.swap(cur);
        cur.swap(next);
        if ((j + 1) % 2 == 0) best = cur.back();
    }
    return best;
}

namespace {

struct Piece {
    std::vector<int> sign;
    double omega;
    double phase;
};

double gk_panel(const Fn& f, double a, double b, double tol, double& err) {
    double e = 0.0;
    const double v = GK31::integrate(f, a, b, 8, tol, &e);
    err += e;
    return v;
}

}  // namespace

QuadResult bessel_product_integral(const Fn& amplitude, const std::vector<BesselFactor>& factors_in,
                                   double origin_exponent, const OscillatoryControl& ctl) {
    if (!(origin_exponent > -1.0))
        throw DomainError("bessel_product_integral: integrand not integrable at the origin");
    std::vector<BesselFactor> factors;
    double constant = 1.0;
    for (const auto& f : factors_in) {
        if (f.scale < 0.0) throw DomainError("bessel_product_integral: negative scale");
        if (f.scale == 0.0)
            constant *= specfun::bessel_j(f.order, 0.0);
        else
            factors.push_back(f);
    }
    if (constant == 0.0) return {};
    if (factors.empty()) throw DomainError("bessel_product_integral: no oscillatory factor");

    const auto integrand = [&](double rho) {
        double v = amplitude(rho);
        for (const auto& f : factors) v *= specfun::bessel_j(f.order, f.scale * rho);
        return v;
    };

    double omega_max = 0.0;
    double cut = 0.0;
    for (const auto& f : factors) {
        omega_max += f.scale;
        cut = std::max(cut, (30.0 + f.order * f.order) / f.scale);
    }
    const double panel = kPi / omega_max;
    const double tol = ctl.rel_tol;

    // Origin panel, with rho = h u^m to soften the power behaviour.
    double err = 0.0;
    double total = 0.0;
    {
        const double e = origin_exponent;
        const int m = std::clamp(static_cast<int>(std::ceil(3.0 / (e + 1.0))), 1, 40);
        const double h = std::min(panel, cut);
        const Fn sub = [&](double u) {
            if (u <= 0.0) return 0.0;
            const double um1 = std::pow(u, m - 1);
            return integrand(h * um1 * u) * m * h * um1;
        };
        total += gk_panel(sub, 0.0, 1.0, tol, err);
        double a = h;
        while (a < cut) {
            const double b = std::min(a + panel, cut);
            total += gk_panel(integrand, a, b, tol, err);
            a = b;
        }
    }

    // Tail: single-frequency pieces.
    const std::size_t k = factors.size();
    std::vector<Piece> pieces;
    for (std::size_t mask = 0; mask < (std::size_t{1} << (k - 1)); ++mask) {
        Piece p;
        p.sign.assign(k, 1);
        p.omega = factors[0].scale;
        p.phase = -0.5 * factors[0].order * kPi - 0.25 * kPi;
        for (std::size_t j = 1; j < k; ++j) {
            p.sign[j] = (mask >> (j - 1)) & 1 ? -1 : 1;
            p.omega += p.sign[j] * factors[j].scale;
            p.phase += p.sign[j] * (-0.5 * factors[j].order * kPi - 0.25 * kPi);
        }
        pieces.push_back(p);
    }
    const double norm = std::ldexp(1.0, 1 - static_cast<int>(k));
    double tail = 0.0;
    for (const Piece& p : pieces) {
        const Fn piece = [&](double rho) {
            std::complex<double> env = amplitude(rho);
            for (std::size_t j = 0; j < k; ++j) {
                const std::complex<double> e = specfun::hankel1_envelope(factors[j].order, factors[j].scale * rho);
                env *= p.sign[j] > 0 ? e : std::conj(e);
            }
            return norm * (env * std::polar(1.0, p.omega * rho + p.phase)).real();
        };
        if (std::abs(p.omega) < 1e-12 * omega_max) {
            double e = 0.0;
            boost::math::quadrature::exp_sinh<double> es;
            try {
                tail += es.integrate(piece, cut, std::numeric_limits<double>::infinity(), tol, &e);
            } catch (const std::exception& ex) {
                throw NoConvergence(std::string("bessel_product_integral: non-oscillatory tail: ") + ex.what());
            }
            err += e;
            continue;
        }
        const double step = kPi / std::abs(p.omega);
        std::vector<double> sums;
        double s = 0.0;
        double a = cut;
        double last = std::numeric_limits<double>::quiet_NaN();
        int stable = 0;
        bool done = false;
        for (int i = 0; i < ctl.max_half_periods; ++i) {
            s += gk_panel(piece, a, a + step, tol, err);
            a += step;
            sums.push_back(s);
            if (sums.size() < 6) continue;
            const double w = wynn_epsilon(sums);
            const double scale = std::max(std::abs(w), std::abs(total));
            if (std::isfinite(last) && std::abs(w - last) <= std::max(ctl.abs_tol, ctl.rel_tol * scale)) {
                if (++stable >= 2) {
                    tail += w;
                    err += std::abs(w - last);
                    done = true;
                    break;
                }
            } else {
                stable = 0;
            }
            last = w;
            // Keep the table short; older partial sums add nothing once the
            // sequence is in its asymptotic regime.
            if (sums.size() > 40) sums.erase(sums.begin(), sums.begin() + 10);
        }
        if (!done)
            throw NoConvergence("bessel_product_integral: tail did not settle within " +
                                std::to_string(ctl.max_half_periods) + " half periods");
    }
    const double value = constant * (total + tail);
    if (!std::isfinite(value)) throw NoConvergence("bessel_product_integral: non-finite result");
    return {value, std::abs(constant) * err};
}

}  // namespace quad
}  // namespace epd
