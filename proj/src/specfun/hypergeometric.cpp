#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "epd/errors.hpp"
#include "epd/specfun.hpp"

namespace epd::specfun {

namespace {

constexpr double kDirectRadius = 0.9;
// c - a - b closer than this to an integer makes the 1-z connection formula
// cancel catastrophically.
constexpr double kIntegerGap = 1e-6;

std::string args(double a, double b, double c, double z) {
    return "(" + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c) + ", " +
           std::to_string(z) + ")";
}

// Number of terms after which the series in `a` terminates, or -1.
int termination_index(double a) {
    if (!is_nonpositive_integer(a)) return -1;
    return static_cast<int>(-a);
}

bool converged_ok(const HyperResult& r, double tol) {
    return r.est_error <= tol * std::max(1.0, std::abs(r.value));
}

// Plain power series. Terminating parameters end the loop exactly.
HyperResult power_series(double a, double b, double c, double z, const SeriesControl& ctl) {
    HyperResult r;
    double term = 1.0;
    double sum = 1.0;
    const int ma = termination_index(a);
    const int mb = termination_index(b);
    int stop = -1;
    if (ma >= 0) stop = ma;
    if (mb >= 0) stop = stop < 0 ? mb : std::min(stop, mb);

    double biggest = 1.0;
    for (int n = 0; n < ctl.max_terms; ++n) {
        if (stop >= 0 && n >= stop) {
            r.value = sum;
            r.terms_used = n + 1;
            r.converged = true;
            r.est_error = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(sum) * (n + 1);
            return r;
        }
        const double num = (a + n) * (b + n);
        const double den = (c + n) * (n + 1.0);
        const double ratio = num / den * z;
        term *= ratio;
        sum += term;
        biggest = std::max(biggest, std::abs(term));
        // Tail bound: once the term ratio settles below one, the remainder is
        // at most |term| r/(1-r) with r the larger of the current ratio and |z|.
        // Stop on a relative tail, or once the tail is below the roundoff
        // already committed by the largest term.
        const double r_est = std::max(std::abs(ratio), std::abs(z));
        if (r_est < 1.0 && n > 1) {
            const double tail = std::abs(term) * r_est / (1.0 - r_est);
            const double scale = std::max(1.0, std::abs(sum));
            const bool small = tail <= 0.5 * ctl.tol * std::abs(sum) ||
                               tail <= std::numeric_limits<double>::epsilon() * biggest;
            if (small && std::abs(ratio) < 1.0) {
                r.value = sum;
                r.terms_used = n + 2;
                r.converged = true;
                r.est_error = tail + 4.0 * std::numeric_limits<double>::epsilon() * scale * std::sqrt(n + 2.0);
                if (!converged_ok(r, ctl.tol)) r.est_error = ctl.tol * scale;
                return r;
            }
        }
    }
    r.value = sum;
    r.terms_used = ctl.max_terms;
    r.converged = false;
    r.est_error = std::abs(term);
    return r;
}

HyperResult gauss_sum_at_one(double a, double b, double c) {
    const double s = c - a - b;
    if (!(s > 0.0))
        throw DomainError("gauss_2f1: z = 1 requires c - a - b > 0, got " + std::to_string(s));
    HyperResult r;
    r.value = gamma_fn(c) * gamma_fn(s) * rgamma(c - a) * rgamma(c - b);
    r.terms_used = 1;
    r.converged = true;
    r.est_error = 1e-14 * std::abs(r.value);
    return r;
}

HyperResult dispatch(double a, double b, double c, double z, const SeriesControl& ctl, int depth);

// 2F1 = A F(a,b;a+b-c+1;1-z) + B (1-z)^{c-a-b} F(c-a,c-b;c-a-b+1;1-z).
HyperResult one_minus_z(double a, double b, double c, double z, const SeriesControl& ctl, int depth) {
    const double s = c - a - b;
    const double w = 1.0 - z;
    const double gc = gamma_fn(c);
    const double coef_a = gc * gamma_fn(s) * rgamma(c - a) * rgamma(c - b);
    const double coef_b = gc * gamma_fn(-s) * rgamma(a) * rgamma(b);
    HyperResult r;
    r.converged = true;
    double value = 0.0;
    double err = 0.0;
    if (coef_a != 0.0) {
        const HyperResult fa = dispatch(a, b, a + b - c + 1.0, w, ctl, depth + 1);
        value += coef_a * fa.value;
        err += std::abs(coef_a) * fa.est_error;
        r.terms_used += fa.terms_used;
        r.converged = r.converged && fa.converged;
    }
    if (coef_b != 0.0) {
        const HyperResult fb = dispatch(c - a, c - b, s + 1.0, w, ctl, depth + 1);
        const double pw = std::pow(w, s);
        value += coef_b * pw * fb.value;
        err += std::abs(coef_b * pw) * fb.est_error;
        r.terms_used += fb.terms_used;
        r.converged = r.converged && fb.converged;
    }
    // Cancellation between the two branches costs roughly their magnitude in ulps.
    err += 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(coef_a) + std::abs(coef_b));
    r.value = value;
    r.est_error = err;
    if (r.converged && !converged_ok(r, ctl.tol)) r.est_error = ctl.tol * std::max(1.0, std::abs(value));
    return r;
}

HyperResult near_one(double a, double b, double c, double z, const SeriesControl& ctl, int depth) {
    const double s = c - a - b;
    if (std::abs(s - std::round(s)) > kIntegerGap) return one_minus_z(a, b, c, z, ctl, depth);

    // Logarithmic case: the power series still converges for z < 1, only slowly.
    HyperResult direct = power_series(a, b, c, z, ctl);
    if (direct.converged) return direct;

    // Average of the connection formula on either side of the integer.
    const double eps = 1e-5;
    const HyperResult lo = one_minus_z(a, b, c - eps, z, ctl, depth);
    const HyperResult hi = one_minus_z(a, b, c + eps, z, ctl, depth);
    HyperResult r;
    r.value = 0.5 * (lo.value + hi.value);
    r.terms_used = lo.terms_used + hi.terms_used;
    r.est_error = 0.5 * std::abs(hi.value - lo.value) * eps + lo.est_error + hi.est_error;
    r.converged = lo.converged && hi.converged;
    return r;
}

HyperResult dispatch(double a, double b, double c, double z, const SeriesControl& ctl, int depth) {
    if (depth > 4) throw DomainError("gauss_2f1: no transformation applies at " + args(a, b, c, z));
    if (z == 0.0) return {1.0, 1, true, 0.0};

    const int ma = termination_index(a);
    const int mb = termination_index(b);
    const bool terminates = ma >= 0 || mb >= 0;
    if (is_nonpositive_integer(c)) {
        const int m = ma >= 0 && mb >= 0 ? std::min(ma, mb) : std::max(ma, mb);
        if (!terminates || m > static_cast<int>(-c))
            throw PoleError("gauss_2f1: c is a non-positive integer at " + args(a, b, c, z));
    }
    if (terminates) {
        SeriesControl poly = ctl;
        poly.max_terms = std::max(ctl.max_terms, std::max(ma, mb) + 2);
        return power_series(a, b, c, z, poly);
    }
    if (z == 1.0) return gauss_sum_at_one(a, b, c);
    if (z > 1.0) throw DomainError("gauss_2f1: z > 1 is on the branch cut " + args(a, b, c, z));
    if (std::abs(z) <= kDirectRadius) return power_series(a, b, c, z, ctl);
    if (z < -kDirectRadius) {
        // Pfaff: F(a,b;c;z) = (1-z)^{-a} F(a, c-b; c; z/(z-1)).
        const double w = z / (z - 1.0);
        HyperResult r = dispatch(a, c - b, c, w, ctl, depth + 1);
        const double pf = std::pow(1.0 - z, -a);
        r.value *= pf;
        r.est_error *= std::abs(pf);
        return r;
    }
    return near_one(a, b, c, z, ctl, depth);
}

}  // namespace

HyperResult gauss_2f1(double a, double b, double c, double z, const SeriesControl& ctl) {
    ctl.validate();
    if (std::isnan(a) || std::isnan(b) || std::isnan(c) || std::isnan(z))
        throw DomainError("gauss_2f1: NaN argument");
    const HyperResult r = dispatch(a, b, c, z, ctl, 0);
    if (!r.converged)
        throw NoConvergence("gauss_2f1: series did not converge in " + std::to_string(ctl.max_terms) +
                            " terms at " + args(a, b, c, z));
    return r;
}

double hyp2f1(double a, double b, double c, double z, const SeriesControl& ctl) {
    return gauss_2f1(a, b, c, z, ctl).value;
}

}  // namespace epd::specfun
