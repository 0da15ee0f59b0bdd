#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "epd/errors.hpp"
#include "epd/specfun.hpp"

namespace epd::specfun {

// terms_used counts anti-diagonals, so max_terms caps the diagonal index.
HyperResult appell_f4(double a, double b, double c, double d, double x, double y,
                      const SeriesControl& ctl) {
    ctl.validate();
    if (is_nonpositive_integer(c) || is_nonpositive_integer(d))
        throw PoleError("appell_f4: c or d is a non-positive integer");
    const double radius = std::sqrt(std::abs(x)) + std::sqrt(std::abs(y));
    if (!(radius < 1.0))
        throw DomainError("appell_f4: sqrt|x| + sqrt|y| = " + std::to_string(radius) + " >= 1");

    // Asymptotic ratio of consecutive diagonal sums.
    const double rho = radius * radius;
    std::vector<double> prev{1.0};
    std::vector<double> cur;
    double sum = 1.0;
    double prev_abs = 1.0;

    HyperResult r;
    for (int s = 1; s < ctl.max_terms; ++s) {
        cur.assign(static_cast<std::size_t>(s) + 1, 0.0);
        const double ab = (a + s - 1) * (b + s - 1);
        double diag = 0.0;
        double diag_abs = 0.0;
        for (int m = 0; m < s; ++m) {
            const int n = s - m;
            cur[m] = prev[m] * ab / ((d + n - 1) * n) * y;
        }
        cur[s] = prev[s - 1] * ab / ((c + s - 1) * s) * x;
        for (double v : cur) {
            diag += v;
            diag_abs += std::abs(v);
        }
        sum += diag;

        const double ratio = prev_abs > 0.0 ? diag_abs / prev_abs : 0.0;
        const double r_est = std::max(ratio, rho);
        const double scale = std::max(1.0, std::abs(sum));
        if (diag_abs == 0.0 && (is_nonpositive_integer(a) || is_nonpositive_integer(b) || (x == 0.0 && y == 0.0))) {
            r.value = sum;
            r.terms_used = s + 1;
            r.converged = true;
            r.est_error = 4.0 * std::numeric_limits<double>::epsilon() * scale * s;
            return r;
        }
        if (s > 2 && ratio < 1.0 && r_est < 1.0) {
            const double tail = diag_abs * r_est / (1.0 - r_est);
            if (tail <= 0.5 * ctl.tol * scale) {
                r.value = sum;
                r.terms_used = s + 1;
                r.converged = true;
                r.est_error = tail + 4.0 * std::numeric_limits<double>::epsilon() * scale * std::sqrt(s + 1.0);
                if (r.est_error > ctl.tol * scale) r.est_error = ctl.tol * scale;
                return r;
            }
        }
        prev_abs = diag_abs;
        prev.swap(cur);
    }
    throw NoConvergence("appell_f4: no convergence within " + std::to_string(ctl.max_terms) +
                        " diagonals at x = " + std::to_string(x) + ", y = " + std::to_string(y));
}

}  // namespace epd::specfun
