#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "epd/errors.hpp"
#include "epd/verify.hpp"

namespace epd::verify {

void FDStencilSpec::validate() const {
    if (!(h_t > 0.0 && h_t < 0.5) || !(h_x > 0.0 && h_x < 0.5))
        throw DomainError("FDStencilSpec: relative steps must lie in (0, 1/2)");
    if (richardson_levels < 1 || richardson_levels > 4)
        throw DomainError("FDStencilSpec: richardson_levels must be 1..4");
}

void VerificationReport::add(std::vector<double> probe, double residual) {
    probes.push_back(std::move(probe));
    residuals.push_back(residual);
}

VerificationReport& VerificationReport::finalize() {
    max_residual = 0.0;
    mean_residual = 0.0;
    bool finite = true;
    for (double r : residuals) {
        if (!std::isfinite(r)) finite = false;
        max_residual = std::max(max_residual, std::abs(r));
        mean_residual += std::abs(r);
    }
    if (!residuals.empty()) mean_residual /= static_cast<double>(residuals.size());
    if (!finite) max_residual = std::numeric_limits<double>::infinity();
    pass = finite && max_residual <= tolerance && failed_conditions.empty();
    return *this;
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["probes"] = probes;
    j["residuals"] = residuals;
    j["max_residual"] = max_residual;
    j["mean_residual"] = mean_residual;
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    j["failed_conditions"] = failed_conditions;
    j["notes"] = notes;
    return j;
}

std::string VerificationReport::to_text() const {
    std::ostringstream os;
    os << std::setprecision(3) << (pass ? "PASS " : "FAIL ") << name << "  max " << max_residual << "  mean "
       << mean_residual << "  tol " << tolerance << "  (" << residuals.size() << " probes)\n";
    for (const auto& c : failed_conditions) os << "  failed: " << c << '\n';
    for (const auto& n : notes) os << "  " << n << '\n';
    return os.str();
}

double fd_first(const std::function<double(double)>& g, double y, double h, int levels) {
    std::vector<double> d;
    for (int k = 0; k < levels; ++k) {
        const double hk = h / std::pow(2.0, k);
        d.push_back((g(y + hk) - g(y - hk)) / (2.0 * hk));
    }
    for (int m = 1; m < levels; ++m) {
        const double f = std::pow(4.0, m);
        for (int k = levels - 1; k >= m; --k) d[k] = (f * d[k] - d[k - 1]) / (f - 1.0);
    }
    return d.back();
}

double fd_second(const std::function<double(double)>& g, double y, double h, int levels) {
    const double g0 = g(y);
    std::vector<double> d;
    for (int k = 0; k < levels; ++k) {
        const double hk = h / std::pow(2.0, k);
        d.push_back((g(y + hk) - 2.0 * g0 + g(y - hk)) / (hk * hk));
    }
    for (int m = 1; m < levels; ++m) {
        const double f = std::pow(4.0, m);
        for (int k = levels - 1; k >= m; --k) d[k] = (f * d[k] - d[k - 1]) / (f - 1.0);
    }
    return d.back();
}

namespace {

double guarded(const std::function<double()>& eval) {
    double v;
    try {
        v = eval();
    } catch (const DomainError& e) {
        throw StencilDomainError(std::string("stencil leaves the field's domain: ") + e.what());
    }
    if (!std::isfinite(v)) throw StencilDomainError("field is not finite on the stencil");
    return v;
}

}  // namespace

Residual epd_residual_detail(const Field& u, double mu, double nu, double t, double x, const FDStencilSpec& s) {
    s.validate();
    if (!(t > 0.0) || !(x > 0.0)) throw StencilDomainError("epd_residual: requires t > 0 and x > 0");
    const auto in_t = [&](double tt) { return guarded([&] { return u(tt, x); }); };
    const auto in_x = [&](double xx) { return guarded([&] { return u(t, xx); }); };
    const double dt = s.h_t * t;
    const double dx = s.h_x * x;
    const int lv = s.richardson_levels;
    Residual r;
    r.value = in_t(t);
    const double utt = fd_second(in_t, t, dt, lv);
    const double ut = (1.0 - 2.0 * mu) / t * fd_first(in_t, t, dt, lv);
    const double uxx = fd_second(in_x, x, dx, lv);
    const double ux = (1.0 - 2.0 * nu) / x * fd_first(in_x, x, dx, lv);
    r.lhs = uxx + ux;
    r.rhs = utt + ut;
    r.absolute = std::abs(r.lhs - r.rhs);
    r.scale = std::max({std::abs(r.value), std::abs(utt), std::abs(ut), std::abs(uxx), std::abs(ux)});
    return r;
}

double epd_residual(const Field& u, double mu, double nu, double t, double x, const FDStencilSpec& s) {
    return epd_residual_detail(u, mu, nu, t, x, s).absolute;
}

Residual epd_residual_classical(const FieldN& u, double mu, int n, double t, std::span<const double> x,
                                const FDStencilSpec& s) {
    s.validate();
    if (n < 1 || n > 3 || static_cast<int>(x.size()) != n) throw DomainError("epd_residual_classical: bad dimension");
    if (!(t > 0.0)) throw StencilDomainError("epd_residual_classical: requires t > 0");
    std::vector<double> p(x.begin(), x.end());
    const auto in_t = [&](double tt) { return guarded([&] { return u(tt, x); }); };
    const int lv = s.richardson_levels;
    Residual r;
    r.value = in_t(t);
    const double utt = fd_second(in_t, t, s.h_t * t, lv);
    const double ut = (1.0 - 2.0 * mu) / t * fd_first(in_t, t, s.h_t * t, lv);
    double lap = 0.0;
    double biggest = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto in_xi = [&](double v) {
            std::vector<double> q = p;
            q[static_cast<std::size_t>(i)] = v;
            return guarded([&] { return u(t, q); });
        };
        const double d2 = fd_second(in_xi, p[static_cast<std::size_t>(i)],
                                    s.h_x * std::max(1.0, std::abs(p[static_cast<std::size_t>(i)])), lv);
        lap += d2;
        biggest = std::max(biggest, std::abs(d2));
    }
    r.lhs = lap;
    r.rhs = utt + ut;
    r.absolute = std::abs(r.lhs - r.rhs);
    r.scale = std::max({std::abs(r.value), std::abs(utt), std::abs(ut), biggest});
    return r;
}

}  // namespace epd::verify
