#include "epd/data.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "epd/errors.hpp"

namespace epd::solver {

namespace {

constexpr std::size_t kMaxPolyCoeffs = 17;  // degree <= 16
constexpr double kGaussCut = 6.437;         // exp(-u^2) < 1e-18 beyond

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void natural_spline(Tabulated& t) {
    const std::size_t n = t.knots.size();
    t.second.assign(n, 0.0);
    if (n < 3) return;
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double sig = (t.knots[i] - t.knots[i - 1]) / (t.knots[i + 1] - t.knots[i - 1]);
        const double p = sig * t.second[i - 1] + 2.0;
        t.second[i] = (sig - 1.0) / p;
        const double d = (t.values[i + 1] - t.values[i]) / (t.knots[i + 1] - t.knots[i]) -
                         (t.values[i] - t.values[i - 1]) / (t.knots[i] - t.knots[i - 1]);
        u[i] = (6.0 * d / (t.knots[i + 1] - t.knots[i - 1]) - sig * u[i - 1]) / p;
    }
    t.second[n - 1] = 0.0;
    for (std::size_t k = n - 1; k-- > 0;) t.second[k] = t.second[k] * t.second[k + 1] + u[k];
}

double spline_eval(const Tabulated& t, double y) {
    if (t.knots.empty() || y < t.knots.front() || y > t.knots.back()) return 0.0;
    if (t.knots.size() == 1) return t.values[0];
    const auto it = std::upper_bound(t.knots.begin(), t.knots.end(), y);
    std::size_t hi = static_cast<std::size_t>(it - t.knots.begin());
    hi = std::clamp<std::size_t>(hi, 1, t.knots.size() - 1);
    const std::size_t lo = hi - 1;
    const double h = t.knots[hi] - t.knots[lo];
    const double a = (t.knots[hi] - y) / h;
    const double b = (y - t.knots[lo]) / h;
    return a * t.values[lo] + b * t.values[hi] +
           ((a * a * a - a) * t.second[lo] + (b * b * b - b) * t.second[hi]) * h * h / 6.0;
}

using Hull = std::optional<std::pair<double, double>>;

Hull merge(const Hull& a, const Hull& b) {
    if (!a || !b) return std::nullopt;
    return std::make_pair(std::min(a->first, b->first), std::max(a->second, b->second));
}

Hull hull_of(const DataFunction& f, bool effective);

Hull hull_of_variant(const DataFunction::Variant& v, bool effective) {
    return std::visit(
        overloaded{
            [](const Polynomial&) -> Hull { return std::nullopt; },
            [&](const Gaussian& g) -> Hull {
                if (!effective) return std::nullopt;
                return std::make_pair(g.center - kGaussCut * g.width, g.center + kGaussCut * g.width);
            },
            [](const Bump& b) -> Hull { return std::make_pair(b.center - b.radius, b.center + b.radius); },
            [](const Tabulated& t) -> Hull { return std::make_pair(t.knots.front(), t.knots.back()); },
            [&](const RadialProfile& r) -> Hull {
                const Hull h = hull_of(*r.inner, effective);
                if (!h) return std::nullopt;
                const double o = r.origin.empty() ? 0.0 : r.origin[0];
                const double reach = std::max(std::abs(h->first), std::abs(h->second));
                return std::make_pair(o - reach, o + reach);
            },
            [&](const Combination& c) -> Hull {
                Hull acc;
                bool first = true;
                for (const auto& [coef, term] : c.terms) {
                    if (coef == 0.0 || term->is_zero()) continue;
                    const Hull h = hull_of(*term, effective);
                    if (!h) return std::nullopt;
                    acc = first ? h : merge(acc, h);
                    first = false;
                }
                if (first) return std::make_pair(0.0, 0.0);
                return acc;
            },
        },
        v);
}

Hull hull_of(const DataFunction& f, bool effective) {
    if (f.is_zero()) return std::make_pair(0.0, 0.0);
    return hull_of_variant(f.variant(), effective);
}

}  // namespace

DataFunction::DataFunction() : v_(Polynomial{}) {}

DataFunction DataFunction::zero() { return DataFunction(); }

DataFunction DataFunction::polynomial(std::vector<double> coeffs) {
    if (coeffs.size() > kMaxPolyCoeffs) throw DomainError("polynomial data: degree exceeds 16");
    for (double c : coeffs)
        if (!std::isfinite(c)) throw DomainError("polynomial data: non-finite coefficient");
    return DataFunction(Polynomial{std::move(coeffs)});
}

DataFunction DataFunction::gaussian(double amplitude, double center, double width) {
    if (!(width > 0.0)) throw DomainError("gaussian data: width must be positive");
    return DataFunction(Gaussian{amplitude, center, width});
}

DataFunction DataFunction::bump(double center, double radius) {
    if (!(radius > 0.0)) throw DomainError("bump data: radius must be positive");
    return DataFunction(Bump{center, radius});
}

DataFunction DataFunction::tabulated(std::vector<double> knots, std::vector<double> values) {
    if (knots.empty() || knots.size() != values.size())
        throw DomainError("tabulated data: knots and values must be non-empty and of equal length");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i] > knots[i - 1])) throw DomainError("tabulated data: knots must be strictly increasing");
    Tabulated t{std::move(knots), std::move(values), {}};
    natural_spline(t);
    return DataFunction(std::move(t));
}

DataFunction DataFunction::radial_profile(DataFunction inner, std::vector<double> origin) {
    return DataFunction(RadialProfile{std::make_shared<const DataFunction>(std::move(inner)), std::move(origin)});
}

DataFunction DataFunction::operator+(const DataFunction& other) const {
    Combination c;
    c.terms.emplace_back(1.0, std::make_shared<const DataFunction>(*this));
    c.terms.emplace_back(1.0, std::make_shared<const DataFunction>(other));
    return DataFunction(std::move(c));
}

DataFunction DataFunction::operator*(double s) const {
    Combination c;
    c.terms.emplace_back(s, std::make_shared<const DataFunction>(*this));
    return DataFunction(std::move(c));
}

double DataFunction::operator()(double y) const {
    return std::visit(
        overloaded{
            [&](const Polynomial& p) {
                double acc = 0.0;
                for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = acc * y + *it;
                return acc;
            },
            [&](const Gaussian& g) {
                const double u = (y - g.center) / g.width;
                return g.amplitude * std::exp(-u * u);
            },
            [&](const Bump& b) {
                const double u = (y - b.center) / b.radius;
                const double w = 1.0 - u * u;
                if (w <= 0.0) return 0.0;
                return std::exp(1.0 - 1.0 / w);
            },
            [&](const Tabulated& t) { return spline_eval(t, y); },
            [&](const RadialProfile& r) {
                const double o = r.origin.empty() ? 0.0 : r.origin[0];
                return (*r.inner)(std::abs(y - o));
            },
            [&](const Combination& c) {
                double acc = 0.0;
                for (const auto& [coef, term] : c.terms) acc += coef * (*term)(y);
                return acc;
            },
        },
        v_);
}

double DataFunction::operator()(std::span<const double> y) const {
    if (y.empty()) throw DomainError("data evaluation: empty point");
    if (const auto* r = std::get_if<RadialProfile>(&v_)) {
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double o = i < r->origin.size() ? r->origin[i] : 0.0;
            s += (y[i] - o) * (y[i] - o);
        }
        return (*r->inner)(std::sqrt(s));
    }
    if (const auto* c = std::get_if<Combination>(&v_)) {
        double acc = 0.0;
        for (const auto& [coef, term] : c->terms) acc += coef * (*term)(y);
        return acc;
    }
    return (*this)(y[0]);
}

bool DataFunction::is_zero() const {
    if (const auto* p = std::get_if<Polynomial>(&v_))
        return std::all_of(p->coeffs.begin(), p->coeffs.end(), [](double c) { return c == 0.0; });
    if (const auto* g = std::get_if<Gaussian>(&v_)) return g->amplitude == 0.0;
    if (const auto* t = std::get_if<Tabulated>(&v_))
        return std::all_of(t->values.begin(), t->values.end(), [](double c) { return c == 0.0; });
    if (const auto* r = std::get_if<RadialProfile>(&v_)) return r->inner->is_zero();
    if (const auto* c = std::get_if<Combination>(&v_))
        return std::all_of(c->terms.begin(), c->terms.end(),
                           [](const auto& t) { return t.first == 0.0 || t.second->is_zero(); });
    return false;
}

std::optional<std::pair<double, double>> DataFunction::support() const { return hull_of(*this, false); }

std::optional<std::pair<double, double>> DataFunction::effective_support() const { return hull_of(*this, true); }

std::string DataFunction::describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const Polynomial& p) {
                       if (p.coeffs.empty()) {
                           os << "zero";
                           return;
                       }
                       os << "poly:";
                       for (std::size_t i = 0; i < p.coeffs.size(); ++i) os << (i ? "," : "") << p.coeffs[i];
                   },
                   [&](const Gaussian& g) { os << "gauss:" << g.amplitude << ',' << g.center << ',' << g.width; },
                   [&](const Bump& b) { os << "bump:" << b.center << ',' << b.radius; },
                   [&](const Tabulated& t) { os << "tabulated[" << t.knots.size() << "]"; },
                   [&](const RadialProfile& r) { os << "radial(" << r.inner->describe() << ")"; },
                   [&](const Combination& c) {
                       os << "sum(";
                       for (std::size_t i = 0; i < c.terms.size(); ++i)
                           os << (i ? " + " : "") << c.terms[i].first << '*' << c.terms[i].second->describe();
                       os << ')';
                   },
               },
               v_);
    return os.str();
}

int SeriesCoefficients::truncation() const { return static_cast<int>(std::max(a.size(), b.size())) - 1; }

void SeriesCoefficients::validate() const {
    if (a.empty() && b.empty()) throw DomainError("series coefficients: both lists empty");
    for (double c : a)
        if (!std::isfinite(c)) throw DomainError("series coefficients: non-finite a_l");
    for (double c : b)
        if (!std::isfinite(c)) throw DomainError("series coefficients: non-finite b_l");
}

}  // namespace epd::solver
