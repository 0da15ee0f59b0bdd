#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace epd::solver {

class DataFunction;

struct Polynomial {
    std::vector<double> coeffs;  // c0 + c1 y + ...
};

// amplitude * exp(-((y - center)/width)^2)
struct Gaussian {
    double amplitude = 1.0;
    double center = 0.0;
    double width = 1.0;
};

// exp(1 - 1/(1 - u^2)) for |u| < 1 with u = (y - center)/radius; peak value 1.
struct Bump {
    double center = 0.0;
    double radius = 1.0;
};

// Natural cubic spline through the knots, zero outside [knots.front(), knots.back()].
struct Tabulated {
    std::vector<double> knots;
    std::vector<double> values;
    std::vector<double> second;  // spline second derivatives, filled on construction
};

// inner(|y - origin|) for points of R^n.
struct RadialProfile {
    std::shared_ptr<const DataFunction> inner;
    std::vector<double> origin;
};

// sum_k coef_k * term_k; lets tests build f1 + f2 without a new variant per case.
struct Combination {
    std::vector<std::pair<double, std::shared_ptr<const DataFunction>>> terms;
};

class DataFunction {
public:
    using Variant = std::variant<Polynomial, Gaussian, Bump, Tabulated, RadialProfile, Combination>;

    DataFunction();  // identically zero

    static DataFunction zero();
    static DataFunction polynomial(std::vector<double> coeffs);
    static DataFunction gaussian(double amplitude, double center, double width);
    static DataFunction bump(double center, double radius);
    static DataFunction tabulated(std::vector<double> knots, std::vector<double> values);
    static DataFunction radial_profile(DataFunction inner, std::vector<double> origin);

    DataFunction operator+(const DataFunction& other) const;
    DataFunction operator*(double s) const;

    // Scalar evaluation. A RadialProfile evaluates inner(|y - origin[0]|).
    double operator()(double y) const;
    // Point of R^n. Non-radial variants read the first coordinate.
    double operator()(std::span<const double> y) const;

    bool is_zero() const;
    // Closed interval outside which the function vanishes, if there is one.
    std::optional<std::pair<double, double>> support() const;
    // As support(), but also truncates Gaussians where they drop below 1e-18 of
    // their amplitude.
    std::optional<std::pair<double, double>> effective_support() const;
    const Variant& variant() const { return v_; }
    std::string describe() const;

private:
    explicit DataFunction(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

struct CauchyData {
    DataFunction f;
    DataFunction g;
};

struct SeriesCoefficients {
    std::vector<double> a;
    std::vector<double> b;

    // L = max(len(a), len(b)) - 1
    int truncation() const;
    void validate() const;
};

}  // namespace epd::solver
