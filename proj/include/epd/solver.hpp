#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "epd/data.hpp"
#include "epd/kernels.hpp"
#include "epd/quadrature.hpp"

namespace epd::solver {

using kernels::EPDParameters;

enum class Method { ClassicalQuad, ModifiedQuad, RadialQuad, RadialSeries, ModifiedRadialQuad };

std::string to_string(Method m);

struct SolutionSample {
    double t = 0.0;
    std::vector<double> x;  // one coordinate for the radial family
    double value = 0.0;     // phase-stripped profile
    std::complex<double> phase{1.0, 0.0};
    Method method = Method::RadialQuad;
    double est_error = 0.0;
    std::string region;  // "t<x", "t>x", "interior", or "skipped"
    bool skipped = false;
    std::string note;  // reason for a skip
};

// f#_x(r): integral of f over the sphere of radius r about x, with the
// unnormalised surface measure (total mass 2 pi^{n/2}/Gamma(n/2)).
double spherical_mean(const DataFunction& f, std::span<const double> x, double r, int n);

SolutionSample solve_classical(const EPDParameters& p, const CauchyData& data, double t,
                               std::span<const double> x, const QuadratureSpec& quad = {});

SolutionSample solve_classical_modified(const EPDParameters& p, const CauchyData& data, double t,
                                        std::span<const double> x, const QuadratureSpec& quad = {});

SolutionSample solve_radial(const EPDParameters& p, const CauchyData& data, double t, double x,
                            const QuadratureSpec& quad = {});

SolutionSample solve_radial_series(const EPDParameters& p, const SeriesCoefficients& coeffs, double t,
                                   double x);

SolutionSample solve_radial_modified(const EPDParameters& p, const CauchyData& data, double t, double x,
                                     const QuadratureSpec& quad = {});

enum class Problem { Classical, ClassicalModified, Radial, RadialSeries, RadialModified };

std::string to_string(Problem p);
Problem problem_from_string(const std::string& s);

struct Range {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    std::vector<double> values() const;
};

struct GridSpec {
    Range t;
    Range x;
    int threads = 1;  // 0 = hardware concurrency
};

// Everything a grid run needs besides the grid itself. RadialSeries reads
// coeffs; every other problem reads data.
struct SolveInput {
    Problem problem = Problem::Radial;
    EPDParameters params;
    CauchyData data;
    SeriesCoefficients coeffs;
    QuadratureSpec quad;
};

// Single point. For classical problems x is the first coordinate of a point of
// R^n whose other coordinates are 0.
SolutionSample solve_point(const SolveInput& in, double t, double x);

// Row-major in t then x. Domain violations become skipped samples; convergence
// failures propagate.
std::vector<SolutionSample> solve_grid(const SolveInput& in, const GridSpec& grid);

}  // namespace epd::solver
