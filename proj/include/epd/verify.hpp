#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "epd/data.hpp"
#include "epd/kernels.hpp"
#include "epd/quadrature.hpp"

namespace epd::verify {

using kernels::EPDParameters;

// Steps are relative: dt = h_t * t, dx = h_x * x (radial) or h_x * max(1, |x_i|).
struct FDStencilSpec {
    double h_t = 1e-3;
    double h_x = 1e-3;
    int richardson_levels = 2;

    void validate() const;
};

struct VerificationReport {
    std::string name;
    std::vector<std::vector<double>> probes;
    std::vector<double> residuals;  // one per probe
    double max_residual = 0.0;
    double mean_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    // Conditions that are not residuals (monotone decrease, a sign). Any entry
    // here fails the report.
    std::vector<std::string> failed_conditions;
    std::vector<std::string> notes;

    void add(std::vector<double> probe, double residual);
    // Fills max/mean and pass = (max <= tolerance) && failed_conditions.empty().
    VerificationReport& finalize();
    nlohmann::json to_json() const;
    std::string to_text() const;
};

using Field = std::function<double(double t, double x)>;
using FieldN = std::function<double(double t, std::span<const double> x)>;

struct Residual {
    double lhs = 0.0;  // spatial operator
    double rhs = 0.0;  // time operator
    double value = 0.0;
    double absolute = 0.0;
    double scale = 0.0;  // largest operator term, or |U|

    double relative() const { return scale > 0.0 ? absolute / scale : absolute; }
};

// (d_xx + (1-2nu)/x d_x) U - (d_tt + (1-2mu)/t d_t) U at (t, x).
Residual epd_residual_detail(const Field& u, double mu, double nu, double t, double x, const FDStencilSpec& s = {});
// |lhs - rhs|, unnormalised.
double epd_residual(const Field& u, double mu, double nu, double t, double x, const FDStencilSpec& s = {});
// Delta_n U - (d_tt + (1-2mu)/t d_t) U for a field on R^n.
Residual epd_residual_classical(const FieldN& u, double mu, int n, double t, std::span<const double> x,
                                const FDStencilSpec& s = {});

// Richardson-extrapolated central differences.
double fd_first(const std::function<double(double)>& g, double y, double h, int levels);
double fd_second(const std::function<double(double)>& g, double y, double h, int levels);

// ---------------------------------------------------------------------------
// Initial conditions
// ---------------------------------------------------------------------------

struct InitialConditionReport {
    VerificationReport value;       // |U(t,x) - f(x)| at the smallest t
    VerificationReport derivative;  // |t^{1-2mu} d_t U - g(x)| at the smallest t
    double value_order = 0.0;       // empirical order from the last two t
    double derivative_order = 0.0;
};

// ts are fractions of x (t = ts[k] * x), decreasing, at least 3 of them.
InitialConditionReport check_initial_conditions(const Field& u, const std::function<double(double)>& f,
                                                const std::function<double(double)>& g, double mu,
                                                const std::vector<double>& xs, const std::vector<double>& ts,
                                                double value_tol = 1e-4, double derivative_tol = 1e-3);

// ---------------------------------------------------------------------------
// Integral oracles
// ---------------------------------------------------------------------------

struct OracleResult {
    double numeric = 0.0;
    double closed_form = 0.0;  // NaN when no closed form applies
    double difference = 0.0;
};

// int_0^inf r^{-rho} J_mu(a r) J_nu(b r) dr against its 2F1 closed form.
OracleResult weber_schafheitlin_oracle(double rho, double mu, double nu, double a, double b);

// int_0^inf l^{2a-1-mu} J_mu(l t) J_nu(l x) J_nu(l x') dl; closed form (F4) when x' > x + t.
OracleResult triple_bessel_oracle(double a, double mu, double nu, double t, double x, double xp);

// N_mu profile against its Bessel-integral representation
// (2 pi)^{-n} 2^mu Gamma(1+mu) t^{-mu} r^{1-n/2} int rho^{2q-mu+n/2} J_mu(rho t) J_{n/2-1}(rho r) d rho.
OracleResult n_kernel_oracle(const EPDParameters& p, double t, double r);

// h_kernel (F4 series, x' > x + t) against the triple-Bessel integral.
OracleResult h_kernel_oracle(const EPDParameters& p, double t, double x, double xp);

VerificationReport check_weber_schafheitlin(int draws, std::uint64_t seed, double tol = 1e-6);
VerificationReport check_triple_bessel(int draws, std::uint64_t seed, double tol = 1e-5);
VerificationReport check_n_kernel_oracle(const EPDParameters& p, int points_per_branch, std::uint64_t seed,
                                         double tol = 1e-6);
VerificationReport check_h_kernel_oracle(const EPDParameters& p, int points, std::uint64_t seed,
                                         double tol = 1e-5);

// ---------------------------------------------------------------------------
// Hankel transform
// ---------------------------------------------------------------------------

// f^(lambda) = int_0^inf f(x) (lambda x)^nu J_nu(lambda x) x^{1-2nu} dx. f needs
// a finite effective support.
double hankel_transform(const solver::DataFunction& f, double nu, double lambda, const QuadratureSpec& quad = {});
// Inverse transform of a given symbol, integrated over (0, lambda_max) with a
// fixed composite Gauss-Legendre rule. The symbol is usually itself computed
// numerically, and adaptive estimates would chase its last-digit noise.
double hankel_inverse(const std::function<double(double)>& fhat, double nu, double x, double lambda_max);
VerificationReport hankel_roundtrip(const solver::DataFunction& f, double nu, const std::vector<double>& xs,
                                    double tol = 1e-6);
// |(Lambda_x f)^ + lambda^2 f^| with Lambda_x f by finite differences. The
// integration by parts leaves 2 nu f(0) lambda^{2nu}/(2^nu Gamma(nu+1)), which
// is reported in the notes; data should vanish at 0 when nu != 0.
VerificationReport check_hankel_symbol(const solver::DataFunction& f, double nu, const std::vector<double>& lambdas,
                                       double tol = 1e-6);

// ---------------------------------------------------------------------------
// Kernel PDE checks
// ---------------------------------------------------------------------------

VerificationReport check_w_residual(int n, double mu, int probes, std::uint64_t seed, double tol = 1e-5);
// Closed-form Laplacian and time operator of W against finite differences,
// plus the derivative form of W against W itself.
VerificationReport check_w_identities(int n, double mu, int probes, std::uint64_t seed, double tol = 1e-8);
VerificationReport check_k_shell_residual(double mu, double nu, int probes, std::uint64_t seed, double tol = 1e-5);

// ---------------------------------------------------------------------------
// Proposition: x^a (x^2-t^2)^b F4(-a/2, -a/2+nu, 1-mu, gamma, t^2/x^2, (x^2-t^2)^2/x^2)
// ---------------------------------------------------------------------------

double proposition_beta(double alpha, double mu, double nu);
Field proposition_field(double alpha, double beta, double gamma, double mu, double nu);
// Probes with t < x and t/x + (x^2-t^2)/x <= band.
std::vector<std::pair<double, double>> proposition_probes(int count, std::uint64_t seed, double band = 0.85);
// Residuals are relative to the largest operator term. beta_shift perturbs beta
// for negative controls.
VerificationReport check_proposition(double alpha, double gamma, double mu, double nu,
                                     const std::vector<std::pair<double, double>>& probes, double tol = 1e-4,
                                     double beta_shift = 0.0);

// ---------------------------------------------------------------------------
// Limits and examples
// ---------------------------------------------------------------------------

// (a) d'Alembert limit, (b) radial wave limit fronts and sign, (c) series substitution.
std::vector<VerificationReport> check_wave_limits();
VerificationReport check_examples(int grid = 50, double tol = 1e-8);

// Beta integrals of the proofs, hypergeometric ODE of the series terms, Legendre
// ODE of the radial kernel, Bessel asymptotics and the 2F1/F4 reductions.
std::vector<VerificationReport> check_specfun_identities();

}  // namespace epd::verify
