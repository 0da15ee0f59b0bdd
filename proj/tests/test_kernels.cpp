#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "epd/errors.hpp"
#include "epd/kernels.hpp"
#include "epd/specfun.hpp"

using namespace epd;
using namespace epd::kernels;
namespace sf = epd::specfun;

namespace {

constexpr double kPi = std::numbers::pi;

EPDParameters params(double mu, double nu = 0.0, int n = 1, double q = 0.0) {
    EPDParameters p;
    p.mu = mu;
    p.nu = nu;
    p.n = n;
    p.q = q;
    return p;
}

// Hankel-transform form of the t > x radial kernel:
// 2 Gamma(1+m) t^{2m-2-2nu} (x x')^{2nu} F4(1+nu, 1-m+nu; nu+1, nu+1; x^2/t^2, x'^2/t^2)
//   / (Gamma(nu+1) Gamma(m-nu)).
double inner_kernel_via_f4(double m, double nu, double t, double x, double xp) {
    return 2.0 * sf::gamma_fn(1.0 + m) * std::pow(t, 2.0 * m - 2.0 - 2.0 * nu) * std::pow(x * xp, 2.0 * nu) *
           sf::rgamma(nu + 1.0) * sf::rgamma(m - nu) *
           sf::appell_f4(1.0 + nu, 1.0 - m + nu, nu + 1.0, nu + 1.0, x * x / (t * t), xp * xp / (t * t)).value;
}

double f4_brute(double a, double b, double c, double d, double x, double y, int terms) {
    double sum = 0.0;
    for (int m = 0; m < terms; ++m) {
        for (int n = 0; n < terms; ++n) {
            const double lt = std::lgamma(a + m + n) - std::lgamma(a) + std::lgamma(b + m + n) - std::lgamma(b) -
                              std::lgamma(c + m) + std::lgamma(c) - std::lgamma(d + n) + std::lgamma(d) -
                              std::lgamma(m + 1.0) - std::lgamma(n + 1.0) + m * std::log(x) + n * std::log(y);
            sum += std::exp(lt);
        }
    }
    return sum;
}

}  // namespace

TEST(Regions, SpecExamples) {
    const KernelGeometry s = classify_region(0.5, 1.0, 1.0);
    EXPECT_EQ(s.region, Region::Shell);
    EXPECT_NEAR(s.z, 0.875, 1e-15);
    EXPECT_NEAR(s.X, 0.0625, 1e-15);
    EXPECT_EQ(classify_region(2.0, 0.5, 0.3).region, Region::InnerCone);
    EXPECT_EQ(classify_region(0.5, 1.0, 2.0).region, Region::OutsideCone);
    EXPECT_THROW(classify_region(0.0, 1.0, 1.0), DomainError);
}

TEST(Regions, PartitionMatchesZ) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    for (int i = 0; i < 2000; ++i) {
        const double t = u(rng), x = u(rng), xp = u(rng);
        const KernelGeometry g = classify_region(t, x, xp);
        const double z = (x * x + xp * xp - t * t) / (2.0 * x * xp);
        if (std::abs(std::abs(z) - 1.0) < 1e-12) continue;
        const Region expect = z > 1.0 ? Region::OutsideCone : (z < -1.0 ? Region::InnerCone : Region::Shell);
        EXPECT_EQ(g.region, expect);
        EXPECT_NEAR(g.z, z, 1e-12 * std::max(1.0, std::abs(z)));
        EXPECT_NEAR(g.one_minus_z, 1.0 - z, 1e-12 * std::max(1.0, std::abs(z)));
    }
}

TEST(Regions, BoundaryAdjacentFlag) {
    EXPECT_TRUE(classify_region(0.5, 1.0, 1.5).boundary_adjacent);
    EXPECT_FALSE(classify_region(0.5, 1.0, 1.4).boundary_adjacent);
    EXPECT_EQ(classify_region_classical(1.0, 0.5).region, Region::InsideCone);
    EXPECT_EQ(classify_region_classical(1.0, 1.5).region, Region::OutsideCone);
}

TEST(Constants, KnownValues) {
    EXPECT_NEAR(c_n_mu(1, 0.25), sf::gamma_fn(1.25) / (std::sqrt(kPi) * sf::gamma_fn(0.75)), 1e-15);
    EXPECT_NEAR(c_n_mu(1, 0.25), 0.4173, 1e-4);
    for (double mu : {0.1, 0.3, 0.45}) EXPECT_NEAR(c_n_mu(2, mu), mu / kPi, 1e-14);
    EXPECT_NEAR(beta_n(2), 1.0 / (2.0 * kPi), 1e-16);
    EXPECT_NEAR(alpha_n_mu(1, 0.3), sf::gamma_fn(1.3) / (std::sqrt(kPi) * sf::gamma_fn(0.8)), 1e-15);
    const std::complex<double> k = k_nu_q(0.2, -0.45);
    EXPECT_NEAR(std::arg(k), -0.45 * kPi, 1e-14);
    EXPECT_NEAR(std::abs(k), std::pow(2.0, 0.1) * sf::gamma_fn(0.75) / (sf::gamma_fn(1.2) * sf::gamma_fn(0.45)),
                1e-14);
    EXPECT_THROW(c_n_mu(4, 0.2), DomainError);
}

TEST(WKernel, ValuesAndSupport) {
    const std::vector<double> x{0.3}, xp{0.3};
    const KernelValue v = w_kernel(params(0.25), 1.0, x, xp);
    EXPECT_NEAR(v.profile, c_n_mu(1, 0.25), 1e-15);
    EXPECT_EQ(v.region, Region::InsideCone);
    const std::vector<double> far{2.0};
    const KernelValue o = w_kernel(params(0.25), 1.0, x, far);
    EXPECT_EQ(o.profile, 0.0);
    EXPECT_EQ(o.region, Region::OutsideCone);
}

TEST(WKernel, DerivativeFormEqualsKernel) {
    for (int n = 1; n <= 3; ++n) {
        for (double mu : {0.1, 0.3, 0.45}) {
            for (auto [t, r] : {std::pair{1.0, 0.2}, {2.0, 1.7}, {0.7, 0.05}}) {
                const EPDParameters p = params(mu, 0.0, n);
                const double w = w_kernel_r(p, t, r).profile;
                EXPECT_NEAR(w_derivative_form(p, t, r) / w, 1.0, 1e-13) << n << " " << mu;
            }
        }
    }
}

TEST(WKernel, OperatorsBalance) {
    // W solves the equation, so the closed-form time operator equals the Laplacian.
    for (int n = 1; n <= 3; ++n) {
        const EPDParameters p = params(0.3, 0.0, n);
        for (auto [t, r] : {std::pair{1.0, 0.2}, {2.0, 1.7}}) {
            const double lap = w_laplacian(p, t, r);
            EXPECT_NEAR(w_time_operator(p, t, r), lap, 1e-12 * std::abs(lap));
        }
    }
}

TEST(NKernel, SmallArgumentLimits) {
    const EPDParameters p = params(0.3, 0.0, 1, -0.45);
    const double r = 0.8;
    const double lim = n_kernel_cone_limits(p, r).outside /
                       sf::hyp2f1(p.q + 0.5, p.q + 1.0, p.mu + 1.0, 1.0);  // prefactor r^{-2q-n}
    EXPECT_NEAR(n_kernel_r(p, 1e-7, r).profile / lim, 1.0, 1e-12);
    const double t = 1.3;
    const double in = n_kernel_cone_limits(p, t).inside / sf::hyp2f1(p.q + 0.5, p.q + 0.5 - p.mu, 0.5, 1.0);
    EXPECT_NEAR(n_kernel_r(p, t, 1e-7).profile / in, 1.0, 1e-12);
}

TEST(NKernel, JointHomogeneity) {
    for (int n = 1; n <= 3; ++n) {
        const double q = -0.25 * n - 0.2;  // inside (-n/2, -mu/2 - n/4) for mu = 0.3
        const EPDParameters p = params(0.3, 0.0, n, q);
        for (auto [t, r] : {std::pair{0.4, 1.0}, {1.5, 0.6}}) {
            const double base = n_kernel_r(p, t, r).profile;
            for (double lam : {0.5, 2.0}) {
                const double scaled = n_kernel_r(p, lam * t, lam * r).profile;
                EXPECT_NEAR(std::log(scaled / base) / std::log(lam), -2.0 * q - n, 1e-12);
            }
        }
    }
}

TEST(NKernel, PhaseAndLightCone) {
    const EPDParameters p = params(0.3, 0.0, 1, -0.45);
    EXPECT_NEAR(std::arg(n_kernel_r(p, 0.5, 1.0).phase), -0.45 * kPi, 1e-15);
    EXPECT_THROW(n_kernel_r(p, 1.0, 1.0), LightConeError);
    const ConeLimits c = n_kernel_cone_limits(p, 1.0);
    EXPECT_TRUE(std::isfinite(c.outside));
    EXPECT_TRUE(std::isfinite(c.inside));
    EXPECT_NEAR(c.ratio, c.inside / c.outside, 1e-15);
    // One-sided limits are approached from the matching side.
    EXPECT_NEAR(n_kernel_r(p, 1.0 - 1e-6, 1.0).profile / c.outside, 1.0, 1e-3);
    EXPECT_NEAR(n_kernel_r(p, 1.0 + 1e-6, 1.0).profile / c.inside, 1.0, 1e-3);
}

TEST(KKernel, OutsideConeIsZero) {
    const KernelValue v = k_kernel(params(0.3, 0.7), 0.5, 1.0, 2.0);
    EXPECT_EQ(v.profile, 0.0);
    EXPECT_EQ(v.region, Region::OutsideCone);
}

TEST(KKernel, ShellPowerLawAtOuterFront) {
    const EPDParameters p = params(0.3, 0.7);
    const double t = 0.5, x = 1.0;
    std::vector<double> lz, lk;
    for (int k = 10; k <= 20; k += 2) {
        const double omz = std::ldexp(1.0, -k);
        // x'^2 - 2 x z x' + x^2 - t^2 = 0 for the larger root
        const double z = 1.0 - omz;
        const double xp = x * z + std::sqrt(x * x * z * z - x * x + t * t);
        lz.push_back(std::log(omz));
        lk.push_back(std::log(k_kernel(p, t, x, xp).profile));
    }
    for (std::size_t i = 1; i < lz.size(); ++i) {
        const double slope = (lk[i] - lk[i - 1]) / (lz[i] - lz[i - 1]);
        EXPECT_NEAR(slope, p.mu - 0.5, 2e-3);
    }
}

TEST(KKernel, ShellTendsToHalfOrderKernel) {
    // At mu = 1/2, nu = -alpha the Shell branch is
    // (1/2) (x x')^{-alpha-1/2} 2F1(1/2 - alpha, 1/2 + alpha; 1; X).
    const double alpha = 0.25, t = 0.6, x = 1.0, xp = 1.2;
    const double X = 0.5 * (1.0 - (x * x + xp * xp - t * t) / (2.0 * x * xp));
    const double half = 0.5 * std::pow(x * xp, -alpha - 0.5) * sf::hyp2f1(0.5 - alpha, 0.5 + alpha, 1.0, X);
    const double k1 = k_kernel(params(0.499, -alpha), t, x, xp).profile;
    const double k2 = k_kernel(params(0.4999, -alpha), t, x, xp).profile;
    // Linear in (1/2 - mu); the extrapolated limit is the half-order kernel.
    EXPECT_LT(std::abs(k2 - half), std::abs(k1 - half));
    EXPECT_NEAR((10.0 * k2 - k1) / 9.0, half, 1e-6);
}

TEST(KKernel, InnerConeIsTheHankelKernel) {
    // The |z| reading of z^{mu-nu-1} reproduces the Bessel-integral kernel.
    for (auto [m, nu] : {std::pair{0.3, 0.7}, {0.3, 0.0}, {0.3, 2.0}, {-0.3, 0.7}, {0.3, -0.25}, {-0.3, -0.25}}) {
        for (double xp : {0.2, 0.5, 0.8}) {
            const double t = 1.5, x = 0.5;
            const KernelValue v = k_kernel(params(m, nu), t, x, xp);
            ASSERT_EQ(v.region, Region::InnerCone);
            const double ref = inner_kernel_via_f4(m, nu, t, x, xp);
            EXPECT_NEAR(v.profile, ref, 1e-9 * std::max(1.0, std::abs(ref))) << m << " " << nu << " " << xp;
        }
    }
}

TEST(KKernel, LightConeAndBranchJoin) {
    const EPDParameters p = params(0.3, 0.7);
    EXPECT_THROW(k_kernel(p, 0.5, 1.0, 1.5), LightConeError);
    const BranchJoin j = k_kernel_branch_join(p, 1.5, 0.5);
    EXPECT_TRUE(std::isfinite(j.shell));
    EXPECT_TRUE(std::isfinite(j.inner));
    EXPECT_THROW(k_kernel_branch_join(p, 0.5, 1.0), DomainError);
    // The leading coefficients match the kernel on each side of z = -1: the
    // remainder is the regular part, so the relative gap shrinks like e^{1/2-mu}.
    const double t = 1.5, x = 0.5;
    for (double side : {-1.0, 1.0}) {
        std::vector<double> gaps;
        for (double e : {1e-4, 1e-6, 1e-8}) {
            const double z = -1.0 + side * e;
            const double xp = x * z + std::sqrt(x * x * z * z - x * x + t * t);
            const double k = k_kernel(p, t, x, xp).profile / std::pow(2.0 * e, p.mu - 0.5);
            gaps.push_back(std::abs(k / (side > 0 ? j.shell : j.inner) - 1.0));
        }
        for (std::size_t i = 1; i < gaps.size(); ++i)
            EXPECT_NEAR(std::log(gaps[i - 1] / gaps[i]) / std::log(100.0), 0.5 - p.mu, 0.02) << side;
    }
}

TEST(HKernel, SeriesMatchesDoubleLoop) {
    const EPDParameters p = params(0.3, 0.2, 1, -0.45);
    const double t = 0.1, x = 0.1, xp = 1.0, a = p.q + 1.0;
    const double ref = std::pow(x, 2.0 * p.nu) * std::pow(xp, -2.0 * a) *
                       f4_brute(a, a + p.nu, 1.0 + p.mu, 1.0 + p.nu, t * t / (xp * xp), x * x / (xp * xp), 60);
    EXPECT_NEAR(h_kernel(p, t, x, xp).profile, ref, 1e-10 * ref);
}

TEST(HKernel, SeriesAndContinuationAgreeNearTheFront) {
    const EPDParameters p = params(0.3, 0.2, 1, -0.45);
    const double t = 0.3, x = 0.4, xp = 0.7 / 0.9;
    const double s = h_kernel(p, t, x, xp, HMethod::Series).profile;
    const double i = h_kernel(p, t, x, xp, HMethod::Integral).profile;
    EXPECT_NEAR(s, i, 1e-5 * std::abs(s));
    EXPECT_THROW(h_kernel(p, 0.5, 0.4, 0.8, HMethod::Series), DomainError);
}

TEST(HKernel, LeadingBehaviourInX) {
    const EPDParameters p = params(0.3, 0.2, 1, -0.45);
    const double h1 = h_kernel(p, 0.1, 1e-3, 1.0).profile;
    const double h2 = h_kernel(p, 0.1, 1e-4, 1.0).profile;
    EXPECT_NEAR(std::log(h1 / h2) / std::log(10.0), 2.0 * p.nu, 1e-6);
    EXPECT_NEAR(h_kernel(p, 1e-6, 1e-6, 1.0).profile / std::pow(1e-6, 2.0 * p.nu), 1.0, 1e-9);
}

TEST(Kernels, FiniteAndSignStableOverRandomDraws) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> mu_d(0.05, 0.45), nu_d(-0.4, 2.0), u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double mu = mu_d(rng), nu = nu_d(rng);
        // Shell: K_mu keeps one sign across the shell
        const double t = 0.3 + u(rng), x = 1.5 + u(rng);
        const double s1 = k_kernel(params(mu, nu), t, x, x - t + 0.1 * t).profile;
        const double s2 = k_kernel(params(mu, nu), t, x, x + t - 0.1 * t).profile;
        EXPECT_TRUE(std::isfinite(s1) && std::isfinite(s2));
        EXPECT_GT(s1 * s2, 0.0) << mu << " " << nu;
        for (int n = 1; n <= 3; ++n) {
            const double w1 = w_kernel_r(params(mu, 0, n), 1.0, 0.1).profile;
            const double w2 = w_kernel_r(params(mu, 0, n), 1.0, 0.9).profile;
            EXPECT_TRUE(std::isfinite(w1) && std::isfinite(w2));
            EXPECT_GT(w1 * w2, 0.0);
        }
    }
}

TEST(Validation, TheoremRanges) {
    EXPECT_NO_THROW(require_classical(params(0.3, 0.0, 2)));
    EXPECT_THROW(require_classical(params(0.5, 0.0, 2)), DomainError);
    EXPECT_THROW(require_classical(params(0.3, 0.0, 4)), DomainError);
    EXPECT_NO_THROW(require_modified_classical(params(0.3, 0.0, 1, -0.45)));
    EXPECT_THROW(require_modified_classical(params(0.3, 0.0, 1, -0.3)), DomainError);
    EXPECT_NO_THROW(require_radial(params(0.3, -0.4)));
    EXPECT_THROW(require_radial(params(0.3, -0.5)), DomainError);
    EXPECT_NO_THROW(require_modified_radial(params(0.3, 0.2, 1, -0.45)));
    EXPECT_THROW(require_modified_radial(params(0.3, 0.2, 1, -0.5)), DomainError);
}
