#include "cavity/oracle.hpp"

#include <cmath>
#include <functional>

#include "cavity/bogoliubov.hpp"

namespace cavity {

namespace {

// 16-point Gauss-Legendre rule on [0, 1], composited over panels. The
// integrands are smooth, so the composite rule converges to machine
// precision long before the panel counts used below.
struct GaussRule {
    std::vector<double> x, w;
    GaussRule() {
        const int n = 16;
        x.resize(n);
        w.resize(n);
        for (int i = 0; i < n / 2; ++i) {
            double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
                }
                double dp = n * (t * p0 - p1) / (t * t - 1.0);
                double step = p0 / dp;
                t -= step;
                if (std::abs(step) < 1e-16) break;
            }
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            double dp = n * (t * p0 - p1) / (t * t - 1.0);
            double weight = 2.0 / ((1.0 - t * t) * dp * dp);
            // map [-1,1] -> [0,1]
            x[i] = 0.5 * (1.0 - t);
            x[n - 1 - i] = 0.5 * (1.0 + t);
            w[i] = w[n - 1 - i] = 0.5 * weight;
        }
    }
};

const GaussRule& rule() {
    static const GaussRule r;
    return r;
}

double integrate(const std::function<double(double)>& f, int panels) {
    const auto& r = rule();
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        double a = double(p) / panels, width = 1.0 / panels;
        for (size_t i = 0; i < r.x.size(); ++i) total += r.w[i] * width * f(a + width * r.x[i]);
    }
    return total;
}

/// Integrates at two refinement levels and reports the achieved tolerance if
/// the result has not converged.
double integrate_checked(const std::function<double(double)>& f, int panels) {
    double coarse = integrate(f, panels);
    double fine = integrate(f, 2 * panels);
    double achieved = std::abs(fine - coarse);
    if (achieved > 1e-11 * std::max(1.0, std::abs(fine)))
        throw std::runtime_error("oracle quadrature did not converge; achieved tolerance " +
                                 std::to_string(achieved));
    return fine;
}

/// Geometry of the switch slice in units delta = 1: the accelerated cavity
/// occupies chi in [1/h - 1/2, 1/h + 1/2]; its conformal length is
/// L = ln(b/a) = 2 atanh(h/2).
struct SwitchGeometry {
    double h, L, a;
    explicit SwitchGeometry(double hh) : h(hh), L(2.0 * std::atanh(hh / 2.0)), a(1.0 / hh - 0.5) {}
    /// Rindler mode coordinate r(sigma) = ln(x/a)/L in [0, 1].
    double r(double sigma) const { return std::log1p(sigma * h / (1.0 - h / 2.0)) / L; }
    double x(double sigma) const { return a + sigma; }
};

int panels_for(int m, int n) { return std::max(8, 2 * (std::abs(m) + std::abs(n))); }

double scalar_alpha_entry(const SwitchGeometry& g, int m, int n, int panels) {
    return integrate(
        [&](double s) {
            double gm = std::sin(m * M_PI * g.r(s)) / std::sqrt(m * M_PI);
            double fn = std::sin(n * M_PI * s) / std::sqrt(n * M_PI);
            return gm * fn * (n * M_PI + m * M_PI / (g.L * g.x(s)));
        },
        panels);
}

double scalar_beta_entry(const SwitchGeometry& g, int m, int n, int panels) {
    return integrate(
        [&](double s) {
            double gm = std::sin(m * M_PI * g.r(s)) / std::sqrt(m * M_PI);
            double fn = std::sin(n * M_PI * s) / std::sqrt(n * M_PI);
            return gm * fn * (n * M_PI - m * M_PI / (g.L * g.x(s)));
        },
        panels);
}

double dirac_entry(const SwitchGeometry& g, int m, int n, int panels) {
    return integrate(
        [&](double s) {
            return std::cos(m * M_PI * g.r(s) - n * M_PI * s) /
                   std::sqrt(g.L * g.x(s));
        },
        panels);
}

void check_h(double h) {
    if (!(h > 0.0 && h < 2.0)) throw std::domain_error("oracle: h must lie in (0, 2)");
}

/// Neville extrapolation to h = 0 over a halving ladder of k(h) = coeff(h)/h.
FirstOrderEstimate extrapolate_first_order(const std::function<double(double)>& coeff) {
    const std::vector<double> hs = {0.016, 0.008, 0.004, 0.002, 0.001};
    std::vector<double> t(hs.size());
    for (size_t i = 0; i < hs.size(); ++i) t[i] = coeff(hs[i]) / hs[i];
    double prev = t[0];
    for (size_t level = 1; level < hs.size(); ++level) {
        prev = t[0];
        for (size_t i = 0; i + level < hs.size(); ++i)
            t[i] = t[i + 1] + (t[i + 1] - t[i]) * hs[i + level] / (hs[i] - hs[i + level]);
    }
    return {t[0], std::abs(t[0] - prev)};
}

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> oracle_scalar_switch_matrices(
    const CavityConfig& cfg, double h) {
    cfg.validate();
    check_h(h);
    SwitchGeometry g(h);
    int n_max = cfg.n_max;
    Eigen::MatrixXd alpha(n_max, n_max), beta(n_max, n_max);
    int panels = panels_for(n_max, n_max);
    for (int m = 1; m <= n_max; ++m)
        for (int n = 1; n <= n_max; ++n) {
            alpha(m - 1, n - 1) = scalar_alpha_entry(g, m, n, panels);
            beta(m - 1, n - 1) = scalar_beta_entry(g, m, n, panels);
        }
    return {alpha, beta};
}

Eigen::MatrixXd oracle_dirac_switch_matrix(const CavityConfig& cfg, double h) {
    cfg.validate();
    check_h(h);
    SwitchGeometry g(h);
    int n_max = cfg.n_max;
    int sz = 2 * n_max + 1;
    Eigen::MatrixXd A(sz, sz);
    int panels = panels_for(n_max, n_max);
    for (int m = -n_max; m <= n_max; ++m)
        for (int n = -n_max; n <= n_max; ++n)
            A(m + n_max, n + n_max) = dirac_entry(g, m, n, panels);
    return A;
}

std::pair<double, double> oracle_scalar_coefficients(const CavityConfig& cfg, double h,
                                                     int m, int n) {
    cfg.validate();
    check_h(h);
    if (m < 1 || n < 1) throw std::invalid_argument("oracle: scalar labels must be >= 1");
    SwitchGeometry g(h);
    int panels = panels_for(m, n);
    double alpha = integrate_checked(
        [&](double s) {
            double gm = std::sin(m * M_PI * g.r(s)) / std::sqrt(m * M_PI);
            double fn = std::sin(n * M_PI * s) / std::sqrt(n * M_PI);
            return gm * fn * (n * M_PI + m * M_PI / (g.L * g.x(s)));
        },
        panels);
    double beta = integrate_checked(
        [&](double s) {
            double gm = std::sin(m * M_PI * g.r(s)) / std::sqrt(m * M_PI);
            double fn = std::sin(n * M_PI * s) / std::sqrt(n * M_PI);
            return gm * fn * (n * M_PI - m * M_PI / (g.L * g.x(s)));
        },
        panels);
    return {alpha, beta};
}

double oracle_dirac_coefficient(const CavityConfig& cfg, double h, int m, int n) {
    cfg.validate();
    check_h(h);
    SwitchGeometry g(h);
    return integrate_checked(
        [&](double s) {
            return std::cos(m * M_PI * g.r(s) - n * M_PI * s) / std::sqrt(g.L * g.x(s));
        },
        panels_for(m, n));
}

FirstOrderEstimate oracle_scalar_beta1(const CavityConfig& cfg, int m, int n) {
    return extrapolate_first_order(
        [&](double h) { return oracle_scalar_coefficients(cfg, h, m, n).second; });
}

FirstOrderEstimate oracle_scalar_alpha1(const CavityConfig& cfg, int m, int n) {
    if (m == n)
        throw std::invalid_argument("oracle_scalar_alpha1: diagonal is a pure phase, not a kernel");
    return extrapolate_first_order(
        [&](double h) { return oracle_scalar_coefficients(cfg, h, m, n).first; });
}

FirstOrderEstimate oracle_dirac_a1(const CavityConfig& cfg, int m, int n) {
    if (m == n)
        throw std::invalid_argument("oracle_dirac_a1: diagonal is a pure phase, not a kernel");
    return extrapolate_first_order(
        [&](double h) { return oracle_dirac_coefficient(cfg, h, m, n); });
}

double oracle_disagreement_scalar(const CavityConfig& cfg, int max_label) {
    double worst = 0.0;
    for (int m = 1; m <= max_label; ++m)
        for (int n = 1; n <= max_label; ++n) {
            worst = std::max(worst,
                             std::abs(oracle_scalar_beta1(cfg, m, n).value -
                                      scalar_beta1_switch(m, n)));
            if (m != n)
                worst = std::max(worst,
                                 std::abs(oracle_scalar_alpha1(cfg, m, n).value -
                                          scalar_alpha1_switch(m, n)));
        }
    return worst;
}

double oracle_disagreement_dirac(const CavityConfig& cfg, int max_label) {
    double worst = 0.0;
    for (int m = -max_label; m <= max_label; ++m)
        for (int n = -max_label; n <= max_label; ++n) {
            if (m == n) continue;
            worst = std::max(worst,
                             std::abs(oracle_dirac_a1(cfg, m, n).value - dirac_a1_switch(m, n)));
        }
    return worst;
}

}  // namespace cavity
