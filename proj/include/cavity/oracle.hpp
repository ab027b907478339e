#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "cavity/core.hpp"

namespace cavity {

// Independent quadrature route to the single-switch Bogoliubov coefficients:
// overlaps between the inertial (Dirichlet / bag) cavity modes and the
// uniformly accelerated (Rindler) ones on the switch slice. Everything is a
// function of h only; the cavity width cancels out of the dimensionless
// coefficients.

/// Exact alpha_mn and beta_mn matrices of the inertial -> accelerated switch
/// for the massless scalar field, from the Klein-Gordon inner product.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> oracle_scalar_switch_matrices(
    const CavityConfig& cfg, double h);

/// Exact A_mn matrix of the switch for the massless Dirac field, from the
/// Dirac inner product, over the signed labels -n_max..n_max.
Eigen::MatrixXd oracle_dirac_switch_matrix(const CavityConfig& cfg, double h);

/// Single (alpha_mn, beta_mn) pair at finite h (scalar labels m, n >= 1).
std::pair<double, double> oracle_scalar_coefficients(const CavityConfig& cfg, double h,
                                                     int m, int n);
/// Single A_mn at finite h (signed Dirac labels).
double oracle_dirac_coefficient(const CavityConfig& cfg, double h, int m, int n);

struct FirstOrderEstimate {
    double value = 0.0;         ///< extrapolated coefficient per unit h
    double achieved_tol = 0.0;  ///< change at the last extrapolation level
};

/// First-order kernels extracted as coeff(h)/h with Richardson (Neville)
/// extrapolation in h over a halving ladder.
FirstOrderEstimate oracle_scalar_beta1(const CavityConfig& cfg, int m, int n);
FirstOrderEstimate oracle_scalar_alpha1(const CavityConfig& cfg, int m, int n);
FirstOrderEstimate oracle_dirac_a1(const CavityConfig& cfg, int m, int n);

/// Largest |closed form - oracle| over m, n <= max_label (both kernels for
/// the scalar, A1 for the Dirac field). The build's self-test fails when
/// this exceeds 1e-8.
double oracle_disagreement_scalar(const CavityConfig& cfg, int max_label);
double oracle_disagreement_dirac(const CavityConfig& cfg, int max_label);

}  // namespace cavity
