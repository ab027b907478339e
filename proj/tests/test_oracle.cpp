#include <doctest.h>

#include "cavity/bogoliubov.hpp"
#include "cavity/oracle.hpp"

using namespace cavity;

namespace {
CavityConfig scalar_cfg(int n_max = 8) { return {1.0, FieldKind::scalar_massless, n_max}; }
CavityConfig dirac_cfg(int n_max = 8) { return {1.0, FieldKind::dirac_massless, n_max}; }
}  // namespace

TEST_CASE("parity-forbidden first-order kernels vanish") {
    // the finite-h overlap keeps an O(h^2) tail on same-parity pairs; the
    // first-order kernel is what vanishes identically
    auto b13 = oracle_scalar_beta1(scalar_cfg(), 1, 3);
    CHECK(std::abs(b13.value) < 1e-8);
    auto b24 = oracle_scalar_beta1(scalar_cfg(), 2, 4);
    CHECK(std::abs(b24.value) < 1e-8);
    CHECK(std::abs(oracle_dirac_a1(dirac_cfg(), 1, 3).value) < 1e-8);
    CHECK(std::abs(oracle_dirac_a1(dirac_cfg(), 0, -2).value) < 1e-8);

    // and the finite-h value is consistent with a pure h^2 tail
    auto at = [&](double h) { return oracle_scalar_coefficients(scalar_cfg(), h, 1, 3).second; };
    CHECK(std::abs(at(0.01)) < 1e-5);
    CHECK(at(0.02) / at(0.01) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("beta(h)/h converges with O(h) differences") {
    auto k = [&](double h) { return oracle_scalar_coefficients(scalar_cfg(), h, 1, 2).second / h; };
    double d1 = std::abs(k(0.02) - k(0.01));
    double d2 = std::abs(k(0.01) - k(0.005));
    CHECK(d1 < 1e-4);
    CHECK(d2 < d1);
    CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.5));
}

TEST_CASE("closed-form kernels match the quadrature oracle") {
    // the mandatory cross-check behind the closed forms
    CHECK(oracle_disagreement_scalar(scalar_cfg(), 4) < 1e-8);
    CHECK(oracle_disagreement_dirac(dirac_cfg(), 4) < 1e-8);

    auto b12 = oracle_scalar_beta1(scalar_cfg(), 1, 2);
    CHECK(b12.value == doctest::Approx(2.0 * std::sqrt(2.0) / (27.0 * M_PI * M_PI)).epsilon(1e-9));
    CHECK(b12.value == doctest::Approx(1.0614e-2).epsilon(1e-4));
    CHECK(b12.achieved_tol < 1e-9);

    auto a12 = oracle_scalar_alpha1(scalar_cfg(), 1, 2);
    CHECK(a12.value == doctest::Approx(scalar_alpha1_switch(1, 2)).epsilon(1e-8));

    auto d0m1 = oracle_dirac_a1(dirac_cfg(), 0, -1);
    CHECK(d0m1.value == doctest::Approx(dirac_a1_switch(0, -1)).epsilon(1e-8));
    CHECK(dirac_a1_switch(0, -1) == doctest::Approx(1.0 / (M_PI * M_PI)).epsilon(1e-14));
}

TEST_CASE("switch matrices reduce to the identity as h -> 0") {
    auto [alpha, beta] = oracle_scalar_switch_matrices(scalar_cfg(6), 1e-5);
    CHECK((alpha - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-4);
    CHECK(beta.cwiseAbs().maxCoeff() < 1e-4);

    Eigen::MatrixXd A = oracle_dirac_switch_matrix(dirac_cfg(4), 1e-5);
    CHECK((A - Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("oracle matrices satisfy the Bogoliubov identities up to truncation") {
    // the max-norm residual is dominated by the truncation edge, where the
    // nearest-neighbour kernel grows like 2 n_max / pi^2; still O(h^2)
    CavityConfig cfg = scalar_cfg(12);
    NumericBosonMap m = numeric_switch_boson(cfg, 0.02);
    CHECK(bogoliubov_identity_residual(m) < 20.0 * 0.02 * 0.02);

    NumericFermiMap f = numeric_switch_fermion(dirac_cfg(12), 0.02);
    CHECK(unitarity_residual(f) < 20.0 * 0.02 * 0.02);
}
