#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "cavity/fock.hpp"

namespace cavity {

/// Outcome of one witness evaluation. The inequality reads value <= 0 on all
/// bi-separable states; a strictly positive leading coefficient certifies
/// genuine multipartite entanglement.
struct WitnessReport {
    OrderSeries value;
    bool violated = false;
    bool inconclusive = false;  ///< leading coefficient within +-1e-12 of zero
    int leading_order = 3;
    std::map<std::string, OrderSeries> elements;
};

/// Four-partite (A, k, k', C) witness for the multi-cavity scalar scenario,
/// local dimensions 2,3,3,2. Eight terms: the (fully excited | vacuum)
/// coherence against the seven bipartition square roots.
WitnessReport witness_a1(const DensityMatrixP& rho);

/// Four-qubit (A, kappa, kappa', C) witness for the multi-cavity Dirac
/// scenario: two coherence moduli against three square-root terms (one of
/// them groups two diagonals under a single root). The grouped root makes
/// this form fail on products across the {A,kappa'}|{kappa,C} cut: see
/// witness_a2_strict for the ungrouped variant that is nonpositive on every
/// bi-separable state.
WitnessReport witness_a2(const DensityMatrixP& rho);

/// Ungrouped variant of witness_a2: the grouped root is split into its two
/// bipartition roots, restoring sqrt(a) + sqrt(b) >= sqrt(a + b). Valid on
/// all bi-separable states; its first-order value on the transformed
/// scenario state is zero.
WitnessReport witness_a2_strict(const DensityMatrixP& rho);

/// Three-mode (k, k', k'') witness for the single-cavity scalar scenario,
/// qutrit truncation; leading order h^2.
WitnessReport witness_a3(const DensityMatrixP& rho);

/// Three-mode (kappa, kappa' >= 0, kappa'' < 0) witness for the
/// single-cavity Dirac scenario.
WitnessReport witness_a4(const DensityMatrixP& rho);

// ---------------------------------------------------------------------------
// Negativity

/// Partial transpose over the marked subsystems.
MatrixXcd partial_transpose(const MatrixXcd& m, const std::vector<int>& dims,
                            const std::vector<bool>& transposed);

/// Negativity sum_i (|lambda_i| - lambda_i)/2 of the partially transposed
/// matrix at a concrete h.
double negativity(const DensityMatrixP& rho, const std::vector<int>& transposed_positions,
                  double h);

/// Coefficient of h in the negativity: eigenvalues of the first-order block
/// of the partial transpose restricted to the kernel of its order-0 part.
double negativity_first_order(const DensityMatrixP& rho,
                              const std::vector<int>& transposed_positions);

// ---------------------------------------------------------------------------
// Canonical states and fidelities

/// Dicke-type four-qubit state (A, kappa, kappa', C) or W-type three-qubit
/// state (kappa, kappa', kappa''), printed amplitudes taken from the
/// compiled map, normalized as a series.
struct CanonicalState {
    enum class Kind { dicke4, w3 };
    Kind kind;
    std::vector<Subsystem> spaces;
    std::map<std::vector<int>, OrderSeries> amplitudes;

    OrderSeries norm_series() const;
};

CanonicalState canonical_dicke4(const FermiBogoMap& map, int kappa, int kappa_p, int sign,
                                const CanonicalOrder& order = {});
CanonicalState canonical_w3(const FermiBogoMap& map, int kappa, int kappa_p, int kappa_pp,
                            const CanonicalOrder& order = {});

/// <psi| rho |psi> as a series; 1 + 0 h + c2 h^2 for the scenario outputs.
OrderSeries fidelity(const DensityMatrixP& rho, const CanonicalState& psi);

// ---------------------------------------------------------------------------
// Numeric helpers and the bi-separable sampler

/// Wraps a plain density matrix as an h-independent DensityMatrixP so the
/// witness code runs unchanged on numeric states.
DensityMatrixP density_from_numeric(const MatrixXcd& m, const std::vector<int>& dims);

/// Seeded generator of bi-separable states: pure products across random
/// bipartitions and convex mixtures of up to max_components of them. Every
/// witness must stay <= 0 on these up to roundoff.
class BiseparableSampler {
  public:
    BiseparableSampler(std::vector<int> dims, std::uint64_t seed)
        : dims_(std::move(dims)), rng_(seed) {}

    MatrixXcd sample_pure_product();
    MatrixXcd sample_mixture(int max_components = 8);

  private:
    Eigen::VectorXcd random_state(int dim);
    std::vector<int> dims_;
    std::mt19937_64 rng_;
};

}  // namespace cavity
