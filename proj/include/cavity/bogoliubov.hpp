#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "cavity/core.hpp"

namespace cavity {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;

/// Bosonic Bogoliubov map to first order in h: diagonal phases G (exact in
/// the segment durations) plus the per-unit-h kernels alpha1, beta1.
///
/// Conventions kept throughout:
///   a_n = sum_m (alpha_mn adag~_m-part ...) with alpha = diag(G) + h alpha1,
///   beta = h beta1; G_n = exp(+i theta_n) and theta_n accumulates > 0.
/// Invariants (all testable): |G_n| = 1; alpha1_nn = 0; beta1 G symmetric;
/// G^dag alpha1 anti-Hermitian; parity selection beta1_mn = 0 for m+n even.
struct PerturbBogoMap {
    ModeBasis basis;
    VectorXcd G;
    MatrixXcd alpha1;
    MatrixXcd beta1;
    /// h the phases were compiled for; 0 marks the symbolic-h compile where
    /// accelerated segments use the limiting frequency ratio 1.
    double h_ref = 0.0;

    explicit PerturbBogoMap(const ModeBasis& b)
        : basis(b),
          G(VectorXcd::Ones(b.size())),
          alpha1(MatrixXcd::Zero(b.size(), b.size())),
          beta1(MatrixXcd::Zero(b.size(), b.size())) {}

    static PerturbBogoMap identity(const ModeBasis& b) { return PerturbBogoMap(b); }

    cplx g(int label) const { return G(basis.index_of(label)); }
    cplx a1(int m, int n) const { return alpha1(basis.index_of(m), basis.index_of(n)); }
    cplx b1(int m, int n) const { return beta1(basis.index_of(m), basis.index_of(n)); }

    /// Entrywise conjugate; composing conjugated maps equals conjugating the
    /// composition, so this realizes the global phase-convention flip.
    PerturbBogoMap conjugated() const {
        PerturbBogoMap out = *this;
        out.G = G.conjugate();
        out.alpha1 = alpha1.conjugate();
        out.beta1 = beta1.conjugate();
        return out;
    }

    double phase_defect() const;             // max | |G_n| - 1 |
    double alpha_diagonal_defect() const;    // max |alpha1_nn|
    double parity_defect() const;            // max kernel entry with m+n even
    double twisted_symmetry_defect() const;  // max | (beta1 G) - (beta1 G)^T |
    double unitarity_defect() const;         // max | G^dag alpha1 + (G^dag alpha1)^dag |
};

/// Fermionic map A = diag(G) + h A1 over the signed labels. The state
/// transforms use conj(A) as the operator matrix so that the particle ladder
/// picks up G* and the antiparticle ladder G, matching the stored phase
/// convention G_n = exp(+i theta_|n|) for both charges.
struct FermiBogoMap {
    ModeBasis basis;
    VectorXcd G;
    MatrixXcd A1;
    double h_ref = 0.0;

    explicit FermiBogoMap(const ModeBasis& b)
        : basis(b), G(VectorXcd::Ones(b.size())), A1(MatrixXcd::Zero(b.size(), b.size())) {}

    static FermiBogoMap identity(const ModeBasis& b) { return FermiBogoMap(b); }

    cplx g(int label) const { return G(basis.index_of(label)); }
    cplx a1(int m, int n) const { return A1(basis.index_of(m), basis.index_of(n)); }

    FermiBogoMap conjugated() const {
        FermiBogoMap out = *this;
        out.G = G.conjugate();
        out.A1 = A1.conjugate();
        return out;
    }

    double phase_defect() const;
    double diagonal_defect() const;   // max |A1_nn|
    double parity_defect() const;
    double unitarity_defect() const;  // max | G^dag A1 + (G^dag A1)^dag |
};

// Closed-form single-switch kernels for the massless fields, per unit h.
// These come from the companion literature; the quadrature oracle must
// confirm them before they are trusted (a dedicated self-test fails the
// build's suite otherwise).
double scalar_beta1_switch(int m, int n);   // 2 sqrt(mn) / (pi^2 (m+n)^3), m+n odd
double scalar_alpha1_switch(int m, int n);  // 2 sqrt(mn) / (pi^2 (n-m)^3), m+n odd
double dirac_a1_switch(int m, int n);       // -(m+n) / (pi^2 (m-n)^3),    m+n odd

/// Inertial -> uniformly accelerated change of basis at the switch instant
/// (zero elapsed time, G = 1), first order in h.
PerturbBogoMap switch_map_boson(const CavityConfig& cfg, double h);
FermiBogoMap switch_map_fermion(const CavityConfig& cfg, double h);

/// Free-evolution phases over one segment: theta_n = omega_n s for inertial
/// motion and theta_n = omega_n s h/(2 atanh(h/2)) for accelerated motion
/// (centre proper time s). symbolic_h replaces the accelerated frequency
/// ratio by its h -> 0 limit 1.
VectorXcd phase_vector(const ModeBasis& basis, const Segment& seg, bool symbolic_h = false);

PerturbBogoMap phase_map_boson(const ModeBasis& basis, const Segment& seg, bool symbolic_h = false);
FermiBogoMap phase_map_fermion(const ModeBasis& basis, const Segment& seg, bool symbolic_h = false);

/// First-order composition outer . inner:
///   G = G2 G1, beta1 = G2 beta1_1 + beta1_2 G1*, alpha1 = G2 alpha1_1 + alpha1_2 G1.
PerturbBogoMap compose(const PerturbBogoMap& outer, const PerturbBogoMap& inner);
/// Fermionic: G = G2 G1, A1 = G2 A1_1 + A1_2 G1.
FermiBogoMap compose(const FermiBogoMap& outer, const FermiBogoMap& inner);

/// Exact inverse map: (alpha, beta) -> (alpha^dag, -beta^T), reduced to first
/// order. Used for the accelerated -> inertial switch.
PerturbBogoMap inverse(const PerturbBogoMap& m);
FermiBogoMap inverse(const FermiBogoMap& m);

struct CompileOptions {
    bool symbolic_h = false;            ///< phases at the h -> 0 frequencies
    bool conjugate_convention = false;  ///< global phase-convention flip
};

/// Left-fold of switch and phase maps over the trajectory; h is the nominal
/// expansion parameter (per-segment h_i scale the kernels by h_i/h).
PerturbBogoMap compile_trajectory_boson(const CavityConfig& cfg, const Trajectory& traj,
                                        double h, const CompileOptions& opt = {});
FermiBogoMap compile_trajectory_fermion(const CavityConfig& cfg, const Trajectory& traj,
                                        double h, const CompileOptions& opt = {});

struct ResonanceTime {
    double tau;
    int n;
    bool mode_independent;  ///< tau = 2 p delta, enhancing every opposite-parity pair
};

/// tau = 2 n delta / (k + k') for n in n_list (non-positive n are skipped).
std::vector<ResonanceTime> resonance_times(int k, int kp, double delta,
                                           const std::vector<int>& n_list);

// ---------------------------------------------------------------------------
// Exact (non-perturbative) numeric maps on the truncated ladder, built from
// the quadrature switch matrices. These feed the Bogoliubov-identity and
// first-order-reduction checks.

struct NumericBosonMap {
    MatrixXcd alpha;
    MatrixXcd beta;
};
struct NumericFermiMap {
    MatrixXcd A;
};

NumericBosonMap numeric_switch_boson(const CavityConfig& cfg, double h);
NumericFermiMap numeric_switch_fermion(const CavityConfig& cfg, double h);

NumericBosonMap numeric_compose(const NumericBosonMap& outer, const NumericBosonMap& inner);
NumericFermiMap numeric_compose(const NumericFermiMap& outer, const NumericFermiMap& inner);

NumericBosonMap numeric_compile_boson(const CavityConfig& cfg, const Trajectory& traj);
NumericFermiMap numeric_compile_fermion(const CavityConfig& cfg, const Trajectory& traj);

/// max-norm of alpha alpha^dag - beta beta^dag - 1.
double bogoliubov_identity_residual(const NumericBosonMap& m);
/// max-norm of A A^dag - 1.
double unitarity_residual(const NumericFermiMap& m);

}  // namespace cavity
