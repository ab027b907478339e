#pragma once

#include <optional>

#include "cavity/entanglement.hpp"

namespace cavity {

enum class Statistics { boson, fermion };

std::string to_string(Statistics s);
Statistics statistics_from_string(const std::string& s);

/// Raised when N h exceeds the perturbative-regime guard without an explicit
/// override.
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioOptions {
    bool allow_large_Nh = false;
    bool conjugate_convention = false;
    bool reverse_fermion_order = false;
};

struct ScenarioResult {
    std::string scenario;  ///< "A" or "B"
    Statistics statistics = Statistics::boson;
    std::vector<int> modes;
    double h = 0.0;
    int sign = +1;  ///< scenario A initial-state sign
    bool regime_warning = false;

    WitnessReport witness;
    /// ungrouped-root variant reported alongside the printed fermionic
    /// multi-cavity witness
    std::optional<WitnessReport> witness_strict;
    std::map<std::string, double> negativity_at_h;
    std::map<std::string, double> negativity_first_order;
    std::optional<OrderSeries> dicke_fidelity;  ///< scenario A fermionic
    std::optional<OrderSeries> w_fidelity;      ///< scenario B fermionic
    std::map<std::string, OrderSeries> f_beta;  ///< scenario B bosonic mixedness terms
    std::map<std::string, OrderSeries> mode_diagonals;

    DensityMatrixP reduced;
    OrderSeries reduced_trace;
    OrderSeries state_norm;
};

/// Three cavities sharing pairwise entanglement; the middle one moves.
/// Bosonic modes (k, k'); fermionic kappa >= 0, kappa' < 0. The initial
/// state sign picks between the +/- superpositions.
ScenarioResult run_scenario_a(const CavityConfig& cfg, const Trajectory& traj, double h,
                              Statistics stats, const std::vector<int>& modes, int sign,
                              const ScenarioOptions& opt = {});

/// Single cavity starting from the vacuum, reduced to three modes.
/// Bosonic (k, k', k'') with (k-k') and (k'-k'') odd; fermionic
/// (kappa, kappa' >= 0, kappa'' < 0) with (kappa+kappa') even.
ScenarioResult run_scenario_b(const CavityConfig& cfg, const Trajectory& traj, double h,
                              Statistics stats, const std::vector<int>& modes,
                              const ScenarioOptions& opt = {});

struct ScanResult {
    std::vector<double> u;
    std::vector<std::pair<int, int>> pairs;
    /// values[p][j] = |beta1_mn| per unit h at u[j] for pairs[p]
    std::vector<std::vector<double>> values;
    /// predicted resonance abscissae u = j/(m+n) within the grid range
    std::vector<std::vector<double>> predicted;
    int blocks = 1;
    double h = 0.0;
};

/// Sweeps the first-order pair-creation kernel over the block-time variable
/// u for a travel scenario of N accelerated segments of duration tau/2
/// separated by inertial coasts of the same duration. Grid points are
/// evaluated concurrently; results are ordered by grid index.
ScanResult resonance_scan(const CavityConfig& cfg, double h, int blocks,
                          const std::vector<std::pair<int, int>>& pairs, double u_min,
                          double u_max, int steps, const ScenarioOptions& opt = {});

/// Indices of strict local maxima of a curve, ignoring values below
/// floor_fraction of the global maximum.
std::vector<int> local_maxima(const std::vector<double>& y, double floor_fraction = 0.05);

}  // namespace cavity
