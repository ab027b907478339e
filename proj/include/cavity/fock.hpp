#pragma once

#include <map>
#include <string>
#include <vector>

#include "cavity/bogoliubov.hpp"
#include "cavity/core.hpp"
#include "cavity/order_series.hpp"

namespace cavity {

/// One mode of the extended register: the two external qubits A and C plus
/// the cavity ladder.
struct Mode {
    enum class Kind : int { external_a = 0, cavity = 1, external_c = 2 };
    Kind kind = Kind::cavity;
    int index = 0;  ///< cavity label (scalar >= 1, Dirac signed); 0 for externals

    static Mode A() { return {Kind::external_a, 0}; }
    static Mode C() { return {Kind::external_c, 0}; }
    static Mode cav(int n) { return {Kind::cavity, n}; }

    bool operator==(const Mode&) const = default;
    /// Structural key for container ordering (convention independent).
    std::pair<int, long> storage_key() const {
        return {int(kind), long(index)};
    }
    /// Mode charge: particles and C count +1, antiparticles and A count -1,
    /// scalar cavity modes 0.
    int charge(FieldKind field) const {
        if (kind == Kind::external_a) return -1;
        if (kind == Kind::external_c) return +1;
        if (field == FieldKind::scalar_massless) return 0;
        return index >= 0 ? +1 : -1;
    }
};

/// Canonical operator-string order: A, then particle modes ascending, then
/// antiparticle modes by |n| ascending, then C. The reversed convention flips
/// the whole order; every observable must be invariant under the flip.
struct CanonicalOrder {
    bool reversed = false;

    std::pair<int, long> rank(const Mode& m) const {
        std::pair<int, long> r;
        switch (m.kind) {
            case Mode::Kind::external_a: r = {0, 0}; break;
            case Mode::Kind::cavity:
                r = m.index >= 0 ? std::pair<int, long>{1, m.index}
                                 : std::pair<int, long>{2, -long(m.index)};
                break;
            case Mode::Kind::external_c: r = {3, 0}; break;
        }
        return r;
    }
    bool less(const Mode& a, const Mode& b) const {
        return reversed ? rank(b) < rank(a) : rank(a) < rank(b);
    }
};

/// Occupation label: modes with occupation >= 1, sorted by the state's
/// canonical order. For fermions every occupation is 1 and the sequence is
/// the creation-operator string (leftmost first, innermost last).
struct Label {
    std::vector<std::pair<Mode, int>> occ;

    bool operator<(const Label& o) const {
        auto key = [](const std::pair<Mode, int>& e) {
            return std::tuple(e.first.storage_key(), e.second);
        };
        return std::lexicographical_compare(
            occ.begin(), occ.end(), o.occ.begin(), o.occ.end(),
            [&](const auto& x, const auto& y) { return key(x) < key(y); });
    }
    bool operator==(const Label& o) const { return occ == o.occ; }

    int occupation(const Mode& m) const {
        for (const auto& [mode, n] : occ)
            if (mode == m) return n;
        return 0;
    }
    int total_particles() const {
        int t = 0;
        for (const auto& [mode, n] : occ) t += n;
        return t;
    }
    int total_charge(FieldKind field) const {
        int c = 0;
        for (const auto& [mode, n] : occ) c += n * mode.charge(field);
        return c;
    }
};

/// Sorts a fermionic creation string into canonical order; returns the
/// permutation sign, or 0 if a mode repeats (Pauli exclusion).
int canonicalize_fermion_string(std::vector<Mode>& string, const CanonicalOrder& order);

/// Perturbative pure state: occupation label -> OrderSeries amplitude.
struct FockStateP {
    FieldKind field = FieldKind::scalar_massless;
    bool fermionic = false;
    CanonicalOrder order{};
    std::map<Label, OrderSeries> terms;

    void add(const Label& l, const OrderSeries& amp) {
        if (amp.max_abs() == 0.0) return;
        auto [it, fresh] = terms.emplace(l, amp);
        if (!fresh) it->second += amp;
    }
    /// Adds the canonicalized fermionic string with its permutation sign.
    void add_string(std::vector<Mode> string, OrderSeries amp);

    OrderSeries norm_series() const;
    /// <this|other>, coefficient-truncated.
    OrderSeries inner(const FockStateP& other) const;
    FockStateP scaled(const OrderSeries& s) const;
    /// True when every term carries the same total charge.
    bool charge_uniform() const;
};

/// Wraps every cavity term of `cav` between external creation operators:
/// operator order is prefix..., cavity string..., suffix... (suffix applied
/// first / innermost). Fermionic signs follow from canonicalization.
FockStateP embed(const FockStateP& cav, const std::vector<Mode>& prefix,
                 const std::vector<Mode>& suffix);

FockStateP state_sum(const std::vector<FockStateP>& parts);

// ---------------------------------------------------------------------------
// State transforms between the in-region and out-region Fock bases, to first
// order in h. Amplitudes carry h symbolically through OrderSeries.

enum class BosonInput { vac, one_k, one_kp, pair_kkp };

/// The three printed first-order series (vacuum, single particle, particle
/// pair) of the scalar scenario, over the full truncated ladder.
FockStateP transform_boson_state(const PerturbBogoMap& map, BosonInput which, int k, int kp,
                                 const CanonicalOrder& order = {});

enum class FermionInput { vac, particle, antiparticle, pair };

/// First-order transforms of the Dirac vacuum, single (anti)particle and
/// particle-antiparticle pair, with wedge-order sign bookkeeping.
FockStateP transform_fermion_state(const FermiBogoMap& map, FermionInput which, int kappa,
                                   int kappa_p, const CanonicalOrder& order = {});

/// In-vacuum in the out-basis through second order: normalization, pair
/// kernel W and the two-pair term W^2/2.
FockStateP transformed_vacuum_second_order_boson(const PerturbBogoMap& map,
                                                 const CanonicalOrder& order = {});
FockStateP transformed_vacuum_second_order_fermion(const FermiBogoMap& map,
                                                   const CanonicalOrder& order = {});

// ---------------------------------------------------------------------------
// Vacuum kernels

struct VacuumKernel {
    MatrixXcd V1;   ///< pair kernel per unit h (fermionic support: p >= 0, q < 0)
    OrderSeries M;  ///< normalization, 1 + 0 h + m2 h^2
};

/// V^(1) = -conj(beta1) G^dag and M = 1 - 1/4 sum |V|^2 h^2.
VacuumKernel vacuum_kernel_boson(const PerturbBogoMap& map);
/// V^(1)_pq = G_q conj(A1_pq) (no summation) and M = 1 - 1/2 sum |V|^2 h^2.
VacuumKernel vacuum_kernel_fermion(const FermiBogoMap& map);

/// Exact numeric route V = -conj(beta) alpha^{-1}; throws on singular alpha.
MatrixXcd vacuum_kernel_numeric(const NumericBosonMap& map);

// ---------------------------------------------------------------------------
// Density matrices over a named subsystem list

struct Subsystem {
    std::string name;
    Mode mode;
    int dim;  ///< local dimension (qubit 2, truncated bosonic mode 3)
};

/// Perturbative density operator on an ordered list of local spaces. Basis
/// tuples index local occupations in descriptor order.
struct DensityMatrixP {
    std::vector<Subsystem> spaces;
    FieldKind field = FieldKind::scalar_massless;
    bool fermionic = false;
    CanonicalOrder order{};
    std::map<std::pair<std::vector<int>, std::vector<int>>, OrderSeries> entries;

    int dim() const {
        int d = 1;
        for (const auto& s : spaces) d *= s.dim;
        return d;
    }
    OrderSeries at(const std::vector<int>& bra, const std::vector<int>& ket) const;
    void add(const std::vector<int>& bra, const std::vector<int>& ket, const OrderSeries& v);

    OrderSeries trace_series() const;
    double hermiticity_defect() const;
    /// Smallest eigenvalue of the h^0 part.
    double order0_min_eigenvalue() const;

    int flat_index(const std::vector<int>& tuple) const;
    std::vector<int> tuple_at(int flat) const;
    MatrixXcd to_matrix(double h) const;
    MatrixXcd order_matrix(int ord) const;
};

/// rho = |psi><psi| reduced onto the kept subsystems; everything else is
/// traced out. Fermionic traces follow the from-the-inside convention with
/// anticommutation signs accumulated against the kept operators.
DensityMatrixP reduce_pure_state(const FockStateP& psi, const std::vector<Subsystem>& keep);

/// Full outer product |psi><psi| with one subsystem per occupied mode family;
/// convenience for small states already living on the kept register.
DensityMatrixP density_from_pure(const FockStateP& psi, const std::vector<Subsystem>& spaces);

/// Standard partial trace over descriptor positions not in keep_positions.
/// Fermionic entries reconstruct their operator strings to pick up the
/// convention's signs.
DensityMatrixP partial_trace(const DensityMatrixP& rho, const std::vector<int>& keep_positions);

}  // namespace cavity
