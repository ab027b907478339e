#include "cavity/fock.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace cavity {

namespace {

Label make_label(std::vector<std::pair<Mode, int>> occ, const CanonicalOrder& order) {
    std::sort(occ.begin(), occ.end(), [&](const auto& a, const auto& b) {
        return order.less(a.first, b.first);
    });
    Label l;
    for (auto& [mode, n] : occ) {
        if (n == 0) continue;
        if (!l.occ.empty() && l.occ.back().first == mode)
            l.occ.back().second += n;
        else
            l.occ.push_back({mode, n});
    }
    return l;
}

/// adag_m on a bosonic label: returns sqrt(n+1) and bumps the occupation.
double boson_create(Label& l, const Mode& m, const CanonicalOrder& order) {
    for (auto& [mode, n] : l.occ) {
        if (mode == m) {
            ++n;
            if (n > 2) throw std::logic_error("bosonic occupation truncation (<= 2) exceeded");
            return std::sqrt(double(n));
        }
    }
    auto pos = std::find_if(l.occ.begin(), l.occ.end(), [&](const auto& e) {
        return order.less(m, e.first);
    });
    l.occ.insert(pos, {m, 1});
    return 1.0;
}

/// Adds sum_{p,q} C(p,q) adag_p adag_q acting on (base, base_amp), with C at
/// the given power of h. Skips exact zeros of C.
void add_pair_creations(FockStateP& out, const Label& base, const OrderSeries& base_amp,
                        const ModeBasis& basis, const MatrixXcd& C, int h_order) {
    int sz = basis.size();
    for (int p = 0; p < sz; ++p)
        for (int q = 0; q < sz; ++q) {
            if (C(p, q) == cplx(0.0, 0.0)) continue;
            Label l = base;
            double f = boson_create(l, Mode::cav(basis.label_at(p)), out.order);
            f *= boson_create(l, Mode::cav(basis.label_at(q)), out.order);
            out.add(l, base_amp * OrderSeries::of_order(h_order, C(p, q) * f));
        }
}

Label fermion_label(const std::vector<Mode>& canonical_string) {
    Label l;
    for (const auto& m : canonical_string) l.occ.push_back({m, 1});
    return l;
}

}  // namespace

int canonicalize_fermion_string(std::vector<Mode>& string, const CanonicalOrder& order) {
    int sign = 1;
    for (size_t i = 1; i < string.size(); ++i) {
        Mode m = string[i];
        size_t j = i;
        while (j > 0 && order.less(m, string[j - 1])) {
            string[j] = string[j - 1];
            --j;
            sign = -sign;
        }
        string[j] = m;
    }
    for (size_t i = 1; i < string.size(); ++i)
        if (string[i] == string[i - 1]) return 0;
    return sign;
}

void FockStateP::add_string(std::vector<Mode> string, OrderSeries amp) {
    int sign = canonicalize_fermion_string(string, order);
    if (sign == 0) return;
    add(fermion_label(string), amp * double(sign));
}

OrderSeries FockStateP::norm_series() const { return inner(*this); }

OrderSeries FockStateP::inner(const FockStateP& other) const {
    OrderSeries acc;
    for (const auto& [label, amp] : terms) {
        auto it = other.terms.find(label);
        if (it != other.terms.end()) acc += amp.conj() * it->second;
    }
    return acc;
}

FockStateP FockStateP::scaled(const OrderSeries& s) const {
    FockStateP out = *this;
    for (auto& [label, amp] : out.terms) amp = amp * s;
    return out;
}

bool FockStateP::charge_uniform() const {
    if (terms.empty()) return true;
    int c = terms.begin()->first.total_charge(field);
    for (const auto& [label, amp] : terms)
        if (label.total_charge(field) != c) return false;
    return true;
}

FockStateP embed(const FockStateP& cav, const std::vector<Mode>& prefix,
                 const std::vector<Mode>& suffix) {
    FockStateP out = cav;
    out.terms.clear();
    for (const auto& [label, amp] : cav.terms) {
        if (cav.fermionic) {
            std::vector<Mode> string = prefix;
            for (const auto& [mode, n] : label.occ) string.push_back(mode);
            for (const auto& m : suffix) string.push_back(m);
            out.add_string(std::move(string), amp);
        } else {
            std::vector<std::pair<Mode, int>> occ(label.occ.begin(), label.occ.end());
            for (const auto& m : prefix) occ.push_back({m, 1});
            for (const auto& m : suffix) occ.push_back({m, 1});
            out.add(make_label(std::move(occ), out.order), amp);
        }
    }
    return out;
}

FockStateP state_sum(const std::vector<FockStateP>& parts) {
    if (parts.empty()) throw std::invalid_argument("state_sum: empty");
    FockStateP out = parts.front();
    for (size_t i = 1; i < parts.size(); ++i)
        for (const auto& [label, amp] : parts[i].terms) out.add(label, amp);
    return out;
}

// ---------------------------------------------------------------------------
// Bosonic transforms

namespace {

/// Pair-creation coefficient of the vacuum series: C(p,q) = -1/2 G*_q beta1*_pq.
MatrixXcd boson_pair_coefficients(const PerturbBogoMap& map) {
    MatrixXcd C = -0.5 * map.beta1.conjugate();
    C = C * map.G.conjugate().asDiagonal();
    return C;
}

void require_interior_pair(const ModeBasis& basis, int k, int kp) {
    if (k == kp) throw std::invalid_argument("transform: modes k and k' must be distinct");
    if (!basis.is_interior(k) || !basis.is_interior(kp))
        throw std::invalid_argument("transform: modes must be interior (<= n_max - 2)");
}

}  // namespace

FockStateP transform_boson_state(const PerturbBogoMap& map, BosonInput which, int k, int kp,
                                 const CanonicalOrder& order) {
    const ModeBasis& basis = map.basis;
    require_interior_pair(basis, k, kp);
    FockStateP out;
    out.field = basis.field;
    out.fermionic = false;
    out.order = order;

    MatrixXcd C = boson_pair_coefficients(map);
    Label vac;

    auto single = [&](int n) { return make_label({{Mode::cav(n), 1}}, order); };

    switch (which) {
        case BosonInput::vac: {
            out.add(vac, OrderSeries::one());
            add_pair_creations(out, vac, OrderSeries::one(), basis, C, 1);
            break;
        }
        case BosonInput::one_k:
        case BosonInput::one_kp: {
            int mode = which == BosonInput::one_k ? k : kp;
            cplx gk = map.g(mode);
            out.add(single(mode), std::conj(gk));
            for (int i = 0; i < basis.size(); ++i) {
                int m = basis.label_at(i);
                if (m == mode) continue;
                out.add(single(m), OrderSeries::of_order(1, std::conj(map.a1(m, mode))));
            }
            add_pair_creations(out, single(mode), OrderSeries(std::conj(gk)), basis, C, 1);
            break;
        }
        case BosonInput::pair_kkp: {
            cplx gk = std::conj(map.g(k)), gkp = std::conj(map.g(kp));
            out.add(vac, OrderSeries::of_order(1, gk * map.b1(k, kp)));
            for (int i = 0; i < basis.size(); ++i) {
                int m = basis.label_at(i);
                if (m != kp) {
                    Label l = single(k);
                    double f = boson_create(l, Mode::cav(m), order);
                    out.add(l, OrderSeries::of_order(1, gk * std::conj(map.a1(m, kp)) * f));
                }
                if (m != k) {
                    Label l = single(kp);
                    double f = boson_create(l, Mode::cav(m), order);
                    out.add(l, OrderSeries::of_order(1, gkp * std::conj(map.a1(m, k)) * f));
                }
            }
            Label both = make_label({{Mode::cav(k), 1}, {Mode::cav(kp), 1}}, order);
            out.add(both, OrderSeries(gk * gkp));
            add_pair_creations(out, both, OrderSeries(gk * gkp), basis, C, 1);
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fermionic transforms
//
// The stored map is A = diag(G) + h A1; states transform with the conjugated
// operator matrix, so particle ladders pick up G* and antiparticle ladders G:
//   bdag_n = sum_{m>=0} conj(A_mn) bdag~_m + sum_{m<0} conj(A_mn) c~_m
//   cdag_n = sum_{m>=0} A_mn b~_m       + sum_{m<0} A_mn cdag~_m
// and the out-vacuum pair kernel is V_pq = G_q conj(A1_pq) (p >= 0, q < 0).

namespace {

void require_charge_pair(const ModeBasis& basis, int kappa, int kappa_p) {
    if (basis.field != FieldKind::dirac_massless)
        throw std::invalid_argument("transform_fermion_state: config is not a Dirac cavity");
    if (kappa < 0 || kappa_p >= 0)
        throw std::invalid_argument("transform_fermion_state: need kappa >= 0 and kappa' < 0");
    if (!basis.is_interior(kappa) || !basis.is_interior(kappa_p))
        throw std::invalid_argument("transform_fermion_state: modes must be interior");
}

/// Nonzero entries of the fermionic pair kernel V_pq, p >= 0, q < 0.
std::vector<std::tuple<int, int, cplx>> fermion_pair_kernel(const FermiBogoMap& map) {
    std::vector<std::tuple<int, int, cplx>> v;
    const ModeBasis& b = map.basis;
    for (int p = 0; p <= b.n_max; ++p)
        for (int q = -b.n_max; q < 0; ++q) {
            cplx val = map.g(q) * std::conj(map.a1(p, q));
            if (val != cplx(0.0, 0.0)) v.push_back({p, q, val});
        }
    return v;
}

}  // namespace

FockStateP transform_fermion_state(const FermiBogoMap& map, FermionInput which, int kappa,
                                   int kappa_p, const CanonicalOrder& order) {
    const ModeBasis& basis = map.basis;
    require_charge_pair(basis, kappa, kappa_p);
    FockStateP out;
    out.field = basis.field;
    out.fermionic = true;
    out.order = order;

    auto pairs = fermion_pair_kernel(map);
    auto cav = [](int n) { return Mode::cav(n); };

    switch (which) {
        case FermionInput::vac: {
            out.add_string({}, OrderSeries::one());
            for (const auto& [p, q, v] : pairs)
                out.add_string({cav(p), cav(q)}, OrderSeries::of_order(1, v));
            break;
        }
        case FermionInput::particle: {
            cplx gs = std::conj(map.g(kappa));
            out.add_string({cav(kappa)}, OrderSeries(gs));
            for (int m = 0; m <= basis.n_max; ++m) {
                if (m == kappa) continue;
                out.add_string({cav(m)}, OrderSeries::of_order(1, std::conj(map.a1(m, kappa))));
            }
            for (const auto& [p, q, v] : pairs)
                out.add_string({cav(kappa), cav(p), cav(q)}, OrderSeries::of_order(1, gs * v));
            break;
        }
        case FermionInput::antiparticle: {
            cplx g = map.g(kappa_p);
            out.add_string({cav(kappa_p)}, OrderSeries(g));
            for (int m = -basis.n_max; m < 0; ++m) {
                if (m == kappa_p) continue;
                out.add_string({cav(m)}, OrderSeries::of_order(1, map.a1(m, kappa_p)));
            }
            for (const auto& [p, q, v] : pairs)
                out.add_string({cav(kappa_p), cav(p), cav(q)}, OrderSeries::of_order(1, g * v));
            break;
        }
        case FermionInput::pair: {
            cplx gs_k = std::conj(map.g(kappa));
            cplx g_kp = map.g(kappa_p);
            out.add_string({cav(kappa), cav(kappa_p)}, OrderSeries(gs_k * g_kp));
            // annihilator of the particle ladder contracting the zeroth-order
            // antiparticle: the bare out-vacuum term
            out.add_string({}, OrderSeries::of_order(1, g_kp * std::conj(map.a1(kappa_p, kappa))));
            for (int m = 0; m <= basis.n_max; ++m) {
                if (m == kappa) continue;
                out.add_string({cav(m), cav(kappa_p)},
                               OrderSeries::of_order(1, g_kp * std::conj(map.a1(m, kappa))));
            }
            for (int m = -basis.n_max; m < 0; ++m) {
                if (m == kappa_p) continue;
                out.add_string({cav(kappa), cav(m)},
                               OrderSeries::of_order(1, gs_k * map.a1(m, kappa_p)));
            }
            for (const auto& [p, q, v] : pairs)
                out.add_string({cav(kappa), cav(kappa_p), cav(p), cav(q)},
                               OrderSeries::of_order(1, gs_k * g_kp * v));
            break;
        }
    }
    return out;
}

FockStateP transformed_vacuum_second_order_boson(const PerturbBogoMap& map,
                                                 const CanonicalOrder& order) {
    const ModeBasis& basis = map.basis;
    FockStateP out;
    out.field = basis.field;
    out.fermionic = false;
    out.order = order;

    VacuumKernel vk = vacuum_kernel_boson(map);
    Label vac;
    out.add(vac, vk.M);

    // e^W to second order, W = 1/2 sum V_pq adag_p adag_q
    add_pair_creations(out, vac, OrderSeries::one(), basis, 0.5 * vk.V1, 1);
    int sz = basis.size();
    for (int p = 0; p < sz; ++p)
        for (int q = 0; q < sz; ++q) {
            cplx vpq = vk.V1(p, q);
            if (vpq == cplx(0.0, 0.0)) continue;
            for (int r = 0; r < sz; ++r)
                for (int s = 0; s < sz; ++s) {
                    cplx vrs = vk.V1(r, s);
                    if (vrs == cplx(0.0, 0.0)) continue;
                    Label l = vac;
                    double f = boson_create(l, Mode::cav(basis.label_at(p)), order);
                    f *= boson_create(l, Mode::cav(basis.label_at(q)), order);
                    f *= boson_create(l, Mode::cav(basis.label_at(r)), order);
                    f *= boson_create(l, Mode::cav(basis.label_at(s)), order);
                    out.add(l, OrderSeries::of_order(2, 0.125 * vpq * vrs * f));
                }
        }
    return out;
}

FockStateP transformed_vacuum_second_order_fermion(const FermiBogoMap& map,
                                                   const CanonicalOrder& order) {
    const ModeBasis& basis = map.basis;
    FockStateP out;
    out.field = basis.field;
    out.fermionic = true;
    out.order = order;

    VacuumKernel vk = vacuum_kernel_fermion(map);
    auto pairs = fermion_pair_kernel(map);
    out.add_string({}, vk.M);
    for (const auto& [p, q, v] : pairs)
        out.add_string({Mode::cav(p), Mode::cav(q)}, OrderSeries::of_order(1, v));
    for (const auto& [p, q, v] : pairs)
        for (const auto& [r, s, w] : pairs) {
            if (p == r || q == s) continue;
            out.add_string({Mode::cav(p), Mode::cav(q), Mode::cav(r), Mode::cav(s)},
                           OrderSeries::of_order(2, 0.5 * v * w));
        }
    return out;
}

// ---------------------------------------------------------------------------
// Vacuum kernels

VacuumKernel vacuum_kernel_boson(const PerturbBogoMap& map) {
    VacuumKernel vk;
    vk.V1 = -(map.beta1.conjugate() * map.G.conjugate().asDiagonal());
    double s = vk.V1.cwiseAbs2().sum();
    vk.M = OrderSeries::one() + OrderSeries::of_order(2, -0.25 * s);
    return vk;
}

VacuumKernel vacuum_kernel_fermion(const FermiBogoMap& map) {
    const ModeBasis& b = map.basis;
    VacuumKernel vk;
    vk.V1 = MatrixXcd::Zero(b.size(), b.size());
    double s = 0.0;
    for (int p = 0; p <= b.n_max; ++p)
        for (int q = -b.n_max; q < 0; ++q) {
            cplx v = map.g(q) * std::conj(map.a1(p, q));
            vk.V1(b.index_of(p), b.index_of(q)) = v;
            s += std::norm(v);
        }
    vk.M = OrderSeries::one() + OrderSeries::of_order(2, -0.5 * s);
    return vk;
}

MatrixXcd vacuum_kernel_numeric(const NumericBosonMap& map) {
    Eigen::FullPivLU<MatrixXcd> lu(map.alpha);
    if (!lu.isInvertible())
        throw std::runtime_error("vacuum_kernel_numeric: alpha is singular on the truncated block");
    return -map.beta.conjugate() * lu.inverse();
}

// ---------------------------------------------------------------------------
// Density matrices

OrderSeries DensityMatrixP::at(const std::vector<int>& bra, const std::vector<int>& ket) const {
    auto it = entries.find({bra, ket});
    return it == entries.end() ? OrderSeries::zero() : it->second;
}

void DensityMatrixP::add(const std::vector<int>& bra, const std::vector<int>& ket,
                         const OrderSeries& v) {
    if (v.max_abs() == 0.0) return;
    auto [it, fresh] = entries.emplace(std::make_pair(bra, ket), v);
    if (!fresh) it->second += v;
}

OrderSeries DensityMatrixP::trace_series() const {
    OrderSeries t;
    for (const auto& [key, v] : entries)
        if (key.first == key.second) t += v;
    return t;
}

double DensityMatrixP::hermiticity_defect() const {
    double worst = 0.0;
    for (const auto& [key, v] : entries) {
        OrderSeries mirror = at(key.second, key.first);
        worst = std::max(worst, (v - mirror.conj()).max_abs());
    }
    return worst;
}

int DensityMatrixP::flat_index(const std::vector<int>& tuple) const {
    if (tuple.size() != spaces.size())
        throw std::invalid_argument("DensityMatrixP: tuple arity mismatch");
    int idx = 0;
    for (size_t i = 0; i < spaces.size(); ++i) {
        if (tuple[i] < 0 || tuple[i] >= spaces[i].dim)
            throw std::out_of_range("DensityMatrixP: occupation outside local dimension");
        idx = idx * spaces[i].dim + tuple[i];
    }
    return idx;
}

std::vector<int> DensityMatrixP::tuple_at(int flat) const {
    std::vector<int> t(spaces.size());
    for (int i = int(spaces.size()) - 1; i >= 0; --i) {
        t[i] = flat % spaces[i].dim;
        flat /= spaces[i].dim;
    }
    return t;
}

MatrixXcd DensityMatrixP::to_matrix(double h) const {
    MatrixXcd m = MatrixXcd::Zero(dim(), dim());
    for (const auto& [key, v] : entries)
        m(flat_index(key.first), flat_index(key.second)) += v.eval(h);
    return m;
}

MatrixXcd DensityMatrixP::order_matrix(int ord) const {
    MatrixXcd m = MatrixXcd::Zero(dim(), dim());
    for (const auto& [key, v] : entries) {
        cplx c = ord == 0 ? v.c0 : (ord == 1 ? v.c1 : v.c2);
        m(flat_index(key.first), flat_index(key.second)) += c;
    }
    return m;
}

double DensityMatrixP::order0_min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(order_matrix(0));
    return es.eigenvalues().minCoeff();
}

namespace {

struct SplitTerm {
    std::vector<int> kept;  // occupations, descriptor order
    Label env;
    OrderSeries amp;  // sign folded for fermions
};

int kept_position(const std::vector<Subsystem>& keep, const Mode& m) {
    for (size_t i = 0; i < keep.size(); ++i)
        if (keep[i].mode == m) return int(i);
    return -1;
}

}  // namespace

DensityMatrixP reduce_pure_state(const FockStateP& psi, const std::vector<Subsystem>& keep) {
    DensityMatrixP rho;
    rho.spaces = keep;
    rho.field = psi.field;
    rho.fermionic = psi.fermionic;
    rho.order = psi.order;

    std::map<Label, std::vector<SplitTerm>> groups;
    for (const auto& [label, amp] : psi.terms) {
        SplitTerm st;
        st.kept.assign(keep.size(), 0);
        st.amp = amp;
        int crossings = 0;
        int kept_after = 0;
        // walk the canonical string innermost-first; a traced operator picks
        // up one anticommutation sign per kept operator below it
        for (auto it = label.occ.rbegin(); it != label.occ.rend(); ++it) {
            int pos = kept_position(keep, it->first);
            if (pos >= 0) {
                st.kept[pos] += it->second;
                if (st.kept[pos] >= keep[pos].dim)
                    throw std::out_of_range("reduce_pure_state: occupation outside local dim");
                ++kept_after;
            } else {
                if (psi.fermionic) crossings += kept_after;
                st.env.occ.push_back(*it);
            }
        }
        std::reverse(st.env.occ.begin(), st.env.occ.end());
        if (psi.fermionic && (crossings % 2)) st.amp = st.amp * (-1.0);
        groups[st.env].push_back(std::move(st));
    }

    for (const auto& [env, terms] : groups)
        for (const auto& a : terms)
            for (const auto& b : terms) rho.add(a.kept, b.kept, a.amp * b.amp.conj());
    return rho;
}

DensityMatrixP density_from_pure(const FockStateP& psi, const std::vector<Subsystem>& spaces) {
    DensityMatrixP rho = reduce_pure_state(psi, spaces);
    return rho;
}

DensityMatrixP partial_trace(const DensityMatrixP& rho, const std::vector<int>& keep_positions) {
    if (keep_positions.empty())
        throw std::invalid_argument("partial_trace: keep set must be non-empty");
    for (int p : keep_positions)
        if (p < 0 || p >= int(rho.spaces.size()))
            throw std::invalid_argument("partial_trace: keep position out of range");

    std::vector<bool> kept(rho.spaces.size(), false);
    for (int p : keep_positions) kept[p] = true;

    DensityMatrixP out;
    out.field = rho.field;
    out.fermionic = rho.fermionic;
    out.order = rho.order;
    for (int p : keep_positions) out.spaces.push_back(rho.spaces[p]);

    // Fermionic sign of removing the traced operators from a canonical
    // string: one anticommutation per (traced op, kept op below it) pair.
    auto trace_sign = [&](const std::vector<int>& tuple) {
        if (!rho.fermionic) return 1;
        int crossings = 0, kept_after = 0;
        for (int i = int(tuple.size()) - 1; i >= 0; --i) {
            if (tuple[i] == 0) continue;
            if (kept[i])
                ++kept_after;
            else
                crossings += kept_after;
        }
        return crossings % 2 ? -1 : 1;
    };

    for (const auto& [key, v] : rho.entries) {
        const auto& [bra, ket] = key;
        bool diagonal_env = true;
        for (size_t i = 0; i < rho.spaces.size(); ++i)
            if (!kept[i] && bra[i] != ket[i]) {
                diagonal_env = false;
                break;
            }
        if (!diagonal_env) continue;
        std::vector<int> rbra, rket;
        for (int p : keep_positions) {
            rbra.push_back(bra[p]);
            rket.push_back(ket[p]);
        }
        double sign = double(trace_sign(bra) * trace_sign(ket));
        out.add(rbra, rket, v * sign);
    }
    return out;
}

}  // namespace cavity
