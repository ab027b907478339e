#include "cavity/bogoliubov.hpp"

#include <cmath>

#include "cavity/oracle.hpp"

namespace cavity {

namespace {

double max_abs(const MatrixXcd& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_compatible(const ModeBasis& a, const ModeBasis& b) {
    if (!a.compatible(b)) throw std::invalid_argument("compose: mode basis mismatch");
}

double parity_masked_max(const ModeBasis& basis, const MatrixXcd& m) {
    double worst = 0.0;
    for (int i = 0; i < basis.size(); ++i)
        for (int j = 0; j < basis.size(); ++j) {
            int mm = basis.label_at(i), nn = basis.label_at(j);
            if (((mm + nn) % 2 + 2) % 2 == 0) worst = std::max(worst, std::abs(m(i, j)));
        }
    return worst;
}

}  // namespace

double PerturbBogoMap::phase_defect() const {
    double worst = 0.0;
    for (int i = 0; i < G.size(); ++i) worst = std::max(worst, std::abs(std::abs(G(i)) - 1.0));
    return worst;
}
double PerturbBogoMap::alpha_diagonal_defect() const {
    return alpha1.diagonal().cwiseAbs().maxCoeff();
}
double PerturbBogoMap::parity_defect() const {
    return std::max(parity_masked_max(basis, alpha1), parity_masked_max(basis, beta1));
}
double PerturbBogoMap::twisted_symmetry_defect() const {
    MatrixXcd bg = beta1 * G.asDiagonal();
    return max_abs(bg - bg.transpose());
}
double PerturbBogoMap::unitarity_defect() const {
    MatrixXcd ga = G.conjugate().asDiagonal() * alpha1;
    return max_abs(ga + ga.adjoint());
}

double FermiBogoMap::phase_defect() const {
    double worst = 0.0;
    for (int i = 0; i < G.size(); ++i) worst = std::max(worst, std::abs(std::abs(G(i)) - 1.0));
    return worst;
}
double FermiBogoMap::diagonal_defect() const { return A1.diagonal().cwiseAbs().maxCoeff(); }
double FermiBogoMap::parity_defect() const { return parity_masked_max(basis, A1); }
double FermiBogoMap::unitarity_defect() const {
    MatrixXcd ga = G.conjugate().asDiagonal() * A1;
    return max_abs(ga + ga.adjoint());
}

double scalar_beta1_switch(int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("scalar_beta1_switch: labels must be >= 1");
    if ((m + n) % 2 == 0) return 0.0;
    double s = m + n;
    return 2.0 * std::sqrt(double(m) * double(n)) / (M_PI * M_PI * s * s * s);
}

double scalar_alpha1_switch(int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("scalar_alpha1_switch: labels must be >= 1");
    if (m == n || (m + n) % 2 == 0) return 0.0;
    double d = n - m;
    return 2.0 * std::sqrt(double(m) * double(n)) / (M_PI * M_PI * d * d * d);
}

double dirac_a1_switch(int m, int n) {
    if ((((m + n) % 2) + 2) % 2 == 0) return 0.0;
    double d = m - n;
    return -double(m + n) / (M_PI * M_PI * d * d * d);
}

PerturbBogoMap switch_map_boson(const CavityConfig& cfg, double h) {
    cfg.validate();
    if (cfg.field != FieldKind::scalar_massless)
        throw std::invalid_argument("switch_map_boson: config is not a scalar cavity");
    if (!(h >= 0.0 && h < 2.0)) throw std::domain_error("switch_map_boson: h must lie in [0, 2)");
    ModeBasis basis(cfg);
    PerturbBogoMap map(basis);
    map.h_ref = h;
    for (int i = 0; i < basis.size(); ++i)
        for (int j = 0; j < basis.size(); ++j) {
            int m = basis.label_at(i), n = basis.label_at(j);
            map.alpha1(i, j) = scalar_alpha1_switch(m, n);
            map.beta1(i, j) = scalar_beta1_switch(m, n);
        }
    return map;
}

FermiBogoMap switch_map_fermion(const CavityConfig& cfg, double h) {
    cfg.validate();
    if (cfg.field != FieldKind::dirac_massless)
        throw std::invalid_argument("switch_map_fermion: config is not a Dirac cavity");
    if (!(h >= 0.0 && h < 2.0)) throw std::domain_error("switch_map_fermion: h must lie in [0, 2)");
    ModeBasis basis(cfg);
    FermiBogoMap map(basis);
    map.h_ref = h;
    for (int i = 0; i < basis.size(); ++i)
        for (int j = 0; j < basis.size(); ++j)
            map.A1(i, j) = dirac_a1_switch(basis.label_at(i), basis.label_at(j));
    return map;
}

VectorXcd phase_vector(const ModeBasis& basis, const Segment& seg, bool symbolic_h) {
    seg.validate();
    double ratio = 1.0;
    if (seg.kind == Segment::Kind::accelerated && !symbolic_h)
        ratio = accel_frequency_ratio(seg.h);
    VectorXcd g(basis.size());
    for (int i = 0; i < basis.size(); ++i) {
        double theta = basis.omega(basis.label_at(i)) * ratio * seg.duration;
        g(i) = std::polar(1.0, theta);
    }
    return g;
}

PerturbBogoMap phase_map_boson(const ModeBasis& basis, const Segment& seg, bool symbolic_h) {
    PerturbBogoMap m(basis);
    m.G = phase_vector(basis, seg, symbolic_h);
    return m;
}

FermiBogoMap phase_map_fermion(const ModeBasis& basis, const Segment& seg, bool symbolic_h) {
    FermiBogoMap m(basis);
    m.G = phase_vector(basis, seg, symbolic_h);
    return m;
}

PerturbBogoMap compose(const PerturbBogoMap& outer, const PerturbBogoMap& inner) {
    require_compatible(outer.basis, inner.basis);
    PerturbBogoMap out(outer.basis);
    out.h_ref = std::max(outer.h_ref, inner.h_ref);
    out.G = outer.G.cwiseProduct(inner.G);
    out.alpha1 = outer.G.asDiagonal() * inner.alpha1 + outer.alpha1 * inner.G.asDiagonal();
    out.beta1 = outer.G.asDiagonal() * inner.beta1 +
                outer.beta1 * inner.G.conjugate().asDiagonal();
    return out;
}

FermiBogoMap compose(const FermiBogoMap& outer, const FermiBogoMap& inner) {
    require_compatible(outer.basis, inner.basis);
    FermiBogoMap out(outer.basis);
    out.h_ref = std::max(outer.h_ref, inner.h_ref);
    out.G = outer.G.cwiseProduct(inner.G);
    out.A1 = outer.G.asDiagonal() * inner.A1 + outer.A1 * inner.G.asDiagonal();
    return out;
}

PerturbBogoMap inverse(const PerturbBogoMap& m) {
    PerturbBogoMap out(m.basis);
    out.h_ref = m.h_ref;
    out.G = m.G.conjugate();
    out.alpha1 = m.alpha1.adjoint();
    out.beta1 = -m.beta1.transpose();
    return out;
}

FermiBogoMap inverse(const FermiBogoMap& m) {
    FermiBogoMap out(m.basis);
    out.h_ref = m.h_ref;
    out.G = m.G.conjugate();
    out.A1 = m.A1.adjoint();
    return out;
}

namespace {

/// Shared switch/phase fold. MapT is PerturbBogoMap or FermiBogoMap.
template <typename MapT, typename SwitchFn, typename PhaseFn>
MapT compile_generic(const CavityConfig& cfg, const Trajectory& traj, double h,
                     const CompileOptions& opt, SwitchFn make_switch, PhaseFn make_phase) {
    cfg.validate();
    traj.validate();
    if (!(h >= 0.0)) throw std::domain_error("compile_trajectory: h must be >= 0");
    ModeBasis basis(cfg);
    MapT acc = MapT::identity(basis);
    acc.h_ref = opt.symbolic_h ? 0.0 : h;

    // Switch maps live at frame changes; scale per-segment h_i against the
    // nominal h so the kernels stay coefficients of the single parameter.
    std::optional<double> current_accel_h;  // empty = inertial frame
    auto enter_frame = [&](const std::optional<double>& next) {
        if (current_accel_h == next) return;
        if (current_accel_h) {
            MapT sw = make_switch(*current_accel_h, h);
            acc = compose(inverse(sw), acc);
        }
        if (next) {
            MapT sw = make_switch(*next, h);
            acc = compose(sw, acc);
        }
        current_accel_h = next;
    };

    for (const auto& seg : traj.segments) {
        if (seg.kind == Segment::Kind::accelerated)
            enter_frame(std::optional<double>(seg.h));
        else
            enter_frame(std::nullopt);
        acc = compose(make_phase(seg), acc);
    }
    enter_frame(std::nullopt);  // ends in the inertial frame

    if (opt.conjugate_convention) acc = acc.conjugated();
    return acc;
}

}  // namespace

PerturbBogoMap compile_trajectory_boson(const CavityConfig& cfg, const Trajectory& traj,
                                        double h, const CompileOptions& opt) {
    ModeBasis basis(cfg);
    auto make_switch = [&](double seg_h, double nominal) {
        PerturbBogoMap sw = switch_map_boson(cfg, seg_h);
        if (nominal > 0.0 && seg_h != nominal) {
            double scale = seg_h / nominal;
            sw.alpha1 *= scale;
            sw.beta1 *= scale;
        }
        return sw;
    };
    auto make_phase = [&](const Segment& seg) {
        return phase_map_boson(basis, seg, opt.symbolic_h);
    };
    return compile_generic<PerturbBogoMap>(cfg, traj, h, opt, make_switch, make_phase);
}

FermiBogoMap compile_trajectory_fermion(const CavityConfig& cfg, const Trajectory& traj,
                                        double h, const CompileOptions& opt) {
    ModeBasis basis(cfg);
    auto make_switch = [&](double seg_h, double nominal) {
        FermiBogoMap sw = switch_map_fermion(cfg, seg_h);
        if (nominal > 0.0 && seg_h != nominal) sw.A1 *= seg_h / nominal;
        return sw;
    };
    auto make_phase = [&](const Segment& seg) {
        return phase_map_fermion(basis, seg, opt.symbolic_h);
    };
    return compile_generic<FermiBogoMap>(cfg, traj, h, opt, make_switch, make_phase);
}

std::vector<ResonanceTime> resonance_times(int k, int kp, double delta,
                                           const std::vector<int>& n_list) {
    if (k == kp) throw std::invalid_argument("resonance_times: modes must differ");
    if (k < 1 || kp < 1) throw std::invalid_argument("resonance_times: positive mode labels");
    std::vector<ResonanceTime> out;
    for (int n : n_list) {
        if (n <= 0) continue;
        ResonanceTime rt;
        rt.n = n;
        rt.tau = 2.0 * n * delta / double(k + kp);
        rt.mode_independent = (n % (k + kp) == 0);
        out.push_back(rt);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Numeric maps

NumericBosonMap numeric_switch_boson(const CavityConfig& cfg, double h) {
    auto [alpha, beta] = oracle_scalar_switch_matrices(cfg, h);
    return {alpha.cast<cplx>(), beta.cast<cplx>()};
}

NumericFermiMap numeric_switch_fermion(const CavityConfig& cfg, double h) {
    return {oracle_dirac_switch_matrix(cfg, h).cast<cplx>()};
}

NumericBosonMap numeric_compose(const NumericBosonMap& outer, const NumericBosonMap& inner) {
    return {outer.alpha * inner.alpha + outer.beta * inner.beta.conjugate(),
            outer.alpha * inner.beta + outer.beta * inner.alpha.conjugate()};
}

NumericFermiMap numeric_compose(const NumericFermiMap& outer, const NumericFermiMap& inner) {
    return {outer.A * inner.A};
}

namespace {

MatrixXcd numeric_phase(const ModeBasis& basis, const Segment& seg) {
    return MatrixXcd(phase_vector(basis, seg).asDiagonal());
}

}  // namespace

NumericBosonMap numeric_compile_boson(const CavityConfig& cfg, const Trajectory& traj) {
    cfg.validate();
    traj.validate();
    ModeBasis basis(cfg);
    int n = basis.size();
    NumericBosonMap acc{MatrixXcd::Identity(n, n), MatrixXcd::Zero(n, n)};
    std::optional<double> frame;
    auto enter = [&](const std::optional<double>& next) {
        if (frame == next) return;
        if (frame) {
            NumericBosonMap sw = numeric_switch_boson(cfg, *frame);
            // exact inverse: (alpha, beta) -> (alpha^dag, -beta^T)
            NumericBosonMap inv{sw.alpha.adjoint(), -sw.beta.transpose()};
            acc = numeric_compose(inv, acc);
        }
        if (next) acc = numeric_compose(numeric_switch_boson(cfg, *next), acc);
        frame = next;
    };
    for (const auto& seg : traj.segments) {
        enter(seg.kind == Segment::Kind::accelerated ? std::optional<double>(seg.h)
                                                     : std::nullopt);
        NumericBosonMap ph{numeric_phase(basis, seg), MatrixXcd::Zero(n, n)};
        acc = numeric_compose(ph, acc);
    }
    enter(std::nullopt);
    return acc;
}

NumericFermiMap numeric_compile_fermion(const CavityConfig& cfg, const Trajectory& traj) {
    cfg.validate();
    traj.validate();
    ModeBasis basis(cfg);
    NumericFermiMap acc{MatrixXcd::Identity(basis.size(), basis.size())};
    std::optional<double> frame;
    auto enter = [&](const std::optional<double>& next) {
        if (frame == next) return;
        if (frame) {
            NumericFermiMap sw = numeric_switch_fermion(cfg, *frame);
            acc = numeric_compose({sw.A.adjoint()}, acc);
        }
        if (next) acc = numeric_compose(numeric_switch_fermion(cfg, *next), acc);
        frame = next;
    };
    for (const auto& seg : traj.segments) {
        enter(seg.kind == Segment::Kind::accelerated ? std::optional<double>(seg.h)
                                                     : std::nullopt);
        acc = numeric_compose({numeric_phase(basis, seg)}, acc);
    }
    enter(std::nullopt);
    return acc;
}

double bogoliubov_identity_residual(const NumericBosonMap& m) {
    int n = int(m.alpha.rows());
    MatrixXcd r = m.alpha * m.alpha.adjoint() - m.beta * m.beta.adjoint() -
                  MatrixXcd::Identity(n, n);
    return r.cwiseAbs().maxCoeff();
}

double unitarity_residual(const NumericFermiMap& m) {
    int n = int(m.A.rows());
    MatrixXcd r = m.A * m.A.adjoint() - MatrixXcd::Identity(n, n);
    return r.cwiseAbs().maxCoeff();
}

}  // namespace cavity
