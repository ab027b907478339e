#include "cavity/scenarios.hpp"

#include <cmath>
#include <future>
#include <thread>

namespace cavity {

std::string to_string(Statistics s) { return s == Statistics::boson ? "boson" : "fermion"; }

Statistics statistics_from_string(const std::string& s) {
    if (s == "boson" || s == "bosonic" || s == "scalar") return Statistics::boson;
    if (s == "fermion" || s == "fermionic" || s == "dirac") return Statistics::fermion;
    throw std::invalid_argument("unknown statistics: " + s);
}

namespace {

constexpr double kRegimeBound = 0.1;

bool regime_guard(const Trajectory& traj, double h, const ScenarioOptions& opt) {
    double nh = traj.accelerated_segment_count() * h;
    if (nh <= kRegimeBound) return false;
    if (!opt.allow_large_Nh)
        throw RegimeError("perturbative-regime guard: N h = " + std::to_string(nh) +
                          " exceeds " + std::to_string(kRegimeBound));
    return true;
}

void check_sign(int sign) {
    if (sign != +1 && sign != -1) throw std::invalid_argument("scenario: sign must be +1 or -1");
}

OrderSeries mode_diagonal(const DensityMatrixP& rho, int position) {
    std::vector<int> t(rho.spaces.size(), 0);
    t[position] = 1;
    return rho.at(t, t);
}

}  // namespace

ScenarioResult run_scenario_a(const CavityConfig& cfg, const Trajectory& traj, double h,
                              Statistics stats, const std::vector<int>& modes, int sign,
                              const ScenarioOptions& opt) {
    cfg.validate();
    check_sign(sign);
    if (modes.size() != 2) throw std::invalid_argument("scenario A: needs two modes");
    if (modes[0] == modes[1]) throw std::invalid_argument("scenario A: modes must be distinct");

    ScenarioResult res;
    res.scenario = "A";
    res.statistics = stats;
    res.modes = modes;
    res.h = h;
    res.sign = sign;
    res.regime_warning = regime_guard(traj, h, opt);

    CompileOptions copt;
    copt.conjugate_convention = opt.conjugate_convention;
    CanonicalOrder order{opt.reverse_fermion_order};
    double s = double(sign);

    Mode A = Mode::A(), C = Mode::C();

    if (stats == Statistics::boson) {
        if (cfg.field != FieldKind::scalar_massless)
            throw std::invalid_argument("scenario A boson: config must be a scalar cavity");
        int k = modes[0], kp = modes[1];
        PerturbBogoMap map = compile_trajectory_boson(cfg, traj, h, copt);

        FockStateP t_vac = transform_boson_state(map, BosonInput::vac, k, kp, order);
        FockStateP t_k = transform_boson_state(map, BosonInput::one_k, k, kp, order);
        FockStateP t_kp = transform_boson_state(map, BosonInput::one_kp, k, kp, order);
        FockStateP t_pair = transform_boson_state(map, BosonInput::pair_kkp, k, kp, order);

        FockStateP psi = state_sum({t_vac.scaled(OrderSeries(0.5)),
                                    embed(t_k, {A}, {}).scaled(OrderSeries(0.5 * s)),
                                    embed(t_kp, {}, {C}).scaled(OrderSeries(0.5 * s)),
                                    embed(t_pair, {A}, {C}).scaled(OrderSeries(0.5))});
        res.state_norm = psi.norm_series();

        std::vector<Subsystem> keep{{"A", A, 2},
                                    {"k", Mode::cav(k), 3},
                                    {"k'", Mode::cav(kp), 3},
                                    {"C", C, 2}};
        res.reduced = reduce_pure_state(psi, keep);
        res.reduced_trace = res.reduced.trace_series();
        res.witness = witness_a1(res.reduced);

        DensityMatrixP rho_kkp = partial_trace(res.reduced, {1, 2});
        DensityMatrixP rho_ak = partial_trace(res.reduced, {0, 1});
        DensityMatrixP rho_ac = partial_trace(res.reduced, {0, 3});
        res.negativity_at_h["k,k'"] = negativity(rho_kkp, {1}, h);
        res.negativity_first_order["k,k'"] = negativity_first_order(rho_kkp, {1});
        res.negativity_at_h["A,k"] = negativity(rho_ak, {1}, h);
        res.negativity_at_h["A,C"] = negativity(rho_ac, {1}, h);
        res.negativity_first_order["A,C"] = negativity_first_order(rho_ac, {1});
    } else {
        if (cfg.field != FieldKind::dirac_massless)
            throw std::invalid_argument("scenario A fermion: config must be a Dirac cavity");
        int kappa = modes[0], kappa_p = modes[1];
        FermiBogoMap map = compile_trajectory_fermion(cfg, traj, h, copt);

        FockStateP t_vac = transform_fermion_state(map, FermionInput::vac, kappa, kappa_p, order);
        FockStateP t_k =
            transform_fermion_state(map, FermionInput::particle, kappa, kappa_p, order);
        FockStateP t_kp =
            transform_fermion_state(map, FermionInput::antiparticle, kappa, kappa_p, order);
        FockStateP t_pair = transform_fermion_state(map, FermionInput::pair, kappa, kappa_p, order);

        FockStateP psi = state_sum({t_vac.scaled(OrderSeries(0.5)),
                                    embed(t_k, {A}, {}).scaled(OrderSeries(0.5 * s)),
                                    embed(t_kp, {}, {C}).scaled(OrderSeries(0.5 * s)),
                                    embed(t_pair, {A}, {C}).scaled(OrderSeries(0.5))});
        res.state_norm = psi.norm_series();

        std::vector<Subsystem> keep{{"A", A, 2},
                                    {"kappa", Mode::cav(kappa), 2},
                                    {"kappa'", Mode::cav(kappa_p), 2},
                                    {"C", C, 2}};
        res.reduced = reduce_pure_state(psi, keep);
        res.reduced_trace = res.reduced.trace_series();
        res.witness = witness_a2(res.reduced);
        res.witness_strict = witness_a2_strict(res.reduced);

        DensityMatrixP rho_kkp = partial_trace(res.reduced, {1, 2});
        DensityMatrixP rho_ak = partial_trace(res.reduced, {0, 1});
        DensityMatrixP rho_ac = partial_trace(res.reduced, {0, 3});
        res.negativity_at_h["kappa,kappa'"] = negativity(rho_kkp, {1}, h);
        res.negativity_first_order["kappa,kappa'"] = negativity_first_order(rho_kkp, {1});
        res.negativity_at_h["A,kappa"] = negativity(rho_ak, {1}, h);
        res.negativity_at_h["A,C"] = negativity(rho_ac, {1}, h);

        res.dicke_fidelity = fidelity(res.reduced, canonical_dicke4(map, kappa, kappa_p, sign, order));
    }
    return res;
}

ScenarioResult run_scenario_b(const CavityConfig& cfg, const Trajectory& traj, double h,
                              Statistics stats, const std::vector<int>& modes,
                              const ScenarioOptions& opt) {
    cfg.validate();
    if (modes.size() != 3) throw std::invalid_argument("scenario B: needs three modes");

    ScenarioResult res;
    res.scenario = "B";
    res.statistics = stats;
    res.modes = modes;
    res.h = h;
    res.regime_warning = regime_guard(traj, h, opt);

    CompileOptions copt;
    copt.conjugate_convention = opt.conjugate_convention;
    CanonicalOrder order{opt.reverse_fermion_order};

    if (stats == Statistics::boson) {
        if (cfg.field != FieldKind::scalar_massless)
            throw std::invalid_argument("scenario B boson: config must be a scalar cavity");
        int k = modes[0], kp = modes[1], kpp = modes[2];
        if (((k - kp) % 2 + 2) % 2 != 1 || ((kp - kpp) % 2 + 2) % 2 != 1)
            throw std::invalid_argument("scenario B boson: (k-k') and (k'-k'') must be odd");
        PerturbBogoMap map = compile_trajectory_boson(cfg, traj, h, copt);
        ModeBasis basis(cfg);
        for (int m : modes)
            if (!basis.is_interior(m))
                throw std::invalid_argument("scenario B: modes must be interior");

        FockStateP psi = transformed_vacuum_second_order_boson(map, order);
        res.state_norm = psi.norm_series();

        std::vector<Subsystem> keep{{"k", Mode::cav(k), 3},
                                    {"k'", Mode::cav(kp), 3},
                                    {"k''", Mode::cav(kpp), 3}};
        res.reduced = reduce_pure_state(psi, keep);
        res.reduced_trace = res.reduced.trace_series();
        res.witness = witness_a3(res.reduced);

        // mixedness terms f^beta_{m not p} = 1/2 sum_{n != p} |beta1_mn|^2 h^2
        auto f_beta = [&](int m, std::vector<int> excluded) {
            double sum = 0.0;
            for (int i = 0; i < basis.size(); ++i) {
                int n = basis.label_at(i);
                bool skip = false;
                for (int e : excluded) skip = skip || (n == e);
                if (!skip) sum += std::norm(map.b1(m, n));
            }
            return OrderSeries::of_order(2, 0.5 * sum);
        };
        res.f_beta["f_k_not_k'"] = f_beta(k, {kp});
        res.f_beta["f_k'_not_k,k''"] = f_beta(kp, {k, kpp});
        res.f_beta["f_k''_not_k'"] = f_beta(kpp, {kp});
        res.mode_diagonals["k"] = mode_diagonal(res.reduced, 0);
        res.mode_diagonals["k'"] = mode_diagonal(res.reduced, 1);
        res.mode_diagonals["k''"] = mode_diagonal(res.reduced, 2);
    } else {
        if (cfg.field != FieldKind::dirac_massless)
            throw std::invalid_argument("scenario B fermion: config must be a Dirac cavity");
        int kappa = modes[0], kappa_p = modes[1], kappa_pp = modes[2];
        if (kappa < 0 || kappa_p < 0 || kappa_pp >= 0)
            throw std::invalid_argument(
                "scenario B fermion: needs kappa, kappa' >= 0 and kappa'' < 0");
        if (kappa == kappa_p) throw std::invalid_argument("scenario B: particle modes must differ");
        if (((kappa + kappa_p) % 2 + 2) % 2 != 0 || ((kappa + kappa_pp) % 2 + 2) % 2 != 1 ||
            ((kappa_p + kappa_pp) % 2 + 2) % 2 != 1)
            throw std::invalid_argument(
                "scenario B fermion: need (kappa+kappa') even and odd couplings to kappa''");
        FermiBogoMap map = compile_trajectory_fermion(cfg, traj, h, copt);
        ModeBasis basis(cfg);
        for (int m : modes)
            if (!basis.is_interior(m))
                throw std::invalid_argument("scenario B: modes must be interior");

        FockStateP psi = transformed_vacuum_second_order_fermion(map, order);
        res.state_norm = psi.norm_series();

        std::vector<Subsystem> keep{{"kappa", Mode::cav(kappa), 2},
                                    {"kappa'", Mode::cav(kappa_p), 2},
                                    {"kappa''", Mode::cav(kappa_pp), 2}};
        res.reduced = reduce_pure_state(psi, keep);
        res.reduced_trace = res.reduced.trace_series();
        res.witness = witness_a4(res.reduced);
        res.w_fidelity = fidelity(res.reduced, canonical_w3(map, kappa, kappa_p, kappa_pp, order));

        res.mode_diagonals["kappa"] = mode_diagonal(res.reduced, 0);
        res.mode_diagonals["kappa'"] = mode_diagonal(res.reduced, 1);
        res.mode_diagonals["kappa''"] = mode_diagonal(res.reduced, 2);
    }
    return res;
}

ScanResult resonance_scan(const CavityConfig& cfg, double h, int blocks,
                          const std::vector<std::pair<int, int>>& pairs, double u_min,
                          double u_max, int steps, const ScenarioOptions& opt) {
    cfg.validate();
    if (cfg.field != FieldKind::scalar_massless)
        throw std::invalid_argument("resonance_scan: scalar cavities only");
    if (steps < 1) throw std::invalid_argument("resonance_scan: steps must be >= 1");
    if (!(u_max > u_min && u_min >= 0.0))
        throw std::invalid_argument("resonance_scan: need 0 <= u_min < u_max");
    ModeBasis basis(cfg);
    for (const auto& [m, n] : pairs)
        if (!basis.is_interior(m) || !basis.is_interior(n))
            throw std::invalid_argument("resonance_scan: pair modes must be interior");

    ScanResult out;
    out.pairs = pairs;
    out.blocks = blocks;
    out.h = h;
    out.u.resize(steps);
    // uniform grid on (u_min, u_max]
    for (int j = 0; j < steps; ++j) out.u[j] = u_min + (u_max - u_min) * double(j + 1) / steps;
    out.values.assign(pairs.size(), std::vector<double>(steps, 0.0));

    {
        Trajectory probe = Trajectory::scan_blocks(blocks, tau_for_u(h, out.u[0], cfg.delta), h);
        regime_guard(probe, h, opt);
    }

    auto eval_point = [&](int j) {
        double tau = tau_for_u(h, out.u[j], cfg.delta);
        Trajectory traj = Trajectory::scan_blocks(blocks, tau, h);
        CompileOptions copt;
        copt.conjugate_convention = opt.conjugate_convention;
        PerturbBogoMap map = compile_trajectory_boson(cfg, traj, h, copt);
        for (size_t p = 0; p < pairs.size(); ++p)
            out.values[p][j] = std::abs(map.b1(pairs[p].first, pairs[p].second));
    };

    int workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<void>> futures;
    for (int w = 0; w < workers; ++w)
        futures.push_back(std::async(std::launch::async, [&, w] {
            for (int j = w; j < steps; j += workers) eval_point(j);
        }));
    for (auto& f : futures) f.get();

    for (const auto& [m, n] : pairs) {
        std::vector<double> res;
        for (int j = 1;; ++j) {
            double u = double(j) / double(m + n);
            if (u > u_max) break;
            if (u > u_min) res.push_back(u);
        }
        out.predicted.push_back(res);
    }
    return out;
}

std::vector<int> local_maxima(const std::vector<double>& y, double floor_fraction) {
    std::vector<int> idx;
    if (y.size() < 3) return idx;
    double top = *std::max_element(y.begin(), y.end());
    double floor = floor_fraction * top;
    for (size_t j = 1; j + 1 < y.size(); ++j)
        if (y[j] > floor && y[j] > y[j - 1] && y[j] >= y[j + 1]) idx.push_back(int(j));
    return idx;
}

}  // namespace cavity
