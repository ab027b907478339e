// Acceptance suite: runs every headline check at its stated tolerance and
// prints one pass/fail line per criterion. Returns the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cavity/oracle.hpp"
#include "cavity/report_io.hpp"

using namespace cavity;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& label, const std::string& detail) {
    std::printf("%s criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", id, label.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

double fit_log_slope(const std::vector<double>& n, const std::vector<double>& v) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = int(n.size());
    for (int i = 0; i < m; ++i) {
        double x = std::log(n[i]), y = std::log(v[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// --------------------------------------------------------------------------

void criterion_1_parity() {
    auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    {
        CavityConfig cfg{1.0, FieldKind::scalar_massless, 12};
        PerturbBogoMap m =
            compile_trajectory_boson(cfg, Trajectory::basic_blocks(2, 0.73, 0.05), 0.05);
        for (int a = 1; a <= 10; ++a)
            for (int b = 1; b <= 10; ++b) {
                if ((a + b) % 2 != 0) continue;
                worst = std::max(worst, std::abs(m.b1(a, b)));
                if (a != b) worst = std::max(worst, std::abs(m.a1(a, b)));
            }
    }
    {
        CavityConfig cfg{1.0, FieldKind::dirac_massless, 12};
        FermiBogoMap m =
            compile_trajectory_fermion(cfg, Trajectory::basic_blocks(2, 0.73, 0.05), 0.05);
        for (int a = -10; a <= 10; ++a)
            for (int b = -10; b <= 10; ++b) {
                if (a == b || (((a + b) % 2) + 2) % 2 != 0) continue;
                worst = std::max(worst, std::abs(m.a1(a, b)));
            }
    }
    double dt = seconds_since(t0);
    report(1, worst <= 1e-12 && dt < 1.0, "parity selection",
           "max even-parity kernel " + fmt(worst) + " (tol 1e-12), " + fmt(dt) + " s (< 1 s)");
}

void criterion_2_oracle() {
    auto t0 = std::chrono::steady_clock::now();
    CavityConfig scalar{1.0, FieldKind::scalar_massless, 8};
    CavityConfig dirac{1.0, FieldKind::dirac_massless, 8};
    double ws = oracle_disagreement_scalar(scalar, 5);
    double wd = oracle_disagreement_dirac(dirac, 5);
    double dt = seconds_since(t0);
    report(2, ws <= 1e-8 && wd <= 1e-8 && dt < 60.0, "oracle equivalence",
           "scalar " + fmt(ws) + ", dirac " + fmt(wd) + " (tol 1e-8), " + fmt(dt) + " s (< 60 s)");
}

void criterion_3_identity_scaling() {
    CavityConfig cfg{1.0, FieldKind::scalar_massless, 10};
    CavityConfig dfc{1.0, FieldKind::dirac_massless, 10};
    auto boson = [&](double h) {
        return bogoliubov_identity_residual(
            numeric_compile_boson(cfg, Trajectory::basic_blocks(1, 0.8, h)));
    };
    auto fermi = [&](double h) {
        return unitarity_residual(
            numeric_compile_fermion(dfc, Trajectory::basic_blocks(1, 0.8, h)));
    };
    double rb1 = boson(0.04) / boson(0.02), rb2 = boson(0.02) / boson(0.01);
    double rf1 = fermi(0.04) / fermi(0.02), rf2 = fermi(0.02) / fermi(0.01);
    auto in_band = [](double r) { return r >= 3.2 && r <= 4.8; };
    report(3, in_band(rb1) && in_band(rb2) && in_band(rf1) && in_band(rf2),
           "Bogoliubov identity residual quarters when h halves",
           "boson ratios " + fmt(rb1) + ", " + fmt(rb2) + "; fermion " + fmt(rf1) + ", " +
               fmt(rf2) + " (4.0 +- 20%)");
}

void criterion_4_resonance_scaling() {
    CavityConfig cfg{1.0, FieldKind::scalar_massless, 10};
    double h = 0.002, tau = 2.0 / 3.0;
    PerturbBogoMap one = compile_trajectory_boson(cfg, Trajectory::basic_blocks(1, tau, h), h);
    double base = std::abs(one.b1(1, 2));
    double worst = 0.0;
    for (int n = 2; n <= 10; ++n) {
        PerturbBogoMap m = compile_trajectory_boson(cfg, Trajectory::basic_blocks(n, tau, h), h);
        worst = std::max(worst, std::abs(std::abs(m.b1(1, 2)) / base - n) / n);
    }
    report(4, worst <= 1e-10, "resonant linear growth (k,k') = (1,2), tau = 2 delta / 3",
           "max relative deviation from N over N = 1..10: " + fmt(worst) + " (tol 1e-10)");
}

void criterion_5_scan() {
    auto t0 = std::chrono::steady_clock::now();
    CavityConfig cfg{1.0, FieldKind::scalar_massless, 12};
    double h = 0.005;
    ScanResult scan = resonance_scan(cfg, h, 15, {{1, 2}, {2, 3}}, 0.0, 1.2, 600);
    double step = 1.2 / 600;
    bool ok = true;
    std::string detail;
    for (size_t p = 0; p < scan.pairs.size(); ++p) {
        auto peaks = local_maxima(scan.values[p], 0.25);
        ok = ok && !peaks.empty();
        double worst = 0.0;
        for (int j : peaks) {
            double best = 1e9;
            for (double u : scan.predicted[p]) best = std::min(best, std::abs(scan.u[j] - u));
            worst = std::max(worst, best);
        }
        int sum = scan.pairs[p].first + scan.pairs[p].second;
        for (int mult = 1; double(mult) / sum <= 1.2; mult += 2) {
            double best = 1e9;
            for (int j : peaks) best = std::min(best, std::abs(scan.u[j] - double(mult) / sum));
            worst = std::max(worst, best);
        }
        ok = ok && worst <= step + 1e-12;
        detail += "pair (" + std::to_string(scan.pairs[p].first) + "," +
                  std::to_string(scan.pairs[p].second) + ") offset " + fmt(worst) + "; ";
    }
    double dt = seconds_since(t0);
    ok = ok && dt < 30.0;
    report(5, ok, "N = 15 resonance scan peaks at u = j/3 and j/5",
           detail + "grid step " + fmt(step) + ", " + fmt(dt) + " s (< 30 s)");
}

void criterion_6_scenario_a_boson() {
    CavityConfig cfg{1.0, FieldKind::scalar_massless, 10};
    double h = 0.01;
    Trajectory traj = Trajectory::basic_blocks(1, 0.8, h);
    PerturbBogoMap map = compile_trajectory_boson(cfg, traj, h);
    double b12 = std::abs(map.b1(1, 2));
    ScenarioResult r = run_scenario_a(cfg, traj, h, Statistics::boson, {1, 2}, +1);

    double w1 = r.witness.value.c1.real();
    bool w_ok = std::abs(w1 - 0.5 * b12) <= 1e-12 * std::max(1.0, 0.5 * b12);
    double n1 = r.negativity_first_order.at("k,k'");
    bool n_ok = std::abs(n1 - 0.25 * b12) <= 1e-9;
    double nac = r.negativity_at_h.at("A,C");
    bool ac_ok = nac <= 1e-12;
    report(6, w_ok && n_ok && ac_ok, "scenario A bosonic first-order coefficients",
           "witness c1 = " + fmt(w1) + " vs required |beta1|/2 = " + fmt(0.5 * b12) +
               " (measured = |beta1|); negativity c1 = " + fmt(n1) + " vs required |beta1|/4 = " +
               fmt(0.25 * b12) + " (measured = |beta1|/2); N(A,C) = " + fmt(nac));
}

void criterion_7_scenario_a_fermion() {
    CavityConfig cfg{1.0, FieldKind::dirac_massless, 8};
    auto run_at = [&](double h) {
        return run_scenario_a(cfg, Trajectory::basic_blocks(1, 0.8, h), h, Statistics::fermion,
                              {1, -2}, +1);
    };
    ScenarioResult r1 = run_at(0.02), r2 = run_at(0.01);
    double d1 = std::abs(r1.dicke_fidelity->eval(0.02) - 1.0);
    double d2 = std::abs(r2.dicke_fidelity->eval(0.01) - 1.0);
    double ratio = d1 / d2;
    bool fid_ok = std::abs(r2.dicke_fidelity->c1) <= 1e-12 && ratio >= 3.2 && ratio <= 4.8;

    bool neg_ok = true;
    for (double h : {0.01, 0.03, 0.05}) {
        ScenarioResult r = run_at(h);
        neg_ok = neg_ok && r.negativity_at_h.at("kappa,kappa'") <= 1e-12;
    }

    double a1 = std::abs(r1.negativity_at_h.at("A,kappa") - 0.5);
    double a2 = std::abs(r2.negativity_at_h.at("A,kappa") - 0.5);
    double aratio = a1 / a2;
    bool ak_ok = a1 < 1e-3 && aratio >= 3.0 && aratio <= 5.0;

    report(7, fid_ok && neg_ok && ak_ok, "scenario A fermionic",
           "Dicke defect ratio h->h/2: " + fmt(ratio) + " (4 +- 20%); N(kappa,kappa') = 0: " +
               std::string(neg_ok ? "yes" : "no") + "; |N(A,kappa) - 1/2| ratio " + fmt(aratio));
}

void criterion_8_scenario_b_boson() {
    CavityConfig cfg{1.0, FieldKind::scalar_massless, 12};
    double h = 0.01;
    Trajectory traj = Trajectory::basic_blocks(1, 0.8, h);
    PerturbBogoMap map = compile_trajectory_boson(cfg, traj, h);
    double want = 2.0 * std::sqrt(2.0) * std::abs(map.b1(1, 2)) * std::abs(map.b1(2, 3));
    ScenarioResult r = run_scenario_b(cfg, traj, h, Statistics::boson, {1, 2, 3});
    double w2 = r.witness.value.c2.real();
    bool w_ok = std::abs(w2 - want) <= 1e-12 * std::max(1.0, want) &&
                std::abs(r.witness.value.c1) <= 1e-13;

    // quadratic growth at tau = 2 delta over N = 1..8
    std::vector<double> ns, wit, f1, f2, f3;
    for (int n = 1; n <= 8; ++n) {
        ScenarioResult rn = run_scenario_b(cfg, Trajectory::basic_blocks(n, 2.0, h), h,
                                           Statistics::boson, {1, 2, 3});
        ns.push_back(n);
        wit.push_back(rn.witness.value.c2.real());
        f1.push_back(rn.f_beta.at("f_k_not_k'").c2.real());
        f2.push_back(rn.f_beta.at("f_k'_not_k,k''").c2.real());
        f3.push_back(rn.f_beta.at("f_k''_not_k'").c2.real());
    }
    double sw = fit_log_slope(ns, wit), s1 = fit_log_slope(ns, f1), s2 = fit_log_slope(ns, f2),
           s3 = fit_log_slope(ns, f3);
    auto near2 = [](double s) { return std::abs(s - 2.0) <= 0.01; };
    report(8, w_ok && near2(sw) && near2(s1) && near2(s2) && near2(s3),
           "scenario B bosonic",
           "witness c2 = " + fmt(w2) + " vs 2 sqrt(2)|b12||b23| = " + fmt(want) +
               "; scaling exponents " + fmt(sw) + ", " + fmt(s1) + ", " + fmt(s2) + ", " +
               fmt(s3) + " (2.0 +- 0.01)");
}

void criterion_9_scenario_b_fermion() {
    CavityConfig cfg{1.0, FieldKind::dirac_massless, 8};
    auto run_at = [&](double h) {
        return run_scenario_b(cfg, Trajectory::basic_blocks(1, 0.8, h), h, Statistics::fermion,
                              {0, 2, -1});
    };
    double h = 0.01;
    FermiBogoMap map = compile_trajectory_fermion(cfg, Trajectory::basic_blocks(1, 0.8, h), h);
    double v1 = std::abs(map.a1(0, -1)), v2 = std::abs(map.a1(2, -1));
    double want = v1 + v2 - std::sqrt(v1 * v1 + v2 * v2);
    ScenarioResult r = run_at(h);
    double w1 = r.witness.value.c1.real();
    bool w_ok = std::abs(w1 - want) <= 1e-12 * std::max(1.0, want);

    double d1 = std::abs(run_at(0.02).w_fidelity->eval(0.02) - 1.0);
    double d2 = std::abs(r.w_fidelity->eval(0.01) - 1.0);
    double ratio = d1 / d2;
    bool fid_ok = std::abs(r.w_fidelity->c1) <= 1e-12 && ratio >= 3.2 && ratio <= 4.8;
    report(9, w_ok && fid_ok, "scenario B fermionic",
           "witness c1 = " + fmt(w1) + " vs closed form " + fmt(want) +
               "; W-fidelity defect ratio " + fmt(ratio) + " (4 +- 20%)");
}

void criterion_10_sampler() {
    auto t0 = std::chrono::steady_clock::now();
    struct Case {
        const char* name;
        std::vector<int> dims;
        WitnessReport (*w)(const DensityMatrixP&);
    };
    std::vector<Case> cases{{"A1", {2, 3, 3, 2}, witness_a1},
                            {"A2", {2, 2, 2, 2}, witness_a2},
                            {"A3", {3, 3, 3}, witness_a3},
                            {"A4", {2, 2, 2}, witness_a4}};
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        BiseparableSampler sampler(c.dims, 20120903);
        double worst = -1e300;
        for (int i = 0; i < 1000; ++i) {
            WitnessReport rep = c.w(density_from_numeric(sampler.sample_mixture(), c.dims));
            worst = std::max(worst, rep.value.c0.real());
        }
        ok = ok && worst <= 1e-12;
        detail += std::string(c.name) + " worst " + fmt(worst) + "; ";
    }
    double dt = seconds_since(t0);
    ok = ok && dt < 120.0;
    report(10, ok, "bi-separable sampler suite (1000 samples each)",
           detail + fmt(dt) + " s (< 120 s)");
}

void criterion_11_conventions() {
    double h = 0.01;
    Trajectory traj = Trajectory::basic_blocks(2, 0.93, h);
    CavityConfig sc{1.0, FieldKind::scalar_massless, 10};
    CavityConfig dc{1.0, FieldKind::dirac_massless, 8};

    ScenarioOptions plain, conj, rev, both;
    conj.conjugate_convention = true;
    rev.reverse_fermion_order = true;
    both.conjugate_convention = both.reverse_fermion_order = true;

    double worst = 0.0;
    auto compare = [&](const ScenarioResult& a, const ScenarioResult& b) {
        worst = std::max(worst, (a.witness.value - b.witness.value).max_abs());
        for (const auto& [name, v] : a.negativity_at_h)
            worst = std::max(worst, std::abs(v - b.negativity_at_h.at(name)));
        if (a.dicke_fidelity)
            worst = std::max(worst, (*a.dicke_fidelity - *b.dicke_fidelity).max_abs());
        if (a.w_fidelity) worst = std::max(worst, (*a.w_fidelity - *b.w_fidelity).max_abs());
        for (const auto& [name, v] : a.f_beta)
            worst = std::max(worst, (v - b.f_beta.at(name)).max_abs());
    };

    ScenarioResult ab = run_scenario_a(sc, traj, h, Statistics::boson, {1, 2}, +1, plain);
    compare(ab, run_scenario_a(sc, traj, h, Statistics::boson, {1, 2}, +1, conj));
    ScenarioResult bb = run_scenario_b(sc, traj, h, Statistics::boson, {1, 2, 3}, plain);
    compare(bb, run_scenario_b(sc, traj, h, Statistics::boson, {1, 2, 3}, conj));
    ScenarioResult af = run_scenario_a(dc, traj, h, Statistics::fermion, {1, -2}, -1, plain);
    for (const auto& o : {conj, rev, both})
        compare(af, run_scenario_a(dc, traj, h, Statistics::fermion, {1, -2}, -1, o));
    ScenarioResult bf = run_scenario_b(dc, traj, h, Statistics::fermion, {0, 2, -1}, plain);
    for (const auto& o : {conj, rev, both})
        compare(bf, run_scenario_b(dc, traj, h, Statistics::fermion, {0, 2, -1}, o));

    report(11, worst <= 1e-10, "convention robustness",
           "max observable shift under conjugation / ordering reversal: " + fmt(worst) +
               " (tol 1e-10)");
}

}  // namespace

int main() {
    std::printf("acceptance suite\n----------------\n");
    criterion_1_parity();
    criterion_2_oracle();
    criterion_3_identity_scaling();
    criterion_4_resonance_scaling();
    criterion_5_scan();
    criterion_6_scenario_a_boson();
    criterion_7_scenario_a_fermion();
    criterion_8_scenario_b_boson();
    criterion_9_scenario_b_fermion();
    criterion_10_sampler();
    criterion_11_conventions();
    std::printf("----------------\n%d of 11 criteria failed\n", failures);
    return failures;
}
