// Command-line front end: compiled Bogoliubov coefficients, the two
// entanglement scenarios and the resonance scan, with CSV/JSON/SVG export.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "cavity/oracle.hpp"
#include "cavity/report_io.hpp"

namespace {

using namespace cavity;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRegime = 2;
constexpr int kExitOracle = 3;
constexpr double kOracleTol = 1e-8;

struct CommonFlags {
    std::string config_path;
    double h = -1.0;
    int n_max = -1;
    std::string field;
    int blocks = -1;
    double tau = -1.0;
    std::vector<std::string> pair_specs;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool allow_large_nh = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->set_help_flag("--help", "print this help message and exit");
    cmd->add_option("--config", f.config_path, "JSON configuration file");
    cmd->add_option("--h", f.h, "acceleration parameter override");
    cmd->add_option("--n-max", f.n_max, "mode truncation override");
    cmd->add_option("--field", f.field, "field kind override (scalar_massless|dirac_massless)");
    cmd->add_option("--blocks", f.blocks, "number of travel blocks override");
    cmd->add_option("--tau", f.tau, "block proper time override");
    cmd->add_option("--pair", f.pair_specs, "mode pair m,n (repeatable)")->delimiter(';');
    cmd->add_flag("--allow-large-Nh", f.allow_large_nh,
                  "override the perturbative-regime guard (reported as a warning)");
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&f](const std::uint64_t& v) { f.seed = v; f.seed_set = true; },
        "deterministic sampler seed override");
}

RunConfig resolve_config(const CommonFlags& f) {
    RunConfig c;
    if (!f.config_path.empty()) c = load_run_config(f.config_path);
    if (f.h >= 0.0) c.h = f.h;
    if (f.n_max > 0) c.cavity.n_max = f.n_max;
    if (!f.field.empty()) c.cavity.field = field_kind_from_string(f.field);
    if (f.blocks > 0) {
        c.blocks = f.blocks;
        c.scan_blocks = f.blocks;
    }
    if (f.tau > 0.0) {
        c.tau = f.tau;
        c.segments.clear();
    }
    if (f.seed_set) c.seed = f.seed;
    if (f.allow_large_nh) c.allow_large_nh = true;
    for (const auto& spec : f.pair_specs) {
        auto comma = spec.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("--pair expects m,n (got '" + spec + "')");
        c.pairs.push_back({std::stoi(spec.substr(0, comma)), std::stoi(spec.substr(comma + 1))});
    }
    return c;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file " + path);
    out << text;
}

int cmd_coeffs(const CommonFlags& flags, const std::string& matrix, int max_label,
               bool with_oracle, const std::string& out_path) {
    RunConfig cfg = resolve_config(flags);
    cfg.cavity.validate();
    bool dirac = cfg.cavity.field == FieldKind::dirac_massless;
    std::string which = matrix;
    if (which.empty()) which = dirac ? "a1" : "beta1";

    // with a trajectory in the config the compiled kernels are emitted;
    // otherwise the single-switch ones (the only case the oracle covers)
    bool compiled = cfg.tau > 0.0 || !cfg.segments.empty();
    if (with_oracle && compiled)
        throw std::invalid_argument("coeffs: --oracle applies to the single-switch kernels only");

    int bound = max_label > 0 ? std::min(max_label, cfg.cavity.n_max) : cfg.cavity.n_max;
    std::vector<CoeffRow> rows;
    double worst = 0.0;
    auto push = [&](int m, int n, cplx value, double oracle_value) {
        CoeffRow r;
        r.m = m;
        r.n = n;
        r.value = value;
        if (with_oracle) {
            r.has_oracle = true;
            r.oracle = oracle_value;
            r.disagreement = std::abs(value - cplx(oracle_value));
            worst = std::max(worst, r.disagreement);
        }
        rows.push_back(r);
    };

    if (dirac) {
        if (which != "a1") throw std::invalid_argument("coeffs: Dirac cavities expose matrix a1");
        std::optional<FermiBogoMap> map;
        if (compiled)
            map = compile_trajectory_fermion(cfg.cavity, cfg.trajectory(), cfg.h);
        for (int m = -bound; m <= bound; ++m)
            for (int n = -bound; n <= bound; ++n) {
                double oracle = 0.0;
                if (with_oracle && m != n) oracle = oracle_dirac_a1(cfg.cavity, m, n).value;
                cplx value = map ? map->a1(m, n) : cplx(dirac_a1_switch(m, n));
                push(m, n, value, oracle);
            }
    } else {
        if (which != "alpha1" && which != "beta1")
            throw std::invalid_argument("coeffs: scalar cavities expose alpha1 or beta1");
        std::optional<PerturbBogoMap> map;
        if (compiled)
            map = compile_trajectory_boson(cfg.cavity, cfg.trajectory(), cfg.h);
        for (int m = 1; m <= bound; ++m)
            for (int n = 1; n <= bound; ++n) {
                cplx value;
                if (map)
                    value = which == "beta1" ? map->b1(m, n) : map->a1(m, n);
                else
                    value = which == "beta1" ? scalar_beta1_switch(m, n)
                                             : scalar_alpha1_switch(m, n);
                double oracle = 0.0;
                if (with_oracle) {
                    if (which == "beta1")
                        oracle = oracle_scalar_beta1(cfg.cavity, m, n).value;
                    else if (m != n)
                        oracle = oracle_scalar_alpha1(cfg.cavity, m, n).value;
                }
                push(m, n, value, oracle);
            }
    }

    std::ostringstream os;
    write_coeffs_csv(os, rows, with_oracle);
    write_text(out_path, os.str());
    if (with_oracle && worst > kOracleTol) {
        std::cerr << "oracle disagreement " << format_double(worst) << " exceeds "
                  << format_double(kOracleTol) << "\n";
        return kExitOracle;
    }
    return kExitOk;
}

int cmd_scenario(const CommonFlags& flags, const std::string& which, const std::string& out_path,
                 const std::vector<int>& mode_override, const std::string& sign_flag) {
    RunConfig cfg = resolve_config(flags);
    if (!mode_override.empty()) cfg.modes = mode_override;
    if (!sign_flag.empty()) cfg.sign = sign_flag == "-" ? -1 : +1;
    cfg.cavity.validate();

    Statistics stats = cfg.cavity.field == FieldKind::scalar_massless ? Statistics::boson
                                                                      : Statistics::fermion;
    ScenarioOptions opt;
    opt.allow_large_Nh = cfg.allow_large_nh;

    ScenarioResult res;
    if (which == "a")
        res = run_scenario_a(cfg.cavity, cfg.trajectory(), cfg.h, stats, cfg.modes, cfg.sign, opt);
    else
        res = run_scenario_b(cfg.cavity, cfg.trajectory(), cfg.h, stats, cfg.modes, opt);

    json j = scenario_json(res);
    j["config"] = run_config_json(cfg);
    write_text(out_path, j.dump(2) + "\n");
    return kExitOk;
}

int cmd_resonance_scan(const CommonFlags& flags, const std::string& csv_path,
                       const std::string& svg_path, int steps_flag, double u_max_flag) {
    RunConfig cfg = resolve_config(flags);
    cfg.cavity.validate();
    if (cfg.pairs.empty()) cfg.pairs = {{1, 2}, {2, 3}};
    if (steps_flag > 0) cfg.steps = steps_flag;
    if (u_max_flag > 0.0) cfg.u_max = u_max_flag;

    ScenarioOptions opt;
    opt.allow_large_Nh = cfg.allow_large_nh;
    ScanResult scan = resonance_scan(cfg.cavity, cfg.h, cfg.scan_blocks, cfg.pairs, cfg.u_min,
                                     cfg.u_max, cfg.steps, opt);

    std::ostringstream csv;
    write_scan_csv(csv, scan);
    write_text(csv_path, csv.str());
    if (!svg_path.empty()) {
        std::ostringstream svg;
        write_scan_svg(svg, scan);
        write_text(svg_path, svg.str());
    }
    return kExitOk;
}

int cmd_oracle_check(const CommonFlags& flags, int max_label) {
    RunConfig cfg = resolve_config(flags);
    CavityConfig scalar = cfg.cavity, dirac = cfg.cavity;
    scalar.field = FieldKind::scalar_massless;
    dirac.field = FieldKind::dirac_massless;
    double ws = oracle_disagreement_scalar(scalar, max_label);
    double wd = oracle_disagreement_dirac(dirac, max_label);
    std::cout << "scalar max |closed form - oracle| = " << format_double(ws) << "\n";
    std::cout << "dirac  max |closed form - oracle| = " << format_double(wd) << "\n";
    if (std::max(ws, wd) > kOracleTol) {
        std::cerr << "oracle disagreement exceeds " << format_double(kOracleTol) << "\n";
        return kExitOracle;
    }
    std::cout << "oracle agreement within " << format_double(kOracleTol) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moving-cavity Bogoliubov pipeline: coefficients, entanglement scenarios "
                 "and resonance scans"};
    app.set_help_flag("--help", "print this help message and exit");
    app.require_subcommand(1);

    CommonFlags flags;

    auto* coeffs = app.add_subcommand("coeffs", "emit first-order kernels as CSV");
    std::string matrix, coeffs_out;
    int max_label = 0;
    bool with_oracle = false;
    add_common(coeffs, flags);
    coeffs->add_option("--matrix", matrix, "alpha1|beta1 (scalar) or a1 (dirac)");
    coeffs->add_option("--max-label", max_label, "largest |mode label| to emit");
    coeffs->add_flag("--oracle", with_oracle, "append quadrature-oracle column");
    coeffs->add_option("--out", coeffs_out, "output CSV path (default stdout)");

    auto* sa = app.add_subcommand("scenario-a", "three-cavity scenario report (JSON)");
    auto* sb = app.add_subcommand("scenario-b", "single-cavity scenario report (JSON)");
    std::string sa_out, sb_out, sign_flag;
    std::vector<int> sa_modes, sb_modes;
    add_common(sa, flags);
    add_common(sb, flags);
    sa->add_option("--modes", sa_modes, "mode labels k,k'")->delimiter(',');
    sa->add_option("--sign", sign_flag, "initial-state sign + or -");
    sa->add_option("--out", sa_out, "output JSON path (default stdout)");
    sb->add_option("--modes", sb_modes, "mode labels k,k',k''")->delimiter(',');
    sb->add_option("--out", sb_out, "output JSON path (default stdout)");

    auto* scan = app.add_subcommand("resonance-scan", "sweep |beta1| over the block time u");
    std::string scan_csv, scan_svg;
    int steps_flag = 0;
    double u_max_flag = 0.0;
    add_common(scan, flags);
    scan->add_option("--csv", scan_csv, "output CSV path (default stdout)");
    scan->add_option("--svg", scan_svg, "output SVG path (optional)");
    scan->add_option("--steps", steps_flag, "grid points override");
    scan->add_option("--u-max", u_max_flag, "grid upper bound override");

    auto* check = app.add_subcommand("oracle-check",
                                     "closed-form kernels vs the quadrature oracle");
    int check_max = 5;
    add_common(check, flags);
    check->add_option("--max-label", check_max, "largest |mode label| to check");

    CLI11_PARSE(app, argc, argv);

    try {
        if (coeffs->parsed()) return cmd_coeffs(flags, matrix, max_label, with_oracle, coeffs_out);
        if (sa->parsed()) return cmd_scenario(flags, "a", sa_out, sa_modes, sign_flag);
        if (sb->parsed()) return cmd_scenario(flags, "b", sb_out, sb_modes, "");
        if (scan->parsed()) return cmd_resonance_scan(flags, scan_csv, scan_svg, steps_flag,
                                                      u_max_flag);
        if (check->parsed()) return cmd_oracle_check(flags, check_max);
    } catch (const cavity::RegimeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRegime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
