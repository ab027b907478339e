#include "cavity/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace cavity {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json series_json(const OrderSeries& s) {
    return json{{"c0", {s.c0.real(), s.c0.imag()}},
                {"c1", {s.c1.real(), s.c1.imag()}},
                {"c2", {s.c2.real(), s.c2.imag()}}};
}

OrderSeries series_from_json(const nlohmann::json& j) {
    auto c = [&](const char* k) {
        return cplx(j.at(k).at(0).get<double>(), j.at(k).at(1).get<double>());
    };
    return {c("c0"), c("c1"), c("c2")};
}

json witness_json(const WitnessReport& w) {
    json el = json::object();
    for (const auto& [name, v] : w.elements) el[name] = series_json(v);
    return json{{"value", series_json(w.value)},
                {"violated", w.violated},
                {"inconclusive", w.inconclusive},
                {"leading_order", w.leading_order},
                {"elements", el}};
}

namespace {

json density_json(const DensityMatrixP& rho) {
    json spaces = json::array();
    for (const auto& s : rho.spaces) spaces.push_back(json{{"name", s.name}, {"dim", s.dim}});
    json entries = json::array();
    for (const auto& [key, v] : rho.entries) {
        entries.push_back(json{{"bra", key.first}, {"ket", key.second}, {"value", series_json(v)}});
    }
    return json{{"spaces", spaces}, {"entries", entries}};
}

}  // namespace

json scenario_json(const ScenarioResult& r) {
    json j;
    j["scenario"] = r.scenario;
    j["statistics"] = to_string(r.statistics);
    j["modes"] = r.modes;
    j["h"] = r.h;
    if (r.scenario == "A") j["sign"] = r.sign;
    j["regime_warning"] = r.regime_warning;
    j["witness"] = witness_json(r.witness);
    if (r.witness_strict) j["witness_strict"] = witness_json(*r.witness_strict);
    json neg = json::object(), neg1 = json::object();
    for (const auto& [name, v] : r.negativity_at_h) neg[name] = v;
    for (const auto& [name, v] : r.negativity_first_order) neg1[name] = v;
    j["negativity"] = neg;
    j["negativity_first_order"] = neg1;
    if (r.dicke_fidelity) j["dicke_fidelity"] = series_json(*r.dicke_fidelity);
    if (r.w_fidelity) j["w_fidelity"] = series_json(*r.w_fidelity);
    if (!r.f_beta.empty()) {
        json f = json::object();
        for (const auto& [name, v] : r.f_beta) f[name] = series_json(v);
        j["f_beta"] = f;
    }
    if (!r.mode_diagonals.empty()) {
        json d = json::object();
        for (const auto& [name, v] : r.mode_diagonals) d[name] = series_json(v);
        j["mode_diagonals"] = d;
    }
    j["state_norm"] = series_json(r.state_norm);
    j["reduced_trace"] = series_json(r.reduced_trace);
    j["reduced_density_matrix"] = density_json(r.reduced);
    return j;
}

Trajectory RunConfig::trajectory() const {
    if (!segments.empty()) {
        Trajectory t{segments};
        t.validate();
        return t;
    }
    if (!(tau > 0.0))
        throw std::invalid_argument("config: needs either trajectory.segments or trajectory.tau");
    return Trajectory::basic_blocks(blocks, tau, h);
}

namespace {

void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::json& j) {
    check_keys(j, {"field", "delta", "n_max", "h", "modes", "sign", "trajectory", "scan", "seed",
                   "allow_large_Nh"},
               "top level");
    RunConfig c;
    if (j.contains("field")) c.cavity.field = field_kind_from_string(j.at("field").get<std::string>());
    if (j.contains("delta")) c.cavity.delta = j.at("delta").get<double>();
    if (j.contains("n_max")) c.cavity.n_max = j.at("n_max").get<int>();
    if (j.contains("h")) c.h = j.at("h").get<double>();
    if (j.contains("modes")) c.modes = j.at("modes").get<std::vector<int>>();
    if (j.contains("sign")) {
        auto s = j.at("sign");
        if (s.is_string())
            c.sign = s.get<std::string>() == "-" ? -1 : +1;
        else
            c.sign = s.get<int>();
    }
    if (j.contains("trajectory")) {
        const auto& t = j.at("trajectory");
        check_keys(t, {"blocks", "tau", "segments"}, "trajectory");
        if (t.contains("blocks")) c.blocks = t.at("blocks").get<int>();
        if (t.contains("tau")) c.tau = t.at("tau").get<double>();
        if (t.contains("segments")) {
            for (const auto& s : t.at("segments")) {
                check_keys(s, {"kind", "duration", "h"}, "trajectory.segments[]");
                std::string kind = s.at("kind").get<std::string>();
                double duration = s.at("duration").get<double>();
                if (kind == "inertial")
                    c.segments.push_back(Segment::inertial(duration));
                else if (kind == "accelerated")
                    c.segments.push_back(Segment::accelerated(duration, s.at("h").get<double>()));
                else
                    throw std::invalid_argument("config: unknown segment kind '" + kind + "'");
            }
        }
    }
    if (j.contains("scan")) {
        const auto& s = j.at("scan");
        check_keys(s, {"blocks", "u_min", "u_max", "steps", "pairs"}, "scan");
        if (s.contains("blocks")) c.scan_blocks = s.at("blocks").get<int>();
        if (s.contains("u_min")) c.u_min = s.at("u_min").get<double>();
        if (s.contains("u_max")) c.u_max = s.at("u_max").get<double>();
        if (s.contains("steps")) c.steps = s.at("steps").get<int>();
        if (s.contains("pairs"))
            for (const auto& p : s.at("pairs"))
                c.pairs.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("allow_large_Nh")) c.allow_large_nh = j.at("allow_large_Nh").get<bool>();
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return run_config_from_json(j);
}

json run_config_json(const RunConfig& c) {
    json j;
    j["field"] = to_string(c.cavity.field);
    j["delta"] = c.cavity.delta;
    j["n_max"] = c.cavity.n_max;
    j["h"] = c.h;
    j["modes"] = c.modes;
    j["sign"] = c.sign;
    json t;
    if (!c.segments.empty()) {
        json segs = json::array();
        for (const auto& s : c.segments) {
            json e{{"kind", s.kind == Segment::Kind::inertial ? "inertial" : "accelerated"},
                   {"duration", s.duration}};
            if (s.kind == Segment::Kind::accelerated) e["h"] = s.h;
            segs.push_back(e);
        }
        t["segments"] = segs;
    } else {
        t["blocks"] = c.blocks;
        t["tau"] = c.tau;
    }
    j["trajectory"] = t;
    j["scan"] = json{{"blocks", c.scan_blocks},
                     {"u_min", c.u_min},
                     {"u_max", c.u_max},
                     {"steps", c.steps}};
    json pairs = json::array();
    for (const auto& [m, n] : c.pairs) pairs.push_back(json::array({m, n}));
    j["scan"]["pairs"] = pairs;
    j["seed"] = c.seed;
    j["allow_large_Nh"] = c.allow_large_nh;
    return j;
}

void write_coeffs_csv(std::ostream& os, const std::vector<CoeffRow>& rows, bool with_oracle) {
    os << (with_oracle ? "m,n,re,im,abs,oracle,disagreement\n" : "m,n,re,im,abs\n");
    for (const auto& r : rows) {
        os << r.m << ',' << r.n << ',' << format_double(r.value.real()) << ','
           << format_double(r.value.imag()) << ',' << format_double(std::abs(r.value));
        if (with_oracle)
            os << ',' << format_double(r.oracle) << ',' << format_double(r.disagreement);
        os << '\n';
    }
}

void write_scan_csv(std::ostream& os, const ScanResult& scan) {
    os << "u";
    for (const auto& [m, n] : scan.pairs) os << ",beta1_" << m << "_" << n;
    os << '\n';
    for (size_t j = 0; j < scan.u.size(); ++j) {
        os << format_double(scan.u[j]);
        for (size_t p = 0; p < scan.pairs.size(); ++p) os << ',' << format_double(scan.values[p][j]);
        os << '\n';
    }
}

namespace {

std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

void write_scan_svg(std::ostream& os, const ScanResult& scan) {
    const double width = 900, height = 560;
    const double ml = 70, mr = 20, mt = 30, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double u_lo = scan.u.empty() ? 0.0 : scan.u.front();
    double u_hi = scan.u.empty() ? 1.0 : scan.u.back();
    if (u_hi <= u_lo) u_hi = u_lo + 1.0;
    double y_hi = 0.0;
    for (const auto& v : scan.values)
        for (double y : v) y_hi = std::max(y_hi, y);
    if (y_hi <= 0.0) y_hi = 1.0;
    y_hi *= 1.05;

    auto X = [&](double u) { return ml + pw * (u - u_lo) / (u_hi - u_lo); };
    auto Y = [&](double y) { return mt + ph * (1.0 - y / y_hi); };

    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    // predicted resonances as dashed vertical markers
    for (size_t p = 0; p < scan.predicted.size(); ++p)
        for (double u : scan.predicted[p])
            os << "<line x1=\"" << svg_num(X(u)) << "\" y1=\"" << svg_num(mt) << "\" x2=\""
               << svg_num(X(u)) << "\" y2=\"" << svg_num(mt + ph)
               << "\" stroke=\"#999999\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>\n";

    // axes
    os << "<line x1=\"" << svg_num(ml) << "\" y1=\"" << svg_num(mt + ph) << "\" x2=\""
       << svg_num(ml + pw) << "\" y2=\"" << svg_num(mt + ph)
       << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    os << "<line x1=\"" << svg_num(ml) << "\" y1=\"" << svg_num(mt) << "\" x2=\"" << svg_num(ml)
       << "\" y2=\"" << svg_num(mt + ph) << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    for (int t = 0; t <= 6; ++t) {
        double u = u_lo + (u_hi - u_lo) * t / 6.0;
        os << "<line x1=\"" << svg_num(X(u)) << "\" y1=\"" << svg_num(mt + ph) << "\" x2=\""
           << svg_num(X(u)) << "\" y2=\"" << svg_num(mt + ph + 6)
           << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << svg_num(X(u)) << "\" y=\"" << svg_num(mt + ph + 22)
           << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
           << svg_num(u) << "</text>\n";
        double y = y_hi * t / 6.0;
        os << "<line x1=\"" << svg_num(ml - 6) << "\" y1=\"" << svg_num(Y(y)) << "\" x2=\""
           << svg_num(ml) << "\" y2=\"" << svg_num(Y(y))
           << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << svg_num(ml - 10) << "\" y=\"" << svg_num(Y(y) + 4)
           << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" << svg_num(y)
           << "</text>\n";
    }
    os << "<text x=\"" << svg_num(ml + pw / 2) << "\" y=\"" << svg_num(height - 12)
       << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">u</text>\n";
    os << "<text x=\"18\" y=\"" << svg_num(mt + ph / 2)
       << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
          "transform=\"rotate(-90 18 "
       << svg_num(mt + ph / 2) << ")\">|beta1| per unit h</text>\n";

    for (size_t p = 0; p < scan.pairs.size(); ++p) {
        os << "<polyline fill=\"none\" stroke=\"" << colors[p % 4]
           << "\" stroke-width=\"1.5\" points=\"";
        for (size_t j = 0; j < scan.u.size(); ++j) {
            if (j) os << ' ';
            os << svg_num(X(scan.u[j])) << ',' << svg_num(Y(scan.values[p][j]));
        }
        os << "\"/>\n";
        os << "<text x=\"" << svg_num(ml + 10) << "\" y=\"" << svg_num(mt + 16 + 16 * p)
           << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << colors[p % 4]
           << "\">beta1_" << scan.pairs[p].first << "_" << scan.pairs[p].second << " (N="
           << scan.blocks << ")</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace cavity
