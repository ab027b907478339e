#pragma once

#include <json.hpp>
#include <ostream>

#include "cavity/scenarios.hpp"

namespace cavity {

using json = nlohmann::ordered_json;

std::string format_double(double v);  // 17 significant digits, locale free

json series_json(const OrderSeries& s);
OrderSeries series_from_json(const nlohmann::json& j);

json witness_json(const WitnessReport& w);
json scenario_json(const ScenarioResult& r);

/// Run configuration: one JSON file plus flag overrides. Unknown keys are
/// rejected.
struct RunConfig {
    CavityConfig cavity;
    double h = 0.01;
    std::vector<int> modes;
    int sign = +1;

    int blocks = 1;
    double tau = 0.0;                ///< block proper time; 0 = not set
    std::vector<Segment> segments;   ///< explicit trajectory, overrides blocks/tau

    int scan_blocks = 15;
    double u_min = 0.0;
    double u_max = 1.2;
    int steps = 600;
    std::vector<std::pair<int, int>> pairs;

    std::uint64_t seed = 20120903;
    bool allow_large_nh = false;

    Trajectory trajectory() const;
};

RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
json run_config_json(const RunConfig& c);

struct CoeffRow {
    int m, n;
    cplx value;
    /// oracle first-order value and |closed form - oracle|, present with --oracle
    bool has_oracle = false;
    double oracle = 0.0;
    double disagreement = 0.0;
};

/// Header "m,n,re,im,abs", extended by ",oracle,disagreement" when the oracle
/// column is requested.
void write_coeffs_csv(std::ostream& os, const std::vector<CoeffRow>& rows, bool with_oracle);

/// Header "u,beta1_<m>_<n>,..." with one row per grid point.
void write_scan_csv(std::ostream& os, const ScanResult& scan);

/// Minimal self-contained line plot: axes, one polyline per pair, dashed
/// vertical markers at the predicted resonances. Byte-stable for a fixed
/// scan.
void write_scan_svg(std::ostream& os, const ScanResult& scan);

}  // namespace cavity
