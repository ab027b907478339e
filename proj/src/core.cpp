#include "cavity/core.hpp"

#include <cmath>

namespace cavity {

std::string to_string(FieldKind k) {
    return k == FieldKind::scalar_massless ? "scalar_massless" : "dirac_massless";
}

FieldKind field_kind_from_string(const std::string& s) {
    if (s == "scalar_massless") return FieldKind::scalar_massless;
    if (s == "dirac_massless") return FieldKind::dirac_massless;
    throw std::invalid_argument("unknown field kind: " + s);
}

double accel_frequency_ratio(double h) {
    if (!(h > 0.0 && h < 2.0))
        throw std::domain_error("accel_frequency_ratio: h must lie in (0, 2)");
    // Series for small h avoids 0/0 noise; atanh(h/2) = h/2 (1 + h^2/12 + ...)
    if (h < 1e-6) {
        double q = h * h / 4.0;
        return 1.0 / (1.0 + q / 3.0 + q * q / 5.0);
    }
    return h / (2.0 * std::atanh(h / 2.0));
}

double block_u(double h, double tau, double delta) {
    if (!(h > 0.0 && h < 2.0)) throw std::domain_error("block_u: h must lie in (0, 2)");
    if (!(tau > 0.0)) throw std::domain_error("block_u: tau must be > 0");
    if (!(delta > 0.0)) throw std::domain_error("block_u: delta must be > 0");
    return accel_frequency_ratio(h) * tau / (2.0 * delta);
}

double tau_for_u(double h, double u, double delta) {
    if (!(h > 0.0 && h < 2.0)) throw std::domain_error("tau_for_u: h must lie in (0, 2)");
    if (!(u > 0.0)) throw std::domain_error("tau_for_u: u must be > 0");
    return 2.0 * delta * u / accel_frequency_ratio(h);
}

}  // namespace cavity
