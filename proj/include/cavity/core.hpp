#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cavity/order_series.hpp"

namespace cavity {

enum class FieldKind { scalar_massless, dirac_massless };

std::string to_string(FieldKind k);
FieldKind field_kind_from_string(const std::string& s);

/// Rigid cavity of proper width delta confining a massless field, with the
/// mode ladder truncated at n_max.
struct CavityConfig {
    double delta = 1.0;
    FieldKind field = FieldKind::scalar_massless;
    int n_max = 12;

    void validate() const {
        if (!(delta > 0.0)) throw std::invalid_argument("CavityConfig: delta must be > 0");
        if (n_max < 3) throw std::invalid_argument("CavityConfig: n_max must be >= 3");
    }
};

/// Mode labels and frequencies of the truncated ladder.
/// Scalar: n = 1..n_max with omega_n = n pi / delta.
/// Dirac (zero-mode splitting parameter fixed to 0): n = -n_max..n_max,
/// n >= 0 particles, n < 0 antiparticles, omega_n = |n| pi / delta so the
/// phase factors coincide with the scalar ones for the same |n|.
struct ModeBasis {
    FieldKind field;
    int n_max;
    double delta;

    explicit ModeBasis(const CavityConfig& cfg)
        : field(cfg.field), n_max(cfg.n_max), delta(cfg.delta) {
        cfg.validate();
    }

    int size() const {
        return field == FieldKind::scalar_massless ? n_max : 2 * n_max + 1;
    }
    /// Row index of a mode label.
    int index_of(int label) const {
        if (field == FieldKind::scalar_massless) {
            if (label < 1 || label > n_max) throw std::out_of_range("ModeBasis: scalar label");
            return label - 1;
        }
        if (label < -n_max || label > n_max) throw std::out_of_range("ModeBasis: dirac label");
        return label + n_max;
    }
    int label_at(int idx) const {
        return field == FieldKind::scalar_massless ? idx + 1 : idx - n_max;
    }
    double omega(int label) const {
        return std::abs(label) * M_PI / delta;
    }
    /// Interior modes keep two rows of headroom against the truncation edge.
    bool is_interior(int label) const {
        return std::abs(label) <= n_max - 2 &&
               (field == FieldKind::dirac_massless || label >= 1);
    }
    bool compatible(const ModeBasis& o) const {
        return field == o.field && n_max == o.n_max && delta == o.delta;
    }
};

struct Segment {
    enum class Kind { inertial, accelerated };
    Kind kind = Kind::inertial;
    double duration = 0.0;  ///< proper time at the cavity centre
    double h = 0.0;         ///< acceleration parameter, present iff accelerated

    static Segment inertial(double duration) { return {Kind::inertial, duration, 0.0}; }
    static Segment accelerated(double duration, double h) {
        return {Kind::accelerated, duration, h};
    }

    void validate() const {
        if (!(duration > 0.0)) throw std::invalid_argument("Segment: duration must be > 0");
        if (kind == Kind::accelerated) {
            if (!(h > 0.0 && h < 2.0))
                throw std::invalid_argument("Segment: h must lie in (0, 2)");
        }
    }
    bool same_motion(const Segment& o) const {
        return kind == o.kind && (kind == Segment::Kind::inertial || h == o.h);
    }
};

/// Ordered travel segments; the cavity is inertial before the first and after
/// the last segment.
struct Trajectory {
    std::vector<Segment> segments;

    void validate() const {
        for (const auto& s : segments) s.validate();
    }
    bool empty() const { return segments.empty(); }
    int accelerated_segment_count() const {
        int n = 0;
        for (const auto& s : segments)
            if (s.kind == Segment::Kind::accelerated) ++n;
        return n;
    }
    /// Largest h over accelerated segments (0 for a purely inertial path).
    double max_h() const {
        double m = 0.0;
        for (const auto& s : segments)
            if (s.kind == Segment::Kind::accelerated) m = std::max(m, s.h);
        return m;
    }
    /// Adjacent segments of identical motion merged into one. The compiled
    /// map must be unchanged by this.
    Trajectory merged() const {
        Trajectory out;
        for (const auto& s : segments) {
            if (!out.segments.empty() && out.segments.back().same_motion(s))
                out.segments.back().duration += s.duration;
            else
                out.segments.push_back(s);
        }
        return out;
    }

    /// N repetitions of [accelerated tau/2, inertial tau/2].
    static Trajectory basic_blocks(int n_blocks, double tau, double h) {
        if (n_blocks < 1) throw std::invalid_argument("Trajectory: n_blocks must be >= 1");
        Trajectory t;
        for (int i = 0; i < n_blocks; ++i) {
            t.segments.push_back(Segment::accelerated(tau / 2.0, h));
            t.segments.push_back(Segment::inertial(tau / 2.0));
        }
        return t;
    }
    /// N accelerated segments of duration tau/2 separated by (N-1) inertial
    /// coasts of the same duration.
    static Trajectory scan_blocks(int n_blocks, double tau, double h) {
        if (n_blocks < 1) throw std::invalid_argument("Trajectory: n_blocks must be >= 1");
        Trajectory t;
        for (int i = 0; i < n_blocks; ++i) {
            if (i > 0) t.segments.push_back(Segment::inertial(tau / 2.0));
            t.segments.push_back(Segment::accelerated(tau / 2.0, h));
        }
        return t;
    }
};

/// h tau / [4 delta atanh(h/2)]; tends to tau/(2 delta) as h -> 0.
double block_u(double h, double tau, double delta);

/// Inverse of block_u in tau: tau = 4 delta atanh(h/2) u / h.
double tau_for_u(double h, double u, double delta);

/// h / (2 atanh(h/2)): ratio of the accelerated-segment mode frequency to the
/// inertial one; 1 at h = 0 and decreasing on (0, 2).
double accel_frequency_ratio(double h);

}  // namespace cavity
