#include "cavity/entanglement.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace cavity {

namespace {

constexpr double kTieTol = 1e-12;

/// Square root of a density-matrix diagonal: real nonnegative by physics,
/// with roundoff-scale negatives and stray h^1 noise clamped.
OrderSeries diag_sqrt(const OrderSeries& d) {
    OrderSeries r = d.real_part();
    auto clamp = [](cplx& c) {
        if (std::abs(c) < 1e-13) c = 0.0;
    };
    clamp(r.c0);
    clamp(r.c1);
    if (r.c0.real() < 0.0 || (r.c0.real() == 0.0 && r.c2.real() < 0.0))
        throw std::domain_error("witness: negative diagonal under square root");
    if (r.c0.real() == 0.0 && r.c1.real() != 0.0)
        throw std::domain_error("witness: diagonal with leading order h");
    return r.sqrt_series();
}

void require_dims(const DensityMatrixP& rho, const std::vector<int>& dims, const char* who) {
    if (rho.spaces.size() != dims.size())
        throw std::invalid_argument(std::string(who) + ": wrong number of subsystems");
    for (size_t i = 0; i < dims.size(); ++i)
        if (rho.spaces[i].dim != dims[i])
            throw std::invalid_argument(std::string(who) + ": wrong local dimensions");
}

WitnessReport finalize(OrderSeries value, std::map<std::string, OrderSeries> elements) {
    WitnessReport r;
    r.value = value.real_part();
    r.elements = std::move(elements);
    r.leading_order = r.value.leading_order(kTieTol);
    if (r.leading_order == 3) {
        r.inconclusive = true;
        r.violated = false;
        return r;
    }
    double lead = r.leading_order == 0   ? r.value.c0.real()
                  : r.leading_order == 1 ? r.value.c1.real()
                                         : r.value.c2.real();
    r.violated = lead > 0.0;
    return r;
}

}  // namespace

WitnessReport witness_a1(const DensityMatrixP& rho) {
    require_dims(rho, {2, 3, 3, 2}, "witness_a1");
    auto d = [&](std::vector<int> t) { return diag_sqrt(rho.at(t, t)); };

    OrderSeries m = rho.at({1, 2, 2, 1}, {0, 0, 0, 0});
    OrderSeries main = m.abs_series();
    // the seven bipartitions {S | complement}, excitations living on S
    OrderSeries r1 = d({0, 0, 0, 1}) * d({1, 2, 2, 0});
    OrderSeries r2 = d({1, 0, 0, 0}) * d({0, 2, 2, 1});
    OrderSeries r3 = d({0, 0, 2, 0}) * d({1, 2, 0, 1});
    OrderSeries r4 = d({0, 2, 0, 0}) * d({1, 0, 2, 1});
    OrderSeries r5 = d({0, 0, 2, 1}) * d({1, 2, 0, 0});
    OrderSeries r6 = d({0, 2, 0, 1}) * d({1, 0, 2, 0});
    OrderSeries r7 = d({1, 0, 0, 1}) * d({0, 2, 2, 0});

    OrderSeries value = 2.0 * (main - r1 - r2 - r3 - r4 - r5 - r6 - r7);
    std::map<std::string, OrderSeries> el{
        {"rho(1A 2k 2k' 1C; 0)", m},     {"root_C|Akk'", r1},  {"root_A|kk'C", r2},
        {"root_k'|AkC", r3},             {"root_k|Ak'C", r4},  {"root_k'C|Ak", r5},
        {"root_kC|Ak'", r6},             {"root_AC|kk'", r7}};
    return finalize(value, std::move(el));
}

WitnessReport witness_a2(const DensityMatrixP& rho) {
    require_dims(rho, {2, 2, 2, 2}, "witness_a2");
    auto d = [&](std::vector<int> t) { return rho.at(t, t).real_part(); };

    OrderSeries m1 = rho.at({0, 1, 1, 0}, {0, 0, 1, 1});
    OrderSeries m2 = rho.at({1, 0, 0, 1}, {0, 0, 1, 1});
    OrderSeries r1 = diag_sqrt(d({0, 0, 0, 1})) * diag_sqrt(d({1, 0, 1, 1}));
    OrderSeries r2 = diag_sqrt(d({0, 0, 1, 0})) * diag_sqrt(d({0, 1, 1, 1}));
    OrderSeries r3 = diag_sqrt(d({0, 0, 1, 1})) * diag_sqrt(d({0, 1, 1, 0}) + d({1, 0, 0, 1}));

    OrderSeries value = m1.abs_series() + m2.abs_series() - r1 - r2 - r3;
    std::map<std::string, OrderSeries> el{{"rho(kk'; k'C)", m1},
                                          {"rho(AC; k'C)", m2},
                                          {"root_C|Ak'C-pair", r1},
                                          {"root_k'|kk'C", r2},
                                          {"root_k'C|(kk'+AC)", r3}};
    return finalize(value, std::move(el));
}

WitnessReport witness_a2_strict(const DensityMatrixP& rho) {
    require_dims(rho, {2, 2, 2, 2}, "witness_a2_strict");
    auto d = [&](std::vector<int> t) { return rho.at(t, t).real_part(); };

    OrderSeries m1 = rho.at({0, 1, 1, 0}, {0, 0, 1, 1});
    OrderSeries m2 = rho.at({1, 0, 0, 1}, {0, 0, 1, 1});
    OrderSeries r1 = diag_sqrt(d({0, 0, 0, 1})) * diag_sqrt(d({1, 0, 1, 1}));
    OrderSeries r2 = diag_sqrt(d({0, 0, 1, 0})) * diag_sqrt(d({0, 1, 1, 1}));
    OrderSeries r3a = diag_sqrt(d({0, 0, 1, 1})) * diag_sqrt(d({0, 1, 1, 0}));
    OrderSeries r3b = diag_sqrt(d({0, 0, 1, 1})) * diag_sqrt(d({1, 0, 0, 1}));

    OrderSeries value = m1.abs_series() + m2.abs_series() - r1 - r2 - r3a - r3b;
    std::map<std::string, OrderSeries> el{{"rho(kk'; k'C)", m1},   {"rho(AC; k'C)", m2},
                                          {"root_C|Ak'C-pair", r1}, {"root_k'|kk'C", r2},
                                          {"root_k'C|kk'", r3a},    {"root_k'C|AC", r3b}};
    return finalize(value, std::move(el));
}

WitnessReport witness_a3(const DensityMatrixP& rho) {
    require_dims(rho, {3, 3, 3}, "witness_a3");
    auto d = [&](std::vector<int> t) { return diag_sqrt(rho.at(t, t)); };

    OrderSeries m = rho.at({0, 0, 0}, {1, 2, 1});
    OrderSeries main = m.abs_series();
    OrderSeries r1 = d({1, 0, 0}) * d({0, 2, 1});
    OrderSeries r2 = d({0, 0, 1}) * d({1, 2, 0});
    OrderSeries r3 = d({0, 2, 0}) * d({1, 0, 1});

    OrderSeries value = 2.0 * (main - r1 - r2 - r3);
    std::map<std::string, OrderSeries> el{{"rho(0; 1k 2k' 1k'')", m},
                                          {"root_k|k'k''", r1},
                                          {"root_k''|kk'", r2},
                                          {"root_k'|kk''", r3}};
    return finalize(value, std::move(el));
}

WitnessReport witness_a4(const DensityMatrixP& rho) {
    require_dims(rho, {2, 2, 2}, "witness_a4");
    auto d = [&](std::vector<int> t) { return rho.at(t, t).real_part(); };

    OrderSeries m1 = rho.at({0, 0, 0}, {1, 0, 1});
    OrderSeries m2 = rho.at({0, 0, 0}, {0, 1, 1});
    OrderSeries r1 = diag_sqrt(d({0, 0, 0})) * diag_sqrt(d({1, 0, 1}) + d({0, 1, 1}));
    OrderSeries r2 = diag_sqrt(d({0, 0, 1})) * diag_sqrt(d({0, 1, 0}));
    OrderSeries r3 = diag_sqrt(d({0, 0, 1})) * diag_sqrt(d({1, 0, 0}));

    OrderSeries value = m1.abs_series() + m2.abs_series() - r1 - r2 - r3;
    std::map<std::string, OrderSeries> el{{"rho(0; k k'')", m1},
                                          {"rho(0; k' k'')", m2},
                                          {"root_0|(kk''+k'k'')", r1},
                                          {"root_k''|k'", r2},
                                          {"root_k''|k", r3}};
    return finalize(value, std::move(el));
}

// ---------------------------------------------------------------------------
// Negativity

MatrixXcd partial_transpose(const MatrixXcd& m, const std::vector<int>& dims,
                            const std::vector<bool>& transposed) {
    int total = 1;
    for (int d : dims) total *= d;
    if (m.rows() != total || m.cols() != total)
        throw std::invalid_argument("partial_transpose: dimension mismatch");

    auto decompose = [&](int flat) {
        std::vector<int> t(dims.size());
        for (int i = int(dims.size()) - 1; i >= 0; --i) {
            t[i] = flat % dims[i];
            flat /= dims[i];
        }
        return t;
    };
    auto compose_idx = [&](const std::vector<int>& t) {
        int idx = 0;
        for (size_t i = 0; i < dims.size(); ++i) idx = idx * dims[i] + t[i];
        return idx;
    };

    MatrixXcd out(total, total);
    for (int r = 0; r < total; ++r) {
        auto tr = decompose(r);
        for (int c = 0; c < total; ++c) {
            auto tc = decompose(c);
            auto nr = tr, nc = tc;
            for (size_t i = 0; i < dims.size(); ++i)
                if (transposed[i]) std::swap(nr[i], nc[i]);
            out(compose_idx(nr), compose_idx(nc)) = m(r, c);
        }
    }
    return out;
}

namespace {

std::vector<bool> transpose_mask(const DensityMatrixP& rho, const std::vector<int>& positions) {
    std::vector<bool> mask(rho.spaces.size(), false);
    for (int p : positions) {
        if (p < 0 || p >= int(rho.spaces.size()))
            throw std::invalid_argument("negativity: transpose position out of range");
        mask[p] = true;
    }
    return mask;
}

std::vector<int> local_dims(const DensityMatrixP& rho) {
    std::vector<int> dims;
    for (const auto& s : rho.spaces) dims.push_back(s.dim);
    return dims;
}

}  // namespace

double negativity(const DensityMatrixP& rho, const std::vector<int>& transposed_positions,
                  double h) {
    MatrixXcd m = rho.to_matrix(h);
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("negativity: input is not Hermitian");
    m = 0.5 * (m + MatrixXcd(m.adjoint()));
    MatrixXcd pt = partial_transpose(m, local_dims(rho), transpose_mask(rho, transposed_positions));
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(pt);
    double n = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        double lam = es.eigenvalues()(i);
        n += (std::abs(lam) - lam) / 2.0;
    }
    return n;
}

double negativity_first_order(const DensityMatrixP& rho,
                              const std::vector<int>& transposed_positions) {
    auto dims = local_dims(rho);
    auto mask = transpose_mask(rho, transposed_positions);
    MatrixXcd p0 = partial_transpose(rho.order_matrix(0), dims, mask);
    MatrixXcd p1 = partial_transpose(rho.order_matrix(1), dims, mask);
    p0 = 0.5 * (p0 + MatrixXcd(p0.adjoint()));
    p1 = 0.5 * (p1 + MatrixXcd(p1.adjoint()));

    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(p0);
    double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    std::vector<int> kernel;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()(i)) < 1e-10 * scale) kernel.push_back(i);
    if (kernel.empty()) return 0.0;

    MatrixXcd v0(p0.rows(), kernel.size());
    for (size_t j = 0; j < kernel.size(); ++j) v0.col(j) = es.eigenvectors().col(kernel[j]);
    MatrixXcd block = v0.adjoint() * p1 * v0;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eb(block);
    double n = 0.0;
    for (int i = 0; i < eb.eigenvalues().size(); ++i) {
        double mu = eb.eigenvalues()(i);
        n += (std::abs(mu) - mu) / 2.0;
    }
    return n;
}

// ---------------------------------------------------------------------------
// Canonical states

OrderSeries CanonicalState::norm_series() const {
    OrderSeries n;
    for (const auto& [t, a] : amplitudes) n += a.abs2();
    return n;
}

namespace {

/// Normalizes amplitudes by 1/sqrt(norm) as a series.
void normalize(CanonicalState& st) {
    OrderSeries n = st.norm_series().real_part();
    OrderSeries root = n.sqrt_series();
    // 1/(s0 + s1 h + s2 h^2), s0 > 0
    cplx s0 = root.c0, s1 = root.c1, s2 = root.c2;
    OrderSeries inv(1.0 / s0, -s1 / (s0 * s0), (s1 * s1 - s0 * s2) / (s0 * s0 * s0));
    for (auto& [t, a] : st.amplitudes) a = a * inv;
}

/// Converts a fermionic state on the given register to descriptor tuples,
/// keeping the convention's canonicalization signs.
std::map<std::vector<int>, OrderSeries> tuple_amplitudes(const FockStateP& psi,
                                                         const std::vector<Subsystem>& spaces) {
    std::map<std::vector<int>, OrderSeries> out;
    for (const auto& [label, amp] : psi.terms) {
        std::vector<int> tuple(spaces.size(), 0);
        for (const auto& [mode, n] : label.occ) {
            bool found = false;
            for (size_t i = 0; i < spaces.size(); ++i)
                if (spaces[i].mode == mode) {
                    tuple[i] += n;
                    found = true;
                    break;
                }
            if (!found) throw std::logic_error("canonical state: mode outside register");
        }
        auto [it, fresh] = out.emplace(tuple, amp);
        if (!fresh) it->second += amp;
    }
    return out;
}

}  // namespace

CanonicalState canonical_dicke4(const FermiBogoMap& map, int kappa, int kappa_p, int sign,
                                const CanonicalOrder& order) {
    if (sign != +1 && sign != -1) throw std::invalid_argument("canonical_dicke4: sign must be +-1");
    cplx gk = map.g(kappa), gkp = map.g(kappa_p);
    cplx a_kkp = map.a1(kappa, kappa_p);
    double s = sign;

    FockStateP psi;
    psi.field = FieldKind::dirac_massless;
    psi.fermionic = true;
    psi.order = order;
    Mode A = Mode::A(), C = Mode::C(), K = Mode::cav(kappa), Kp = Mode::cav(kappa_p);
    psi.add_string({}, OrderSeries(0.5));
    psi.add_string({A, K}, OrderSeries(0.5 * s * std::conj(gk)));
    psi.add_string({Kp, C}, OrderSeries(0.5 * s * gkp));
    psi.add_string({K, Kp}, OrderSeries::of_order(1, 0.5 * gkp * std::conj(a_kkp)));
    psi.add_string({A, C}, OrderSeries::of_order(1, -0.5 * std::conj(gk) * a_kkp));
    // the four-excitation component is positive in this wedge-to-tuple
    // mapping: the initial (+-)(+-) product and the zeroth-order pair
    // transform both contribute + on the canonical string [A, k, k', C]
    psi.add_string({A, K, Kp, C}, OrderSeries(0.5 * std::conj(gk) * gkp));

    CanonicalState st;
    st.kind = CanonicalState::Kind::dicke4;
    st.spaces = {{"A", A, 2}, {"kappa", K, 2}, {"kappa'", Kp, 2}, {"C", C, 2}};
    st.amplitudes = tuple_amplitudes(psi, st.spaces);
    normalize(st);
    return st;
}

CanonicalState canonical_w3(const FermiBogoMap& map, int kappa, int kappa_p, int kappa_pp,
                            const CanonicalOrder& order) {
    cplx gpp = map.g(kappa_pp);
    FockStateP psi;
    psi.field = FieldKind::dirac_massless;
    psi.fermionic = true;
    psi.order = order;
    Mode K = Mode::cav(kappa), Kp = Mode::cav(kappa_p), Kpp = Mode::cav(kappa_pp);
    psi.add_string({}, OrderSeries::one());
    psi.add_string({Kp, Kpp},
                   OrderSeries::of_order(1, gpp * std::conj(map.a1(kappa_p, kappa_pp))));
    psi.add_string({K, Kpp}, OrderSeries::of_order(1, gpp * std::conj(map.a1(kappa, kappa_pp))));

    CanonicalState st;
    st.kind = CanonicalState::Kind::w3;
    st.spaces = {{"kappa", K, 2}, {"kappa'", Kp, 2}, {"kappa''", Kpp, 2}};
    st.amplitudes = tuple_amplitudes(psi, st.spaces);
    normalize(st);
    return st;
}

OrderSeries fidelity(const DensityMatrixP& rho, const CanonicalState& psi) {
    if (rho.spaces.size() != psi.spaces.size())
        throw std::invalid_argument("fidelity: register size mismatch");
    for (size_t i = 0; i < rho.spaces.size(); ++i)
        if (rho.spaces[i].dim != psi.spaces[i].dim)
            throw std::invalid_argument("fidelity: local dimension mismatch");
    OrderSeries f;
    for (const auto& [a, va] : psi.amplitudes)
        for (const auto& [b, vb] : psi.amplitudes) f += va.conj() * rho.at(a, b) * vb;
    return f;
}

// ---------------------------------------------------------------------------
// Numeric helpers

DensityMatrixP density_from_numeric(const MatrixXcd& m, const std::vector<int>& dims) {
    DensityMatrixP rho;
    for (size_t i = 0; i < dims.size(); ++i)
        rho.spaces.push_back({"q" + std::to_string(i), Mode::cav(int(i) + 1), dims[i]});
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) {
            if (m(r, c) == cplx(0.0, 0.0)) continue;
            rho.add(rho.tuple_at(r), rho.tuple_at(c), OrderSeries(m(r, c)));
        }
    return rho;
}

Eigen::VectorXcd BiseparableSampler::random_state(int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = cplx(gauss(rng_), gauss(rng_));
    v.normalize();
    return v;
}

MatrixXcd BiseparableSampler::sample_pure_product() {
    int n = int(dims_.size());
    int total = 1;
    for (int d : dims_) total *= d;

    // random proper bipartition mask
    std::uniform_int_distribution<int> pick(1, (1 << n) - 2);
    int mask = pick(rng_);

    int dim_s = 1, dim_t = 1;
    for (int i = 0; i < n; ++i) (mask >> i & 1 ? dim_s : dim_t) *= dims_[i];
    Eigen::VectorXcd s = random_state(dim_s), t = random_state(dim_t);

    Eigen::VectorXcd full(total);
    for (int flat = 0; flat < total; ++flat) {
        int rem = flat, is = 0, it = 0;
        for (int i = 0; i < n; ++i) {
            int digit_base = 1;
            for (int j = i + 1; j < n; ++j) digit_base *= dims_[j];
            int digit = rem / digit_base;
            rem %= digit_base;
            if (mask >> i & 1)
                is = is * dims_[i] + digit;
            else
                it = it * dims_[i] + digit;
        }
        full(flat) = s(is) * t(it);
    }
    return full * full.adjoint();
}

MatrixXcd BiseparableSampler::sample_mixture(int max_components) {
    std::uniform_int_distribution<int> ncomp(1, max_components);
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    int k = ncomp(rng_);
    std::vector<double> w(k);
    double tot = 0.0;
    for (auto& x : w) {
        x = unif(rng_);
        tot += x;
    }
    int total = 1;
    for (int d : dims_) total *= d;
    MatrixXcd rho = MatrixXcd::Zero(total, total);
    for (int i = 0; i < k; ++i) rho += (w[i] / tot) * sample_pure_product();
    return rho;
}

}  // namespace cavity
