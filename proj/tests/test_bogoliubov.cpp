#include <doctest.h>

#include <random>

#include "cavity/bogoliubov.hpp"

using namespace cavity;

namespace {

CavityConfig scalar_cfg(int n_max = 10) { return {1.0, FieldKind::scalar_massless, n_max}; }
CavityConfig dirac_cfg(int n_max = 8) { return {1.0, FieldKind::dirac_massless, n_max}; }

std::mt19937_64 rng(0x5eed0002);

Trajectory random_trajectory(double h) {
    std::uniform_real_distribution<double> dur(0.1, 1.8);
    std::uniform_int_distribution<int> len(1, 5);
    std::uniform_int_distribution<int> kind(0, 1);
    Trajectory t;
    int n = len(rng);
    for (int i = 0; i < n; ++i)
        t.segments.push_back(kind(rng) ? Segment::accelerated(dur(rng), h)
                                       : Segment::inertial(dur(rng)));
    return t;
}

PerturbBogoMap random_synthetic_map(const ModeBasis& basis) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PerturbBogoMap m(basis);
    for (int i = 0; i < basis.size(); ++i) {
        m.G(i) = std::polar(1.0, u(rng) * M_PI);
        for (int j = 0; j < basis.size(); ++j) {
            m.alpha1(i, j) = cplx(u(rng), u(rng));
            m.beta1(i, j) = cplx(u(rng), u(rng));
        }
    }
    return m;
}

}  // namespace

TEST_CASE("switch map structure") {
    PerturbBogoMap sw = switch_map_boson(scalar_cfg(), 0.05);
    CHECK(sw.phase_defect() == 0.0);
    CHECK(sw.alpha_diagonal_defect() == 0.0);
    CHECK(sw.parity_defect() == 0.0);
    CHECK(sw.twisted_symmetry_defect() < 1e-15);
    CHECK(sw.unitarity_defect() < 1e-15);
    CHECK(std::abs(sw.b1(1, 3)) == 0.0);  // same parity
    CHECK(std::abs(sw.b1(1, 2)) == doctest::Approx(1.0614e-2).epsilon(1e-4));

    FermiBogoMap swf = switch_map_fermion(dirac_cfg(), 0.05);
    CHECK(swf.diagonal_defect() == 0.0);
    CHECK(swf.parity_defect() == 0.0);
    CHECK(swf.unitarity_defect() < 1e-15);
    CHECK(std::abs(swf.a1(1, -2)) == doctest::Approx(1.0 / (27.0 * M_PI * M_PI)).epsilon(1e-12));
}

TEST_CASE("h = 0 compiles to the identity map") {
    Trajectory still;  // empty trajectory
    PerturbBogoMap m = compile_trajectory_boson(scalar_cfg(), still, 0.0);
    CHECK((m.G - VectorXcd::Ones(m.G.size())).cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.beta1.cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.alpha1.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("phase map angles") {
    ModeBasis basis(scalar_cfg());
    VectorXcd g = phase_vector(basis, Segment::inertial(2.0));
    CHECK(std::abs(g(0) - cplx(1.0, 0.0)) < 1e-12);  // theta_1 = 2 pi

    VectorXcd ga = phase_vector(basis, Segment::accelerated(2.0, 1e-8));
    CHECK(std::abs(ga(0) - cplx(1.0, 0.0)) < 1e-10);  // inertial limit

    VectorXcd g2 = phase_vector(basis, Segment::accelerated(1.0, 0.1));
    double theta2 = 2.0 * M_PI * 0.1 / (2.0 * std::atanh(0.05));
    CHECK(std::abs(g2(1) - std::polar(1.0, theta2)) < 1e-13);
    CHECK(std::arg(g2(1)) == doctest::Approx(theta2 - 2.0 * M_PI).epsilon(1e-10));
}

TEST_CASE("compose: identity, phases, associativity") {
    ModeBasis basis(scalar_cfg());
    PerturbBogoMap id = PerturbBogoMap::identity(basis);
    PerturbBogoMap sw = switch_map_boson(scalar_cfg(), 0.05);
    PerturbBogoMap c = compose(id, sw);
    CHECK((c.beta1 - sw.beta1).cwiseAbs().maxCoeff() == 0.0);

    PerturbBogoMap p1 = phase_map_boson(basis, Segment::inertial(0.7));
    PerturbBogoMap p2 = phase_map_boson(basis, Segment::inertial(1.1));
    PerturbBogoMap p12 = compose(p2, p1);
    CHECK(p12.beta1.cwiseAbs().maxCoeff() == 0.0);
    CHECK((p12.G - phase_vector(basis, Segment::inertial(1.8))).cwiseAbs().maxCoeff() < 1e-12);

    for (int trial = 0; trial < 25; ++trial) {
        PerturbBogoMap m1 = random_synthetic_map(basis);
        PerturbBogoMap m2 = random_synthetic_map(basis);
        PerturbBogoMap m3 = random_synthetic_map(basis);
        PerturbBogoMap left = compose(compose(m3, m2), m1);
        PerturbBogoMap right = compose(m3, compose(m2, m1));
        CHECK((left.G - right.G).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((left.alpha1 - right.alpha1).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((left.beta1 - right.beta1).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("inverse undoes a compiled map") {
    Trajectory traj = Trajectory::basic_blocks(2, 0.9, 0.03);
    PerturbBogoMap m = compile_trajectory_boson(scalar_cfg(), traj, 0.03);
    PerturbBogoMap round = compose(inverse(m), m);
    CHECK((round.G - VectorXcd::Ones(round.G.size())).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(round.alpha1.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(round.beta1.cwiseAbs().maxCoeff() < 1e-12);

    FermiBogoMap f = compile_trajectory_fermion(dirac_cfg(), traj, 0.03);
    FermiBogoMap roundf = compose(inverse(f), f);
    CHECK(roundf.A1.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("compiled trajectories keep the first-order invariants") {
    for (int trial = 0; trial < 10; ++trial) {
        Trajectory traj = random_trajectory(0.04);
        PerturbBogoMap m = compile_trajectory_boson(scalar_cfg(), traj, 0.04);
        CHECK(m.phase_defect() < 1e-12);
        CHECK(m.alpha_diagonal_defect() < 1e-13);
        CHECK(m.parity_defect() < 1e-13);
        CHECK(m.twisted_symmetry_defect() < 1e-13);
        CHECK(m.unitarity_defect() < 1e-13);

        FermiBogoMap f = compile_trajectory_fermion(dirac_cfg(), traj, 0.04);
        CHECK(f.phase_defect() < 1e-12);
        CHECK(f.diagonal_defect() < 1e-13);
        CHECK(f.parity_defect() < 1e-13);
        CHECK(f.unitarity_defect() < 1e-13);
    }
}

TEST_CASE("merging adjacent identical segments keeps the compiled map") {
    Trajectory t;
    t.segments = {Segment::accelerated(0.3, 0.05), Segment::accelerated(0.4, 0.05),
                  Segment::inertial(0.5),          Segment::inertial(0.2),
                  Segment::accelerated(0.6, 0.05), Segment::inertial(0.9)};
    PerturbBogoMap a = compile_trajectory_boson(scalar_cfg(), t, 0.05);
    PerturbBogoMap b = compile_trajectory_boson(scalar_cfg(), t.merged(), 0.05);
    CHECK((a.G - b.G).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((a.alpha1 - b.alpha1).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((a.beta1 - b.beta1).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single block equals the unfolded compose chain") {
    CavityConfig cfg = scalar_cfg();
    ModeBasis basis(cfg);
    double h = 0.04, tau = 0.8;
    PerturbBogoMap sw = switch_map_boson(cfg, h);
    PerturbBogoMap chain = compose(
        phase_map_boson(basis, Segment::inertial(tau / 2)),
        compose(inverse(sw),
                compose(phase_map_boson(basis, Segment::accelerated(tau / 2, h)), sw)));
    PerturbBogoMap block =
        compile_trajectory_boson(cfg, Trajectory::basic_blocks(1, tau, h), h);
    CHECK((chain.G - block.G).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((chain.alpha1 - block.alpha1).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((chain.beta1 - block.beta1).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("resonant blocks scale the kernel linearly in N") {
    CavityConfig cfg = scalar_cfg(10);
    double tau = 2.0 / 3.0;  // (k,k') = (1,2) resonance

    // symbolic-h compile: exact coherence, machine-precision scaling
    CompileOptions sym{true, false};
    PerturbBogoMap one = compile_trajectory_boson(cfg, Trajectory::basic_blocks(1, tau, 0.01),
                                                  0.01, sym);
    double base = std::abs(one.b1(1, 2));
    REQUIRE(base > 1e-3);
    for (int n : {2, 5, 10}) {
        PerturbBogoMap m = compile_trajectory_boson(
            cfg, Trajectory::basic_blocks(n, tau, 0.01), 0.01, sym);
        CHECK(std::abs(m.b1(1, 2)) / base == doctest::Approx(double(n)).epsilon(1e-13));
    }

    // physical phases at small h: coherence defect is O(h^2) per block
    double h = 0.002;
    PerturbBogoMap one_h =
        compile_trajectory_boson(cfg, Trajectory::basic_blocks(1, tau, h), h);
    double base_h = std::abs(one_h.b1(1, 2));
    for (int n : {2, 10}) {
        PerturbBogoMap m =
            compile_trajectory_boson(cfg, Trajectory::basic_blocks(n, tau, h), h);
        CHECK(std::abs(std::abs(m.b1(1, 2)) / base_h - double(n)) / double(n) < 1e-10);
    }

    // fermionic pair (0,-1): tau = 2 delta / (0 + 1) = 2 is resonant
    CavityConfig dc = dirac_cfg();
    FermiBogoMap f1 = compile_trajectory_fermion(dc, Trajectory::basic_blocks(1, 2.0, 0.01),
                                                 0.01, sym);
    FermiBogoMap f4 = compile_trajectory_fermion(dc, Trajectory::basic_blocks(4, 2.0, 0.01),
                                                 0.01, sym);
    CHECK(std::abs(f4.a1(0, -1)) / std::abs(f1.a1(0, -1)) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("kernel entries do not depend on the truncation size") {
    double tau = 0.77, h = 0.03;
    Trajectory traj = Trajectory::basic_blocks(3, tau, h);
    PerturbBogoMap m10 = compile_trajectory_boson(scalar_cfg(10), traj, h);
    PerturbBogoMap m20 = compile_trajectory_boson(scalar_cfg(20), traj, h);
    for (int k = 1; k <= 3; ++k)
        for (int kp = 1; kp <= 3; ++kp)
            CHECK(std::abs(m10.b1(k, kp) - m20.b1(k, kp)) < 1e-10);
}

TEST_CASE("resonance times") {
    auto rt = resonance_times(1, 2, 1.0, {1, 2, 3});
    REQUIRE(rt.size() == 3);
    CHECK(rt[0].tau == doctest::Approx(2.0 / 3.0));
    CHECK(rt[1].tau == doctest::Approx(4.0 / 3.0));
    CHECK(rt[2].tau == doctest::Approx(2.0));
    CHECK(!rt[0].mode_independent);
    CHECK(rt[2].mode_independent);

    auto rt23 = resonance_times(2, 3, 1.0, {5});
    REQUIRE(rt23.size() == 1);
    CHECK(rt23[0].tau == doctest::Approx(2.0));
    CHECK(rt23[0].mode_independent);

    CHECK(resonance_times(1, 2, 1.0, {0, -3}).empty());
}

TEST_CASE("numeric identity residual shrinks like h^2") {
    CavityConfig cfg = scalar_cfg(10);
    Trajectory traj = Trajectory::basic_blocks(1, 0.8, 0.04);
    auto residual_at = [&](double h) {
        Trajectory t = Trajectory::basic_blocks(1, 0.8, h);
        return bogoliubov_identity_residual(numeric_compile_boson(cfg, t));
    };
    double r1 = residual_at(0.04), r2 = residual_at(0.02), r3 = residual_at(0.01);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.2));
    CHECK(r2 / r3 == doctest::Approx(4.0).epsilon(0.2));

    CavityConfig dc = dirac_cfg(10);
    auto fresidual_at = [&](double h) {
        Trajectory t = Trajectory::basic_blocks(1, 0.8, h);
        return unitarity_residual(numeric_compile_fermion(dc, t));
    };
    double f1 = fresidual_at(0.04), f2 = fresidual_at(0.02), f3 = fresidual_at(0.01);
    CHECK(f1 / f2 == doctest::Approx(4.0).epsilon(0.2));
    CHECK(f2 / f3 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("first-order reduction matches the full numeric composition") {
    CavityConfig cfg = scalar_cfg(10);
    auto defect_at = [&](double h) {
        Trajectory t = Trajectory::basic_blocks(2, 0.7, h);
        NumericBosonMap full = numeric_compile_boson(cfg, t);
        PerturbBogoMap red = compile_trajectory_boson(cfg, t, h);
        MatrixXcd alpha1 = MatrixXcd(red.G.asDiagonal()) + h * red.alpha1;
        double d = (full.alpha - alpha1).cwiseAbs().maxCoeff();
        d = std::max(d, (full.beta - h * red.beta1).cwiseAbs().maxCoeff());
        return d;
    };
    double d1 = defect_at(0.04), d2 = defect_at(0.02);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.5));
    CHECK(d2 < 20.0 * 0.02 * 0.02);
}

TEST_CASE("conjugating the convention conjugates the compiled map") {
    Trajectory traj = Trajectory::basic_blocks(2, 0.9, 0.05);
    CompileOptions plain, conj;
    conj.conjugate_convention = true;
    PerturbBogoMap m = compile_trajectory_boson(scalar_cfg(), traj, 0.05, plain);
    PerturbBogoMap mc = compile_trajectory_boson(scalar_cfg(), traj, 0.05, conj);
    CHECK((m.G.conjugate() - mc.G).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((m.beta1.conjugate() - mc.beta1).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((m.beta1.cwiseAbs() - mc.beta1.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-15);
}
