#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "robotarm/model.hpp"

using namespace robotarm;
using std::numbers::pi;

namespace {
const ArmParams kUnit = ArmParams::make(1.0, 1.0, 1.0);
const Torques kFree{};
}  // namespace

TEST_CASE("hamiltonian at the hanging and inverted configurations") {
    CHECK(hamiltonian(kUnit, kFree, make_state(0, 0, 0, 0)) == -3.0);
    CHECK(hamiltonian(kUnit, kFree, make_state(pi, 0, pi, 0)) == doctest::Approx(3.0).epsilon(1e-15));
    // Torque work vanishes at the origin.
    CHECK(hamiltonian(kUnit, Torques{0.3, 0.2}, make_state(0, 0, 0, 0)) == -3.0);
}

TEST_CASE("hamiltonian scales with m g L and includes torque work") {
    const ArmParams p = ArmParams::make(2.0, 0.5, 9.81);
    CHECK(hamiltonian(p, kFree, make_state(0, 0, 0, 0)) == doctest::Approx(-3.0 * p.mgl()));
    const Torques t{1.5, -0.7};
    const State s = make_state(0.4, 0, -0.3, 0);
    const double expected = -p.mgl() * (2 * std::cos(0.4) + std::cos(-0.3)) - 0.4 * 1.5 - 0.3 * 0.7;
    CHECK(hamiltonian(p, t, s) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("non-finite input is a domain error") {
    const State bad = make_state(std::numeric_limits<double>::quiet_NaN(), 0, 0, 0);
    CHECK_THROWS_AS(hamiltonian(kUnit, kFree, bad), DomainError);
    CHECK_THROWS_AS(vector_field(kUnit, kFree, bad), DomainError);
    CHECK_THROWS_AS(ArmParams::make(0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(ArmParams::make(1.0, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(Torques::make(std::numeric_limits<double>::infinity(), 0.0), DomainError);
}

TEST_CASE("vector field examples") {
    CHECK(vector_field(kUnit, kFree, make_state(0, 0, 0, 0)).isZero(0.0));

    const State f = vector_field(kUnit, kFree, make_state(pi / 2, 0, 0, 0));
    CHECK(f[kTheta1] == 0.0);
    CHECK(f[kTheta2] == 0.0);
    CHECK(f[kP1] == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(f[kP2] == 0.0);

    const State g = vector_field(kUnit, Torques{0.5, 0.25}, make_state(0, 0, 0, 0));
    CHECK(g[kTheta1] == 0.0);
    CHECK(g[kP1] == 0.5);
    CHECK(g[kTheta2] == 0.0);
    CHECK(g[kP2] == 0.25);
}

TEST_CASE("vector field equals the finite-difference symplectic gradient") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> mass(0.2, 3.0), len(0.3, 2.0), grav(0.5, 12.0),
        torque(-5.0, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const ArmParams p = ArmParams::make(mass(rng), len(rng), grav(rng));
        const Torques t{torque(rng), torque(rng)};
        const State s = oracle::random_state(rng);
        const State f = vector_field(p, t, s);
        const State fd = oracle::fd_symplectic_gradient(p, t, s);
        const double scale = std::max(1.0, f.lpNorm<Eigen::Infinity>());
        worst = std::max(worst, (f - fd).lpNorm<Eigen::Infinity>() / scale);
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("torque-free energy symmetries") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        const State s = oracle::random_state(rng);
        const double h = hamiltonian(kUnit, kFree, s);
        CHECK(hamiltonian(kUnit, kFree, State(-s)) == doctest::Approx(h).epsilon(1e-14));
        State flipped = s;
        flipped[kP1] = -s[kP1];
        flipped[kP2] = -s[kP2];
        CHECK(hamiltonian(kUnit, kFree, flipped) == doctest::Approx(h).epsilon(1e-14));
    }
}

TEST_CASE("canonicalize_angles") {
    SUBCASE("reduces both angles and reports windings") {
        const CanonicalState c = canonicalize_angles(make_state(2 * pi + 0.1, 1, -0.1, 2));
        CHECK(c.state[kTheta1] == doctest::Approx(0.1).epsilon(1e-14));
        CHECK(c.state[kTheta2] == doctest::Approx(2 * pi - 0.1).epsilon(1e-15));
        CHECK(c.state[kP1] == 1.0);
        CHECK(c.state[kP2] == 2.0);
        CHECK(c.winding == Eigen::Vector2i(1, -1));
    }
    SUBCASE("in-range state is untouched") {
        const CanonicalState c = canonicalize_angles(make_state(0.5, 0, 0.5, 0));
        CHECK(c.state == make_state(0.5, 0, 0.5, 0));
        CHECK(c.winding == Eigen::Vector2i(0, 0));
    }
    SUBCASE("negative and multi-turn angles") {
        const CanonicalState c = canonicalize_angles(make_state(-pi, 0, 3 * pi, 0));
        CHECK(c.state[kTheta1] == doctest::Approx(pi).epsilon(1e-15));
        CHECK(c.state[kTheta2] == doctest::Approx(pi).epsilon(1e-15));
        CHECK(c.winding == Eigen::Vector2i(-1, 1));
    }
    SUBCASE("energy shift restores the torque potential") {
        std::mt19937_64 rng(11);
        const Torques t{0.7, -0.4};
        for (int i = 0; i < 200; ++i) {
            const State s = oracle::random_state(rng, 30.0);
            const CanonicalState c = canonicalize_angles(s);
            CHECK(c.state[kTheta1] >= 0.0);
            CHECK(c.state[kTheta1] < 2 * pi);
            CHECK(c.state[kTheta2] >= 0.0);
            CHECK(c.state[kTheta2] < 2 * pi);
            CHECK(hamiltonian(kUnit, t, c.state) + c.energy_shift(t) ==
                  doctest::Approx(hamiltonian(kUnit, t, s)).epsilon(1e-12));
            CHECK(hamiltonian(kUnit, kFree, c.state) ==
                  doctest::Approx(hamiltonian(kUnit, kFree, s)).epsilon(1e-12));
        }
    }
}
