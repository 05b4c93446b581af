#pragma once

// Two-link planar arm as an equal-mass, equal-length double pendulum driven
// by constant joint torques. Phase-space coordinates are ordered
// (theta1, p1, theta2, p2); angles are measured from the downward vertical.
//
//   H = (p1^2/2 + p2^2 - cos(d) p1 p2) / (m L^2 (1 + sin^2 d))
//       - m g L (2 cos(theta1) + cos(theta2)) - beta1 theta1 - beta2 theta2,
//   d = theta1 - theta2.
//
// The gravity weights (2 on the first joint, 1 on the second) are the ones
// that make the equations of motion, the equilibrium energies -3, -1, +1, +3
// (in units of mgL) and the torque equilibria sin(theta1) = beta1 / (2mgL),
// sin(theta2) = beta2 / (mgL) mutually consistent.

#include <cmath>
#include <numbers>

#include <Eigen/Core>

#include "robotarm/errors.hpp"

namespace robotarm {

template <typename Scalar>
using StateT = Eigen::Matrix<Scalar, 4, 1>;
using State = StateT<double>;

/// Component indices into a State.
enum StateIndex : Eigen::Index { kTheta1 = 0, kP1 = 1, kTheta2 = 2, kP2 = 3 };

inline State make_state(double theta1, double p1, double theta2, double p2) {
    return State(theta1, p1, theta2, p2);
}

/// Physical constants of the arm. Construct through `make()` to validate.
struct ArmParams {
    double m = 1.0;  ///< point mass at each joint end [kg]
    double L = 1.0;  ///< link length [m]
    double g = 1.0;  ///< gravitational acceleration [m/s^2]

    static ArmParams make(double m, double L, double g) {
        if (!(std::isfinite(m) && std::isfinite(L) && std::isfinite(g)) || m <= 0 || L <= 0 ||
            g <= 0)
            throw DomainError("ArmParams: m, L, g must be finite and positive");
        return ArmParams{m, L, g};
    }

    /// Small-amplitude frequency of a simple pendulum, sqrt(g/L).
    double omega0() const { return std::sqrt(g / L); }
    /// Energy scale m g L.
    double mgl() const { return m * g * L; }
    /// Inertia scale m L^2.
    double inertia() const { return m * L * L; }
};

/// Constant joint torques. Time-varying torques are not representable.
struct Torques {
    double beta1 = 0.0;  ///< torque at the shoulder joint [N m]
    double beta2 = 0.0;  ///< torque at the elbow joint [N m]

    static Torques make(double beta1, double beta2) {
        if (!(std::isfinite(beta1) && std::isfinite(beta2)))
            throw DomainError("Torques: beta1, beta2 must be finite");
        return Torques{beta1, beta2};
    }
    bool is_zero() const { return beta1 == 0.0 && beta2 == 0.0; }
};

namespace detail {

// Quantities shared by H, its gradient and its Hessian. sin^2(d) is formed
// once here so that every consumer sees the same rounding.
template <typename Scalar>
struct KineticTerms {
    Scalar s, c, D, aD;  // sin d, cos d, 1 + sin^2 d, m L^2 (1 + sin^2 d)
    Scalar N;            // p1^2 + 2 p2^2 - 2 cos(d) p1 p2

    KineticTerms(const ArmParams& params, const StateT<Scalar>& x) {
        using std::cos;
        using std::sin;
        const Scalar d = x[kTheta1] - x[kTheta2];
        s = sin(d);
        c = cos(d);
        D = Scalar(1) + s * s;
        aD = Scalar(params.m) * Scalar(params.L) * Scalar(params.L) * D;
        N = x[kP1] * x[kP1] + Scalar(2) * x[kP2] * x[kP2] - Scalar(2) * c * x[kP1] * x[kP2];
    }

    // dT/dd with T = N / (2 aD).
    Scalar dT_dd(const StateT<Scalar>& x) const {
        return s * x[kP1] * x[kP2] / aD - N * s * c / (aD * D);
    }
};

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& x, const char* what) {
    if (!x.allFinite()) throw DomainError(std::string(what) + ": non-finite state");
}

}  // namespace detail

/// Total energy of the arm, including the work potential of the torques.
template <typename Scalar>
Scalar hamiltonian(const ArmParams& params, const Torques& torques, const StateT<Scalar>& x) {
    using std::cos;
    detail::require_finite(x, "hamiltonian");
    const detail::KineticTerms<Scalar> k(params, x);
    const Scalar mgl = Scalar(params.m) * Scalar(params.g) * Scalar(params.L);
    const Scalar kinetic = k.N / (Scalar(2) * k.aD);
    const Scalar gravity = -mgl * (Scalar(2) * cos(x[kTheta1]) + cos(x[kTheta2]));
    const Scalar work = -x[kTheta1] * Scalar(torques.beta1) - x[kTheta2] * Scalar(torques.beta2);
    return kinetic + gravity + work;
}

/// Hamilton's equations: (dH/dp1, -dH/dtheta1, dH/dp2, -dH/dtheta2).
template <typename Scalar>
StateT<Scalar> vector_field(const ArmParams& params, const Torques& torques,
                            const StateT<Scalar>& x) {
    using std::sin;
    detail::require_finite(x, "vector_field");
    const detail::KineticTerms<Scalar> k(params, x);
    const Scalar mgl = Scalar(params.m) * Scalar(params.g) * Scalar(params.L);
    const Scalar p1 = x[kP1], p2 = x[kP2];
    const Scalar dTdd = k.dT_dd(x);

    StateT<Scalar> f;
    f[kTheta1] = (p1 - k.c * p2) / k.aD;
    f[kP1] = -dTdd - Scalar(2) * mgl * sin(x[kTheta1]) + Scalar(torques.beta1);
    f[kTheta2] = (Scalar(2) * p2 - k.c * p1) / k.aD;
    f[kP2] = dTdd - mgl * sin(x[kTheta2]) + Scalar(torques.beta2);
    return f;
}

/// Angles reduced into [0, 2pi) together with the number of turns removed.
struct CanonicalState {
    State state;
    Eigen::Vector2i winding;  ///< original angle = reduced + 2 pi * winding

    /// H(original) - H(reduced). Nonzero only when torques are applied,
    /// since the torque potential -theta * beta is not periodic.
    double energy_shift(const Torques& torques) const {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        return -two_pi * (winding[0] * torques.beta1 + winding[1] * torques.beta2);
    }
};

inline CanonicalState canonicalize_angles(const State& x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    CanonicalState out{x, Eigen::Vector2i::Zero()};
    const Eigen::Index idx[2] = {kTheta1, kTheta2};
    for (int j = 0; j < 2; ++j) {
        const double theta = x[idx[j]];
        double turns = std::floor(theta / two_pi);
        double reduced = theta - two_pi * turns;
        if (reduced >= two_pi) {
            reduced -= two_pi;
            turns += 1.0;
        } else if (reduced < 0.0) {
            reduced += two_pi;
            turns -= 1.0;
        }
        out.state[idx[j]] = reduced;
        out.winding[j] = static_cast<int>(turns);
    }
    return out;
}

}  // namespace robotarm
