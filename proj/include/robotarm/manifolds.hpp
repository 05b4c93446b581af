#pragma once

#include <string_view>

#include <Eigen/Core>

#include "robotarm/integrate.hpp"
#include "robotarm/model.hpp"

namespace robotarm {

/// (theta1, p1) coordinates on an invariant manifold.
using ReducedState = Eigen::Vector2d;

/// The two candidate invariant manifolds of the torque-free arm:
///   M1: theta2 = 0,  p2 =  (p1 / 2) cos(theta1)   (elbow link hanging)
///   M2: theta2 = pi, p2 = -(p1 / 2) cos(theta1)   (elbow link inverted)
/// On both, theta2-dot = 0 and the (theta1, p1) components of the flow are
/// those of a simple pendulum. p2-dot is 0 there as well, whereas keeping the
/// constraint would need d/dt[(p1/2) cos(theta1)], which is nonzero unless
/// sin(theta1) = 0. Orbits through other points leave the set;
/// invariance_check measures by how much.
enum class ManifoldId { M1, M2 };

std::string_view to_string(ManifoldId id);
ManifoldId manifold_from_string(std::string_view name);

State embed(ManifoldId id, const ReducedState& r);

/// Inverse of embed on the manifold; off it, drops (theta2, p2).
inline ReducedState project(const State& s) { return ReducedState(s[kTheta1], s[kP1]); }

struct ManifoldResidual {
    double r_theta = 0.0;  ///< wrapped angular distance of theta2 from 0 or pi
    double r_p = 0.0;      ///< |p2 - (+-p1/2) cos(theta1)|
};

ManifoldResidual residual(ManifoldId id, const State& s);

/// (p1 / (2 m L^2), -2 m g L sin(theta1)); identical on M1 and M2.
ReducedState reduced_vector_field(const ArmParams& params, const ReducedState& r);

/// Torque-free energy on the manifold,
/// p1^2 / (4 m L^2) - 2 m g L cos(theta1) -+ m g L (M1: -, M2: +).
double reduced_energy(const ArmParams& params, ManifoldId id, const ReducedState& r);

/// Energy of the reduced saddle (theta1 = pi, p1 = 0); lower energies
/// librate, higher ones rotate.
double separatrix_energy(const ArmParams& params, ManifoldId id);

/// Reduced center (0, 0) and saddle (pi, 0) as full states. On M1 these are
/// the hanging equilibrium and the (-,+) saddle-center; on M2 the (+,-)
/// saddle-center and the inverted equilibrium.
State reduced_center(ManifoldId id);
State reduced_saddle(ManifoldId id);

struct InvarianceReport {
    double max_r_theta = 0.0;
    double max_r_p = 0.0;
    double final_r_theta = 0.0;
    double final_r_p = 0.0;
    double energy_drift = 0.0;
    std::size_t samples = 0;
    bool pass = false;
    /// Set when torques are nonzero: the manifolds are only known to be
    /// invariant without torques, so such runs are measurements, not checks.
    bool exploratory = false;
};

/// Integrates the full flow from embed(id, r0) over [0, T] and records the
/// largest manifold residual over all accepted steps. pass means both
/// maxima are <= tol.
InvarianceReport invariance_check(const ArmParams& params, const Torques& torques, ManifoldId id,
                                  const ReducedState& r0, double T, double tol,
                                  const IntegratorSpec& spec = IntegratorSpec{});

/// Same, from an arbitrary (possibly off-manifold) start.
InvarianceReport invariance_check(const ArmParams& params, const Torques& torques, ManifoldId id,
                                  const State& s0, double T, double tol,
                                  const IntegratorSpec& spec = IntegratorSpec{});

}  // namespace robotarm
