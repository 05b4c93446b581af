#include "robotarm/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace robotarm {

namespace {

double base_angle(ManifoldId id) { return id == ManifoldId::M1 ? 0.0 : std::numbers::pi; }
double momentum_sign(ManifoldId id) { return id == ManifoldId::M1 ? 1.0 : -1.0; }

}  // namespace

std::string_view to_string(ManifoldId id) { return id == ManifoldId::M1 ? "M1" : "M2"; }

ManifoldId manifold_from_string(std::string_view name) {
    if (name == "M1" || name == "m1") return ManifoldId::M1;
    if (name == "M2" || name == "m2") return ManifoldId::M2;
    throw DomainError("unknown manifold '" + std::string(name) + "' (expected M1 or M2)");
}

State embed(ManifoldId id, const ReducedState& r) {
    const double p2 = momentum_sign(id) * 0.5 * r[1] * std::cos(r[0]);
    return make_state(r[0], r[1], base_angle(id), p2);
}

ManifoldResidual residual(ManifoldId id, const State& s) {
    ManifoldResidual out;
    out.r_theta = std::abs(std::remainder(s[kTheta2] - base_angle(id), 2.0 * std::numbers::pi));
    out.r_p = std::abs(s[kP2] - momentum_sign(id) * 0.5 * s[kP1] * std::cos(s[kTheta1]));
    return out;
}

ReducedState reduced_vector_field(const ArmParams& params, const ReducedState& r) {
    return ReducedState(r[1] / (2.0 * params.inertia()), -2.0 * params.mgl() * std::sin(r[0]));
}

double reduced_energy(const ArmParams& params, ManifoldId id, const ReducedState& r) {
    const double offset = id == ManifoldId::M1 ? -params.mgl() : params.mgl();
    return r[1] * r[1] / (4.0 * params.inertia()) - 2.0 * params.mgl() * std::cos(r[0]) + offset;
}

double separatrix_energy(const ArmParams& params, ManifoldId id) {
    return reduced_energy(params, id, ReducedState(std::numbers::pi, 0.0));
}

State reduced_center(ManifoldId id) { return embed(id, ReducedState(0.0, 0.0)); }
State reduced_saddle(ManifoldId id) { return embed(id, ReducedState(std::numbers::pi, 0.0)); }

InvarianceReport invariance_check(const ArmParams& params, const Torques& torques, ManifoldId id,
                                  const ReducedState& r0, double T, double tol,
                                  const IntegratorSpec& spec) {
    return invariance_check(params, torques, id, embed(id, r0), T, tol, spec);
}

InvarianceReport invariance_check(const ArmParams& params, const Torques& torques, ManifoldId id,
                                  const State& s0, double T, double tol,
                                  const IntegratorSpec& spec) {
    const Trajectory traj = integrate(params, torques, s0, T, spec);
    InvarianceReport out;
    out.exploratory = !torques.is_zero();
    out.samples = traj.size();
    out.energy_drift = traj.energy_drift;
    for (const State& s : traj.states) {
        const ManifoldResidual r = residual(id, s);
        out.max_r_theta = std::max(out.max_r_theta, r.r_theta);
        out.max_r_p = std::max(out.max_r_p, r.r_p);
    }
    const ManifoldResidual last = residual(id, traj.back());
    out.final_r_theta = last.r_theta;
    out.final_r_p = last.r_p;
    out.pass = out.max_r_theta <= tol && out.max_r_p <= tol;
    return out;
}

}  // namespace robotarm
