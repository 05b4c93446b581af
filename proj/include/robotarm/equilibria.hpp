#pragma once

#include <array>
#include <limits>
#include <string>

#include "robotarm/model.hpp"

namespace robotarm {

/// Sign of cos(theta) chosen at each joint. (+,+) is the hanging
/// configuration, (-,-) the inverted one.
struct Branch {
    int s1 = +1;
    int s2 = +1;

    std::string label() const { return std::string(s1 > 0 ? "+" : "-") + (s2 > 0 ? "+" : "-"); }
    static Branch from_label(const std::string& label);
    friend bool operator==(const Branch&, const Branch&) = default;
};

/// Branches in the fixed output order (+,+), (+,-), (-,+), (-,-).
inline constexpr std::array<Branch, 4> kBranches{{{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}}};

/// Position of `b` in kBranches.
int branch_index(const Branch& b);

struct FixedPoint {
    Branch branch;
    bool exists = false;
    bool on_boundary = false;
    State state = State::Constant(std::numeric_limits<double>::quiet_NaN());  ///< NaN if !exists
    double energy = std::numeric_limits<double>::quiet_NaN();                ///< H(state)
};

/// All four equilibrium candidates in branch order. For an existing point
/// p1 = p2 = 0, theta1 = asin(beta1 / 2mgL) or pi - asin(...), and likewise
/// theta2 with beta2 / mgL. Angles therefore vary continuously with the
/// torques and reduce to {0, pi} at zero torque.
std::array<FixedPoint, 4> analytic_fixed_points(const ArmParams& params, const Torques& torques);

struct RefinedFixedPoint {
    FixedPoint point;
    int iterations = 0;
    double residual = 0.0;  ///< ||vector_field||_inf at the returned state
};

/// Damped Newton iteration on vector_field = 0 from `guess`. The step is
/// halved (at most 30 times) until the residual decreases. Converges when
/// ||f||_inf <= 1e-12 mgL; throws ConvergenceError after 100 iterations and
/// SingularityError if the Jacobian is singular at an iterate.
RefinedFixedPoint refine_fixed_point(const ArmParams& params, const Torques& torques,
                                     const State& guess);

/// Reference closed-form equilibrium energies E1..E4, with every arctan
/// taken literally as single-argument arctan. Each formula is placed at the
/// branch whose cos-signs its square-root terms encode (E1 -> (+,+),
/// E2 -> (-,+), E3 -> (+,-), E4 -> (-,-)), so the result is in kBranches
/// order. Cross-check only; the authoritative value is FixedPoint::energy. Throws DomainError when a
/// square-root argument is negative.
std::array<double, 4> fixed_point_energies_closed_form(const ArmParams& params,
                                                      const Torques& torques);

}  // namespace robotarm
