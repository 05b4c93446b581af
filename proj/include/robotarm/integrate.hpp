#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "robotarm/model.hpp"

namespace robotarm {

enum class Method {
    /// Fixed-step implicit midpoint rule. The Hamiltonian is not separable
    /// (momentum-dependent mass matrix), so explicit splitting schemes do not
    /// apply; the midpoint rule is symplectic for any Hamiltonian.
    ImplicitMidpoint,
    /// Dormand-Prince 5(4) with per-step error control.
    ExplicitAdaptive,
};

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);

struct IntegratorSpec {
    Method method = Method::ImplicitMidpoint;
    double step = 1e-3;        ///< fixed step (ImplicitMidpoint)
    double tolerance = 1e-10;  ///< per-step relative error (ExplicitAdaptive)
    long max_steps = 50'000'000;

    static IntegratorSpec midpoint(double step, long max_steps = 50'000'000);
    static IntegratorSpec adaptive(double tolerance, long max_steps = 50'000'000);
    /// Throws DomainError unless step > 0, tolerance in (0, 1e-2], max_steps > 0.
    void validate() const;
};

template <int N>
struct BasicTrajectory {
    using Point = Eigen::Matrix<double, N, 1>;
    std::vector<double> times;
    std::vector<Point> states;
    std::vector<double> energies;
    double energy_drift = 0.0;  ///< max |H(t) - H(0)|
    /// drift / step^2 for ImplicitMidpoint, 0 otherwise.
    double drift_constant = 0.0;

    std::size_t size() const { return times.size(); }
    const Point& back() const { return states.back(); }
};

using Trajectory = BasicTrajectory<4>;
using ReducedTrajectory = BasicTrajectory<2>;

/// Implicit stage did not converge; `time()` is the start of the failed step.
class StepFailureError : public std::runtime_error {
public:
    StepFailureError(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// max_steps reached before the final time; holds everything computed so far.
template <int N>
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, BasicTrajectory<N> partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const BasicTrajectory<N>& partial() const noexcept { return partial_; }

private:
    BasicTrajectory<N> partial_;
};

/// Integrates the full four-dimensional flow over [0, T], recording every
/// accepted step. Implicit stages are solved by fixed-point iteration to a
/// relative residual of 1e-13, switching to Newton after 10 non-contracting
/// iterations.
Trajectory integrate(const ArmParams& params, const Torques& torques, const State& s0, double T,
                     const IntegratorSpec& spec);

/// Same contract for the two-dimensional dynamics on an invariant manifold,
/// (theta1, p1). Energies are the reduced energies on M1.
ReducedTrajectory integrate_reduced(const ArmParams& params, const Eigen::Vector2d& r0, double T,
                                    const IntegratorSpec& spec);

}  // namespace robotarm
