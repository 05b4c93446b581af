#include "robotarm/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/LU>
#include <boost/numeric/odeint.hpp>

#include "robotarm/linear_analysis.hpp"
#include "robotarm/manifolds.hpp"

namespace robotarm {

namespace {

constexpr double kStageTolerance = 1e-13;
constexpr int kNonContractingLimit = 10;
constexpr int kMaxFixedPointIterations = 200;
constexpr int kMaxNewtonIterations = 50;

template <int N>
using Vec = Eigen::Matrix<double, N, 1>;
template <int N>
using Mat = Eigen::Matrix<double, N, N>;

template <int N>
double stage_residual(const Vec<N>& next, const Vec<N>& prev) {
    return (next - prev).template lpNorm<Eigen::Infinity>() /
           std::max(1.0, next.template lpNorm<Eigen::Infinity>());
}

// Solves k = f(x + h/2 k) and returns x + h k.
template <int N, class Field, class Jac>
Vec<N> midpoint_step(const Field& f, const Jac& jac, const Vec<N>& x, double h, double t,
                     Vec<N>& k) {
    double last = std::numeric_limits<double>::infinity();
    int non_contracting = 0;
    for (int it = 0; it < kMaxFixedPointIterations; ++it) {
        const Vec<N> next = f(Vec<N>(x + 0.5 * h * k));
        const double r = stage_residual<N>(next, k);
        k = next;
        if (r <= kStageTolerance) return x + h * k;
        if (r >= last && ++non_contracting >= kNonContractingLimit) break;
        last = r;
    }

    for (int it = 0; it < kMaxNewtonIterations; ++it) {
        const Vec<N> mid = x + 0.5 * h * k;
        const Vec<N> g = k - f(mid);
        const Mat<N> dg = Mat<N>::Identity() - 0.5 * h * jac(mid);
        const Vec<N> dk = dg.partialPivLu().solve(g);
        k -= dk;
        if (!k.allFinite()) break;
        if (dk.template lpNorm<Eigen::Infinity>() <=
            kStageTolerance * std::max(1.0, k.template lpNorm<Eigen::Infinity>()))
            return x + h * k;
    }
    throw StepFailureError("implicit midpoint stage did not converge at t = " + std::to_string(t),
                           t);
}

template <int N, class Energy>
void record(BasicTrajectory<N>& traj, double t, const Vec<N>& x, const Energy& energy) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    const double e = energy(x);
    traj.energies.push_back(e);
    traj.energy_drift = std::max(traj.energy_drift, std::abs(e - traj.energies.front()));
}

template <int N, class Field, class Jac, class Energy>
BasicTrajectory<N> run(const Field& f, const Jac& jac, const Energy& energy, const Vec<N>& x0,
                       double T, const IntegratorSpec& spec) {
    spec.validate();
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("integrate: T must be finite and > 0");
    if (!x0.allFinite()) throw DomainError("integrate: non-finite initial state");

    BasicTrajectory<N> traj;
    record<N>(traj, 0.0, x0, energy);
    Vec<N> x = x0;

    auto truncated = [&](double t) {
        return TruncationError<N>("integrate: max_steps reached at t = " + std::to_string(t),
                                  std::move(traj));
    };

    if (spec.method == Method::ImplicitMidpoint) {
        const auto n_steps = static_cast<long>(std::ceil(T / spec.step - 1e-9));
        traj.times.reserve(std::min(n_steps, spec.max_steps) + 1);
        traj.states.reserve(std::min(n_steps, spec.max_steps) + 1);
        traj.energies.reserve(std::min(n_steps, spec.max_steps) + 1);
        Vec<N> k = f(x);
        for (long i = 0; i < n_steps; ++i) {
            if (i == spec.max_steps) throw truncated(traj.times.back());
            const double t0 = static_cast<double>(i) * spec.step;
            const double t1 = i + 1 == n_steps ? T : static_cast<double>(i + 1) * spec.step;
            x = midpoint_step<N>(f, jac, x, t1 - t0, t0, k);
            record<N>(traj, t1, x, energy);
        }
        traj.drift_constant = traj.energy_drift / (spec.step * spec.step);
        return traj;
    }

    namespace odeint = boost::numeric::odeint;
    using Array = std::array<double, N>;
    auto system = [&](const Array& y, Array& dy, double) {
        const Vec<N> d = f(Eigen::Map<const Vec<N>>(y.data()));
        Eigen::Map<Vec<N>>(dy.data()) = d;
    };
    auto stepper = odeint::make_controlled(spec.tolerance, spec.tolerance,
                                           odeint::runge_kutta_dopri5<Array>());
    Array y;
    Eigen::Map<Vec<N>>(y.data()) = x0;
    double t = 0.0;
    double dt = std::min(T, 1e-3);
    long accepted = 0;
    int rejected_in_row = 0;
    while (T - t > 1e-14 * T) {
        if (accepted == spec.max_steps) throw truncated(t);
        dt = std::min(dt, T - t);
        if (stepper.try_step(system, y, t, dt) == odeint::success) {
            ++accepted;
            rejected_in_row = 0;
            record<N>(traj, t, Vec<N>(Eigen::Map<const Vec<N>>(y.data())), energy);
        } else if (++rejected_in_row > 500 || dt < 1e-14 * T) {
            throw StepFailureError("adaptive step size underflow at t = " + std::to_string(t), t);
        }
    }
    traj.times.back() = T;
    return traj;
}

}  // namespace

std::string_view to_string(Method method) {
    return method == Method::ImplicitMidpoint ? "implicit-midpoint" : "adaptive";
}

Method method_from_string(std::string_view name) {
    if (name == "implicit-midpoint" || name == "midpoint") return Method::ImplicitMidpoint;
    if (name == "adaptive" || name == "explicit-adaptive") return Method::ExplicitAdaptive;
    throw DomainError("unknown integrator method '" + std::string(name) +
                      "' (expected implicit-midpoint or adaptive)");
}

IntegratorSpec IntegratorSpec::midpoint(double step, long max_steps) {
    IntegratorSpec spec;
    spec.method = Method::ImplicitMidpoint;
    spec.step = step;
    spec.max_steps = max_steps;
    return spec;
}

IntegratorSpec IntegratorSpec::adaptive(double tolerance, long max_steps) {
    IntegratorSpec spec;
    spec.method = Method::ExplicitAdaptive;
    spec.tolerance = tolerance;
    spec.max_steps = max_steps;
    return spec;
}

void IntegratorSpec::validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("integrator step must be > 0");
    if (!(tolerance > 0.0 && tolerance <= 1e-2))
        throw DomainError("integrator tolerance must lie in (0, 1e-2]");
    if (max_steps <= 0) throw DomainError("integrator max_steps must be > 0");
}

Trajectory integrate(const ArmParams& params, const Torques& torques, const State& s0, double T,
                     const IntegratorSpec& spec) {
    auto f = [&](const State& x) { return vector_field(params, torques, x); };
    auto jac = [&](const State& x) { return jacobian(params, x); };
    auto energy = [&](const State& x) { return hamiltonian(params, torques, x); };
    return run<4>(f, jac, energy, s0, T, spec);
}

ReducedTrajectory integrate_reduced(const ArmParams& params, const Eigen::Vector2d& r0, double T,
                                    const IntegratorSpec& spec) {
    auto f = [&](const Eigen::Vector2d& r) { return reduced_vector_field(params, r); };
    auto jac = [&](const Eigen::Vector2d& r) {
        Eigen::Matrix2d J;
        J << 0.0, 1.0 / (2.0 * params.inertia()), -2.0 * params.mgl() * std::cos(r[0]), 0.0;
        return J;
    };
    auto energy = [&](const Eigen::Vector2d& r) {
        return reduced_energy(params, ManifoldId::M1, r);
    };
    return run<2>(f, jac, energy, r0, T, spec);
}

}  // namespace robotarm
