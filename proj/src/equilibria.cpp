#include "robotarm/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "robotarm/linear_analysis.hpp"

namespace robotarm {

namespace {

constexpr double kBoundaryRelTol = 1e-12;

struct JointLimit {
    double ratio;  // beta / beta_max, clamped to [-1, 1] when on the boundary
    bool exists;
    bool on_boundary;
};

JointLimit joint_limit(double beta, double beta_max) {
    const double excess = std::abs(beta) - beta_max;
    JointLimit out{};
    out.on_boundary = std::abs(excess) <= kBoundaryRelTol * beta_max;
    out.exists = excess <= 0.0 || out.on_boundary;
    out.ratio = std::clamp(beta / beta_max, -1.0, 1.0) + 0.0;  // + 0.0 drops a negative zero
    return out;
}

double branch_angle(double ratio, int cos_sign) {
    const double a = std::asin(ratio);
    return cos_sign > 0 ? a + 0.0 : std::numbers::pi - a;
}

bool on_torque_boundary(const ArmParams& params, const Torques& torques) {
    return joint_limit(torques.beta1, 2.0 * params.mgl()).on_boundary ||
           joint_limit(torques.beta2, params.mgl()).on_boundary;
}

}  // namespace

Branch Branch::from_label(const std::string& label) {
    if (label.size() != 2) throw DomainError("branch label must be two of '+'/'-': " + label);
    auto sign = [&](char ch) {
        if (ch == '+') return +1;
        if (ch == '-') return -1;
        throw DomainError("branch label must be two of '+'/'-': " + label);
    };
    return Branch{sign(label[0]), sign(label[1])};
}

int branch_index(const Branch& b) {
    return (b.s1 > 0 ? 0 : 2) + (b.s2 > 0 ? 0 : 1);
}

std::array<FixedPoint, 4> analytic_fixed_points(const ArmParams& params, const Torques& torques) {
    const JointLimit j1 = joint_limit(torques.beta1, 2.0 * params.mgl());
    const JointLimit j2 = joint_limit(torques.beta2, params.mgl());

    std::array<FixedPoint, 4> out;
    for (std::size_t i = 0; i < kBranches.size(); ++i) {
        FixedPoint& fp = out[i];
        fp.branch = kBranches[i];
        fp.exists = j1.exists && j2.exists;
        fp.on_boundary = fp.exists && (j1.on_boundary || j2.on_boundary);
        if (!fp.exists) continue;
        fp.state = make_state(branch_angle(j1.ratio, fp.branch.s1), 0.0,
                              branch_angle(j2.ratio, fp.branch.s2), 0.0);
        fp.energy = hamiltonian(params, torques, fp.state);
    }
    return out;
}

RefinedFixedPoint refine_fixed_point(const ArmParams& params, const Torques& torques,
                                     const State& guess) {
    constexpr int kMaxIterations = 100;
    constexpr int kMaxHalvings = 30;
    detail::require_finite(guess, "refine_fixed_point");

    const double target = 1e-12 * params.mgl();
    State x = guess;
    State f = vector_field(params, torques, x);
    double residual = f.lpNorm<Eigen::Infinity>();

    int iter = 0;
    for (; residual > target; ++iter) {
        if (iter == kMaxIterations)
            throw ConvergenceError("refine_fixed_point: no convergence in 100 iterations", residual);

        const Eigen::PartialPivLU<Jacobian4> lu(jacobian(params, x));
        if (!(lu.rcond() > 1e-14))
            throw SingularityError("refine_fixed_point: singular Jacobian at iterate " +
                                   std::to_string(iter));
        const State step = -lu.solve(f);

        double scale = 1.0;
        bool accepted = false;
        for (int h = 0; h <= kMaxHalvings; ++h, scale *= 0.5) {
            const State trial = x + scale * step;
            const State ft = vector_field(params, torques, trial);
            const double rt = ft.lpNorm<Eigen::Infinity>();
            if (rt < residual) {
                x = trial;
                f = ft;
                residual = rt;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            throw ConvergenceError("refine_fixed_point: damped step failed to reduce the residual",
                                   residual);
    }

    RefinedFixedPoint out;
    out.iterations = iter;
    out.residual = residual;
    out.point.exists = true;
    out.point.on_boundary = on_torque_boundary(params, torques);
    out.point.branch = Branch{std::cos(x[kTheta1]) >= 0.0 ? +1 : -1,
                              std::cos(x[kTheta2]) >= 0.0 ? +1 : -1};
    out.point.state = x;
    out.point.energy = hamiltonian(params, torques, x);
    return out;
}

std::array<double, 4> fixed_point_energies_closed_form(const ArmParams& params,
                                                       const Torques& torques) {
    const double mgl = params.mgl();
    const double b1 = torques.beta1, b2 = torques.beta2;
    const double arg1 = 4.0 * mgl * mgl - b1 * b1;
    const double arg2 = mgl * mgl - b2 * b2;
    if (arg1 < 0.0 || arg2 < 0.0)
        throw DomainError("closed-form energies: torques outside the existence region");
    const double r1 = std::sqrt(arg1);
    const double r2 = std::sqrt(arg2);

    const double e1 = -r2 - r1 - std::atan(b1 / r1) * b1 - std::atan(b2 / r2) * b2;
    const double e2 = -r2 + r1 - std::atan(b1 / -r1) * b1 - std::atan(b2 / r2) * b2;
    const double e3 = r2 - r1 - std::atan(b1 / r1) * b1 - std::atan(b2 / -r2) * b2;
    const double e4 = r2 + r1 - std::atan(b1 / -r1) * b1 - std::atan(b2 / -r2) * b2;
    return {e1, e3, e2, e4};
}

}  // namespace robotarm
