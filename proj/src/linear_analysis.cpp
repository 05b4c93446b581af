#include "robotarm/linear_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

namespace robotarm {

Jacobian4 jacobian(const ArmParams& params, const State& x) {
    detail::require_finite(x, "jacobian");
    const detail::KineticTerms<double> k(params, x);
    const double p1 = x[kP1], p2 = x[kP2];
    const double s = k.s, c = k.c, D = k.D, aD = k.aD, N = k.N;
    const double aD2 = aD * D;
    const double aD3 = aD2 * D;
    const double mgl = params.mgl();

    // Velocities A = (p1 - c p2)/aD and B = (2 p2 - c p1)/aD, differentiated
    // in d = theta1 - theta2 (dD/dd = 2 s c).
    const double A = (p1 - c * p2) / aD;
    const double B = (2.0 * p2 - c * p1) / aD;
    const double dA_dd = s * p2 / aD - A * 2.0 * s * c / D;
    const double dB_dd = s * p1 / aD - B * 2.0 * s * c / D;

    // F = dT/dd = s p1 p2 / aD - N s c / aD^2 (aD^2 meaning aD * D here).
    const double dF_dp1 = s * p2 / aD - (2.0 * p1 - 2.0 * c * p2) * s * c / aD2;
    const double dF_dp2 = s * p1 / aD - (4.0 * p2 - 2.0 * c * p1) * s * c / aD2;
    const double dF_dd = p1 * p2 * c * (1.0 / aD - 2.0 * s * s / aD2) -
                         (2.0 * s * s * c * p1 * p2 + N * (c * c - s * s)) / aD2 +
                         4.0 * N * s * s * c * c / aD3;

    Jacobian4 J;
    J(kTheta1, kTheta1) = dA_dd;
    J(kTheta1, kP1) = 1.0 / aD;
    J(kTheta1, kTheta2) = -dA_dd;
    J(kTheta1, kP2) = -c / aD;

    J(kP1, kTheta1) = -dF_dd - 2.0 * mgl * std::cos(x[kTheta1]);
    J(kP1, kP1) = -dF_dp1;
    J(kP1, kTheta2) = dF_dd;
    J(kP1, kP2) = -dF_dp2;

    J(kTheta2, kTheta1) = dB_dd;
    J(kTheta2, kP1) = -c / aD;
    J(kTheta2, kTheta2) = -dB_dd;
    J(kTheta2, kP2) = 2.0 / aD;

    J(kP2, kTheta1) = dF_dd;
    J(kP2, kP1) = dF_dp1;
    J(kP2, kTheta2) = -dF_dd - mgl * std::cos(x[kTheta2]);
    J(kP2, kP2) = dF_dp2;
    return J;
}

Eigen::Matrix4d hessian(const ArmParams& params, const State& x) {
    // J = S Hess and S^{-1} = -S.
    const Eigen::Matrix4d hess = -symplectic_form() * jacobian(params, x);
    return 0.5 * (hess + hess.transpose());
}

double EigenSet::min_modulus() const {
    double best = std::abs(values[0]);
    for (const auto& v : values) best = std::min(best, std::abs(v));
    return best;
}

double EigenSet::max_residual() const {
    return *std::max_element(residuals.begin(), residuals.end());
}

EigenSet eigen4(const Jacobian4& J) {
    if (!J.allFinite()) throw DomainError("eigen4: non-finite matrix");
    Eigen::EigenSolver<Jacobian4> solver(J, true);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigen4: real Schur iteration did not converge");

    std::array<int, 4> order{0, 1, 2, 3};
    const auto& vals = solver.eigenvalues();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (vals[a].real() != vals[b].real()) return vals[a].real() < vals[b].real();
        return vals[a].imag() < vals[b].imag();
    });

    EigenSet out;
    out.matrix_norm = J.norm();
    const Eigen::Matrix4cd Jc = J.cast<std::complex<double>>();
    for (int i = 0; i < 4; ++i) {
        const int j = order[i];
        out.values[i] = vals[j];
        ComplexVector4 v = solver.eigenvectors().col(j);
        v /= v.norm();
        out.vectors[i] = v;
        out.residuals[i] = (Jc * v - vals[j] * v).norm();
    }
    const double limit = 1e-9 * std::max(out.matrix_norm, 1e-300);
    if (out.max_residual() > limit)
        throw NumericalError("eigen4: eigenpair residual " + std::to_string(out.max_residual()) +
                             " exceeds " + std::to_string(limit));
    return out;
}

std::string_view to_string(FixedPointKind kind) {
    switch (kind) {
        case FixedPointKind::PureCenter: return "PureCenter";
        case FixedPointKind::SaddleCenter: return "SaddleCenter";
        case FixedPointKind::PureSaddle: return "PureSaddle";
        case FixedPointKind::Degenerate: return "Degenerate";
    }
    return "Degenerate";
}

FixedPointKind fixed_point_kind_from_string(std::string_view name) {
    for (auto k : {FixedPointKind::PureCenter, FixedPointKind::SaddleCenter,
                   FixedPointKind::PureSaddle, FixedPointKind::Degenerate})
        if (to_string(k) == name) return k;
    throw DomainError("unknown fixed point kind: " + std::string(name));
}

Classification classify(const EigenSet& eig, double tol_zero) {
    Classification out;
    for (const auto& v : eig.values)
        if (std::abs(v) < tol_zero) ++out.zero_values;
    if (out.zero_values > 0) {
        out.kind = FixedPointKind::Degenerate;
        return out;
    }

    const double tol = tol_zero * eig.matrix_norm;
    std::array<bool, 4> used{};
    for (int i = 0; i < 4; ++i) {
        if (used[i]) continue;
        int partner = -1;
        double best = tol;
        for (int j = 0; j < 4; ++j) {
            if (j == i || used[j]) continue;
            const double gap = std::abs(eig.values[i] + eig.values[j]);
            if (gap <= best) {
                best = gap;
                partner = j;
            }
        }
        if (partner < 0)
            throw ClassificationError("classify: eigenvalue without a (lambda, -lambda) partner");
        used[i] = used[partner] = true;

        const auto& v = eig.values[i];
        if (std::abs(v.imag()) < tol)
            ++out.real_pairs;
        else if (std::abs(v.real()) < tol)
            ++out.imaginary_pairs;
        else
            throw ClassificationError("classify: complex quartet (focus-focus) spectrum");
    }

    if (out.imaginary_pairs == 2)
        out.kind = FixedPointKind::PureCenter;
    else if (out.real_pairs == 2)
        out.kind = FixedPointKind::PureSaddle;
    else
        out.kind = FixedPointKind::SaddleCenter;
    return out;
}

Eigen::Vector4d linear_propagate(const Jacobian4& J, const Eigen::Vector4d& x0, double t) {
    if (!std::isfinite(t)) throw DomainError("linear_propagate: non-finite time");
    if (x0.isZero(0.0)) return Eigen::Vector4d::Zero();

    Eigen::EigenSolver<Jacobian4> solver(J, true);
    if (solver.info() == Eigen::Success) {
        const Eigen::Matrix4cd V = solver.eigenvectors();
        const Eigen::FullPivLU<Eigen::Matrix4cd> lu(V);
        if (lu.isInvertible()) {
            const double cond = V.norm() * lu.inverse().norm();
            if (cond <= 1e8) {
                const Eigen::Vector4cd coeff = lu.solve(x0.cast<std::complex<double>>());
                Eigen::Vector4cd modal;
                for (int i = 0; i < 4; ++i) modal[i] = std::exp(solver.eigenvalues()[i] * t) * coeff[i];
                return (V * modal).real();
            }
        }
    }
    const Eigen::Matrix4d Jt = J * t;
    return Jt.exp() * x0;
}

}  // namespace robotarm
