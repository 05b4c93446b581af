#pragma once

#include <array>
#include <complex>
#include <string_view>

#include <Eigen/Core>

#include "robotarm/model.hpp"

namespace robotarm {

using Jacobian4 = Eigen::Matrix4d;
using ComplexVector4 = Eigen::Matrix<std::complex<double>, 4, 1>;

/// Canonical symplectic form for the interleaved (q1, p1, q2, p2) ordering.
inline Eigen::Matrix4d symplectic_form() {
    Eigen::Matrix4d S = Eigen::Matrix4d::Zero();
    S(0, 1) = 1.0;
    S(1, 0) = -1.0;
    S(2, 3) = 1.0;
    S(3, 2) = -1.0;
    return S;
}

/// Analytic derivative of the vector field at `x`. The torques only shift the
/// momentum equations by constants, so they do not appear here.
Jacobian4 jacobian(const ArmParams& params, const State& x);

/// Hessian of the Hamiltonian at `x`, recovered as S^{-1} J.
Eigen::Matrix4d hessian(const ArmParams& params, const State& x);

struct EigenSet {
    std::array<std::complex<double>, 4> values;
    std::array<ComplexVector4, 4> vectors;  ///< unit 2-norm
    std::array<double, 4> residuals;        ///< ||J v - lambda v|| / ||v||
    double matrix_norm = 0.0;               ///< Frobenius norm of the input

    double min_modulus() const;
    double max_residual() const;
};

/// Eigenvalues and eigenvectors of a 4x4 real matrix, sorted by
/// (real part, imaginary part). Throws NumericalError if the residuals do
/// not meet 1e-9 ||J||.
EigenSet eigen4(const Jacobian4& J);

enum class FixedPointKind { PureCenter, SaddleCenter, PureSaddle, Degenerate };

std::string_view to_string(FixedPointKind kind);
FixedPointKind fixed_point_kind_from_string(std::string_view name);

struct Classification {
    FixedPointKind kind = FixedPointKind::Degenerate;
    int real_pairs = 0;
    int imaginary_pairs = 0;
    int zero_values = 0;
};

/// Default zero threshold for eigenvalue moduli, 1e-7 omega0.
inline double default_tol_zero(const ArmParams& params) { return 1e-7 * params.omega0(); }

/// Linear type of an equilibrium from its spectrum. Degenerate wins whenever
/// some |lambda| < tol_zero. Otherwise eigenvalues must come in (lambda,
/// -lambda) pairs that are each either real or imaginary (relative to
/// tol_zero * ||J|| and 1e-9 ||J|| respectively); anything else throws
/// ClassificationError.
Classification classify(const EigenSet& eig, double tol_zero);

/// exp(J t) x0. Uses the eigen-decomposition unless the eigenvector matrix
/// has condition number above 1e8, in which case the matrix exponential is
/// evaluated by scaling and squaring.
Eigen::Vector4d linear_propagate(const Jacobian4& J, const Eigen::Vector4d& x0, double t);

}  // namespace robotarm
