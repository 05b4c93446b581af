#pragma once

#include <string_view>

#include <Eigen/Core>

#include "robotarm/equilibria.hpp"
#include "robotarm/linear_analysis.hpp"

namespace robotarm {

/// Normal coordinates (x, p_x, y, p_y): (x, p_x) hyperbolic, (y, p_y) rotational.
using NormalCoords = Eigen::Vector4d;

/// Linear symplectic chart at a saddle-center in which the quadratic part of
/// H splits into
///   E_hyp = (nu / 2)    (p_x^2 - x^2)
///   E_rot = (omega / 2) (y^2 + p_y^2),
/// so that H ~ epsilon + E_hyp + E_rot. The unstable direction is
/// x = p_x, the stable one x = -p_x.
struct NormalFormFrame {
    State base_point;
    Eigen::Matrix4d transform;          ///< normal coords -> state displacement
    Eigen::Matrix4d inverse_transform;  ///< state displacement -> normal coords
    double nu = 0.0;                    ///< hyperbolic exponent
    double omega = 0.0;                 ///< rotation frequency
    double epsilon = 0.0;               ///< H(base_point)
    Eigen::Matrix4d hessian;            ///< Hessian of H at base_point

    /// max |T^T S T - S|
    double symplectic_defect() const;
    /// Largest (x,p_x)-(y,p_y) coupling entry of T^T Hess T over its norm.
    double block_coupling() const;
};

/// Builds the chart from the eigen-decomposition of the Jacobian at `fp`.
/// Throws ClassificationError unless the point classifies as SaddleCenter,
/// and NumericalError if the eigenvectors cannot be normalized.
NormalFormFrame build_normal_form(const ArmParams& params, const Torques& torques,
                                  const FixedPoint& fp, double tol_zero);

NormalCoords to_normal_coords(const NormalFormFrame& frame, const State& s);
State from_normal_coords(const NormalFormFrame& frame, const NormalCoords& z);

enum class MotionClass { Stationary, PurePeriodic, PureHyperbolic, Mixed };
std::string_view to_string(MotionClass c);

struct EnergySplit {
    double e_hyp = 0.0;
    double e_rot = 0.0;
    /// (nu / 2)(x^2 + p_x^2). Unlike e_hyp it vanishes only at x = p_x = 0,
    /// so orbits on the stable and unstable rays (e_hyp = 0) still count as
    /// hyperbolic.
    double hyp_amplitude = 0.0;
    MotionClass motion_class = MotionClass::Stationary;
};

/// Default motion-class threshold, 1e-10 mgL.
inline double default_tol_motion(const ArmParams& params) { return 1e-10 * params.mgl(); }

/// The hyperbolic mode is present when hyp_amplitude exceeds `tol`, the
/// rotational one when e_rot does.
EnergySplit energy_split(const NormalFormFrame& frame, const State& s, double tol);
EnergySplit energy_split_normal(const NormalFormFrame& frame, const NormalCoords& z, double tol);

/// epsilon + (1/2) d^T Hess d with d = s - base_point.
double quadratic_hamiltonian(const NormalFormFrame& frame, const State& s);

/// Exact flow of the quadratic normal form: hyperbolic rotation by nu t in
/// (x, p_x), rotation by omega t in (y, p_y).
NormalCoords linearized_orbit(const NormalFormFrame& frame, const NormalCoords& z0, double t);

}  // namespace robotarm
