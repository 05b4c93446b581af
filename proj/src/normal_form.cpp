#include "robotarm/normal_form.hpp"

#include <cmath>

#include <Eigen/LU>

namespace robotarm {

double NormalFormFrame::symplectic_defect() const {
    const Eigen::Matrix4d S = symplectic_form();
    return (transform.transpose() * S * transform - S).cwiseAbs().maxCoeff();
}

double NormalFormFrame::block_coupling() const {
    const Eigen::Matrix4d pulled = transform.transpose() * hessian * transform;
    return pulled.block<2, 2>(0, 2).cwiseAbs().maxCoeff() / pulled.norm();
}

NormalFormFrame build_normal_form(const ArmParams& params, const Torques& torques,
                                  const FixedPoint& fp, double tol_zero) {
    if (!fp.exists) throw ClassificationError("normal form: fixed point does not exist");
    const Jacobian4 J = jacobian(params, fp.state);
    const EigenSet eig = eigen4(J);
    const Classification cls = classify(eig, tol_zero);
    if (cls.kind != FixedPointKind::SaddleCenter)
        throw ClassificationError("normal form requires a SaddleCenter, got " +
                                  std::string(to_string(cls.kind)));

    // eigen4 sorts by real part: [-nu, +-i omega (either order), +nu].
    int stable = 0, unstable = 3, rotating = -1;
    for (int i = 1; i <= 2; ++i)
        if (eig.values[i].imag() > 0.0) rotating = i;
    if (rotating < 0) throw NumericalError("normal form: missing +i omega eigenvalue");

    const Eigen::Matrix4d S = symplectic_form();
    const Eigen::Vector4d u_plus = eig.vectors[unstable].real();
    const Eigen::Vector4d u_minus = eig.vectors[stable].real();
    const Eigen::Vector4d a = eig.vectors[rotating].real();
    const Eigen::Vector4d b = eig.vectors[rotating].imag();

    const double w_hyp = u_plus.dot(S * u_minus);
    const double w_rot = a.dot(S * b);
    if (!(std::abs(w_hyp) > 1e-12) || !(std::abs(w_rot) > 1e-12))
        throw NumericalError("normal form: eigenvectors are symplectically degenerate");
    // A positive-definite rotational energy needs a^T S b > 0 for the +i omega
    // eigenvector; the opposite Krein sign would make E_rot negative definite.
    if (w_rot < 0.0)
        throw ClassificationError("normal form: rotational plane carries negative energy");

    NormalFormFrame frame;
    frame.base_point = fp.state;
    frame.nu = eig.values[unstable].real();
    frame.omega = eig.values[rotating].imag();
    frame.epsilon = hamiltonian(params, torques, fp.state);
    frame.hessian = hessian(params, fp.state);

    // With x = (alpha u+ + beta u-)/2 and p_x = (alpha u+ - beta u-)/2 the
    // symplectic pairing is -alpha beta w_hyp / 2, normalized to 1.
    const double alpha = std::sqrt(2.0 / std::abs(w_hyp));
    const double beta = -std::copysign(alpha, w_hyp);
    const double kappa = 1.0 / std::sqrt(w_rot);
    frame.transform.col(0) = 0.5 * (alpha * u_plus + beta * u_minus);
    frame.transform.col(1) = 0.5 * (alpha * u_plus - beta * u_minus);
    frame.transform.col(2) = kappa * a;
    frame.transform.col(3) = kappa * b;

    const Eigen::FullPivLU<Eigen::Matrix4d> lu(frame.transform);
    if (!lu.isInvertible()) throw NumericalError("normal form: singular transform");
    frame.inverse_transform = lu.inverse();
    return frame;
}

NormalCoords to_normal_coords(const NormalFormFrame& frame, const State& s) {
    return frame.inverse_transform * (s - frame.base_point);
}

State from_normal_coords(const NormalFormFrame& frame, const NormalCoords& z) {
    return frame.base_point + frame.transform * z;
}

std::string_view to_string(MotionClass c) {
    switch (c) {
        case MotionClass::Stationary: return "Stationary";
        case MotionClass::PurePeriodic: return "PurePeriodic";
        case MotionClass::PureHyperbolic: return "PureHyperbolic";
        case MotionClass::Mixed: return "Mixed";
    }
    return "Stationary";
}

EnergySplit energy_split_normal(const NormalFormFrame& frame, const NormalCoords& z, double tol) {
    EnergySplit out;
    out.e_hyp = 0.5 * frame.nu * (z[1] - z[0]) * (z[1] + z[0]);
    out.e_rot = 0.5 * frame.omega * (z[2] * z[2] + z[3] * z[3]);
    out.hyp_amplitude = 0.5 * frame.nu * (z[0] * z[0] + z[1] * z[1]);
    const bool hyp = out.hyp_amplitude > tol;
    const bool rot = out.e_rot > tol;
    if (hyp && rot)
        out.motion_class = MotionClass::Mixed;
    else if (hyp)
        out.motion_class = MotionClass::PureHyperbolic;
    else if (rot)
        out.motion_class = MotionClass::PurePeriodic;
    else
        out.motion_class = MotionClass::Stationary;
    return out;
}

EnergySplit energy_split(const NormalFormFrame& frame, const State& s, double tol) {
    return energy_split_normal(frame, to_normal_coords(frame, s), tol);
}

double quadratic_hamiltonian(const NormalFormFrame& frame, const State& s) {
    const Eigen::Vector4d d = s - frame.base_point;
    return frame.epsilon + 0.5 * d.dot(frame.hessian * d);
}

NormalCoords linearized_orbit(const NormalFormFrame& frame, const NormalCoords& z0, double t) {
    // Light-cone coordinates u = p_x + x (unstable) and v = p_x - x (stable)
    // avoid the cancellation cosh/sinh would give at large nu t.
    const double u = (z0[1] + z0[0]) * std::exp(frame.nu * t);
    const double v = (z0[1] - z0[0]) * std::exp(-frame.nu * t);
    const double co = std::cos(frame.omega * t), si = std::sin(frame.omega * t);
    NormalCoords z;
    z[0] = 0.5 * (u - v);
    z[1] = 0.5 * (u + v);
    z[2] = co * z0[2] + si * z0[3];
    z[3] = -si * z0[2] + co * z0[3];
    return z;
}

}  // namespace robotarm
