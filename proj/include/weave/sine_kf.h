#pragma once

#include <Eigen/Core>

namespace weave
{
using Matrix2 = Eigen::Matrix<double, 2, 2, Eigen::RowMajor>;
using Vector2 = Eigen::Vector2d;

/// Harmonic-oscillator model x'' = -omega^2 x driven by white acceleration
/// noise of spectral density phi_s, observed in position with variance r.
struct SineModel
{
        double omega = 1;  // rad/s
        double dt = 0.01;  // s
        double phi_s = 0;  // (m/s^2)^2 s
        double r = 1;      // m^2
};

void validate(const SineModel& model);

/// State (position, velocity) and its error covariance.
struct KalmanFilterState
{
        Vector2 x_hat = Vector2::Zero();
        Matrix2 p = Matrix2::Identity();
};

// exp(F dt) for F = [[0, 1], [-omega^2, 0]].
Matrix2 transition_matrix(double omega, double dt);

/// Discrete process noise: integral over [0, dt] of Phi(tau) diag(0, phi_s) Phi(tau)^T.
/// With s = sin(omega dt), c = cos(omega dt):
///   Q11 = phi_s (omega dt - s c) / (2 omega^3)
///   Q12 = phi_s s^2 / (2 omega^2)
///   Q22 = phi_s (omega dt + s c) / (2 omega)
/// The Q11 difference is evaluated by series for small omega dt.
Matrix2 process_noise(const SineModel& model);

struct KalmanStep
{
        KalmanFilterState next;
        double residual = 0;
        double residual_var = 0;
};

/// One predict/update cycle with H = [1 0]:
///   M = Phi P Phi^T + Q,  C = M11 + r,  K = M H^T / C,
///   P+ = (I - K H) M (then symmetrized),  x+ = Phi x + K (z - H Phi x).
/// Throws numeric on non-finite input and invariant when C <= 0.
KalmanStep kf_step(const KalmanFilterState& state, double z, const SineModel& model);

// Same cycle with Phi and Q already evaluated for the model.
KalmanStep kf_step(const KalmanFilterState& state, double z, const Matrix2& phi, const Matrix2& q, double r);
}
