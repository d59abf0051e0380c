#include <weave/error.h>
#include <weave/sine_kf.h>

#include <cmath>

namespace weave
{
namespace
{
// x - sin(x), accurate near zero.
double x_minus_sin(const double x)
{
        if (std::abs(x) >= 0.5)
        {
                return x - std::sin(x);
        }
        const double x2 = x * x;
        double term = x * x2 / 6;
        double sum = 0;
        for (int n = 1; n < 12; ++n)
        {
                sum += term;
                term *= -x2 / ((2 * n + 2) * (2 * n + 3));
        }
        return sum;
}
}

void validate(const SineModel& model)
{
        require(std::isfinite(model.omega) && model.omega > 0, ErrorKind::parameter, "sine model: omega must be > 0");
        require(std::isfinite(model.dt) && model.dt > 0, ErrorKind::parameter, "sine model: dt must be > 0");
        require(std::isfinite(model.phi_s) && model.phi_s >= 0, ErrorKind::parameter,
                "sine model: phi_s must be >= 0");
        require(std::isfinite(model.r) && model.r > 0, ErrorKind::parameter, "sine model: r must be > 0");
}

Matrix2 transition_matrix(const double omega, const double dt)
{
        const double c = std::cos(omega * dt);
        const double s = std::sin(omega * dt);
        Matrix2 phi;
        phi << c, s / omega, -omega * s, c;
        return phi;
}

Matrix2 process_noise(const SineModel& model)
{
        const double w = model.omega;
        const double a = w * model.dt;
        const double s = std::sin(a);
        // omega dt -/+ sin cos = (2a -/+ sin 2a) / 2
        const double minus = x_minus_sin(2 * a) / 2;
        const double plus = a + s * std::cos(a);
        Matrix2 q;
        q(0, 0) = model.phi_s * minus / (2 * w * w * w);
        q(0, 1) = model.phi_s * s * s / (2 * w * w);
        q(1, 0) = q(0, 1);
        q(1, 1) = model.phi_s * plus / (2 * w);
        return q;
}

KalmanStep kf_step(const KalmanFilterState& state, const double z, const SineModel& model)
{
        return kf_step(state, z, transition_matrix(model.omega, model.dt), process_noise(model), model.r);
}

KalmanStep kf_step(
        const KalmanFilterState& state,
        const double z,
        const Matrix2& phi,
        const Matrix2& q,
        const double r)
{
        require(std::isfinite(z) && state.x_hat.allFinite() && state.p.allFinite(), ErrorKind::numeric,
                "kf_step: non-finite input");

        const Vector2 x_pred = phi * state.x_hat;
        const Matrix2 m = phi * state.p * phi.transpose() + q;
        const double c = m(0, 0) + r;
        require(c > 0 && std::isfinite(c), ErrorKind::invariant, "kf_step: residual variance is not positive");

        const Vector2 gain = m.col(0) / c;
        const double residual = z - x_pred(0);

        KalmanStep out;
        out.next.x_hat = x_pred + gain * residual;
        // (I - K H) M
        Matrix2 p = m - gain * m.row(0);
        out.next.p = (p + p.transpose()) / 2;
        out.residual = residual;
        out.residual_var = c;
        return out;
}
}
