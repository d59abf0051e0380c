#pragma once

// Independent reference computations. None of these call into the library's
// numerical code, so agreement with them is evidence rather than tautology.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle
{
using Mat2 = std::array<std::array<double, 2>, 2>;

inline Mat2 matmul(const Mat2& a, const Mat2& b)
{
        Mat2 c{};
        for (int i = 0; i < 2; ++i)
        {
                for (int j = 0; j < 2; ++j)
                {
                        c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
                }
        }
        return c;
}

inline Mat2 transpose(const Mat2& a)
{
        return {{{a[0][0], a[1][0]}, {a[0][1], a[1][1]}}};
}

// exp(A) by scaling and squaring around a 30-term Taylor series.
inline Mat2 expm(Mat2 a)
{
        const double norm = std::abs(a[0][0]) + std::abs(a[0][1]) + std::abs(a[1][0]) + std::abs(a[1][1]);
        int squarings = 0;
        while (norm / std::ldexp(1.0, squarings) > 0.25)
        {
                ++squarings;
        }
        const double scale = std::ldexp(1.0, -squarings);
        for (auto& row : a)
        {
                for (double& x : row)
                {
                        x *= scale;
                }
        }
        Mat2 sum{{{1, 0}, {0, 1}}};
        Mat2 term = sum;
        for (int k = 1; k <= 30; ++k)
        {
                term = matmul(term, a);
                for (auto& row : term)
                {
                        for (double& x : row)
                        {
                                x /= k;
                        }
                }
                for (int i = 0; i < 2; ++i)
                {
                        for (int j = 0; j < 2; ++j)
                        {
                                sum[i][j] += term[i][j];
                        }
                }
        }
        for (int s = 0; s < squarings; ++s)
        {
                sum = matmul(sum, sum);
        }
        return sum;
}

// exp(F t) for F = [[0, 1], [-omega^2, 0]], evaluated on the similar matrix
// D^-1 F D with D = diag(1, omega) to keep the series well scaled.
inline Mat2 oscillator_expm(double omega, double t)
{
        const Mat2 e = expm({{{0, omega * t}, {-omega * t, 0}}});
        return {{{e[0][0], e[0][1] / omega}, {e[1][0] * omega, e[1][1]}}};
}

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb, double whole, double tol, int depth)
{
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (m - a) / 6 * (fa + 4 * flm + fm);
        const double right = (b - m) / 6 * (fm + 4 * frm + fb);
        if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol)
        {
                return left + right + (left + right - whole) / 15;
        }
        return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

// Adaptive Simpson quadrature of f over [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-15)
{
        const double fa = f(a);
        const double fb = f(b);
        const double fm = f(0.5 * (a + b));
        const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
        return simpson(f, a, b, fa, fm, fb, whole, tol, 50);
}

// Integral over [0, dt] of e^{F tau} diag(0, phi_s) e^{F tau}^T, with the
// transition taken from the Taylor-series exponential.
inline Mat2 process_noise_quadrature(double omega, double dt, double phi_s)
{
        Mat2 q{};
        for (int i = 0; i < 2; ++i)
        {
                for (int j = 0; j < 2; ++j)
                {
                        q[i][j] = integrate(
                                [&](double tau)
                                {
                                        const Mat2 phi = oscillator_expm(omega, tau);
                                        return phi[i][1] * phi_s * phi[j][1];
                                },
                                0,
                                dt);
                }
        }
        return q;
}

// Straight-line Kalman filter cycle with H = [1 0].
struct Kf
{
        double x[2];
        Mat2 p;
};

inline Kf kf_cycle(const Kf& s, double z, const Mat2& phi, const Mat2& q, double r, double* residual = nullptr, double* c_out = nullptr)
{
        Mat2 m = matmul(matmul(phi, s.p), transpose(phi));
        for (int i = 0; i < 2; ++i)
        {
                for (int j = 0; j < 2; ++j)
                {
                        m[i][j] += q[i][j];
                }
        }
        const double xp0 = phi[0][0] * s.x[0] + phi[0][1] * s.x[1];
        const double xp1 = phi[1][0] * s.x[0] + phi[1][1] * s.x[1];
        const double c = m[0][0] + r;
        const double k0 = m[0][0] / c;
        const double k1 = m[1][0] / c;
        const double res = z - xp0;
        Kf out;
        out.x[0] = xp0 + k0 * res;
        out.x[1] = xp1 + k1 * res;
        const Mat2 ikh{{{1 - k0, 0}, {-k1, 1}}};
        out.p = matmul(ikh, m);
        const double off = 0.5 * (out.p[0][1] + out.p[1][0]);
        out.p[0][1] = off;
        out.p[1][0] = off;
        if (residual)
        {
                *residual = res;
        }
        if (c_out)
        {
                *c_out = c;
        }
        return out;
}

// Central-difference gradient of f at x.
inline std::vector<double> numeric_gradient(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x, double h = 1e-5)
{
        std::vector<double> g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
        {
                const double saved = x[i];
                x[i] = saved + h;
                const double up = f(x);
                x[i] = saved - h;
                const double down = f(x);
                x[i] = saved;
                g[i] = (up - down) / (2 * h);
        }
        return g;
}

// |a - b| <= rel * max(|a|, |b|) or <= abs_floor.
inline bool close(double a, double b, double rel, double abs_floor)
{
        const double diff = std::abs(a - b);
        return diff <= abs_floor || diff <= rel * std::max(std::abs(a), std::abs(b));
}

// Index of the largest |DFT| bin in 1..n/2.
inline std::size_t dft_peak(const std::vector<double>& x)
{
        const std::size_t n = x.size();
        std::size_t best = 1;
        double best_power = -1;
        for (std::size_t k = 1; k <= n / 2; ++k)
        {
                double re = 0;
                double im = 0;
                for (std::size_t t = 0; t < n; ++t)
                {
                        const double angle = 2 * M_PI * static_cast<double>(k * t) / static_cast<double>(n);
                        re += x[t] * std::cos(angle);
                        im -= x[t] * std::sin(angle);
                }
                const double power = re * re + im * im;
                if (power > best_power)
                {
                        best_power = power;
                        best = k;
                }
        }
        return best;
}
}
