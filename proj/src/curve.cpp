#include "conformap/curve.hpp"

#include "conformap/types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

namespace conformap {

double low_dim_weight(double dist_sq, const CurveParams& curve) {
    return 1.0 / (1.0 + curve.a * std::pow(dist_sq, curve.b));
}

namespace {

constexpr int kSamples = 300;
constexpr double kRange = 3.0;
constexpr double kMaxRmsResidual = 0.1;

double sum_squared_error(const std::vector<double>& d, const std::vector<double>& f,
                         double a, double b) {
    double sse = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const double r = 1.0 / (1.0 + a * std::pow(d[i], 2.0 * b)) - f[i];
        sse += r * r;
    }
    return sse;
}

} // namespace

CurveParams fit_curve(double min_dist) {
    if (!(min_dist > 0.0) || min_dist > 1.0) {
        throw UsageError("min_dist must lie in (0, 1], got " + std::to_string(min_dist));
    }

    std::vector<double> d(kSamples);
    std::vector<double> f(kSamples);
    for (int i = 0; i < kSamples; ++i) {
        d[i] = kRange * static_cast<double>(i + 1) / kSamples;
        f[i] = d[i] <= min_dist ? 1.0 : std::exp(-(d[i] - min_dist));
    }

    // Levenberg-Marquardt on (a, b) with analytic Jacobian.
    double a = 1.0;
    double b = 1.0;
    double lambda = 1e-3;
    double sse = sum_squared_error(d, f, a, b);

    for (int iter = 0; iter < 200; ++iter) {
        Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
        Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
        for (int i = 0; i < kSamples; ++i) {
            const double t = std::pow(d[i], 2.0 * b);
            const double w = 1.0 / (1.0 + a * t);
            const double r = w - f[i];
            const double dw_da = -t * w * w;
            const double dw_db = -2.0 * a * t * std::log(d[i]) * w * w;
            jtj(0, 0) += dw_da * dw_da;
            jtj(0, 1) += dw_da * dw_db;
            jtj(1, 1) += dw_db * dw_db;
            jtr(0) += dw_da * r;
            jtr(1) += dw_db * r;
        }
        jtj(1, 0) = jtj(0, 1);

        bool stepped = false;
        for (int attempt = 0; attempt < 32; ++attempt) {
            Eigen::Matrix2d damped = jtj;
            damped(0, 0) += lambda * jtj(0, 0);
            damped(1, 1) += lambda * jtj(1, 1);
            const Eigen::Vector2d delta = damped.ldlt().solve(-jtr);
            const double na = a + delta(0);
            const double nb = b + delta(1);
            if (na > 0.0 && nb > 0.0) {
                const double new_sse = sum_squared_error(d, f, na, nb);
                if (new_sse < sse) {
                    a = na;
                    b = nb;
                    sse = new_sse;
                    lambda = std::max(lambda / 3.0, 1e-12);
                    stepped = true;
                    break;
                }
            }
            lambda *= 3.0;
        }
        if (!stepped) {
            break;
        }
    }

    const double rms = std::sqrt(sse / kSamples);
    if (rms > kMaxRmsResidual) {
        throw UsageError("curve fit residual " + std::to_string(rms) +
                         " exceeds threshold for min_dist " + std::to_string(min_dist));
    }
    return CurveParams{a, b};
}

} // namespace conformap
