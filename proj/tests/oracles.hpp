// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Reference computations built directly from the channel law, sharing no
// code with the library beyond plain data types.

#pragma once

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

namespace oracle {

// Integral over [0, inf) split at a few scales so both narrow and wide
// integrands are resolved.
template <class F>
double half_line(F f, double scale = 1.0)
{
    using boost::math::quadrature::gauss_kronrod;
    const double cuts[] = {0.0, 0.1 * scale, scale, 4.0 * scale, 16.0 * scale};
    double sum = 0.0;
    for (int i = 0; i + 1 < 5; ++i) {
        sum += gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 15, 1e-14);
    }
    boost::math::quadrature::exp_sinh<double> tail;
    sum += tail.integrate([&](double u) { return f(cuts[4] + u); }, 1e-14);
    return sum;
}

// ln p(y) for a single receive antenna. Given the channel h, the n_b output
// entries are IID CN(0, 1 + rho |h|^2) and |h|^2 ~ Gamma(n_t, 1); d = |y|^2.
inline double single_antenna_log_density(int n_t, int n_b, double snr, double d)
{
    const double rho = snr / n_t;
    const double lg = std::lgamma(static_cast<double>(n_t));
    // Factor out the peak of the exponent to keep the integrand O(1).
    auto log_integrand = [&](double g) {
        const double v = 1.0 + rho * g;
        return (n_t - 1) * std::log(g > 0 ? g : std::numeric_limits<double>::min()) - g - lg - d / v - n_b * std::log(v);
    };
    double peak = -std::numeric_limits<double>::infinity();
    double g_peak = 0.0;
    for (double g = 0.0; g < 200.0 + 4.0 * d; g += 0.01 * (1.0 + g)) {
        const double l = log_integrand(g);
        if (l > peak) {
            peak = l;
            g_peak = g;
        }
    }
    const double val = half_line([&](double g) { return g <= 0 && n_t > 1 ? 0.0 : std::exp(log_integrand(g) - peak); },
                                 std::max(1.0, g_peak));
    return std::log(val) + peak - n_b * std::log(std::numbers::pi);
}

// Differential entropy in bits of y = sqrt(snr) h x + n with scalar h, x, n,
// by radial quadrature: h = -\int_0^inf pi p(s) log2 p(s) ds, s = |y|^2.
inline double scalar_output_entropy_bits(double snr)
{
    using boost::math::quadrature::gauss_kronrod;
    auto integrand = [&](double s) {
        const double lp = single_antenna_log_density(1, 1, snr, s);
        return -std::numbers::pi * std::exp(lp) * lp;
    };
    // p(s) decays roughly like exp(-2 sqrt(s / snr)); the integrand is below
    // 1e-30 of its peak well before the last cut.
    const double scale = 1.0 + snr;
    double nats = 0.0;
    double lo = 0.0;
    for (double hi = 0.25 * scale; hi <= 8192.0 * scale; hi *= 2.0) {
        nats += gauss_kronrod<double, 61>::integrate(integrand, lo, hi, 15, 1e-14);
        lo = hi;
    }
    return nats * std::numbers::log2e;
}

using CMat = Eigen::MatrixXcd;

inline CMat gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng)
{
    std::normal_distribution<double> n01;
    CMat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = {n01(rng) * std::sqrt(0.5), n01(rng) * std::sqrt(0.5)};
        }
    }
    return m;
}

// Sample mean and standard error of log2 det(I + rho X X^H), X m x n Gaussian.
struct McEstimate {
    double mean;
    double std_error;
};

inline McEstimate wishart_logdet_mc(int m, int n, double rho, int samples, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    double sum = 0.0;
    double sum2 = 0.0;
    for (int s = 0; s < samples; ++s) {
        const CMat x = gaussian_matrix(m, n, rng);
        const CMat a = CMat::Identity(m, m) + rho * x * x.adjoint();
        const double v = std::log2(a.llt().matrixLLT().diagonal().real().array().square().prod());
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / samples;
    const double var = (sum2 - samples * mean * mean) / (samples - 1);
    return {mean, std::sqrt(var / samples)};
}

// Monte-Carlo p(Y) for any antenna count, averaging the conditional Gaussian
// density over channel draws: given H, columns of Y are IID CN(0, I + rho H H^H).
inline McEstimate channel_average_density(int n_t, int n_b, double snr, const CMat& y, int samples,
                                          std::uint64_t seed)
{
    const Eigen::Index n_r = y.rows();
    const double rho = snr / n_t;
    const CMat yy = y * y.adjoint();
    std::mt19937_64 rng(seed);
    double sum = 0.0;
    double sum2 = 0.0;
    for (int s = 0; s < samples; ++s) {
        const CMat h = gaussian_matrix(n_r, n_t, rng);
        const CMat cov = CMat::Identity(n_r, n_r) + rho * h * h.adjoint();
        Eigen::LLT<CMat> llt(cov);
        const double logdet = 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
        const double quad = (llt.solve(yy)).trace().real();
        const double v = std::exp(-n_b * logdet - quad - n_r * n_b * std::log(std::numbers::pi));
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / samples;
    const double var = (sum2 - samples * mean * mean) / (samples - 1);
    return {mean, std::sqrt(std::max(var, 0.0) / samples)};
}

} // namespace oracle
