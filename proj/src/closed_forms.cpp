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

#include "ncmi/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "exp_integral_impl.hpp"
#include "ncmi/errors.hpp"

namespace ncmi {

namespace {

using quad = __float128;

quad factorial_q(int n)
{
    quad f = 1;
    for (int k = 2; k <= n; ++k) {
        f *= k;
    }
    return f;
}

quad binomial_q(int n, int k)
{
    if (k < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    quad r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * quad(n - k + i) / quad(i);
    }
    return r;
}

// (a)! / (b)! for nonnegative a, b.
quad factorial_ratio_q(int a, int b)
{
    quad r = 1;
    if (a >= b) {
        for (int t = b + 1; t <= a; ++t) {
            r *= t;
        }
    } else {
        for (int t = a + 1; t <= b; ++t) {
            r /= t;
        }
    }
    return r;
}

} // namespace

double wishart_logdet_mean(int m, int n, double rho)
{
    if (m < 1 || n < m) {
        throw InvalidArgument("wishart_logdet_mean requires n >= m >= 1 (m=" + std::to_string(m) +
                              ", n=" + std::to_string(n) + ")");
    }
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw InvalidArgument("wishart_logdet_mean requires a positive finite rho");
    }
    if (m > kMaxWishartDim || n > kMaxWishartSamples) {
        throw UnsupportedSize("wishart_logdet_mean supports m <= " + std::to_string(kMaxWishartDim) +
                              " and n <= " + std::to_string(kMaxWishartSamples));
    }

    const quad x = quad(1) / quad(rho);
    const int d = n - m;
    // prefix[L] = sum_{q=0}^{L} e^x E_{q+1}(x), needed up to L = d + 2(m-1).
    const int l_max = d + 2 * (m - 1);
    const std::vector<quad> scaled = detail::scaled_en_table<quad>(l_max + 1, x);
    std::vector<quad> prefix(static_cast<std::size_t>(l_max) + 1);
    quad acc = 0;
    for (int q = 0; q <= l_max; ++q) {
        acc += scaled[static_cast<std::size_t>(q) + 1];
        prefix[static_cast<std::size_t>(q)] = acc;
    }

    quad total = 0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j <= i; ++j) {
            const quad outer = binomial_q(2 * i - 2 * j, i - j) * factorial_q(2 * j) / factorial_q(j);
            for (int l = 0; l <= 2 * j; ++l) {
                quad c = outer * binomial_q(2 * j + 2 * d, 2 * j - l) * factorial_ratio_q(d + l, d + j) /
                         factorial_q(l) / ldexpq(quad(1), 2 * i - l);
                if (l % 2 != 0) {
                    c = -c;
                }
                total += c * prefix[static_cast<std::size_t>(d + l)];
            }
        }
    }
    return static_cast<double>(total) * std::numbers::log2e;
}

double cond_entropy(const ChannelConfig& config)
{
    const double noise = config.n_b() * std::log2(std::numbers::pi * std::numbers::e);
    const double logdet = wishart_logdet_mean(config.n_t(), config.n_b(), config.snr() / config.n_t());
    return config.n_r() * (noise + logdet);
}

double capacity_bits(int n_t, int n_r, double snr)
{
    return wishart_logdet_mean(std::min(n_t, n_r), std::max(n_t, n_r), snr / n_t);
}

double perfect_csi_capacity(const ChannelConfig& config)
{
    return capacity_bits(config.n_t(), config.n_r(), config.snr());
}

double high_snr_slope_capacity(const ChannelConfig& config)
{
    const double m = std::min(config.n_t(), config.n_r());
    return m * (1.0 - m / config.n_b());
}

double high_snr_slope_pilot(const ChannelConfig& config)
{
    const double m = std::min(config.n_t(), config.n_r());
    return m * (1.0 - static_cast<double>(config.n_t()) / config.n_b());
}

double mi_lower_bound(const ChannelConfig& config)
{
    const double nt = config.n_t();
    const double penalty =
        nt * config.n_r() / config.n_b() * std::log2(1.0 + config.snr() * config.n_b() / nt);
    return perfect_csi_capacity(config) - penalty;
}

} // namespace ncmi
