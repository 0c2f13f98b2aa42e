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

#include "ncmi/pilot.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ncmi/closed_forms.hpp"
#include "ncmi/errors.hpp"

namespace ncmi {

namespace {

// W(m, n, rho) ~ m n rho log2(e) for tiny rho; the closed form loses every
// digit there, so fall back to the first-order term.
double capacity_or_linear(int n_t, int n_r, double snr)
{
    if (snr <= 0.0) {
        return 0.0;
    }
    if (snr / n_t < 1e-12) {
        return static_cast<double>(n_r) * snr * std::numbers::log2e;
    }
    return capacity_bits(n_t, n_r, snr);
}

} // namespace

PilotResult pilot_se_uniform_at(const ChannelConfig& config, int n_p)
{
    const int nt = config.n_t();
    const int nb = config.n_b();
    if (n_p < nt || n_p > nb) {
        throw InvalidArgument("pilot count must lie in [n_t, n_b]");
    }
    const double snr = config.snr();
    const double ratio = static_cast<double>(n_p) / nt;
    PilotResult r;
    r.n_p = n_p;
    r.effective_snr = snr * snr * ratio / (1.0 + snr * (1.0 + ratio));
    r.se_bits = (1.0 - static_cast<double>(n_p) / nb) * capacity_or_linear(nt, config.n_r(), r.effective_snr);
    return r;
}

PilotResult pilot_se_uniform(const ChannelConfig& config)
{
    PilotResult best = pilot_se_uniform_at(config, config.n_t());
    for (int n_p = config.n_t() + 1; n_p <= config.n_b(); ++n_p) {
        const PilotResult r = pilot_se_uniform_at(config, n_p);
        if (r.se_bits > best.se_bits) {
            best = r;
        }
    }
    return best;
}

PilotResult pilot_se_boosted(const ChannelConfig& config)
{
    const int nt = config.n_t();
    const int nb = config.n_b();
    if (nb <= 2 * nt) {
        throw UnsupportedRegime("power-boosted pilots need n_b > 2 n_t; the n_b <= 2 n_t variants are not implemented");
    }
    const double snr = config.snr();
    const double boost = (nb * snr + nt) / (nb * snr * (nb - 2.0 * nt) / (nb - nt));
    // sqrt(g) - sqrt(g - 1) == 1 / (sqrt(g) + sqrt(g - 1)) without cancellation
    const double diff = 1.0 / (std::sqrt(boost) + std::sqrt(boost - 1.0));
    PilotResult r;
    r.n_p = nt;
    r.boosted = true;
    r.effective_snr = nb * snr / (nb - 2.0 * nt) * diff * diff;
    r.se_bits = (1.0 - static_cast<double>(nt) / nb) * capacity_or_linear(nt, config.n_r(), r.effective_snr);
    return r;
}

EnergyPerBit min_energy_per_bit(std::span<const std::pair<double, double>> curve)
{
    EnergyPerBit best;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (const auto& [snr, rate] : curve) {
        if (rate > 0.0 && snr / rate < best_ratio) {
            best_ratio = snr / rate;
            best.snr = snr;
        }
    }
    if (!std::isfinite(best_ratio)) {
        throw NoPositiveRate("no grid point has a positive rate");
    }
    best.ebn0_db = 10.0 * std::log10(best_ratio);
    return best;
}

} // namespace ncmi
