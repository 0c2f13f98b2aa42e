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

#pragma once

#include <cstdint>
#include <random>

#include "ncmi/matops.hpp"

namespace ncmi {

/// Antenna counts, coherence blocklength and per-receive-antenna SNR (linear).
/// Validated on construction: n_t >= n_r >= 1, n_b >= n_t, 0 < snr < inf.
class ChannelConfig {
public:
    ChannelConfig(int n_t, int n_r, int n_b, double snr);

    int n_t() const { return n_t_; }
    int n_r() const { return n_r_; }
    int n_b() const { return n_b_; }
    double snr() const { return snr_; }

    /// Same antennas and blocklength at another SNR.
    ChannelConfig with_snr(double snr) const { return {n_t_, n_r_, n_b_, snr}; }

    bool operator==(const ChannelConfig&) const = default;

private:
    int n_t_;
    int n_r_;
    int n_b_;
    double snr_;
};

/// One fading block: Y = sqrt(snr/n_t) H X + N.
struct BlockSample {
    ComplexMatrix h; // n_r x n_t
    ComplexMatrix x; // n_t x n_b
    ComplexMatrix y; // n_r x n_b
};

/// Random substream. Each worker owns one; never shared between threads.
using RandomStream = std::mt19937_64;

/// SplitMix64 finalizer over (master, index), used to derive independent
/// substream seeds for workers and sweep points.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

RandomStream make_stream(std::uint64_t master, std::uint64_t index);

/// Unit-variance circularly-symmetric complex Gaussian draw.
class ComplexGaussian {
public:
    cdouble operator()(RandomStream& rng) { return {normal_(rng) * kScale, normal_(rng) * kScale}; }

private:
    static constexpr double kScale = 0.70710678118654752440;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

BlockSample sample_block(const ChannelConfig& config, RandomStream& stream);

/// In-place variant reusing the storage of \p out.
void sample_block(const ChannelConfig& config, RandomStream& stream, ComplexGaussian& gauss, BlockSample& out);

/// floor(1 / (2 f_m T_s)), clamped below at 1.
int coherence_blocklength(double doppler_hz, double symbol_period_s);

double snr_db_to_linear(double db);
double linear_to_db(double x);

} // namespace ncmi
