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

#include <cstddef>
#include <cstdint>

#include "ncmi/model.hpp"
#include "ncmi/output_density.hpp"

namespace ncmi {

/// One-pass mean / centered second moment (Welford), mergeable across
/// workers with the exact pairwise formula.
class RunningMoments {
public:
    /// Throws NumericalHealth on non-finite input.
    void push(double v);
    void merge(const RunningMoments& other);

    std::size_t count() const { return count_; }
    double mean() const { return mean_; }
    double m2() const { return m2_; }
    /// Unbiased sample variance; 0 for fewer than two values.
    double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Monte-Carlo stopping rule: stop once z(confidence) * stderr(mi) <= halfwidth,
/// with stderr in bits/s/Hz, or when max_samples is reached.
struct StoppingRule {
    double confidence = 0.90;
    double halfwidth = 0.005;
    std::size_t min_samples = 1000;
    std::size_t max_samples = 100'000'000;

    /// Throws InvalidArgument unless 0 < confidence < 1, halfwidth > 0 and
    /// 2 <= min_samples <= max_samples.
    void validate() const;
    /// Two-sided standard-normal quantile for the confidence level.
    double z_value() const;
};

struct EntropyEstimate {
    double bits = 0.0;         // h(Y), bits per block
    double std_error = 0.0;    // of bits
    std::size_t samples = 0;
    std::size_t degenerate_resamples = 0;
    std::size_t failed_samples = 0;
    bool hit_max_samples = false;
};

/// h(Y) = -E[log2 p(Y)] by Monte Carlo over sampled blocks.
///
/// Each worker draws from make_stream(seed, worker) and processes a fixed
/// batch per round; partial moments are merged in worker order, so the result
/// depends only on (seed, workers). Degenerate spectra and isolated
/// quadrature failures are resampled; failures above 0.1% of samples abort
/// with NumericalHealth.
EntropyEstimate estimate_output_entropy(const DensityEvaluator& eval, const StoppingRule& rule, std::uint64_t seed,
                                        int workers);

struct MIEstimate {
    double mi_bits = 0.0;            // bits/s/Hz
    double out_entropy_bits = 0.0;   // h(Y), bits per block
    double cond_entropy_bits = 0.0;  // h(Y|X), bits per block
    double stderr_bits = 0.0;        // of mi_bits
    std::size_t n_samples = 0;
    double confidence = 0.0;
    double halfwidth_target = 0.0;
    std::size_t degenerate_resamples = 0;
    bool hit_max_samples = false;
};

/// (h(Y) - h(Y|X)) / n_b with the conditional entropy in closed form.
MIEstimate mutual_information(const ChannelConfig& config, const StoppingRule& rule, std::uint64_t seed, int workers,
                              const DensityEvaluator* eval = nullptr);

} // namespace ncmi
