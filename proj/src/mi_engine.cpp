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

#include "ncmi/mi_engine.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "ncmi/closed_forms.hpp"
#include "ncmi/errors.hpp"

namespace ncmi {

void RunningMoments::push(double v)
{
    if (!std::isfinite(v)) {
        throw NumericalHealth("non-finite value in moment accumulator");
    }
    ++count_;
    const double delta = v - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (v - mean_);
}

void RunningMoments::merge(const RunningMoments& other)
{
    if (other.count_ == 0) {
        return;
    }
    if (count_ == 0) {
        *this = other;
        return;
    }
    const auto na = static_cast<double>(count_);
    const auto nb = static_cast<double>(other.count_);
    const double n = na + nb;
    const double delta = other.mean_ - mean_;
    mean_ += delta * nb / n;
    m2_ += other.m2_ + delta * delta * na * nb / n;
    count_ += other.count_;
}

void StoppingRule::validate() const
{
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw InvalidArgument("confidence must lie in (0, 1)");
    }
    if (!(halfwidth > 0.0)) {
        throw InvalidArgument("halfwidth must be positive");
    }
    if (min_samples < 2 || min_samples > max_samples) {
        throw InvalidArgument("need 2 <= min_samples <= max_samples");
    }
}

double StoppingRule::z_value() const
{
    const boost::math::normal_distribution<double> n01;
    return boost::math::quantile(n01, 0.5 + 0.5 * confidence);
}

namespace {

struct WorkerState {
    RandomStream rng;
    ComplexGaussian gauss;
    BlockSample block;
    RunningMoments moments; // of -ln p(Y), nats
    std::size_t degenerate = 0;
    std::size_t failed = 0;
    std::string last_failure;
};

void run_batch(const DensityEvaluator& eval, WorkerState& w, std::size_t count)
{
    const ChannelConfig& cfg = eval.config();
    std::size_t done = 0;
    while (done < count) {
        sample_block(cfg, w.rng, w.gauss, w.block);
        try {
            const LogDensity ld = log_density(eval, gram_eigenvalues(w.block.y));
            w.moments.push(-ld.log_p);
            ++done;
        } catch (const DegenerateSpectrum&) {
            ++w.degenerate;
        } catch (const NumericalFailure& e) {
            ++w.failed;
            w.last_failure = e.what();
            // Keep going; the health check after the round decides.
            if (w.failed > 16 + count) {
                return;
            }
        }
    }
}

} // namespace

EntropyEstimate estimate_output_entropy(const DensityEvaluator& eval, const StoppingRule& rule, std::uint64_t seed,
                                        int workers)
{
    rule.validate();
    if (workers < 1) {
        throw InvalidArgument("workers must be >= 1");
    }
    const auto nw = static_cast<std::size_t>(workers);
    const double nb = eval.config().n_b();
    const double z = rule.z_value();

    std::vector<WorkerState> state;
    state.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        state.push_back(WorkerState{make_stream(seed, w), {}, {}, {}, 0, 0, {}});
    }

    EntropyEstimate out;
    RunningMoments total;
    std::size_t per_worker = (rule.min_samples + nw - 1) / nw;
    for (;;) {
        // Never overshoot max_samples.
        const std::size_t remaining = rule.max_samples - total.count();
        per_worker = std::max<std::size_t>(1, std::min(per_worker, remaining / nw));

        if (nw == 1) {
            run_batch(eval, state[0], per_worker);
        } else {
            std::vector<std::jthread> pool;
            pool.reserve(nw);
            for (std::size_t w = 0; w < nw; ++w) {
                pool.emplace_back([&, w] { run_batch(eval, state[w], per_worker); });
            }
        }

        total = RunningMoments{};
        std::size_t failed = 0;
        std::size_t degenerate = 0;
        for (const auto& w : state) {
            total.merge(w.moments);
            failed += w.failed;
            degenerate += w.degenerate;
        }
        out.degenerate_resamples = degenerate;
        out.failed_samples = failed;
        if (failed > 0 && static_cast<double>(failed) > 1e-3 * static_cast<double>(total.count() + failed)) {
            std::string msg = "density evaluation failed on " + std::to_string(failed) + " of " +
                              std::to_string(total.count() + failed) + " samples";
            for (const auto& w : state) {
                if (!w.last_failure.empty()) {
                    msg += ": " + w.last_failure;
                    break;
                }
            }
            throw NumericalHealth(msg);
        }

        const double n = static_cast<double>(total.count());
        const double se_mi = std::sqrt(total.variance() / n) * std::numbers::log2e / nb;
        if (total.count() >= rule.min_samples && z * se_mi <= rule.halfwidth) {
            break;
        }
        if (total.count() + nw > rule.max_samples) {
            out.hit_max_samples = true;
            break;
        }
        // Project the sample size the rule needs and aim 10% past it.
        const double sd_mi = std::sqrt(total.variance()) * std::numbers::log2e / nb;
        const double needed = std::pow(z * sd_mi / rule.halfwidth, 2.0) * 1.1;
        const double more = std::max(needed - n, 0.05 * n);
        per_worker = static_cast<std::size_t>(std::ceil(std::max(more, 64.0 * nw) / static_cast<double>(nw)));
    }

    out.samples = total.count();
    out.bits = total.mean() * std::numbers::log2e;
    out.std_error = std::sqrt(total.variance() / static_cast<double>(total.count())) * std::numbers::log2e;
    return out;
}

MIEstimate mutual_information(const ChannelConfig& config, const StoppingRule& rule, std::uint64_t seed, int workers,
                              const DensityEvaluator* eval)
{
    const DensityEvaluator local(config);
    const DensityEvaluator& ev = eval != nullptr ? *eval : local;
    if (!(ev.config() == config)) {
        throw InvalidArgument("mutual_information: evaluator built for a different configuration");
    }
    const EntropyEstimate h = estimate_output_entropy(ev, rule, seed, workers);

    MIEstimate out;
    out.out_entropy_bits = h.bits;
    out.cond_entropy_bits = cond_entropy(config);
    out.mi_bits = (out.out_entropy_bits - out.cond_entropy_bits) / config.n_b();
    out.stderr_bits = h.std_error / config.n_b();
    out.n_samples = h.samples;
    out.confidence = rule.confidence;
    out.halfwidth_target = rule.halfwidth;
    out.degenerate_resamples = h.degenerate_resamples;
    out.hit_max_samples = h.hit_max_samples;
    return out;
}

} // namespace ncmi
