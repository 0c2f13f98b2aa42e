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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ncmi/closed_forms.hpp"
#include "ncmi/errors.hpp"
#include "ncmi/mi_engine.hpp"
#include "oracles.hpp"

using namespace ncmi;

namespace {

StoppingRule loose(double halfwidth)
{
    StoppingRule r;
    r.halfwidth = halfwidth;
    return r;
}

} // namespace

TEST(RunningMoments, Small)
{
    RunningMoments m;
    for (double v : {1.0, 2.0, 3.0}) {
        m.push(v);
    }
    EXPECT_EQ(m.count(), 3u);
    EXPECT_DOUBLE_EQ(m.mean(), 2.0);
    EXPECT_DOUBLE_EQ(m.variance(), 1.0);

    RunningMoments c;
    for (int i = 0; i < 100; ++i) {
        c.push(7.25);
    }
    EXPECT_EQ(c.variance(), 0.0);
    EXPECT_THROW(c.push(std::nan("")), NumericalHealth);
    EXPECT_THROW(c.push(INFINITY), NumericalHealth);
}

TEST(RunningMoments, StandardNormal)
{
    std::mt19937_64 rng(123);
    std::normal_distribution<double> n01;
    RunningMoments m;
    for (int i = 0; i < 1000000; ++i) {
        m.push(n01(rng));
    }
    EXPECT_NEAR(m.mean(), 0.0, 4e-3);
    EXPECT_NEAR(m.variance(), 1.0, 0.01);
}

TEST(RunningMoments, MergeMatchesSinglePass)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 1e3);
    RunningMoments all, a, b, c;
    for (int i = 0; i < 3000; ++i) {
        const double v = u(rng);
        all.push(v);
        (i < 100 ? a : i < 2000 ? b : c).push(v);
    }
    a.merge(b);
    a.merge(c);
    a.merge(RunningMoments{});
    EXPECT_EQ(a.count(), all.count());
    EXPECT_NEAR(a.mean(), all.mean(), 1e-10 * std::abs(all.mean()));
    EXPECT_NEAR(a.variance(), all.variance(), 1e-10 * all.variance());
}

TEST(StoppingRule, DefaultsAndValidation)
{
    const StoppingRule r;
    EXPECT_EQ(r.confidence, 0.90);
    EXPECT_EQ(r.halfwidth, 0.005);
    EXPECT_EQ(r.min_samples, 1000u);
    EXPECT_EQ(r.max_samples, 100000000u);
    EXPECT_NEAR(r.z_value(), 1.6448536269514722, 1e-12);
    EXPECT_NO_THROW(r.validate());
    StoppingRule bad = r;
    bad.confidence = 1.0;
    EXPECT_THROW(bad.validate(), InvalidArgument);
    bad = r;
    bad.halfwidth = 0.0;
    EXPECT_THROW(bad.validate(), InvalidArgument);
    bad = r;
    bad.min_samples = 10;
    bad.max_samples = 5;
    EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(OutputEntropy, NoiseOnly)
{
    const ChannelConfig cfg(2, 2, 3, 1e-9);
    const DensityEvaluator eval(cfg);
    const EntropyEstimate h = estimate_output_entropy(eval, loose(0.01), 1, 1);
    const double floor = cfg.n_r() * cfg.n_b() * std::log2(std::numbers::pi * std::numbers::e);
    // At this SNR p(Y) is the noise density, so -log2 p(Y) has the law of a
    // shifted Gamma variable; the estimate is exact up to its own spread.
    EXPECT_NEAR(h.bits, floor, 4.0 * h.std_error + 1e-4);
}

TEST(OutputEntropy, ScalarRadialOracle)
{
    const ChannelConfig cfg(1, 1, 1, 1.0);
    const DensityEvaluator eval(cfg);
    const EntropyEstimate h = estimate_output_entropy(eval, loose(0.005), 2718, 1);
    const double ref = oracle::scalar_output_entropy_bits(1.0);
    EXPECT_NEAR(h.bits, ref, 2.0 * h.std_error);
}

TEST(OutputEntropy, StopsAtTarget)
{
    const ChannelConfig cfg(1, 1, 4, 1.0);
    const StoppingRule rule = loose(0.01);
    const MIEstimate m = mutual_information(cfg, rule, 3, 1);
    EXPECT_LE(rule.z_value() * m.stderr_bits, rule.halfwidth);
    EXPECT_GE(m.n_samples, rule.min_samples);
    EXPECT_FALSE(m.hit_max_samples);
}

TEST(OutputEntropy, MaxSamplesFlag)
{
    StoppingRule rule;
    rule.min_samples = 100;
    rule.max_samples = 500;
    rule.halfwidth = 1e-6;
    const MIEstimate m = mutual_information(ChannelConfig(1, 1, 2, 1.0), rule, 3, 2);
    EXPECT_TRUE(m.hit_max_samples);
    EXPECT_LE(m.n_samples, 500u);
    EXPECT_GE(m.n_samples, 2u);
}

TEST(MutualInformation, Invariants)
{
    const ChannelConfig cfg(2, 1, 5, 2.0);
    const MIEstimate m = mutual_information(cfg, loose(0.02), 9, 1);
    EXPECT_EQ(m.mi_bits, (m.out_entropy_bits - m.cond_entropy_bits) / cfg.n_b());
    EXPECT_EQ(m.cond_entropy_bits, cond_entropy(cfg));
    EXPECT_EQ(m.confidence, 0.90);
    EXPECT_EQ(m.halfwidth_target, 0.02);
    EXPECT_GE(m.n_samples, 2u);
    EXPECT_GT(m.stderr_bits, 0.0);
}

TEST(MutualInformation, Deterministic)
{
    const ChannelConfig cfg(2, 2, 4, 1.0);
    for (int workers : {1, 3}) {
        const MIEstimate a = mutual_information(cfg, loose(0.02), 17, workers);
        const MIEstimate b = mutual_information(cfg, loose(0.02), 17, workers);
        EXPECT_EQ(a.mi_bits, b.mi_bits);
        EXPECT_EQ(a.stderr_bits, b.stderr_bits);
        EXPECT_EQ(a.n_samples, b.n_samples);
    }
}

TEST(MutualInformation, WorkerCountInvariance)
{
    const ChannelConfig cfg(1, 1, 4, 1.0);
    const MIEstimate one = mutual_information(cfg, loose(0.01), 21, 1);
    const MIEstimate eight = mutual_information(cfg, loose(0.01), 21, 8);
    EXPECT_NE(one.mi_bits, eight.mi_bits);
    EXPECT_NEAR(one.mi_bits, eight.mi_bits, 2.0 * std::hypot(one.stderr_bits, eight.stderr_bits));
}

TEST(MutualInformation, NestedPrecision)
{
    const ChannelConfig cfg(1, 1, 10, 1.0);
    const MIEstimate coarse = mutual_information(cfg, loose(0.005), 44, 1);
    const MIEstimate fine = mutual_information(cfg, loose(0.0025), 45, 1);
    EXPECT_LT(std::abs(coarse.mi_bits - fine.mi_bits), 0.0075);
}

TEST(MutualInformation, ShortBlockBelowHalfCapacity)
{
    const ChannelConfig cfg(1, 1, 4, 1.0);
    const MIEstimate m = mutual_information(cfg, loose(0.005), 4, 1);
    const double c = perfect_csi_capacity(cfg);
    EXPECT_GE(m.mi_bits, -2.0 * m.stderr_bits);
    EXPECT_LE(m.mi_bits, c + 2.0 * m.stderr_bits);
    EXPECT_LT(m.mi_bits, 0.5 * c);
}

TEST(MutualInformation, LowerBoundHolds)
{
    const ChannelConfig cfg(1, 1, 10, 1.0);
    const MIEstimate m = mutual_information(cfg, loose(0.005), 10, 1);
    EXPECT_GE(m.mi_bits, mi_lower_bound(cfg) - 2.0 * m.stderr_bits);
}

TEST(MutualInformation, MonotoneInSnr)
{
    for (const auto& base : {ChannelConfig(1, 1, 4, 1.0), ChannelConfig(2, 1, 10, 1.0)}) {
        MIEstimate prev{};
        bool first = true;
        for (double snr : {0.1, 1.0, 10.0}) {
            const MIEstimate m = mutual_information(base.with_snr(snr), loose(0.01), 50, 1);
            if (!first) {
                EXPECT_GE(m.mi_bits, prev.mi_bits - 2.0 * (m.stderr_bits + prev.stderr_bits));
            }
            prev = m;
            first = false;
        }
    }
}

TEST(MutualInformation, AcceleratedEvaluator)
{
    const ChannelConfig cfg(2, 2, 6, 3.0);
    const DensityEvaluator eval(cfg);
    const DensityEvaluator g = build_grid(eval, default_grid_extent(cfg), kDefaultGridPoints);
    const MIEstimate a = mutual_information(cfg, loose(0.02), 5, 1, &eval);
    const MIEstimate b = mutual_information(cfg, loose(0.02), 5, 1, &g);
    EXPECT_NEAR(a.mi_bits, b.mi_bits, 1e-6);
    const DensityEvaluator other(cfg.with_snr(1.0));
    EXPECT_THROW(mutual_information(cfg, loose(0.02), 5, 1, &other), InvalidArgument);
}

TEST(MutualInformation, BadWorkers)
{
    EXPECT_THROW(mutual_information(ChannelConfig(1, 1, 1, 1.0), StoppingRule{}, 1, 0), InvalidArgument);
}
