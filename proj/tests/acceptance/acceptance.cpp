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

// End-to-end acceptance checks. Prints one PASS/FAIL line per check and
// exits nonzero if any fails. Pass check numbers as arguments to run a
// subset.

#include <boost/math/special_functions/expint.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ncmi/closed_forms.hpp"
#include "ncmi/mi_engine.hpp"
#include "ncmi/pilot.hpp"
#include "ncmi/specfun.hpp"
#include "ncmi/sweep.hpp"
#include "oracles.hpp"

using namespace ncmi;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int hardware_workers()
{
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

MIEstimate mi(int nt, int nr, int nb, double snr, std::uint64_t seed, int workers = 1)
{
    return mutual_information(ChannelConfig(nt, nr, nb, snr), StoppingRule{}, seed, workers);
}

// Long-block point, shared with the reproducibility check.
const ChannelConfig kLongBlock(1, 1, 100, 10.0);
constexpr std::uint64_t kLongBlockSeed = 505;

Outcome closed_form_vs_monte_carlo()
{
    const auto t0 = Clock::now();
    bool ok = true;
    double worst = 0.0;
    std::uint64_t seed = 1000;
    for (auto [nt, nb] : {std::pair{1, 4}, std::pair{2, 10}, std::pair{2, 4}}) {
        for (double snr : {0.1, 1.0, 10.0}) {
            const double w = wishart_logdet_mean(nt, nb, snr / nt);
            const auto mc = oracle::wishart_logdet_mc(nt, nb, snr / nt, 100000, seed++);
            const double z = std::abs(w - mc.mean) / mc.std_error;
            worst = std::max(worst, z);
            ok = ok && z <= 2.5758293035489;
        }
    }
    const double t = seconds_since(t0);
    return {ok && t < 60.0, fmt("worst |closed - MC| = %.2f stderr (limit 2.576), %.1f s", worst, t)};
}

Outcome density_oracle()
{
    double worst = 0.0;
    for (int nt : {1, 2}) {
        for (double snr : {0.1, 1.0, 10.0}) {
            const DensityEvaluator eval(DensityShape{nt, 1, 1, snr});
            for (int i = 0; i < 40; ++i) {
                const double d = 50.0 * i / 39.0;
                const double lp = log_density(eval, GramSpectrum{{d}}).log_p;
                worst = std::max(worst, std::abs(lp - oracle::single_antenna_log_density(nt, 1, snr, d)));
            }
        }
    }
    return {worst <= 1e-8, fmt("max |ln p - oracle| = %.2e (limit 1e-8)", worst)};
}

Outcome normalization()
{
    const DensityEvaluator eval(ChannelConfig(2, 2, 4, 1.0));
    RandomStream rng = make_stream(303, 0);
    const NormalizationEstimate e = normalization_check(eval, 2.0, 100000, rng);
    const double z = std::abs(e.mean - 1.0) / e.std_error;
    return {z <= 3.0, fmt("integral = %.5f +- %.5f (%.2f stderr from 1)", e.mean, e.std_error, z)};
}

Outcome entropy_oracle()
{
    const ChannelConfig cfg(1, 1, 1, 1.0);
    const DensityEvaluator eval(cfg);
    const EntropyEstimate h = estimate_output_entropy(eval, StoppingRule{}, 404, 1);
    const double ref = oracle::scalar_output_entropy_bits(1.0);
    const double z = std::abs(h.bits - ref) / h.std_error;
    return {z <= 2.0, fmt("h(Y) = %.5f +- %.5f, oracle %.6f (%.2f stderr)", h.bits, h.std_error, ref, z)};
}

Outcome long_block_near_capacity()
{
    const auto t0 = Clock::now();
    const MIEstimate m = mutual_information(kLongBlock, StoppingRule{}, kLongBlockSeed, hardware_workers());
    const double t = seconds_since(t0);
    const double gap = perfect_csi_capacity(kLongBlock) - m.mi_bits;
    return {gap >= 0.0 && gap <= 0.15 && t <= 600.0,
            fmt("C - I = %.4f (I = %.4f +- %.4f, n = %zu), %.1f s", gap, m.mi_bits, m.stderr_bits, m.n_samples, t)};
}

Outcome short_block_below_half()
{
    const ChannelConfig cfg(1, 1, 4, 1.0);
    const MIEstimate m = mutual_information(cfg, StoppingRule{}, 606, 1);
    const double half = 0.5 * perfect_csi_capacity(cfg);
    const double margin = (half - m.mi_bits) / m.stderr_bits;
    return {margin >= 2.0, fmt("I = %.4f +- %.4f vs C/2 = %.6f (margin %.1f stderr)", m.mi_bits, m.stderr_bits, half,
                               margin)};
}

Outcome extra_transmitter_hurts()
{
    bool ok = true;
    std::ostringstream os;
    std::uint64_t seed = 700;
    for (double db : {0.0, 10.0, 20.0}) {
        const double snr = snr_db_to_linear(db);
        const MIEstimate one = mi(1, 1, 10, snr, seed++);
        const MIEstimate two = mi(2, 1, 10, snr, seed++);
        const double slack = 2.0 * std::hypot(one.stderr_bits, two.stderr_bits);
        ok = ok && two.mi_bits <= one.mi_bits + slack;
        os << fmt("%gdB: I(2x1) = %.4f, I(1x1) = %.4f; ", db, two.mi_bits, one.mi_bits);
    }
    return {ok, os.str()};
}

Outcome extra_pair_helps()
{
    const MIEstimate siso = mi(1, 1, 4, 10.0, 801);
    const MIEstimate mimo = mi(2, 2, 4, 10.0, 802);
    const double z = (mimo.mi_bits - siso.mi_bits) / std::hypot(siso.stderr_bits, mimo.stderr_bits);
    return {z >= 2.0, fmt("I(2x2) = %.4f, I(1x1) = %.4f (%.1f combined stderr)", mimo.mi_bits, siso.mi_bits, z)};
}

Outcome bound_sandwich()
{
    bool ok = true;
    int checked = 0;
    std::string failures;
    std::uint64_t seed = 900;
    for (const auto& base : {ChannelConfig(1, 1, 4, 1.0), ChannelConfig(1, 1, 10, 1.0), ChannelConfig(2, 1, 10, 1.0),
                             ChannelConfig(2, 2, 10, 1.0)}) {
        for (double snr : {0.1, 1.0, 10.0}) {
            const ChannelConfig cfg = base.with_snr(snr);
            const MIEstimate m = mutual_information(cfg, StoppingRule{}, seed++, 1);
            const bool lo = mi_lower_bound(cfg) - 2.0 * m.stderr_bits <= m.mi_bits;
            const bool hi = m.mi_bits <= perfect_csi_capacity(cfg) + 2.0 * m.stderr_bits;
            if (!(lo && hi)) {
                failures += fmt(" (%d,%d,%d,%g)", cfg.n_t(), cfg.n_r(), cfg.n_b(), snr);
            }
            ok = ok && lo && hi;
            ++checked;
        }
    }
    return {ok, fmt("%d points checked", checked) + (failures.empty() ? "" : "; violations at" + failures)};
}

Outcome pilot_dominance_and_slope()
{
    bool dominant = true;
    for (int db = 0; db <= 30; ++db) {
        const ChannelConfig cfg(1, 1, 10, snr_db_to_linear(db));
        dominant = dominant && pilot_se_boosted(cfg).se_bits >= pilot_se_uniform(cfg).se_bits;
    }
    const ChannelConfig c30(1, 1, 10, snr_db_to_linear(30.0));
    const ChannelConfig c40(1, 1, 10, snr_db_to_linear(40.0));
    const double per_3db = 10.0 / (10.0 * std::log10(2.0));
    const double slope = (pilot_se_boosted(c40).se_bits - pilot_se_boosted(c30).se_bits) / per_3db;
    const bool slope_ok = std::abs(slope - 0.9) <= 0.09;
    return {dominant && slope_ok,
            fmt("boosted >= uniform on 31 points: %s; slope 30-40 dB = %.4f (target 0.9 +- 10%%)",
                dominant ? "yes" : "no", slope)};
}

Outcome special_functions()
{
    const double e1 = exp_integral_e1(1.0);
    const bool e1_ok = std::abs(e1 - 0.21938393439552) <= 1e-10;
    double worst = 0.0;
    for (int q = 1; q <= 50; ++q) {
        for (double x : {0.01, 0.1, 1.0, 10.0, 100.0}) {
            const double next = exp_integral_eq(q + 1, x);
            const double rec = (std::exp(-x) - x * exp_integral_eq(q, x)) / q;
            worst = std::max(worst, std::abs(next - rec) / next);
        }
    }
    const double s = scaled_exp_integral(1, 500.0);
    const double ref = std::exp(500.0) * boost::math::expint(1, 500.0);
    const double s_err = std::abs(s - ref) / ref;
    const bool ok = e1_ok && worst < 1e-12 && std::isfinite(s) && s_err <= 1e-10;
    return {ok, fmt("E1(1) = %.14f; max recurrence residual %.1e (limit 1e-12); e^500 E1(500) rel err %.1e", e1, worst,
                    s_err)};
}

Outcome performance()
{
    const int workers = hardware_workers();
    const auto t0 = Clock::now();
    const MIEstimate m = mi(2, 2, 10, 10.0, 1212, workers);
    const double t = seconds_since(t0);
    return {t <= 60.0, fmt("%.1f s with %d worker(s), I = %.4f, n = %zu", t, workers, m.mi_bits, m.n_samples)};
}

Outcome reproducibility()
{
    SweepSpec spec;
    spec.n_t = 1;
    spec.n_r = 1;
    spec.n_b = 10;
    spec.snr_start_db = 0.0;
    spec.snr_stop_db = 20.0;
    spec.snr_step_db = 10.0;
    spec.seed = 1313;
    spec.workers = hardware_workers();
    auto render = [&] {
        std::ostringstream os;
        SweepWriter w(spec, os);
        run_sweep(spec, [&](const SweepRow& r) { w.row(r); });
        w.finish();
        return os.str();
    };
    const std::string a = render();
    const std::string b = render();
    const bool identical = a == b;

    const StoppingRule rule;
    const MIEstimate m1 = mutual_information(kLongBlock, rule, kLongBlockSeed, 1);
    const MIEstimate m2 = mutual_information(kLongBlock, rule, kLongBlockSeed + 1, 1);
    const double shift = std::abs(m1.mi_bits - m2.mi_bits);
    return {identical && shift < 4.0 * rule.halfwidth,
            fmt("CSV byte-identical: %s (%zu bytes); seed change moves I by %.4f (limit %.3f)",
                identical ? "yes" : "no", a.size(), shift, 4.0 * rule.halfwidth)};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> all = {
        {1, "closed-form log-det mean vs Monte Carlo", closed_form_vs_monte_carlo},
        {2, "output density vs mixture quadrature", density_oracle},
        {3, "density normalization", normalization},
        {4, "output entropy vs radial quadrature", entropy_oracle},
        {5, "long block approaches perfect-CSI capacity", long_block_near_capacity},
        {6, "short block below half capacity", short_block_below_half},
        {7, "second transmit antenna does not help a single receiver", extra_transmitter_hurts},
        {8, "second antenna pair helps at n_b = 4", extra_pair_helps},
        {9, "lower bound <= I <= capacity", bound_sandwich},
        {10, "pilot boosting dominance and high-SNR slope", pilot_dominance_and_slope},
        {11, "special functions", special_functions},
        {12, "single-point runtime", performance},
        {13, "reproducibility", reproducibility},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        only.insert(std::atoi(argv[i]));
    }

    int failed = 0;
    for (const auto& c : all) {
        if (!only.empty() && !only.contains(c.id)) {
            continue;
        }
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s [%2d] %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
