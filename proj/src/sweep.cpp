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

#include "ncmi/sweep.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include "ncmi/closed_forms.hpp"
#include "ncmi/errors.hpp"
#include "ncmi/pilot.hpp"
#include "ncmi/version.hpp"

namespace ncmi {

using json = nlohmann::ordered_json;

SweepFailure::SweepFailure(double snr_db, const std::string& what)
    : std::runtime_error("numerical failure at snr_db=" + std::to_string(snr_db) + ": " + what), snr_db_(snr_db)
{
}

void SweepSpec::validate() const
{
    if (n_t < 1) throw UsageError("--nt must be >= 1");
    if (n_r < 1) throw UsageError("--nr must be >= 1");
    if (n_r > n_t) throw UsageError("--nr must not exceed --nt");
    if (n_b < n_t) throw UsageError("--nb must be >= --nt");
    if (!std::isfinite(snr_start_db) || !std::isfinite(snr_stop_db) || !std::isfinite(snr_step_db))
        throw UsageError("--snr-db: non-finite value");
    if (!(snr_step_db > 0.0)) throw UsageError("--snr-db: STEP must be positive");
    if (snr_start_db > snr_stop_db) throw UsageError("--snr-db: START must not exceed STOP");
    if (workers < 1) throw UsageError("--workers must be >= 1");
    if (!(rule.confidence > 0.0 && rule.confidence < 1.0)) throw UsageError("--confidence must lie in (0, 1)");
    if (!(rule.halfwidth > 0.0)) throw UsageError("--ci-halfwidth must be positive");
    if (rule.min_samples < 2) throw UsageError("--min-samples must be >= 2");
    if (rule.min_samples > rule.max_samples) throw UsageError("--max-samples must be >= --min-samples");
    try {
        (void)ChannelConfig(n_t, n_r, n_b, 1.0);
    } catch (const std::exception& e) {
        throw UsageError(std::string("antenna/blocklength flags: ") + e.what());
    }
}

std::vector<double> SweepSpec::snr_grid_db() const
{
    const auto count = static_cast<std::size_t>(std::floor((snr_stop_db - snr_start_db) / snr_step_db + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = snr_start_db + static_cast<double>(i) * snr_step_db;
    }
    return grid;
}

const std::vector<std::string>& sweep_columns()
{
    static const std::vector<std::string> cols = {
        "snr_db",           "mi_bits",          "mi_stderr",          "n_samples",        "cond_entropy_bits",
        "out_entropy_bits", "capacity_csi_bits", "pilot_uniform_bits", "pilot_uniform_np", "pilot_boost_bits",
        "lower_bound_bits", "ebn0_db",          "degenerate_resample_count"};
    return cols;
}

namespace {

std::vector<std::string> baseline_names(const Baselines& b)
{
    std::vector<std::string> out;
    if (b.capacity) out.emplace_back("capacity");
    if (b.pilot_uniform) out.emplace_back("pilot_uniform");
    if (b.pilot_boost) out.emplace_back("pilot_boost");
    if (b.lower_bound) out.emplace_back("lower_bound");
    if (b.slopes) out.emplace_back("slopes");
    return out;
}

Baselines parse_baselines(const std::string& text)
{
    Baselines b{false, false, false, false, false};
    if (text == "all") {
        return Baselines{};
    }
    if (text == "none" || text.empty()) {
        return b;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "capacity") b.capacity = true;
        else if (item == "pilot_uniform") b.pilot_uniform = true;
        else if (item == "pilot_boost") b.pilot_boost = true;
        else if (item == "lower_bound") b.lower_bound = true;
        else if (item == "slopes") b.slopes = true;
        else throw UsageError("--baselines: unknown baseline '" + item + "'");
    }
    return b;
}

void parse_grid(const std::string& text, SweepSpec& spec)
{
    double v[3];
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t end = i < 2 ? text.find(':', pos) : text.size();
        if (end == std::string::npos) {
            throw UsageError("--snr-db: expected START:STOP:STEP, got '" + text + "'");
        }
        const std::string part = text.substr(pos, end - pos);
        std::size_t used = 0;
        try {
            v[i] = std::stod(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (part.empty() || used != part.size()) {
            throw UsageError("--snr-db: expected START:STOP:STEP, got '" + text + "'");
        }
        pos = end + 1;
    }
    spec.snr_start_db = v[0];
    spec.snr_stop_db = v[1];
    spec.snr_step_db = v[2];
}

std::string grid_text(const SweepSpec& s)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g:%.17g:%.17g", s.snr_start_db, s.snr_stop_db, s.snr_step_db);
    return buf;
}

json optional_json(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json row_json(const SweepRow& r)
{
    json j;
    j["snr_db"] = r.snr_db;
    j["mi_bits"] = r.mi_bits;
    j["mi_stderr"] = r.mi_stderr;
    j["n_samples"] = r.n_samples;
    j["cond_entropy_bits"] = r.cond_entropy_bits;
    j["out_entropy_bits"] = r.out_entropy_bits;
    j["capacity_csi_bits"] = optional_json(r.capacity_csi_bits);
    j["pilot_uniform_bits"] = optional_json(r.pilot_uniform_bits);
    j["pilot_uniform_np"] = r.pilot_uniform_np ? json(*r.pilot_uniform_np) : json(nullptr);
    j["pilot_boost_bits"] = optional_json(r.pilot_boost_bits);
    j["lower_bound_bits"] = optional_json(r.lower_bound_bits);
    j["ebn0_db"] = optional_json(r.ebn0_db);
    j["degenerate_resample_count"] = r.degenerate_resample_count;
    return j;
}

json summary_json(const SweepSpec& spec, const std::vector<SweepRow>& rows)
{
    json j = json::object();
    if (spec.baselines.slopes) {
        const ChannelConfig cfg(spec.n_t, spec.n_r, spec.n_b, 1.0);
        j["slope_capacity"] = high_snr_slope_capacity(cfg);
        j["slope_pilot"] = high_snr_slope_pilot(cfg);
    }
    std::vector<std::pair<double, double>> curve;
    for (const auto& r : rows) {
        curve.emplace_back(snr_db_to_linear(r.snr_db), r.mi_bits);
    }
    try {
        const EnergyPerBit e = min_energy_per_bit(curve);
        j["min_ebn0_db"] = e.ebn0_db;
        j["min_ebn0_snr_db"] = linear_to_db(e.snr);
    } catch (const NoPositiveRate&) {
        j["min_ebn0_db"] = nullptr;
        j["min_ebn0_snr_db"] = nullptr;
    }
    return j;
}

} // namespace

std::string spec_json(const SweepSpec& spec)
{
    json j;
    j["nt"] = spec.n_t;
    j["nr"] = spec.n_r;
    j["nb"] = spec.n_b;
    j["snr_db"] = grid_text(spec);
    j["ci_halfwidth"] = spec.rule.halfwidth;
    j["confidence"] = spec.rule.confidence;
    j["min_samples"] = spec.rule.min_samples;
    j["max_samples"] = spec.rule.max_samples;
    j["seed"] = spec.seed;
    j["workers"] = spec.workers;
    j["baselines"] = baseline_names(spec.baselines);
    j["grid_accel"] = spec.grid_accel;
    j["format"] = spec.format == OutputFormat::csv ? "csv" : "json";
    j["output"] = spec.output;
    return j.dump();
}

std::optional<SweepSpec> parse_spec(int argc, const char* const* argv, std::ostream& out)
{
    SweepSpec spec;
    spec.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::string grid = grid_text(spec);
    std::string baselines = "all";
    std::string format = "csv";

    CLI::App app{"Noncoherent MIMO block-fading mutual information sweep", "ncmi_sweep"};
    app.set_version_flag("--version", std::string(kVersion));
    app.set_config("--config", "", "TOML/INI file with keys named after the long flags");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.add_option("--nt", spec.n_t, "transmit antennas")->capture_default_str();
    app.add_option("--nr", spec.n_r, "receive antennas")->capture_default_str();
    app.add_option("--nb", spec.n_b, "coherence blocklength")->capture_default_str();
    app.add_option("--snr-db", grid, "SNR grid START:STOP:STEP in dB")->capture_default_str();
    app.add_option("--ci-halfwidth", spec.rule.halfwidth, "target CI halfwidth, bits/s/Hz")->capture_default_str();
    app.add_option("--confidence", spec.rule.confidence, "two-sided CI level")->capture_default_str();
    app.add_option("--min-samples", spec.rule.min_samples)->capture_default_str();
    app.add_option("--max-samples", spec.rule.max_samples)->capture_default_str();
    app.add_option("--seed", spec.seed, "master seed")->capture_default_str();
    app.add_option("--workers", spec.workers, "Monte-Carlo worker threads")->capture_default_str();
    app.add_option("--baselines", baselines, "comma list of capacity,pilot_uniform,pilot_boost,lower_bound,slopes; or all|none")
        ->capture_default_str();
    app.add_flag("--grid-accel", spec.grid_accel, "interpolate the density kernels on a precomputed grid");
    app.add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--output", spec.output, "output path, - for stdout")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success&) {
        out << (app.get_version_ptr()->count() > 0 ? std::string(kVersion) + "\n" : app.help());
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    parse_grid(grid, spec);
    spec.baselines = parse_baselines(baselines);
    spec.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
    spec.validate();
    return spec;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const std::function<void(const SweepRow&)>& on_row,
                                const std::function<void(const std::string&)>& warn)
{
    spec.validate();
    const std::vector<double> grid = spec.snr_grid_db();
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        SweepRow r;
        r.snr_db = grid[i];
        const double snr = snr_db_to_linear(r.snr_db);
        const ChannelConfig cfg(spec.n_t, spec.n_r, spec.n_b, snr);
        try {
            DensityEvaluator eval(cfg);
            if (spec.grid_accel) {
                eval = build_grid(eval, default_grid_extent(cfg), kDefaultGridPoints);
            }
            const MIEstimate m = mutual_information(cfg, spec.rule, derive_seed(spec.seed, i), spec.workers, &eval);
            if (m.hit_max_samples && warn) {
                warn("snr_db=" + fmt(r.snr_db) + ": max-samples reached before the CI target");
            }
            r.mi_bits = m.mi_bits;
            r.mi_stderr = m.stderr_bits;
            r.n_samples = m.n_samples;
            r.cond_entropy_bits = m.cond_entropy_bits;
            r.out_entropy_bits = m.out_entropy_bits;
            r.degenerate_resample_count = m.degenerate_resamples;
        } catch (const NumericalHealth& e) {
            throw SweepFailure(r.snr_db, e.what());
        } catch (const NumericalFailure& e) {
            throw SweepFailure(r.snr_db, e.what());
        }

        if (spec.baselines.capacity) {
            r.capacity_csi_bits = perfect_csi_capacity(cfg);
        }
        if (spec.baselines.pilot_uniform) {
            const PilotResult p = pilot_se_uniform(cfg);
            r.pilot_uniform_bits = p.se_bits;
            r.pilot_uniform_np = p.n_p;
        }
        if (spec.baselines.pilot_boost) {
            try {
                r.pilot_boost_bits = pilot_se_boosted(cfg).se_bits;
            } catch (const UnsupportedRegime& e) {
                if (warn) {
                    warn("snr_db=" + fmt(r.snr_db) + ": pilot_boost left empty: " + e.what());
                }
            }
        }
        if (spec.baselines.lower_bound) {
            r.lower_bound_bits = mi_lower_bound(cfg);
        }
        if (r.mi_bits > 0.0) {
            r.ebn0_db = 10.0 * std::log10(snr / r.mi_bits);
        }
        rows.push_back(r);
        if (on_row) {
            on_row(rows.back());
        }
    }
    return rows;
}

std::string format_csv_row(const SweepRow& r)
{
    auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
    std::string s;
    s += fmt(r.snr_db) + ',';
    s += fmt(r.mi_bits) + ',';
    s += fmt(r.mi_stderr) + ',';
    s += std::to_string(r.n_samples) + ',';
    s += fmt(r.cond_entropy_bits) + ',';
    s += fmt(r.out_entropy_bits) + ',';
    s += opt(r.capacity_csi_bits) + ',';
    s += opt(r.pilot_uniform_bits) + ',';
    s += (r.pilot_uniform_np ? std::to_string(*r.pilot_uniform_np) : std::string()) + ',';
    s += opt(r.pilot_boost_bits) + ',';
    s += opt(r.lower_bound_bits) + ',';
    s += opt(r.ebn0_db) + ',';
    s += std::to_string(r.degenerate_resample_count);
    return s;
}

SweepWriter::SweepWriter(const SweepSpec& spec, std::ostream& os) : spec_(spec), os_(os)
{
    os_.exceptions(std::ios::badbit | std::ios::failbit);
    if (spec_.format == OutputFormat::csv) {
        os_ << "# ncmi_sweep " << kVersion << '\n';
        os_ << "# spec " << spec_json(spec_) << '\n';
        if (spec_.baselines.slopes) {
            const ChannelConfig cfg(spec_.n_t, spec_.n_r, spec_.n_b, 1.0);
            os_ << "# slope_capacity " << fmt(high_snr_slope_capacity(cfg)) << '\n';
            os_ << "# slope_pilot " << fmt(high_snr_slope_pilot(cfg)) << '\n';
        }
        const auto& cols = sweep_columns();
        for (std::size_t i = 0; i < cols.size(); ++i) {
            os_ << (i ? "," : "") << cols[i];
        }
        os_ << '\n';
    } else {
        os_ << "{\"version\":\"" << kVersion << "\",\"spec\":" << spec_json(spec_) << ",\"rows\":[";
    }
    os_.flush();
}

void SweepWriter::row(const SweepRow& r)
{
    if (spec_.format == OutputFormat::csv) {
        os_ << format_csv_row(r) << '\n';
    } else {
        os_ << (rows_.empty() ? "\n" : ",\n") << row_json(r).dump();
    }
    rows_.push_back(r);
    os_.flush();
}

void SweepWriter::finish()
{
    const json summary = summary_json(spec_, rows_);
    if (spec_.format == OutputFormat::csv) {
        const auto& e = summary["min_ebn0_db"];
        if (e.is_null()) {
            os_ << "# min_ebn0_db none\n";
        } else {
            os_ << "# min_ebn0_db " << fmt(e.get<double>()) << " at snr_db "
                << fmt(summary["min_ebn0_snr_db"].get<double>()) << '\n';
        }
    } else {
        os_ << "\n],\"summary\":" << summary.dump() << "}\n";
    }
    os_.flush();
}

} // namespace ncmi
