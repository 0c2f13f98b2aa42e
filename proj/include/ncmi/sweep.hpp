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
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncmi/mi_engine.hpp"

namespace ncmi {

/// Bad command line or config file; the message names the offending flag.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical-health failure at one sweep point.
class SweepFailure : public std::runtime_error {
public:
    SweepFailure(double snr_db, const std::string& what);
    double snr_db() const { return snr_db_; }

private:
    double snr_db_;
};

enum class OutputFormat { csv, json };

struct Baselines {
    bool capacity = true;
    bool pilot_uniform = true;
    bool pilot_boost = true;
    bool lower_bound = true;
    bool slopes = true;
};

struct SweepSpec {
    int n_t = 1;
    int n_r = 1;
    int n_b = 10;
    double snr_start_db = 0.0;
    double snr_stop_db = 20.0;
    double snr_step_db = 5.0;
    StoppingRule rule;
    std::uint64_t seed = 1;
    int workers = 1;
    Baselines baselines;
    bool grid_accel = false;
    OutputFormat format = OutputFormat::csv;
    std::string output = "-"; // "-" is stdout

    /// Throws UsageError naming the flag on a bad value.
    void validate() const;
    std::vector<double> snr_grid_db() const;
};

struct SweepRow {
    double snr_db = 0.0;
    double mi_bits = 0.0;
    double mi_stderr = 0.0;
    std::size_t n_samples = 0;
    double cond_entropy_bits = 0.0;
    double out_entropy_bits = 0.0;
    std::optional<double> capacity_csi_bits;
    std::optional<double> pilot_uniform_bits;
    std::optional<int> pilot_uniform_np;
    std::optional<double> pilot_boost_bits;
    std::optional<double> lower_bound_bits;
    std::optional<double> ebn0_db;
    std::size_t degenerate_resample_count = 0;
};

/// Column names in serialization order.
const std::vector<std::string>& sweep_columns();

/// Parses flags and an optional --config file (TOML/INI keys named after the
/// long flags). Flags win over file values; unknown flags or keys are
/// rejected. Returns nullopt when help or version was printed to \p out.
std::optional<SweepSpec> parse_spec(int argc, const char* const* argv, std::ostream& out);

/// Normalized echo of the resolved spec as compact JSON.
std::string spec_json(const SweepSpec& spec);

/// Evaluates every grid point in ascending SNR. \p on_row fires after each
/// point; \p warn receives non-fatal diagnostics.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const std::function<void(const SweepRow&)>& on_row = {},
                                const std::function<void(const std::string&)>& warn = {});

/// Streams rows to CSV or JSON at spec.output, flushing after every row.
/// Throws std::ios_base::failure on I/O errors.
class SweepWriter {
public:
    SweepWriter(const SweepSpec& spec, std::ostream& os);
    void row(const SweepRow& r);
    void finish();

private:
    const SweepSpec& spec_;
    std::ostream& os_;
    std::vector<SweepRow> rows_;
};

std::string format_csv_row(const SweepRow& r);

} // namespace ncmi
