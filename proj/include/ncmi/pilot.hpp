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

#include <span>
#include <utility>

#include "ncmi/model.hpp"

namespace ncmi {

struct PilotResult {
    double se_bits = 0.0;       // bits/s/Hz
    int n_p = 0;                // pilot symbols per block
    double effective_snr = 0.0; // SNR handed to the perfect-CSI capacity
    bool boosted = false;
};

/// Equal-power pilots, channel estimate treated as the true channel.
/// Searches every integer n_p in [n_t, n_b]; ties go to the smaller n_p.
PilotResult pilot_se_uniform(const ChannelConfig& config);

/// Rate of the uniform scheme for one fixed pilot count.
PilotResult pilot_se_uniform_at(const ChannelConfig& config, int n_p);

/// n_p = n_t pilots with optimal power boost. Requires n_b > 2 n_t, throws
/// UnsupportedRegime otherwise.
PilotResult pilot_se_boosted(const ChannelConfig& config);

struct EnergyPerBit {
    double snr = 0.0;     // linear
    double ebn0_db = 0.0; // 10 log10(snr / rate)
};

/// Grid point minimizing snr / rate over points with positive rate.
/// Throws NoPositiveRate when no point qualifies.
EnergyPerBit min_energy_per_bit(std::span<const std::pair<double, double>> curve);

} // namespace ncmi
