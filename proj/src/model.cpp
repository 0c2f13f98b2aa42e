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

#include "ncmi/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ncmi/errors.hpp"

namespace ncmi {

ChannelConfig::ChannelConfig(int n_t, int n_r, int n_b, double snr) : n_t_(n_t), n_r_(n_r), n_b_(n_b), snr_(snr)
{
    if (n_t < 1 || n_r < 1 || n_b < 1) {
        throw InvalidArgument("antenna counts and blocklength must be >= 1");
    }
    if (n_t < n_r) {
        throw InvalidArgument("n_t must be >= n_r (got n_t=" + std::to_string(n_t) + ", n_r=" + std::to_string(n_r) +
                              ")");
    }
    if (n_b < n_t) {
        throw InvalidArgument("n_b must be >= n_t (got n_b=" + std::to_string(n_b) + ", n_t=" + std::to_string(n_t) +
                              ")");
    }
    if (!(snr > 0.0) || !std::isfinite(snr)) {
        throw InvalidArgument("snr must be positive and finite");
    }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RandomStream make_stream(std::uint64_t master, std::uint64_t index)
{
    const std::uint64_t s = derive_seed(master, index);
    std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return RandomStream(seq);
}

void sample_block(const ChannelConfig& config, RandomStream& stream, ComplexGaussian& gauss, BlockSample& out)
{
    const auto nt = static_cast<std::size_t>(config.n_t());
    const auto nr = static_cast<std::size_t>(config.n_r());
    const auto nb = static_cast<std::size_t>(config.n_b());
    out.h.resize(nr, nt);
    out.x.resize(nt, nb);
    out.y.resize(nr, nb);
    for (cdouble& v : out.h.data()) {
        v = gauss(stream);
    }
    for (cdouble& v : out.x.data()) {
        v = gauss(stream);
    }
    const double gain = std::sqrt(config.snr() / config.n_t());
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t t = 0; t < nb; ++t) {
            cdouble s = 0.0;
            for (std::size_t k = 0; k < nt; ++k) {
                s += out.h(r, k) * out.x(k, t);
            }
            out.y(r, t) = gain * s + gauss(stream);
        }
    }
}

BlockSample sample_block(const ChannelConfig& config, RandomStream& stream)
{
    ComplexGaussian gauss;
    BlockSample out;
    sample_block(config, stream, gauss, out);
    return out;
}

int coherence_blocklength(double doppler_hz, double symbol_period_s)
{
    if (!(doppler_hz > 0.0) || !(symbol_period_s > 0.0)) {
        throw InvalidArgument("coherence_blocklength: Doppler and symbol period must be positive");
    }
    // Relative nudge so products such as 50 Hz * 100 us that are integral in
    // decimal do not floor one below after binary rounding.
    const double nb = std::floor(1.0 / (2.0 * doppler_hz * symbol_period_s) * (1.0 + 1e-12));
    if (nb < 1.0) {
        return 1;
    }
    if (nb > static_cast<double>(std::numeric_limits<int>::max())) {
        return std::numeric_limits<int>::max();
    }
    return static_cast<int>(nb);
}

double snr_db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double x)
{
    if (!(x > 0.0)) {
        throw InvalidArgument("linear_to_db requires a positive ratio");
    }
    return 10.0 * std::log10(x);
}

} // namespace ncmi
