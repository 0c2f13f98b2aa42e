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
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ncmi/matops.hpp"
#include "ncmi/model.hpp"
#include "ncmi/quadrature.hpp"

namespace ncmi {

/// Per-k interpolation tables of ln f~_k on [0, x_max], abscissae uniform in
/// log(1 + x), piecewise monotone cubic (Fritsch-Carlson) in that variable.
struct DensityGrid {
    double x_max = 0.0;
    double step = 0.0; // spacing in t = log1p(x)
    std::vector<std::vector<double>> log_f;  // [k-1][i]
    std::vector<std::vector<double>> slope;  // d ln f~ / dt at the nodes
};

/// Dimensions and SNR the density is defined for. Looser than ChannelConfig:
/// p(Y) is well defined for any n_t >= n_r and n_b >= n_r, including blocks
/// shorter than the transmit array, where the conditional-entropy closed form
/// does not apply.
struct DensityShape {
    int n_t = 1;
    int n_r = 1;
    int n_b = 1;
    double snr = 1.0;

    static DensityShape from(const ChannelConfig& c) { return {c.n_t(), c.n_r(), c.n_b(), c.snr()}; }
    bool operator==(const DensityShape&) const = default;
};

/// Precomputed state for evaluating the unconditional output density p(Y).
///
/// The kernel functions are carried in the stabilized form
///     f~_k(x) = e^{-x} f_k(x)
///           = \int_0^\infty exp{-x/(1+rho z) - z} z^{k-1+n_t-n_r} rho^{-(k-1)}
///                           / (1+rho z)^{n_b+1-n_r} dz,   rho = snr/n_t,
/// which is bounded by the Gamma-type weight e^{-z} z^{k-1+n_t-n_r} and so
/// never overflows. Immutable once built; share freely across threads.
class DensityEvaluator {
public:
    explicit DensityEvaluator(const ChannelConfig& config, QuadratureSettings quad = {});
    explicit DensityEvaluator(const DensityShape& shape, QuadratureSettings quad = {});

    const DensityShape& shape() const { return shape_; }
    /// The sampling configuration; throws InvalidArgument when the evaluator
    /// was built from a shape with n_b < n_t.
    const ChannelConfig& config() const;
    /// snr / n_t.
    double rho() const { return rho_; }
    const QuadratureSettings& quadrature() const { return quad_; }
    bool has_grid() const { return grid_ != nullptr; }
    const DensityGrid* grid() const { return grid_.get(); }

    /// ln f~_k(x) for k = 1..n_r into out[0..n_r). Uses the grid when present
    /// and x <= x_max, direct quadrature otherwise.
    void log_f_tilde_all(double x, std::span<double> out) const;

    /// Same, always by direct quadrature.
    void log_f_tilde_direct(double x, std::span<double> out) const;

    DensityEvaluator with_grid(std::shared_ptr<const DensityGrid> grid) const;

private:
    DensityShape shape_;
    std::optional<ChannelConfig> config_;
    double rho_;
    QuadratureSettings quad_;
    std::shared_ptr<const DensityGrid> grid_;
};

/// e^{-x} f_k(x) for 1 <= k <= n_r, x >= 0.
double f_tilde(const DensityEvaluator& eval, int k, double x);

struct LogDensity {
    double log_p = 0.0;         // natural log of p(Y)
    bool sign_consistent = false;
    double min_gap = 0.0;       // smallest eigenvalue gap seen
};

/// ln p(Y) from the Gram spectrum d of Y (ascending):
///     ln det Z~ - sum_{i<j} ln(d_j - d_i) - n_b n_r ln(pi) - sum_k ln((n_t-k)!)
/// with Z~_{ij} = f~_i(d_j). The e^{-||Y||^2} factor cancels exactly against
/// the e^{d_j} pulled out of each column since sum(d) = ||Y||^2.
///
/// Throws DegenerateSpectrum if two eigenvalues are closer than
/// eigen_gap_threshold, NumericalFailure if the determinant ratio is not
/// strictly positive.
LogDensity log_density(const DensityEvaluator& eval, const GramSpectrum& d);

/// Returns a copy of \p eval carrying interpolation tables on [0, x_max].
/// Requires x_max > 0 and points >= 16.
DensityEvaluator build_grid(const DensityEvaluator& eval, double x_max, int points);

inline constexpr int kDefaultGridPoints = 1024;

/// Grid extent covering the bulk of the Gram eigenvalue law: a multiple of
/// E[tr YY^H] = n_r n_b (1 + snr).
double default_grid_extent(const ChannelConfig& config);

struct NormalizationEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Importance-sampling estimate of \int p(Y) dY with a reference density of
/// IID complex Gaussian entries of variance \p reference_scale.
NormalizationEstimate normalization_check(const DensityEvaluator& eval, double reference_scale, std::size_t samples,
                                          RandomStream& stream);

} // namespace ncmi
