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

#include "ncmi/output_density.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "ncmi/errors.hpp"
#include "ncmi/specfun.hpp"

namespace ncmi {

namespace {

constexpr std::size_t kMaxRx = QuadratureResult::kMaxComponents;
constexpr double kTailDrop = 50.0; // e^-50 relative truncation of the upper tail

// Log of the k = 1 integrand family with z-power p, without constants:
//   L_p(z) = -x/(1+rho z) - z + p ln z - e ln(1+rho z).
struct KernelShape {
    double x;
    double rho;
    double e; // n_b + 1 - n_r

    double log_value(int p, double z) const
    {
        if (z <= 0.0) {
            return p == 0 ? -x : -std::numeric_limits<double>::infinity();
        }
        double l = -x / (1.0 + rho * z) - z - e * std::log1p(rho * z);
        if (p != 0) {
            l += p * std::log(z);
        }
        return l;
    }

    double d1(int p, double z) const
    {
        const double u = 1.0 + rho * z;
        return x * rho / (u * u) - 1.0 + (p != 0 ? p / z : 0.0) - e * rho / u;
    }

    double d2(int p, double z) const
    {
        const double u = 1.0 + rho * z;
        return -2.0 * x * rho * rho / (u * u * u) - (p != 0 ? p / (z * z) : 0.0) + e * rho * rho / (u * u);
    }
};

struct Mode {
    double z;
    double log_value;
    double sigma;
};

double poly(std::span<const double> c, double z)
{
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) {
        v = v * z + c[i];
    }
    return v;
}

// Positive roots of the polynomial with ascending coefficients c (degree <= 3,
// leading coefficient nonzero) by bracketing between the critical points.
std::vector<double> positive_roots(std::span<const double> c)
{
    const std::size_t deg = c.size() - 1;
    const double lead = c[deg];
    double bound = 0.0;
    for (std::size_t i = 0; i < deg; ++i) {
        bound = std::max(bound, std::fabs(c[i] / lead));
    }
    bound += 1.0;

    std::vector<double> knots{0.0};
    if (deg >= 2) {
        // Derivative roots split [0, bound] into monotone pieces.
        std::array<double, 3> dc{};
        for (std::size_t i = 1; i <= deg; ++i) {
            dc[i - 1] = static_cast<double>(i) * c[i];
        }
        if (deg == 2) {
            const double r = -dc[0] / dc[1];
            if (r > 0.0 && r < bound) {
                knots.push_back(r);
            }
        } else {
            const double a = dc[2];
            const double b = dc[1];
            const double cc = dc[0];
            const double disc = b * b - 4.0 * a * cc;
            if (disc >= 0.0) {
                const double sq = std::sqrt(disc);
                const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
                for (double r : {q / a, q != 0.0 ? cc / q : -1.0}) {
                    if (r > 0.0 && r < bound) {
                        knots.push_back(r);
                    }
                }
            }
        }
    }
    knots.push_back(bound);
    std::sort(knots.begin(), knots.end());

    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double lo = knots[i];
        double hi = knots[i + 1];
        double flo = poly(c, lo);
        const double fhi = poly(c, hi);
        if (flo == 0.0) {
            if (lo > 0.0) {
                roots.push_back(lo);
            }
            continue;
        }
        if ((flo > 0.0) == (fhi > 0.0)) {
            continue;
        }
        for (int it = 0; it < 400; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) {
                break;
            }
            const double fm = poly(c, mid);
            if ((fm > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }
    return roots;
}

// Global maximiser of L_p on [0, inf). L_p' z (1+rho z)^2 is a cubic in z
// (a quadratic times z when p = 0), so every stationary point is a polynomial root.
Mode find_mode(const KernelShape& s, int p)
{
    const double r = s.rho;
    const double a3 = -r * r;
    const double a2 = -2.0 * r + p * r * r - s.e * r * r;
    const double a1 = s.x * r - 1.0 + 2.0 * p * r - s.e * r;
    const double a0 = p;

    std::vector<double> cand;
    if (p == 0) {
        const std::array<double, 3> c{a1, a2, a3};
        cand = positive_roots(c);
        cand.push_back(0.0);
    } else {
        const std::array<double, 4> c{a0, a1, a2, a3};
        cand = positive_roots(c);
    }

    Mode best{0.0, -std::numeric_limits<double>::infinity(), 1.0};
    for (double z : cand) {
        const double l = s.log_value(p, z);
        if (l > best.log_value) {
            best.z = z;
            best.log_value = l;
        }
    }
    if (!std::isfinite(best.log_value)) {
        // No interior stationary point: L_p increases from 0 then decays like -z.
        best.z = std::max(1.0, static_cast<double>(p));
        best.log_value = s.log_value(p, best.z);
    }

    double sigma = 0.0;
    if (best.z > 0.0) {
        const double curv = s.d2(p, best.z);
        if (curv < 0.0) {
            sigma = 1.0 / std::sqrt(-curv);
        }
    } else {
        const double slope = s.x * r - 1.0 - s.e * r;
        if (slope < 0.0) {
            sigma = 1.0 / -slope;
        }
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        sigma = std::max(1.0, best.z);
    }
    // Overestimating the width can hide a narrow peak between coarse
    // breakpoints; underestimating only costs extra subdivisions.
    best.sigma = std::clamp(sigma, 1e-8 * (1.0 + best.z), 1.0 + best.z);
    return best;
}

// Smallest z beyond the mode where L_p has dropped by kTailDrop and is
// decreasing steadily.
double tail_cutoff(const KernelShape& s, int p, const Mode& m)
{
    double z = m.z + 8.0 * m.sigma + 1.0;
    for (int it = 0; it < 200; ++it) {
        if (s.log_value(p, z) < m.log_value - kTailDrop && s.d1(p, z) < -0.05) {
            return z;
        }
        z = m.z + 2.0 * (z - m.z);
    }
    return z;
}

} // namespace

DensityEvaluator::DensityEvaluator(const ChannelConfig& config, QuadratureSettings quad)
    : DensityEvaluator(DensityShape::from(config), quad)
{
}

DensityEvaluator::DensityEvaluator(const DensityShape& shape, QuadratureSettings quad)
    : shape_(shape), rho_(shape.snr / shape.n_t), quad_(quad)
{
    if (shape.n_r < 1 || shape.n_t < shape.n_r || shape.n_b < shape.n_r) {
        throw InvalidArgument("density shape needs n_t >= n_r >= 1 and n_b >= n_r");
    }
    if (!(shape.snr > 0.0) || !std::isfinite(shape.snr)) {
        throw InvalidArgument("density shape needs a positive finite snr");
    }
    if (shape.n_b >= shape.n_t) {
        config_.emplace(shape.n_t, shape.n_r, shape.n_b, shape.snr);
    }
    if (static_cast<std::size_t>(shape.n_r) > kMaxRx) {
        throw UnsupportedSize("output density supports n_r <= " + std::to_string(kMaxRx));
    }
    if (shape.n_t - 1 > 170) {
        throw UnsupportedSize("output density: n_t too large");
    }
    if (!(quad.rel_tol > 0.0) || quad.max_subdivisions < 1) {
        throw InvalidArgument("quadrature settings must have rel_tol > 0 and max_subdivisions >= 1");
    }
}

const ChannelConfig& DensityEvaluator::config() const
{
    if (!config_) {
        throw InvalidArgument("density evaluator built for n_b < n_t has no sampling configuration");
    }
    return *config_;
}

DensityEvaluator DensityEvaluator::with_grid(std::shared_ptr<const DensityGrid> grid) const
{
    DensityEvaluator copy = *this;
    copy.grid_ = std::move(grid);
    return copy;
}

void DensityEvaluator::log_f_tilde_direct(double x, std::span<double> out) const
{
    const int nr = shape_.n_r;
    const int p0 = shape_.n_t - shape_.n_r;
    const int p_hi = p0 + nr - 1;
    const KernelShape shape{x, rho_, static_cast<double>(shape_.n_b + 1 - nr)};

    const Mode lo_mode = find_mode(shape, p0);
    const Mode hi_mode = p_hi == p0 ? lo_mode : find_mode(shape, p_hi);
    const double z_hi = std::max(tail_cutoff(shape, p_hi, hi_mode), tail_cutoff(shape, p0, lo_mode));

    std::vector<double> bps{0.0};
    for (const Mode* m : {&lo_mode, &hi_mode}) {
        for (double k : {-6.0, -2.0, 0.0, 2.0, 6.0}) {
            const double z = m->z + k * m->sigma;
            if (z > 0.0 && z < z_hi) {
                bps.push_back(z);
            }
        }
    }
    bps.push_back(z_hi);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    const double lref = lo_mode.log_value;
    const double z_scale = nr > 1 ? hi_mode.z : 1.0;
    const double inv_scale = 1.0 / z_scale;
    const double e = shape.e;
    const double rho = rho_;

    auto integrand = [&](double z, std::span<double> v) {
        const double u = rho * z;
        double l = -x / (1.0 + u) - z - e * std::log1p(u) - lref;
        if (p0 != 0) {
            l += p0 * std::log(z);
        }
        double w = std::exp(l);
        v[0] = w;
        const double r = z * inv_scale;
        for (std::size_t k = 1; k < v.size(); ++k) {
            w *= r;
            v[k] = w;
        }
    };

    const QuadratureResult res = integrate_adaptive(integrand, bps, static_cast<std::size_t>(nr), quad_);
    if (!res.converged) {
        std::ostringstream msg;
        msg << "f~ quadrature did not converge at x=" << x << " (worst interval [" << res.worst_lo << ", "
            << res.worst_hi << "])";
        throw NumericalFailure(msg.str());
    }
    const double log_shift = std::log(z_scale) - std::log(rho);
    for (int k = 0; k < nr; ++k) {
        const double v = res.value[static_cast<std::size_t>(k)];
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw NumericalFailure("f~ quadrature returned a non-positive value at x=" + std::to_string(x));
        }
        out[static_cast<std::size_t>(k)] = lref + std::log(v) + k * log_shift;
    }
}

void DensityEvaluator::log_f_tilde_all(double x, std::span<double> out) const
{
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw InvalidArgument("f~ requires a finite x >= 0");
    }
    if (!grid_ || x > grid_->x_max) {
        log_f_tilde_direct(x, out);
        return;
    }
    const DensityGrid& g = *grid_;
    const double t = std::log1p(x);
    const std::size_t last = g.log_f[0].size() - 1;
    auto i = static_cast<std::size_t>(t / g.step);
    if (i >= last) {
        i = last - 1;
    }
    const double s = (t - static_cast<double>(i) * g.step) / g.step;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    for (std::size_t k = 0; k < g.log_f.size(); ++k) {
        const auto& y = g.log_f[k];
        const auto& m = g.slope[k];
        out[k] = h00 * y[i] + h10 * g.step * m[i] + h01 * y[i + 1] + h11 * g.step * m[i + 1];
    }
}

double f_tilde(const DensityEvaluator& eval, int k, double x)
{
    if (k < 1 || k > eval.shape().n_r) {
        throw InvalidArgument("f~_k requires 1 <= k <= n_r");
    }
    std::array<double, kMaxRx> buf{};
    eval.log_f_tilde_all(x, std::span<double>(buf.data(), static_cast<std::size_t>(eval.shape().n_r)));
    return std::exp(buf[static_cast<std::size_t>(k - 1)]);
}

LogDensity log_density(const DensityEvaluator& eval, const GramSpectrum& spectrum)
{
    const DensityShape& cfg = eval.shape();
    const auto n = static_cast<std::size_t>(cfg.n_r);
    if (spectrum.d.size() != n) {
        throw InvalidArgument("log_density: spectrum size must equal n_r");
    }
    std::array<double, kMaxRx> d{};
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(spectrum.d[i]) || spectrum.d[i] < 0.0) {
            throw InvalidArgument("log_density: eigenvalues must be finite and nonnegative");
        }
        d[i] = spectrum.d[i];
    }
    std::sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(n));

    LogDensity out;
    out.min_gap = min_gap(std::span<const double>(d.data(), n));
    if (n > 1 && out.min_gap < eigen_gap_threshold(d[n - 1])) {
        std::ostringstream msg;
        msg << "degenerate Gram spectrum: gap " << out.min_gap << " below threshold";
        throw DegenerateSpectrum(msg.str());
    }

    // logf[j][i] = ln f~_{i+1}(d_j)
    std::array<std::array<double, kMaxRx>, kMaxRx> logf{};
    for (std::size_t j = 0; j < n; ++j) {
        eval.log_f_tilde_all(d[j], std::span<double>(logf[j].data(), n));
    }

    double log_det = 0.0;
    if (n == 1) {
        log_det = logf[0][0];
    } else {
        // Equilibrate columns then rows before the LU so the pivots stay O(1).
        std::array<double, kMaxRx> col{};
        std::array<double, kMaxRx> row{};
        for (std::size_t j = 0; j < n; ++j) {
            col[j] = *std::max_element(logf[j].begin(), logf[j].begin() + static_cast<std::ptrdiff_t>(n));
        }
        for (std::size_t i = 0; i < n; ++i) {
            double mx = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j) {
                mx = std::max(mx, logf[j][i] - col[j]);
            }
            row[i] = mx;
        }
        RealMatrix z(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                z(i, j) = std::exp(logf[j][i] - col[j] - row[i]);
            }
        }
        const SignedLogValue det = signed_log_det(std::move(z));
        if (det.sign <= 0) {
            throw NumericalFailure("log_density: determinant ratio is not positive");
        }
        log_det = det.log_magnitude;
        for (std::size_t i = 0; i < n; ++i) {
            log_det += col[i] + row[i];
        }
    }
    out.sign_consistent = true;

    double log_vandermonde = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            log_vandermonde += std::log(d[j] - d[i]);
        }
    }
    double log_fact = 0.0;
    for (int k = 1; k <= cfg.n_r; ++k) {
        log_fact += log_factorial(cfg.n_t - k);
    }
    out.log_p = log_det - log_vandermonde - static_cast<double>(cfg.n_b) * static_cast<double>(n) *
                                              std::log(std::numbers::pi) -
                log_fact;
    return out;
}

DensityEvaluator build_grid(const DensityEvaluator& eval, double x_max, int points)
{
    if (!(x_max > 0.0) || !std::isfinite(x_max)) {
        throw InvalidArgument("build_grid requires x_max > 0");
    }
    if (points < 16) {
        throw InvalidArgument("build_grid requires at least 16 points");
    }
    const auto n = static_cast<std::size_t>(eval.shape().n_r);
    const auto np = static_cast<std::size_t>(points);
    auto grid = std::make_shared<DensityGrid>();
    grid->x_max = x_max;
    grid->step = std::log1p(x_max) / static_cast<double>(np - 1);
    grid->log_f.assign(n, std::vector<double>(np));
    grid->slope.assign(n, std::vector<double>(np));

    std::array<double, kMaxRx> buf{};
    for (std::size_t i = 0; i < np; ++i) {
        const double x = i + 1 == np ? x_max : std::expm1(static_cast<double>(i) * grid->step);
        eval.log_f_tilde_direct(x, std::span<double>(buf.data(), n));
        for (std::size_t k = 0; k < n; ++k) {
            grid->log_f[k][i] = buf[k];
        }
    }

    // Fritsch-Carlson slopes for uniform spacing.
    const double h = grid->step;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& y = grid->log_f[k];
        auto& m = grid->slope[k];
        std::vector<double> delta(np - 1);
        for (std::size_t i = 0; i + 1 < np; ++i) {
            delta[i] = (y[i + 1] - y[i]) / h;
        }
        for (std::size_t i = 1; i + 1 < np; ++i) {
            const double a = delta[i - 1];
            const double b = delta[i];
            m[i] = (a * b <= 0.0) ? 0.0 : 2.0 / (1.0 / a + 1.0 / b);
        }
        const auto end_slope = [](double d0, double d1) {
            double s = 0.5 * (3.0 * d0 - d1);
            if ((s > 0.0) != (d0 > 0.0) || d0 == 0.0) {
                s = 0.0;
            } else if ((d0 > 0.0) != (d1 > 0.0) && std::fabs(s) > 3.0 * std::fabs(d0)) {
                s = 3.0 * d0;
            }
            return s;
        };
        m[0] = end_slope(delta[0], delta[1]);
        m[np - 1] = end_slope(delta[np - 2], delta[np - 3]);
    }
    return eval.with_grid(std::move(grid));
}

NormalizationEstimate normalization_check(const DensityEvaluator& eval, double reference_scale, std::size_t samples,
                                          RandomStream& stream)
{
    if (!(reference_scale > 0.0)) {
        throw InvalidArgument("normalization_check requires a positive reference scale");
    }
    if (samples < 2) {
        throw InvalidArgument("normalization_check requires at least two samples");
    }
    const DensityShape& cfg = eval.shape();
    const auto nr = static_cast<std::size_t>(cfg.n_r);
    const auto nb = static_cast<std::size_t>(cfg.n_b);
    const double amp = std::sqrt(reference_scale);
    const double log_norm = -static_cast<double>(nr * nb) * std::log(std::numbers::pi * reference_scale);

    ComplexGaussian gauss;
    ComplexMatrix y(nr, nb);
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t count = 0;
    while (count < samples) {
        for (cdouble& v : y.data()) {
            v = amp * gauss(stream);
        }
        LogDensity ld;
        try {
            ld = log_density(eval, gram_eigenvalues(y));
        } catch (const DegenerateSpectrum&) {
            continue;
        }
        const double log_q = log_norm - frobenius_sq(y) / reference_scale;
        const double w = std::exp(ld.log_p - log_q);
        ++count;
        const double delta = w - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (w - mean);
    }
    NormalizationEstimate out;
    out.mean = mean;
    out.samples = count;
    out.std_error = std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
    return out;
}

double default_grid_extent(const ChannelConfig& config)
{
    return 8.0 * config.n_r() * config.n_b() * (1.0 + config.snr()) + 64.0;
}

} // namespace ncmi
