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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace ncmi {

struct QuadratureSettings {
    double rel_tol = 1e-9;
    int max_subdivisions = 400;
};

/// Result of a vector-valued integration with up to kMaxComponents entries.
struct QuadratureResult {
    static constexpr std::size_t kMaxComponents = 8;

    std::array<double, kMaxComponents> value{};
    std::array<double, kMaxComponents> error{};
    std::size_t components = 0;
    int intervals = 0;
    bool converged = false;
    double worst_lo = 0.0; // interval carrying the largest error when not converged
    double worst_hi = 0.0;
};

namespace detail {

// 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule
// (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780, 0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
    double lo;
    double hi;
    std::array<double, QuadratureResult::kMaxComponents> value;
    std::array<double, QuadratureResult::kMaxComponents> error;
    double priority;
};

template <class F>
Segment kronrod15(F& f, double lo, double hi, std::size_t nc)
{
    using Vec = std::array<double, QuadratureResult::kMaxComponents>;
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    std::array<Vec, 15> fv{};
    f(center, std::span<double>(fv[7].data(), nc));
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        f(center - dx, std::span<double>(fv[j].data(), nc));
        f(center + dx, std::span<double>(fv[14 - j].data(), nc));
    }

    Segment s{lo, hi, {}, {}, 0.0};
    for (std::size_t c = 0; c < nc; ++c) {
        double resk = fv[7][c] * kWgk[7];
        double resg = fv[7][c] * kWg[3];
        for (std::size_t j = 0; j < 7; ++j) {
            const double pair = fv[j][c] + fv[14 - j][c];
            resk += kWgk[j] * pair;
            if (j % 2 == 1) {
                resg += kWg[j / 2] * pair;
            }
        }
        const double reskh = 0.5 * resk;
        double resasc = kWgk[7] * std::fabs(fv[7][c] - reskh);
        double resabs = kWgk[7] * std::fabs(fv[7][c]);
        for (std::size_t j = 0; j < 7; ++j) {
            resasc += kWgk[j] * (std::fabs(fv[j][c] - reskh) + std::fabs(fv[14 - j][c] - reskh));
            resabs += kWgk[j] * (std::fabs(fv[j][c]) + std::fabs(fv[14 - j][c]));
        }
        resasc *= std::fabs(half);
        resabs *= std::fabs(half);
        double err = std::fabs((resk - resg) * half);
        if (resasc != 0.0 && err != 0.0) {
            err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
        }
        const double round_floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
        if (resabs > std::numeric_limits<double>::min() / (50.0 * std::numeric_limits<double>::epsilon())) {
            err = std::max(round_floor, err);
        }
        s.value[c] = resk * half;
        s.error[c] = err;
    }
    return s;
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) over consecutive breakpoints.
///
/// \p f(z, out) writes \p components integrand values at z; it is never called
/// at a breakpoint. Subdivides the segment with the largest relative error
/// until every component satisfies sum(err) <= rel_tol * |sum(value)| or the
/// subdivision budget runs out (converged = false).
template <class F>
QuadratureResult integrate_adaptive(F&& f, std::span<const double> breakpoints, std::size_t components,
                                    const QuadratureSettings& settings)
{
    QuadratureResult out;
    out.components = components;
    if (breakpoints.size() < 2 || components == 0 || components > QuadratureResult::kMaxComponents) {
        return out;
    }

    std::vector<detail::Segment> segs;
    segs.reserve(breakpoints.size() + static_cast<std::size_t>(settings.max_subdivisions) + 1);
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] > breakpoints[i]) {
            segs.push_back(detail::kronrod15(f, breakpoints[i], breakpoints[i + 1], components));
        }
    }

    const auto totals = [&](QuadratureResult& r) {
        r.value.fill(0.0);
        r.error.fill(0.0);
        for (const auto& s : segs) {
            for (std::size_t c = 0; c < components; ++c) {
                r.value[c] += s.value[c];
                r.error[c] += s.error[c];
            }
        }
    };
    const auto ok = [&](const QuadratureResult& r) {
        for (std::size_t c = 0; c < components; ++c) {
            if (!(r.error[c] <= settings.rel_tol * std::fabs(r.value[c]))) {
                return false;
            }
        }
        return true;
    };
    // Segment priority: its error relative to the running total, worst component.
    const auto rank = [&](const QuadratureResult& r) {
        for (auto& s : segs) {
            double p = 0.0;
            for (std::size_t c = 0; c < components; ++c) {
                const double scale = std::fabs(r.value[c]);
                p = std::max(p, scale > 0.0 ? s.error[c] / scale : s.error[c]);
            }
            s.priority = p;
        }
    };

    totals(out);
    int splits = 0;
    while (!ok(out)) {
        if (splits >= settings.max_subdivisions) {
            rank(out);
            const auto worst = std::max_element(segs.begin(), segs.end(),
                                                [](const auto& a, const auto& b) { return a.priority < b.priority; });
            out.worst_lo = worst->lo;
            out.worst_hi = worst->hi;
            out.intervals = static_cast<int>(segs.size());
            return out;
        }
        rank(out);
        auto worst = std::max_element(segs.begin(), segs.end(),
                                      [](const auto& a, const auto& b) { return a.priority < b.priority; });
        const double lo = worst->lo;
        const double hi = worst->hi;
        const double mid = 0.5 * (lo + hi);
        *worst = detail::kronrod15(f, lo, mid, components);
        segs.push_back(detail::kronrod15(f, mid, hi, components));
        ++splits;
        totals(out);
    }
    out.converged = true;
    out.intervals = static_cast<int>(segs.size());
    return out;
}

} // namespace ncmi
