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

// Precision-generic exponential-integral kernels shared by the double API
// and the binary128 Wishart sum.

#pragma once

#include <cfloat>
#include <cmath>
#include <quadmath.h>
#include <string>
#include <vector>

#include "ncmi/errors.hpp"

namespace ncmi::detail {

template <class R>
struct RealOps;

template <>
struct RealOps<double> {
    static double exp(double v) { return std::exp(v); }
    static double log(double v) { return std::log(v); }
    static double abs(double v) { return std::fabs(v); }
    static constexpr double eps() { return DBL_EPSILON; }
    static double euler() { return 0.57721566490153286060651209; }
};

template <>
struct RealOps<__float128> {
    static __float128 exp(__float128 v) { return expq(v); }
    static __float128 log(__float128 v) { return logq(v); }
    static __float128 abs(__float128 v) { return fabsq(v); }
    static __float128 eps() { return FLT128_EPSILON; }
    static __float128 euler()
    {
        static const __float128 g = strtoflt128("0.57721566490153286060651209008240243104215933593992", nullptr);
        return g;
    }
};

/// E_1(x) for 0 < x <= 1 by the convergent power series.
template <class R>
R e1_series(R x)
{
    using Ops = RealOps<R>;
    R sum = 0;
    R term = 1;
    for (int k = 1; k < 1000; ++k) {
        term *= -x / R(k);
        const R contrib = term / R(k);
        sum += contrib;
        if (Ops::abs(contrib) < Ops::eps() * Ops::abs(sum) * R(0.25)) {
            break;
        }
    }
    return -Ops::euler() - Ops::log(x) - sum;
}

/// e^x E_n(x) for x > 1, n >= 1, modified Lentz evaluation of the continued fraction.
template <class R>
R scaled_en_continued_fraction(int n, R x)
{
    using Ops = RealOps<R>;
    const R tiny = R(1e-300);
    R b = x + R(n);
    R c = R(1) / tiny;
    R d = R(1) / b;
    R h = d;
    for (int i = 1; i < 100000; ++i) {
        const R a = -R(i) * R(n - 1 + i);
        b += R(2);
        d = R(1) / (a * d + b);
        c = b + a / c;
        const R del = c * d;
        h *= del;
        if (Ops::abs(del - R(1)) <= Ops::eps()) {
            return h;
        }
    }
    throw NumericalFailure("exponential integral continued fraction did not converge for n=" + std::to_string(n));
}

/// Fills out[q] = e^x E_q(x) for q = 0..q_max.
template <class R>
std::vector<R> scaled_en_table(int q_max, R x)
{
    using Ops = RealOps<R>;
    std::vector<R> out(static_cast<std::size_t>(q_max) + 1);
    out[0] = R(1) / x;
    if (q_max == 0) {
        return out;
    }
    if (x <= R(1)) {
        // Upward recurrence e^x E_{q+1} = (1 - x e^x E_q)/q loses nothing for x <= 1.
        out[1] = Ops::exp(x) * e1_series(x);
        for (int q = 1; q < q_max; ++q) {
            out[q + 1] = (R(1) - x * out[q]) / R(q);
        }
    } else {
        for (int q = 1; q <= q_max; ++q) {
            out[q] = scaled_en_continued_fraction(q, x);
        }
    }
    return out;
}

} // namespace ncmi::detail
