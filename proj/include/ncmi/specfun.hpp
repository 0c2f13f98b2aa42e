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

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

namespace ncmi {

/// A real number carried as sign * exp(log_magnitude). Zero is sign 0 with
/// log_magnitude = -inf.
struct SignedLogValue {
    double log_magnitude = -std::numeric_limits<double>::infinity();
    int sign = 0;

    static SignedLogValue zero() { return {}; }
    static SignedLogValue from_log(double log_mag, int s = 1);
    static SignedLogValue from(double v);

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_magnitude); }
    bool is_zero() const { return sign == 0; }

    SignedLogValue operator-() const { return from_log(log_magnitude, -sign); }
};

SignedLogValue operator*(const SignedLogValue& a, const SignedLogValue& b);
SignedLogValue operator/(const SignedLogValue& a, const SignedLogValue& b);
SignedLogValue operator+(const SignedLogValue& a, const SignedLogValue& b);
SignedLogValue operator-(const SignedLogValue& a, const SignedLogValue& b);

/// E_1(x) = \int_1^\infty e^{-xt}/t dt for x > 0. Series below x = 1,
/// continued fraction above.
double exp_integral_e1(double x);

/// E_q(x) = \int_1^\infty t^{-q} e^{-xt} dt, q >= 0, x > 0.
double exp_integral_eq(int q, double x);

/// e^x E_q(x), finite for large x where E_q itself underflows.
double scaled_exp_integral(int q, double x);

/// ln(n!) for n >= 0. Tabulated for n < 4096, lgamma beyond.
double log_factorial(std::int64_t n);

/// Exact C(n, k) when it fits in 128 bits. Zero for k outside [0, n].
std::optional<unsigned __int128> binomial_exact(std::int64_t n, std::int64_t k);

/// C(n, k) as a SignedLogValue (exact integer converted when representable).
SignedLogValue binomial(std::int64_t n, std::int64_t k);

} // namespace ncmi
