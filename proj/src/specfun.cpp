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

#include "ncmi/specfun.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "exp_integral_impl.hpp"
#include "ncmi/errors.hpp"

namespace ncmi {

SignedLogValue SignedLogValue::from_log(double log_mag, int s)
{
    if (s == 0 || log_mag == -std::numeric_limits<double>::infinity()) {
        return zero();
    }
    return {log_mag, s > 0 ? 1 : -1};
}

SignedLogValue SignedLogValue::from(double v)
{
    if (v == 0.0) {
        return zero();
    }
    return {std::log(std::fabs(v)), v > 0 ? 1 : -1};
}

SignedLogValue operator*(const SignedLogValue& a, const SignedLogValue& b)
{
    if (a.is_zero() || b.is_zero()) {
        return SignedLogValue::zero();
    }
    return {a.log_magnitude + b.log_magnitude, a.sign * b.sign};
}

SignedLogValue operator/(const SignedLogValue& a, const SignedLogValue& b)
{
    if (b.is_zero()) {
        throw DomainError("SignedLogValue division by zero");
    }
    if (a.is_zero()) {
        return SignedLogValue::zero();
    }
    return {a.log_magnitude - b.log_magnitude, a.sign * b.sign};
}

SignedLogValue operator+(const SignedLogValue& a, const SignedLogValue& b)
{
    if (a.is_zero()) {
        return b;
    }
    if (b.is_zero()) {
        return a;
    }
    const SignedLogValue& big = a.log_magnitude >= b.log_magnitude ? a : b;
    const SignedLogValue& small = a.log_magnitude >= b.log_magnitude ? b : a;
    const double ratio = std::exp(small.log_magnitude - big.log_magnitude);
    if (big.sign == small.sign) {
        return {big.log_magnitude + std::log1p(ratio), big.sign};
    }
    if (ratio == 1.0) {
        return SignedLogValue::zero();
    }
    return {big.log_magnitude + std::log1p(-ratio), big.sign};
}

SignedLogValue operator-(const SignedLogValue& a, const SignedLogValue& b) { return a + (-b); }

double exp_integral_e1(double x)
{
    if (!(x > 0.0)) {
        throw DomainError("E_1(x) requires x > 0");
    }
    if (x <= 1.0) {
        return detail::e1_series(x);
    }
    return detail::scaled_en_continued_fraction(1, x) * std::exp(-x);
}

double exp_integral_eq(int q, double x)
{
    if (!(x > 0.0)) {
        throw DomainError("E_q(x) requires x > 0");
    }
    if (q < 0) {
        throw InvalidArgument("E_q(x) requires q >= 0");
    }
    if (q == 0) {
        return std::exp(-x) / x;
    }
    if (x > 1.0) {
        return detail::scaled_en_continued_fraction(q, x) * std::exp(-x);
    }
    const double em = std::exp(-x);
    double e = detail::e1_series(x);
    for (int k = 1; k < q; ++k) {
        e = (em - x * e) / k;
    }
    return e;
}

double scaled_exp_integral(int q, double x)
{
    if (!(x > 0.0)) {
        throw DomainError("e^x E_q(x) requires x > 0");
    }
    if (q < 0) {
        throw InvalidArgument("e^x E_q(x) requires q >= 0");
    }
    if (q == 0) {
        return 1.0 / x;
    }
    if (x > 1.0) {
        return detail::scaled_en_continued_fraction(q, x);
    }
    return detail::scaled_en_table<double>(q, x)[static_cast<std::size_t>(q)];
}

namespace {

constexpr std::size_t kLogFactorialTable = 4096;

const std::array<double, kLogFactorialTable>& log_factorial_table()
{
    static const auto table = [] {
        std::array<double, kLogFactorialTable> t{};
        __float128 acc = 0;
        t[0] = 0.0;
        for (std::size_t n = 1; n < kLogFactorialTable; ++n) {
            acc += logq(static_cast<__float128>(n));
            t[n] = static_cast<double>(acc);
        }
        return t;
    }();
    return table;
}

} // namespace

double log_factorial(std::int64_t n)
{
    if (n < 0) {
        throw InvalidArgument("log_factorial requires n >= 0, got " + std::to_string(n));
    }
    if (static_cast<std::uint64_t>(n) < kLogFactorialTable) {
        return log_factorial_table()[static_cast<std::size_t>(n)];
    }
    return std::lgamma(static_cast<double>(n) + 1.0);
}

std::optional<unsigned __int128> binomial_exact(std::int64_t n, std::int64_t k)
{
    if (n < 0) {
        throw InvalidArgument("binomial requires n >= 0, got " + std::to_string(n));
    }
    if (k < 0 || k > n) {
        return static_cast<unsigned __int128>(0);
    }
    k = std::min(k, n - k);
    using u128 = unsigned __int128;
    const auto gcd = [](u128 a, u128 b) {
        while (b != 0) {
            const u128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    };
    constexpr u128 kMax = ~static_cast<u128>(0);
    // C(n, i) = C(n, i-1) * (n-k+i) / i is integral; with g = gcd(r, i) the
    // reduced divisor i/g must divide the multiplier.
    u128 r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        const u128 g = gcd(r, static_cast<u128>(i));
        const u128 a = r / g;
        const u128 b = static_cast<u128>(n - k + i) / (static_cast<u128>(i) / g);
        if (b != 0 && a > kMax / b) {
            return std::nullopt;
        }
        r = a * b;
    }
    return r;
}

SignedLogValue binomial(std::int64_t n, std::int64_t k)
{
    const auto exact = binomial_exact(n, k);
    if (exact) {
        if (*exact == 0) {
            return SignedLogValue::zero();
        }
        return SignedLogValue::from_log(static_cast<double>(logq(static_cast<__float128>(*exact))), 1);
    }
    return SignedLogValue::from_log(log_factorial(n) - log_factorial(k) - log_factorial(n - k), 1);
}

} // namespace ncmi
