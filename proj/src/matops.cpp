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

#include "ncmi/matops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ncmi/errors.hpp"

namespace ncmi {

ComplexMatrix ComplexMatrix::identity(std::size_t n)
{
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.cols() != b.rows()) {
        throw InvalidArgument("multiply: inner dimensions differ");
    }
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cdouble aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

ComplexMatrix adjoint(const ComplexMatrix& a)
{
    ComplexMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            t(j, i) = std::conj(a(i, j));
        }
    }
    return t;
}

double frobenius_sq(const ComplexMatrix& m)
{
    double s = 0.0;
    for (const cdouble& v : m.data()) {
        s += std::norm(v);
    }
    return s;
}

ComplexMatrix gram(const ComplexMatrix& y)
{
    const std::size_t n = y.rows();
    ComplexMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            cdouble s = 0.0;
            for (std::size_t t = 0; t < y.cols(); ++t) {
                s += y(i, t) * std::conj(y(j, t));
            }
            g(i, j) = s;
            g(j, i) = std::conj(s);
        }
        g(i, i) = g(i, i).real();
    }
    return g;
}

std::vector<double> hermitian_eigenvalues(ComplexMatrix a)
{
    const std::size_t n = a.rows();
    if (a.cols() != n) {
        throw InvalidArgument("hermitian_eigenvalues: matrix is not square");
    }
    // Mirror the upper triangle so both halves are consistent.
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            a(j, i) = std::conj(a(i, j));
        }
    }

    constexpr int kMaxSweeps = 60;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        double diag = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            diag += std::norm(a(i, i));
            for (std::size_t j = i + 1; j < n; ++j) {
                off += std::norm(a(i, j));
            }
        }
        if (off <= 1e-34 * diag || off == 0.0) {
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r == 0.0) {
                    continue;
                }
                // Phase e^{i phi} of the pivot makes the 2x2 block real symmetric.
                const cdouble phase = a(p, q) / r;
                const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const cdouble jqp = -s * std::conj(phase);
                const cdouble jqq = c * std::conj(phase);

                for (std::size_t k = 0; k < n; ++k) {
                    const cdouble akp = a(k, p);
                    const cdouble akq = a(k, q);
                    a(k, p) = akp * c + akq * jqp;
                    a(k, q) = akp * s + akq * jqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cdouble apk = a(p, k);
                    const cdouble aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(jqp) * aqk;
                    a(q, k) = s * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) {
        ev[i] = a(i, i).real();
    }
    std::sort(ev.begin(), ev.end());
    return ev;
}

GramSpectrum gram_eigenvalues(const ComplexMatrix& y)
{
    if (y.rows() > y.cols()) {
        throw InvalidArgument("gram_eigenvalues: need rows <= cols, got " + std::to_string(y.rows()) + "x" +
                              std::to_string(y.cols()));
    }
    GramSpectrum out;
    if (y.rows() == 1) {
        out.d.push_back(frobenius_sq(y));
        return out;
    }
    out.d = hermitian_eigenvalues(gram(y));
    for (double& v : out.d) {
        v = std::max(v, 0.0);
    }
    return out;
}

SignedLogValue signed_log_det(RealMatrix m)
{
    const std::size_t n = m.n;
    int sign = 1;
    double log_mag = 0.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::fabs(m(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(m(r, col)) > best) {
                best = std::fabs(m(r, col));
                piv = r;
            }
        }
        if (best == 0.0) {
            return SignedLogValue::zero();
        }
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(m(col, c), m(piv, c));
            }
            sign = -sign;
        }
        const double pv = m(col, col);
        if (pv < 0.0) {
            sign = -sign;
        }
        log_mag += std::log(std::fabs(pv));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m(r, col) / pv;
            if (f == 0.0) {
                continue;
            }
            for (std::size_t c = col + 1; c < n; ++c) {
                m(r, c) -= f * m(col, c);
            }
        }
    }
    return SignedLogValue::from_log(log_mag, sign);
}

double min_gap(std::span<const double> ascending)
{
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < ascending.size(); ++i) {
        g = std::min(g, ascending[i] - ascending[i - 1]);
    }
    return g;
}

} // namespace ncmi
