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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "ncmi/specfun.hpp"

namespace ncmi {

using cdouble = std::complex<double>;

/// Dense complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cdouble& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cdouble& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<cdouble> data() { return data_; }
    std::span<const cdouble> data() const { return data_; }

    void resize(std::size_t rows, std::size_t cols)
    {
        rows_ = rows;
        cols_ = cols;
        data_.resize(rows * cols);
    }

    static ComplexMatrix identity(std::size_t n);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cdouble> data_;
};

/// Real square matrix, row-major.
struct RealMatrix {
    std::size_t n = 0;
    std::vector<double> a;

    explicit RealMatrix(std::size_t size = 0) : n(size), a(size * size, 0.0) {}
    double& operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a[r * n + c]; }
};

/// Eigenvalues of Y Y^H for an n_r x n_b output block, sorted ascending.
/// These are the nonzero eigenvalues of Y^H Y.
struct GramSpectrum {
    std::vector<double> d;
};

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);

/// Sum of squared entry magnitudes.
double frobenius_sq(const ComplexMatrix& m);

/// Hermitian Y Y^H (rows x rows).
ComplexMatrix gram(const ComplexMatrix& y);

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations, ascending.
/// Only the upper triangle is read.
std::vector<double> hermitian_eigenvalues(ComplexMatrix h);

/// Spectrum of Y Y^H. Requires rows <= cols; throws InvalidArgument otherwise.
GramSpectrum gram_eigenvalues(const ComplexMatrix& y);

/// Sign and log-magnitude of det(m) via LU with partial pivoting.
/// Singular input yields sign 0.
SignedLogValue signed_log_det(RealMatrix m);

/// Minimum admissible gap between Gram eigenvalues before the Vandermonde
/// division is refused.
inline double eigen_gap_threshold(double d_max) { return 1e-9 * (d_max > 1.0 ? d_max : 1.0); }

/// Smallest pairwise gap of an ascending spectrum; +inf for fewer than two values.
double min_gap(std::span<const double> ascending);

} // namespace ncmi
