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

#include <stdexcept>
#include <string>

namespace ncmi {

// Bad caller input: negative counts, non-positive ratios, malformed configs.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the domain where a special function converges.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Dimensions beyond the documented accuracy envelope.
class UnsupportedSize : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Formula has no valid closed form for the requested regime.
class UnsupportedRegime : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quadrature failed to converge or a density came out non-positive.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two Gram eigenvalues closer than the Vandermonde division tolerates.
class DegenerateSpectrum : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Monte-Carlo run saw too many failed or non-finite samples.
class NumericalHealth : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoPositiveRate : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ncmi
