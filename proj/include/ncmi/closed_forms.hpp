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

#include "ncmi/model.hpp"

namespace ncmi {

/// Largest Wishart dimension / sample count the closed form accepts.
inline constexpr int kMaxWishartDim = 8;
inline constexpr int kMaxWishartSamples = 1024;

/// E[log2 det(I + rho W)] in bits for a complex Wishart W = G G^H, G an
/// m x n matrix of unit-variance complex Gaussians, n >= m.
///
/// Evaluated through the exact alternating triple sum over exponential
/// integrals. The sum cancels heavily once n reaches the hundreds (term
/// magnitudes exceed the result by up to 1e13 at m = 8), so coefficients,
/// exponential integrals and accumulation all run in binary128.
///
/// Throws InvalidArgument for n < m or rho <= 0, UnsupportedSize beyond
/// m = 8 or n = 1024.
double wishart_logdet_mean(int m, int n, double rho);

/// h(Y|X) in bits per fading block.
double cond_entropy(const ChannelConfig& config);

/// Ergodic perfect-CSI capacity E[log2 det(I + snr/n_t H H^H)] in bits/s/Hz
/// for arbitrary antenna counts.
double capacity_bits(int n_t, int n_r, double snr);

/// capacity_bits at the configuration's antennas and SNR (no n_b dependence).
double perfect_csi_capacity(const ChannelConfig& config);

/// min(n_t,n_r) (1 - min(n_t,n_r)/n_b), bits/s/Hz per 3 dB.
double high_snr_slope_capacity(const ChannelConfig& config);

/// min(n_t,n_r) (1 - n_t/n_b), bits/s/Hz per 3 dB.
double high_snr_slope_pilot(const ChannelConfig& config);

/// C(snr) - (n_t n_r / n_b) log2(1 + snr n_b / n_t). May be negative.
double mi_lower_bound(const ChannelConfig& config);

} // namespace ncmi
