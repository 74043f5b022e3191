// Copyright 2026 The tlp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small numeric helpers shared by feature selection and the power analysis.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tlp::stats {

/// 1-based average ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

/// Equal-frequency discretization into at most `bins` codes. A value's bin
/// is floor(r * bins / m) where r is the 0-based position of the first
/// occurrence of that value in sorted order and m the number of present
/// values, so ties always share a bin and any strictly monotone transform
/// leaves the codes unchanged. Absent values (nullopt) get code `bins`.
std::vector<int> equal_frequency_bins(std::span<const std::optional<double>> values, int bins);
std::vector<int> equal_frequency_bins(std::span<const double> values, int bins);

/// Base-2 entropy of a code vector.
double entropy(std::span<const int> codes);
/// Base-2 conditional entropy H(Y | X).
double conditional_entropy(std::span<const int> y, std::span<const int> x);

/// (H(Y) - H(Y|X)) / H(X); 0 when H(X) = 0.
double gain_ratio(std::span<const int> x, std::span<const int> y);
/// 2 * IG / (H(X) + H(Y)); 0 when both entropies vanish.
double symmetric_uncertainty(std::span<const int> x, std::span<const int> y);

/// Regularized upper incomplete gamma Q(a, x), series / continued fraction
/// to 1e-10 relative accuracy.
double regularized_gamma_q(double a, double x);
/// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, double df);

}  // namespace tlp::stats
