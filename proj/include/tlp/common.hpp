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

#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tlp {

using Timestamp = std::chrono::sys_seconds;
using Seconds = std::chrono::seconds;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data is malformed, missing or inconsistent (CLI exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Caller violated an operation precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Parses "YYYY-MM-DDTHH:MM:SS" followed by "Z" or "+00:00" (fractional
/// seconds are accepted and truncated). Throws DataError.
Timestamp parse_timestamp(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp t);

/// Shortest round-trippable representation; NaN is written as "nan".
std::string format_double(double value);

/// Throws DataError on anything that is not a complete number.
double parse_double(std::string_view text);
std::int64_t parse_int(std::string_view text);

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Small deterministic generator (splitmix-seeded xoshiro256**). All
/// randomized operations draw from this so results depend only on the seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform integer in [0, bound).
  std::size_t below(std::size_t bound);
  double normal();
  /// Knuth's method for small means, normal approximation above 30.
  std::uint64_t poisson(double mean);
  double exponential(double mean);

 private:
  std::uint64_t s_[4];
};

/// 64-bit FNV-1a, used for output manifests.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace tlp
