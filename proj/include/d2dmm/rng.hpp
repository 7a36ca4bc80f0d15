// d2dmm: uplink D2D underlay resource sharing for mmWave cells
// Copyright (C) 2026 The d2dmm authors
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
#include <initializer_list>
#include <random>

namespace d2dmm {

using Engine = std::mt19937_64;

// Unit conversions. Everything inside the library is linear scale (watts,
// power ratios); dB values only appear at the configuration boundary.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Folds a list of words into one well-mixed 64-bit seed. Order matters.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words)
{
    std::uint64_t h = 0x6a09e667f3bcc908ULL;
    for (auto w : words)
        h = splitmix64(h ^ splitmix64(w));
    return h;
}

/// Stream tags keep independent random consumers of one drop apart.
enum class StreamTag : std::uint64_t {
    Placement = 1,
    Promotion = 2,
    Link = 3,
};

/// Deterministic engine for (seed, drop, tag, a, b). Every random consumer in
/// a drop derives its own stream from this, so results never depend on the
/// order in which drops or links are evaluated.
inline Engine make_stream(std::uint64_t seed, std::uint64_t drop, StreamTag tag,
                          std::uint64_t a = 0, std::uint64_t b = 0)
{
    return Engine{mix_seed({seed, drop, static_cast<std::uint64_t>(tag), a, b})};
}

} // namespace d2dmm
