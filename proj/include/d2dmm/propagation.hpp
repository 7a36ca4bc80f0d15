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

#include "d2dmm/rng.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace d2dmm {

/// Log-distance path loss with lognormal shadowing:
/// PL(d) [dB] = mu + 10 * exponent * log10(d) + xi,  xi ~ N(0, sigma^2).
struct PathLossParams {
    double mu_db = 61.4;
    double exponent = 2.0;
    double sigma_db = 5.8;
};

/// Probability that a link sees line of sight. D2D links use `p1`, all other
/// links (anything touching the BS or a UT) use `p2`.
struct LosProbability {
    double p1 = 0.8;
    double p2 = 0.2;
};

struct FadingParams {
    /// Specular-to-diffuse power ratio, linear. 0 is Rayleigh, +inf is no fading.
    double rician_k = 5.0;
};

enum class LinkClass { D2D, NonD2D };
enum class LinkCondition { LOS, NLOS };

struct PropagationParams {
    PathLossParams los{61.4, 2.0, 5.8};
    PathLossParams nlos{72.0, 2.92, 8.7};
    LosProbability los_probability{0.8, 0.2};
    FadingParams fading{5.0};

    const PathLossParams& for_condition(LinkCondition c) const
    {
        return c == LinkCondition::LOS ? los : nlos;
    }
};

struct Position {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Distances below this are clamped before taking the logarithm.
inline constexpr double kMinLinkDistance = 1.0;

inline double path_loss_db(double distance_m, const PathLossParams& params, double shadow_db)
{
    const double d = distance_m < kMinLinkDistance ? kMinLinkDistance : distance_m;
    return params.mu_db + 10.0 * params.exponent * std::log10(d) + shadow_db;
}

template <class Rng>
LinkCondition sample_link_condition(LinkClass cls, const LosProbability& probs, Rng& rng)
{
    const double p = cls == LinkClass::D2D ? probs.p1 : probs.p2;
    std::bernoulli_distribution los(p);
    return los(rng) ? LinkCondition::LOS : LinkCondition::NLOS;
}

template <class Rng>
double sample_shadowing_db(double sigma_db, Rng& rng)
{
    if (sigma_db <= 0.0)
        return 0.0;
    std::normal_distribution<double> xi(0.0, sigma_db);
    return xi(rng);
}

/// |h|^2 for a unit-mean-power Rician variate
///   h = sqrt(K/(K+1)) + sqrt(1/(K+1)) * CN(0, 1).
template <class Rng>
double rician_power(const FadingParams& fading, Rng& rng)
{
    const double k = fading.rician_k;
    if (!(k >= 0.0))
        throw std::domain_error("rician_power: K factor must be non-negative");
    if (std::isinf(k))
        return 1.0;
    const double los = std::sqrt(k / (k + 1.0));
    std::normal_distribution<double> diffuse(0.0, std::sqrt(0.5 / (k + 1.0)));
    const double re = los + diffuse(rng);
    const double im = diffuse(rng);
    return re * re + im * im;
}

/// Linear gain for a fixed path loss and fading multiplier.
inline double gain_from_loss(double path_loss_db_value, double fading_power)
{
    return std::pow(10.0, -path_loss_db_value / 10.0) * fading_power;
}

struct LinkSample {
    double gain = 0.0;
    LinkCondition condition = LinkCondition::NLOS;
    double shadow_db = 0.0;
    double fading_power = 1.0;
    bool clamped = false;
};

/// One quasi-static realisation of a link: LOS/NLOS draw, then the shadowing
/// draw of the chosen state, then the fading draw.
template <class Rng>
LinkSample channel_gain(Position tx, Position rx, LinkClass cls, const PropagationParams& params,
                        Rng& rng)
{
    LinkSample s;
    const double d = distance(tx, rx);
    s.clamped = d < kMinLinkDistance;
    s.condition = sample_link_condition(cls, params.los_probability, rng);
    const PathLossParams& pl = params.for_condition(s.condition);
    s.shadow_db = sample_shadowing_db(pl.sigma_db, rng);
    s.fading_power = rician_power(params.fading, rng);
    s.gain = gain_from_loss(path_loss_db(d, pl, s.shadow_db), s.fading_power);
    return s;
}

} // namespace d2dmm
