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

#include "d2dmm/propagation.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace d2dmm {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// How the V = n_rb - n_ut DT pairs that take over spare RBs are chosen.
enum class PromotionRule { StrongestDirect, Random };

/// Parameters of one simulated cell. Defaults are the reference mmWave setup:
/// 500 m cell, 180 kHz RBs, 30/10 dBm UT/DT power, 0 dB SINR targets.
struct ScenarioConfig {
    double cell_radius = 500.0;        // m
    double min_close_in = 35.0;        // m
    std::size_t n_rb = 16;             // N
    std::size_t n_ut = 8;              // K
    std::size_t n_dt = 32;             // DT pairs dropped in the cell, promoted ones included
    double d2d_max_separation = 20.0;  // m
    double bandwidth_per_rb = 180e3;   // Hz
    double p_ut_max = 30.0;            // dBm
    double p_dt_max = 10.0;            // dBm
    double noise_density = -174.0;     // dBm/Hz
    double gamma_s_th = 0.0;           // dB
    double gamma_d_th = 0.0;           // dB
    double ber_s = 1e-3;
    double ber_d = 1e-3;
    std::size_t drops = 500;
    double min_dt_rate = 512e3;        // bit/s
    PropagationParams propagation{};
    PromotionRule promotion = PromotionRule::StrongestDirect;
    std::uint64_t seed = 1;

    std::size_t n_promoted() const { return n_rb - n_ut; }

    /// Noise power integrated over one RB, watts.
    double noise_per_rb_watts() const
    {
        return dbm_to_watts(noise_density + 10.0 * std::log10(bandwidth_per_rb));
    }

    void validate() const
    {
        auto fail = [](const std::string& what) { throw ConfigError("invalid configuration: " + what); };
        auto finite = [](double v) { return std::isfinite(v); };
        if (n_rb == 0)
            fail("n_rb must be at least 1");
        if (n_ut > n_rb)
            fail("n_ut must not exceed n_rb");
        if (n_dt < n_promoted())
            fail("n_dt must be at least n_rb - n_ut so every spare RB gets an owner");
        if (!(cell_radius > 0.0) || !finite(cell_radius))
            fail("cell_radius must be positive");
        if (!(min_close_in > 0.0) || !(min_close_in < cell_radius))
            fail("min_close_in must be positive and below cell_radius");
        if (!(d2d_max_separation > 0.0) || !finite(d2d_max_separation))
            fail("d2d_max_separation must be positive");
        if (!(bandwidth_per_rb > 0.0) || !finite(bandwidth_per_rb))
            fail("bandwidth_per_rb must be positive");
        for (double v : {p_ut_max, p_dt_max, noise_density, gamma_s_th, gamma_d_th})
            if (!finite(v))
                fail("power, noise and SINR threshold values must be finite");
        for (double ber : {ber_s, ber_d})
            if (!(ber > 0.0 && ber < 0.2))
                fail("ber_s and ber_d must lie in (0, 0.2)");
        if (drops == 0)
            fail("drops must be at least 1");
        if (!(min_dt_rate >= 0.0) || !finite(min_dt_rate))
            fail("min_dt_rate must be non-negative");
        for (const PathLossParams* pl : {&propagation.los, &propagation.nlos}) {
            if (!(pl->exponent > 0.0) || !finite(pl->exponent) || !finite(pl->mu_db))
                fail("path-loss exponents must be positive");
            if (!(pl->sigma_db >= 0.0) || !finite(pl->sigma_db))
                fail("shadowing sigma must be non-negative");
        }
        for (double p : {propagation.los_probability.p1, propagation.los_probability.p2})
            if (!(p >= 0.0 && p <= 1.0))
                fail("p1 and p2 must lie in [0, 1]");
        if (!(propagation.fading.rician_k >= 0.0))
            fail("rician_k must be non-negative");
    }
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view key, std::string_view text)
{
    std::string buf(text);
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (buf.empty() || end != buf.c_str() + buf.size())
        throw ConfigError("key '" + std::string(key) + "': not a number: '" + buf + "'");
    return v;
}

inline std::uint64_t parse_u64(std::string_view key, std::string_view text)
{
    std::uint64_t v = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc{} || ptr != last)
        throw ConfigError("key '" + std::string(key) + "': not a non-negative integer: '" +
                          std::string(text) + "'");
    return v;
}

using Setter = std::function<void(ScenarioConfig&, std::string_view key, std::string_view value)>;

inline const std::map<std::string, Setter, std::less<>>& config_setters()
{
    auto real = [](double ScenarioConfig::*field) -> Setter {
        return [field](ScenarioConfig& c, std::string_view k, std::string_view v) {
            c.*field = parse_double(k, v);
        };
    };
    auto count = [](std::size_t ScenarioConfig::*field) -> Setter {
        return [field](ScenarioConfig& c, std::string_view k, std::string_view v) {
            c.*field = static_cast<std::size_t>(parse_u64(k, v));
        };
    };
    auto prop = [](double& (*select)(ScenarioConfig&)) -> Setter {
        return [select](ScenarioConfig& c, std::string_view k, std::string_view v) {
            select(c) = parse_double(k, v);
        };
    };
    static const std::map<std::string, Setter, std::less<>> setters = {
        {"cell_radius", real(&ScenarioConfig::cell_radius)},
        {"min_close_in", real(&ScenarioConfig::min_close_in)},
        {"n_rb", count(&ScenarioConfig::n_rb)},
        {"n_ut", count(&ScenarioConfig::n_ut)},
        {"n_dt", count(&ScenarioConfig::n_dt)},
        {"d2d_max_separation", real(&ScenarioConfig::d2d_max_separation)},
        {"bandwidth_per_rb", real(&ScenarioConfig::bandwidth_per_rb)},
        {"p_ut_max", real(&ScenarioConfig::p_ut_max)},
        {"p_dt_max", real(&ScenarioConfig::p_dt_max)},
        {"noise_density", real(&ScenarioConfig::noise_density)},
        {"gamma_s_th", real(&ScenarioConfig::gamma_s_th)},
        {"gamma_d_th", real(&ScenarioConfig::gamma_d_th)},
        {"ber_s", real(&ScenarioConfig::ber_s)},
        {"ber_d", real(&ScenarioConfig::ber_d)},
        {"drops", count(&ScenarioConfig::drops)},
        {"min_dt_rate", real(&ScenarioConfig::min_dt_rate)},
        {"los_mu", prop([](ScenarioConfig& c) -> double& { return c.propagation.los.mu_db; })},
        {"los_nu", prop([](ScenarioConfig& c) -> double& { return c.propagation.los.exponent; })},
        {"los_sigma", prop([](ScenarioConfig& c) -> double& { return c.propagation.los.sigma_db; })},
        {"nlos_mu", prop([](ScenarioConfig& c) -> double& { return c.propagation.nlos.mu_db; })},
        {"nlos_nu", prop([](ScenarioConfig& c) -> double& { return c.propagation.nlos.exponent; })},
        {"nlos_sigma", prop([](ScenarioConfig& c) -> double& { return c.propagation.nlos.sigma_db; })},
        {"p1", prop([](ScenarioConfig& c) -> double& { return c.propagation.los_probability.p1; })},
        {"p2", prop([](ScenarioConfig& c) -> double& { return c.propagation.los_probability.p2; })},
        {"rician_k", prop([](ScenarioConfig& c) -> double& { return c.propagation.fading.rician_k; })},
        {"promotion",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) {
             if (v == "strongest")
                 c.promotion = PromotionRule::StrongestDirect;
             else if (v == "random")
                 c.promotion = PromotionRule::Random;
             else
                 throw ConfigError("key '" + std::string(k) +
                                   "': expected 'strongest' or 'random', got '" + std::string(v) + "'");
         }},
        {"seed", [](ScenarioConfig& c, std::string_view k, std::string_view v) { c.seed = parse_u64(k, v); }},
    };
    return setters;
}

} // namespace detail

/// Applies one `key = value` assignment on top of `cfg`. Unknown keys throw.
inline void apply_config_value(ScenarioConfig& cfg, std::string_view key, std::string_view value)
{
    const auto& setters = detail::config_setters();
    auto it = setters.find(key);
    if (it == setters.end())
        throw ConfigError("unknown configuration key '" + std::string(key) + "'");
    it->second(cfg, key, value);
}

/// Parses the flat `key = value` format ('#' starts a comment). Keys not
/// mentioned keep their defaults. The result is validated.
inline ScenarioConfig parse_config(std::string_view text)
{
    ScenarioConfig cfg;
    std::map<std::string, std::size_t, std::less<>> seen;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        if (auto prev = seen.find(key); prev != seen.end())
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) +
                              "' (first set on line " + std::to_string(prev->second) + ")");
        seen.emplace(std::string(key), line_no);
        try {
            apply_config_value(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

inline ScenarioConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open configuration file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace d2dmm
