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

#include "d2dmm/config.hpp"
#include "d2dmm/grid.hpp"
#include "d2dmm/propagation.hpp"
#include "d2dmm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace d2dmm {

/// Physical node identifiers, used to key per-link random streams. Pool
/// indices refer to the order in which DT pairs were dropped, before any
/// promotion, so a link's realisation does not depend on who got promoted.
using NodeId = std::uint64_t;
inline constexpr NodeId kBaseStationNode = 0;
inline NodeId ut_node(std::size_t ut) { return 1 + 2 * static_cast<NodeId>(ut); }
inline NodeId pair_tx_node(std::size_t pool_index) { return 2 + 4 * static_cast<NodeId>(pool_index); }
inline NodeId pair_rx_node(std::size_t pool_index) { return 4 + 4 * static_cast<NodeId>(pool_index); }
inline bool is_pair_tx(NodeId n) { return n % 4 == 2; }
inline bool is_pair_rx(NodeId n) { return n != 0 && n % 4 == 0; }

/// Pair-TX to pair-RX links are D2D; anything touching the BS or a UT is not.
inline LinkClass classify_link(NodeId tx, NodeId rx)
{
    return is_pair_tx(tx) && is_pair_rx(rx) ? LinkClass::D2D : LinkClass::NonD2D;
}

enum class OwnerKind { UT, PromotedDT };

/// Holder of one RB. UT owners transmit to the BS ((alpha, beta) = (1, 0));
/// promoted DT owners keep their own pair receiver ((alpha, beta) = (0, 1)).
struct Owner {
    OwnerKind kind = OwnerKind::UT;
    int alpha = 1;
    int beta = 0;
    Position tx;
    Position rx;
    NodeId tx_node = 0;
    NodeId rx_node = kBaseStationNode;
    std::size_t source_index = 0;  // UT index or DT pool index
};

struct DtPair {
    std::size_t pool_index = 0;
    Position tx;
    Position rx;
    NodeId tx_node() const { return pair_tx_node(pool_index); }
    NodeId rx_node() const { return pair_rx_node(pool_index); }
};

struct Scenario {
    Position bs{};
    std::vector<Owner> owners;    // UTs first, promoted pairs in the tail
    std::vector<DtPair> dt_pairs; // remaining pool that may reuse owners' RBs
    std::size_t n_ut = 0;
    std::uint64_t drop_index = 0;

    std::size_t n_owners() const { return owners.size(); }
    std::size_t n_dts() const { return dt_pairs.size(); }
    std::size_t n_promoted() const { return owners.size() - n_ut; }
};

/// Linear channel power gains for every endpoint pair the SINR expressions use.
struct GainMatrix {
    std::vector<double> h_owner_to_bs;  // [s]
    std::vector<double> h_owner_self;   // [s] owner TX -> its own receiver
    std::vector<double> h_dt_to_bs;     // [d]
    Grid<double> h_dt_to_owner_rx;      // (d, s) DT TX -> owner s's receiver
    Grid<double> h_owner_to_dt_rx;      // (s, d)
    Grid<double> h_dt_to_dt_rx;         // (d', d) DT d' TX -> DT d RX
    std::vector<double> h_dt_direct;    // [d]
    std::size_t clamped_links = 0;      // links shorter than the 1 m floor

    std::size_t n_owners() const { return h_owner_to_bs.size(); }
    std::size_t n_dts() const { return h_dt_to_bs.size(); }

    bool operator==(const GainMatrix&) const = default;
};

/// Per-link random streams of one drop.
class LinkStreams {
public:
    LinkStreams(const ScenarioConfig& cfg, std::uint64_t drop_index)
        : params_(&cfg.propagation), seed_(cfg.seed), drop_(drop_index)
    {
    }

    Engine stream(NodeId tx, NodeId rx) const { return make_stream(seed_, drop_, StreamTag::Link, tx, rx); }

    LinkSample sample(NodeId tx, Position tx_pos, NodeId rx, Position rx_pos) const
    {
        auto rng = stream(tx, rx);
        return channel_gain(tx_pos, rx_pos, classify_link(tx, rx), *params_, rng);
    }

private:
    const PropagationParams* params_;
    std::uint64_t seed_;
    std::uint64_t drop_;
};

/// Uniform point (by area) in the annulus [r_min, r_max] around `centre`.
template <class Rng>
Position sample_annulus(Position centre, double r_min, double r_max, Rng& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = std::sqrt(u(rng) * (r_max * r_max - r_min * r_min) + r_min * r_min);
    const double theta = 2.0 * std::numbers::pi * u(rng);
    return {centre.x + r * std::cos(theta), centre.y + r * std::sin(theta)};
}

template <class Rng>
Position sample_disc(Position centre, double radius, Rng& rng)
{
    return sample_annulus(centre, 0.0, radius, rng);
}

inline bool in_annulus(Position p, Position centre, double r_min, double r_max)
{
    const double d = distance(p, centre);
    return d >= r_min && d <= r_max;
}

/// Selects the V = n_rb - n_ut pairs that take over the spare RBs. Returns
/// the owners (UT owners are passed through unchanged, promoted ones appended
/// in ascending pool order) and the pairs left in the DT pool.
template <class Rng>
std::pair<std::vector<Owner>, std::vector<DtPair>> promote_dts(const ScenarioConfig& cfg,
                                                               std::vector<Owner> owners,
                                                               const std::vector<DtPair>& pairs,
                                                               const std::vector<double>& direct_gains,
                                                               Rng& rng)
{
    const std::size_t v = cfg.n_promoted();
    if (pairs.size() < v)
        throw ConfigError("not enough DT pairs to promote: need " + std::to_string(v) + ", have " +
                          std::to_string(pairs.size()));
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (cfg.promotion == PromotionRule::StrongestDirect) {
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return direct_gains[a] > direct_gains[b]; });
    } else {
        std::shuffle(order.begin(), order.end(), rng);
    }
    std::vector<bool> promoted(pairs.size(), false);
    for (std::size_t i = 0; i < v; ++i)
        promoted[order[i]] = true;

    std::vector<DtPair> remaining;
    remaining.reserve(pairs.size() - v);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!promoted[i]) {
            remaining.push_back(pairs[i]);
            continue;
        }
        Owner o;
        o.kind = OwnerKind::PromotedDT;
        o.alpha = 0;
        o.beta = 1;
        o.tx = pairs[i].tx;
        o.rx = pairs[i].rx;
        o.tx_node = pairs[i].tx_node();
        o.rx_node = pairs[i].rx_node();
        o.source_index = pairs[i].pool_index;
        owners.push_back(o);
    }
    return {std::move(owners), std::move(remaining)};
}

/// One random network realisation, a pure function of (cfg, drop_index).
inline Scenario generate_drop(const ScenarioConfig& cfg, std::uint64_t drop_index)
{
    cfg.validate();
    Scenario sc;
    sc.n_ut = cfg.n_ut;
    sc.drop_index = drop_index;

    auto rng = make_stream(cfg.seed, drop_index, StreamTag::Placement);
    std::vector<Owner> uts;
    uts.reserve(cfg.n_rb);
    for (std::size_t k = 0; k < cfg.n_ut; ++k) {
        Owner o;
        o.tx = sample_annulus(sc.bs, cfg.min_close_in, cfg.cell_radius, rng);
        o.rx = sc.bs;
        o.tx_node = ut_node(k);
        o.rx_node = kBaseStationNode;
        o.source_index = k;
        uts.push_back(o);
    }
    std::vector<DtPair> pool(cfg.n_dt);
    for (std::size_t p = 0; p < cfg.n_dt; ++p) {
        pool[p].pool_index = p;
        pool[p].tx = sample_annulus(sc.bs, cfg.min_close_in, cfg.cell_radius, rng);
        do {
            pool[p].rx = sample_disc(pool[p].tx, cfg.d2d_max_separation, rng);
        } while (!in_annulus(pool[p].rx, sc.bs, cfg.min_close_in, cfg.cell_radius));
    }

    std::vector<double> direct(pool.size());
    const LinkStreams links(cfg, drop_index);
    for (std::size_t p = 0; p < pool.size(); ++p)
        direct[p] = links.sample(pool[p].tx_node(), pool[p].tx, pool[p].rx_node(), pool[p].rx).gain;

    auto promo_rng = make_stream(cfg.seed, drop_index, StreamTag::Promotion);
    auto [owners, remaining] = promote_dts(cfg, std::move(uts), pool, direct, promo_rng);
    sc.owners = std::move(owners);
    sc.dt_pairs = std::move(remaining);
    return sc;
}

/// Evaluates the channel of every endpoint pair needed by the SINR formulas.
/// Links to a UT owner's receiver are links to the BS.
inline GainMatrix build_gain_matrix(const Scenario& sc, const ScenarioConfig& cfg)
{
    const LinkStreams links(cfg, sc.drop_index);
    const std::size_t n = sc.n_owners();
    const std::size_t m = sc.n_dts();
    GainMatrix g;
    g.h_owner_to_bs.resize(n);
    g.h_owner_self.resize(n);
    g.h_dt_to_bs.resize(m);
    g.h_dt_direct.resize(m);
    g.h_dt_to_owner_rx = Grid<double>(m, n);
    g.h_owner_to_dt_rx = Grid<double>(n, m);
    g.h_dt_to_dt_rx = Grid<double>(m, m);

    auto gain = [&](NodeId tx, Position tp, NodeId rx, Position rp) {
        const LinkSample s = links.sample(tx, tp, rx, rp);
        if (s.clamped)
            ++g.clamped_links;
        return s.gain;
    };

    for (std::size_t s = 0; s < n; ++s) {
        const Owner& o = sc.owners[s];
        g.h_owner_to_bs[s] = gain(o.tx_node, o.tx, kBaseStationNode, sc.bs);
        g.h_owner_self[s] = o.rx_node == kBaseStationNode ? g.h_owner_to_bs[s] : gain(o.tx_node, o.tx, o.rx_node, o.rx);
    }
    for (std::size_t d = 0; d < m; ++d) {
        const DtPair& p = sc.dt_pairs[d];
        g.h_dt_to_bs[d] = gain(p.tx_node(), p.tx, kBaseStationNode, sc.bs);
        for (std::size_t s = 0; s < n; ++s) {
            const Owner& o = sc.owners[s];
            g.h_dt_to_owner_rx(d, s) =
                o.rx_node == kBaseStationNode ? g.h_dt_to_bs[d] : gain(p.tx_node(), p.tx, o.rx_node, o.rx);
            g.h_owner_to_dt_rx(s, d) = gain(o.tx_node, o.tx, p.rx_node(), p.rx);
        }
        for (std::size_t dr = 0; dr < m; ++dr) {
            const DtPair& q = sc.dt_pairs[dr];
            g.h_dt_to_dt_rx(d, dr) = gain(p.tx_node(), p.tx, q.rx_node(), q.rx);
        }
    }
    for (std::size_t d = 0; d < m; ++d)
        g.h_dt_direct[d] = g.h_dt_to_dt_rx(d, d);
    return g;
}

} // namespace d2dmm
