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

#include "d2dmm/topology.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace d2dmm;

namespace {

ScenarioConfig small_config(std::size_t n_rb, std::size_t n_ut, std::size_t n_dt)
{
    ScenarioConfig cfg;
    cfg.n_rb = n_rb;
    cfg.n_ut = n_ut;
    cfg.n_dt = n_dt;
    cfg.seed = 2024;
    return cfg;
}

} // namespace

TEST(GenerateDrop, SmallestScenario)
{
    const auto sc = generate_drop(small_config(1, 1, 0), 0);
    ASSERT_EQ(sc.n_owners(), 1u);
    EXPECT_EQ(sc.n_dts(), 0u);
    EXPECT_EQ(sc.owners[0].kind, OwnerKind::UT);
    EXPECT_EQ(sc.owners[0].alpha, 1);
    EXPECT_EQ(sc.owners[0].beta, 0);
}

TEST(GenerateDrop, PromotionCounts)
{
    const auto sc = generate_drop(small_config(4, 2, 10), 5);
    ASSERT_EQ(sc.n_owners(), 4u);
    EXPECT_EQ(sc.n_promoted(), 2u);
    EXPECT_EQ(sc.n_dts(), 8u);
    for (std::size_t s = 0; s < 4; ++s) {
        const bool tail = s >= 2;
        EXPECT_EQ(sc.owners[s].kind, tail ? OwnerKind::PromotedDT : OwnerKind::UT);
        EXPECT_EQ(sc.owners[s].alpha, tail ? 0 : 1);
        EXPECT_EQ(sc.owners[s].beta, tail ? 1 : 0);
    }
    std::set<std::size_t> pool;
    for (const auto& p : sc.dt_pairs)
        pool.insert(p.pool_index);
    for (std::size_t s = 2; s < 4; ++s)
        EXPECT_FALSE(pool.count(sc.owners[s].source_index));
    EXPECT_EQ(pool.size(), 8u);
}

TEST(GenerateDrop, GeometryHoldsForEveryNode)
{
    const auto cfg = small_config(3, 1, 3);
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const auto sc = generate_drop(cfg, i);
        for (const auto& o : sc.owners) {
            const double r = distance(o.tx, sc.bs);
            ASSERT_GE(r, 35.0);
            ASSERT_LE(r, 500.0);
            ASSERT_TRUE(in_annulus(o.rx, sc.bs, 35.0, 500.0) || o.rx_node == kBaseStationNode);
        }
        for (const auto& p : sc.dt_pairs) {
            ASSERT_TRUE(in_annulus(p.tx, sc.bs, 35.0, 500.0));
            ASSERT_TRUE(in_annulus(p.rx, sc.bs, 35.0, 500.0));
            ASSERT_LE(distance(p.tx, p.rx), 20.0);
        }
    }
}

TEST(GenerateDrop, PureFunctionOfSeedAndIndex)
{
    const auto cfg = small_config(4, 2, 6);
    const auto a = generate_drop(cfg, 17);
    const auto b = generate_drop(cfg, 17);
    const auto c = generate_drop(cfg, 18);
    EXPECT_EQ(build_gain_matrix(a, cfg), build_gain_matrix(b, cfg));
    EXPECT_NE(a.owners[0].tx.x, c.owners[0].tx.x);
}

TEST(GenerateDrop, InvalidConfigRejectedBeforeSampling)
{
    EXPECT_THROW(generate_drop(small_config(2, 3, 5), 0), ConfigError);
    EXPECT_THROW(generate_drop(small_config(6, 2, 3), 0), ConfigError);
}

TEST(PromoteDts, NoPromotion)
{
    auto cfg = small_config(2, 2, 3);
    std::vector<Owner> uts(2);
    std::vector<DtPair> pairs(3);
    for (std::size_t i = 0; i < 3; ++i)
        pairs[i].pool_index = i;
    Engine rng(1);
    auto [owners, rest] = promote_dts(cfg, uts, pairs, {1.0, 2.0, 3.0}, rng);
    EXPECT_EQ(owners.size(), 2u);
    EXPECT_EQ(rest.size(), 3u);
}

TEST(PromoteDts, EveryPairPromoted)
{
    auto cfg = small_config(3, 0, 3);
    std::vector<DtPair> pairs(3);
    for (std::size_t i = 0; i < 3; ++i)
        pairs[i].pool_index = i;
    Engine rng(1);
    auto [owners, rest] = promote_dts(cfg, {}, pairs, {1.0, 2.0, 3.0}, rng);
    EXPECT_EQ(owners.size(), 3u);
    EXPECT_TRUE(rest.empty());
}

TEST(PromoteDts, StrongestDirectGainWins)
{
    auto cfg = small_config(3, 1, 5);  // V = 2
    std::vector<DtPair> pairs(5);
    for (std::size_t i = 0; i < 5; ++i)
        pairs[i].pool_index = i;
    const std::vector<double> direct{3e-9, 8e-8, 1e-10, 5e-8, 5e-8};
    Engine rng(1);
    auto [owners, rest] = promote_dts(cfg, std::vector<Owner>(1), pairs, direct, rng);
    ASSERT_EQ(owners.size(), 3u);
    // Sorted gains: 8e-8 (1), then a tie at 5e-8 between 3 and 4 -> lower index.
    EXPECT_EQ(owners[1].source_index, 1u);
    EXPECT_EQ(owners[2].source_index, 3u);
    std::vector<std::size_t> left;
    for (const auto& p : rest)
        left.push_back(p.pool_index);
    EXPECT_EQ(left, (std::vector<std::size_t>{0, 2, 4}));
}

TEST(PromoteDts, RandomRulePromotesDistinctPairs)
{
    auto cfg = small_config(4, 1, 6);
    cfg.promotion = PromotionRule::Random;
    std::vector<DtPair> pairs(6);
    for (std::size_t i = 0; i < 6; ++i)
        pairs[i].pool_index = i;
    Engine rng(77);
    auto [owners, rest] = promote_dts(cfg, std::vector<Owner>(1), pairs, std::vector<double>(6, 1.0), rng);
    std::set<std::size_t> chosen;
    for (std::size_t s = 1; s < owners.size(); ++s)
        chosen.insert(owners[s].source_index);
    EXPECT_EQ(chosen.size(), 3u);
    EXPECT_EQ(rest.size(), 3u);
}

TEST(PromoteDts, NotEnoughPairs)
{
    auto cfg = small_config(4, 1, 6);
    std::vector<DtPair> pairs(2);
    Engine rng(1);
    EXPECT_THROW(promote_dts(cfg, std::vector<Owner>(1), pairs, {1.0, 1.0}, rng), ConfigError);
}

TEST(GainMatrix, OneUtOnePair)
{
    const auto cfg = small_config(1, 1, 1);
    const auto sc = generate_drop(cfg, 0);
    const auto g = build_gain_matrix(sc, cfg);
    EXPECT_EQ(g.n_owners(), 1u);
    EXPECT_EQ(g.n_dts(), 1u);
    // A UT owner's receiver is the BS, so the self and dt->owner-rx entries
    // alias H_{s,B} and H_{dTX,B}: four distinct gains in total.
    EXPECT_EQ(g.h_owner_self[0], g.h_owner_to_bs[0]);
    EXPECT_EQ(g.h_dt_to_owner_rx(0, 0), g.h_dt_to_bs[0]);
    EXPECT_EQ(g.h_dt_to_dt_rx(0, 0), g.h_dt_direct[0]);
    std::set<double> distinct{g.h_owner_to_bs[0], g.h_owner_self[0], g.h_dt_to_bs[0], g.h_dt_to_owner_rx(0, 0),
                              g.h_owner_to_dt_rx(0, 0), g.h_dt_to_dt_rx(0, 0), g.h_dt_direct[0]};
    EXPECT_EQ(distinct.size(), 4u);
}

TEST(GainMatrix, ShapesAndPositivity)
{
    const auto cfg = small_config(6, 3, 12);
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto sc = generate_drop(cfg, i);
        const auto g = build_gain_matrix(sc, cfg);
        ASSERT_EQ(g.n_owners(), 6u);
        ASSERT_EQ(g.n_dts(), 9u);
        ASSERT_EQ(g.h_dt_to_owner_rx.rows(), 9u);
        ASSERT_EQ(g.h_dt_to_owner_rx.cols(), 6u);
        ASSERT_EQ(g.h_owner_to_dt_rx.rows(), 6u);
        ASSERT_EQ(g.h_dt_to_dt_rx.rows(), 9u);
        for (double v : g.h_dt_to_dt_rx.data())
            ASSERT_GT(v, 0.0);
        for (double v : g.h_owner_to_dt_rx.data())
            ASSERT_GT(v, 0.0);
        for (std::size_t d = 0; d < 9; ++d)
            ASSERT_EQ(g.h_dt_to_dt_rx(d, d), g.h_dt_direct[d]);
    }
}

TEST(GainMatrix, PromotedOwnerKeepsItsDirectGain)
{
    const auto cfg = small_config(4, 1, 10);
    for (std::uint64_t i = 0; i < 50; ++i) {
        const auto sc = generate_drop(cfg, i);
        const auto g = build_gain_matrix(sc, cfg);
        double weakest_promoted = 1.0;
        for (std::size_t s = 1; s < 4; ++s)
            weakest_promoted = std::min(weakest_promoted, g.h_owner_self[s]);
        for (double h : g.h_dt_direct)
            ASSERT_LE(h, weakest_promoted);
    }
}

TEST(GainMatrix, LinkClasses)
{
    EXPECT_EQ(classify_link(pair_tx_node(0), pair_rx_node(0)), LinkClass::D2D);
    EXPECT_EQ(classify_link(pair_tx_node(3), pair_rx_node(7)), LinkClass::D2D);
    EXPECT_EQ(classify_link(pair_tx_node(3), kBaseStationNode), LinkClass::NonD2D);
    EXPECT_EQ(classify_link(ut_node(2), pair_rx_node(1)), LinkClass::NonD2D);
    EXPECT_EQ(classify_link(ut_node(0), kBaseStationNode), LinkClass::NonD2D);
}

TEST(GainMatrix, ProximityGain)
{
    const auto cfg = small_config(2, 2, 3);
    double direct = 0.0, cross = 0.0;
    std::size_t n_direct = 0, n_cross = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const auto sc = generate_drop(cfg, i);
        const auto g = build_gain_matrix(sc, cfg);
        for (double h : g.h_dt_direct) {
            direct += h;
            ++n_direct;
        }
        for (double h : g.h_owner_to_dt_rx.data()) {
            cross += h;
            ++n_cross;
        }
    }
    EXPECT_GT(direct / n_direct, cross / n_cross);
}
