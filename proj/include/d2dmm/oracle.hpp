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

#include "d2dmm/linkbudget.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace d2dmm {

class SearchSpaceError : public std::length_error {
public:
    using std::length_error::length_error;
};

struct OracleOptions {
    std::uint64_t limit = 10'000'000;
    bool record_feasible = false;  // keep the code of every feasible assignment
};

struct OracleResult {
    AssignmentMatrix best_rho;
    double best_objective = 0.0;
    std::uint64_t feasible_count = 0;
    std::uint64_t enumerated_count = 0;
    bool feasible = false;                     // false: no assignment satisfies every constraint
    std::vector<std::uint64_t> feasible_codes; // ascending, only with record_feasible
};

/// Size of the search space, (N + 1)^M, or nullopt if it exceeds `limit`.
inline std::optional<std::uint64_t> search_space_size(std::size_t n_owners, std::size_t n_dts, std::uint64_t limit)
{
    const std::uint64_t base = n_owners + 1;
    std::uint64_t size = 1;
    for (std::size_t d = 0; d < n_dts; ++d) {
        if (size > limit / base)
            return std::nullopt;
        size *= base;
    }
    if (size > limit)
        return std::nullopt;
    return size;
}

/// Mixed-radix code of a valid assignment: digit d (most significant first)
/// is 0 for "not admitted" or s + 1 for owner s. Ascending code order is the
/// lexicographic order of the per-DT choices. nullopt if a column sums to > 1.
inline std::optional<std::uint64_t> encode_assignment(const AssignmentMatrix& rho)
{
    const std::uint64_t base = rho.n_owners() + 1;
    std::uint64_t code = 0;
    for (std::size_t d = 0; d < rho.n_dts(); ++d) {
        if (rho.column_sum(d) > 1)
            return std::nullopt;
        const auto owner = rho.owner_of(d);
        code = code * base + (owner ? *owner + 1 : 0);
    }
    return code;
}

inline AssignmentMatrix decode_assignment(std::uint64_t code, std::size_t n_owners, std::size_t n_dts)
{
    AssignmentMatrix rho(n_owners, n_dts);
    const std::uint64_t base = n_owners + 1;
    for (std::size_t i = n_dts; i-- > 0;) {
        const std::uint64_t digit = code % base;
        code /= base;
        if (digit != 0)
            rho.set(static_cast<std::size_t>(digit - 1), i);
    }
    return rho;
}

/// Same verdict as check_feasible(...).feasible() for assignments with unit
/// column sums and capped powers, but stops at the first violated owner.
inline bool feasible_short_circuit(const Instance& in, const AssignmentMatrix& rho)
{
    for (std::size_t s = 0; s < in.n_owners(); ++s)
        if (!meets_target(owner_sinr(in, rho, s), in.gamma_s_th))
            return false;
    for (std::size_t d = 0; d < in.n_dts(); ++d) {
        const DtSinr g = dt_sinr(in, rho, d);
        if (g.admitted && !meets_target(g.value, in.gamma_d_th))
            return false;
    }
    return true;
}

/// Exhaustive search over every DT -> {none, owner 1..N} assignment for the
/// feasible one with the largest sum rate. Ties keep the smallest code.
inline OracleResult solve_exhaustive(const Instance& in, const OracleOptions& opts = {})
{
    const std::size_t n = in.n_owners();
    const std::size_t m = in.n_dts();
    const auto space = search_space_size(n, m, opts.limit);
    if (!space)
        throw SearchSpaceError("exhaustive search over (" + std::to_string(n) + " + 1)^" + std::to_string(m) +
                               " assignments exceeds the limit of " + std::to_string(opts.limit));

    OracleResult res;
    res.best_rho = AssignmentMatrix(n, m);
    for (std::uint64_t code = 0; code < *space; ++code) {
        ++res.enumerated_count;
        const AssignmentMatrix rho = decode_assignment(code, n, m);
        if (!feasible_short_circuit(in, rho))
            continue;
        ++res.feasible_count;
        if (opts.record_feasible)
            res.feasible_codes.push_back(code);
        const double objective = system_sum_rate(in, rho);
        if (!res.feasible || objective > res.best_objective) {
            res.feasible = true;
            res.best_objective = objective;
            res.best_rho = rho;
        }
    }
    if (!res.feasible)
        res.best_objective = system_sum_rate(in, res.best_rho);
    return res;
}

} // namespace d2dmm
