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

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

namespace d2dmm {

enum class RejectionReason {
    NoFeasibleOwner,  // never found an owner that could take it alone
    PrunedOwnSinr,    // dropped because co-channel interference broke its own SINR
    PrunedOwnerSinr,  // dropped to bring the owner's interference under threshold
};

inline const char* to_string(RejectionReason r)
{
    switch (r) {
    case RejectionReason::NoFeasibleOwner: return "no_feasible_owner";
    case RejectionReason::PrunedOwnSinr: return "pruned_own_sinr";
    case RejectionReason::PrunedOwnerSinr: return "pruned_owner_sinr";
    }
    return "unknown";
}

struct Rejection {
    std::size_t dt = 0;
    RejectionReason reason = RejectionReason::NoFeasibleOwner;
    bool operator==(const Rejection&) const = default;
};

/// Tentative owner -> DT associations (Omega), plus DTs that found no owner.
struct CandidateSets {
    std::vector<std::vector<std::size_t>> omega;  // sorted DT indices per owner
    std::vector<std::size_t> unassigned;
};

struct OwnerDiagnostics {
    double interf_bs = 0.0;
    double threshold = 0.0;
};

struct ScheduleResult {
    AssignmentMatrix rho;
    std::vector<Rejection> rejected;  // ascending DT index
    std::size_t iterations = 0;
    std::vector<OwnerDiagnostics> diagnostics;
};

/// True when DT d alone on owner s keeps InterfB_s strictly under the owner's
/// threshold and still meets gamma_d^th against the owner's own signal.
inline bool solo_admissible(const Instance& in, std::size_t s, std::size_t d)
{
    if (!(in.bs_contribution(d, s) < interf_owner_threshold(in, s)))
        return false;
    const double owner_interf = in.power.p_owner[s] * in.gains.h_owner_to_dt_rx(s, d);
    return owner_interf <= interf_dt_threshold(in, d);
}

/// Owner maximising R_s + R_d (d alone) among untreated owners where d is
/// solo-admissible. Ties go to the lowest owner index.
inline std::optional<std::size_t> best_owner_for(const Instance& in, std::size_t d, const std::vector<bool>& untreated)
{
    std::optional<std::size_t> best;
    double best_rate = 0.0;
    for (std::size_t s = 0; s < in.n_owners(); ++s) {
        if (!untreated[s] || !solo_admissible(in, s, d))
            continue;
        const double r = solo_pair_rate(in, s, d);
        if (!best || r > best_rate) {
            best = s;
            best_rate = r;
        }
    }
    return best;
}

inline void insert_sorted(std::vector<std::size_t>& v, std::size_t x) { v.insert(std::lower_bound(v.begin(), v.end(), x), x); }

inline CandidateSets build_candidates(const Instance& in, std::span<const std::size_t> dts,
                                      const std::vector<bool>& untreated)
{
    CandidateSets c;
    c.omega.resize(in.n_owners());
    for (std::size_t d : dts) {
        if (auto s = best_owner_for(in, d, untreated))
            insert_sorted(c.omega[*s], d);
        else
            c.unassigned.push_back(d);
    }
    return c;
}

struct PruneResult {
    std::vector<std::size_t> kept;
    std::vector<std::size_t> removed_own_sinr;
    std::vector<std::size_t> removed_owner_sinr;
};

/// Two-phase pruning of one owner's candidate set:
///  1. every DT whose Interf_d, evaluated with all of omega_s on the RB,
///     exceeds Interf_d^th is dropped (one simultaneous pass);
///  2. while InterfB_s exceeds InterfB_s^th, the DT with the largest
///     contribution at the owner's receiver is dropped.
inline PruneResult prune_owner(const Instance& in, std::size_t s, std::span<const std::size_t> omega_s)
{
    PruneResult out;
    AssignmentMatrix column(in.n_owners(), in.n_dts());
    for (std::size_t d : omega_s)
        column.set(s, d);

    std::vector<std::size_t> survivors;
    for (std::size_t d : omega_s) {
        if (interf_at_dt(in, column, d) > interf_dt_threshold(in, d))
            out.removed_own_sinr.push_back(d);
        else
            survivors.push_back(d);
    }

    const double threshold = interf_owner_threshold(in, s);
    double total = 0.0;
    for (std::size_t d : survivors)
        total += in.bs_contribution(d, s);
    while (!survivors.empty() && total > threshold) {
        auto worst = survivors.begin();
        for (auto it = survivors.begin(); it != survivors.end(); ++it)
            if (in.bs_contribution(*it, s) > in.bs_contribution(*worst, s))
                worst = it;
        out.removed_owner_sinr.push_back(*worst);
        survivors.erase(worst);
        total = 0.0;
        for (std::size_t d : survivors)
            total += in.bs_contribution(d, s);
    }
    std::sort(out.removed_owner_sinr.begin(), out.removed_owner_sinr.end());
    out.kept = std::move(survivors);
    return out;
}

/// Greedy interference-threshold scheduler. Owners are treated one at a time,
/// largest candidate set first; each treated owner's column is frozen and the
/// DTs it sheds are re-offered to the owners not yet treated.
inline ScheduleResult run_scheduler(const Instance& in)
{
    const std::size_t n = in.n_owners();
    const std::size_t m = in.n_dts();
    ScheduleResult res;
    res.rho = AssignmentMatrix(n, m);
    res.diagnostics.resize(n);

    std::vector<bool> untreated(n, true);
    std::vector<std::size_t> all(m);
    for (std::size_t d = 0; d < m; ++d)
        all[d] = d;
    CandidateSets cand = build_candidates(in, all, untreated);
    for (std::size_t d : cand.unassigned)
        res.rejected.push_back({d, RejectionReason::NoFeasibleOwner});

    for (std::size_t remaining = n; remaining > 0; --remaining) {
        std::size_t s = n;
        for (std::size_t i = 0; i < n; ++i)
            if (untreated[i] && (s == n || cand.omega[i].size() > cand.omega[s].size()))
                s = i;

        PruneResult pr = prune_owner(in, s, cand.omega[s]);
        for (std::size_t d : pr.kept)
            res.rho.set(s, d);
        untreated[s] = false;
        cand.omega[s].clear();
        ++res.iterations;

        std::vector<Rejection> shed;
        for (std::size_t d : pr.removed_own_sinr)
            shed.push_back({d, RejectionReason::PrunedOwnSinr});
        for (std::size_t d : pr.removed_owner_sinr)
            shed.push_back({d, RejectionReason::PrunedOwnerSinr});
        std::sort(shed.begin(), shed.end(), [](const Rejection& a, const Rejection& b) { return a.dt < b.dt; });
        for (const Rejection& r : shed) {
            if (auto next = best_owner_for(in, r.dt, untreated))
                insert_sorted(cand.omega[*next], r.dt);
            else
                res.rejected.push_back(r);
        }
    }

    std::sort(res.rejected.begin(), res.rejected.end(), [](const Rejection& a, const Rejection& b) { return a.dt < b.dt; });
    for (std::size_t s = 0; s < n; ++s)
        res.diagnostics[s] = {interf_at_bs(in, res.rho, s), interf_owner_threshold(in, s)};
    return res;
}

} // namespace d2dmm
