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
#include "d2dmm/topology.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace d2dmm {

/// rho(s, d) = 1 when DT d reuses owner s's RB. A valid assignment has at
/// most one 1 per column; the type itself can hold anything so that
/// violations can be represented and reported.
class AssignmentMatrix {
public:
    AssignmentMatrix() = default;
    AssignmentMatrix(std::size_t n_owners, std::size_t n_dts) : bits_(n_owners, n_dts, 0) {}

    std::size_t n_owners() const { return bits_.rows(); }
    std::size_t n_dts() const { return bits_.cols(); }

    bool operator()(std::size_t s, std::size_t d) const { return bits_(s, d) != 0; }
    void set(std::size_t s, std::size_t d, bool on = true) { bits_(s, d) = on ? 1 : 0; }

    std::size_t column_sum(std::size_t d) const
    {
        std::size_t sum = 0;
        for (std::size_t s = 0; s < n_owners(); ++s)
            sum += bits_(s, d);
        return sum;
    }

    bool admitted(std::size_t d) const { return column_sum(d) > 0; }

    /// First owner whose RB d reuses, if any.
    std::optional<std::size_t> owner_of(std::size_t d) const
    {
        for (std::size_t s = 0; s < n_owners(); ++s)
            if (bits_(s, d))
                return s;
        return std::nullopt;
    }

    std::vector<std::size_t> sharers(std::size_t s) const
    {
        std::vector<std::size_t> out;
        for (std::size_t d = 0; d < n_dts(); ++d)
            if (bits_(s, d))
                out.push_back(d);
        return out;
    }

    std::size_t admitted_count() const
    {
        std::size_t c = 0;
        for (std::size_t d = 0; d < n_dts(); ++d)
            c += admitted(d) ? 1 : 0;
        return c;
    }

    bool operator==(const AssignmentMatrix&) const = default;

private:
    Grid<std::uint8_t> bits_;
};

/// Transmit powers (fixed at their caps by make_instance) and per-RB noise, watts.
struct PowerAndNoise {
    std::vector<double> p_owner;
    std::vector<double> p_owner_max;
    std::vector<double> p_dt;
    double p_dt_max = 0.0;
    double noise_owner = 0.0;
    double noise_dt = 0.0;
};

struct BerFactors {
    double cst_s = 0.0;
    double cst_d = 0.0;
};

/// SNR-gap factor of the BER-aware rate: -1.5 / ln(5 * ber), defined for
/// 0 < ber < 0.2.
inline double cst(double ber)
{
    if (!(ber > 0.0 && ber < 0.2))
        throw std::domain_error("cst: BER must lie in (0, 0.2)");
    return -1.5 / std::log(5.0 * ber);
}

/// Everything needed to evaluate SINRs, rates and constraints for any rho.
struct Instance {
    std::vector<int> alpha;
    std::vector<int> beta;
    GainMatrix gains;
    PowerAndNoise power;
    double gamma_s_th = 1.0;  // linear
    double gamma_d_th = 1.0;  // linear
    BerFactors ber;
    double bandwidth_rb = 180e3;

    std::size_t n_owners() const { return alpha.size(); }
    std::size_t n_dts() const { return power.p_dt.size(); }

    /// alpha_s H_{s,B} + beta_s H_{s,s}
    double desired_gain(std::size_t s) const
    {
        return alpha[s] * gains.h_owner_to_bs[s] + beta[s] * gains.h_owner_self[s];
    }
    /// alpha_s H_{dTX,B} + beta_s H_{dTX,s}
    double coupling(std::size_t d, std::size_t s) const
    {
        return alpha[s] * gains.h_dt_to_bs[d] + beta[s] * gains.h_dt_to_owner_rx(d, s);
    }
    /// P_d times coupling: DT d's contribution to InterfB_s.
    double bs_contribution(std::size_t d, std::size_t s) const { return power.p_dt[d] * coupling(d, s); }
};

inline Instance make_instance(const Scenario& sc, const GainMatrix& gains, const ScenarioConfig& cfg)
{
    Instance inst;
    const std::size_t n = sc.n_owners();
    inst.alpha.resize(n);
    inst.beta.resize(n);
    inst.power.p_owner.resize(n);
    inst.power.p_owner_max.resize(n);
    const double p_ut = dbm_to_watts(cfg.p_ut_max);
    const double p_dt = dbm_to_watts(cfg.p_dt_max);
    for (std::size_t s = 0; s < n; ++s) {
        inst.alpha[s] = sc.owners[s].alpha;
        inst.beta[s] = sc.owners[s].beta;
        const double cap = sc.owners[s].kind == OwnerKind::UT ? p_ut : p_dt;
        inst.power.p_owner[s] = cap;
        inst.power.p_owner_max[s] = cap;
    }
    inst.power.p_dt.assign(sc.n_dts(), p_dt);
    inst.power.p_dt_max = p_dt;
    inst.power.noise_owner = cfg.noise_per_rb_watts();
    inst.power.noise_dt = cfg.noise_per_rb_watts();
    inst.gains = gains;
    inst.gamma_s_th = db_to_linear(cfg.gamma_s_th);
    inst.gamma_d_th = db_to_linear(cfg.gamma_d_th);
    inst.ber = {cst(cfg.ber_s), cst(cfg.ber_d)};
    inst.bandwidth_rb = cfg.bandwidth_per_rb;
    return inst;
}

// ---------------------------------------------------------------------------
// Interference and SINR

/// InterfB_s: aggregate interference at owner s's receiver from its sharers.
inline double interf_at_bs(const Instance& in, const AssignmentMatrix& rho, std::size_t s)
{
    double sum = 0.0;
    for (std::size_t d = 0; d < in.n_dts(); ++d)
        if (rho(s, d))
            sum += in.bs_contribution(d, s);
    return sum;
}

/// InterfB_s^th = P_s (alpha H_{s,B} + beta H_{s,s}) / gamma_s^th - N_s.
/// Negative means the owner misses its target even without sharers.
inline double interf_owner_threshold(const Instance& in, std::size_t s)
{
    return in.power.p_owner[s] * in.desired_gain(s) / in.gamma_s_th - in.power.noise_owner;
}

inline double owner_sinr(const Instance& in, const AssignmentMatrix& rho, std::size_t s)
{
    return in.power.p_owner[s] * in.desired_gain(s) / (interf_at_bs(in, rho, s) + in.power.noise_owner);
}

/// Interf_d: owner signal plus co-channel DTs on the same owner's RB.
inline double interf_at_dt(const Instance& in, const AssignmentMatrix& rho, std::size_t d)
{
    const auto& g = in.gains;
    double sum = 0.0;
    for (std::size_t s = 0; s < in.n_owners(); ++s) {
        if (!rho(s, d))
            continue;
        sum += in.power.p_owner[s] * g.h_owner_to_dt_rx(s, d);
        for (std::size_t other = 0; other < in.n_dts(); ++other)
            if (other != d && rho(s, other))
                sum += in.power.p_dt[other] * g.h_dt_to_dt_rx(other, d);
    }
    return sum;
}

/// Interf_d^th = P_d H_{dTX,dRX} / gamma_d^th - N_d. Negative means the pair
/// cannot reach its target even interference-free.
inline double interf_dt_threshold(const Instance& in, std::size_t d)
{
    return in.power.p_dt[d] * in.gains.h_dt_direct[d] / in.gamma_d_th - in.power.noise_dt;
}

struct DtSinr {
    double value = 0.0;
    bool admitted = false;
};

/// Unadmitted DTs do not transmit; they report SINR 0 with admitted = false.
inline DtSinr dt_sinr(const Instance& in, const AssignmentMatrix& rho, std::size_t d)
{
    if (!rho.admitted(d))
        return {0.0, false};
    const double signal = in.power.p_dt[d] * in.gains.h_dt_direct[d];
    return {signal / (interf_at_dt(in, rho, d) + in.power.noise_dt), true};
}

// ---------------------------------------------------------------------------
// Rates

inline double shannon_rate(double bandwidth, double cst_factor, double sinr)
{
    return bandwidth * std::log2(1.0 + cst_factor * sinr);
}

inline double owner_rate(const Instance& in, const AssignmentMatrix& rho, std::size_t s)
{
    return shannon_rate(in.bandwidth_rb, in.ber.cst_s, owner_sinr(in, rho, s));
}

inline double dt_rate(const Instance& in, const AssignmentMatrix& rho, std::size_t d)
{
    const std::size_t reuse = rho.column_sum(d);
    if (reuse == 0)
        return 0.0;
    return static_cast<double>(reuse) * shannon_rate(in.bandwidth_rb, in.ber.cst_d, dt_sinr(in, rho, d).value);
}

struct RateReport {
    std::vector<double> owner_rates;
    std::vector<double> dt_rates;
    double owner_sum = 0.0;
    double dt_sum = 0.0;
    double total() const { return owner_sum + dt_sum; }
};

inline RateReport evaluate_rates(const Instance& in, const AssignmentMatrix& rho)
{
    RateReport r;
    r.owner_rates.resize(in.n_owners());
    r.dt_rates.resize(in.n_dts());
    for (std::size_t s = 0; s < in.n_owners(); ++s) {
        r.owner_rates[s] = owner_rate(in, rho, s);
        r.owner_sum += r.owner_rates[s];
    }
    for (std::size_t d = 0; d < in.n_dts(); ++d) {
        r.dt_rates[d] = dt_rate(in, rho, d);
        r.dt_sum += r.dt_rates[d];
    }
    return r;
}

/// Objective: sum of all owner and DT rates under rho.
inline double system_sum_rate(const Instance& in, const AssignmentMatrix& rho)
{
    return evaluate_rates(in, rho).total();
}

/// R_s + R_d when d is the only sharer of owner s.
inline double solo_pair_rate(const Instance& in, std::size_t s, std::size_t d)
{
    const auto& g = in.gains;
    const double gs = in.power.p_owner[s] * in.desired_gain(s) / (in.bs_contribution(d, s) + in.power.noise_owner);
    const double gd = in.power.p_dt[d] * g.h_dt_direct[d] /
                      (in.power.p_owner[s] * g.h_owner_to_dt_rx(s, d) + in.power.noise_dt);
    return shannon_rate(in.bandwidth_rb, in.ber.cst_s, gs) + shannon_rate(in.bandwidth_rb, in.ber.cst_d, gd);
}

// ---------------------------------------------------------------------------
// Constraints

/// Relative slack on SINR targets when judging feasibility, so that a value
/// sitting on its threshold is not rejected by one rounding step.
inline constexpr double kSinrRelTolerance = 1e-12;

inline bool meets_target(double sinr, double target) { return sinr >= target * (1.0 - kSinrRelTolerance); }

struct FeasibilityVerdict {
    std::vector<std::size_t> owner_sinr_violations;   // owners below gamma_s^th
    std::vector<std::size_t> dt_sinr_violations;      // admitted DTs below gamma_d^th
    std::vector<std::size_t> owner_power_violations;
    std::vector<std::size_t> dt_power_violations;
    std::vector<std::size_t> column_sum_violations;   // DTs reusing more than one RB

    bool feasible() const
    {
        return owner_sinr_violations.empty() && dt_sinr_violations.empty() && owner_power_violations.empty() &&
               dt_power_violations.empty() && column_sum_violations.empty();
    }
};

inline FeasibilityVerdict check_feasible(const Instance& in, const AssignmentMatrix& rho)
{
    FeasibilityVerdict v;
    for (std::size_t s = 0; s < in.n_owners(); ++s) {
        if (!meets_target(owner_sinr(in, rho, s), in.gamma_s_th))
            v.owner_sinr_violations.push_back(s);
        if (in.power.p_owner[s] > in.power.p_owner_max[s])
            v.owner_power_violations.push_back(s);
    }
    for (std::size_t d = 0; d < in.n_dts(); ++d) {
        if (rho.column_sum(d) > 1)
            v.column_sum_violations.push_back(d);
        if (in.power.p_dt[d] > in.power.p_dt_max)
            v.dt_power_violations.push_back(d);
        const DtSinr g = dt_sinr(in, rho, d);
        if (g.admitted && !meets_target(g.value, in.gamma_d_th))
            v.dt_sinr_violations.push_back(d);
    }
    return v;
}

/// Owners that miss gamma_s^th with no sharers at all. No assignment can fix them.
inline std::vector<std::size_t> intrinsically_infeasible_owners(const Instance& in)
{
    const AssignmentMatrix empty(in.n_owners(), in.n_dts());
    return check_feasible(in, empty).owner_sinr_violations;
}

inline bool instance_feasible(const Instance& in) { return intrinsically_infeasible_owners(in).empty(); }

/// Copy of `in` with both BER targets replaced.
inline Instance with_ber(Instance in, double ber_s, double ber_d)
{
    in.ber = {cst(ber_s), cst(ber_d)};
    return in;
}

} // namespace d2dmm
