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
#include "d2dmm/linkbudget.hpp"
#include "d2dmm/oracle.hpp"
#include "d2dmm/scheduler.hpp"
#include "d2dmm/topology.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace d2dmm {

/// Everything derived from one drop before scheduling.
struct DropContext {
    Scenario scenario;
    GainMatrix gains;
    Instance instance;
};

inline DropContext prepare_drop(const ScenarioConfig& cfg, std::uint64_t drop_index)
{
    DropContext ctx;
    ctx.scenario = generate_drop(cfg, drop_index);
    ctx.gains = build_gain_matrix(ctx.scenario, cfg);
    ctx.instance = make_instance(ctx.scenario, ctx.gains, cfg);
    return ctx;
}

struct DropMetrics {
    std::uint64_t drop_index = 0;
    std::vector<double> owner_rates;
    std::vector<double> dt_rates;
    double owner_sum = 0.0;
    double dt_sum = 0.0;
    AssignmentMatrix rho;
    FeasibilityVerdict verdict;
    std::vector<Rejection> rejected;
    std::size_t iterations = 0;
    std::size_t n_pool = 0;
    std::size_t n_admitted = 0;
    std::size_t n_satisfied = 0;  // admitted DTs at or above min_dt_rate
    bool instance_feasible = true;
    std::size_t clamped_links = 0;

    double total() const { return owner_sum + dt_sum; }
    /// Satisfied / admitted; 1 when nothing was admitted.
    double satisfaction_ratio() const
    {
        return n_admitted == 0 ? 1.0 : static_cast<double>(n_satisfied) / static_cast<double>(n_admitted);
    }
};

inline DropMetrics measure_schedule(const Instance& in, const ScheduleResult& sched, double min_dt_rate)
{
    DropMetrics m;
    const RateReport rates = evaluate_rates(in, sched.rho);
    m.owner_rates = rates.owner_rates;
    m.dt_rates = rates.dt_rates;
    m.owner_sum = rates.owner_sum;
    m.dt_sum = rates.dt_sum;
    m.rho = sched.rho;
    m.verdict = check_feasible(in, sched.rho);
    m.rejected = sched.rejected;
    m.iterations = sched.iterations;
    m.n_pool = in.n_dts();
    for (std::size_t d = 0; d < in.n_dts(); ++d) {
        if (!sched.rho.admitted(d))
            continue;
        ++m.n_admitted;
        if (m.dt_rates[d] >= min_dt_rate)
            ++m.n_satisfied;
    }
    m.instance_feasible = instance_feasible(in);
    return m;
}

/// Topology, channels, scheduling and metrics for one drop.
inline DropMetrics run_drop(const ScenarioConfig& cfg, std::uint64_t drop_index)
{
    const DropContext ctx = prepare_drop(cfg, drop_index);
    DropMetrics m = measure_schedule(ctx.instance, run_scheduler(ctx.instance), cfg.min_dt_rate);
    m.drop_index = drop_index;
    m.clamped_links = ctx.gains.clamped_links;
    return m;
}

/// Runs f(i) for i in [0, count) on `workers` threads; results come back in
/// index order regardless of scheduling.
template <class F>
auto parallel_map(std::size_t count, unsigned workers, F&& f) -> std::vector<decltype(f(std::size_t{}))>
{
    using R = decltype(f(std::size_t{}));
    std::vector<R> out(count);
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            out[i] = f(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                out[i] = f(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    for (unsigned w = 0; w < n_threads; ++w)
        pool.emplace_back(work);
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
    return out;
}

inline std::vector<DropMetrics> run_drops(const ScenarioConfig& cfg, std::size_t drops, unsigned workers = 1)
{
    cfg.validate();
    return parallel_map(drops, workers, [&](std::size_t i) { return run_drop(cfg, i); });
}

// ---------------------------------------------------------------------------
// Aggregation

struct AggregateMetrics {
    double mean_system_rate = 0.0;
    double mean_d2d_rate = 0.0;
    double mean_owner_rate = 0.0;
    double satisfaction_ratio = 1.0;
    double admitted_fraction = 1.0;
    std::size_t infeasible_drop_count = 0;
    double confidence_halfwidth = 0.0;  // 95 %, normal approximation on the system rate
    std::size_t used_drops = 0;
};

/// Means over instance-feasible drops, summed in the order given. Satisfaction
/// ratio and admitted fraction pool counts across drops; 0/0 reports as 1.
inline AggregateMetrics aggregate(const std::vector<DropMetrics>& drops)
{
    AggregateMetrics a;
    double sum_sys = 0.0, sum_d2d = 0.0, sum_owner = 0.0;
    std::size_t admitted = 0, satisfied = 0, pool = 0;
    for (const DropMetrics& d : drops) {
        if (!d.instance_feasible) {
            ++a.infeasible_drop_count;
            continue;
        }
        ++a.used_drops;
        sum_sys += d.total();
        sum_d2d += d.dt_sum;
        sum_owner += d.owner_sum;
        admitted += d.n_admitted;
        satisfied += d.n_satisfied;
        pool += d.n_pool;
    }
    if (a.used_drops > 0) {
        const double n = static_cast<double>(a.used_drops);
        a.mean_system_rate = sum_sys / n;
        a.mean_d2d_rate = sum_d2d / n;
        a.mean_owner_rate = sum_owner / n;
    }
    if (admitted > 0)
        a.satisfaction_ratio = static_cast<double>(satisfied) / static_cast<double>(admitted);
    if (pool > 0)
        a.admitted_fraction = static_cast<double>(admitted) / static_cast<double>(pool);
    if (a.used_drops > 1) {
        double ss = 0.0;
        for (const DropMetrics& d : drops)
            if (d.instance_feasible)
                ss += (d.total() - a.mean_system_rate) * (d.total() - a.mean_system_rate);
        const double n = static_cast<double>(a.used_drops);
        a.confidence_halfwidth = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return a;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepAxis { NDt, NUt, Ber };

inline const char* to_string(SweepAxis a)
{
    switch (a) {
    case SweepAxis::NDt: return "n_dt";
    case SweepAxis::NUt: return "n_ut";
    case SweepAxis::Ber: return "ber";
    }
    return "unknown";
}

struct SweepSpec {
    SweepAxis axis = SweepAxis::NDt;
    std::vector<double> values;
    std::size_t drops_per_point = 500;
};

/// Copy of `cfg` with the sweep axis set to `value` (ber sets both targets).
inline ScenarioConfig apply_sweep_value(ScenarioConfig cfg, SweepAxis axis, double value)
{
    auto as_count = [&](const char* name) {
        if (!(value >= 0.0) || value != std::floor(value) || value > 1e9)
            throw ConfigError(std::string("sweep value for ") + name + " must be a non-negative integer");
        return static_cast<std::size_t>(value);
    };
    switch (axis) {
    case SweepAxis::NDt: cfg.n_dt = as_count("n_dt"); break;
    case SweepAxis::NUt: cfg.n_ut = as_count("n_ut"); break;
    case SweepAxis::Ber: cfg.ber_s = value; cfg.ber_d = value; break;
    }
    cfg.validate();
    return cfg;
}

inline void validate_sweep(const ScenarioConfig& cfg, const SweepSpec& spec)
{
    if (spec.values.empty())
        throw ConfigError("sweep needs at least one value");
    if (spec.drops_per_point == 0)
        throw ConfigError("sweep needs at least one drop per point");
    for (std::size_t i = 1; i < spec.values.size(); ++i)
        if (!(spec.values[i] > spec.values[i - 1]))
            throw ConfigError("sweep values must be strictly increasing");
    for (double v : spec.values)
        apply_sweep_value(cfg, spec.axis, v);
}

/// Parses "axis=v1,v2,...".
inline SweepSpec parse_sweep(std::string_view text, std::size_t drops_per_point)
{
    const auto eq = text.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError("sweep must look like axis=v1,v2,...");
    const auto axis = detail::trim(text.substr(0, eq));
    SweepSpec spec;
    spec.drops_per_point = drops_per_point;
    if (axis == "n_dt")
        spec.axis = SweepAxis::NDt;
    else if (axis == "n_ut")
        spec.axis = SweepAxis::NUt;
    else if (axis == "ber")
        spec.axis = SweepAxis::Ber;
    else
        throw ConfigError("unknown sweep axis '" + std::string(axis) + "' (expected n_dt, n_ut or ber)");
    std::string_view rest = text.substr(eq + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto item = detail::trim(rest.substr(0, comma));
        spec.values.push_back(detail::parse_double("sweep", item));
        if (comma == std::string_view::npos)
            break;
        rest = rest.substr(comma + 1);
    }
    return spec;
}

struct SweepRow {
    SweepAxis axis = SweepAxis::NDt;
    double value = 0.0;
    std::size_t drops = 0;
    AggregateMetrics metrics;
    std::uint64_t seed = 0;
};

/// One row per sweep value. Every point reuses the same drop indices, so
/// points differ only in the swept parameter's effect on each drop.
inline std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, const SweepSpec& spec, unsigned workers = 1)
{
    validate_sweep(cfg, spec);
    std::vector<SweepRow> rows;
    for (double v : spec.values) {
        const ScenarioConfig point = apply_sweep_value(cfg, spec.axis, v);
        SweepRow row;
        row.axis = spec.axis;
        row.value = v;
        row.drops = spec.drops_per_point;
        row.seed = cfg.seed;
        row.metrics = aggregate(run_drops(point, spec.drops_per_point, workers));
        rows.push_back(row);
    }
    return rows;
}

inline constexpr const char* kResultsHeader =
    "sweep_axis,sweep_value,drops,mean_system_rate_bps,ci95_bps,mean_d2d_rate_bps,mean_owner_rate_bps,"
    "satisfaction_ratio,admitted_fraction,infeasible_drops,seed";

inline std::string format_results(const std::vector<SweepRow>& rows)
{
    std::string out = kResultsHeader;
    out += '\n';
    char buf[512];
    for (const SweepRow& r : rows) {
        const AggregateMetrics& m = r.metrics;
        std::snprintf(buf, sizeof buf, "%s,%.10g,%zu,%.3f,%.3f,%.3f,%.3f,%.6f,%.6f,%zu,%llu\n", to_string(r.axis),
                      r.value, r.drops, m.mean_system_rate, m.confidence_halfwidth, m.mean_d2d_rate,
                      m.mean_owner_rate, m.satisfaction_ratio, m.admitted_fraction, m.infeasible_drop_count,
                      static_cast<unsigned long long>(r.seed));
        out += buf;
    }
    return out;
}

inline void write_results(const std::vector<SweepRow>& rows, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open results file '" + path + "' for writing");
    out << format_results(rows);
    out.flush();
    if (!out)
        throw IoError("failed writing results file '" + path + "'");
}

// ---------------------------------------------------------------------------
// Heuristic vs. exhaustive search

struct OracleComparison {
    std::size_t compared = 0;
    std::size_t skipped_too_large = 0;
    std::size_t skipped_infeasible = 0;
    std::size_t dominance_violations = 0;  // heuristic beat the oracle: should never happen
    std::size_t exact_matches = 0;         // heuristic reached the optimum
    double mean_ratio = 1.0;               // heuristic / oracle objective
};

inline OracleComparison compare_with_oracle(const ScenarioConfig& cfg, std::size_t drops, std::uint64_t max_space,
                                            unsigned workers = 1)
{
    struct One {
        int status = 0;  // 0 compared, 1 too large, 2 infeasible
        double heuristic = 0.0;
        double optimum = 0.0;
    };
    const auto results = parallel_map(drops, workers, [&](std::size_t i) {
        One o;
        const DropContext ctx = prepare_drop(cfg, i);
        if (!search_space_size(ctx.instance.n_owners(), ctx.instance.n_dts(), max_space)) {
            o.status = 1;
            return o;
        }
        if (!instance_feasible(ctx.instance)) {
            o.status = 2;
            return o;
        }
        o.heuristic = system_sum_rate(ctx.instance, run_scheduler(ctx.instance).rho);
        o.optimum = solve_exhaustive(ctx.instance, {max_space, false}).best_objective;
        return o;
    });
    OracleComparison c;
    double ratio_sum = 0.0;
    for (const One& o : results) {
        if (o.status == 1) {
            ++c.skipped_too_large;
            continue;
        }
        if (o.status == 2) {
            ++c.skipped_infeasible;
            continue;
        }
        ++c.compared;
        if (o.heuristic > o.optimum * (1.0 + 1e-12))
            ++c.dominance_violations;
        if (o.heuristic >= o.optimum * (1.0 - 1e-12))
            ++c.exact_matches;
        ratio_sum += o.heuristic / o.optimum;
    }
    if (c.compared > 0)
        c.mean_ratio = ratio_sum / static_cast<double>(c.compared);
    return c;
}

} // namespace d2dmm
