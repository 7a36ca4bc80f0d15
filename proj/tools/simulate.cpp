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

// simulate: Monte Carlo driver for the D2D underlay scheduler.
//
//   simulate --config cell.cfg [--drops N] [--seed S] [--sweep axis=v1,v2,...]
//            [--oracle-compare MAX_SPACE] [--out results.csv] [--workers W]
//
// Exit codes: 0 success, 2 configuration/usage error, 3 I/O error.

#include "d2dmm/d2dmm.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"D2D underlay resource sharing simulator (mmWave uplink, single cell)"};
    std::string config_path;
    std::optional<std::size_t> drops;
    std::optional<std::uint64_t> seed;
    std::string sweep;
    std::optional<std::uint64_t> oracle_space;
    std::string out_path;
    unsigned workers = 1;

    app.add_option("--config", config_path, "Scenario file (key = value)")->required();
    app.add_option("--drops", drops, "Drops per sweep point (overrides the config)");
    app.add_option("--seed", seed, "Master seed (overrides the config)");
    app.add_option("--sweep", sweep, "Sweep spec axis=v1,v2,... with axis in {n_dt, n_ut, ber}");
    app.add_option("--oracle-compare", oracle_space,
                   "Also compare against exhaustive search on drops with (N+1)^M <= this value");
    app.add_option("--out", out_path, "Results CSV path (default: stdout)");
    app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        d2dmm::ScenarioConfig cfg = d2dmm::load_config(config_path);
        if (drops)
            cfg.drops = *drops;
        if (seed)
            cfg.seed = *seed;
        cfg.validate();

        d2dmm::SweepSpec spec;
        if (sweep.empty()) {
            spec.axis = d2dmm::SweepAxis::NDt;
            spec.values = {static_cast<double>(cfg.n_dt)};
            spec.drops_per_point = cfg.drops;
        } else {
            spec = d2dmm::parse_sweep(sweep, cfg.drops);
        }
        d2dmm::validate_sweep(cfg, spec);

        const auto rows = d2dmm::run_sweep(cfg, spec, workers);
        if (out_path.empty())
            std::cout << d2dmm::format_results(rows);
        else
            d2dmm::write_results(rows, out_path);

        if (oracle_space) {
            for (double v : spec.values) {
                const auto point = d2dmm::apply_sweep_value(cfg, spec.axis, v);
                const auto c = d2dmm::compare_with_oracle(point, spec.drops_per_point, *oracle_space, workers);
                std::fprintf(stderr,
                             "oracle %s=%g: compared=%zu too_large=%zu infeasible=%zu optimal=%zu "
                             "mean_ratio=%.6f dominance_violations=%zu\n",
                             d2dmm::to_string(spec.axis), v, c.compared, c.skipped_too_large, c.skipped_infeasible,
                             c.exact_matches, c.mean_ratio, c.dominance_violations);
            }
        }
    } catch (const d2dmm::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const d2dmm::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
