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

// Hand-built and randomised instances shared by the unit and acceptance suites.

#pragma once

#include "d2dmm/linkbudget.hpp"
#include "d2dmm/rng.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace d2dmm::testing {

/// N owners (the last `n_promoted` of them promoted DTs) and M DTs with every
/// gain set to `g`, unit powers, unit noise, 0 dB targets and cst = 1.
inline Instance uniform_instance(std::size_t n, std::size_t m, double g = 1.0, std::size_t n_promoted = 0)
{
    Instance in;
    in.alpha.assign(n, 1);
    in.beta.assign(n, 0);
    for (std::size_t s = n - n_promoted; s < n; ++s) {
        in.alpha[s] = 0;
        in.beta[s] = 1;
    }
    in.gains.h_owner_to_bs.assign(n, g);
    in.gains.h_owner_self.assign(n, g);
    in.gains.h_dt_to_bs.assign(m, g);
    in.gains.h_dt_direct.assign(m, g);
    in.gains.h_dt_to_owner_rx = Grid<double>(m, n, g);
    in.gains.h_owner_to_dt_rx = Grid<double>(n, m, g);
    in.gains.h_dt_to_dt_rx = Grid<double>(m, m, g);
    in.power.p_owner.assign(n, 1.0);
    in.power.p_owner_max.assign(n, 1.0);
    in.power.p_dt.assign(m, 1.0);
    in.power.p_dt_max = 1.0;
    in.power.noise_owner = 1.0;
    in.power.noise_dt = 1.0;
    in.gamma_s_th = 1.0;
    in.gamma_d_th = 1.0;
    in.ber = {1.0, 1.0};
    in.bandwidth_rb = 180e3;
    return in;
}

/// Sets h_dt_direct and the diagonal of h_dt_to_dt_rx together.
inline void set_direct(Instance& in, std::size_t d, double g)
{
    in.gains.h_dt_direct[d] = g;
    in.gains.h_dt_to_dt_rx(d, d) = g;
}

/// Random instance with realistic magnitudes: 1 W / 10 mW powers, about
/// -121 dBm noise, gains spread over several decades so that constraints bind
/// in a good fraction of cases.
inline Instance random_instance(Engine& rng, std::size_t n, std::size_t m)
{
    std::uniform_real_distribution<double> exp_desired(-12.5, -9.0);
    std::uniform_real_distribution<double> exp_cross(-15.5, -10.5);
    std::uniform_real_distribution<double> exp_direct(-11.5, -7.5);
    std::uniform_int_distribution<std::size_t> promoted(0, n);
    auto draw = [&](auto& dist) { return std::pow(10.0, dist(rng)); };

    Instance in = uniform_instance(n, m, 1.0, promoted(rng));
    for (std::size_t s = 0; s < n; ++s) {
        in.gains.h_owner_to_bs[s] = draw(exp_desired);
        in.gains.h_owner_self[s] = in.alpha[s] ? in.gains.h_owner_to_bs[s] : draw(exp_direct);
        const double p = in.alpha[s] ? 1.0 : 0.01;
        in.power.p_owner[s] = p;
        in.power.p_owner_max[s] = p;
    }
    for (std::size_t d = 0; d < m; ++d) {
        in.gains.h_dt_to_bs[d] = draw(exp_cross);
        for (std::size_t s = 0; s < n; ++s) {
            in.gains.h_dt_to_owner_rx(d, s) = in.alpha[s] ? in.gains.h_dt_to_bs[d] : draw(exp_cross);
            in.gains.h_owner_to_dt_rx(s, d) = draw(exp_cross);
        }
        for (std::size_t e = 0; e < m; ++e)
            in.gains.h_dt_to_dt_rx(d, e) = draw(exp_cross);
        set_direct(in, d, draw(exp_direct));
    }
    in.power.p_dt.assign(m, 0.01);
    in.power.p_dt_max = 0.01;
    in.power.noise_owner = 7.16e-16;
    in.power.noise_dt = 7.16e-16;
    in.ber = {cst(1e-3), cst(1e-3)};
    return in;
}

/// Random assignment with unit column sums; each DT admitted with probability `p_admit`.
inline AssignmentMatrix random_assignment(Engine& rng, std::size_t n, std::size_t m, double p_admit = 0.6)
{
    AssignmentMatrix rho(n, m);
    std::bernoulli_distribution admit(p_admit);
    std::uniform_int_distribution<std::size_t> owner(0, n - 1);
    for (std::size_t d = 0; d < m; ++d)
        if (admit(rng))
            rho.set(owner(rng), d);
    return rho;
}

} // namespace d2dmm::testing
