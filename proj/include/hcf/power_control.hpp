// SPDX-License-Identifier: Apache-2.0
//
// hcfsim: hierarchical cell-free massive MIMO system-level simulator
// Copyright (C) 2026 The hcfsim Authors
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

#include "hcf/downlink.hpp"
#include "hcf/types.hpp"
#include "hcf/uplink.hpp"

#include <functional>
#include <optional>
#include <string>

namespace hcf
{
    struct BisectionSettings
    {
        double epsilon = 1e-3;               // SINR target tolerance (linear)
        int max_iters = 200;                 // cap on bisection steps
        double feasibility_tolerance = 1e-4; // delta, in units of sigma for the downlink
        int inner_max_iters = 5000;          // downlink first-order solver cap

        void validate() const;
    };

    // One line of solver trace: a bisection step or a final verdict.
    struct SolverTraceEvent
    {
        std::string solver; // "maxmin_uplink" or "maxmin_downlink"
        int step = 0;
        double low = 0.0;
        double high = 0.0;
        double target = 0.0;
        bool feasible = false;
        int inner_iterations = 0;
    };
    using SolverTrace = std::function<void(const SolverTraceEvent &)>;

    struct PowerAllocation
    {
        RVector eta;  // uplink: per-user coefficient in [0, 1]
        RMatrix nu;   // downlink: K x nodes amplitudes
        double achieved_target = 0.0; // last feasible target (bracket low end)
        double bracket_high = 0.0;    // smallest target found infeasible
        int iterations = 0;
    };

    // Minimal-power eta with gamma_k(eta) >= target for all k, if any eta in
    // [0, 1]^K achieves it. Exact: each constraint is linear in eta, so the
    // minimal point solves (D - target F) eta = target N with
    // D = diag(S_k - target I(k,k)) and F the off-diagonal part of I.
    std::optional<RVector> ul_feasibility(double target, const UplinkCoefficients &coeffs);

    // Bisection on the common SINR target. The low end starts at the
    // full-power minimum SINR, which is always attainable; the high end at
    // max_k S_k / N_k. Runs exactly ceil(log2((high - low) / epsilon)) steps.
    PowerAllocation maxmin_uplink(const UplinkCoefficients &coeffs, const BisectionSettings &settings = {},
                                  const SolverTrace &trace = {});

    struct DownlinkFeasibility
    {
        bool feasible = false;
        bool certified = false; // infeasibility proven rather than assumed after the cap
        RMatrix nu;
        int iterations = 0;
    };

    // Decides whether some nu in the per-node power set reaches xi_k >= target
    // for every user with margin delta (in units of sigma). Works on the
    // convex residuals h_k(nu) = sqrt(target) ||f_k(nu)|| - a_k . nu_k and
    // minimizes 0.5 sum_k max(0, h_k + delta)^2 by accelerated projected
    // gradient, starting from `start`. A Frank-Wolfe duality gap bound
    // certifies infeasibility; running out of iterations counts as
    // infeasible.
    DownlinkFeasibility dl_soc_feasibility(double target, const DownlinkCoefficients &coeffs, const RMatrix &start,
                                           const BisectionSettings &settings = {});

    // Bisection on the common downlink SINR target, warm-starting each
    // feasibility problem from the last feasible nu. The low end starts at
    // the equal-power minimum SINR; the high end at
    // max_k (sum_n A(k,n))^2 / sigma^2.
    PowerAllocation maxmin_downlink(const DownlinkCoefficients &coeffs, const BisectionSettings &settings = {},
                                    const SolverTrace &trace = {});

    // Number of bisection steps needed to shrink [low, high] below epsilon.
    int bisection_steps(double low, double high, double epsilon);

    struct PowerSaving
    {
        double uplink = 0.0;     // fraction, 0.73 means 73 %
        double central = 0.0;    // downlink, cBS
        double edge_mean = 0.0;  // downlink, mean over eAPs
        bool has_central = false;
        bool has_edges = false;
    };

    // 1 - mean(eta) / mean(eta_base)
    double uplink_power_saving(const RVector &eta, const RVector &baseline);

    // Per node 1 - sum_k nu^2 / sum_k nu_base^2, cBS reported on its own and
    // eAPs averaged.
    PowerSaving downlink_power_saving(const RMatrix &nu, const RMatrix &baseline, const std::vector<NodeSpec> &nodes);
}
