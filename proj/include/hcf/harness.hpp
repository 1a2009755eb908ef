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

#include "hcf/power_control.hpp"
#include "hcf/scenario.hpp"
#include "hcf/types.hpp"

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace hcf
{
    enum class LinkDirection
    {
        Uplink,
        Downlink
    };

    // Equal split in the downlink, full power in the uplink.
    enum class PowerMode
    {
        Baseline,
        MaxMin
    };

    std::string_view to_string(LinkDirection link);
    std::string_view to_string(PowerMode mode); // "equal" / "full" depend on link, see power_mode_name
    std::string_view power_mode_name(PowerMode mode, LinkDirection link);
    LinkDirection parse_link(std::string_view name);
    // Accepts "equal", "full" and "maxmin"; "equal" and "full" both select the
    // baseline of whichever link is simulated.
    PowerMode parse_power_mode(std::string_view name);

    struct ExperimentSpec
    {
        ScenarioPreset preset = ScenarioPreset::Micro;
        ScenarioConfig scenario;
        LinkDirection link = LinkDirection::Downlink;
        PowerMode power = PowerMode::Baseline;
        int epochs = 300;
        int small_scale_draws = 20; // uplink only
        std::uint64_t master_seed = 1;
        BisectionSettings solver;
        int threads = 0;            // 0: one per hardware thread
        bool record_trace = false;  // keep solver trace events per epoch

        void validate() const;
    };

    // Desk-scale defaults: 300 epochs for the microcell, 150 for the macrocell.
    int default_epochs(ScenarioPreset preset);

    ExperimentSpec make_experiment(ScenarioPreset preset, Architecture arch, LinkDirection link, PowerMode power);

    struct EpochRecord
    {
        int epoch = 0;
        RVector se;                     // per user, bits/s/Hz
        double baseline_min_se = 0.0;   // min over users under equal/full power
        double min_se = 0.0;            // min over users under the selected mode
        int dominance_violations = 0;   // max-min below baseline beyond tolerance
        int dominance_checks = 0;
        bool has_power_saving = false;
        double uplink_saving = 0.0;     // mean over draws
        PowerSaving downlink_saving;
        int solver_steps = 0;           // total bisection steps in the epoch
        std::vector<SolverTraceEvent> trace;

        double sum_se() const { return se.sum(); }
    };

    struct ExperimentResult
    {
        ExperimentSpec spec;
        std::string run_id;
        std::vector<EpochRecord> epochs;

        // (epoch, user, SE) in epoch-major order.
        std::vector<double> samples() const;
        std::vector<double> sum_throughput_samples() const;
        std::size_t sample_count() const;
    };

    // Child seed of epoch e: splitmix64(master ^ splitmix64(e)).
    std::uint64_t epoch_seed(std::uint64_t master_seed, int epoch);

    EpochRecord run_epoch(const ExperimentSpec &spec, int epoch);

    // Epochs run on a worker pool and are merged in epoch order, so the
    // result does not depend on the thread count. An error in any epoch
    // aborts the run and is rethrown with the lowest failing epoch index.
    ExperimentResult run_experiment(const ExperimentSpec &spec);

    // Sorted (value, i/N) pairs.
    std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> samples);

    // Sorted sample at 1-based index ceil((1 - level) N).
    double likely_rate(std::vector<double> samples, double level = 0.95);

    double median(std::vector<double> samples);

    struct SumThroughput
    {
        std::vector<double> bps_hz;
        std::vector<double> bps;
    };
    SumThroughput sum_throughput(const std::vector<std::vector<double>> &per_epoch_se, double bandwidth_hz);
}
