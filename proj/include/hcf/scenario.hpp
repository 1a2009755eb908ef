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

#include "hcf/types.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace hcf
{
    enum class Architecture
    {
        Hcf,      // cBS with a quarter of the antennas plus distributed eAPs
        HcfHalf,  // cBS with half of the antennas
        CellFree, // distributed APs only (N_b = 0)
        Cellular  // one co-located array (L = 0)
    };

    enum class ScenarioPreset
    {
        Micro,
        Macro
    };

    enum class PathLossModel
    {
        Umi,
        CostHata
    };

    enum class NodeKind
    {
        Central,
        Edge
    };

    std::string_view to_string(Architecture arch);
    std::string_view to_string(ScenarioPreset preset);
    std::string_view to_string(PathLossModel model);
    Architecture parse_architecture(std::string_view name);
    ScenarioPreset parse_preset(std::string_view name);
    PathLossModel parse_path_loss(std::string_view name);

    struct CostHataParams
    {
        double carrier_ghz = 1.9;
        double ap_height_m = 15.0;
        double ue_height_m = 1.65;
        double d0_km = 0.01;
        double d1_km = 0.05;
    };

    // Minimum link distance shared by both path-loss models.
    inline constexpr double kDefaultMinDistanceM = 10.0;

    struct ScenarioConfig
    {
        double coverage_radius_m = 500.0;
        int total_antennas = 128; // M
        int num_users = 8;        // K
        Architecture architecture = Architecture::Hcf;
        int cbs_antennas = 32;    // N_b
        int num_eaps = 24;        // L
        int eap_antennas = 4;     // N_a
        int pilot_length = 4;     // tau_p
        int coherence_length = 200;
        int pilot_norm_length = 200; // tau_u in the uplink prelog 1 - tau_p / tau_u
        double ue_power_w = 0.2;
        double per_antenna_power_w = 0.05;
        double noise_density_dbm_hz = -174.0;
        double noise_figure_db = 9.0;
        double bandwidth_hz = 5e6;
        PathLossModel path_loss = PathLossModel::Umi;
        double shadow_sigma_db = 4.0;
        double asd_deg = 30.0;
        CostHataParams cost_hata;
        double min_distance_m = kDefaultMinDistanceM;

        // Throws ConfigError naming the first violated constraint.
        void validate() const;

        double cbs_power_w() const { return cbs_antennas * per_antenna_power_w; }
        double eap_power_w() const { return eap_antennas * per_antenna_power_w; }
        double noise_power_w() const;
        bool has_cbs() const { return cbs_antennas > 0; }
        int node_count() const { return (has_cbs() ? 1 : 0) + num_eaps; }
    };

    // Static description of one transmit/receive node (cBS, eAP, CF AP or
    // cellular BS). Node 0 is the cBS whenever N_b > 0.
    struct NodeSpec
    {
        NodeKind kind = NodeKind::Edge;
        int antennas = 0;
        double power_w = 0.0;
    };

    std::vector<NodeSpec> node_layout(const ScenarioConfig &config);

    // Returns the published parameterization for (preset, architecture), then
    // applies `overrides` and validates.
    ScenarioConfig build_scenario(ScenarioPreset preset, Architecture arch,
                                  const std::function<void(ScenarioConfig &)> &overrides = {});

    struct Placement
    {
        Point cbs_position;
        double cbs_orientation = 0.0;
        std::vector<Point> eap_positions;
        std::vector<double> eap_orientations;
        std::vector<Point> ue_positions;
        RMatrix shadow_db; // node_count x num_users

        Point node_position(int node, const ScenarioConfig &config) const;
        double node_orientation(int node, const ScenarioConfig &config) const;
    };

    // eAPs and UEs uniform over the coverage disk, orientations uniform on
    // [0, 2pi), shadowing i.i.d. N(0, sigma^2) per link. UE draws closer than
    // min_distance_m to any node are rejected; 1000 consecutive rejections
    // raise GeometryError.
    Placement sample_placement(const ScenarioConfig &config, Rng &rng);

    // Thermal noise power in watts.
    double noise_power(double density_dbm_hz, double bandwidth_hz, double noise_figure_db);
}
