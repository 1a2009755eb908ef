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

#include "hcf/scenario.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace hcf
{
    namespace
    {
        [[noreturn]] void config_error(const std::string &what)
        {
            throw ConfigError("invalid scenario: " + what);
        }

        template <typename Enum, std::size_t N>
        Enum parse_enum(std::string_view name, const std::pair<std::string_view, Enum> (&table)[N],
                        std::string_view kind)
        {
            for (const auto &[label, value] : table)
                if (label == name)
                    return value;
            throw ConfigError("unknown " + std::string(kind) + " '" + std::string(name) + "'");
        }

        constexpr std::pair<std::string_view, Architecture> kArchNames[] = {
            {"hcf", Architecture::Hcf},
            {"hcf-half", Architecture::HcfHalf},
            {"cf", Architecture::CellFree},
            {"cellular", Architecture::Cellular},
        };
        constexpr std::pair<std::string_view, ScenarioPreset> kPresetNames[] = {
            {"micro", ScenarioPreset::Micro},
            {"macro", ScenarioPreset::Macro},
        };
        constexpr std::pair<std::string_view, PathLossModel> kPathLossNames[] = {
            {"umi", PathLossModel::Umi},
            {"cost-hata", PathLossModel::CostHata},
        };

        template <typename Enum, std::size_t N>
        std::string_view enum_name(Enum value, const std::pair<std::string_view, Enum> (&table)[N])
        {
            for (const auto &[label, v] : table)
                if (v == value)
                    return label;
            return "?";
        }

        Point uniform_in_disk(double radius, Rng &rng)
        {
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            const double r = radius * std::sqrt(unit(rng));
            const double theta = 2.0 * std::numbers::pi * unit(rng);
            return {r * std::cos(theta), r * std::sin(theta)};
        }
    }

    std::string_view to_string(Architecture arch) { return enum_name(arch, kArchNames); }
    std::string_view to_string(ScenarioPreset preset) { return enum_name(preset, kPresetNames); }
    std::string_view to_string(PathLossModel model) { return enum_name(model, kPathLossNames); }
    Architecture parse_architecture(std::string_view name) { return parse_enum(name, kArchNames, "architecture"); }
    ScenarioPreset parse_preset(std::string_view name) { return parse_enum(name, kPresetNames, "scenario"); }
    PathLossModel parse_path_loss(std::string_view name) { return parse_enum(name, kPathLossNames, "path-loss model"); }

    double noise_power(double density_dbm_hz, double bandwidth_hz, double noise_figure_db)
    {
        if (!(bandwidth_hz > 0.0))
            throw DomainError("noise_power: bandwidth must be positive");
        const double dbm = density_dbm_hz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
        return std::pow(10.0, (dbm - 30.0) / 10.0);
    }

    double ScenarioConfig::noise_power_w() const
    {
        return noise_power(noise_density_dbm_hz, bandwidth_hz, noise_figure_db);
    }

    void ScenarioConfig::validate() const
    {
        if (!(coverage_radius_m > 0.0))
            config_error("coverage_radius must be positive");
        if (total_antennas < 1)
            config_error("M must be at least 1");
        if (num_users < 1)
            config_error("K must be at least 1");
        if (cbs_antennas < 0 || num_eaps < 0 || eap_antennas < 0)
            config_error("antenna counts must be non-negative");
        if (num_eaps > 0 && eap_antennas < 1)
            config_error("N_a must be at least 1 when L > 0");
        if (cbs_antennas + num_eaps * eap_antennas != total_antennas)
        {
            std::ostringstream os;
            os << "antenna budget N_b + L*N_a = M violated (" << cbs_antennas << " + " << num_eaps << "*"
               << eap_antennas << " = " << cbs_antennas + num_eaps * eap_antennas << " != " << total_antennas << ")";
            config_error(os.str());
        }
        if (architecture == Architecture::Cellular && num_eaps != 0)
            config_error("cellular architecture requires L = 0");
        if (architecture == Architecture::CellFree && cbs_antennas != 0)
            config_error("cell-free architecture requires N_b = 0");
        if (pilot_length < 1)
            config_error("tau_p must be at least 1");
        if (pilot_length > coherence_length)
            config_error("tau_p must not exceed tau_c");
        if (num_users > coherence_length)
            config_error("K must not exceed tau_c");
        if (pilot_norm_length <= pilot_length)
            config_error("tau_u must exceed tau_p");
        if (!(ue_power_w > 0.0) || !(per_antenna_power_w > 0.0))
            config_error("powers must be positive");
        if (!(bandwidth_hz > 0.0))
            config_error("bandwidth must be positive");
        if (!(asd_deg > 0.0))
            config_error("angular standard deviation must be positive");
        if (!(shadow_sigma_db >= 0.0))
            config_error("shadowing standard deviation must be non-negative");
        if (!(min_distance_m > 0.0) || min_distance_m >= coverage_radius_m)
            config_error("min_distance must lie in (0, coverage_radius)");
        if (path_loss == PathLossModel::CostHata &&
            !(cost_hata.d0_km > 0.0 && cost_hata.d1_km > cost_hata.d0_km && cost_hata.carrier_ghz > 0.0 &&
              cost_hata.ap_height_m > 0.0))
            config_error("COST-Hata parameters require 0 < d0 < d1 and positive f_c, h_ap");
    }

    std::vector<NodeSpec> node_layout(const ScenarioConfig &config)
    {
        std::vector<NodeSpec> nodes;
        nodes.reserve(config.node_count());
        if (config.has_cbs())
            nodes.push_back({NodeKind::Central, config.cbs_antennas, config.cbs_power_w()});
        for (int l = 0; l < config.num_eaps; ++l)
            nodes.push_back({NodeKind::Edge, config.eap_antennas, config.eap_power_w()});
        return nodes;
    }

    ScenarioConfig build_scenario(ScenarioPreset preset, Architecture arch,
                                  const std::function<void(ScenarioConfig &)> &overrides)
    {
        ScenarioConfig c;
        c.architecture = arch;
        c.eap_antennas = 4;
        if (preset == ScenarioPreset::Micro)
        {
            c.coverage_radius_m = 500.0;
            c.total_antennas = 128;
            c.num_users = 8;
            c.pilot_length = 4;
            c.asd_deg = 30.0;
            c.path_loss = PathLossModel::Umi;
            c.shadow_sigma_db = 4.0;
        }
        else
        {
            c.coverage_radius_m = 2000.0;
            c.total_antennas = 384;
            c.num_users = 16;
            c.pilot_length = 8;
            c.asd_deg = 10.0;
            c.path_loss = PathLossModel::CostHata;
            c.shadow_sigma_db = 8.0;
        }

        switch (arch)
        {
        case Architecture::Hcf:
            c.cbs_antennas = c.total_antennas / 4;
            break;
        case Architecture::HcfHalf:
            c.cbs_antennas = c.total_antennas / 2;
            break;
        case Architecture::CellFree:
            c.cbs_antennas = 0;
            break;
        case Architecture::Cellular:
            c.cbs_antennas = c.total_antennas;
            break;
        }
        c.num_eaps = (c.total_antennas - c.cbs_antennas) / c.eap_antennas;

        if (overrides)
            overrides(c);
        c.validate();
        return c;
    }

    Point Placement::node_position(int node, const ScenarioConfig &config) const
    {
        if (config.has_cbs())
        {
            if (node == 0)
                return cbs_position;
            --node;
        }
        return eap_positions.at(static_cast<std::size_t>(node));
    }

    double Placement::node_orientation(int node, const ScenarioConfig &config) const
    {
        if (config.has_cbs())
        {
            if (node == 0)
                return cbs_orientation;
            --node;
        }
        return eap_orientations.at(static_cast<std::size_t>(node));
    }

    Placement sample_placement(const ScenarioConfig &config, Rng &rng)
    {
        constexpr int kMaxRejections = 1000;
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

        Placement p;
        p.cbs_position = {0.0, 0.0};
        p.eap_positions.reserve(config.num_eaps);
        p.eap_orientations.reserve(config.num_eaps);
        for (int l = 0; l < config.num_eaps; ++l)
        {
            p.eap_positions.push_back(uniform_in_disk(config.coverage_radius_m, rng));
            p.eap_orientations.push_back(angle(rng));
        }
        p.cbs_orientation = angle(rng);

        const int nodes = config.node_count();
        p.ue_positions.reserve(config.num_users);
        for (int k = 0; k < config.num_users; ++k)
        {
            int rejections = 0;
            for (;;)
            {
                const Point candidate = uniform_in_disk(config.coverage_radius_m, rng);
                bool ok = true;
                for (int n = 0; n < nodes && ok; ++n)
                    ok = distance(candidate, p.node_position(n, config)) >= config.min_distance_m;
                if (ok)
                {
                    p.ue_positions.push_back(candidate);
                    break;
                }
                if (++rejections >= kMaxRejections)
                    throw GeometryError("sample_placement: could not place user " + std::to_string(k) +
                                        " at least " + std::to_string(config.min_distance_m) +
                                        " m from every node after " + std::to_string(kMaxRejections) +
                                        " attempts");
            }
        }

        std::normal_distribution<double> shadow(0.0, config.shadow_sigma_db);
        p.shadow_db.resize(nodes, config.num_users);
        for (int n = 0; n < nodes; ++n)
            for (int k = 0; k < config.num_users; ++k)
                p.shadow_db(n, k) = config.shadow_sigma_db > 0.0 ? shadow(rng) : 0.0;
        return p;
    }
}
