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

#include "hcf/scenario.hpp"
#include "hcf/types.hpp"

#include <vector>

namespace hcf
{
    // 3GPP UMi path loss in dB (negative gain) at distance d in meters.
    double path_loss_umi_db(double distance_m, double min_distance_m = kDefaultMinDistanceM);

    // COST-231 Hata intercept L0 in dB; the carrier is converted to MHz.
    double cost_hata_intercept_db(const CostHataParams &params);

    // Three-slope COST-Hata path loss in dB at distance d in kilometers.
    double path_loss_cost_hata_db(double distance_km, const CostHataParams &params,
                                  double min_distance_km = kDefaultMinDistanceM / 1000.0);

    struct CorrelationMatrix
    {
        CMatrix entries;
        double beta = 0.0; // large-scale gain, tr(entries) / N

        Eigen::Index size() const { return entries.rows(); }
    };

    // Gaussian local scattering model for a half-wavelength ULA, small-ASD
    // closed form. Angles in radians.
    CorrelationMatrix local_scattering_correlation(int antennas, double nominal_angle, double asd, double beta);

    // Hermitian square root S = V sqrt(max(L, 0)) V^H with S S^H = R.
    // Eigenvalues below -1e-10 * tr(R) are rejected as non-PSD input.
    CMatrix hermitian_sqrt(const CMatrix &r);

    // h = S h' with h' ~ CN(0, I).
    CVector draw_channel(const CMatrix &sqrt_factor, Rng &rng);

    // Spatial correlation of every (node, user) link for one placement.
    struct LinkStatistics
    {
        std::vector<NodeSpec> nodes;
        std::vector<std::vector<CorrelationMatrix>> links; // [node][user]

        int node_count() const { return static_cast<int>(nodes.size()); }
        int user_count() const { return links.empty() ? 0 : static_cast<int>(links.front().size()); }
        const CorrelationMatrix &at(int node, int user) const { return links[node][user]; }
    };

    // Large-scale gain in dB (path loss plus shadowing) for one link.
    double link_gain_db(const ScenarioConfig &config, double distance_m, double shadow_db);

    LinkStatistics build_link_correlations(const ScenarioConfig &config, const Placement &placement);
}
