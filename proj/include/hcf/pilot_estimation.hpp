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

#include "hcf/channel_model.hpp"
#include "hcf/types.hpp"

#include <memory>
#include <span>
#include <vector>

namespace hcf
{
    // Round-robin pilot reuse: user k (0-based) gets pilot k mod tau_p.
    struct PilotAssignment
    {
        int pilot_count = 0;
        std::vector<int> pilot_of;          // user -> pilot index
        std::vector<std::vector<int>> sets; // pilot -> users, ascending

        int user_count() const { return static_cast<int>(pilot_of.size()); }
        // P_k: every user sharing k's pilot, k included.
        const std::vector<int> &coset(int user) const { return sets[pilot_of[user]]; }
        bool shares_pilot(int a, int b) const { return pilot_of[a] == pilot_of[b]; }
    };

    PilotAssignment assign_pilots(int users, int pilot_length);

    struct TrainingParams
    {
        double ue_power_w = 0.2;
        int pilot_length = 1;
        double noise_power_w = 1.0;
    };

    // Gamma = p_u tau_p sum_{k' in P_k} R_k' + sigma^2 I.
    CMatrix gamma_matrix(std::span<const CMatrix *const> coset_correlations, const TrainingParams &params);

    // Theta = R - p_u tau_p R Gamma^{-1} R.
    CMatrix estimation_error_cov(const CMatrix &r, const CMatrix &gamma, double ue_power_w, int pilot_length);

    // Per-link second-order statistics of the MMSE estimator.
    struct LinkEstimate
    {
        CMatrix whitened;   // W = L^{-1} R with Gamma = L L^H, so R Gamma^{-1} R' = W^H W'
        CMatrix est_cov;    // p_u tau_p R Gamma^{-1} R = p_u tau_p W^H W
        CMatrix error_cov;  // Theta
        double est_energy;  // E ||h_hat||^2 = tr(est_cov)
    };

    // Everything about channel estimation that depends only on the placement:
    // built once per epoch and shared read-only by all small-scale draws.
    class EstimationStatistics
    {
    public:
        EstimationStatistics(LinkStatistics links, PilotAssignment pilots, const TrainingParams &params);

        const LinkStatistics &links() const { return links_; }
        const PilotAssignment &pilots() const { return pilots_; }
        const TrainingParams &params() const { return params_; }
        int node_count() const { return links_.node_count(); }
        int user_count() const { return links_.user_count(); }

        const CMatrix &correlation(int node, int user) const { return links_.at(node, user).entries; }
        const CMatrix &gamma(int node, int user) const { return gamma_[node][pilots_.pilot_of[user]]; }
        const CMatrix &gamma_factor(int node, int pilot) const { return gamma_factor_[node][pilot]; }
        const LinkEstimate &link(int node, int user) const { return estimates_[node][user]; }

    private:
        LinkStatistics links_;
        PilotAssignment pilots_;
        TrainingParams params_;
        std::vector<std::vector<CMatrix>> gamma_;        // [node][pilot]
        std::vector<std::vector<CMatrix>> gamma_factor_; // lower Cholesky factor of gamma_
        std::vector<std::vector<LinkEstimate>> estimates_;
    };

    // One realization of the training phase: the estimates for every link,
    // plus the shared statistics they were produced with.
    struct EstimationSet
    {
        std::shared_ptr<const EstimationStatistics> stats;
        std::vector<std::vector<CVector>> h_hat; // [node][user]

        int node_count() const { return static_cast<int>(h_hat.size()); }
        int user_count() const { return h_hat.empty() ? 0 : static_cast<int>(h_hat.front().size()); }
        const CMatrix &gamma(int node, int user) const { return stats->gamma(node, user); }
        const CMatrix &theta(int node, int user) const { return stats->link(node, user).error_cov; }
        const CMatrix &est_cov(int node, int user) const { return stats->link(node, user).est_cov; }
    };

    // Full training simulation from channel realizations [node][user]. The
    // pilot matrix is never formed: since Omega Omega^H = tau_p I the
    // projection noise is drawn directly as CN(0, tau_p sigma^2 I). The
    // estimate sqrt(p_u) R Gamma^{-1} psi is evaluated as sqrt(p_u) W^H L^{-1} psi.
    EstimationSet simulate_training(const std::vector<std::vector<CVector>> &channels,
                                    std::shared_ptr<const EstimationStatistics> stats, Rng &rng);

    // Same distribution of estimates as simulate_training, drawing each pilot
    // projection directly from psi ~ CN(0, tau_p Gamma). Used when the true
    // channels themselves are not needed.
    EstimationSet sample_estimates(std::shared_ptr<const EstimationStatistics> stats, Rng &rng);
}
