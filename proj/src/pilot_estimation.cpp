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

#include "hcf/pilot_estimation.hpp"

#include <cmath>

namespace hcf
{
    PilotAssignment assign_pilots(int users, int pilot_length)
    {
        if (pilot_length < 1)
            throw DomainError("assign_pilots: tau_p must be at least 1");
        if (users < 0)
            throw DomainError("assign_pilots: negative user count");

        PilotAssignment a;
        a.pilot_count = pilot_length;
        a.pilot_of.resize(users);
        a.sets.resize(pilot_length);
        for (int k = 0; k < users; ++k)
        {
            a.pilot_of[k] = k % pilot_length;
            a.sets[a.pilot_of[k]].push_back(k);
        }
        return a;
    }

    CMatrix gamma_matrix(std::span<const CMatrix *const> coset_correlations, const TrainingParams &params)
    {
        if (coset_correlations.empty())
            throw DomainError("gamma_matrix: empty pilot set");
        const Eigen::Index n = coset_correlations.front()->rows();
        CMatrix gamma = CMatrix::Zero(n, n);
        for (const CMatrix *r : coset_correlations)
        {
            if (r->rows() != n || r->cols() != n)
                throw DomainError("gamma_matrix: correlation matrices differ in dimension");
            gamma += *r;
        }
        gamma *= params.ue_power_w * params.pilot_length;
        gamma.diagonal().array() += params.noise_power_w;
        return gamma;
    }

    CMatrix estimation_error_cov(const CMatrix &r, const CMatrix &gamma, double ue_power_w, int pilot_length)
    {
        Eigen::LLT<CMatrix> llt(gamma);
        if (llt.info() != Eigen::Success)
            throw DomainError("estimation_error_cov: Gamma is not positive definite");
        CMatrix theta = r - ue_power_w * pilot_length * (r * llt.solve(r));
        return 0.5 * (theta + theta.adjoint());
    }

    EstimationStatistics::EstimationStatistics(LinkStatistics links, PilotAssignment pilots,
                                               const TrainingParams &params)
        : links_(std::move(links)), pilots_(std::move(pilots)), params_(params)
    {
        if (pilots_.user_count() != links_.user_count())
            throw DomainError("EstimationStatistics: pilot assignment and link statistics disagree on K");

        const int nodes = links_.node_count();
        const int users = links_.user_count();
        const double scale = params_.ue_power_w * params_.pilot_length;

        gamma_.resize(nodes);
        gamma_factor_.resize(nodes);
        estimates_.resize(nodes);
        std::vector<const CMatrix *> coset;
        for (int n = 0; n < nodes; ++n)
        {
            for (int p = 0; p < pilots_.pilot_count; ++p)
            {
                const auto &set = pilots_.sets[p];
                if (set.empty())
                {
                    // Unused pilot: keep shapes consistent, never referenced.
                    const Eigen::Index dim = links_.nodes[n].antennas;
                    gamma_[n].push_back(params_.noise_power_w * CMatrix::Identity(dim, dim));
                }
                else
                {
                    coset.clear();
                    for (int k : set)
                        coset.push_back(&links_.at(n, k).entries);
                    gamma_[n].push_back(gamma_matrix(coset, params_));
                }
                Eigen::LLT<CMatrix> llt(gamma_[n].back());
                if (llt.info() != Eigen::Success)
                    throw NumericalError("EstimationStatistics: Gamma is not positive definite");
                gamma_factor_[n].push_back(llt.matrixL());
            }

            estimates_[n].reserve(users);
            for (int k = 0; k < users; ++k)
            {
                const CMatrix &r = links_.at(n, k).entries;
                LinkEstimate e;
                e.whitened = gamma_factor_[n][pilots_.pilot_of[k]].triangularView<Eigen::Lower>().solve(r);
                e.est_cov = CMatrix::Zero(r.rows(), r.cols());
                e.est_cov.selfadjointView<Eigen::Lower>().rankUpdate(e.whitened.adjoint(), scale);
                e.est_cov.triangularView<Eigen::StrictlyUpper>() = e.est_cov.adjoint();
                e.error_cov = r - e.est_cov;
                e.est_energy = e.est_cov.trace().real();
                estimates_[n].push_back(std::move(e));
            }
        }
    }

    EstimationSet simulate_training(const std::vector<std::vector<CVector>> &channels,
                                    std::shared_ptr<const EstimationStatistics> stats, Rng &rng)
    {
        const auto &params = stats->params();
        const auto &pilots = stats->pilots();
        const int nodes = stats->node_count();
        const int users = stats->user_count();
        if (static_cast<int>(channels.size()) != nodes)
            throw DomainError("simulate_training: channel set has the wrong node count");

        const double sqrt_p = std::sqrt(params.ue_power_w);
        const double tau = params.pilot_length;

        EstimationSet set;
        set.h_hat.resize(nodes, std::vector<CVector>(users));
        for (int n = 0; n < nodes; ++n)
        {
            const Eigen::Index dim = stats->links().nodes[n].antennas;
            for (int p = 0; p < pilots.pilot_count; ++p)
            {
                if (pilots.sets[p].empty())
                    continue;
                CVector psi = complex_normal(dim, rng, tau * params.noise_power_w);
                for (int k : pilots.sets[p])
                    psi += (sqrt_p * tau) * channels[n][k];
                const CVector white = stats->gamma_factor(n, p).triangularView<Eigen::Lower>().solve(psi);
                for (int k : pilots.sets[p])
                    set.h_hat[n][k] = sqrt_p * (stats->link(n, k).whitened.adjoint() * white);
            }
        }
        set.stats = std::move(stats);
        return set;
    }

    EstimationSet sample_estimates(std::shared_ptr<const EstimationStatistics> stats, Rng &rng)
    {
        const auto &params = stats->params();
        const auto &pilots = stats->pilots();
        const int nodes = stats->node_count();
        const int users = stats->user_count();
        const double sqrt_p = std::sqrt(params.ue_power_w);
        const double sqrt_tau = std::sqrt(static_cast<double>(params.pilot_length));

        EstimationSet set;
        set.h_hat.resize(nodes, std::vector<CVector>(users));
        for (int n = 0; n < nodes; ++n)
        {
            const Eigen::Index dim = stats->links().nodes[n].antennas;
            for (int p = 0; p < pilots.pilot_count; ++p)
            {
                if (pilots.sets[p].empty())
                    continue;
                // psi = sqrt(tau_p) L w with w ~ CN(0, I), hence L^{-1} psi = sqrt(tau_p) w.
                const CVector white = sqrt_tau * complex_normal(dim, rng);
                for (int k : pilots.sets[p])
                    set.h_hat[n][k] = sqrt_p * (stats->link(n, k).whitened.adjoint() * white);
            }
        }
        set.stats = std::move(stats);
        return set;
    }
}
