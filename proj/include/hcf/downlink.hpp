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

#include "hcf/pilot_estimation.hpp"
#include "hcf/types.hpp"

#include <vector>

namespace hcf
{
    // Statistics-only downlink SINR under conjugate beamforming. Powers are
    // amplitudes nu (K x nodes) with sum_k nu(k, n)^2 <= 1 at every node.
    //
    //   xi_k = (sum_n nu(k,n) A(k,n))^2
    //          / (sum_{k' in P_k \ k} sum_n nu(k',n)^2 B2[k](k',n)
    //             + sum_k' sum_n nu(k',n)^2 C2[k](k',n) + sigma^2)
    struct DownlinkCoefficients
    {
        RMatrix amplitude;         // A(k, n)
        std::vector<RMatrix> b_sq; // b_sq[k](k', n) = B^2; zero outside P_k \ {k}
        std::vector<RMatrix> c_sq; // c_sq[k](k', n) = C^2
        std::vector<NodeSpec> nodes;
        PilotAssignment pilots;
        double noise_power_w = 0.0;

        int user_count() const { return static_cast<int>(amplitude.rows()); }
        int node_count() const { return static_cast<int>(amplitude.cols()); }
        // B^2 + C^2: weight of nu(k', n)^2 in user k's denominator.
        RMatrix interference_weights(int user) const { return b_sq[user] + c_sq[user]; }
    };

    DownlinkCoefficients dl_coefficients(const EstimationStatistics &stats);

    // nu(k, n) = 1/sqrt(K) everywhere.
    RMatrix dl_equal_power(int users, int nodes);

    // Throws DomainError if nu is negative or breaks a per-node budget
    // (relative slack 1e-9).
    void check_dl_power(const RMatrix &nu, int users, int nodes);

    RVector dl_sinr(const DownlinkCoefficients &coeffs, const RMatrix &nu);
    RVector dl_sinr_hcf(const DownlinkCoefficients &coeffs, const RMatrix &nu);
    // Cell-free: zeta(k, a) power fractions, one column per AP.
    RVector dl_sinr_cf(const DownlinkCoefficients &coeffs, const RMatrix &zeta);
    // Cellular: zeta(k) power fractions at the single base station.
    RVector dl_sinr_cellular(const DownlinkCoefficients &coeffs, const RVector &zeta);

    // log2(1 + xi); the downlink carries no pilot overhead.
    RVector dl_se(const RVector &xi);

    // Reference estimate of the same SINR obtained by simulating channel
    // draws, MMSE training and conjugate-beamformed transmission, then
    // forming the use-and-then-forget ratio from sample moments:
    //   |E g_kk|^2 / (sum_k' E|g_kk'|^2 - |E g_kk|^2 + sigma^2)
    // where g_kk' is the effective gain from user k' stream to user k.
    // Precoders are normalized by the sample mean of ||h_hat||^2.
    RVector dl_sinr_monte_carlo_oracle(std::shared_ptr<const EstimationStatistics> stats, const RMatrix &nu,
                                       int draws, Rng &rng);
}
