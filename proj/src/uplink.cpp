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

#include "hcf/uplink.hpp"

#include <cmath>

namespace hcf
{
    UplinkCoefficients ul_coefficients(const EstimationSet &est)
    {
        const int nodes = est.node_count();
        const int users = est.user_count();
        const auto &params = est.stats->params();

        RVector energy = RVector::Zero(users);
        CMatrix gram = CMatrix::Zero(users, users);
        RMatrix error = RMatrix::Zero(users, users);

        for (int n = 0; n < nodes; ++n)
        {
            const Eigen::Index dim = est.h_hat[n].front().size();
            CMatrix h(dim, users);
            for (int k = 0; k < users; ++k)
                h.col(k) = est.h_hat[n][k];
            gram.noalias() += h.adjoint() * h;

            // error(k, k') += h_k^H Theta_k' h_k, one GEMM per k'.
            CMatrix th(dim, users);
            for (int kp = 0; kp < users; ++kp)
            {
                th.noalias() = est.theta(n, kp) * h;
                error.col(kp) += (h.conjugate().array() * th.array()).colwise().sum().real().transpose().matrix();
            }
        }
        energy = gram.diagonal().real();

        UplinkCoefficients c;
        c.signal = energy.array().square();
        c.interference = error;
        for (int k = 0; k < users; ++k)
            for (int kp = 0; kp < users; ++kp)
                if (kp != k)
                    c.interference(k, kp) += std::norm(gram(k, kp));
        c.noise = (params.noise_power_w / params.ue_power_w) * energy;
        return c;
    }

    namespace
    {
        void require_layout(const EstimationSet &est, bool want_central, bool want_edges, const char *what)
        {
            int central = 0, edges = 0;
            for (const auto &n : est.stats->links().nodes)
                (n.kind == NodeKind::Central ? central : edges)++;
            const bool ok = (want_central ? central == 1 : central == 0) && (want_edges ? edges >= 1 : edges == 0);
            if (!ok)
                throw DomainError(std::string(what) + ": node layout does not match the architecture");
        }
    }

    UplinkCoefficients ul_coeffs_hcf(const EstimationSet &est)
    {
        int central = 0;
        for (const auto &n : est.stats->links().nodes)
            central += n.kind == NodeKind::Central;
        if (central > 1)
            throw DomainError("ul_coeffs_hcf: more than one central node");
        return ul_coefficients(est);
    }

    UplinkCoefficients ul_coeffs_cf(const EstimationSet &est)
    {
        require_layout(est, false, true, "ul_coeffs_cf");
        return ul_coefficients(est);
    }

    UplinkCoefficients ul_coeffs_cellular(const EstimationSet &est)
    {
        require_layout(est, true, false, "ul_coeffs_cellular");
        return ul_coefficients(est);
    }

    RVector ul_sinr(const UplinkCoefficients &coeffs, const RVector &eta)
    {
        const int users = coeffs.user_count();
        if (eta.size() != users)
            throw DomainError("ul_sinr: eta has the wrong length");
        constexpr double slack = 1e-12;
        for (int k = 0; k < users; ++k)
            if (!(eta[k] >= -slack && eta[k] <= 1.0 + slack))
                throw DomainError("ul_sinr: power coefficient outside [0, 1]");

        const RVector denom = coeffs.interference * eta + coeffs.noise;
        RVector gamma(users);
        for (int k = 0; k < users; ++k)
            gamma[k] = denom[k] > 0.0 ? eta[k] * coeffs.signal[k] / denom[k] : 0.0;
        return gamma;
    }

    RVector ul_se(const RVector &gamma, int pilot_length, int pilot_norm_length)
    {
        if (pilot_length >= pilot_norm_length)
            throw DomainError("ul_se: tau_p must be smaller than tau_u");
        const double prelog = 1.0 - static_cast<double>(pilot_length) / pilot_norm_length;
        RVector se(gamma.size());
        for (Eigen::Index k = 0; k < gamma.size(); ++k)
        {
            if (!(gamma[k] >= 0.0))
                throw DomainError("ul_se: negative SINR");
            se[k] = prelog * std::log2(1.0 + gamma[k]);
        }
        return se;
    }
}
