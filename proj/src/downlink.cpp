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

#include "hcf/downlink.hpp"

#include <cmath>

namespace hcf
{
    namespace
    {
        double real_trace(Complex t, const char *what)
        {
            if (std::abs(t.imag()) > 1e-9 * std::abs(t) + 1e-300)
                throw NumericalError(std::string("dl_coefficients: complex residue in ") + what);
            return t.real();
        }

        double checked_square(double v, double scale, const char *what)
        {
            if (v < -1e-9 * scale)
                throw NumericalError(std::string("dl_coefficients: negative radicand in ") + what);
            return v < 0.0 ? 0.0 : v;
        }
    }

    DownlinkCoefficients dl_coefficients(const EstimationStatistics &stats)
    {
        const int nodes = stats.node_count();
        const int users = stats.user_count();
        const auto &params = stats.params();
        const double ptau = params.ue_power_w * params.pilot_length;
        const auto &pilots = stats.pilots();

        DownlinkCoefficients c;
        c.nodes = stats.links().nodes;
        c.pilots = pilots;
        c.noise_power_w = params.noise_power_w;
        c.amplitude = RMatrix::Zero(users, nodes);
        c.b_sq.assign(users, RMatrix::Zero(users, nodes));
        c.c_sq.assign(users, RMatrix::Zero(users, nodes));

        for (int n = 0; n < nodes; ++n)
        {
            const double pn = c.nodes[n].power_w;
            for (int kp = 0; kp < users; ++kp)
            {
                const LinkEstimate &e = stats.link(n, kp);
                const double energy = checked_square(e.est_energy, 1.0, "tr(R Gamma^-1 R)");
                if (!(energy > 0.0))
                    throw NumericalError("dl_coefficients: zero estimate energy");
                c.amplitude(kp, n) = std::sqrt(pn * energy);

                for (int k = 0; k < users; ++k)
                {
                    const CMatrix &r = stats.correlation(n, k);
                    const double rq = real_trace(trace_of_product(r, e.est_cov), "tr(R Q)");
                    c.c_sq[k](kp, n) = pn * checked_square(rq, std::abs(rq), "C") / energy;

                    if (k != kp && pilots.shares_pilot(k, kp))
                    {
                        // tr(R_k Gamma^{-1} R_k') = tr(W_k^H W_k'); both share Gamma.
                        const double rz = std::abs(
                            (stats.link(n, k).whitened.conjugate().array() * e.whitened.array()).sum());
                        c.b_sq[k](kp, n) = pn * ptau * ptau * rz * rz / energy;
                    }
                }
            }
        }
        return c;
    }

    RMatrix dl_equal_power(int users, int nodes)
    {
        return RMatrix::Constant(users, nodes, 1.0 / std::sqrt(static_cast<double>(users)));
    }

    void check_dl_power(const RMatrix &nu, int users, int nodes)
    {
        if (nu.rows() != users || nu.cols() != nodes)
            throw DomainError("downlink power matrix has the wrong shape");
        if ((nu.array() < 0.0).any() || !nu.allFinite())
            throw DomainError("downlink power coefficients must be finite and nonnegative");
        for (int n = 0; n < nodes; ++n)
            if (nu.col(n).squaredNorm() > 1.0 + 1e-9)
                throw DomainError("downlink per-node power budget exceeded at node " + std::to_string(n));
    }

    RVector dl_sinr(const DownlinkCoefficients &coeffs, const RMatrix &nu)
    {
        const int users = coeffs.user_count();
        check_dl_power(nu, users, coeffs.node_count());
        const RMatrix nu_sq = nu.array().square();
        RVector xi(users);
        for (int k = 0; k < users; ++k)
        {
            const double num = nu.row(k).dot(coeffs.amplitude.row(k));
            const double den = (coeffs.b_sq[k].array() * nu_sq.array()).sum() +
                               (coeffs.c_sq[k].array() * nu_sq.array()).sum() + coeffs.noise_power_w;
            xi[k] = num * num / den;
        }
        return xi;
    }

    namespace
    {
        int count_kind(const DownlinkCoefficients &c, NodeKind kind)
        {
            int n = 0;
            for (const auto &node : c.nodes)
                n += node.kind == kind;
            return n;
        }
    }

    RVector dl_sinr_hcf(const DownlinkCoefficients &coeffs, const RMatrix &nu)
    {
        if (count_kind(coeffs, NodeKind::Central) > 1)
            throw DomainError("dl_sinr_hcf: more than one central node");
        return dl_sinr(coeffs, nu);
    }

    RVector dl_sinr_cf(const DownlinkCoefficients &coeffs, const RMatrix &zeta)
    {
        if (count_kind(coeffs, NodeKind::Central) != 0)
            throw DomainError("dl_sinr_cf: cell-free layout has no central node");
        if ((zeta.array() < 0.0).any())
            throw DomainError("dl_sinr_cf: negative power fraction");
        return dl_sinr(coeffs, zeta.array().sqrt().matrix());
    }

    RVector dl_sinr_cellular(const DownlinkCoefficients &coeffs, const RVector &zeta)
    {
        if (coeffs.node_count() != 1 || coeffs.nodes.front().kind != NodeKind::Central)
            throw DomainError("dl_sinr_cellular: cellular layout is a single central node");
        if ((zeta.array() < 0.0).any())
            throw DomainError("dl_sinr_cellular: negative power fraction");
        return dl_sinr(coeffs, RMatrix(zeta.array().sqrt().matrix()));
    }

    RVector dl_se(const RVector &xi)
    {
        RVector se(xi.size());
        for (Eigen::Index k = 0; k < xi.size(); ++k)
        {
            if (!(xi[k] >= 0.0))
                throw DomainError("dl_se: negative SINR");
            se[k] = std::log2(1.0 + xi[k]);
        }
        return se;
    }

    RVector dl_sinr_monte_carlo_oracle(std::shared_ptr<const EstimationStatistics> stats, const RMatrix &nu,
                                       int draws, Rng &rng)
    {
        const int nodes = stats->node_count();
        const int users = stats->user_count();
        check_dl_power(nu, users, nodes);
        if (draws < 2)
            throw DomainError("dl_sinr_monte_carlo_oracle: need at least two draws");

        std::vector<std::vector<CMatrix>> roots(nodes);
        for (int n = 0; n < nodes; ++n)
            for (int k = 0; k < users; ++k)
                roots[n].push_back(hermitian_sqrt(stats->correlation(n, k)));

        // Raw moments of c_n(k,k') = h_kn^T conj(h_hat_k'n): per (k,k') the
        // node mean vector and node x node second-moment matrix.
        const int pairs = users * users;
        std::vector<CVector> first(pairs, CVector::Zero(nodes));
        std::vector<CMatrix> second(pairs, CMatrix::Zero(nodes, nodes));
        RMatrix energy = RMatrix::Zero(users, nodes);

        std::vector<std::vector<CVector>> channels(nodes, std::vector<CVector>(users));
        CVector c(nodes);
        for (int d = 0; d < draws; ++d)
        {
            for (int n = 0; n < nodes; ++n)
                for (int k = 0; k < users; ++k)
                    channels[n][k] = draw_channel(roots[n][k], rng);
            const EstimationSet est = simulate_training(channels, stats, rng);

            for (int n = 0; n < nodes; ++n)
                for (int k = 0; k < users; ++k)
                    energy(k, n) += est.h_hat[n][k].squaredNorm();
            for (int k = 0; k < users; ++k)
                for (int kp = 0; kp < users; ++kp)
                {
                    for (int n = 0; n < nodes; ++n)
                        c[n] = est.h_hat[n][kp].dot(channels[n][k]);
                    first[k * users + kp] += c;
                    second[k * users + kp].noalias() += c * c.adjoint();
                }
        }
        energy /= draws;

        RVector xi(users);
        CVector v(nodes);
        for (int k = 0; k < users; ++k)
        {
            double signal = 0.0, total = 0.0;
            for (int kp = 0; kp < users; ++kp)
            {
                for (int n = 0; n < nodes; ++n)
                    v[n] = std::sqrt(stats->links().nodes[n].power_w / energy(kp, n)) * nu(kp, n);
                const CVector mean = first[k * users + kp] / static_cast<double>(draws);
                const CMatrix moment = second[k * users + kp] / static_cast<double>(draws);
                total += std::real(v.dot(moment * v));
                if (kp == k)
                    signal = std::norm(v.dot(mean));
            }
            xi[k] = signal / (total - signal + stats->params().noise_power_w);
        }
        return xi;
    }
}
