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

// Independent reference evaluations used by the unit and acceptance tests.
// Everything here works from the correlation matrices with explicit
// inverses and direct summations, never through the library's cached
// coefficient tables, so agreement between the two is meaningful.

#pragma once

#include "hcf/downlink.hpp"
#include "hcf/pilot_estimation.hpp"
#include "hcf/power_control.hpp"
#include "hcf/scenario.hpp"
#include "hcf/uplink.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <utility>
#include <vector>

namespace hcf::testing
{
    struct SmallShape
    {
        int cbs_antennas = 4;
        int num_eaps = 2;
        int eap_antennas = 2;
        int users = 4;
        int pilots = 2;
        double radius_m = 150.0;
    };

    inline ScenarioConfig small_config(const SmallShape &shape)
    {
        Architecture arch = Architecture::Hcf;
        if (shape.num_eaps == 0)
            arch = Architecture::Cellular;
        else if (shape.cbs_antennas == 0)
            arch = Architecture::CellFree;
        return build_scenario(ScenarioPreset::Micro, arch, [&](ScenarioConfig &c) {
            c.cbs_antennas = shape.cbs_antennas;
            c.num_eaps = shape.num_eaps;
            c.eap_antennas = shape.eap_antennas;
            c.total_antennas = shape.cbs_antennas + shape.num_eaps * shape.eap_antennas;
            c.num_users = shape.users;
            c.pilot_length = shape.pilots;
            c.coverage_radius_m = shape.radius_m;
        });
    }

    inline std::shared_ptr<const EstimationStatistics> small_instance(const SmallShape &shape, std::uint64_t seed)
    {
        const ScenarioConfig cfg = small_config(shape);
        Rng rng(seed);
        const Placement placement = sample_placement(cfg, rng);
        return std::make_shared<EstimationStatistics>(
            build_link_correlations(cfg, placement), assign_pilots(shape.users, shape.pilots),
            TrainingParams{cfg.ue_power_w, cfg.pilot_length, cfg.noise_power_w()});
    }

    inline std::vector<std::vector<CVector>> draw_all(const EstimationStatistics &s, Rng &rng,
                                               const std::vector<std::vector<CMatrix>> &roots)
    {
        std::vector<std::vector<CVector>> h(s.node_count());
        for (int n = 0; n < s.node_count(); ++n)
            for (int k = 0; k < s.user_count(); ++k)
                h[n].push_back(draw_channel(roots[n][k], rng));
        return h;
    }

    inline std::vector<std::vector<CMatrix>> roots_of(const EstimationStatistics &s)
    {
        std::vector<std::vector<CMatrix>> roots(s.node_count());
        for (int n = 0; n < s.node_count(); ++n)
            for (int k = 0; k < s.user_count(); ++k)
                roots[n].push_back(hermitian_sqrt(s.correlation(n, k)));
        return roots;
    }

    inline double rel_err(double a, double b)
    {
        return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min());
    }

    inline CMatrix direct_gamma(const EstimationStatistics &s, int n, int k)
    {
        const auto &p = s.params();
        const CMatrix &r = s.correlation(n, k);
        CMatrix g = p.noise_power_w * CMatrix::Identity(r.rows(), r.cols());
        for (int j : s.pilots().coset(k))
            g += p.ue_power_w * p.pilot_length * s.correlation(n, j);
        return g;
    }

    inline CMatrix direct_theta(const EstimationStatistics &s, int n, int k)
    {
        const auto &p = s.params();
        const CMatrix &r = s.correlation(n, k);
        return r - p.ue_power_w * p.pilot_length * r * direct_gamma(s, n, k).inverse() * r;
    }

    // Uplink SINR in the co-located matrix form: every node's estimate is
    // stacked into one long vector and Theta becomes block diagonal.
    inline RVector ul_sinr_stacked(const EstimationSet &est, const RVector &eta)
    {
        const auto &s = *est.stats;
        const int users = est.user_count();
        const int nodes = est.node_count();
        Eigen::Index dim = 0;
        for (int n = 0; n < nodes; ++n)
            dim += est.h_hat[n][0].size();

        std::vector<CVector> g(users, CVector::Zero(dim));
        std::vector<CMatrix> theta(users, CMatrix::Zero(dim, dim));
        for (int k = 0; k < users; ++k)
        {
            Eigen::Index off = 0;
            for (int n = 0; n < nodes; ++n)
            {
                const Eigen::Index m = est.h_hat[n][k].size();
                g[k].segment(off, m) = est.h_hat[n][k];
                theta[k].block(off, off, m, m) = direct_theta(s, n, k);
                off += m;
            }
        }

        const double noise = s.params().noise_power_w / s.params().ue_power_w;
        RVector out(users);
        for (int k = 0; k < users; ++k)
        {
            CMatrix mid = noise * CMatrix::Identity(dim, dim);
            for (int j = 0; j < users; ++j)
            {
                mid += eta(j) * theta[j];
                if (j != k)
                    mid += eta(j) * g[j] * g[j].adjoint();
            }
            const double energy = g[k].squaredNorm();
            out(k) = eta(k) * energy * energy / (g[k].adjoint() * mid * g[k]).value().real();
        }
        return out;
    }

    // Uplink SINR in the distributed per-node sum form.
    inline RVector ul_sinr_sum_form(const EstimationSet &est, const RVector &eta)
    {
        const auto &s = *est.stats;
        const int users = est.user_count();
        const int nodes = est.node_count();
        const double noise = s.params().noise_power_w / s.params().ue_power_w;
        RVector out(users);
        for (int k = 0; k < users; ++k)
        {
            double energy = 0.0;
            for (int n = 0; n < nodes; ++n)
                energy += est.h_hat[n][k].squaredNorm();
            double denom = noise * energy;
            for (int j = 0; j < users; ++j)
            {
                double err = 0.0;
                Complex coherent = 0.0;
                for (int n = 0; n < nodes; ++n)
                {
                    err += (est.h_hat[n][k].adjoint() * direct_theta(s, n, j) * est.h_hat[n][k]).value().real();
                    coherent += est.h_hat[n][k].dot(est.h_hat[n][j]);
                }
                denom += eta(j) * err;
                if (j != k)
                    denom += eta(j) * std::norm(coherent);
            }
            out(k) = eta(k) * energy * energy / denom;
        }
        return out;
    }

    struct DirectTraces
    {
        double self;     // tr(R_k' Gamma^{-1} R_k')
        Complex cross;   // tr(R_k Gamma_k'^{-1} R_k')
        double spill;    // tr(R_k R_k' Gamma_k'^{-1} R_k')
    };

    inline DirectTraces direct_traces(const EstimationStatistics &s, int n, int k, int kp)
    {
        const CMatrix gi = direct_gamma(s, n, kp).inverse();
        const CMatrix &rk = s.correlation(n, k);
        const CMatrix &rj = s.correlation(n, kp);
        return {(rj * gi * rj).trace().real(), (rk * gi * rj).trace(), (rk * rj * gi * rj).trace().real()};
    }

    // Downlink SINR with power coefficients eta = nu^2, written out term by
    // term in the long form. With `cross_node` set, coherent interference
    // from pilot-sharing users is combined across nodes before squaring,
    // which is what the physical transmit chain produces.
    inline RVector dl_sinr_long_form(const EstimationStatistics &s, const RMatrix &eta, bool cross_node = false)
    {
        const int users = s.user_count();
        const int nodes = s.node_count();
        const double pt = s.params().ue_power_w * s.params().pilot_length;
        RVector out(users);
        for (int k = 0; k < users; ++k)
        {
            double amp = 0.0;
            double denom = s.params().noise_power_w;
            for (int n = 0; n < nodes; ++n)
            {
                const double p = s.links().nodes[n].power_w;
                amp += std::sqrt(p * eta(k, n) * pt * direct_traces(s, n, k, k).self);
            }
            for (int j = 0; j < users; ++j)
            {
                Complex coherent = 0.0;
                double coherent_sq = 0.0;
                for (int n = 0; n < nodes; ++n)
                {
                    const double p = s.links().nodes[n].power_w;
                    const DirectTraces t = direct_traces(s, n, k, j);
                    denom += p * eta(j, n) * t.spill / t.self;
                    if (j != k && s.pilots().shares_pilot(j, k))
                    {
                        const Complex b = std::sqrt(p * eta(j, n) * pt / t.self) * t.cross;
                        coherent += b;
                        coherent_sq += std::norm(b);
                    }
                }
                denom += cross_node ? std::norm(coherent) : coherent_sq;
            }
            out(k) = amp * amp / denom;
        }
        return out;
    }

    // Single-array and distributed-AP forms with the noise divided by the
    // node power, zeta are power fractions.
    inline RVector dl_sinr_cellular_form(const EstimationStatistics &s, const RVector &zeta)
    {
        const int users = s.user_count();
        const double pt = s.params().ue_power_w * s.params().pilot_length;
        const double pc = s.links().nodes[0].power_w;
        RVector out(users);
        for (int k = 0; k < users; ++k)
        {
            double denom = s.params().noise_power_w / pc;
            for (int j = 0; j < users; ++j)
            {
                const DirectTraces t = direct_traces(s, 0, k, j);
                if (j != k && s.pilots().shares_pilot(j, k))
                    denom += zeta(j) * pt * std::norm(t.cross) / t.self;
                denom += zeta(j) * t.spill / t.self;
            }
            out(k) = pt * zeta(k) * direct_traces(s, 0, k, k).self / denom;
        }
        return out;
    }

    inline RVector dl_sinr_cf_form(const EstimationStatistics &s, const RMatrix &zeta)
    {
        const int users = s.user_count();
        const int aps = s.node_count();
        const double pt = s.params().ue_power_w * s.params().pilot_length;
        const double pa = s.links().nodes[0].power_w;
        RVector out(users);
        for (int k = 0; k < users; ++k)
        {
            double amp = 0.0;
            double denom = s.params().noise_power_w / pa;
            for (int a = 0; a < aps; ++a)
            {
                amp += std::sqrt(zeta(k, a) * direct_traces(s, a, k, k).self);
                for (int j = 0; j < users; ++j)
                {
                    const DirectTraces t = direct_traces(s, a, k, j);
                    if (j != k && s.pilots().shares_pilot(j, k))
                        denom += zeta(j, a) * pt * std::norm(t.cross) / t.self;
                    denom += zeta(j, a) * t.spill / t.self;
                }
            }
            out(k) = pt * amp * amp / denom;
        }
        return out;
    }

    // Best min-SINR over a uniform grid of eta in [0,1]^2, then refined by
    // repeatedly re-gridding a shrinking box around the incumbent. Returns
    // {coarse, refined}.
    inline std::pair<double, double> ul_grid_maxmin(const UplinkCoefficients &c, int points = 200)
    {
        const auto min_sinr = [&](double e0, double e1) {
            RVector eta(2);
            eta << e0, e1;
            return ul_sinr(c, eta).minCoeff();
        };
        double best = -1.0, b0 = 0.0, b1 = 0.0;
        for (int i = 1; i <= points; ++i)
            for (int j = 1; j <= points; ++j)
            {
                const double v = min_sinr(double(i) / points, double(j) / points);
                if (v > best)
                    best = v, b0 = double(i) / points, b1 = double(j) / points;
            }
        const double coarse = best;
        double half = 2.0 / points;
        for (int round = 0; round < 12; ++round, half /= 5.0)
        {
            const double c0 = b0, c1 = b1;
            for (int i = -10; i <= 10; ++i)
                for (int j = -10; j <= 10; ++j)
                {
                    const double e0 = std::clamp(c0 + half * i / 10.0, 0.0, 1.0);
                    const double e1 = std::clamp(c1 + half * j / 10.0, 0.0, 1.0);
                    const double v = min_sinr(e0, e1);
                    if (v > best)
                        best = v, b0 = e0, b1 = e1;
                }
        }
        // Scaling eta up by t > 1 never lowers a user's SINR, so the optimum
        // lies on a face eta_i = 1. The optimum sits on a narrow ridge the 2-D
        // zoom can miss, hence a dense 1-D sweep of both faces as well.
        for (int face = 0; face < 2; ++face)
        {
            const auto on_face = [&](double t) { return face == 0 ? min_sinr(1.0, t) : min_sinr(t, 1.0); };
            const int steps = 20000;
            double bt = 0.0, fb = -1.0;
            for (int i = 0; i <= steps; ++i)
                if (const double v = on_face(double(i) / steps); v > fb)
                    fb = v, bt = double(i) / steps;
            double width = 1.0 / steps;
            for (int round = 0; round < 20; ++round, width /= 4.0)
            {
                const double centre = bt;
                for (int i = -8; i <= 8; ++i)
                {
                    const double t = std::clamp(centre + width * i / 8.0, 0.0, 1.0);
                    if (const double v = on_face(t); v > fb)
                        fb = v, bt = t;
                }
            }
            best = std::max(best, fb);
        }
        return {coarse, best};
    }

    // Is some grid point at least `target` for both users?
    inline bool ul_grid_feasible(const UplinkCoefficients &c, double target, int points = 200)
    {
        RVector eta(2);
        for (int i = 0; i <= points; ++i)
            for (int j = 0; j <= points; ++j)
            {
                eta << double(i) / points, double(j) / points;
                if (ul_sinr(c, eta).minCoeff() >= target)
                    return true;
            }
        return false;
    }

    // Min over users of the coefficient-form downlink SINR for K = 2 users
    // and two nodes, evaluated by hand. nu = {nu(0,0), nu(1,0), nu(0,1), nu(1,1)}.
    struct DlPair
    {
        double amp[2][2];    // [user][node]
        double weight[2][4]; // [user][nu index]
        double noise;

        explicit DlPair(const DownlinkCoefficients &c)
        {
            noise = c.noise_power_w;
            for (int k = 0; k < 2; ++k)
            {
                const RMatrix w = c.interference_weights(k);
                for (int n = 0; n < 2; ++n)
                {
                    amp[k][n] = c.amplitude(k, n);
                    for (int j = 0; j < 2; ++j)
                        weight[k][2 * n + j] = w(j, n);
                }
            }
        }

        double min_sinr(const double nu[4]) const
        {
            double worst = std::numeric_limits<double>::infinity();
            for (int k = 0; k < 2; ++k)
            {
                const double a = nu[k] * amp[k][0] + nu[2 + k] * amp[k][1];
                double d = noise;
                for (int i = 0; i < 4; ++i)
                    d += nu[i] * nu[i] * weight[k][i];
                worst = std::min(worst, a * a / d);
            }
            return worst;
        }
    };

    // Downlink grid oracle for K = 2 and two nodes: per node (angle, radius)
    // with nu = radius (cos, sin), which covers the per-node budget disk
    // with `points` values per coordinate (points^4 evaluations). Refined
    // by re-gridding around the incumbent. Returns {coarse, refined}.
    inline std::pair<double, double> dl_grid_maxmin(const DownlinkCoefficients &c, int points = 50)
    {
        const DlPair pair(c);
        const double quarter = 0.5 * std::numbers::pi;
        const auto eval = [&](const double x[4]) {
            double nu[4];
            for (int n = 0; n < 2; ++n)
            {
                nu[2 * n] = x[2 * n + 1] * std::cos(x[2 * n]);
                nu[2 * n + 1] = x[2 * n + 1] * std::sin(x[2 * n]);
            }
            return pair.min_sinr(nu);
        };

        double best = -1.0;
        double arg[4] = {0, 0, 0, 0};
        double x[4];
        for (int a = 0; a < points; ++a)
            for (int ra = 1; ra <= points; ++ra)
                for (int b = 0; b < points; ++b)
                    for (int rb = 1; rb <= points; ++rb)
                    {
                        x[0] = quarter * a / (points - 1);
                        x[1] = double(ra) / points;
                        x[2] = quarter * b / (points - 1);
                        x[3] = double(rb) / points;
                        const double v = eval(x);
                        if (v > best)
                        {
                            best = v;
                            std::copy(x, x + 4, arg);
                        }
                    }
        const double coarse = best;

        double half[4] = {2.0 * quarter / (points - 1), 2.0 / points, 2.0 * quarter / (points - 1), 2.0 / points};
        const double upper[4] = {quarter, 1.0, quarter, 1.0};
        for (int round = 0; round < 12; ++round)
        {
            double centre[4];
            std::copy(arg, arg + 4, centre);
            for (int i0 = -4; i0 <= 4; ++i0)
                for (int i1 = -4; i1 <= 4; ++i1)
                    for (int i2 = -4; i2 <= 4; ++i2)
                        for (int i3 = -4; i3 <= 4; ++i3)
                        {
                            const int off[4] = {i0, i1, i2, i3};
                            for (int d = 0; d < 4; ++d)
                                x[d] = std::clamp(centre[d] + half[d] * off[d] / 4.0, 0.0, upper[d]);
                            const double v = eval(x);
                            if (v > best)
                            {
                                best = v;
                                std::copy(x, x + 4, arg);
                            }
                        }
            for (double &h : half)
                h /= 3.0;
        }
        return {coarse, best};
    }
}
