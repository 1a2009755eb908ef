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

#include "hcf/channel_model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace hcf
{
    double path_loss_umi_db(double distance_m, double min_distance_m)
    {
        if (!(distance_m >= min_distance_m))
            throw DomainError("path_loss_umi: distance " + std::to_string(distance_m) +
                              " m is below the minimum link distance");
        return -30.5 - 36.7 * std::log10(distance_m);
    }

    double cost_hata_intercept_db(const CostHataParams &params)
    {
        const double lf = std::log10(params.carrier_ghz * 1000.0);
        return 46.3 + 33.9 * lf - 13.82 * std::log10(params.ap_height_m) - (1.1 * lf - 0.7) * params.ue_height_m +
               1.56 * lf - 0.8;
    }

    double path_loss_cost_hata_db(double distance_km, const CostHataParams &params, double min_distance_km)
    {
        if (!(distance_km >= min_distance_km))
            throw DomainError("path_loss_cost_hata: distance " + std::to_string(distance_km) +
                              " km is below the minimum link distance");
        const double l0 = cost_hata_intercept_db(params);
        const double d0 = params.d0_km;
        const double d1 = params.d1_km;
        if (distance_km > d1)
            return -l0 - 35.0 * std::log10(distance_km);
        if (distance_km > d0)
            return -l0 - 10.0 * std::log10(std::pow(d1, 1.5) * distance_km * distance_km);
        return -l0 - 10.0 * std::log10(std::pow(d1, 1.5) * d0 * d0);
    }

    CorrelationMatrix local_scattering_correlation(int antennas, double nominal_angle, double asd, double beta)
    {
        if (antennas < 1 || !(asd > 0.0) || !(beta > 0.0))
            throw DomainError("local_scattering_correlation: need N >= 1, asd > 0, beta > 0");

        const double s = std::sin(nominal_angle);
        const double c = std::cos(nominal_angle);
        // Toeplitz: entry (s, t) depends on s - t only.
        CVector first_column(antennas);
        for (int d = 0; d < antennas; ++d)
        {
            const double phase = std::numbers::pi * d * s;
            const double spread = std::numbers::pi * d * c;
            first_column(d) = beta * std::exp(-0.5 * asd * asd * spread * spread) * std::polar(1.0, phase);
        }

        CorrelationMatrix r;
        r.beta = beta;
        r.entries.resize(antennas, antennas);
        for (int col = 0; col < antennas; ++col)
            for (int row = 0; row < antennas; ++row)
                r.entries(row, col) = row >= col ? first_column(row - col) : std::conj(first_column(col - row));
        return r;
    }

    CMatrix hermitian_sqrt(const CMatrix &r)
    {
        if (r.rows() != r.cols())
            throw DomainError("hermitian_sqrt: matrix is not square");
        const double scale = std::max(r.norm(), std::numeric_limits<double>::min());
        if ((r - r.adjoint()).norm() > 1e-10 * scale)
            throw DomainError("hermitian_sqrt: matrix is not Hermitian");

        Eigen::SelfAdjointEigenSolver<CMatrix> eig(r);
        if (eig.info() != Eigen::Success)
            throw NumericalError("hermitian_sqrt: eigendecomposition failed");

        const double trace = std::abs(r.trace().real());
        RVector lambda = eig.eigenvalues();
        if (lambda.size() > 0 && lambda.minCoeff() < -1e-10 * trace)
            throw DomainError("hermitian_sqrt: matrix is not positive semidefinite");
        lambda = lambda.cwiseMax(0.0).cwiseSqrt();
        return eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().adjoint();
    }

    CVector draw_channel(const CMatrix &sqrt_factor, Rng &rng)
    {
        return sqrt_factor * complex_normal(sqrt_factor.cols(), rng);
    }

    double link_gain_db(const ScenarioConfig &config, double distance_m, double shadow_db)
    {
        const double pl = config.path_loss == PathLossModel::Umi
                              ? path_loss_umi_db(distance_m, config.min_distance_m)
                              : path_loss_cost_hata_db(distance_m / 1000.0, config.cost_hata,
                                                       config.min_distance_m / 1000.0);
        return pl + shadow_db;
    }

    LinkStatistics build_link_correlations(const ScenarioConfig &config, const Placement &placement)
    {
        LinkStatistics stats;
        stats.nodes = node_layout(config);
        const int nodes = stats.node_count();
        const double asd = config.asd_deg * std::numbers::pi / 180.0;

        stats.links.resize(nodes);
        for (int n = 0; n < nodes; ++n)
        {
            const Point origin = placement.node_position(n, config);
            const double orientation = placement.node_orientation(n, config);
            stats.links[n].reserve(config.num_users);
            for (int k = 0; k < config.num_users; ++k)
            {
                const Point &ue = placement.ue_positions[k];
                const double gain_db = link_gain_db(config, distance(origin, ue), placement.shadow_db(n, k));
                const double bearing = std::atan2(ue.y - origin.y, ue.x - origin.x) - orientation;
                stats.links[n].push_back(local_scattering_correlation(stats.nodes[n].antennas, bearing, asd,
                                                                      std::pow(10.0, gain_db / 10.0)));
            }
        }
        return stats;
    }
}
