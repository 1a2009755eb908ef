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

#include "hcf/power_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hcf
{
    void BisectionSettings::validate() const
    {
        if (!(epsilon > 0.0))
            throw DomainError("bisection epsilon must be positive");
        if (!(feasibility_tolerance >= 0.0) || feasibility_tolerance > epsilon / 10.0)
            throw DomainError("feasibility tolerance must lie in [0, epsilon / 10]");
        if (max_iters < 1 || inner_max_iters < 1)
            throw DomainError("iteration caps must be positive");
    }

    int bisection_steps(double low, double high, double epsilon)
    {
        if (!(high - low > epsilon))
            return 0;
        return static_cast<int>(std::ceil(std::log2((high - low) / epsilon)));
    }

    namespace
    {
        [[noreturn]] void too_many_steps(const char *who, double low, double high, int steps, int cap)
        {
            std::ostringstream os;
            os << who << ": bracket [" << low << ", " << high << "] needs " << steps << " steps, cap is " << cap;
            throw SolverError(os.str());
        }
    }

    // ------------------------------------------------------------------------
    // Uplink

    std::optional<RVector> ul_feasibility(double target, const UplinkCoefficients &coeffs)
    {
        const int users = coeffs.user_count();
        if (!(target >= 0.0) || !std::isfinite(target))
            throw DomainError("ul_feasibility: target must be finite and nonnegative");
        if (target == 0.0)
            return RVector::Zero(users);

        RMatrix system = -target * coeffs.interference;
        RVector rhs = target * coeffs.noise;
        for (int k = 0; k < users; ++k)
        {
            const double d = coeffs.signal[k] - target * coeffs.interference(k, k);
            if (!(d > 0.0) || !(coeffs.noise[k] > 0.0))
                return std::nullopt;
            system(k, k) = d;
        }
        // Row-scale to I - B with B >= 0 and b > 0: a positive solution exists
        // iff rho(B) < 1, and it is then the minimal one.
        for (int k = 0; k < users; ++k)
        {
            const double d = system(k, k);
            system.row(k) /= d;
            rhs[k] /= d;
        }
        RVector eta = system.partialPivLu().solve(rhs);
        constexpr double slack = 1e-9;
        for (int k = 0; k < users; ++k)
            if (!std::isfinite(eta[k]) || !(eta[k] > 0.0) || eta[k] > 1.0 + slack)
                return std::nullopt;
        return eta.cwiseMin(1.0).eval();
    }

    PowerAllocation maxmin_uplink(const UplinkCoefficients &coeffs, const BisectionSettings &settings,
                                  const SolverTrace &trace)
    {
        settings.validate();
        const int users = coeffs.user_count();
        if (users < 1)
            throw DomainError("maxmin_uplink: no users");

        const RVector full = RVector::Ones(users);
        double low = ul_sinr(coeffs, full).minCoeff();
        RVector best = ul_feasibility(low, coeffs).value_or(full);

        double high = 0.0;
        for (int k = 0; k < users; ++k)
            high = std::max(high, coeffs.signal[k] / coeffs.noise[k]);
        high = std::max(high, low);

        const int steps = bisection_steps(low, high, settings.epsilon);
        if (steps > settings.max_iters)
            too_many_steps("maxmin_uplink", low, high, steps, settings.max_iters);

        for (int t = 0; t < steps; ++t)
        {
            const double target = 0.5 * (low + high);
            auto eta = ul_feasibility(target, coeffs);
            if (trace)
                trace({"maxmin_uplink", t, low, high, target, eta.has_value(), 0});
            if (eta)
            {
                low = target;
                best = std::move(*eta);
            }
            else
                high = target;
        }

        PowerAllocation out;
        out.eta = std::move(best);
        out.achieved_target = low;
        out.bracket_high = high;
        out.iterations = steps;
        return out;
    }

    // ------------------------------------------------------------------------
    // Downlink

    namespace
    {
        // Normalized problem data: amplitudes and weights divided by sigma and
        // sigma^2, interference weights stacked as rows of W so that
        // q = W vec(nu .^ 2) + 1.
        struct DlProblem
        {
            int users = 0;
            int nodes = 0;
            RMatrix a;       // K x nodes
            RMatrix w;       // K x (K * nodes)
            RVector scale;   // per-user residual normalization
            double root_target = 0.0;
            double delta = 0.0;

            DlProblem(const DownlinkCoefficients &c, double target, double delta_)
                : users(c.user_count()), nodes(c.node_count()), root_target(std::sqrt(target)), delta(delta_)
            {
                const double sigma = std::sqrt(c.noise_power_w);
                a = c.amplitude / sigma;
                w.resize(users, static_cast<Eigen::Index>(users) * nodes);
                for (int k = 0; k < users; ++k)
                {
                    const RMatrix wk = c.interference_weights(k) / c.noise_power_w;
                    w.row(k) = Eigen::Map<const RVector>(wk.data(), wk.size()).transpose();
                }
                scale.resize(users);
                for (int k = 0; k < users; ++k)
                    scale[k] = std::max(a.row(k).norm(), 1e-12);
            }

            RVector quad(const RMatrix &nu) const
            {
                const RMatrix sq = nu.array().square();
                return (w * Eigen::Map<const RVector>(sq.data(), sq.size())).array() + 1.0;
            }

            // Residuals h_k(nu).
            RVector residuals(const RMatrix &nu, const RVector &q) const
            {
                return root_target * q.array().sqrt() - (a.array() * nu.array()).rowwise().sum();
            }

            double penalty(const RMatrix &nu) const
            {
                const RVector h = residuals(nu, quad(nu));
                return 0.5 * ((h.array() + delta).max(0.0) / scale.array()).square().sum();
            }

            double penalty_and_gradient(const RMatrix &nu, RMatrix &grad, double &worst) const
            {
                const RVector q = quad(nu);
                const RVector h = residuals(nu, q);
                worst = h.maxCoeff();
                const RVector r = (h.array() + delta).max(0.0) / scale.array().square();
                const RVector u = (r.array() * root_target / q.array().sqrt()).matrix();
                const RVector back = w.transpose() * u;
                grad = nu.array() * Eigen::Map<const RMatrix>(back.data(), users, nodes).array();
                grad -= (a.array().colwise() * r.array()).matrix();
                return 0.5 * ((h.array() + delta).max(0.0) / scale.array()).square().sum();
            }
        };

        void project(RMatrix &nu)
        {
            nu = nu.cwiseMax(0.0);
            for (Eigen::Index n = 0; n < nu.cols(); ++n)
            {
                const double norm = nu.col(n).norm();
                if (norm > 1.0)
                    nu.col(n) /= norm;
            }
        }

        // max over s in the feasible set of <grad, x - s>.
        double frank_wolfe_gap(const RMatrix &x, const RMatrix &grad)
        {
            double gap = (grad.array() * x.array()).sum();
            for (Eigen::Index n = 0; n < grad.cols(); ++n)
            {
                const double neg = grad.col(n).cwiseMin(0.0).norm();
                gap += neg; // <grad_n, s_n> = -||min(grad_n, 0)||
            }
            return gap;
        }
    }

    DownlinkFeasibility dl_soc_feasibility(double target, const DownlinkCoefficients &coeffs, const RMatrix &start,
                                           const BisectionSettings &settings)
    {
        settings.validate();
        if (!(target >= 0.0) || !std::isfinite(target))
            throw DomainError("dl_soc_feasibility: target must be finite and nonnegative");
        const int users = coeffs.user_count();
        const int nodes = coeffs.node_count();
        if (start.rows() != users || start.cols() != nodes)
            throw DomainError("dl_soc_feasibility: start point has the wrong shape");

        const DlProblem prob(coeffs, target, settings.feasibility_tolerance);
        const double delta = settings.feasibility_tolerance;

        DownlinkFeasibility out;
        RMatrix x = start;
        project(x);
        RMatrix grad(users, nodes), grad_y(users, nodes);
        double worst = 0.0;
        double fx = prob.penalty_and_gradient(x, grad, worst);
        if (worst <= -delta)
        {
            out.feasible = true;
            out.certified = true;
            out.nu = std::move(x);
            return out;
        }

        RMatrix y = x, x_new(users, nodes);
        double momentum = 1.0;
        double lipschitz = 1.0;
        constexpr int check_every = 10;

        for (int it = 1; it <= settings.inner_max_iters; ++it)
        {
            double worst_y = 0.0;
            const double fy = prob.penalty_and_gradient(y, grad_y, worst_y);
            lipschitz *= 0.9;
            double fnew = 0.0;
            for (int bt = 0; bt < 60; ++bt)
            {
                x_new = y - grad_y / lipschitz;
                project(x_new);
                const RMatrix step = x_new - y;
                fnew = prob.penalty(x_new);
                if (fnew <= fy + (grad_y.array() * step.array()).sum() + 0.5 * lipschitz * step.squaredNorm() + 1e-300)
                    break;
                lipschitz *= 2.0;
            }

            const double next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
            if (fnew > fx)
            {
                // Function-value restart.
                momentum = 1.0;
                y = x;
                continue;
            }
            y = x_new + ((momentum - 1.0) / next) * (x_new - x);
            momentum = next;
            x = x_new;
            out.iterations = it;

            fx = prob.penalty_and_gradient(x, grad, worst);
            if (worst <= -delta)
            {
                out.feasible = true;
                out.certified = true;
                out.nu = std::move(x);
                return out;
            }
            if (it % check_every == 0 && fx - frank_wolfe_gap(x, grad) > 0.0)
            {
                out.certified = true;
                out.nu = std::move(x);
                return out;
            }
        }
        out.nu = std::move(x);
        return out;
    }

    PowerAllocation maxmin_downlink(const DownlinkCoefficients &coeffs, const BisectionSettings &settings,
                                    const SolverTrace &trace)
    {
        settings.validate();
        const int users = coeffs.user_count();
        const int nodes = coeffs.node_count();
        if (users < 1 || nodes < 1)
            throw DomainError("maxmin_downlink: empty instance");

        RMatrix best = dl_equal_power(users, nodes);
        double low = dl_sinr(coeffs, best).minCoeff();
        double high = 0.0;
        for (int k = 0; k < users; ++k)
        {
            const double s = coeffs.amplitude.row(k).sum();
            high = std::max(high, s * s / coeffs.noise_power_w);
        }
        high = std::max(high, low);

        const int steps = bisection_steps(low, high, settings.epsilon);
        if (steps > settings.max_iters)
            too_many_steps("maxmin_downlink", low, high, steps, settings.max_iters);

        for (int t = 0; t < steps; ++t)
        {
            const double target = 0.5 * (low + high);
            DownlinkFeasibility f = dl_soc_feasibility(target, coeffs, best, settings);
            if (trace)
                trace({"maxmin_downlink", t, low, high, target, f.feasible, f.iterations});
            if (f.feasible)
            {
                low = target;
                best = std::move(f.nu);
            }
            else
                high = target;
        }

        PowerAllocation out;
        out.nu = std::move(best);
        out.achieved_target = low;
        out.bracket_high = high;
        out.iterations = steps;
        return out;
    }

    // ------------------------------------------------------------------------

    double uplink_power_saving(const RVector &eta, const RVector &baseline)
    {
        if (eta.size() != baseline.size() || eta.size() == 0)
            throw DomainError("uplink_power_saving: allocations differ in size");
        const double base = baseline.mean();
        if (!(base > 0.0))
            throw DomainError("uplink_power_saving: zero baseline");
        return 1.0 - eta.mean() / base;
    }

    PowerSaving downlink_power_saving(const RMatrix &nu, const RMatrix &baseline, const std::vector<NodeSpec> &nodes)
    {
        if (nu.rows() != baseline.rows() || nu.cols() != baseline.cols() ||
            nu.cols() != static_cast<Eigen::Index>(nodes.size()))
            throw DomainError("downlink_power_saving: allocations differ in shape");
        PowerSaving s;
        int edges = 0;
        for (Eigen::Index n = 0; n < nu.cols(); ++n)
        {
            const double base = baseline.col(n).squaredNorm();
            if (!(base > 0.0))
                throw DomainError("downlink_power_saving: zero baseline at node " + std::to_string(n));
            const double saving = 1.0 - nu.col(n).squaredNorm() / base;
            if (nodes[n].kind == NodeKind::Central)
            {
                s.central = saving;
                s.has_central = true;
            }
            else
            {
                s.edge_mean += saving;
                ++edges;
            }
        }
        if (edges > 0)
        {
            s.edge_mean /= edges;
            s.has_edges = true;
        }
        return s;
    }
}
