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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace hcf
{
    using Complex = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;
    using RMatrix = Eigen::MatrixXd;
    using RVector = Eigen::VectorXd;

    // All randomness in the simulator flows through explicitly seeded streams.
    using Rng = std::mt19937_64;

    struct Point
    {
        double x = 0.0;
        double y = 0.0;
    };

    inline double distance(const Point &a, const Point &b)
    {
        return std::hypot(a.x - b.x, a.y - b.y);
    }

    // Error hierarchy. Each subclass maps to one status code of the C API.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Scenario parameters violate an invariant (message names the constraint).
    class ConfigError : public Error
    {
    public:
        using Error::Error;
    };

    // Placement sampling could not satisfy the minimum link distance.
    class GeometryError : public Error
    {
    public:
        using Error::Error;
    };

    // A function was called outside its mathematical domain.
    class DomainError : public Error
    {
    public:
        using Error::Error;
    };

    // Inputs produced numerically inconsistent intermediate values.
    class NumericalError : public Error
    {
    public:
        using Error::Error;
    };

    // Bisection exceeded its iteration cap; the message carries the bracket.
    class SolverError : public Error
    {
    public:
        using Error::Error;
    };

    class IoError : public Error
    {
    public:
        using Error::Error;
    };

    class UsageError : public Error
    {
    public:
        using Error::Error;
    };

    // Draws a circularly-symmetric complex Gaussian vector with the given
    // per-entry variance.
    inline CVector complex_normal(Eigen::Index n, Rng &rng, double variance = 1.0)
    {
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * variance));
        CVector v(n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            v(i) = Complex(re, im);
        }
        return v;
    }

    // tr(A * B) in O(n^2) without forming the product.
    inline Complex trace_of_product(const CMatrix &a, const CMatrix &b)
    {
        return (a.array() * b.transpose().array()).sum();
    }
}
