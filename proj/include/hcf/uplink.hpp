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

namespace hcf
{
    // Matched-filter uplink SINR in coefficient form:
    //   gamma_k(eta) = eta_k S_k / (sum_k' eta_k' I(k,k') + N_k)
    // The node list may be any mix of one cBS and L eAPs; cellular and
    // cell-free are the two single-kind special cases.
    struct UplinkCoefficients
    {
        RVector signal;       // S_k
        RMatrix interference; // I(k,k')
        RVector noise;        // N_k

        int user_count() const { return static_cast<int>(signal.size()); }
    };

    UplinkCoefficients ul_coefficients(const EstimationSet &est);

    // Same computation; these check that the node layout matches the named
    // architecture and throw DomainError otherwise.
    UplinkCoefficients ul_coeffs_hcf(const EstimationSet &est);
    UplinkCoefficients ul_coeffs_cf(const EstimationSet &est);
    UplinkCoefficients ul_coeffs_cellular(const EstimationSet &est);

    RVector ul_sinr(const UplinkCoefficients &coeffs, const RVector &eta);

    // (1 - tau_p / tau_u) log2(1 + gamma)
    RVector ul_se(const RVector &gamma, int pilot_length, int pilot_norm_length);
}
