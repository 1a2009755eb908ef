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

// Command-line front end. Uses only the C interface of libhcf.

#include "hcf/hcf.h"

#include <cstdio>

namespace
{
    int exit_code(hcf_status s)
    {
        switch (s)
        {
        case HCF_OK:
        case HCF_HELP:
            return 0;
        case HCF_ERR_USAGE:
        case HCF_ERR_CONFIG:
        case HCF_ERR_ARGUMENT:
            return 2;
        case HCF_ERR_IO:
            return 4;
        default:
            return 3;
        }
    }

    int report(hcf_status s)
    {
        std::fprintf(stderr, "hcfsim: %s: %s\n", hcf_status_name(s), hcf_last_error());
        return exit_code(s);
    }
}

int main(int argc, char **argv)
{
    hcf_experiment *exp = nullptr;
    hcf_status s = hcf_experiment_from_args(argc, argv, &exp);
    if (s == HCF_HELP)
    {
        std::fputs(hcf_experiment_help(exp), stdout);
        hcf_experiment_free(exp);
        return 0;
    }
    if (s != HCF_OK)
        return report(s);

    hcf_result *res = nullptr;
    s = hcf_run(exp, &res);
    if (s != HCF_OK)
    {
        hcf_experiment_free(exp);
        return report(s);
    }

    s = hcf_result_write(res, hcf_experiment_out_dir(exp), hcf_experiment_emit_format(exp));
    if (s != HCF_OK)
    {
        hcf_result_free(res);
        hcf_experiment_free(exp);
        return report(s);
    }

    double rate = 0.0, med = 0.0;
    long checks = 0, violations = 0;
    hcf_result_likely_rate(res, 0.95, &rate);
    hcf_result_median(res, &med);
    hcf_result_dominance(res, &checks, &violations);
    std::printf("epochs %zu, samples %zu, 95%%-likely %.4f bps/Hz, median %.4f bps/Hz", hcf_result_epoch_count(res),
                hcf_result_sample_count(res), rate, med);
    if (checks > 0)
        std::printf(", max-min below baseline in %ld of %ld checks", violations, checks);
    std::printf("\nwrote %s\n", hcf_experiment_out_dir(exp));

    hcf_result_free(res);
    hcf_experiment_free(exp);
    return 0;
}
