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

/* C interface of the hcfsim library.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every call that can fail returns an hcf_status;
 * on failure hcf_last_error() describes the problem (thread-local, valid
 * until the next failing call on the same thread). */

#ifndef HCF_HCF_H
#define HCF_HCF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HCF_API __declspec(dllexport)
#else
#define HCF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C"
{
#endif

    typedef enum hcf_status
    {
        HCF_OK = 0,
        HCF_ERR_USAGE = 1,     /* bad command-line flags */
        HCF_ERR_CONFIG = 2,    /* invalid configuration */
        HCF_ERR_GEOMETRY = 3,  /* placement could not be sampled */
        HCF_ERR_DOMAIN = 4,    /* argument outside an operation's domain */
        HCF_ERR_NUMERICAL = 5, /* numerical breakdown */
        HCF_ERR_SOLVER = 6,    /* power-control solver failure */
        HCF_ERR_IO = 7,        /* file system error */
        HCF_ERR_INTERNAL = 8,
        HCF_ERR_ARGUMENT = 9,  /* null pointer or similar API misuse */
        HCF_HELP = 10          /* --help or --version was requested */
    } hcf_status;

    typedef struct hcf_experiment hcf_experiment;
    typedef struct hcf_result hcf_result;

    HCF_API const char *hcf_version(void);
    HCF_API const char *hcf_last_error(void);
    HCF_API const char *hcf_status_name(hcf_status status);

    /* Strings returned through char ** are heap copies; release them with
     * hcf_string_free. */
    HCF_API void hcf_string_free(char *s);

    /* Experiment construction. hcf_experiment_from_args returns HCF_HELP with
     * a valid handle whose hcf_experiment_help() text should be printed. */
    HCF_API hcf_status hcf_experiment_from_args(int argc, const char *const *argv, hcf_experiment **out);
    HCF_API hcf_status hcf_experiment_from_json(const char *json, hcf_experiment **out);
    HCF_API hcf_status hcf_experiment_preset(const char *preset, const char *architecture, const char *link,
                                             const char *power, hcf_experiment **out);
    HCF_API void hcf_experiment_free(hcf_experiment *exp);

    HCF_API const char *hcf_experiment_help(const hcf_experiment *exp);
    HCF_API const char *hcf_experiment_out_dir(const hcf_experiment *exp);
    HCF_API const char *hcf_experiment_emit_format(const hcf_experiment *exp);
    HCF_API hcf_status hcf_experiment_set_epochs(hcf_experiment *exp, int epochs);
    HCF_API hcf_status hcf_experiment_set_seed(hcf_experiment *exp, uint64_t seed);
    HCF_API hcf_status hcf_experiment_set_threads(hcf_experiment *exp, int threads);
    HCF_API hcf_status hcf_experiment_to_json(const hcf_experiment *exp, char **out);

    /* Running and inspecting results. */
    HCF_API hcf_status hcf_run(const hcf_experiment *exp, hcf_result **out);
    HCF_API void hcf_result_free(hcf_result *res);

    HCF_API size_t hcf_result_epoch_count(const hcf_result *res);
    HCF_API size_t hcf_result_sample_count(const hcf_result *res);
    /* Copies min(capacity, sample count) per-user SE samples in epoch-major
     * order. */
    HCF_API hcf_status hcf_result_samples(const hcf_result *res, double *buffer, size_t capacity);
    HCF_API hcf_status hcf_result_likely_rate(const hcf_result *res, double level, double *out);
    HCF_API hcf_status hcf_result_median(const hcf_result *res, double *out);
    HCF_API hcf_status hcf_result_dominance(const hcf_result *res, long *checks, long *violations);
    HCF_API hcf_status hcf_result_summary_json(const hcf_result *res, char **out);

    /* format: "csv", "json" or "both" (NULL means both). */
    HCF_API hcf_status hcf_result_write(const hcf_result *res, const char *dir, const char *format);

#ifdef __cplusplus
}
#endif

#endif
