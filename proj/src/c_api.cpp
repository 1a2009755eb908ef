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

#include "hcf/hcf.h"

#include "hcf/harness.hpp"
#include "hcf/io.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

struct hcf_experiment
{
    hcf::CliOptions options;
};

struct hcf_result
{
    hcf::ExperimentResult result;
};

namespace
{
    thread_local std::string last_error;

    hcf_status fail(hcf_status status, const std::string &message)
    {
        last_error = message;
        return status;
    }

    // Runs `body`, translating the C++ error hierarchy into status codes.
    template <class F>
    hcf_status guarded(F &&body)
    {
        try
        {
            return body();
        }
        catch (const hcf::UsageError &e)
        {
            return fail(HCF_ERR_USAGE, e.what());
        }
        catch (const hcf::ConfigError &e)
        {
            return fail(HCF_ERR_CONFIG, e.what());
        }
        catch (const hcf::GeometryError &e)
        {
            return fail(HCF_ERR_GEOMETRY, e.what());
        }
        catch (const hcf::DomainError &e)
        {
            return fail(HCF_ERR_DOMAIN, e.what());
        }
        catch (const hcf::NumericalError &e)
        {
            return fail(HCF_ERR_NUMERICAL, e.what());
        }
        catch (const hcf::SolverError &e)
        {
            return fail(HCF_ERR_SOLVER, e.what());
        }
        catch (const hcf::IoError &e)
        {
            return fail(HCF_ERR_IO, e.what());
        }
        catch (const std::bad_alloc &)
        {
            return fail(HCF_ERR_INTERNAL, "out of memory");
        }
        catch (const std::exception &e)
        {
            return fail(HCF_ERR_INTERNAL, e.what());
        }
        catch (...)
        {
            return fail(HCF_ERR_INTERNAL, "unknown error");
        }
    }

    char *copy_string(const std::string &s)
    {
        char *out = static_cast<char *>(std::malloc(s.size() + 1));
        if (!out)
            throw std::bad_alloc();
        std::memcpy(out, s.c_str(), s.size() + 1);
        return out;
    }

    hcf_status null_argument()
    {
        return fail(HCF_ERR_ARGUMENT, "null argument");
    }
}

extern "C"
{
    const char *hcf_version(void)
    {
        return hcf::kToolVersion;
    }

    const char *hcf_last_error(void)
    {
        return last_error.c_str();
    }

    const char *hcf_status_name(hcf_status status)
    {
        switch (status)
        {
        case HCF_OK:
            return "ok";
        case HCF_ERR_USAGE:
            return "usage error";
        case HCF_ERR_CONFIG:
            return "configuration error";
        case HCF_ERR_GEOMETRY:
            return "geometry error";
        case HCF_ERR_DOMAIN:
            return "domain error";
        case HCF_ERR_NUMERICAL:
            return "numerical error";
        case HCF_ERR_SOLVER:
            return "solver error";
        case HCF_ERR_IO:
            return "I/O error";
        case HCF_ERR_INTERNAL:
            return "internal error";
        case HCF_ERR_ARGUMENT:
            return "invalid argument";
        case HCF_HELP:
            return "help requested";
        }
        return "unknown status";
    }

    void hcf_string_free(char *s)
    {
        std::free(s);
    }

    hcf_status hcf_experiment_from_args(int argc, const char *const *argv, hcf_experiment **out)
    {
        if (!out || (argc > 0 && !argv))
            return null_argument();
        *out = nullptr;
        return guarded([&] {
            auto exp = std::make_unique<hcf_experiment>();
            exp->options = hcf::parse_cli(argc, argv);
            const bool help = exp->options.help;
            *out = exp.release();
            return help ? HCF_HELP : HCF_OK;
        });
    }

    hcf_status hcf_experiment_from_json(const char *json, hcf_experiment **out)
    {
        if (!json || !out)
            return null_argument();
        *out = nullptr;
        return guarded([&] {
            auto exp = std::make_unique<hcf_experiment>();
            exp->options.spec = hcf::spec_from_json(json);
            *out = exp.release();
            return HCF_OK;
        });
    }

    hcf_status hcf_experiment_preset(const char *preset, const char *architecture, const char *link,
                                     const char *power, hcf_experiment **out)
    {
        if (!preset || !architecture || !link || !power || !out)
            return null_argument();
        *out = nullptr;
        return guarded([&] {
            auto exp = std::make_unique<hcf_experiment>();
            exp->options.spec = hcf::make_experiment(hcf::parse_preset(preset), hcf::parse_architecture(architecture),
                                                     hcf::parse_link(link), hcf::parse_power_mode(power));
            *out = exp.release();
            return HCF_OK;
        });
    }

    void hcf_experiment_free(hcf_experiment *exp)
    {
        delete exp;
    }

    const char *hcf_experiment_help(const hcf_experiment *exp)
    {
        return exp ? exp->options.help_text.c_str() : "";
    }

    const char *hcf_experiment_out_dir(const hcf_experiment *exp)
    {
        return exp ? exp->options.out_dir.c_str() : "";
    }

    const char *hcf_experiment_emit_format(const hcf_experiment *exp)
    {
        return exp ? hcf::to_string(exp->options.emit).data() : "";
    }

    hcf_status hcf_experiment_set_epochs(hcf_experiment *exp, int epochs)
    {
        if (!exp)
            return null_argument();
        if (epochs < 1)
            return fail(HCF_ERR_CONFIG, "epochs must be at least 1");
        exp->options.spec.epochs = epochs;
        return HCF_OK;
    }

    hcf_status hcf_experiment_set_seed(hcf_experiment *exp, uint64_t seed)
    {
        if (!exp)
            return null_argument();
        exp->options.spec.master_seed = seed;
        return HCF_OK;
    }

    hcf_status hcf_experiment_set_threads(hcf_experiment *exp, int threads)
    {
        if (!exp)
            return null_argument();
        if (threads < 0)
            return fail(HCF_ERR_CONFIG, "threads must be nonnegative");
        exp->options.spec.threads = threads;
        return HCF_OK;
    }

    hcf_status hcf_experiment_to_json(const hcf_experiment *exp, char **out)
    {
        if (!exp || !out)
            return null_argument();
        return guarded([&] {
            *out = copy_string(hcf::spec_to_json(exp->options.spec));
            return HCF_OK;
        });
    }

    hcf_status hcf_run(const hcf_experiment *exp, hcf_result **out)
    {
        if (!exp || !out)
            return null_argument();
        *out = nullptr;
        return guarded([&] {
            auto res = std::make_unique<hcf_result>();
            res->result = hcf::run_experiment(exp->options.spec);
            *out = res.release();
            return HCF_OK;
        });
    }

    void hcf_result_free(hcf_result *res)
    {
        delete res;
    }

    size_t hcf_result_epoch_count(const hcf_result *res)
    {
        return res ? res->result.epochs.size() : 0;
    }

    size_t hcf_result_sample_count(const hcf_result *res)
    {
        return res ? res->result.sample_count() : 0;
    }

    hcf_status hcf_result_samples(const hcf_result *res, double *buffer, size_t capacity)
    {
        if (!res || (!buffer && capacity > 0))
            return null_argument();
        return guarded([&] {
            const auto samples = res->result.samples();
            const size_t n = std::min(capacity, samples.size());
            std::copy_n(samples.begin(), n, buffer);
            return HCF_OK;
        });
    }

    hcf_status hcf_result_likely_rate(const hcf_result *res, double level, double *out)
    {
        if (!res || !out)
            return null_argument();
        return guarded([&] {
            *out = hcf::likely_rate(res->result.samples(), level);
            return HCF_OK;
        });
    }

    hcf_status hcf_result_median(const hcf_result *res, double *out)
    {
        if (!res || !out)
            return null_argument();
        return guarded([&] {
            *out = hcf::median(res->result.samples());
            return HCF_OK;
        });
    }

    hcf_status hcf_result_dominance(const hcf_result *res, long *checks, long *violations)
    {
        if (!res || !checks || !violations)
            return null_argument();
        *checks = 0;
        *violations = 0;
        for (const auto &rec : res->result.epochs)
        {
            *checks += rec.dominance_checks;
            *violations += rec.dominance_violations;
        }
        return HCF_OK;
    }

    hcf_status hcf_result_summary_json(const hcf_result *res, char **out)
    {
        if (!res || !out)
            return null_argument();
        return guarded([&] {
            *out = copy_string(hcf::summary_json(res->result));
            return HCF_OK;
        });
    }

    hcf_status hcf_result_write(const hcf_result *res, const char *dir, const char *format)
    {
        if (!res || !dir)
            return null_argument();
        return guarded([&] {
            const auto fmt = format ? hcf::parse_emit_format(format) : hcf::EmitFormat::Both;
            hcf::emit_results(res->result, dir, fmt);
            return HCF_OK;
        });
    }
}
