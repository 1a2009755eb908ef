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

// Exercises the shared library through its C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hcf/hcf.h"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

namespace
{
    hcf_experiment *micro_hcf_dl(int epochs)
    {
        hcf_experiment *exp = nullptr;
        REQUIRE(hcf_experiment_preset("micro", "hcf", "dl", "equal", &exp) == HCF_OK);
        REQUIRE(exp != nullptr);
        REQUIRE(hcf_experiment_set_epochs(exp, epochs) == HCF_OK);
        REQUIRE(hcf_experiment_set_threads(exp, 1) == HCF_OK);
        return exp;
    }
}

TEST_CASE("run and query through the C API")
{
    hcf_experiment *exp = micro_hcf_dl(2);
    hcf_result *res = nullptr;
    REQUIRE(hcf_run(exp, &res) == HCF_OK);
    CHECK(hcf_result_epoch_count(res) == 2);
    REQUIRE(hcf_result_sample_count(res) == 16);

    std::vector<double> samples(16);
    REQUIRE(hcf_result_samples(res, samples.data(), samples.size()) == HCF_OK);
    for (double v : samples)
        CHECK(v >= 0.0);

    // The 95%-likely rate is the 5% quantile with ceiling indexing: 0.8th of
    // 16 rounds up to the first sorted sample.
    double rate = -1.0;
    REQUIRE(hcf_result_likely_rate(res, 0.95, &rate) == HCF_OK);
    CHECK(rate == *std::min_element(samples.begin(), samples.end()));
    double med = -1.0;
    REQUIRE(hcf_result_median(res, &med) == HCF_OK);
    CHECK(med >= rate);

    long checks = -1, violations = -1;
    REQUIRE(hcf_result_dominance(res, &checks, &violations) == HCF_OK);
    CHECK(violations == 0);

    char *summary = nullptr;
    REQUIRE(hcf_result_summary_json(res, &summary) == HCF_OK);
    CHECK(std::strstr(summary, "\"likely_rate_95\"") != nullptr);
    hcf_string_free(summary);

    const auto dir = std::filesystem::temp_directory_path() / "hcf_capi_test";
    std::filesystem::remove_all(dir);
    REQUIRE(hcf_result_write(res, dir.c_str(), "csv") == HCF_OK);
    CHECK(std::filesystem::exists(dir / "samples.csv"));
    CHECK(std::filesystem::exists(dir / "manifest.json"));
    CHECK_FALSE(std::filesystem::exists(dir / "summary.json"));
    CHECK(hcf_result_write(res, dir.c_str(), "xml") == HCF_ERR_USAGE);
    std::filesystem::remove_all(dir);

    // Same seed, same samples.
    hcf_result *again = nullptr;
    REQUIRE(hcf_run(exp, &again) == HCF_OK);
    std::vector<double> second(16);
    REQUIRE(hcf_result_samples(again, second.data(), second.size()) == HCF_OK);
    CHECK(second == samples);
    REQUIRE(hcf_experiment_set_seed(exp, 99) == HCF_OK);
    hcf_result *other = nullptr;
    REQUIRE(hcf_run(exp, &other) == HCF_OK);
    std::vector<double> third(16);
    REQUIRE(hcf_result_samples(other, third.data(), third.size()) == HCF_OK);
    CHECK(third != samples);

    hcf_result_free(other);
    hcf_result_free(again);
    hcf_result_free(res);
    hcf_experiment_free(exp);
}

TEST_CASE("JSON and argument constructors")
{
    hcf_experiment *exp = micro_hcf_dl(3);
    char *json = nullptr;
    REQUIRE(hcf_experiment_to_json(exp, &json) == HCF_OK);
    hcf_experiment *copy = nullptr;
    REQUIRE(hcf_experiment_from_json(json, &copy) == HCF_OK);
    char *json2 = nullptr;
    REQUIRE(hcf_experiment_to_json(copy, &json2) == HCF_OK);
    CHECK(std::string(json) == std::string(json2));
    hcf_string_free(json);
    hcf_string_free(json2);
    hcf_experiment_free(copy);
    hcf_experiment_free(exp);

    const char *argv[] = {"hcfsim", "--arch", "cf", "--out", "results", "--emit", "json"};
    REQUIRE(hcf_experiment_from_args(7, argv, &exp) == HCF_OK);
    CHECK(std::string(hcf_experiment_out_dir(exp)) == "results");
    CHECK(std::string(hcf_experiment_emit_format(exp)) == "json");
    hcf_experiment_free(exp);

    const char *help[] = {"hcfsim", "--help"};
    REQUIRE(hcf_experiment_from_args(2, help, &exp) == HCF_HELP);
    CHECK(std::strstr(hcf_experiment_help(exp), "--epochs") != nullptr);
    hcf_experiment_free(exp);

    const char *version[] = {"hcfsim", "--version"};
    REQUIRE(hcf_experiment_from_args(2, version, &exp) == HCF_HELP);
    CHECK(std::string(hcf_experiment_help(exp)) == std::string(hcf_version()) + "\n");
    hcf_experiment_free(exp);
}

TEST_CASE("error reporting")
{
    hcf_experiment *exp = nullptr;
    hcf_result *res = nullptr;
    CHECK(hcf_experiment_preset(nullptr, "hcf", "dl", "equal", &exp) == HCF_ERR_ARGUMENT);
    CHECK(hcf_experiment_preset("micro", "hcf", "dl", "equal", nullptr) == HCF_ERR_ARGUMENT);
    CHECK(hcf_run(nullptr, &res) == HCF_ERR_ARGUMENT);
    CHECK(hcf_experiment_to_json(nullptr, nullptr) == HCF_ERR_ARGUMENT);
    CHECK(hcf_result_write(nullptr, "x", nullptr) == HCF_ERR_ARGUMENT);
    CHECK(std::string(hcf_last_error()) == "null argument");

    CHECK(hcf_experiment_preset("micro", "mesh", "dl", "equal", &exp) == HCF_ERR_CONFIG);
    CHECK(exp == nullptr);
    CHECK(std::strlen(hcf_last_error()) > 0);
    CHECK(hcf_experiment_from_json("{\"scenario\": {\"N_b\": 33}}", &exp) == HCF_ERR_CONFIG);
    CHECK(hcf_experiment_from_json("{", &exp) == HCF_ERR_CONFIG);

    const char *argv[] = {"hcfsim", "--epochs", "0"};
    CHECK(hcf_experiment_from_args(3, argv, &exp) == HCF_ERR_USAGE);
    CHECK(exp == nullptr);

    exp = micro_hcf_dl(1);
    CHECK(hcf_experiment_set_epochs(exp, 0) == HCF_ERR_CONFIG);
    CHECK(hcf_experiment_set_threads(exp, -1) == HCF_ERR_CONFIG);
    hcf_experiment_free(exp);

    CHECK(std::string(hcf_status_name(HCF_ERR_IO)) == "I/O error");
    CHECK(hcf_result_sample_count(nullptr) == 0);
    hcf_experiment_free(nullptr);
    hcf_result_free(nullptr);
}
