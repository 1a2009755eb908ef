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

#include "hcf/harness.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace hcf
{
    inline constexpr const char *kToolVersion = "1.0.0";

    enum class EmitFormat
    {
        Csv,
        Json,
        Both
    };

    std::string_view to_string(EmitFormat format);
    EmitFormat parse_emit_format(std::string_view name);

    // Configuration documents (see docs/config.md). A document may hold
    // "preset", "architecture", a partial "scenario" object that overrides
    // the preset, and an "experiment" object. Unknown keys are rejected.
    ExperimentSpec spec_from_json(std::string_view text);
    std::string spec_to_json(const ExperimentSpec &spec);

    // Short hex digest of the resolved spec and tool version.
    std::string make_run_id(const ExperimentSpec &spec);

    struct CliOptions
    {
        ExperimentSpec spec;
        std::string out_dir = "out";
        EmitFormat emit = EmitFormat::Both;
        bool help = false;
        std::string help_text;
    };

    // Resolution order: built-in defaults, then --config, then explicit flags.
    // Throws UsageError for bad flags, ConfigError for bad configuration.
    CliOptions parse_cli(int argc, const char *const *argv);

    struct RunManifest
    {
        ExperimentSpec spec;
        std::string run_id;
        std::string tool_version = kToolVersion;
        std::string timestamp; // UTC, ISO 8601
        std::vector<std::string> outputs;
    };

    std::string manifest_to_json(const RunManifest &manifest);
    RunManifest manifest_from_json(std::string_view text);

    // UTC timestamp; honors SOURCE_DATE_EPOCH for reproducible output.
    std::string current_timestamp();

    // Shortest round-trip decimal representation.
    std::string format_double(double value);

    std::string samples_csv(const ExperimentResult &result);
    std::string cdf_csv(const ExperimentResult &result);
    std::string summary_json(const ExperimentResult &result);
    std::string trace_jsonl(const ExperimentResult &result);

    // Writes the requested files plus manifest.json into `dir` (created if
    // missing) and solver trace lines into trace.jsonl when the spec recorded
    // them. Throws IoError naming the failing path.
    RunManifest emit_results(const ExperimentResult &result, const std::string &dir, EmitFormat format);
}
