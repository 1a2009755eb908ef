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

#include "hcf/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>

namespace hcf
{
    using nlohmann::json;
    using ordered_json = nlohmann::ordered_json;

    std::string_view to_string(EmitFormat format)
    {
        switch (format)
        {
        case EmitFormat::Csv:
            return "csv";
        case EmitFormat::Json:
            return "json";
        case EmitFormat::Both:
            break;
        }
        return "both";
    }

    EmitFormat parse_emit_format(std::string_view name)
    {
        if (name == "csv")
            return EmitFormat::Csv;
        if (name == "json")
            return EmitFormat::Json;
        if (name == "both")
            return EmitFormat::Both;
        throw UsageError("unknown emit format '" + std::string(name) + "' (expected csv, json or both)");
    }

    std::string format_double(double value)
    {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, value);
        return std::string(buf, res.ptr);
    }

    // ------------------------------------------------------------------------
    // Spec <-> JSON

    namespace
    {
        void reject_unknown(const json &obj, const std::set<std::string> &known, const std::string &where)
        {
            if (!obj.is_object())
                throw ConfigError(where + " must be a JSON object");
            for (const auto &item : obj.items())
                if (!known.count(item.key()))
                    throw ConfigError("unknown key '" + item.key() + "' in " + where);
        }

        template <class T>
        void read(const json &obj, const char *key, T &out, const std::string &where)
        {
            auto it = obj.find(key);
            if (it == obj.end())
                return;
            try
            {
                out = it->get<T>();
            }
            catch (const json::exception &)
            {
                throw ConfigError("key '" + std::string(key) + "' in " + where + " has the wrong type");
            }
        }

        std::optional<std::string> read_string(const json &obj, const char *key, const std::string &where)
        {
            std::string s;
            if (!obj.contains(key))
                return std::nullopt;
            read(obj, key, s, where);
            return s;
        }

        void apply_scenario(const json &obj, ScenarioConfig &c)
        {
            static const std::set<std::string> known = {
                "coverage_radius", "M", "K", "architecture", "N_b", "L", "N_a", "tau_p", "tau_c", "tau_u", "p_u",
                "per_antenna_power", "noise_density_dbm_hz", "noise_figure_db", "bandwidth_hz", "path_loss",
                "shadow_sigma_db", "asd_deg", "cost_hata_params", "min_distance_m"};
            const std::string where = "\"scenario\"";
            reject_unknown(obj, known, where);
            read(obj, "coverage_radius", c.coverage_radius_m, where);
            read(obj, "M", c.total_antennas, where);
            read(obj, "K", c.num_users, where);
            if (auto a = read_string(obj, "architecture", where))
                c.architecture = parse_architecture(*a);
            read(obj, "N_b", c.cbs_antennas, where);
            read(obj, "L", c.num_eaps, where);
            read(obj, "N_a", c.eap_antennas, where);
            read(obj, "tau_p", c.pilot_length, where);
            read(obj, "tau_c", c.coherence_length, where);
            read(obj, "tau_u", c.pilot_norm_length, where);
            read(obj, "p_u", c.ue_power_w, where);
            read(obj, "per_antenna_power", c.per_antenna_power_w, where);
            read(obj, "noise_density_dbm_hz", c.noise_density_dbm_hz, where);
            read(obj, "noise_figure_db", c.noise_figure_db, where);
            read(obj, "bandwidth_hz", c.bandwidth_hz, where);
            if (auto p = read_string(obj, "path_loss", where))
                c.path_loss = parse_path_loss(*p);
            read(obj, "shadow_sigma_db", c.shadow_sigma_db, where);
            read(obj, "asd_deg", c.asd_deg, where);
            read(obj, "min_distance_m", c.min_distance_m, where);
            if (obj.contains("cost_hata_params"))
            {
                const json &h = obj.at("cost_hata_params");
                const std::string hw = "\"cost_hata_params\"";
                reject_unknown(h, {"f_c_ghz", "h_ap_m", "h_ue_m", "d0_km", "d1_km"}, hw);
                read(h, "f_c_ghz", c.cost_hata.carrier_ghz, hw);
                read(h, "h_ap_m", c.cost_hata.ap_height_m, hw);
                read(h, "h_ue_m", c.cost_hata.ue_height_m, hw);
                read(h, "d0_km", c.cost_hata.d0_km, hw);
                read(h, "d1_km", c.cost_hata.d1_km, hw);
            }
        }

        ordered_json scenario_json(const ScenarioConfig &c)
        {
            ordered_json j;
            j["coverage_radius"] = c.coverage_radius_m;
            j["M"] = c.total_antennas;
            j["K"] = c.num_users;
            j["architecture"] = to_string(c.architecture);
            j["N_b"] = c.cbs_antennas;
            j["L"] = c.num_eaps;
            j["N_a"] = c.eap_antennas;
            j["tau_p"] = c.pilot_length;
            j["tau_c"] = c.coherence_length;
            j["tau_u"] = c.pilot_norm_length;
            j["p_u"] = c.ue_power_w;
            j["per_antenna_power"] = c.per_antenna_power_w;
            j["noise_density_dbm_hz"] = c.noise_density_dbm_hz;
            j["noise_figure_db"] = c.noise_figure_db;
            j["bandwidth_hz"] = c.bandwidth_hz;
            j["path_loss"] = to_string(c.path_loss);
            j["shadow_sigma_db"] = c.shadow_sigma_db;
            j["asd_deg"] = c.asd_deg;
            j["cost_hata_params"] = {{"f_c_ghz", c.cost_hata.carrier_ghz},
                                     {"h_ap_m", c.cost_hata.ap_height_m},
                                     {"h_ue_m", c.cost_hata.ue_height_m},
                                     {"d0_km", c.cost_hata.d0_km},
                                     {"d1_km", c.cost_hata.d1_km}};
            j["min_distance_m"] = c.min_distance_m;
            return j;
        }

        ordered_json spec_json(const ExperimentSpec &s)
        {
            ordered_json j;
            j["preset"] = to_string(s.preset);
            j["architecture"] = to_string(s.scenario.architecture);
            j["scenario"] = scenario_json(s.scenario);
            ordered_json e;
            e["link"] = to_string(s.link);
            e["power"] = power_mode_name(s.power, s.link);
            e["epochs"] = s.epochs;
            e["small_scale_draws"] = s.small_scale_draws;
            e["master_seed"] = s.master_seed;
            e["threads"] = s.threads;
            e["record_trace"] = s.record_trace;
            e["solver"] = {{"epsilon", s.solver.epsilon},
                           {"feasibility_tolerance", s.solver.feasibility_tolerance},
                           {"max_iters", s.solver.max_iters},
                           {"inner_max_iters", s.solver.inner_max_iters}};
            j["experiment"] = e;
            return j;
        }

        json parse_document(std::string_view text, const std::string &what)
        {
            try
            {
                return json::parse(text.begin(), text.end());
            }
            catch (const json::parse_error &e)
            {
                throw ConfigError(what + " is not valid JSON: " + e.what());
            }
        }

        // Parsed configuration document, every field optional.
        struct ConfigDocument
        {
            std::optional<ScenarioPreset> preset;
            std::optional<Architecture> architecture;
            json scenario = json::object();
            json experiment = json::object();
        };

        ConfigDocument read_document(const json &doc)
        {
            reject_unknown(doc, {"preset", "architecture", "scenario", "experiment"}, "configuration");
            ConfigDocument d;
            if (auto p = read_string(doc, "preset", "configuration"))
                d.preset = parse_preset(*p);
            if (auto a = read_string(doc, "architecture", "configuration"))
                d.architecture = parse_architecture(*a);
            if (doc.contains("scenario"))
                d.scenario = doc.at("scenario");
            if (doc.contains("experiment"))
                d.experiment = doc.at("experiment");
            reject_unknown(d.experiment,
                           {"link", "power", "epochs", "small_scale_draws", "master_seed", "threads", "record_trace",
                            "solver"},
                           "\"experiment\"");
            return d;
        }

        void apply_experiment(const json &e, ExperimentSpec &s)
        {
            const std::string where = "\"experiment\"";
            if (auto l = read_string(e, "link", where))
                s.link = parse_link(*l);
            if (auto p = read_string(e, "power", where))
                s.power = parse_power_mode(*p);
            read(e, "epochs", s.epochs, where);
            read(e, "small_scale_draws", s.small_scale_draws, where);
            read(e, "master_seed", s.master_seed, where);
            read(e, "threads", s.threads, where);
            read(e, "record_trace", s.record_trace, where);
            if (e.contains("solver"))
            {
                const json &b = e.at("solver");
                const std::string bw = "\"solver\"";
                reject_unknown(b, {"epsilon", "feasibility_tolerance", "max_iters", "inner_max_iters"}, bw);
                read(b, "epsilon", s.solver.epsilon, bw);
                read(b, "feasibility_tolerance", s.solver.feasibility_tolerance, bw);
                read(b, "max_iters", s.solver.max_iters, bw);
                read(b, "inner_max_iters", s.solver.inner_max_iters, bw);
            }
        }

        // Builds the spec for (preset, arch) with the document's overrides.
        ExperimentSpec resolve(ScenarioPreset preset, Architecture arch, const ConfigDocument &doc)
        {
            ExperimentSpec s;
            s.preset = preset;
            s.scenario = build_scenario(preset, arch, [&](ScenarioConfig &c) { apply_scenario(doc.scenario, c); });
            s.epochs = default_epochs(preset);
            apply_experiment(doc.experiment, s);
            return s;
        }
    }

    ExperimentSpec spec_from_json(std::string_view text)
    {
        const ConfigDocument doc = read_document(parse_document(text, "configuration"));
        ExperimentSpec s = resolve(doc.preset.value_or(ScenarioPreset::Micro),
                                   doc.architecture.value_or(Architecture::Hcf), doc);
        s.validate();
        return s;
    }

    std::string spec_to_json(const ExperimentSpec &spec)
    {
        return spec_json(spec).dump(2) + "\n";
    }

    std::string make_run_id(const ExperimentSpec &spec)
    {
        // FNV-1a over the canonical spec text and version.
        const std::string text = spec_json(spec).dump() + kToolVersion;
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char ch : text)
        {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return std::string(buf, 12);
    }

    // ------------------------------------------------------------------------
    // Command line

    CliOptions parse_cli(int argc, const char *const *argv)
    {
        CLI::App app{"Hierarchical cell-free massive MIMO system-level simulator", "hcfsim"};
        app.set_version_flag("--version", kToolVersion);

        std::string scenario, arch, link, power, config, out_dir = "out", emit = "both";
        int epochs = 0, draws = 0, threads = 0;
        std::uint64_t seed = 0;
        bool trace = false, full = false;

        auto *o_scenario = app.add_option("--scenario", scenario, "Deployment preset")
                               ->check(CLI::IsMember({"micro", "macro"}));
        auto *o_arch = app.add_option("--arch", arch, "Architecture")
                           ->check(CLI::IsMember({"hcf", "hcf-half", "cf", "cellular"}));
        auto *o_link = app.add_option("--link", link, "Link direction")->check(CLI::IsMember({"ul", "dl"}));
        auto *o_power = app.add_option("--power", power, "Power control (equal and full both select the "
                                                          "baseline: equal split in the downlink, full power "
                                                          "in the uplink)")
                            ->check(CLI::IsMember({"equal", "full", "maxmin"}));
        auto *o_epochs = app.add_option("--epochs", epochs, "Number of placement epochs")
                             ->check(CLI::PositiveNumber);
        auto *o_full = app.add_flag("--full", full, "Run 2000 epochs unless --epochs is given");
        auto *o_seed = app.add_option("--seed", seed, "Master seed");
        auto *o_draws = app.add_option("--sf-draws", draws, "Small-scale draws per uplink epoch")
                            ->check(CLI::PositiveNumber);
        auto *o_threads = app.add_option("--threads", threads, "Worker threads (0: all cores)")
                              ->check(CLI::NonNegativeNumber);
        app.add_option("--config", config, "JSON configuration file")->check(CLI::ExistingFile);
        app.add_option("--out", out_dir, "Output directory");
        app.add_option("--emit", emit, "Output files")->check(CLI::IsMember({"csv", "json", "both"}));
        auto *o_trace = app.add_flag("--trace-solver", trace, "Write bisection steps to trace.jsonl");

        CliOptions out;
        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::CallForHelp &)
        {
            out.help = true;
            out.help_text = app.help();
            return out;
        }
        catch (const CLI::CallForVersion &)
        {
            out.help = true;
            out.help_text = std::string(kToolVersion) + "\n";
            return out;
        }
        catch (const CLI::ParseError &e)
        {
            throw UsageError(e.what());
        }

        ConfigDocument doc;
        if (!config.empty())
        {
            std::ifstream in(config);
            if (!in)
                throw IoError("cannot read configuration file " + config);
            const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            doc = read_document(parse_document(text, "configuration file " + config));
        }

        const ScenarioPreset preset =
            o_scenario->count() ? parse_preset(scenario) : doc.preset.value_or(ScenarioPreset::Micro);
        const Architecture architecture =
            o_arch->count() ? parse_architecture(arch) : doc.architecture.value_or(Architecture::Hcf);
        ExperimentSpec s = resolve(preset, architecture, doc);

        if (o_link->count())
            s.link = parse_link(link);
        if (o_power->count())
            s.power = parse_power_mode(power);
        if (o_full->count() && !doc.experiment.contains("epochs"))
            s.epochs = 2000;
        if (o_epochs->count())
            s.epochs = epochs;
        if (o_seed->count())
            s.master_seed = seed;
        if (o_draws->count())
            s.small_scale_draws = draws;
        if (o_threads->count())
            s.threads = threads;
        if (o_trace->count())
            s.record_trace = true;
        s.validate();

        out.spec = std::move(s);
        out.out_dir = out_dir;
        out.emit = parse_emit_format(emit);
        return out;
    }

    // ------------------------------------------------------------------------
    // Manifest

    std::string current_timestamp()
    {
        std::time_t t = 0;
        const char *sde = std::getenv("SOURCE_DATE_EPOCH");
        if (sde && *sde)
        {
            long long v = 0;
            const auto res = std::from_chars(sde, sde + std::strlen(sde), v);
            if (res.ec != std::errc())
                throw ConfigError("SOURCE_DATE_EPOCH is not an integer");
            t = static_cast<std::time_t>(v);
        }
        else
            t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    std::string manifest_to_json(const RunManifest &m)
    {
        ordered_json j;
        j["tool"] = "hcfsim";
        j["tool_version"] = m.tool_version;
        j["run_id"] = m.run_id;
        j["timestamp"] = m.timestamp;
        j["outputs"] = m.outputs;
        j["spec"] = spec_json(m.spec);
        return j.dump(2) + "\n";
    }

    RunManifest manifest_from_json(std::string_view text)
    {
        const json j = parse_document(text, "manifest");
        reject_unknown(j, {"tool", "tool_version", "run_id", "timestamp", "outputs", "spec"}, "manifest");
        RunManifest m;
        read(j, "tool_version", m.tool_version, "manifest");
        read(j, "run_id", m.run_id, "manifest");
        read(j, "timestamp", m.timestamp, "manifest");
        read(j, "outputs", m.outputs, "manifest");
        if (!j.contains("spec"))
            throw ConfigError("manifest has no spec");
        m.spec = spec_from_json(j.at("spec").dump());
        return m;
    }

    // ------------------------------------------------------------------------
    // Result files

    std::string samples_csv(const ExperimentResult &result)
    {
        std::string out = "epoch,user,se_bps_hz\n";
        for (const auto &rec : result.epochs)
            for (Eigen::Index k = 0; k < rec.se.size(); ++k)
            {
                out += std::to_string(rec.epoch);
                out += ',';
                out += std::to_string(k);
                out += ',';
                out += format_double(rec.se[k]);
                out += '\n';
            }
        return out;
    }

    std::string cdf_csv(const ExperimentResult &result)
    {
        std::string out = "value,prob\n";
        for (const auto &[v, p] : empirical_cdf(result.samples()))
        {
            out += format_double(v);
            out += ',';
            out += format_double(p);
            out += '\n';
        }
        return out;
    }

    std::string summary_json(const ExperimentResult &result)
    {
        const std::vector<double> samples = result.samples();
        const std::vector<double> sums = result.sum_throughput_samples();
        const double bandwidth = result.spec.scenario.bandwidth_hz;

        double mean_se = 0.0, mean_sum = 0.0;
        for (double v : samples)
            mean_se += v;
        mean_se /= static_cast<double>(samples.size());
        for (double v : sums)
            mean_sum += v;
        mean_sum /= static_cast<double>(sums.size());

        int checks = 0, violations = 0, saving_epochs = 0, central_epochs = 0, edge_epochs = 0;
        double ul_saving = 0.0, central = 0.0, edge = 0.0;
        for (const auto &rec : result.epochs)
        {
            checks += rec.dominance_checks;
            violations += rec.dominance_violations;
            if (!rec.has_power_saving)
                continue;
            ++saving_epochs;
            ul_saving += rec.uplink_saving;
            if (rec.downlink_saving.has_central)
            {
                central += rec.downlink_saving.central;
                ++central_epochs;
            }
            if (rec.downlink_saving.has_edges)
            {
                edge += rec.downlink_saving.edge_mean;
                ++edge_epochs;
            }
        }

        ordered_json j;
        j["run_id"] = result.run_id;
        j["tool_version"] = kToolVersion;
        j["sample_count"] = samples.size();
        j["epochs"] = result.epochs.size();
        j["likely_rate_95"] = likely_rate(samples, 0.95);
        j["median_se"] = median(samples);
        j["mean_se"] = mean_se;
        j["mean_sum_throughput_bps_hz"] = mean_sum;
        j["median_sum_throughput_bps_hz"] = median(sums);
        j["mean_sum_throughput_bps"] = mean_sum * bandwidth;

        ordered_json ps = nullptr;
        if (saving_epochs > 0)
        {
            ps = ordered_json::object();
            if (result.spec.link == LinkDirection::Uplink)
                ps["uplink_mean"] = ul_saving / saving_epochs;
            else
            {
                ps["central_mean"] = central_epochs ? ordered_json(central / central_epochs) : ordered_json(nullptr);
                ps["edge_mean"] = edge_epochs ? ordered_json(edge / edge_epochs) : ordered_json(nullptr);
            }
        }
        j["power_saving"] = ps;
        j["dominance"] = {{"checks", checks}, {"violations", violations}};
        j["spec"] = spec_json(result.spec);
        return j.dump(2) + "\n";
    }

    std::string trace_jsonl(const ExperimentResult &result)
    {
        std::string out;
        for (const auto &rec : result.epochs)
            for (const auto &e : rec.trace)
            {
                ordered_json j;
                j["epoch"] = rec.epoch;
                j["solver"] = e.solver;
                j["step"] = e.step;
                j["low"] = e.low;
                j["high"] = e.high;
                j["target"] = e.target;
                j["feasible"] = e.feasible;
                j["inner_iterations"] = e.inner_iterations;
                out += j.dump();
                out += '\n';
            }
        return out;
    }

    namespace
    {
        void write_file(const std::filesystem::path &path, const std::string &content)
        {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw IoError("cannot open " + path.string() + " for writing");
            out.write(content.data(), static_cast<std::streamsize>(content.size()));
            out.close();
            if (!out)
                throw IoError("failed writing " + path.string());
        }
    }

    RunManifest emit_results(const ExperimentResult &result, const std::string &dir, EmitFormat format)
    {
        namespace fs = std::filesystem;
        const fs::path root(dir);
        std::error_code ec;
        fs::create_directories(root, ec);
        if (ec)
            throw IoError("cannot create output directory " + dir + ": " + ec.message());

        RunManifest m;
        m.spec = result.spec;
        m.run_id = result.run_id;
        m.timestamp = current_timestamp();

        auto emit = [&](const char *name, const std::string &content) {
            write_file(root / name, content);
            m.outputs.push_back(name);
        };
        if (format != EmitFormat::Json)
        {
            emit("samples.csv", samples_csv(result));
            emit("cdf.csv", cdf_csv(result));
        }
        if (format != EmitFormat::Csv)
            emit("summary.json", summary_json(result));
        if (result.spec.record_trace)
            emit("trace.jsonl", trace_jsonl(result));
        m.outputs.push_back("manifest.json");
        write_file(root / "manifest.json", manifest_to_json(m));
        return m;
    }
}
