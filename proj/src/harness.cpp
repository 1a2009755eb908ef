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

#include "hcf/harness.hpp"

#include "hcf/channel_model.hpp"
#include "hcf/downlink.hpp"
#include "hcf/io.hpp"
#include "hcf/pilot_estimation.hpp"
#include "hcf/uplink.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <thread>

namespace hcf
{
    std::string_view to_string(LinkDirection link)
    {
        return link == LinkDirection::Uplink ? "ul" : "dl";
    }

    std::string_view to_string(PowerMode mode)
    {
        return mode == PowerMode::MaxMin ? "maxmin" : "baseline";
    }

    std::string_view power_mode_name(PowerMode mode, LinkDirection link)
    {
        if (mode == PowerMode::MaxMin)
            return "maxmin";
        return link == LinkDirection::Uplink ? "full" : "equal";
    }

    LinkDirection parse_link(std::string_view name)
    {
        if (name == "ul")
            return LinkDirection::Uplink;
        if (name == "dl")
            return LinkDirection::Downlink;
        throw ConfigError("unknown link '" + std::string(name) + "' (expected ul or dl)");
    }

    PowerMode parse_power_mode(std::string_view name)
    {
        if (name == "equal" || name == "full")
            return PowerMode::Baseline;
        if (name == "maxmin")
            return PowerMode::MaxMin;
        throw ConfigError("unknown power mode '" + std::string(name) + "' (expected equal, full or maxmin)");
    }

    void ExperimentSpec::validate() const
    {
        scenario.validate();
        if (epochs < 1)
            throw ConfigError("epochs must be at least 1");
        if (link == LinkDirection::Uplink && small_scale_draws < 1)
            throw ConfigError("small_scale_draws must be at least 1");
        if (threads < 0)
            throw ConfigError("threads must be nonnegative");
        try
        {
            solver.validate();
        }
        catch (const DomainError &e)
        {
            throw ConfigError(e.what());
        }
    }

    int default_epochs(ScenarioPreset preset)
    {
        return preset == ScenarioPreset::Micro ? 300 : 150;
    }

    ExperimentSpec make_experiment(ScenarioPreset preset, Architecture arch, LinkDirection link, PowerMode power)
    {
        ExperimentSpec spec;
        spec.preset = preset;
        spec.scenario = build_scenario(preset, arch);
        spec.link = link;
        spec.power = power;
        spec.epochs = default_epochs(preset);
        return spec;
    }

    namespace
    {
        std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9e3779b97f4a7c15ULL;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
            return x ^ (x >> 31);
        }

        std::shared_ptr<const EstimationStatistics> epoch_statistics(const ScenarioConfig &config, Rng &rng)
        {
            const Placement placement = sample_placement(config, rng);
            LinkStatistics links = build_link_correlations(config, placement);
            TrainingParams params{config.ue_power_w, config.pilot_length, config.noise_power_w()};
            return std::make_shared<const EstimationStatistics>(
                std::move(links), assign_pilots(config.num_users, config.pilot_length), params);
        }

        // Slack on the dominance check, in bits/s/Hz.
        double dominance_slack(const ExperimentSpec &spec)
        {
            return spec.solver.feasibility_tolerance;
        }

        void run_uplink(const ExperimentSpec &spec, const std::shared_ptr<const EstimationStatistics> &stats,
                        Rng &rng, EpochRecord &rec)
        {
            const ScenarioConfig &cfg = spec.scenario;
            const int users = cfg.num_users;
            const RVector full = RVector::Ones(users);
            RVector se_sum = RVector::Zero(users);
            double saving_sum = 0.0;
            double base_min_sum = 0.0;

            SolverTrace trace;
            if (spec.record_trace)
                trace = [&rec](const SolverTraceEvent &e) { rec.trace.push_back(e); };

            for (int d = 0; d < spec.small_scale_draws; ++d)
            {
                const EstimationSet est = sample_estimates(stats, rng);
                const UplinkCoefficients coeffs = ul_coefficients(est);
                const RVector base_se = ul_se(ul_sinr(coeffs, full), cfg.pilot_length, cfg.pilot_norm_length);
                base_min_sum += base_se.minCoeff();
                if (spec.power == PowerMode::Baseline)
                {
                    se_sum += base_se;
                    continue;
                }
                const PowerAllocation alloc = maxmin_uplink(coeffs, spec.solver, trace);
                const RVector se = ul_se(ul_sinr(coeffs, alloc.eta), cfg.pilot_length, cfg.pilot_norm_length);
                se_sum += se;
                saving_sum += uplink_power_saving(alloc.eta, full);
                rec.solver_steps += alloc.iterations;
                ++rec.dominance_checks;
                if (se.minCoeff() < base_se.minCoeff() - dominance_slack(spec))
                    ++rec.dominance_violations;
            }

            rec.se = se_sum / spec.small_scale_draws;
            rec.baseline_min_se = base_min_sum / spec.small_scale_draws;
            rec.min_se = rec.se.minCoeff();
            if (spec.power == PowerMode::MaxMin)
            {
                rec.has_power_saving = true;
                rec.uplink_saving = saving_sum / spec.small_scale_draws;
            }
        }

        void run_downlink(const ExperimentSpec &spec, const EstimationStatistics &stats, EpochRecord &rec)
        {
            const DownlinkCoefficients coeffs = dl_coefficients(stats);
            const RMatrix equal = dl_equal_power(coeffs.user_count(), coeffs.node_count());
            const RVector base_se = dl_se(dl_sinr(coeffs, equal));
            rec.baseline_min_se = base_se.minCoeff();
            if (spec.power == PowerMode::Baseline)
            {
                rec.se = base_se;
                rec.min_se = rec.baseline_min_se;
                return;
            }

            SolverTrace trace;
            if (spec.record_trace)
                trace = [&rec](const SolverTraceEvent &e) { rec.trace.push_back(e); };
            const PowerAllocation alloc = maxmin_downlink(coeffs, spec.solver, trace);
            rec.se = dl_se(dl_sinr(coeffs, alloc.nu));
            rec.min_se = rec.se.minCoeff();
            rec.solver_steps = alloc.iterations;
            rec.dominance_checks = 1;
            if (rec.min_se < rec.baseline_min_se - dominance_slack(spec))
                rec.dominance_violations = 1;
            rec.has_power_saving = true;
            rec.downlink_saving = downlink_power_saving(alloc.nu, equal, coeffs.nodes);
        }

        template <class E>
        bool rethrow_as(const std::exception &e, const std::string &prefix)
        {
            if (dynamic_cast<const E *>(&e))
                throw E(prefix + e.what());
            return false;
        }

        [[noreturn]] void rethrow_with_epoch(std::exception_ptr eptr, int epoch)
        {
            const std::string prefix = "epoch " + std::to_string(epoch) + ": ";
            try
            {
                std::rethrow_exception(eptr);
            }
            catch (const std::exception &e)
            {
                rethrow_as<ConfigError>(e, prefix) || rethrow_as<GeometryError>(e, prefix) ||
                    rethrow_as<DomainError>(e, prefix) || rethrow_as<NumericalError>(e, prefix) ||
                    rethrow_as<SolverError>(e, prefix) || rethrow_as<IoError>(e, prefix) ||
                    rethrow_as<UsageError>(e, prefix);
                throw Error(prefix + e.what());
            }
        }
    }

    std::uint64_t epoch_seed(std::uint64_t master_seed, int epoch)
    {
        return splitmix64(master_seed ^ splitmix64(static_cast<std::uint64_t>(epoch)));
    }

    EpochRecord run_epoch(const ExperimentSpec &spec, int epoch)
    {
        Rng rng(epoch_seed(spec.master_seed, epoch));
        EpochRecord rec;
        rec.epoch = epoch;
        const auto stats = epoch_statistics(spec.scenario, rng);
        if (spec.link == LinkDirection::Uplink)
            run_uplink(spec, stats, rng, rec);
        else
            run_downlink(spec, *stats, rec);
        return rec;
    }

    ExperimentResult run_experiment(const ExperimentSpec &spec)
    {
        spec.validate();
        ExperimentResult result;
        result.spec = spec;
        result.run_id = make_run_id(spec);
        result.epochs.resize(spec.epochs);

        int workers = spec.threads > 0 ? spec.threads : static_cast<int>(std::thread::hardware_concurrency());
        workers = std::clamp(workers, 1, spec.epochs);

        std::vector<std::exception_ptr> errors(spec.epochs);
        std::atomic<int> next{0};
        std::atomic<bool> failed{false};
        auto work = [&]() {
            for (int e = next++; e < spec.epochs && !failed; e = next++)
            {
                try
                {
                    result.epochs[e] = run_epoch(spec, e);
                }
                catch (...)
                {
                    errors[e] = std::current_exception();
                    failed = true;
                }
            }
        };

        if (workers == 1)
            work();
        else
        {
            std::vector<std::thread> pool;
            for (int i = 0; i < workers; ++i)
                pool.emplace_back(work);
            for (auto &t : pool)
                t.join();
        }

        for (int e = 0; e < spec.epochs; ++e)
            if (errors[e])
                rethrow_with_epoch(errors[e], e);
        return result;
    }

    std::vector<double> ExperimentResult::samples() const
    {
        std::vector<double> out;
        out.reserve(sample_count());
        for (const auto &rec : epochs)
            out.insert(out.end(), rec.se.data(), rec.se.data() + rec.se.size());
        return out;
    }

    std::vector<double> ExperimentResult::sum_throughput_samples() const
    {
        std::vector<double> out;
        out.reserve(epochs.size());
        for (const auto &rec : epochs)
            out.push_back(rec.sum_se());
        return out;
    }

    std::size_t ExperimentResult::sample_count() const
    {
        std::size_t n = 0;
        for (const auto &rec : epochs)
            n += static_cast<std::size_t>(rec.se.size());
        return n;
    }

    std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> samples)
    {
        if (samples.empty())
            throw DomainError("empirical_cdf: no samples");
        std::sort(samples.begin(), samples.end());
        const double n = static_cast<double>(samples.size());
        std::vector<std::pair<double, double>> cdf;
        cdf.reserve(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i)
            cdf.emplace_back(samples[i], static_cast<double>(i + 1) / n);
        return cdf;
    }

    double likely_rate(std::vector<double> samples, double level)
    {
        if (samples.empty())
            throw DomainError("likely_rate: no samples");
        if (!(level > 0.0 && level < 1.0))
            throw DomainError("likely_rate: level must lie in (0, 1)");
        std::sort(samples.begin(), samples.end());
        // Round before ceil so that (1 - 0.95) * 100 lands on 5, not 6.
        const double pos = std::round((1.0 - level) * static_cast<double>(samples.size()) * 1e9) / 1e9;
        const auto index = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(pos)));
        return samples[std::min(index, samples.size()) - 1];
    }

    double median(std::vector<double> samples)
    {
        if (samples.empty())
            throw DomainError("median: no samples");
        std::sort(samples.begin(), samples.end());
        const std::size_t n = samples.size();
        return n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
    }

    SumThroughput sum_throughput(const std::vector<std::vector<double>> &per_epoch_se, double bandwidth_hz)
    {
        SumThroughput out;
        for (const auto &epoch : per_epoch_se)
        {
            if (epoch.empty())
                throw DomainError("sum_throughput: epoch without users");
            double s = 0.0;
            for (double v : epoch)
                s += v;
            out.bps_hz.push_back(s);
            out.bps.push_back(s * bandwidth_hz);
        }
        return out;
    }
}
