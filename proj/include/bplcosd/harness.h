// Copyright 2026 The bplcosd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bplcosd/bp.h"
#include "bplcosd/channel.h"
#include "bplcosd/codes.h"
#include "bplcosd/mwpm.h"
#include "bplcosd/pipeline.h"
#include "json.hpp"

namespace bplcosd {

enum class DecoderKind { Bp, Nms, BpLcosd, Mwpm };

inline const char* decoder_name(DecoderKind k) {
    switch (k) {
        case DecoderKind::Bp:
            return "bp";
        case DecoderKind::Nms:
            return "nms";
        case DecoderKind::BpLcosd:
            return "bp-lcosd";
        case DecoderKind::Mwpm:
            return "mwpm";
    }
    return "?";
}

inline DecoderKind parse_decoder(const std::string& name) {
    for (DecoderKind k : {DecoderKind::Bp, DecoderKind::Nms, DecoderKind::BpLcosd, DecoderKind::Mwpm}) {
        if (name == decoder_name(k)) {
            return k;
        }
    }
    throw std::invalid_argument("unknown decoder '" + name + "' (expected bp, nms, bp-lcosd or mwpm)");
}

struct SimConfig {
    int d = 5;
    DecoderKind decoder = DecoderKind::BpLcosd;
    /// Explicit grid; when empty the grid is generated from p_min, p_max and points_per_decade.
    std::vector<double> p;
    double p_min = 1e-4;
    double p_max = 1.0;
    int points_per_decade = 4;
    double q = 1e-5;
    int t_max = 32;
    double alpha1 = 5.0 / 8.0;
    double alpha2 = 1.0;
    double beta = 7.5;
    int delta = 8;
    size_t l_max = 1024;
    uint64_t seed = 1;
    uint64_t max_trials = 1000000;
    /// Stop a point once this many logical errors are seen; 0 disables.
    uint64_t target_errors = 100;
    std::string out;
    int threads = 1;

    PipelineConfig pipeline() const {
        PipelineConfig pc;
        pc.stage1 = BpConfig{t_max, alpha1, LLR_MAX};
        pc.stage2 = BpConfig{t_max, alpha2, LLR_MAX};
        pc.beta = beta;
        pc.lcosd = LcosdConfig{delta, l_max};
        return pc;
    }

    void validate() const {
        if (d < 2) {
            throw std::invalid_argument("SimConfig: d must be at least 2");
        }
        if (max_trials < 1) {
            throw std::invalid_argument("SimConfig: max_trials must be at least 1");
        }
        if (threads < 1) {
            throw std::invalid_argument("SimConfig: threads must be at least 1");
        }
        if (!(q >= 0 && q <= 1)) {
            throw std::invalid_argument("SimConfig: q must lie in [0, 1]");
        }
        for (double v : p) {
            if (!(v >= 0 && v <= 1)) {
                throw std::invalid_argument("SimConfig: p values must lie in [0, 1]");
            }
        }
        pipeline().validate();
    }
};

/// p_max, p_max * 10^(-1/k), ... down to p_min inclusive (k points per decade).
inline std::vector<double> make_p_grid(double p_min, double p_max, int points_per_decade) {
    if (!(p_min > 0) || !(p_max >= p_min) || points_per_decade < 1) {
        throw std::invalid_argument("make_p_grid: need 0 < p_min <= p_max and points_per_decade >= 1");
    }
    std::vector<double> grid;
    double top = std::log10(p_max);
    double bottom = std::log10(p_min);
    for (int m = 0;; m++) {
        double e = top - static_cast<double>(m) / points_per_decade;
        if (e < bottom - 1e-9) {
            break;
        }
        grid.push_back(std::pow(10.0, e));
    }
    return grid;
}

inline std::vector<double> resolve_grid(const SimConfig& cfg) {
    return cfg.p.empty() ? make_p_grid(cfg.p_min, cfg.p_max, cfg.points_per_decade) : cfg.p;
}

struct TrialRecord {
    bool logical_error = false;
    bool syndrome_error = false;
    int iterations = 0;
    size_t list_size = 0;
    DecodePath path = DecodePath::BpStage1;
};

struct AggregateStats {
    std::string decoder;
    int d = 0;
    double p = 0;
    double q = 0;
    uint64_t trials = 0;
    uint64_t logical_errors = 0;
    double logical_error_rate = 0;
    uint64_t syndrome_errors = 0;
    double syndrome_error_rate = 0;
    double avg_iterations = 0;
    double avg_list_size = 0;
    uint64_t seed = 0;
    /// True when the trial cap was hit before the error target.
    bool censored = false;
    uint64_t lcosd_calls = 0;
    double wall_time = 0;
};

/// Wilson score interval for k successes in n trials (z = 1.96 gives 95%).
inline std::pair<double, double> wilson_interval(uint64_t k, uint64_t n, double z = 1.96) {
    if (n == 0) {
        return {0.0, 1.0};
    }
    double nn = static_cast<double>(n);
    double phat = static_cast<double>(k) / nn;
    double z2 = z * z;
    double denom = 1 + z2 / nn;
    double center = (phat + z2 / (2 * nn)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / nn + z2 / (4 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

/// Runs single trials for one decoder; owns all per-thread mutable state.
class TrialRunner {
   public:
    TrialRunner(const StabilizerCode& code, const SimConfig& cfg)
        : code_(code), cfg_(cfg), graph_(TannerGraph::from_code(code)), bp_(graph_) {
        if (cfg.decoder == DecoderKind::BpLcosd) {
            pipeline_ = std::make_unique<BpLcosdDecoder>(code, cfg.pipeline());
        }
    }

    TrialRecord run(double p, uint64_t point_index, uint64_t trial_index) {
        TrialRng rng = make_trial_rng(cfg_.seed, point_index, trial_index);
        PauliVector e = sample_error(code_, p, rng);
        SyndromeSample s = measure_syndrome(code_, e, cfg_.q, rng);
        NoiseModel noise{p, cfg_.q};

        TrialRecord rec;
        PauliVector e_hat;
        BitVec sigma_hat;
        switch (cfg_.decoder) {
            case DecoderKind::Mwpm:
                e_hat = mwpm_decode(code_, s.z);
                sigma_hat = s.z;
                break;
            case DecoderKind::Bp:
            case DecoderKind::Nms: {
                double alpha = cfg_.decoder == DecoderKind::Bp ? cfg_.alpha2 : cfg_.alpha1;
                BpOutput out = bp_.decode(init_llrs(code_, noise, s.z), BpConfig{cfg_.t_max, alpha, LLR_MAX});
                rec.iterations = out.iterations_used;
                e_hat = std::move(out.hard_pauli);
                sigma_hat = std::move(out.hard_syndrome);
                break;
            }
            case DecoderKind::BpLcosd: {
                DecodeResult out = pipeline_->decode(s.z, noise);
                rec.iterations = out.iterations_stage1 + out.iterations_stage2;
                rec.list_size = out.list_size_used;
                rec.path = out.path;
                e_hat = std::move(out.e_hat);
                sigma_hat = std::move(out.sigma_hat);
                break;
            }
        }
        rec.logical_error = is_logical_error(code_, e, e_hat);
        rec.syndrome_error = sigma_hat != s.sigma_true;
        return rec;
    }

   private:
    const StabilizerCode& code_;
    const SimConfig& cfg_;
    TannerGraph graph_;
    BpDecoder bp_;
    std::unique_ptr<BpLcosdDecoder> pipeline_;
};

/// Monte Carlo at one depolarizing rate. Trials run in fixed-size batches (in parallel when
/// threads > 1) and are then folded in trial order, stopping at the first trial that reaches the
/// error target, so the result does not depend on the thread count.
inline AggregateStats run_point(const SimConfig& cfg, const StabilizerCode& code, double p, uint64_t point_index) {
    cfg.validate();
    constexpr uint64_t kBatch = 4096;
    auto start = std::chrono::steady_clock::now();

    AggregateStats st;
    st.decoder = decoder_name(cfg.decoder);
    st.d = cfg.d;
    st.p = p;
    st.q = cfg.q;
    st.seed = cfg.seed;
    uint64_t total_iterations = 0;
    uint64_t total_list = 0;

    const int threads = std::max(1, cfg.threads);
    std::vector<std::unique_ptr<TrialRunner>> runners;
    for (int t = 0; t < threads; t++) {
        runners.push_back(std::make_unique<TrialRunner>(code, cfg));
    }

    std::vector<TrialRecord> batch;
    bool stop = false;
    for (uint64_t first = 0; first < cfg.max_trials && !stop; first += kBatch) {
        const uint64_t count = std::min(kBatch, cfg.max_trials - first);
        batch.assign(count, TrialRecord{});
        if (threads == 1) {
            for (uint64_t i = 0; i < count; i++) {
                batch[i] = runners[0]->run(p, point_index, first + i);
            }
        } else {
            std::atomic<uint64_t> next{0};
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; t++) {
                pool.emplace_back([&, t] {
                    for (uint64_t i = next++; i < count; i = next++) {
                        batch[i] = runners[t]->run(p, point_index, first + i);
                    }
                });
            }
            for (auto& th : pool) {
                th.join();
            }
        }
        for (const TrialRecord& rec : batch) {
            st.trials++;
            st.logical_errors += rec.logical_error;
            st.syndrome_errors += rec.syndrome_error;
            total_iterations += rec.iterations;
            total_list += rec.list_size;
            st.lcosd_calls += rec.path == DecodePath::Lcosd;
            if (cfg.target_errors > 0 && st.logical_errors >= cfg.target_errors) {
                stop = true;
                break;
            }
        }
    }
    double n = static_cast<double>(st.trials);
    st.logical_error_rate = static_cast<double>(st.logical_errors) / n;
    st.syndrome_error_rate = static_cast<double>(st.syndrome_errors) / n;
    st.avg_iterations = static_cast<double>(total_iterations) / n;
    st.avg_list_size = static_cast<double>(total_list) / n;
    st.censored = !stop;
    st.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return st;
}

inline AggregateStats run_point(const SimConfig& cfg, double p, uint64_t point_index = 0) {
    StabilizerCode code = build_surface_code(cfg.d);
    return run_point(cfg, code, p, point_index);
}

inline constexpr const char* kCsvHeader =
    "decoder,d,p,q,trials,logical_errors,logical_error_rate,syndrome_errors,syndrome_error_rate,avg_iterations,"
    "avg_list_size,seed";

inline std::string format_g6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::string csv_row(const AggregateStats& s) {
    std::ostringstream os;
    os << s.decoder << ',' << s.d << ',' << format_g6(s.p) << ',' << format_g6(s.q) << ',' << s.trials << ','
       << s.logical_errors << ',' << format_g6(s.logical_error_rate) << ',' << s.syndrome_errors << ','
       << format_g6(s.syndrome_error_rate) << ',' << format_g6(s.avg_iterations) << ','
       << format_g6(s.avg_list_size) << ',' << s.seed;
    return os.str();
}

inline std::string to_csv(const std::vector<AggregateStats>& rows) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& r : rows) {
        out += csv_row(r) + "\n";
    }
    return out;
}

/// Runs every grid point and writes the CSV to cfg.out (if set). Progress goes to `log`.
inline std::vector<AggregateStats> run_sweep(const SimConfig& cfg, std::ostream& log = std::cerr) {
    cfg.validate();
    std::vector<double> grid = resolve_grid(cfg);
    if (grid.empty()) {
        throw std::invalid_argument("run_sweep: empty p grid");
    }
    std::ofstream file;
    if (!cfg.out.empty()) {
        file.open(cfg.out, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw std::runtime_error("run_sweep: cannot open '" + cfg.out + "' for writing");
        }
    }
    StabilizerCode code = build_surface_code(cfg.d);
    std::vector<AggregateStats> rows;
    for (size_t i = 0; i < grid.size(); i++) {
        AggregateStats st = run_point(cfg, code, grid[i], i);
        auto [lo, hi] = wilson_interval(st.logical_errors, st.trials);
        log << "[" << (i + 1) << "/" << grid.size() << "] " << st.decoder << " p=" << format_g6(st.p)
            << " trials=" << st.trials << " LER=" << format_g6(st.logical_error_rate) << " [" << format_g6(lo)
            << ", " << format_g6(hi) << "] SER=" << format_g6(st.syndrome_error_rate)
            << (st.censored ? " (censored)" : "") << " " << format_g6(st.wall_time) << "s\n";
        rows.push_back(st);
    }
    if (file.is_open()) {
        file << to_csv(rows);
        if (!file) {
            throw std::runtime_error("run_sweep: failed writing '" + cfg.out + "'");
        }
    }
    return rows;
}

/// JSON keys are the CLI flag names without dashes (e.g. "pmin", "targeterrors").
inline void apply_json(SimConfig& cfg, const nlohmann::json& j) {
    for (const auto& [key, value] : j.items()) {
        if (key == "d") {
            cfg.d = value.get<int>();
        } else if (key == "decoder") {
            cfg.decoder = parse_decoder(value.get<std::string>());
        } else if (key == "p") {
            cfg.p = value.is_array() ? value.get<std::vector<double>>() : std::vector<double>{value.get<double>()};
        } else if (key == "pmin") {
            cfg.p_min = value.get<double>();
        } else if (key == "pmax") {
            cfg.p_max = value.get<double>();
        } else if (key == "pointsperdecade") {
            cfg.points_per_decade = value.get<int>();
        } else if (key == "q") {
            cfg.q = value.get<double>();
        } else if (key == "tmax") {
            cfg.t_max = value.get<int>();
        } else if (key == "alpha1") {
            cfg.alpha1 = value.get<double>();
        } else if (key == "alpha2") {
            cfg.alpha2 = value.get<double>();
        } else if (key == "beta") {
            cfg.beta = value.get<double>();
        } else if (key == "delta") {
            cfg.delta = value.get<int>();
        } else if (key == "lmax") {
            cfg.l_max = value.get<size_t>();
        } else if (key == "seed") {
            cfg.seed = value.get<uint64_t>();
        } else if (key == "maxtrials") {
            cfg.max_trials = value.get<uint64_t>();
        } else if (key == "targeterrors") {
            cfg.target_errors = value.get<uint64_t>();
        } else if (key == "out") {
            cfg.out = value.get<std::string>();
        } else if (key == "threads") {
            cfg.threads = value.get<int>();
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
}

inline nlohmann::json to_json(const SimConfig& cfg) {
    return nlohmann::json{
        {"d", cfg.d},
        {"decoder", decoder_name(cfg.decoder)},
        {"p", resolve_grid(cfg)},
        {"pmin", cfg.p_min},
        {"pmax", cfg.p_max},
        {"pointsperdecade", cfg.points_per_decade},
        {"q", cfg.q},
        {"tmax", cfg.t_max},
        {"alpha1", cfg.alpha1},
        {"alpha2", cfg.alpha2},
        {"beta", cfg.beta},
        {"delta", cfg.delta},
        {"lmax", cfg.l_max},
        {"seed", cfg.seed},
        {"maxtrials", cfg.max_trials},
        {"targeterrors", cfg.target_errors},
        {"out", cfg.out},
        {"threads", cfg.threads},
    };
}

}  // namespace bplcosd
