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

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "bplcosd/harness.h"
#include "bplcosd/selftest.h"
#include "json.hpp"

using nlohmann::json;
using namespace bplcosd;

namespace {

json read_json_file(const std::string& path) {
    if (path == "-") {
        return json::parse(std::cin);
    }
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open '" + path + "'");
    }
    return json::parse(in);
}

/// Rows are Pauli strings ("XZZXI") or 2n-bit binary rows ("10010 01100").
StabilizerCode code_from_json_rows(const json& rows) {
    std::vector<std::string> text = rows.get<std::vector<std::string>>();
    if (text.empty()) {
        throw std::invalid_argument("decode: H has no rows");
    }
    if (text.front().find_first_of("IXYZ") != std::string::npos) {
        return code_from_stabilizers(text);
    }
    std::vector<std::string_view> views(text.begin(), text.end());
    BitMatrix h = BitMatrix::from_rows(views);
    if (h.cols() % 2 != 0) {
        throw std::invalid_argument("decode: binary rows must have even length 2n");
    }
    StabilizerCode code;
    code.n = h.cols() / 2;
    code.h = h;
    code.k = code.n - rank(h);
    return code;
}

json decode_one(const json& in) {
    StabilizerCode code;
    if (in.contains("H")) {
        code = code_from_json_rows(in.at("H"));
    } else if (in.contains("d")) {
        code = build_surface_code(in.at("d").get<int>());
    } else {
        throw std::invalid_argument("decode: input needs either \"H\" or \"d\"");
    }
    BitVec z = BitVec::from_string(in.at("z").get<std::string>());
    if (z.size() != code.num_checks()) {
        throw std::invalid_argument("decode: z has the wrong length for this code");
    }
    NoiseModel noise{in.at("p").get<double>(), in.value("q", 1e-5)};
    noise.validate();

    SimConfig cfg;
    std::string decoder = "bp-lcosd";
    if (in.contains("params")) {
        json params = in.at("params");
        if (params.contains("decoder")) {
            decoder = params.at("decoder").get<std::string>();
            params.erase("decoder");
        }
        apply_json(cfg, params);
    }
    cfg.decoder = parse_decoder(decoder);
    cfg.validate();

    json out;
    switch (cfg.decoder) {
        case DecoderKind::BpLcosd: {
            BpLcosdDecoder dec(code, cfg.pipeline());
            DecodeResult r = dec.decode(z, noise);
            out = {{"e_hat", r.e_hat.str()}, {"sigma_hat", r.sigma_hat.str()}, {"path", path_name(r.path)}};
            out["list_size"] = r.list_size_used;
            out["iterations"] = r.iterations_stage1 + r.iterations_stage2;
            break;
        }
        case DecoderKind::Bp:
        case DecoderKind::Nms: {
            TannerGraph graph = TannerGraph::from_code(code);
            double alpha = cfg.decoder == DecoderKind::Bp ? cfg.alpha2 : cfg.alpha1;
            BpOutput r = bp_decode(graph, init_llrs(code, noise, z), BpConfig{cfg.t_max, alpha, LLR_MAX});
            out = {{"e_hat", r.hard_pauli.str()}, {"sigma_hat", r.hard_syndrome.str()}, {"path", "bp"}};
            out["converged"] = r.converged;
            out["iterations"] = r.iterations_used;
            break;
        }
        case DecoderKind::Mwpm: {
            PauliVector e = mwpm_decode(code, z);
            out = {{"e_hat", e.str()}, {"sigma_hat", z.str()}, {"path", "mwpm"}};
            break;
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BP-LCOSD decoding and Monte Carlo simulation for stabilizer codes"};
    app.require_subcommand(1);

    SimConfig cfg;
    std::string decoder = decoder_name(cfg.decoder);
    std::string config_path;
    std::string dump_path;
    CLI::App* sim = app.add_subcommand("simulate", "Sweep a p grid on the distance-d surface code and write CSV");
    sim->add_option("--d", cfg.d, "Surface code distance")->capture_default_str();
    sim->add_option("--decoder", decoder, "bp, nms, bp-lcosd or mwpm")->capture_default_str();
    sim->add_option("--p", cfg.p, "Explicit depolarizing rates (overrides the generated grid)");
    sim->add_option("--p-min", cfg.p_min)->capture_default_str();
    sim->add_option("--p-max", cfg.p_max)->capture_default_str();
    sim->add_option("--points-per-decade", cfg.points_per_decade)->capture_default_str();
    sim->add_option("--q", cfg.q, "Syndrome flip rate")->capture_default_str();
    sim->add_option("--tmax", cfg.t_max, "BP iterations per stage")->capture_default_str();
    sim->add_option("--alpha1", cfg.alpha1)->capture_default_str();
    sim->add_option("--alpha2", cfg.alpha2)->capture_default_str();
    sim->add_option("--beta", cfg.beta, "Syndrome LLR weight")->capture_default_str();
    sim->add_option("--delta", cfg.delta, "Local constraint degree")->capture_default_str();
    sim->add_option("--lmax", cfg.l_max, "Maximum LCOSD list size")->capture_default_str();
    sim->add_option("--seed", cfg.seed)->capture_default_str();
    sim->add_option("--max-trials", cfg.max_trials)->capture_default_str();
    sim->add_option("--target-errors", cfg.target_errors, "0 disables early stopping")->capture_default_str();
    sim->add_option("--out", cfg.out, "CSV path (stdout if empty)");
    sim->add_option("--threads", cfg.threads)->capture_default_str();
    sim->add_option("--config", config_path, "JSON file; its keys override the flags");
    sim->add_option("--dump-config", dump_path, "Write the resolved config as JSON");

    std::string decode_input = "-";
    CLI::App* dec = app.add_subcommand("decode", "Decode one syndrome given as JSON");
    dec->add_option("input", decode_input, "JSON file, or - for stdin")->capture_default_str();

    size_t samples = 1000;
    CLI::App* self = app.add_subcommand("selftest", "Check the reference vectors");
    self->add_option("--samples", samples, "Null-space samples per code")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            cfg.decoder = parse_decoder(decoder);
            if (!config_path.empty()) {
                apply_json(cfg, read_json_file(config_path));
            }
            cfg.validate();
            if (!dump_path.empty()) {
                std::ofstream f(dump_path);
                if (!f) {
                    throw std::runtime_error("cannot open '" + dump_path + "'");
                }
                f << to_json(cfg).dump(2) << "\n";
            }
            std::vector<AggregateStats> rows = run_sweep(cfg);
            if (cfg.out.empty()) {
                std::cout << to_csv(rows);
            }
            return 0;
        }
        if (*dec) {
            std::cout << decode_one(read_json_file(decode_input)).dump() << "\n";
            return 0;
        }
        if (*self) {
            int failed = 0;
            for (const SelftestCheck& c : run_selftest(samples)) {
                std::cout << (c.passed ? "ok   " : "FAIL ") << c.name;
                if (!c.passed && !c.detail.empty()) {
                    std::cout << " (" << c.detail << ")";
                }
                std::cout << "\n";
                failed += !c.passed;
            }
            return failed ? 1 : 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
