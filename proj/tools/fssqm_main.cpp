#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fssqm/config.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace fssqm;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct CommonOpts {
    std::string config_path;
    std::string format = "json";
    std::string out_path;  // empty = stdout
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "model config (JSON)")->required();
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", opts.out_path, "output file (default stdout)");
}

void emit(const CommonOpts& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) throw config_error("cannot write \"" + opts.out_path + "\"");
    out << text;
}

ModelConfig load_with_env(const std::string& path) {
    ModelConfig cfg = load_model_config(path);
    if (const char* env = std::getenv("FSSQM_TOL")) {
        char* end = nullptr;
        const double tol = std::strtod(env, &end);
        if (end == env || *end != '\0' || tol <= 0.0)
            throw config_error("FSSQM_TOL must be a positive number, got \"" +
                               std::string(env) + "\"");
        cfg.tolerance = tol;
    }
    return cfg;
}

int cmd_verify(const CommonOpts& opts) {
    const auto t0 = Clock::now();
    const ModelConfig cfg = load_with_env(opts.config_path);
    const FssqmModel model = build_from_config(cfg);
    const double build_ms = ms_since(t0);

    const auto t1 = Clock::now();
    const auto results = audit(model, cfg.tolerance);
    const double audit_ms = ms_since(t1);
    const bool ok = all_passed(results);

    if (opts.format == "csv") {
        emit(opts, relations_csv(results));
    } else {
        Json report{{"config", config_json(cfg)},
                    {"relations", relations_json(results)},
                    {"all_passed", ok},
                    {"timings", Json{{"build_ms", build_ms}, {"audit_ms", audit_ms}}}};
        emit(opts, report.dump(2) + "\n");
    }
    return ok ? 0 : 2;
}

int cmd_spectrum(const CommonOpts& opts, int levels) {
    const auto t0 = Clock::now();
    const ModelConfig cfg = load_with_env(opts.config_path);
    const FssqmModel model = build_from_config(cfg);
    const SpectrumReport analytic = analytic_spectrum(model, levels);
    const SpectrumReport numeric = numeric_spectrum(model, levels);
    const bool match = spectra_match(analytic, numeric, cfg.tolerance);

    if (opts.format == "csv") {
        emit(opts, spectrum_csv(analytic, numeric));
    } else {
        Json report{{"config", config_json(cfg)},
                    {"levels", levels},
                    {"analytic", spectrum_json(analytic)},
                    {"numeric", spectrum_json(numeric)},
                    {"match", match},
                    {"timings", Json{{"total_ms", ms_since(t0)}}}};
        emit(opts, report.dump(2) + "\n");
    }
    return match ? 0 : 2;
}

int cmd_sectors(const CommonOpts& opts) {
    const auto t0 = Clock::now();
    const ModelConfig cfg = load_with_env(opts.config_path);
    const FssqmModel model = build_from_config(cfg);

    std::vector<SectorReport> sectors;
    std::vector<TopologyReport> invariants;
    for (int mu = 0; mu < model.lambda; ++mu) {
        sectors.push_back(reduce_sector(model, mu));
        invariants.push_back(sector_invariants(model, mu));
    }

    if (opts.format == "csv") {
        emit(opts, sectors_csv(sectors, invariants, model.lambda));
    } else {
        Json arr = Json::array();
        for (int mu = 0; mu < model.lambda; ++mu)
            arr.push_back(sector_json(sectors[mu], invariants[mu]));
        Json report{{"config", config_json(cfg)},
                    {"topology", topology_json(topological_invariants(model))},
                    {"sectors", std::move(arr)},
                    {"timings", Json{{"total_ms", ms_since(t0)}}}};
        emit(opts, report.dump(2) + "\n");
    }
    return 0;
}

struct ScanRow {
    int step = 0;
    double value = 0.0;
    bool valid = false;
    bool audit_pass = false;
    std::vector<std::string> classifications;
    std::vector<int> ground_degeneracy;
    std::string error;
};

int cmd_scan(const CommonOpts& opts, int alpha_index, int compensate_index,
             double from, double to, int steps) {
    const ModelConfig base = load_with_env(opts.config_path);
    if (base.structure_function.kind != StructureKind::CLambdaExtended)
        throw config_error("scan requires a c_lambda_extended structure function");
    const int lam = base.lambda;
    if (alpha_index < 0 || alpha_index >= lam)
        throw config_error("scan: alpha index out of range 0..lambda-1");
    if (compensate_index < 0) compensate_index = (alpha_index + 1) % lam;
    if (compensate_index >= lam || compensate_index == alpha_index)
        throw config_error("scan: compensate index must differ from the scanned index");
    if (steps < 1) throw config_error("scan: steps must be >= 1");
    if (from == to) steps = 1;

    std::vector<ScanRow> rows(steps);
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < steps; ++k) {
        ScanRow row;
        row.step = k;
        row.value = steps == 1 ? from : from + k * (to - from) / (steps - 1);
        ModelConfig cfg = base;
        auto& alpha = cfg.structure_function.alpha;
        const double shift = row.value - alpha[alpha_index];
        alpha[alpha_index] = row.value;
        alpha[compensate_index] -= shift;  // keep sum(alpha) = 0
        try {
            const FssqmModel model = build_from_config(cfg);
            row.valid = true;
            row.audit_pass = all_passed(audit(model, cfg.tolerance));
            for (int mu = 0; mu < lam; ++mu) {
                const SectorReport sector = reduce_sector(model, mu);
                row.classifications.push_back(to_string(sector.classification));
                row.ground_degeneracy.push_back(sector.ground_degeneracy);
            }
        } catch (const std::exception& e) {
            row.valid = false;
            row.error = e.what();
        }
        rows[k] = std::move(row);
    }

    if (opts.format == "csv") {
        std::string out = "step,alpha_" + std::to_string(alpha_index) + ",valid,audit_pass";
        for (int mu = 0; mu < lam; ++mu)
            out += ",class_mu" + std::to_string(mu) + ",ground_deg_mu" + std::to_string(mu);
        out += "\n";
        for (const auto& row : rows) {
            out += std::to_string(row.step) + "," + num_str(row.value) + "," +
                   (row.valid ? "1" : "0") + "," + (row.audit_pass ? "1" : "0");
            for (int mu = 0; mu < lam; ++mu) {
                if (row.valid)
                    out += "," + row.classifications[mu] + "," +
                           std::to_string(row.ground_degeneracy[mu]);
                else
                    out += ",,";
            }
            out += "\n";
        }
        emit(opts, out);
    } else {
        Json arr = Json::array();
        for (const auto& row : rows) {
            Json j{{"step", row.step},
                   {"alpha", row.value},
                   {"valid", row.valid},
                   {"audit_pass", row.audit_pass}};
            if (row.valid) {
                j["classifications"] = row.classifications;
                j["ground_degeneracy"] = row.ground_degeneracy;
            } else {
                j["error"] = row.error;
            }
            arr.push_back(std::move(j));
        }
        Json report{{"config", config_json(base)},
                    {"scan", Json{{"alpha_index", alpha_index},
                                  {"compensate_index", compensate_index},
                                  {"from", from},
                                  {"to", to},
                                  {"steps", steps}}},
                    {"rows", std::move(arr)}};
        emit(opts, report.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional supersymmetry models on deformed-oscillator Fock spaces"};
    app.require_subcommand(1);

    CommonOpts verify_opts, spectrum_opts, sectors_opts, scan_opts;
    int levels = 6;
    int alpha_index = 0, compensate_index = -1, steps = 1;
    double from = 0.0, to = 0.0;

    CLI::App* verify = app.add_subcommand("verify", "audit every defining operator identity");
    add_common(verify, verify_opts);

    CLI::App* spectrum =
        app.add_subcommand("spectrum", "analytic and numeric spectra side by side");
    add_common(spectrum, spectrum_opts);
    spectrum->add_option("--levels", levels, "number of levels")->check(CLI::PositiveNumber);

    CLI::App* sectors = app.add_subcommand("sectors", "per-sector reduction and invariants");
    add_common(sectors, sectors_opts);

    CLI::App* scan = app.add_subcommand("scan", "sweep one alpha parameter");
    add_common(scan, scan_opts);
    scan->add_option("--alpha-index", alpha_index, "alpha index to sweep")->required();
    scan->add_option("--compensate-index", compensate_index,
                     "alpha index absorbing the shift (default: next)");
    scan->add_option("--from", from, "first value")->required();
    scan->add_option("--to", to, "last value")->required();
    scan->add_option("--steps", steps, "number of rows")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (verify->parsed()) return cmd_verify(verify_opts);
        if (spectrum->parsed()) return cmd_spectrum(spectrum_opts, levels);
        if (sectors->parsed()) return cmd_sectors(sectors_opts);
        if (scan->parsed())
            return cmd_scan(scan_opts, alpha_index, compensate_index, from, to, steps);
    } catch (const consistency_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
