#include "fssqm/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fssqm {

namespace {

using RawJson = nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw config_error("config: " + msg); }

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

const RawJson& need(const RawJson& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) fail(std::string("missing key \"") + key + "\"");
    return *it;
}

Complex parse_complex(const RawJson& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        fail(where + ": complex numbers are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Complex> parse_complex_list(const RawJson& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where + ": expected a non-empty array");
    std::vector<Complex> out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(parse_complex(v, where));
    return out;
}

ComponentFunction parse_component(const RawJson& j, int index) {
    const std::string where = "f[" + std::to_string(index) + "]";
    if (!j.is_object()) fail(where + ": expected an object");
    const std::string kind = need(j, "kind").get<std::string>();
    if (kind == "poly") {
        auto c = parse_complex_list(need(j, "coeffs"), where + ".coeffs");
        if (c.size() > 9) fail(where + ": poly degree must be <= 8");
        return ComponentFunction::poly(std::move(c));
    }
    if (kind == "table")
        return ComponentFunction::table(parse_complex_list(need(j, "values"), where + ".values"));
    fail(where + ": unknown kind \"" + kind + "\" (expected \"poly\" or \"table\")");
}

StructureFunctionSpec parse_structure(const RawJson& j, int lambda) {
    if (!j.is_object()) fail("structure_function: expected an object");
    StructureFunctionSpec spec;
    const std::string kind = need(j, "kind").get<std::string>();
    if (kind == "oscillator") {
        spec.kind = StructureKind::Oscillator;
    } else if (kind == "c_lambda_extended") {
        spec.kind = StructureKind::CLambdaExtended;
        spec.lambda = lambda;
        const RawJson& a = need(j, "alpha");
        if (!a.is_array() || static_cast<int>(a.size()) != lambda)
            fail("structure_function.alpha: expected " + std::to_string(lambda) + " numbers");
        for (const auto& v : a) {
            if (!v.is_number()) fail("structure_function.alpha: expected numbers");
            spec.alpha.push_back(v.get<double>());
        }
    } else if (kind == "table") {
        spec.kind = StructureKind::Table;
        const RawJson& vals = need(j, "values");
        if (!vals.is_array() || vals.empty()) fail("structure_function.values: expected numbers");
        for (const auto& v : vals) {
            if (!v.is_number()) fail("structure_function.values: expected numbers");
            spec.values.push_back(v.get<double>());
        }
    } else {
        fail("structure_function.kind: unknown kind \"" + kind + "\"");
    }
    return spec;
}

}  // namespace

ModelConfig parse_model_config(const std::string& text) {
    RawJson j;
    try {
        j = RawJson::parse(text);
    } catch (const RawJson::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw config_error("config: JSON parse error at line " + std::to_string(line) +
                           ", column " + std::to_string(col) + ": " + e.what());
    }
    if (!j.is_object()) fail("top level must be an object");

    ModelConfig cfg;
    const RawJson& lam = need(j, "lambda");
    if (!lam.is_number_integer() || lam.get<long>() < 2)
        fail("lambda must be an integer >= 2");
    cfg.lambda = lam.get<int>();

    const RawJson& dim = need(j, "fock_dimension");
    if (!dim.is_number_integer() || dim.get<long>() < 4L * cfg.lambda)
        fail("fock_dimension must be an integer >= 4*lambda = " +
             std::to_string(4 * cfg.lambda));
    cfg.fock_dimension = dim.get<int>();

    if (j.contains("tolerance")) {
        const RawJson& tol = j["tolerance"];
        if (!tol.is_number() || tol.get<double>() <= 0.0) fail("tolerance must be > 0");
        cfg.tolerance = tol.get<double>();
    }

    cfg.structure_function = parse_structure(need(j, "structure_function"), cfg.lambda);

    const RawJson& f = need(j, "f");
    if (!f.is_array() || static_cast<int>(f.size()) != cfg.lambda)
        fail("f must be an array of lambda = " + std::to_string(cfg.lambda) +
             " component functions");
    for (int i = 0; i < cfg.lambda; ++i) cfg.f.push_back(parse_component(f[i], i));
    return cfg;
}

ModelConfig load_model_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("config: cannot read \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_config(buf.str());
}

FssqmModel build_from_config(const ModelConfig& cfg) {
    return build_model(cfg.structure_function, cfg.lambda, cfg.fock_dimension, cfg.f,
                       cfg.tolerance);
}

std::string num_str(double v) {
    char buf[40];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return {buf, p};
}

namespace {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json component_json(const ComponentFunction& f) {
    Json j;
    if (f.kind == ComponentFunction::Kind::Poly) {
        j["kind"] = "poly";
        Json c = Json::array();
        for (Complex z : f.coeffs) c.push_back(complex_json(z));
        j["coeffs"] = std::move(c);
    } else {
        j["kind"] = "table";
        Json v = Json::array();
        for (Complex z : f.values) v.push_back(complex_json(z));
        j["values"] = std::move(v);
    }
    return j;
}

Json level_json(const SpectrumLevel& level) {
    Json members = Json::array();
    for (const auto& m : level.members)
        members.push_back(Json{{"block", m.block}, {"fock", m.fock},
                               {"grade", complex_json(m.grade)}});
    return Json{{"energy", level.energy},
                {"multiplicity", level.multiplicity},
                {"members", std::move(members)}};
}

}  // namespace

Json config_json(const ModelConfig& cfg) {
    Json sf;
    switch (cfg.structure_function.kind) {
        case StructureKind::Oscillator:
            sf = Json{{"kind", "oscillator"}};
            break;
        case StructureKind::CLambdaExtended:
            sf = Json{{"kind", "c_lambda_extended"},
                      {"alpha", cfg.structure_function.alpha}};
            break;
        case StructureKind::Table:
            sf = Json{{"kind", "table"}, {"values", cfg.structure_function.values}};
            break;
    }
    Json f = Json::array();
    for (const auto& fi : cfg.f) f.push_back(component_json(fi));
    return Json{{"lambda", cfg.lambda},
                {"fock_dimension", cfg.fock_dimension},
                {"tolerance", cfg.tolerance},
                {"structure_function", std::move(sf)},
                {"f", std::move(f)}};
}

Json relations_json(const std::vector<RelationResult>& results) {
    Json arr = Json::array();
    for (const auto& r : results)
        arr.push_back(Json{{"name", r.name},
                           {"reference", r.reference},
                           {"residual", r.residual},
                           {"tolerance", r.tolerance},
                           {"passed", r.passed}});
    return arr;
}

Json spectrum_json(const SpectrumReport& report) {
    Json levels = Json::array();
    for (const auto& level : report.levels) levels.push_back(level_json(level));
    return Json{{"zero_tol", report.zero_tol}, {"levels", std::move(levels)}};
}

Json topology_json(const TopologyReport& topo) {
    Json grades = Json::array();
    for (Complex g : topo.grades) grades.push_back(complex_json(g));
    return Json{{"grades", std::move(grades)},
                {"multiplicities", topo.multiplicities},
                {"zero_mode_counts", topo.zero_mode_counts},
                {"delta", topo.delta}};
}

Json sector_json(const SectorReport& sector, const TopologyReport& invariants) {
    Json levels = Json::array();
    const std::size_t count = std::min<std::size_t>(3, sector.levels.size());
    for (std::size_t k = 0; k < count; ++k)
        levels.push_back(Json{{"energy", sector.levels[k].energy},
                              {"multiplicity", sector.levels[k].multiplicity}});
    return Json{{"mu", sector.mu},
                {"classification", to_string(sector.classification)},
                {"ground_energy", sector.ground_energy},
                {"ground_degeneracy", sector.ground_degeneracy},
                {"levels", std::move(levels)},
                {"invariants", topology_json(invariants)},
                {"crosscheck_residual", sector.crosscheck_residual}};
}

std::string relations_csv(const std::vector<RelationResult>& results) {
    std::string out = "name,reference,residual,tolerance,passed\n";
    for (const auto& r : results) {
        out += r.name + ",\"" + r.reference + "\"," + num_str(r.residual) + "," +
               num_str(r.tolerance) + "," + (r.passed ? "1" : "0") + "\n";
    }
    return out;
}

std::string spectrum_csv(const SpectrumReport& analytic, const SpectrumReport& numeric) {
    std::string out =
        "level,analytic_energy,analytic_multiplicity,numeric_energy,numeric_multiplicity\n";
    const std::size_t n = std::max(analytic.levels.size(), numeric.levels.size());
    for (std::size_t k = 0; k < n; ++k) {
        out += std::to_string(k) + ",";
        if (k < analytic.levels.size())
            out += num_str(analytic.levels[k].energy) + "," +
                   std::to_string(analytic.levels[k].multiplicity);
        else
            out += ",";
        out += ",";
        if (k < numeric.levels.size())
            out += num_str(numeric.levels[k].energy) + "," +
                   std::to_string(numeric.levels[k].multiplicity);
        else
            out += ",";
        out += "\n";
    }
    return out;
}

std::string sectors_csv(const std::vector<SectorReport>& sectors,
                        const std::vector<TopologyReport>& invariants, int lambda) {
    std::string out = "mu,classification,ground_energy,ground_degeneracy,E0,E1,E2";
    for (int i = 1; i <= lambda; ++i)
        for (int j = i + 1; j <= lambda; ++j)
            out += ",delta_" + std::to_string(i) + "_" + std::to_string(j);
    out += "\n";
    for (std::size_t s = 0; s < sectors.size(); ++s) {
        const auto& sec = sectors[s];
        out += std::to_string(sec.mu) + "," + to_string(sec.classification) + "," +
               num_str(sec.ground_energy) + "," + std::to_string(sec.ground_degeneracy);
        for (std::size_t k = 0; k < 3; ++k)
            out += "," + (k < sec.levels.size() ? num_str(sec.levels[k].energy) : "");
        for (int i = 1; i <= lambda; ++i)
            for (int j = i + 1; j <= lambda; ++j)
                out += "," + std::to_string(invariants[s].delta[i - 1][j - 1]);
        out += "\n";
    }
    return out;
}

}  // namespace fssqm
