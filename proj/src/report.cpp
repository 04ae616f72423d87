#include "obstrukt/report.hpp"

#include "obstrukt/errors.hpp"
#include "obstrukt/format.hpp"
#include "obstrukt/probes.hpp"
#include "obstrukt/trivialize.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace obstrukt {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v)
{
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) throw InvalidParameter("bad number for " + key + ": '" + v + "'");
    return out;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& v)
{
    Int out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) throw InvalidParameter("bad integer for " + key + ": '" + v + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw InvalidParameter("bad boolean for " + key + ": '" + v + "'");
}

void write_canonical(std::string& out, const nlohmann::json& j)
{
    using T = nlohmann::json::value_t;
    switch (j.type()) {
    case T::object: {
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) { // std::map order: sorted keys
            if (!first) out += ',';
            first = false;
            out += nlohmann::json(it.key()).dump();
            out += ':';
            write_canonical(out, it.value());
        }
        out += '}';
        break;
    }
    case T::array: {
        out += '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ',';
            write_canonical(out, j[i]);
        }
        out += ']';
        break;
    }
    case T::number_float: {
        const double v = j.get<double>();
        out += std::isfinite(v) ? fmt17(v) : "null";
        break;
    }
    default: out += j.dump(); break;
    }
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out)
{
    if (config.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(config.out, std::ios::binary);
    if (!f) throw InvalidParameter("cannot write " + config.out);
    f << text;
}

std::vector<int> selected_bands(const RunConfig& config, const CatalogEntry& entry)
{
    const int m = entry.symbol.m();
    if (config.band) {
        if (*config.band < 0 || *config.band >= m)
            throw InvalidParameter("band " + std::to_string(*config.band) + " out of range for " + entry.symbol.id());
        return {*config.band};
    }
    std::vector<int> all(static_cast<std::size_t>(m));
    for (int b = 0; b < m; ++b) all[static_cast<std::size_t>(b)] = b;
    return all;
}

nlohmann::json timing_json(bool timing, std::chrono::steady_clock::time_point t0)
{
    nlohmann::json t = nlohmann::json::object();
    if (timing) t["total_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return t;
}

nlohmann::json document(const RunConfig& config)
{
    nlohmann::json doc;
    doc["version"] = kToolVersion;
    doc["config"] = config_json(config);
    doc["validation"] = nlohmann::json::object();
    doc["verdicts"] = nlohmann::json::array();
    doc["timing"] = nlohmann::json::object();
    return doc;
}

} // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = {"command", "kind",  "id",     "band",      "n",
                                                  "seed",    "out",   "timing", "lambda",    "mu",
                                                  "c_plus",  "c_minus", "s",    "conformal", "radius",
                                                  "framing_twist"};
    return keys;
}

const std::map<std::string, std::string>& parameter_flags()
{
    static const std::map<std::string, std::string> flags = {
        {"lambda", "--lambda"}, {"mu", "--mu"},           {"c_plus", "--c-plus"}, {"c_minus", "--c-minus"},
        {"s", "--s"},           {"conformal", "--conformal"}, {"radius", "--radius"}, {"framing_twist", "--framing-twist"}};
    return flags;
}

RunConfig parse_config(const std::string& text, RunConfig base)
{
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InvalidParameter("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key == "command") base.command = value;
        else if (key == "kind") base.export_kind = value;
        else if (key == "id") base.symbol_id = value;
        else if (key == "band") {
            if (value == "all") base.band.reset();
            else base.band = parse_int<int>(key, value);
        } else if (key == "n") base.n = parse_int<int>(key, value);
        else if (key == "seed") base.seed = parse_int<std::uint64_t>(key, value);
        else if (key == "out") base.out = value;
        else if (key == "timing") base.timing = parse_bool(key, value);
        else if (parameter_flags().count(key)) base.params[key] = parse_double(key, value);
        else throw InvalidParameter("unknown config key '" + key + "'");
    }
    return base;
}

std::string serialize_config(const RunConfig& c)
{
    std::string s;
    auto put = [&](const std::string& k, const std::string& v) { s += k + "=" + v + "\n"; };
    put("command", c.command);
    put("kind", c.export_kind);
    put("id", c.symbol_id);
    put("band", c.band ? std::to_string(*c.band) : "all");
    put("n", std::to_string(c.n));
    put("seed", std::to_string(c.seed));
    put("out", c.out);
    put("timing", c.timing ? "true" : "false");
    for (const auto& [k, v] : c.params) put(k, fmt17(v));
    return s;
}

bool valid_resolution(int n)
{
    if (n < 8 || n % 8 != 0) return false;
    const int k = n / 8;
    return (k & (k - 1)) == 0;
}

void check_config(const RunConfig& c)
{
    static const std::vector<std::string> commands = {"list", "validate", "verdict", "suite", "export"};
    if (std::find(commands.begin(), commands.end(), c.command) == commands.end())
        throw InvalidParameter("unknown command '" + c.command + "'");
    if (!valid_resolution(c.n)) throw InvalidParameter("n must be a power-of-two multiple of 8, got " + std::to_string(c.n));
    if (c.command == "validate" || c.command == "verdict" || c.command == "export") {
        const auto& ids = catalog_ids();
        if (std::find(ids.begin(), ids.end(), c.symbol_id) == ids.end())
            throw InvalidParameter("unknown catalog id '" + c.symbol_id + "'");
    }
    if (c.command == "export" && c.export_kind != "mesh" && c.export_kind != "curvature" && c.export_kind != "gauge")
        throw InvalidParameter("unknown export kind '" + c.export_kind + "'");
}

std::string canonical_json(const nlohmann::json& j)
{
    std::string out;
    write_canonical(out, j);
    out += '\n';
    return out;
}

nlohmann::json to_json(const InvariantReport& r, bool timing)
{
    nlohmann::json j;
    j["kind"] = std::string(kind_name(r.kind));
    j["probe"] = r.probe;
    if (r.kind == InvariantKind::BerryPhase) j["value"] = r.value;
    else j["value"] = r.quantized();
    j["raw"] = r.raw;
    j["residual"] = r.residual;
    j["max_plaquette_phase"] = r.max_plaquette_phase;
    j["resolution"] = r.resolution;
    j["admissible"] = r.admissible;
    j["trusted"] = r.trusted();
    if (r.kind == InvariantKind::Torsion) {
        j["loop_phase"] = r.loop_phase;
        j["flux"] = r.flux;
    }
    if (timing) j["wall_time"] = r.wall_time;
    return j;
}

nlohmann::json to_json(const Verdict& v, bool timing)
{
    nlohmann::json j;
    j["question"] = std::string(question_name(v.question));
    j["band"] = v.band;
    j["obstructed"] = v.obstructed;
    j["branch"] = v.theorem_branch;
    j["evidence"] = nlohmann::json::array();
    for (const auto& e : v.evidence) j["evidence"].push_back(to_json(e, timing));
    return j;
}

nlohmann::json to_json(const ValidationReport& r)
{
    nlohmann::json j;
    j["symbol_id"] = r.symbol_id;
    j["samples"] = r.samples;
    j["max_hermitian_defect"] = r.max_hermitian_defect;
    j["max_homogeneity_defect"] = r.max_homogeneity_defect;
    j["min_rel_gap"] = r.min_rel_gap;
    j["tol"] = r.tol;
    j["gap_tol"] = r.gap_tol;
    j["passed"] = r.passed;
    j["failures"] = r.failures;
    return j;
}

nlohmann::json config_json(const RunConfig& c)
{
    nlohmann::json j;
    j["command"] = c.command;
    if (!c.export_kind.empty()) j["kind"] = c.export_kind;
    if (!c.symbol_id.empty()) j["id"] = c.symbol_id;
    if (c.band) j["band"] = *c.band;
    else j["band"] = "all";
    j["n"] = c.n;
    j["seed"] = c.seed;
    j["params"] = nlohmann::json::object();
    for (const auto& [k, v] : c.params) j["params"][k] = v;
    return j;
}

// --- suite -------------------------------------------------------------------

bool SuiteRow::matches() const
{
    return error.empty() && local && global && local->obstructed == expected.local_obstructed &&
           global->obstructed == expected.global_obstructed;
}

SuiteResult run_suite(const std::vector<CatalogEntry>& entries, int n, std::uint64_t seed, bool timing)
{
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig config;
    config.command = "suite";
    config.n = n;
    config.seed = seed;
    config.timing = timing;

    SuiteResult result;
    result.document = document(config);
    for (const CatalogEntry& entry : entries) {
        const SymbolField& f = entry.symbol;
        const ValidationReport val = validate_assumptions(f, validation_samples(f.geometry(), seed));
        result.document["validation"][f.id()] = to_json(val);
        for (int b = 0; b < f.m(); ++b) {
            SuiteRow row;
            row.symbol = f.id();
            row.band = b;
            if (b < static_cast<int>(entry.expected.size())) {
                row.expected = entry.expected[static_cast<std::size_t>(b)];
                row.label = row.expected.label;
            } else {
                row.error = "no expectation registered";
            }
            if (!val.passed) {
                row.error = "validation failed";
            } else if (row.error.empty()) {
                try {
                    row.local = local_obstruction(f, registered_base_position(f.geometry()), b, n);
                    row.global = global_obstruction(f, b, n);
                } catch (const Error& e) {
                    row.error = e.what();
                }
            }
            for (const auto* v : {&row.local, &row.global}) {
                if (!*v) continue;
                nlohmann::json j = to_json(**v, timing);
                j["symbol"] = row.symbol;
                j["label"] = row.label;
                j["expected"] = (*v)->question == Question::Local ? row.expected.local_obstructed
                                                                  : row.expected.global_obstructed;
                result.document["verdicts"].push_back(j);
            }
            if (!row.matches()) result.exit_code = kExitMismatch;
            result.rows.push_back(std::move(row));
        }
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : result.rows) {
        nlohmann::json j;
        j["symbol"] = r.symbol;
        j["band"] = r.band;
        j["label"] = r.label;
        j["match"] = r.matches();
        if (!r.error.empty()) j["error"] = r.error;
        rows.push_back(j);
    }
    result.document["table"] = rows;
    result.document["timing"] = timing_json(timing, t0);
    return result;
}

void render_suite_table(std::ostream& os, const SuiteResult& result)
{
    auto word = [](bool obstructed) { return obstructed ? "obstructed" : "unobstructed"; };
    char line[256];
    std::snprintf(line, sizeof line, "%-14s %-5s %-27s %-27s %s\n", "symbol", "band", "local (expected)",
                  "global (expected)", "status");
    os << line;
    for (const auto& r : result.rows) {
        std::string local = "-", global = "-";
        if (r.local) local = std::string(word(r.local->obstructed)) + " (" + word(r.expected.local_obstructed) + ")";
        if (r.global) global = std::string(word(r.global->obstructed)) + " (" + word(r.expected.global_obstructed) + ")";
        std::snprintf(line, sizeof line, "%-14s %-5s %-27s %-27s %s\n", r.symbol.c_str(), r.label.c_str(), local.c_str(),
                      global.c_str(), r.matches() ? "ok" : ("MISMATCH " + r.error).c_str());
        os << line;
    }
}

// --- commands ------------------------------------------------------------------

int cmd_list(std::ostream& out)
{
    char line[256];
    std::snprintf(line, sizeof line, "%-14s %-4s %-2s %-2s %-3s %s\n", "id", "geom", "m", "d", "s", "parameters");
    out << line;
    for (const auto& id : catalog_ids()) {
        const CatalogEntry e = make_entry(id);
        const SymbolField& f = e.symbol;
        std::string params;
        for (const auto& [k, v] : f.params()) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%s%s=%g", params.empty() ? "" : " ", k.c_str(), v);
            params += buf;
        }
        std::snprintf(line, sizeof line, "%-14s %-4s %-2d %-2d %-3g %s\n", id.c_str(),
                      std::string(geometry_name(f.geometry())).c_str(), f.m(), f.d(), f.s(),
                      params.empty() ? "-" : params.c_str());
        out << line;
    }
    return kExitOk;
}

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    const auto t0 = std::chrono::steady_clock::now();
    check_config(config);
    const CatalogEntry entry = make_entry(config.symbol_id, config.params);
    const ValidationReport val =
        validate_assumptions(entry.symbol, validation_samples(entry.symbol.geometry(), config.seed));
    nlohmann::json doc = document(config);
    doc["validation"] = to_json(val);
    doc["timing"] = timing_json(config.timing, t0);
    emit(config, canonical_json(doc), out);
    if (!val.passed) {
        for (const auto& f : val.failures) err << "validation: " << f << '\n';
        return kExitMismatch;
    }
    return kExitOk;
}

int cmd_verdict(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    const auto t0 = std::chrono::steady_clock::now();
    check_config(config);
    const CatalogEntry entry = make_entry(config.symbol_id, config.params);
    const SymbolField& f = entry.symbol;
    const std::vector<int> bands = selected_bands(config, entry);

    nlohmann::json doc = document(config);
    const ValidationReport val = validate_assumptions(f, validation_samples(f.geometry(), config.seed));
    doc["validation"] = to_json(val);
    if (!val.passed) {
        doc["timing"] = timing_json(config.timing, t0);
        emit(config, canonical_json(doc), out);
        for (const auto& msg : val.failures) err << "validation: " << msg << '\n';
        return kExitNumerical;
    }
    for (int b : bands) {
        const Verdict local = local_obstruction(f, registered_base_position(f.geometry()), b, config.n);
        const Verdict global = global_obstruction(f, b, config.n);
        doc["verdicts"].push_back(to_json(local, config.timing));
        doc["verdicts"].push_back(to_json(global, config.timing));
        if (!config.out.empty()) {
            const std::string label =
                b < static_cast<int>(entry.expected.size()) ? entry.expected[static_cast<std::size_t>(b)].label : std::to_string(b);
            out << f.id() << " band " << label << ": local " << (local.obstructed ? "obstructed" : "unobstructed")
                << ", global " << (global.obstructed ? "obstructed" : "unobstructed") << '\n';
        }
    }
    doc["timing"] = timing_json(config.timing, t0);
    emit(config, canonical_json(doc), out);
    return kExitOk;
}

int cmd_suite(const RunConfig& config, std::ostream& out, std::ostream&)
{
    check_config(config);
    if (config.n < 16) throw InvalidParameter("suite needs n >= 16");
    const SuiteResult result = run_suite(default_catalog(), config.n, config.seed, config.timing);
    render_suite_table(out, result);
    if (!config.out.empty()) {
        std::ofstream f(config.out, std::ios::binary);
        if (!f) throw InvalidParameter("cannot write " + config.out);
        f << canonical_json(result.document);
    }
    return result.exit_code;
}

namespace {

std::filesystem::path export_dir(const RunConfig& config)
{
    std::filesystem::path dir = config.out.empty() ? std::filesystem::path(".") : std::filesystem::path(config.out);
    std::filesystem::create_directories(dir);
    return dir;
}

std::ofstream open_csv(const std::filesystem::path& p, std::ostream& out)
{
    std::ofstream f(p, std::ios::binary);
    if (!f) throw InvalidParameter("cannot write " + p.string());
    out << p.string() << '\n';
    return f;
}

void write_curvature_csv(std::ostream& os, const SymbolField& f, int band, const std::vector<CovectorPoint>& vertices,
                         const std::vector<Face>& faces)
{
    const int d = ambient_dimension(f.geometry());
    const auto m = static_cast<std::size_t>(f.m());
    const std::vector<cd> vecs = band_vectors(f, band, vertices);
    os << "face";
    for (int i = 0; i < d; ++i) os << ",x" << i;
    for (int i = 0; i < d; ++i) os << ",xi" << i;
    os << ",phase\n";
    for (std::size_t k = 0; k < faces.size(); ++k) {
        const Face& q = faces[k];
        const int corners = is_triangle(q) ? 3 : 4;
        Vec4 cx{}, cxi{};
        cd z = 1.0;
        for (int i = 0; i < corners; ++i) {
            const auto& p = vertices[q[static_cast<std::size_t>(i)]];
            for (int c = 0; c < 4; ++c) {
                cx[static_cast<std::size_t>(c)] += p.x[static_cast<std::size_t>(c)] / corners;
                cxi[static_cast<std::size_t>(c)] += p.xi[static_cast<std::size_t>(c)] / corners;
            }
            const auto a = q[static_cast<std::size_t>(i)], b = q[static_cast<std::size_t>((i + 1) % corners)];
            z *= inner(std::span<const cd>(vecs.data() + a * m, m), std::span<const cd>(vecs.data() + b * m, m));
        }
        os << k;
        for (int i = 0; i < d; ++i) os << ',' << fmt17(cx[static_cast<std::size_t>(i)]);
        for (int i = 0; i < d; ++i) os << ',' << fmt17(cxi[static_cast<std::size_t>(i)]);
        double phase = -std::arg(z);
        if (phase <= -std::numbers::pi) phase += 2.0 * std::numbers::pi;
        os << ',' << fmt17(phase) << '\n';
    }
}

} // namespace

int cmd_export(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    check_config(config);
    const CatalogEntry entry = make_entry(config.symbol_id, config.params);
    const SymbolField& f = entry.symbol;
    const std::vector<int> bands = selected_bands(config, entry);
    const std::filesystem::path dir = export_dir(config);
    const std::string& id = config.symbol_id;

    if (config.export_kind == "mesh") {
        const ProbeSet ps = probe_set(f.geometry(), config.n);
        for (std::size_t i = 0; i < ps.cycles.size(); ++i) {
            const std::string stem = id + "_probe" + std::to_string(i);
            auto fv = open_csv(dir / (stem + "_vertices.csv"), out);
            write_vertex_csv(fv, ps.cycles[i].vertices);
            auto ff = open_csv(dir / (stem + "_faces.csv"), out);
            write_face_csv(ff, ps.cycles[i].quads);
        }
        if (ps.torsion) {
            auto fl = open_csv(dir / (id + "_loop_vertices.csv"), out);
            write_vertex_csv(fl, ps.torsion->gamma.vertices);
            auto fv = open_csv(dir / (id + "_disc_vertices.csv"), out);
            write_vertex_csv(fv, ps.torsion->sigma.vertices);
            auto ff = open_csv(dir / (id + "_disc_faces.csv"), out);
            write_face_csv(ff, ps.torsion->sigma.quads);
        }
        return kExitOk;
    }
    if (config.export_kind == "curvature") {
        const ProbeSet ps = probe_set(f.geometry(), config.n);
        for (int b : bands) {
            for (std::size_t i = 0; i < ps.cycles.size(); ++i) {
                auto os = open_csv(dir / (id + "_band" + std::to_string(b) + "_probe" + std::to_string(i) + "_curvature.csv"), out);
                write_curvature_csv(os, f, b, ps.cycles[i].vertices, ps.cycles[i].quads);
            }
            if (ps.torsion) {
                auto os = open_csv(dir / (id + "_band" + std::to_string(b) + "_disc_curvature.csv"), out);
                write_curvature_csv(os, f, b, ps.torsion->sigma.vertices, ps.torsion->sigma.quads);
            }
        }
        return kExitOk;
    }
    // gauge
    const CosphereGraph graph = cosphere_graph(f.geometry(), config.n);
    int code = kExitOk;
    for (int b : bands) {
        const GaugeField g = spanning_tree_gauge(f, b, graph);
        if (!g.success()) {
            err << "gauge export refused for " << id << " band " << b << ": no global eigenvector field";
            if (g.certificate) {
                err << "; certificate face " << g.certificate->face << " cycle (";
                for (std::size_t k = 0; k < g.certificate->cycle.size(); ++k)
                    err << (k ? " " : "") << g.certificate->cycle[k];
                err << ") holonomy residual " << fmt17(g.certificate->holonomy_residual);
            }
            err << '\n';
            code = kExitMismatch;
            continue;
        }
        auto os = open_csv(dir / (id + "_band" + std::to_string(b) + "_gauge.csv"), out);
        write_gauge_csv(os, g);
    }
    return code;
}

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        if (config.command == "list") return cmd_list(out);
        if (config.command == "validate") return cmd_validate(config, out, err);
        if (config.command == "verdict") return cmd_verdict(config, out, err);
        if (config.command == "suite") return cmd_suite(config, out, err);
        if (config.command == "export") return cmd_export(config, out, err);
        throw InvalidParameter("unknown command '" + config.command + "'");
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
}

} // namespace obstrukt
