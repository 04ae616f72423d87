#pragma once

#include "obstrukt/catalog.hpp"
#include "obstrukt/invariants.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace obstrukt {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitMismatch = 1, kExitInvalid = 2, kExitNumerical = 3 };

struct RunConfig {
    std::string command;     // list, validate, verdict, suite, export
    std::string export_kind; // mesh, curvature, gauge
    std::string symbol_id;
    std::map<std::string, double> params; // catalog parameter overrides
    std::optional<int> band;              // empty = all bands
    int n = 16;
    std::uint64_t seed = 42;
    std::string out;
    bool timing = false;

    bool operator==(const RunConfig&) const = default;
};

// Keys understood in config files, in serialization order.
const std::vector<std::string>& config_keys();
// Catalog parameter keys and the command-line flag that sets each.
const std::map<std::string, std::string>& parameter_flags();

// Flat key=value text; '#' starts a comment. Unknown keys throw InvalidParameter.
// Values are applied on top of `base`.
RunConfig parse_config(const std::string& text, RunConfig base = {});
std::string serialize_config(const RunConfig& config);

// Resolution must be 8 * 2^k.
bool valid_resolution(int n);
void check_config(const RunConfig& config);

// Canonical JSON: sorted keys, floats with 17 significant digits, no locale.
std::string canonical_json(const nlohmann::json& j);

nlohmann::json to_json(const InvariantReport& r, bool timing);
nlohmann::json to_json(const Verdict& v, bool timing);
nlohmann::json to_json(const ValidationReport& r);
nlohmann::json config_json(const RunConfig& config);

struct SuiteRow {
    std::string symbol;
    int band = 0;
    std::string label;
    BandExpectation expected;
    std::optional<Verdict> local;
    std::optional<Verdict> global;
    std::string error; // numerical or validation failure
    bool matches() const;
};

struct SuiteResult {
    std::vector<SuiteRow> rows;
    nlohmann::json document;
    int exit_code = kExitOk;
};

// Runs validation and both verdicts for every band of every entry and
// compares with the expectations. Exit code 1 on any mismatch or failure.
SuiteResult run_suite(const std::vector<CatalogEntry>& entries, int n, std::uint64_t seed = 42, bool timing = false);
void render_suite_table(std::ostream& os, const SuiteResult& result);

// Command implementations. `out` receives the primary output when no path is
// configured; `err` receives diagnostics. Return the process exit code.
int cmd_list(std::ostream& out);
int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verdict(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_suite(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_export(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace obstrukt
