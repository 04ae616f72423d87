// obstrukt command-line frontend.
#include "obstrukt/errors.hpp"
#include "obstrukt/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace obstrukt;

int main(int argc, char** argv)
{
    CLI::App app{"Eigenvector obstructions of matrix-valued principal symbols"};
    app.set_version_flag("--version", std::string(kToolVersion));

    std::string command;
    std::vector<std::string> positional;
    std::string band = "all";
    int n = 16;
    std::uint64_t seed = 42;
    std::string out_path, config_path;
    bool timing = false;
    std::map<std::string, double> params;

    app.add_option("command", command, "list | validate | verdict | suite | export")->required();
    app.add_option("args", positional, "catalog id, or export kind followed by catalog id");
    app.add_option("--band", band, "band index (ascending eigenvalue order) or 'all'");
    app.add_option("--n", n, "probe resolution, a power-of-two multiple of 8");
    app.add_option("--seed", seed, "seed for random validation samples");
    app.add_option("--out", out_path, "output file (verdict, validate, suite) or directory (export)");
    app.add_option("--config", config_path, "key=value config file; flags override it");
    app.add_flag("--timing", timing, "include wall times in the JSON report");
    for (const auto& [key, flag] : parameter_flags()) {
        app.add_option_function<double>(flag, [&params, k = key](double v) { params[k] = v; }, "catalog parameter " + key);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    RunConfig config;
    try {
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw InvalidParameter("cannot read config file " + config_path);
            std::stringstream ss;
            ss << f.rdbuf();
            config = parse_config(ss.str());
        }
        config.command = command;
        if (command == "export") {
            if (positional.size() >= 1) config.export_kind = positional[0];
            if (positional.size() >= 2) config.symbol_id = positional[1];
            if (positional.size() > 2) throw InvalidParameter("too many arguments");
        } else {
            if (positional.size() >= 1) config.symbol_id = positional[0];
            if (positional.size() > 1) throw InvalidParameter("too many arguments");
        }
        if (app.count("--band")) {
            if (band == "all") config.band.reset();
            else {
                std::size_t used = 0;
                config.band = std::stoi(band, &used);
                if (used != band.size()) throw InvalidParameter("bad band '" + band + "'");
            }
        }
        if (app.count("--n")) config.n = n;
        if (app.count("--seed")) config.seed = seed;
        if (app.count("--out")) config.out = out_path;
        if (timing) config.timing = true;
        for (const auto& [k, v] : params) config.params[k] = v;
    } catch (const std::invalid_argument&) {
        std::cerr << "error: bad band '" << band << "'\n";
        return kExitInvalid;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return run_command(config, std::cout, std::cerr);
}
