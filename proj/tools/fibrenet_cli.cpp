// Command-line driver: single transfers, length sweeps, T scans, model
// comparison and the dark-state check, all writing CSV plus a manifest.

#include <iostream>

#include "CLI11.hpp"
#include "fibrenet/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Adiabatic state transfer between two atom-cavity nodes over a multimode fibre"};
    std::string config_path;
    std::string protocol;
    std::string out_dir = ".";
    int jobs = 1;
    bool trace = false;
    bool strict = false;
    bool print_defaults = false;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--protocol", protocol, "transfer | sweep-length | scan-T | compare-models | dark-check");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--jobs", jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_flag("--trace", trace, "write per-sample observables");
    app.add_flag("--strict", strict, "require every configuration key");
    app.add_flag("--print-defaults", print_defaults, "print the default configuration and exit");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : fibrenet::exit_config;
    }

    fibrenet::RunConfig config;
    try {
        if (print_defaults) {
            std::cout << fibrenet::render_config(config);
            return 0;
        }
        fibrenet::ParseOptions popts;
        popts.strict = strict;
        popts.diagnostics = &std::cerr;
        if (!config_path.empty())
            config = fibrenet::load_config(config_path, popts);
        else if (strict)
            throw fibrenet::ConfigError("--strict needs --config", 0, "--config");
        if (!protocol.empty()) {
            config.protocol = fibrenet::protocol_from_string(protocol);
            config.validate();
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return fibrenet::exit_config;
    }

    fibrenet::RunOptions ropts;
    ropts.out_dir = out_dir;
    ropts.jobs = jobs;
    ropts.trace = trace;
    ropts.log = &std::cerr;
    return fibrenet::run(config, ropts);
}
