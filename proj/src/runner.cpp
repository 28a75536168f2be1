#include <fstream>
#include <ostream>
#include <sstream>

#include <omp.h>

#include "fibrenet/config.hpp"

namespace fibrenet {

namespace {

namespace fs = std::filesystem;

std::string opt(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string(), 0, "--out");
    out << content;
    if (!out) throw ConfigError("cannot write " + path.string(), 0, "--out");
}

constexpr const char* results_header = "L,T,epsilon,pi0,max_cav_pop,norm_loss,K_used,dt_used\n";

std::string result_row(double L, double T, const TransferResult& r) {
    return format_double(L) + "," + format_double(T) + "," + opt(r.epsilon) + "," + opt(r.pi0) + "," +
           format_double(r.max_cav_pop) + "," + format_double(r.norm_loss) + "," + std::to_string(r.K_used) + "," +
           format_double(r.dt_used) + "\n";
}

std::string trace_csv(const Trajectory& tr) {
    std::string s =
        "t,norm,pop_atom_a,pop_cav_a,pop_fibre0,pop_cav_b,pop_atom_b,n_cav_a,n_cav_b,n_fibre_total,n_fibre_resonant\n";
    for (std::size_t i = 0; i < tr.size(); ++i) {
        s += format_double(tr.times[i]) + "," + format_double(tr.norms[i]);
        for (double p : tr.populations[i]) s += "," + format_double(p);
        const PhotonObservables& o = tr.photons[i];
        s += "," + format_double(o.n_cav_a) + "," + format_double(o.n_cav_b) + "," + format_double(o.n_fibre_total) +
             "," + format_double(o.n_fibre_resonant) + "\n";
    }
    return s;
}

void log_line(const RunOptions& o, const std::string& msg) {
    if (o.log) *o.log << msg << '\n';
}

int run_transfer_protocol(const RunConfig& c, const RunOptions& o) {
    TransferOptions opts = c.transfer_options();
    opts.convergence.refine_K = !c.K.has_value();
    opts.keep_trajectory = o.trace;
    TransferResult r;
    try {
        r = run_transfer(c.model_params(), c.T, {c.alpha_re, c.alpha_im}, {c.beta_re, c.beta_im}, opts);
    } catch (const NumericalError& e) {
        log_line(o, std::string("numerical failure: ") + e.what());
        return exit_numerical;
    }
    write_file(o.out_dir / "results.csv", results_header + result_row(c.L, c.T, r));
    if (r.trajectory) write_file(o.out_dir / "trace.csv", trace_csv(*r.trajectory));
    std::ostringstream msg;
    msg << "epsilon=" << opt(r.epsilon) << " pi0=" << opt(r.pi0)
        << " fidelity_superposition=" << opt(r.fidelity_superposition) << " converged=" << r.converged;
    log_line(o, msg.str());
    return exit_ok;
}

template <class Point>
int write_table(const std::vector<Point>& points, const RunConfig& c, const RunOptions& o, bool by_length) {
    std::string csv = results_header;
    std::string failures;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Point& pt = points[i];
        double L = c.L;
        double T = c.T;
        if constexpr (requires { pt.L; }) L = pt.L;
        if constexpr (requires { pt.T; }) T = pt.T;
        if (!pt.result) {
            failures += (by_length ? "L=" + format_double(L) : "T=" + format_double(T)) + ": " + pt.error + "\n";
            continue;
        }
        csv += result_row(L, T, *pt.result);
        if (pt.result->trajectory)
            write_file(o.out_dir / ("trace_" + std::to_string(i) + ".csv"), trace_csv(*pt.result->trajectory));
    }
    write_file(o.out_dir / "results.csv", csv);
    if (!failures.empty()) {
        write_file(o.out_dir / "failures.txt", failures);
        log_line(o, "some points failed:\n" + failures);
        return exit_partial;
    }
    return exit_ok;
}

int run_sweep(const RunConfig& c, const RunOptions& o) {
    TransferOptions opts = c.transfer_options();
    opts.convergence.refine_K = !c.K.has_value();
    opts.keep_trajectory = o.trace;
    ModelParams p = c.model_params();
    std::vector<SweepPoint> points;
    if (c.K) {
        // Fixed K: run each length at the configured half-width.
        points.resize(c.L_values.size());
        for (std::size_t i = 0; i < c.L_values.size(); ++i) {
            points[i].L = c.L_values[i];
            try {
                ModelParams q = at_length(p, c.L_values[i], false);
                points[i].result = run_transfer(q, c.T, 1.0, 0.0, opts);
            } catch (const std::exception& e) {
                points[i].error = e.what();
            }
        }
    } else {
        points = sweep_length(p, c.L_values, c.T, c.schedule, opts);
    }
    return write_table(points, c, o, true);
}

int run_scan(const RunConfig& c, const RunOptions& o) {
    TransferOptions opts = c.transfer_options();
    opts.convergence.refine_K = !c.K.has_value();
    opts.keep_trajectory = o.trace;
    return write_table(adiabaticity_scan(c.model_params(), c.T_values, c.schedule, opts, c.steps), c, o, false);
}

int run_compare(const RunConfig& c, const RunOptions& o) {
    ModelComparison m;
    try {
        m = compare_models(c.compare_params(), c.T, c.transfer_options());
    } catch (const NumericalError& e) {
        log_line(o, std::string("numerical failure: ") + e.what());
        return exit_numerical;
    }
    write_file(o.out_dir / "compare.csv",
               std::string("omega_peak,g,Delta_g,max_saturation,epsilon_full,epsilon_eliminated,saturation_warning\n") +
                   format_double(c.compare_omega) + "," + format_double(c.compare_g) + "," +
                   format_double(c.compare_Delta_g) + "," + format_double(m.max_saturation) + "," +
                   format_double(m.epsilon_full) + "," + format_double(m.epsilon_eliminated) + "," +
                   (m.saturation_warning ? "1" : "0") + "\n");
    if (m.saturation_warning) log_line(o, "warning: saturation parameter reaches " + format_double(m.max_saturation));
    return exit_ok;
}

int run_dark_check(const RunConfig& c, const RunOptions& o) {
    const double worst = max_darkness_residual(static_cast<std::size_t>(c.dark_draws), c.seed);
    write_file(o.out_dir / "dark_check.csv", "draws,seed,max_residual\n" + std::to_string(c.dark_draws) + "," +
                                                 std::to_string(c.seed) + "," + format_double(worst) + "\n");
    log_line(o, "max darkness residual " + format_double(worst));
    return exit_ok;
}

}  // namespace

int run(const RunConfig& config, const RunOptions& options) {
    try {
        config.validate();
        std::error_code ec;
        fs::create_directories(options.out_dir, ec);
        if (ec || !fs::is_directory(options.out_dir))
            throw ConfigError("cannot create output directory " + options.out_dir.string(), 0, "--out");
        omp_set_num_threads(std::max(1, options.jobs));
        write_file(options.out_dir / "manifest.txt",
                   std::string("# ") + tool_version + "\n" + render_config(config));
        switch (config.protocol) {
            case Protocol::transfer: return run_transfer_protocol(config, options);
            case Protocol::sweep_length: return run_sweep(config, options);
            case Protocol::scan_T: return run_scan(config, options);
            case Protocol::compare_models: return run_compare(config, options);
            case Protocol::dark_check: return run_dark_check(config, options);
        }
    } catch (const ConfigError& e) {
        log_line(options, std::string("config error: ") + e.what());
        return exit_config;
    } catch (const ConfigurationError& e) {
        log_line(options, std::string("config error: ") + e.what());
        return exit_config;
    } catch (const DomainError& e) {
        log_line(options, std::string("config error: ") + e.what());
        return exit_config;
    } catch (const NormalizationError& e) {
        log_line(options, std::string("config error: ") + e.what());
        return exit_config;
    } catch (const NumericalError& e) {
        log_line(options, std::string("numerical failure: ") + e.what());
        return exit_numerical;
    }
    return exit_config;
}

}  // namespace fibrenet
