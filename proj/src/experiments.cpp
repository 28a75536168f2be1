#include "fibrenet/experiments.hpp"

#include <algorithm>
#include <cmath>

namespace fibrenet {

PulsePair PulseSchedule::at(double T) const {
    PulsePair p;
    const double mid = center_fraction * T;
    const double half = 0.5 * offset_fraction * T;
    p.b = {peak_b, mid - half, width_fraction * T};
    p.a = {peak_a, mid + half, width_fraction * T};
    return p;
}

ModelParams reference_params(double L, double T, const PulseSchedule& schedule) {
    ModelParams p;
    p.model_kind = ModelKind::eliminated;
    p.kappa = 0.1;
    p.delta0 = 0.1;
    p.gamma = 0.0;
    p.Delta_r = 0.0;
    p.pulses = schedule.at(T);
    return at_length(p, L, true);
}

TransferOptions default_options(double T) {
    TransferOptions o;
    o.integrator = IntegratorConfig::for_duration(T);
    o.convergence.refine_K = true;
    return o;
}

namespace {

struct RawRun {
    Trajectory traj;
    double epsilon;
};

RawRun propagate_unit(const ModelParams& params, double T, const IntegratorConfig& integrator) {
    const Hamiltonian H(params);
    const StateVector psi0 = StateVector::unit(H.basis_handle(), {Role::AtomA_a0});
    Trajectory traj = propagate(H, psi0, 0.0, T, integrator);
    const double eps = population(traj.final_state, {Role::AtomB_a0});
    return {std::move(traj), eps};
}

TransferResult assemble(const ModelParams& params, double T, cplx alpha, cplx beta, std::optional<RawRun> run,
                        bool keep_trajectory) {
    TransferResult r;
    r.K_used = params.K;
    const Hamiltonian H(params);
    StateVector final_state(H.basis_handle());
    final_state.ground() = beta * std::exp(cplx{0.0, -1.0} * H.ground_energy() * T);
    if (run) {
        const Trajectory& tr = run->traj;
        r.epsilon = run->epsilon;
        r.pi0 = pi0_metric(tr);
        double peak = 0.0;
        for (const PhotonObservables& o : tr.photons) peak = std::max(peak, o.n_cav_a + o.n_cav_b);
        r.max_cav_pop = std::norm(alpha) * peak;
        r.dt_used = tr.dt_used;
        final_state.amplitudes() = alpha * tr.final_state.amplitudes();
    } else {
        r.dt_used = 0.0;
    }
    r.norm_loss = 1.0 - final_state.squared_norm();
    StateVector target(H.basis_handle());
    target[target.basis().atom_b()] = alpha;
    target.ground() = beta;
    r.fidelity_superposition = std::norm(overlap(target, final_state));
    r.final_state = std::move(final_state);
    if (keep_trajectory && run) r.trajectory = std::move(run->traj);
    return r;
}

void check_order(const ModelParams& params, const TransferOptions& options) {
    if (!options.allow_intuitive_order && !(params.pulses.b.center < params.pulses.a.center))
        throw ConfigurationError("pulse order: the node-B pulse must peak before the node-A pulse");
}

}  // namespace

TransferResult run_transfer(const ModelParams& params, double T, cplx alpha, cplx beta,
                            const TransferOptions& options) {
    if (!(T > 0.0)) throw DomainError("transfer time must be > 0");
    check_order(params, options);
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
        throw NormalizationError("|alpha|^2 + |beta|^2 must equal 1");
    params.validate();

    if (alpha == 0.0) return assemble(params, T, alpha, beta, std::nullopt, options.keep_trajectory);

    const ConvergencePolicy& policy = options.convergence;
    ModelParams p = params;
    IntegratorConfig integ = options.integrator;
    bool converged = true;

    RawRun run = propagate_unit(p, T, integ);
    if (policy.refine_K) {
        converged = false;
        for (int d = 0; d < policy.K_doublings_max; ++d) {
            ModelParams wider = p;
            wider.K = std::max(1, 2 * p.K);
            RawRun next = propagate_unit(wider, T, integ);
            const double change = std::abs(next.epsilon - run.epsilon);
            p = wider;
            run = std::move(next);
            if (change < policy.K_tol) {
                converged = true;
                break;
            }
        }
    }
    if (policy.refine_dt) {
        bool dt_ok = false;
        for (int h = 0; h < integ.halvings_max; ++h) {
            IntegratorConfig finer = integ;
            finer.dt = 0.5 * integ.dt;
            finer.record_every = 2 * integ.record_every;
            RawRun next = propagate_unit(p, T, finer);
            const double change = std::abs(next.epsilon - run.epsilon);
            integ = finer;
            run = std::move(next);
            if (change < integ.fidelity_tol) {
                dt_ok = true;
                break;
            }
        }
        converged = converged && dt_ok;
    }
    TransferResult r = assemble(p, T, alpha, beta, std::move(run), options.keep_trajectory);
    r.converged = converged;
    return r;
}

namespace {

SweepPoint sweep_one(const ModelParams& params, double L, double T, const PulseSchedule& schedule,
                     const TransferOptions& options) {
    SweepPoint pt;
    pt.L = L;
    try {
        ModelParams p = params;
        p.pulses = schedule.at(T);
        p = at_length(p, L, true);
        pt.result = run_transfer(p, T, 1.0, 0.0, options);
    } catch (const std::exception& e) {
        pt.error = e.what();
    }
    return pt;
}

void check_lengths(const std::vector<double>& L_values) {
    for (std::size_t i = 0; i < L_values.size(); ++i) {
        if (!(L_values[i] > 0.0)) throw ConfigurationError("fibre lengths must be positive");
        if (i > 0 && !(L_values[i] > L_values[i - 1])) throw ConfigurationError("fibre lengths must be ascending");
    }
}

}  // namespace

std::vector<SweepPoint> sweep_length_serial(const ModelParams& params, const std::vector<double>& L_values,
                                            double T, const PulseSchedule& schedule,
                                            const TransferOptions& options) {
    check_lengths(L_values);
    std::vector<SweepPoint> out;
    out.reserve(L_values.size());
    for (double L : L_values) out.push_back(sweep_one(params, L, T, schedule, options));
    return out;
}

std::vector<SweepPoint> sweep_length(const ModelParams& params, const std::vector<double>& L_values, double T,
                                     const PulseSchedule& schedule, const TransferOptions& options) {
    check_lengths(L_values);
    std::vector<SweepPoint> out(L_values.size());
    const auto n = static_cast<long>(L_values.size());
    // Longest fibres carry the most modes; hand them out first.
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = n - 1; i >= 0; --i) {
        const auto j = static_cast<std::size_t>(i);
        out[j] = sweep_one(params, L_values[j], T, schedule, options);
    }
    return out;
}

std::vector<ScanPoint> adiabaticity_scan(const ModelParams& params, const std::vector<double>& T_values,
                                         const PulseSchedule& schedule, const TransferOptions& options,
                                         long steps) {
    if (steps < 1) throw ConfigurationError("steps must be >= 1");
    std::vector<ScanPoint> out(T_values.size());
    const auto n = static_cast<long>(T_values.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(i);
        const double T = T_values[j];
        ScanPoint& pt = out[j];
        pt.T = T;
        try {
            if (!(T > 0.0)) throw ConfigurationError("transfer times must be positive");
            ModelParams p = params;
            p.pulses = schedule.at(T);
            TransferOptions o = options;
            o.integrator.dt = T / static_cast<double>(steps);
            pt.result = run_transfer(p, T, 1.0, 0.0, o);
        } catch (const std::exception& e) {
            pt.error = e.what();
        }
    }
    return out;
}

ModelParams eliminated_counterpart(const ModelParams& full) {
    if (full.model_kind != ModelKind::full) throw ConfigurationError("expected full-model parameters");
    ModelParams e = full;
    e.model_kind = ModelKind::eliminated;
    // The full model carries the cavity light shift Delta_g s11 intrinsically.
    e.include_s11_shift = true;
    const double denom = full.Delta_g * full.Delta_g + full.gamma * full.gamma;
    e.pulses.a.peak = full.Delta_g * full.pulses.a.peak * full.g_a / denom;
    e.pulses.b.peak = full.Delta_g * full.pulses.b.peak * full.g_b / denom;
    return e;
}

double max_saturation(const ModelParams& full) {
    double worst = 0.0;
    for (const auto& [pulse, g] : {std::pair{full.pulses.a, full.g_a}, std::pair{full.pulses.b, full.g_b}}) {
        const SaturationParams s = saturation_params(pulse.peak, g, full.Delta_g, full.gamma);
        worst = std::max({worst, s.s00, s.s11});
    }
    return worst;
}

ModelComparison compare_models(const ModelParams& params_full, double T, const TransferOptions& options) {
    if (params_full.model_kind != ModelKind::full) throw ConfigurationError("compare_models needs full-model parameters");
    ModelComparison c;
    c.max_saturation = max_saturation(params_full);
    c.saturation_warning = c.max_saturation >= saturation_warning_level;
    const ModelParams elim = eliminated_counterpart(params_full);
    c.epsilon_full = run_transfer(params_full, T, 1.0, 0.0, options).epsilon.value();
    c.epsilon_eliminated = run_transfer(elim, T, 1.0, 0.0, options).epsilon.value();
    return c;
}

}  // namespace fibrenet
