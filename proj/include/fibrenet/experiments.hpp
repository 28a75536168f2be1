#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fibrenet/darkstate.hpp"
#include "fibrenet/model.hpp"
#include "fibrenet/propagator.hpp"

namespace fibrenet {

struct ConfigurationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Pulse timing expressed as fractions of the transfer time T so that a
/// schedule can be rescaled with T. offset_fraction = (t_A - t_B) / T;
/// positive means the node-B pulse comes first.
struct PulseSchedule {
    double peak_a = 2.0;
    double peak_b = 2.0;
    double width_fraction = 0.2;
    double offset_fraction = 0.2;
    double center_fraction = 0.5;

    PulsePair at(double T) const;
    friend bool operator==(const PulseSchedule&, const PulseSchedule&) = default;
};

/// Operating point of the fidelity-versus-length study: c = 2, kappa = 0.1,
/// spacing 0.1 at L0, gamma = Delta_r = 0, eliminated model, compensated
/// light shift. nu and K follow L.
ModelParams reference_params(double L, double T = 300.0, const PulseSchedule& schedule = {});

struct ConvergencePolicy {
    bool refine_dt = true;
    bool refine_K = false;
    int K_doublings_max = 3;
    double K_tol = 1e-4;
};

struct TransferOptions {
    IntegratorConfig integrator = IntegratorConfig::for_duration(300.0);
    ConvergencePolicy convergence;
    bool allow_intuitive_order = false;
    bool keep_trajectory = false;
};

struct TransferResult {
    std::optional<double> epsilon;  // population of AtomB_a0 after the (1,0) ingredient
    std::optional<double> pi0;
    double max_cav_pop = 0.0;
    double norm_loss = 0.0;
    std::optional<double> fidelity_superposition;
    double dt_used = 0.0;
    int K_used = 0;
    bool converged = true;
    std::optional<Trajectory> trajectory;  // the (1,0) run, when requested
    std::optional<StateVector> final_state;
};

/// Encodes (alpha|0> + beta|1>)|1>, evolves it over [0, T] and reports the
/// transfer figures. The Q=1 ingredient is propagated once from
/// |0>|1>; the superposition result follows by linearity.
TransferResult run_transfer(const ModelParams& params, double T, cplx alpha, cplx beta,
                            const TransferOptions& options = {});

/// dt = T/2^15 with 2^10 samples, dt and K both convergence-checked.
TransferOptions default_options(double T);

struct SweepPoint {
    double L = 0.0;
    std::optional<TransferResult> result;
    std::string error;
};

/// One transfer per length. Each point recomputes nu, spacing and the
/// starting K; with options.convergence.refine_K, K is then doubled until
/// epsilon settles. Failures are
/// recorded per point. The OpenMP version distributes points across
/// threads; the table is always in input order.
std::vector<SweepPoint> sweep_length(const ModelParams& params, const std::vector<double>& L_values, double T,
                                     const PulseSchedule& schedule, const TransferOptions& options);
std::vector<SweepPoint> sweep_length_serial(const ModelParams& params, const std::vector<double>& L_values,
                                            double T, const PulseSchedule& schedule,
                                            const TransferOptions& options);

struct ScanPoint {
    double T = 0.0;
    std::optional<TransferResult> result;
    std::string error;
};

/// Transfer for each T with the pulse schedule rescaled to that T and
/// dt = T / steps.
std::vector<ScanPoint> adiabaticity_scan(const ModelParams& params, const std::vector<double>& T_values,
                                         const PulseSchedule& schedule, const TransferOptions& options,
                                         long steps = 32768);

struct ModelComparison {
    double epsilon_full = 0.0;
    double epsilon_eliminated = 0.0;
    double max_saturation = 0.0;
    bool saturation_warning = false;
};

inline constexpr double saturation_warning_level = 0.2;

/// Eliminated-model parameters whose effective Raman couplings
/// Delta_g s01(t) reproduce the Rabi pulses of a full-model configuration.
ModelParams eliminated_counterpart(const ModelParams& full);

/// Largest s00 or s11 reached by either node over the pulse sequence.
double max_saturation(const ModelParams& full);

ModelComparison compare_models(const ModelParams& params_full, double T, const TransferOptions& options);

}  // namespace fibrenet
