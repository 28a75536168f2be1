#pragma once

#include <stdexcept>
#include <vector>

#include "fibrenet/hilbert.hpp"

namespace fibrenet {

// All rates are in units of u = alpha * L0^{-1/2}, all times in 1/u and
// fibre lengths in units of L0.

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct GaussianPulse {
    double peak = 0.0;    // rate
    double center = 0.0;  // time
    double width = 1.0;   // time
};

double pulse_value(const GaussianPulse& pulse, double t);

/// In the eliminated model each pulse is the effective Raman coupling
/// Delta_g * s01(t); in the full model it is the Rabi frequency Omega(t).
struct PulsePair {
    GaussianPulse a;
    GaussianPulse b;
};

struct ModelParams {
    ModelKind model_kind = ModelKind::eliminated;

    double Delta_g = 0.0;  // global detuning (full model; eliminated model when gamma or light shifts are active)
    double Delta_r = 0.0;  // Raman detuning
    double gamma = 0.0;    // spontaneous decay of |b>
    double kappa = 0.0;    // cavity loss, both cavities
    double g_a = 0.0;
    double g_b = 0.0;

    double nu = 1.0;      // cavity-fibre coupling per mode
    double L = 1.0;       // fibre length / L0
    double delta0 = 0.1;  // mode spacing at L = L0
    int K = 0;            // fibre modes k = -K..K

    PulsePair pulses;

    bool compensate_light_shift = true;
    bool include_s11_shift = false;
    // Gauge test hook: couples cavity B to mode k with (-1)^{k+1} instead of (-1)^k.
    bool flip_fibre_parity = false;

    double mode_spacing() const noexcept { return delta0 / L; }

    /// Throws DomainError naming the first violated constraint.
    void validate() const;
};

/// nu = 1/sqrt(L) in scaled units (alpha = 1).
double coupling_at_length(double L) noexcept;

/// ceil(10 * max(nu, peak_a, peak_b) / spacing).
int default_half_width(const ModelParams& p);

/// Returns a copy of p moved to fibre length L: nu, and optionally K, recomputed.
ModelParams at_length(ModelParams p, double L, bool recompute_K = true);

struct SaturationParams {
    double s00 = 0.0;
    double s11 = 0.0;
    cplx s01 = 0.0;
    cplx s10 = 0.0;
};

SaturationParams saturation_params(cplx Omega, cplx g, double Delta_g, double gamma);

/// Delta_k = k * delta0 * (L0 / L) for k = -K..K.
std::vector<double> fibre_detunings(const ModelParams& p);

/// Time-dependent non-Hermitian Hamiltonian of the two nodes plus fibre,
/// acting matrix-free on the conserved sectors. Immutable and reentrant.
class Hamiltonian {
public:
    explicit Hamiltonian(ModelParams params);

    const ModelParams& params() const noexcept { return params_; }
    const BasisHandle& basis_handle() const noexcept { return basis_; }
    const Basis& basis() const noexcept { return *basis_; }

    /// out = H(t) psi. out must be on the same basis and must not alias psi.
    void apply(double t, const StateVector& psi, StateVector& out) const;
    StateVector operator()(double t, const StateVector& psi) const;

    /// Scalar by which H acts on the Q=0 sector.
    cplx ground_energy() const noexcept { return 2.0 * params_.Delta_r; }

    /// Dense Q=1 block of H(t), assembled element by element.
    Eigen::MatrixXcd dense(double t) const;

    /// Partial Hamiltonian used by the dark-state argument: same as H(t)
    /// but without the |a0><a0| light-shift/pumping term.
    Eigen::MatrixXcd dense_partial(double t) const;

    /// Model-specific kernels behind apply(); throw BasisError when the
    /// parameters or the state belong to the other model.
    void apply_eliminated(double t, const StateVector& psi, StateVector& out) const;
    void apply_full(double t, const StateVector& psi, StateVector& out) const;

private:
    struct NodeTerms {
        cplx atom_diag;  // <a0,0| H |a0,0>
        cplx cav_diag;   // <a1,1| H |a1,1>
        cplx excited_diag;
        cplx up;         // eliminated: <a1,1|H|a0,0>; full: <b|H|a0>
        cplx down;       // eliminated: <a0,0|H|a1,1>; full: <a0|H|b>
        cplx cav_to_b;   // full: <b|H|a1,1>
        cplx b_to_cav;   // full: <a1,1|H|b>
    };
    NodeTerms node_terms(const GaussianPulse& pulse, double g, double t, bool with_a0_term) const;
    Eigen::MatrixXcd assemble(double t, bool with_a0_term) const;
    void check_state(const StateVector& psi, const StateVector& out, ModelKind expected) const;

    ModelParams params_;
    BasisHandle basis_;
    std::vector<double> detunings_;
    std::vector<double> parity_;  // sign of cavity-B coupling per mode
};

/// Unit bridge to laboratory numbers. kappa_f is the cavity decay rate into
/// an infinitely long fibre in rad/s; lengths in metres.
struct PhysicalEstimate {
    double nu = 0.0;                // rad/s
    double alpha = 0.0;             // rad/s * sqrt(m)
    double mode_spacing = 0.0;      // rad/s
    double N_modes_estimate = 0.0;
};

PhysicalEstimate estimate_physical(double kappa_f, double L_metres);

inline constexpr double speed_of_light = 299792458.0;

}  // namespace fibrenet
