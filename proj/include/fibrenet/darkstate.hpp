#pragma once

#include <cstdint>
#include <optional>

#include "fibrenet/hilbert.hpp"
#include "fibrenet/model.hpp"
#include "fibrenet/propagator.hpp"

namespace fibrenet {

/// Cavity-dark state carrying the excitation, normalized:
///   nu*W_B |AtomA_a0>  -  W_A*W_B |f_0>  +  p0*nu*W_A |AtomB_a0>
/// with W_X = Delta_g s10^X(t) (the conjugated pulse value) and p0 the sign
/// with which cavity B couples to the resonant mode k = 0. The other dark
/// state is AllGround, carried by every StateVector as its Q=0 amplitude.
/// Throws DomainError when both effective couplings vanish.
StateVector dark_state_0(const ModelParams& params, double t);

/// ||H_part(t) psi|| where H_part is the eliminated Hamiltonian without the
/// |a0><a0| term. Requires gamma = 0, Delta_r = 0 and light-shift
/// compensation; throws DomainError otherwise.
double darkness_residual(const StateVector& psi, const ModelParams& params, double t);

/// Time-averaged resonant fibre photon number over time-averaged total fibre
/// photon number. Empty when the fibre never holds a photon (below 1e-30).
std::optional<double> pi0_metric(const Trajectory& traj);

struct DarkCheckDraw {
    ModelParams params;
    double t = 0.0;
};

/// Random admissible configuration: gamma = Delta_r = 0, kappa in [0, 0.5],
/// nu in [0.1, 2], K in [0, 64], pulse peaks in (0, 2], t in [0, 300].
DarkCheckDraw draw_dark_check(std::uint64_t seed, std::size_t index);

/// Largest darkness residual of dark_state_0 over n_draws random
/// configurations. The OpenMP version splits draws across threads; the
/// serial one is the reference. Both are deterministic in (seed, n_draws).
double max_darkness_residual(std::size_t n_draws, std::uint64_t seed);
double max_darkness_residual_serial(std::size_t n_draws, std::uint64_t seed);

}  // namespace fibrenet
