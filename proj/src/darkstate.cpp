#include "fibrenet/darkstate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fibrenet {

StateVector dark_state_0(const ModelParams& params, double t) {
    if (params.model_kind != ModelKind::eliminated) throw BasisError("dark states are defined for the eliminated model");
    const cplx wa = std::conj(cplx{pulse_value(params.pulses.a, t)});
    const cplx wb = std::conj(cplx{pulse_value(params.pulses.b, t)});
    if (wa == 0.0 && wb == 0.0) throw DomainError("dark state undefined: both effective couplings vanish");
    const double p0 = params.flip_fibre_parity ? -1.0 : 1.0;

    StateVector psi(build_basis(ModelKind::eliminated, params.K));
    const Basis& b = psi.basis();
    psi[b.atom_a()] = params.nu * wb;
    psi[b.fibre(0)] = -wa * wb;
    psi[b.atom_b()] = p0 * params.nu * wa;
    const double n = std::sqrt(psi.squared_norm());
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("dark state undefined: degenerate amplitudes");
    psi *= 1.0 / n;
    return psi;
}

double darkness_residual(const StateVector& psi, const ModelParams& params, double t) {
    if (params.gamma != 0.0) throw DomainError("darkness residual assumes gamma = 0");
    if (params.Delta_r != 0.0) throw DomainError("darkness residual assumes Delta_r = 0");
    if (!params.compensate_light_shift) throw DomainError("darkness residual assumes light-shift compensation");
    const Hamiltonian H(params);
    if (!(psi.basis() == H.basis())) throw BasisError("state is not on the Hamiltonian's basis");
    const Eigen::VectorXcd r = H.dense_partial(t) * psi.amplitudes();
    const cplx r0 = H.ground_energy() * psi.ground();
    return std::sqrt(r.squaredNorm() + std::norm(r0));
}

std::optional<double> pi0_metric(const Trajectory& traj) {
    if (traj.photons.empty()) throw DomainError("pi0 needs a non-empty trajectory");
    double resonant = 0.0;
    double total = 0.0;
    for (const PhotonObservables& o : traj.photons) {
        resonant += o.n_fibre_resonant;
        total += o.n_fibre_total;
    }
    if (total < 1e-30) return std::nullopt;
    return resonant / total;
}

DarkCheckDraw draw_dark_check(std::uint64_t seed, std::size_t index) {
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    DarkCheckDraw d;
    ModelParams& p = d.params;
    p.model_kind = ModelKind::eliminated;
    p.kappa = 0.5 * unit(rng);
    p.nu = 0.1 + 1.9 * unit(rng);
    p.K = std::uniform_int_distribution<int>(0, 64)(rng);
    p.L = 0.25 + 7.75 * unit(rng);
    p.delta0 = 0.1;
    for (GaussianPulse* pl : {&p.pulses.a, &p.pulses.b}) {
        pl->peak = 2.0 * (1.0 - unit(rng));
        pl->center = 300.0 * unit(rng);
        pl->width = 5.0 + 95.0 * unit(rng);
    }
    // Keep at least one coupling away from underflow.
    d.t = 300.0 * unit(rng);
    p.pulses.b.center = std::clamp(p.pulses.b.center, d.t - 2.0 * p.pulses.b.width, d.t + 2.0 * p.pulses.b.width);
    return d;
}

namespace {

double residual_of_draw(std::uint64_t seed, std::size_t i) {
    const DarkCheckDraw d = draw_dark_check(seed, i);
    return darkness_residual(dark_state_0(d.params, d.t), d.params, d.t);
}

}  // namespace

double max_darkness_residual_serial(std::size_t n_draws, std::uint64_t seed) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_draws; ++i) worst = std::max(worst, residual_of_draw(seed, i));
    return worst;
}

double max_darkness_residual(std::size_t n_draws, std::uint64_t seed) {
    double worst = 0.0;
    const auto n = static_cast<long>(n_draws);
#pragma omp parallel for schedule(dynamic) reduction(max : worst)
    for (long i = 0; i < n; ++i) worst = std::max(worst, residual_of_draw(seed, static_cast<std::size_t>(i)));
    return worst;
}

}  // namespace fibrenet
