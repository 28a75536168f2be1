#include "fibrenet/propagator.hpp"

#include <cmath>

namespace fibrenet {

IntegratorConfig IntegratorConfig::for_duration(double T) {
    IntegratorConfig c;
    c.dt = T / 32768.0;
    c.record_every = 32;
    return c;
}

void IntegratorConfig::validate() const {
    if (!(dt > 0.0)) throw DomainError("dt must be > 0");
    if (record_every < 1) throw DomainError("record_every must be >= 1");
    if (halvings_max < 0) throw DomainError("halvings_max must be >= 0");
    if (!(fidelity_tol > 0.0)) throw DomainError("fidelity_tol must be > 0");
}

namespace {

void record(Trajectory& traj, double t, const StateVector& psi) {
    const Basis& b = psi.basis();
    traj.times.push_back(t);
    traj.norms.push_back(psi.squared_norm());
    traj.populations.push_back({std::norm(psi[b.atom_a()]), std::norm(psi[b.cav_a()]), std::norm(psi[b.fibre(0)]),
                                std::norm(psi[b.cav_b()]), std::norm(psi[b.atom_b()])});
    traj.photons.push_back(photon_observables(psi));
}

}  // namespace

Trajectory propagate(const Hamiltonian& H, const StateVector& psi0, double t0, double t1,
                     const IntegratorConfig& config) {
    config.validate();
    if (!(t1 > t0)) throw DomainError("propagation needs t1 > t0");
    if (!(psi0.basis() == H.basis())) throw BasisError("initial state is not on the Hamiltonian's basis");

    const double span = t1 - t0;
    const long n = std::max(1L, static_cast<long>(std::ceil(span / config.dt - 1e-9)));
    const double dt = span / static_cast<double>(n);
    const cplx minus_i{0.0, -1.0};
    const cplx g0 = psi0.ground();
    const cplx e0 = H.ground_energy();
    const double norm_limit = 1.0 + 1e-6;

    Trajectory traj(H.basis_handle());
    traj.dt_used = dt;
    traj.steps = n;

    StateVector psi = psi0;
    StateVector k1(H.basis_handle()), k2(H.basis_handle()), k3(H.basis_handle()), k4(H.basis_handle());
    StateVector tmp(H.basis_handle());
    auto& x = psi.amplitudes();
    auto& y = tmp.amplitudes();

    auto ground_at = [&](double t) { return g0 * std::exp(minus_i * e0 * (t - t0)); };

    record(traj, t0, psi);
    for (long step = 0; step < n; ++step) {
        const double t = t0 + static_cast<double>(step) * dt;
        H.apply(t, psi, k1);
        y = x + (0.5 * dt * minus_i) * k1.amplitudes();
        H.apply(t + 0.5 * dt, tmp, k2);
        y = x + (0.5 * dt * minus_i) * k2.amplitudes();
        H.apply(t + 0.5 * dt, tmp, k3);
        y = x + (dt * minus_i) * k3.amplitudes();
        H.apply(t + dt, tmp, k4);
        x += (dt / 6.0 * minus_i) *
             (k1.amplitudes() + 2.0 * k2.amplitudes() + 2.0 * k3.amplitudes() + k4.amplitudes());

        const double t_next = t0 + static_cast<double>(step + 1) * dt;
        psi.ground() = ground_at(t_next);
        const double nrm = psi.squared_norm();
        if (!std::isfinite(nrm) || !psi.is_finite() || nrm > norm_limit)
            throw NumericalError("RK4 step diverged at t = " + std::to_string(t_next) + " (dt too large?)");
        if ((step + 1) % config.record_every == 0 || step + 1 == n) record(traj, t_next, psi);
    }
    traj.q0_amplitude_final = psi.ground();
    traj.final_state = std::move(psi);
    return traj;
}

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& A, double series_tol) {
    const Eigen::Index n = A.rows();
    // Induced 1-norm.
    const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    const Eigen::MatrixXcd X = A / std::ldexp(1.0, squarings);

    Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
    constexpr int max_terms = 60;
    bool converged = false;
    for (int k = 1; k <= max_terms; ++k) {
        term = (term * X) / static_cast<double>(k);
        result += term;
        if (term.cwiseAbs().colwise().sum().maxCoeff() <= series_tol) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NumericalError("Taylor series for exp did not converge");
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

Eigen::VectorXcd propagate_oracle(const DenseSampler& H, const Eigen::VectorXcd& psi0, double t0, double t1,
                                  long n_slices) {
    if (psi0.size() > oracle_max_dimension) throw DomainError("oracle propagation is limited to dimension 256");
    if (n_slices < 1) throw DomainError("oracle needs at least one slice");
    if (!(t1 > t0)) throw DomainError("propagation needs t1 > t0");
    const double h = (t1 - t0) / static_cast<double>(n_slices);
    const cplx minus_i{0.0, -1.0};
    Eigen::VectorXcd psi = psi0;
    for (long s = 0; s < n_slices; ++s) {
        const double mid = t0 + (static_cast<double>(s) + 0.5) * h;
        psi = expm((minus_i * h) * H(mid)) * psi;
    }
    return psi;
}

StateVector propagate_oracle(const Hamiltonian& H, const StateVector& psi0, double t0, double t1, long n_slices) {
    if (!(psi0.basis() == H.basis())) throw BasisError("initial state is not on the Hamiltonian's basis");
    Eigen::VectorXcd q1 =
        propagate_oracle([&H](double t) { return H.dense(t); }, psi0.amplitudes(), t0, t1, n_slices);
    const cplx q0 = psi0.ground() * std::exp(cplx{0.0, -1.0} * H.ground_energy() * (t1 - t0));
    return StateVector(H.basis_handle(), std::move(q1), q0);
}

}  // namespace fibrenet
