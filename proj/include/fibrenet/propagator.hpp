#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fibrenet/hilbert.hpp"
#include "fibrenet/model.hpp"

namespace fibrenet {

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegratorConfig {
    double dt = 300.0 / 32768.0;
    int record_every = 32;
    // Convergence ladder: halve dt until the transfer fidelity moves by less than fidelity_tol.
    int halvings_max = 4;
    double fidelity_tol = 1e-6;

    /// dt = T / 2^15 with 2^10 recorded samples.
    static IntegratorConfig for_duration(double T);
    void validate() const;
};

/// Chain anchors recorded per sample, in chain order.
enum Anchor : std::size_t { anchor_atom_a, anchor_cav_a, anchor_fibre0, anchor_cav_b, anchor_atom_b, num_anchors };

struct Trajectory {
    std::vector<double> times;
    std::vector<double> norms;  // squared norm, both sectors
    std::vector<std::array<double, num_anchors>> populations;
    std::vector<PhotonObservables> photons;
    StateVector final_state;
    cplx q0_amplitude_final = 0.0;
    double dt_used = 0.0;
    long steps = 0;

    explicit Trajectory(BasisHandle basis) : final_state(std::move(basis)) {}
    std::size_t size() const noexcept { return times.size(); }
};

/// Fixed-step classical RK4 for d psi/dt = -i H(t) psi on the Q=1 sector;
/// the Q=0 amplitude is advanced by its exact phase. The norm is never
/// renormalized. Throws NumericalError if the norm exceeds 1 + 1e-6 or an
/// amplitude stops being finite.
Trajectory propagate(const Hamiltonian& H, const StateVector& psi0, double t0, double t1,
                     const IntegratorConfig& config);

/// exp(A) by scaling and squaring of a truncated Taylor series.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& A, double series_tol = 1e-16);

using DenseSampler = std::function<Eigen::MatrixXcd(double)>;

inline constexpr Eigen::Index oracle_max_dimension = 256;

/// Validation oracle: piecewise-constant propagation with H frozen at each
/// slice midpoint and exponentiated densely.
Eigen::VectorXcd propagate_oracle(const DenseSampler& H, const Eigen::VectorXcd& psi0, double t0, double t1,
                                  long n_slices);

/// Oracle over both sectors of a Hamiltonian.
StateVector propagate_oracle(const Hamiltonian& H, const StateVector& psi0, double t0, double t1, long n_slices);

}  // namespace fibrenet
