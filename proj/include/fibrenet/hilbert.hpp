#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fibrenet {

using cplx = std::complex<double>;

struct BasisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NormalizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ModelKind { eliminated, full };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// Where the single excitation sits. Every Q=1 state has both atoms in a
// ground state except the one named by the role; AllGround is the lone Q=0
// state |a1,0>|a1,0>|vac>.
enum class Role { AtomA_a0, AtomA_b, CavA, Fibre, CavB, AtomB_b, AtomB_a0, AllGround };

struct BasisState {
    Role role = Role::AllGround;
    int mode = 0;  // fibre mode index, only meaningful for Role::Fibre

    static BasisState fibre(int k) { return {Role::Fibre, k}; }
    friend bool operator==(const BasisState&, const BasisState&) = default;
};

std::string to_string(const BasisState& s);

/// Single-excitation (Q=1) basis for one of the two models.
///
/// Ordering runs left to right along the physical chain:
///   eliminated: AtomA_a0, CavA, f_{-K} .. f_{K}, CavB, AtomB_a0
///   full:       AtomA_a0, AtomA_b, CavA, f_{-K} .. f_{K}, CavB, AtomB_b, AtomB_a0
/// The Q=0 sector (AllGround) is not part of this list; it is carried as a
/// separate scalar amplitude on every StateVector.
class Basis {
public:
    Basis(ModelKind kind, int K);

    ModelKind kind() const noexcept { return kind_; }
    int half_width() const noexcept { return K_; }
    int num_modes() const noexcept { return 2 * K_ + 1; }
    Eigen::Index dimension() const noexcept { return static_cast<Eigen::Index>(states_.size()); }

    const BasisState& at(Eigen::Index i) const;
    Eigen::Index index(const BasisState& s) const;
    bool contains(const BasisState& s) const noexcept;
    const std::vector<BasisState>& states() const noexcept { return states_; }

    Eigen::Index atom_a() const noexcept { return 0; }
    Eigen::Index cav_a() const noexcept { return first_mode_ - 1; }
    Eigen::Index fibre(int k) const noexcept { return first_mode_ + K_ + k; }
    Eigen::Index first_mode() const noexcept { return first_mode_; }
    Eigen::Index cav_b() const noexcept { return first_mode_ + num_modes(); }
    Eigen::Index atom_b() const noexcept { return dimension() - 1; }
    // Excited-state indices; full model only.
    Eigen::Index excited_a() const;
    Eigen::Index excited_b() const;

    friend bool operator==(const Basis& a, const Basis& b) noexcept {
        return a.kind_ == b.kind_ && a.K_ == b.K_;
    }

private:
    ModelKind kind_;
    int K_;
    Eigen::Index first_mode_;
    std::vector<BasisState> states_;
};

using BasisHandle = std::shared_ptr<const Basis>;

BasisHandle build_basis(ModelKind kind, int K);

/// State over both conserved sectors: a Q=1 amplitude vector plus the
/// scalar amplitude of AllGround. The two sectors never mix under either
/// Hamiltonian. The squared norm is the no-jump probability.
class StateVector {
public:
    explicit StateVector(BasisHandle basis);
    StateVector(BasisHandle basis, Eigen::VectorXcd amplitudes, cplx ground = 0.0);

    static StateVector unit(BasisHandle basis, const BasisState& s);

    const Basis& basis() const noexcept { return *basis_; }
    const BasisHandle& basis_handle() const noexcept { return basis_; }

    Eigen::VectorXcd& amplitudes() noexcept { return amps_; }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
    cplx& ground() noexcept { return ground_; }
    cplx ground() const noexcept { return ground_; }

    cplx& operator[](Eigen::Index i) { return amps_[i]; }
    cplx operator[](Eigen::Index i) const { return amps_[i]; }

    double squared_norm() const noexcept { return amps_.squaredNorm() + std::norm(ground_); }
    bool is_finite() const noexcept;

    StateVector& operator+=(const StateVector& o);
    StateVector& operator*=(cplx z);
    friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
    friend StateVector operator*(cplx z, StateVector a) { return a *= z; }

    void require_same_basis(const StateVector& o) const;

private:
    BasisHandle basis_;
    Eigen::VectorXcd amps_;
    cplx ground_ = 0.0;
};

/// Prepares (alpha|0> + beta|1>)|1>: alpha on AtomA_a0, beta on AllGround.
StateVector encode_initial(cplx alpha, cplx beta, BasisHandle basis);

double population(const StateVector& psi, const BasisState& s);

struct PhotonObservables {
    double n_cav_a = 0.0;
    double n_cav_b = 0.0;
    double n_fibre_total = 0.0;
    double n_fibre_resonant = 0.0;
};

PhotonObservables photon_observables(const StateVector& psi);

/// <a|b>, conjugate-linear in a. Includes the Q=0 component.
cplx overlap(const StateVector& a, const StateVector& b);

}  // namespace fibrenet
