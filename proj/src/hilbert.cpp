#include "fibrenet/hilbert.hpp"

#include <cmath>

namespace fibrenet {

std::string to_string(ModelKind kind) {
    return kind == ModelKind::full ? "full" : "eliminated";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "eliminated") return ModelKind::eliminated;
    if (name == "full") return ModelKind::full;
    throw std::invalid_argument("unknown model kind '" + name + "'");
}

std::string to_string(const BasisState& s) {
    switch (s.role) {
        case Role::AtomA_a0: return "AtomA_a0";
        case Role::AtomA_b: return "AtomA_b";
        case Role::CavA: return "CavA";
        case Role::Fibre: return "Fibre(" + std::to_string(s.mode) + ")";
        case Role::CavB: return "CavB";
        case Role::AtomB_b: return "AtomB_b";
        case Role::AtomB_a0: return "AtomB_a0";
        case Role::AllGround: return "AllGround";
    }
    return "?";
}

Basis::Basis(ModelKind kind, int K) : kind_(kind), K_(K) {
    if (K < 0) throw BasisError("fibre half-width K must be non-negative");
    const bool full = kind == ModelKind::full;
    states_.reserve(static_cast<std::size_t>((full ? 6 : 4) + 2 * K + 1));
    states_.push_back({Role::AtomA_a0});
    if (full) states_.push_back({Role::AtomA_b});
    states_.push_back({Role::CavA});
    first_mode_ = static_cast<Eigen::Index>(states_.size());
    for (int k = -K; k <= K; ++k) states_.push_back(BasisState::fibre(k));
    states_.push_back({Role::CavB});
    if (full) states_.push_back({Role::AtomB_b});
    states_.push_back({Role::AtomB_a0});
}

const BasisState& Basis::at(Eigen::Index i) const {
    if (i < 0 || i >= dimension()) throw BasisError("basis index out of range");
    return states_[static_cast<std::size_t>(i)];
}

bool Basis::contains(const BasisState& s) const noexcept {
    switch (s.role) {
        case Role::AtomA_b:
        case Role::AtomB_b: return kind_ == ModelKind::full;
        case Role::Fibre: return s.mode >= -K_ && s.mode <= K_;
        case Role::AllGround: return false;
        default: return true;
    }
}

Eigen::Index Basis::index(const BasisState& s) const {
    if (!contains(s)) throw BasisError("state " + to_string(s) + " is not in the " + to_string(kind_) + " basis");
    switch (s.role) {
        case Role::AtomA_a0: return atom_a();
        case Role::AtomA_b: return 1;
        case Role::CavA: return cav_a();
        case Role::Fibre: return fibre(s.mode);
        case Role::CavB: return cav_b();
        case Role::AtomB_b: return dimension() - 2;
        case Role::AtomB_a0: return atom_b();
        case Role::AllGround: break;
    }
    throw BasisError("unreachable");
}

Eigen::Index Basis::excited_a() const { return index({Role::AtomA_b}); }
Eigen::Index Basis::excited_b() const { return index({Role::AtomB_b}); }

BasisHandle build_basis(ModelKind kind, int K) { return std::make_shared<const Basis>(kind, K); }

StateVector::StateVector(BasisHandle basis)
    : basis_(std::move(basis)), amps_(Eigen::VectorXcd::Zero(basis_->dimension())) {}

StateVector::StateVector(BasisHandle basis, Eigen::VectorXcd amplitudes, cplx ground)
    : basis_(std::move(basis)), amps_(std::move(amplitudes)), ground_(ground) {
    if (amps_.size() != basis_->dimension()) throw BasisError("amplitude vector length does not match basis");
}

StateVector StateVector::unit(BasisHandle basis, const BasisState& s) {
    StateVector v(std::move(basis));
    if (s.role == Role::AllGround)
        v.ground_ = 1.0;
    else
        v.amps_[v.basis_->index(s)] = 1.0;
    return v;
}

bool StateVector::is_finite() const noexcept {
    return amps_.allFinite() && std::isfinite(ground_.real()) && std::isfinite(ground_.imag());
}

void StateVector::require_same_basis(const StateVector& o) const {
    if (!(*basis_ == *o.basis_)) throw BasisError("state vectors live on different bases");
}

StateVector& StateVector::operator+=(const StateVector& o) {
    require_same_basis(o);
    amps_ += o.amps_;
    ground_ += o.ground_;
    return *this;
}

StateVector& StateVector::operator*=(cplx z) {
    amps_ *= z;
    ground_ *= z;
    return *this;
}

StateVector encode_initial(cplx alpha, cplx beta, BasisHandle basis) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
        throw NormalizationError("|alpha|^2 + |beta|^2 must equal 1");
    StateVector psi(std::move(basis));
    psi[psi.basis().atom_a()] = alpha;
    psi.ground() = beta;
    return psi;
}

double population(const StateVector& psi, const BasisState& s) {
    if (s.role == Role::AllGround) return std::norm(psi.ground());
    return std::norm(psi[psi.basis().index(s)]);
}

PhotonObservables photon_observables(const StateVector& psi) {
    const Basis& b = psi.basis();
    PhotonObservables obs;
    obs.n_cav_a = std::norm(psi[b.cav_a()]);
    obs.n_cav_b = std::norm(psi[b.cav_b()]);
    obs.n_fibre_total = psi.amplitudes().segment(b.first_mode(), b.num_modes()).squaredNorm();
    obs.n_fibre_resonant = std::norm(psi[b.fibre(0)]);
    return obs;
}

cplx overlap(const StateVector& a, const StateVector& b) {
    a.require_same_basis(b);
    return a.amplitudes().dot(b.amplitudes()) + std::conj(a.ground()) * b.ground();
}

}  // namespace fibrenet
