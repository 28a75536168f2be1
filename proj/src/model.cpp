#include "fibrenet/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fibrenet {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

bool needs_saturation(const ModelParams& p) {
    return p.gamma != 0.0 || !p.compensate_light_shift || p.include_s11_shift;
}

}  // namespace

double pulse_value(const GaussianPulse& pulse, double t) {
    const double x = (t - pulse.center) / pulse.width;
    return pulse.peak * std::exp(-x * x);
}

void ModelParams::validate() const {
    require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be >= 0");
    require(std::isfinite(kappa) && kappa >= 0.0, "kappa must be >= 0");
    require(std::isfinite(nu) && nu > 0.0, "nu must be > 0");
    require(std::isfinite(L) && L > 0.0, "L must be > 0");
    require(std::isfinite(delta0) && delta0 > 0.0, "delta0 must be > 0");
    require(K >= 0, "K must be >= 0");
    require(std::isfinite(Delta_r), "Delta_r must be finite");
    require(std::isfinite(Delta_g), "Delta_g must be finite");
    for (const GaussianPulse* pl : {&pulses.a, &pulses.b}) {
        require(pl->width > 0.0, "pulse width must be > 0");
        require(pl->peak >= 0.0, "pulse peak must be >= 0");
        require(std::isfinite(pl->center), "pulse center must be finite");
    }
    if (model_kind == ModelKind::full) {
        require(Delta_g != 0.0, "Delta_g must be nonzero in the full model");
    } else if (needs_saturation(*this)) {
        require(Delta_g != 0.0, "Delta_g must be nonzero when gamma or light shifts are active");
        require(g_a > 0.0 && g_b > 0.0, "g_a and g_b must be > 0 when gamma or light shifts are active");
    }
}

double coupling_at_length(double L) noexcept { return 1.0 / std::sqrt(L); }

int default_half_width(const ModelParams& p) {
    const double scale = std::max({p.nu, p.pulses.a.peak, p.pulses.b.peak});
    return static_cast<int>(std::ceil(10.0 * scale / p.mode_spacing()));
}

ModelParams at_length(ModelParams p, double L, bool recompute_K) {
    p.L = L;
    p.nu = coupling_at_length(L);
    if (recompute_K) p.K = default_half_width(p);
    return p;
}

SaturationParams saturation_params(cplx Omega, cplx g, double Delta_g, double gamma) {
    const double denom = Delta_g * Delta_g + gamma * gamma;
    if (!(denom > 0.0)) throw DomainError("saturation parameters need Delta_g^2 + gamma^2 > 0");
    SaturationParams s;
    s.s00 = std::norm(Omega) / denom;
    s.s11 = std::norm(g) / denom;
    s.s01 = Omega * std::conj(g) / denom;
    s.s10 = std::conj(s.s01);
    return s;
}

std::vector<double> fibre_detunings(const ModelParams& p) {
    if (p.K < 0) throw DomainError("K must be >= 0");
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(2 * p.K + 1));
    const double spacing = p.mode_spacing();
    for (int k = -p.K; k <= p.K; ++k) d.push_back(k * spacing);
    return d;
}

Hamiltonian::Hamiltonian(ModelParams params)
    : params_(std::move(params)),
      basis_(build_basis(params_.model_kind, params_.K)),
      detunings_(fibre_detunings(params_)) {
    params_.validate();
    parity_.reserve(detunings_.size());
    for (int k = -params_.K; k <= params_.K; ++k) {
        const bool odd = ((k % 2) != 0) != params_.flip_fibre_parity;
        parity_.push_back(odd ? -1.0 : 1.0);
    }
}

Hamiltonian::NodeTerms Hamiltonian::node_terms(const GaussianPulse& pulse, double g, double t,
                                               bool with_a0_term) const {
    const ModelParams& p = params_;
    const double drive = pulse_value(pulse, t);
    const cplx i{0.0, 1.0};
    NodeTerms n{};
    // Other atom sits in |a1> for every Q=1 state of this node.
    n.atom_diag = p.Delta_r;
    n.cav_diag = 2.0 * p.Delta_r - i * p.kappa;

    if (p.model_kind == ModelKind::eliminated) {
        // drive = Delta_g * s01; gamma terms scale as (gamma / Delta_g) * (Delta_g * s).
        const cplx factor = p.gamma != 0.0 ? cplx{1.0, -p.gamma / p.Delta_g} : cplx{1.0, 0.0};
        n.down = drive * factor;
        n.up = std::conj(cplx{drive}) * factor;
        if (needs_saturation(p)) {
            const double s11 = g * g / (p.Delta_g * p.Delta_g + p.gamma * p.gamma);
            const double s01 = drive / p.Delta_g;
            const double s00 = s01 * s01 / s11;
            if (with_a0_term) {
                if (!p.compensate_light_shift) n.atom_diag += p.Delta_g * s00;
                n.atom_diag -= i * p.gamma * s00;
            }
            if (p.include_s11_shift) n.cav_diag += p.Delta_g * s11;
            n.cav_diag -= i * p.gamma * s11;
        }
    } else {
        n.excited_diag = -p.Delta_g - i * p.gamma + p.Delta_r;
        n.up = drive;
        n.down = drive;
        n.cav_to_b = g;
        n.b_to_cav = g;
        if (with_a0_term && p.compensate_light_shift) {
            // Auxiliary laser cancelling the dynamic light shift of |a0>.
            n.atom_diag -= p.Delta_g * drive * drive / (p.Delta_g * p.Delta_g + p.gamma * p.gamma);
        }
    }
    return n;
}

void Hamiltonian::check_state(const StateVector& psi, const StateVector& out, ModelKind expected) const {
    if (params_.model_kind != expected) throw BasisError("Hamiltonian belongs to the " + to_string(params_.model_kind) + " model");
    if (!(psi.basis() == *basis_) || !(out.basis() == *basis_)) throw BasisError("state is not on the Hamiltonian's basis");
}

void Hamiltonian::apply(double t, const StateVector& psi, StateVector& out) const {
    if (params_.model_kind == ModelKind::eliminated)
        apply_eliminated(t, psi, out);
    else
        apply_full(t, psi, out);
}

StateVector Hamiltonian::operator()(double t, const StateVector& psi) const {
    StateVector out(basis_);
    apply(t, psi, out);
    return out;
}

namespace {

// Fibre block shared by both models: modes couple to both cavities.
inline void apply_fibre(const cplx* in, cplx* out, Eigen::Index ca, Eigen::Index cb, Eigen::Index first,
                        const std::vector<double>& det, const std::vector<double>& parity, double nu,
                        double Delta_r) {
    const cplx xa = in[ca];
    const cplx xb = in[cb];
    cplx sum_a = 0.0;
    cplx sum_b = 0.0;
    const std::size_t n = det.size();
    for (std::size_t j = 0; j < n; ++j) {
        const cplx f = in[first + static_cast<Eigen::Index>(j)];
        out[first + static_cast<Eigen::Index>(j)] = (det[j] + 2.0 * Delta_r) * f + nu * (xa + parity[j] * xb);
        sum_a += f;
        sum_b += parity[j] * f;
    }
    out[ca] += nu * sum_a;
    out[cb] += nu * sum_b;
}

}  // namespace

void Hamiltonian::apply_eliminated(double t, const StateVector& psi, StateVector& out) const {
    check_state(psi, out, ModelKind::eliminated);
    const Basis& b = *basis_;
    const NodeTerms na = node_terms(params_.pulses.a, params_.g_a, t, true);
    const NodeTerms nb = node_terms(params_.pulses.b, params_.g_b, t, true);
    const cplx* in = psi.amplitudes().data();
    cplx* o = out.amplitudes().data();

    const auto ia = b.atom_a(), ca = b.cav_a(), cb = b.cav_b(), ib = b.atom_b();
    o[ia] = na.atom_diag * in[ia] + na.down * in[ca];
    o[ca] = na.cav_diag * in[ca] + na.up * in[ia];
    o[cb] = nb.cav_diag * in[cb] + nb.up * in[ib];
    o[ib] = nb.atom_diag * in[ib] + nb.down * in[cb];
    apply_fibre(in, o, ca, cb, b.first_mode(), detunings_, parity_, params_.nu, params_.Delta_r);
    out.ground() = ground_energy() * psi.ground();
}

void Hamiltonian::apply_full(double t, const StateVector& psi, StateVector& out) const {
    check_state(psi, out, ModelKind::full);
    const Basis& b = *basis_;
    const NodeTerms na = node_terms(params_.pulses.a, params_.g_a, t, true);
    const NodeTerms nb = node_terms(params_.pulses.b, params_.g_b, t, true);
    const cplx* in = psi.amplitudes().data();
    cplx* o = out.amplitudes().data();

    const auto ia = b.atom_a(), ea = b.excited_a(), ca = b.cav_a();
    const auto cb = b.cav_b(), eb = b.excited_b(), ib = b.atom_b();
    o[ia] = na.atom_diag * in[ia] + na.down * in[ea];
    o[ea] = na.excited_diag * in[ea] + na.up * in[ia] + na.cav_to_b * in[ca];
    o[ca] = na.cav_diag * in[ca] + na.b_to_cav * in[ea];
    o[cb] = nb.cav_diag * in[cb] + nb.b_to_cav * in[eb];
    o[eb] = nb.excited_diag * in[eb] + nb.up * in[ib] + nb.cav_to_b * in[cb];
    o[ib] = nb.atom_diag * in[ib] + nb.down * in[eb];
    apply_fibre(in, o, ca, cb, b.first_mode(), detunings_, parity_, params_.nu, params_.Delta_r);
    out.ground() = ground_energy() * psi.ground();
}

Eigen::MatrixXcd Hamiltonian::assemble(double t, bool with_a0_term) const {
    const Basis& b = *basis_;
    const Eigen::Index n = b.dimension();
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
    const NodeTerms na = node_terms(params_.pulses.a, params_.g_a, t, with_a0_term);
    const NodeTerms nb = node_terms(params_.pulses.b, params_.g_b, t, with_a0_term);

    struct Node {
        const NodeTerms& terms;
        Eigen::Index atom, cav;
        Role excited;
    };
    for (const Node& node : {Node{na, b.atom_a(), b.cav_a(), Role::AtomA_b},
                             Node{nb, b.atom_b(), b.cav_b(), Role::AtomB_b}}) {
        const NodeTerms& nt = node.terms;
        H(node.atom, node.atom) = nt.atom_diag;
        H(node.cav, node.cav) = nt.cav_diag;
        if (b.kind() == ModelKind::eliminated) {
            H(node.cav, node.atom) = nt.up;
            H(node.atom, node.cav) = nt.down;
        } else {
            const Eigen::Index e = b.index({node.excited});
            H(e, e) = nt.excited_diag;
            H(e, node.atom) = nt.up;
            H(node.atom, e) = nt.down;
            H(e, node.cav) = nt.cav_to_b;
            H(node.cav, e) = nt.b_to_cav;
        }
    }
    for (int k = -b.half_width(); k <= b.half_width(); ++k) {
        const Eigen::Index f = b.fibre(k);
        const auto j = static_cast<std::size_t>(k + b.half_width());
        H(f, f) = detunings_[j] + 2.0 * params_.Delta_r;
        H(f, b.cav_a()) = H(b.cav_a(), f) = params_.nu;
        H(f, b.cav_b()) = H(b.cav_b(), f) = params_.nu * parity_[j];
    }
    return H;
}

Eigen::MatrixXcd Hamiltonian::dense(double t) const { return assemble(t, true); }

Eigen::MatrixXcd Hamiltonian::dense_partial(double t) const { return assemble(t, false); }

PhysicalEstimate estimate_physical(double kappa_f, double L_metres) {
    if (!(kappa_f > 0.0)) throw DomainError("kappa_f must be > 0");
    if (!(L_metres > 0.0)) throw DomainError("fibre length must be > 0");
    constexpr double pi = std::numbers::pi;
    PhysicalEstimate e;
    e.nu = std::sqrt(8.0 * kappa_f * pi * speed_of_light / L_metres);
    e.alpha = e.nu * std::sqrt(L_metres);
    e.mode_spacing = 4.0 * pi * speed_of_light / L_metres;
    e.N_modes_estimate = kappa_f * L_metres / (4.0 * pi * speed_of_light);
    return e;
}

}  // namespace fibrenet
