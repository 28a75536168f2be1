#include <cmath>
#include <random>

#include "doctest.h"
#include "fibrenet/experiments.hpp"

using namespace fibrenet;

namespace {

TransferOptions quick(double T) {
    TransferOptions o;
    o.integrator = IntegratorConfig::for_duration(T);
    o.convergence.refine_dt = false;
    o.convergence.refine_K = false;
    return o;
}

ModelParams full_config(double omega, double g, double Delta_g, double L = 0.5) {
    ModelParams p = reference_params(L);
    p.model_kind = ModelKind::full;
    p.Delta_g = Delta_g;
    p.g_a = p.g_b = g;
    p.pulses.a.peak = p.pulses.b.peak = omega;
    p.K = default_half_width(p);
    return p;
}

}  // namespace

TEST_CASE("pulse schedule") {
    const PulsePair p = PulseSchedule{}.at(300.0);
    CHECK(p.b.center == doctest::Approx(120.0));
    CHECK(p.a.center == doctest::Approx(180.0));
    CHECK(p.a.width == doctest::Approx(60.0));
    CHECK(p.a.peak == 2.0);
    const PulsePair q = PulseSchedule{}.at(600.0);
    CHECK(q.a.center == doctest::Approx(2.0 * p.a.center));
    CHECK(q.b.width == doctest::Approx(2.0 * p.b.width));
}

TEST_CASE("the |1>|1> input is untouched") {
    const TransferResult r = run_transfer(reference_params(0.5), 300.0, 0.0, 1.0, quick(300.0));
    CHECK_FALSE(r.epsilon.has_value());
    CHECK_FALSE(r.pi0.has_value());
    CHECK(std::abs(r.norm_loss) <= 1e-10);
    REQUIRE(r.fidelity_superposition.has_value());
    CHECK(*r.fidelity_superposition == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(population(*r.final_state, {Role::AllGround}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.max_cav_pop == 0.0);
}

TEST_CASE("transfer at half the reference length") {
    const TransferResult r = run_transfer(reference_params(0.5), 300.0, 1.0, 0.0, quick(300.0));
    REQUIRE(r.epsilon.has_value());
    CHECK(*r.epsilon >= 0.95);
    CHECK(*r.epsilon <= 1.0 + 1e-6);
    CHECK(r.norm_loss >= -1e-6);
    CHECK(r.norm_loss <= 1.0);
    CHECK(r.pi0.has_value());
    CHECK(r.K_used == 100);
    CHECK(r.dt_used == doctest::Approx(300.0 / 32768));
}

TEST_CASE("slow lossless transfer is nearly ideal") {
    ModelParams p = reference_params(0.5, 1200.0);
    p.kappa = 0.0;
    const TransferResult r = run_transfer(p, 1200.0, 1.0, 0.0, quick(1200.0));
    CHECK(*r.epsilon >= 0.99);
    // The rest of the Q=1 population accounts for the remainder.
    const double rest = r.final_state->amplitudes().squaredNorm() - *r.epsilon;
    CHECK(std::abs(*r.epsilon + rest - 1.0) <= 1e-8);
    CHECK(std::abs(r.norm_loss) <= 1e-8);
}

TEST_CASE("input checks") {
    ModelParams p = reference_params(1.0);
    std::swap(p.pulses.a.center, p.pulses.b.center);
    CHECK_THROWS_AS(run_transfer(p, 300.0, 1.0, 0.0, quick(300.0)), ConfigurationError);
    TransferOptions o = quick(300.0);
    o.allow_intuitive_order = true;
    p.K = 2;
    CHECK_NOTHROW(run_transfer(p, 300.0, 1.0, 0.0, o));
    CHECK_THROWS_AS(run_transfer(reference_params(1.0), 300.0, 1.0, 1.0, quick(300.0)), NormalizationError);
    CHECK_THROWS_AS(run_transfer(reference_params(1.0), -1.0, 1.0, 0.0, quick(300.0)), DomainError);
}

TEST_CASE("transfer is linear in the logical amplitudes") {
    ModelParams p = reference_params(1.0);
    p.K = 12;
    const TransferOptions o = quick(300.0);
    const TransferResult r10 = run_transfer(p, 300.0, 1.0, 0.0, o);
    const TransferResult r01 = run_transfer(p, 300.0, 0.0, 1.0, o);
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> U(0.0, 6.283185307179586);
    for (int trial = 0; trial < 5; ++trial) {
        const double th = U(rng) / 4.0;
        const cplx alpha = std::polar(std::cos(th), U(rng));
        const cplx beta = std::polar(std::sin(th), U(rng));
        const TransferResult r = run_transfer(p, 300.0, alpha, beta, o);
        const StateVector expected = alpha * *r10.final_state + beta * *r01.final_state;
        CHECK((r.final_state->amplitudes() - expected.amplitudes()).norm() <= 1e-12);
        CHECK(std::abs(r.final_state->ground() - expected.ground()) <= 1e-12);
    }
}

TEST_CASE("epsilon ignores the global phase of alpha") {
    ModelParams p = reference_params(1.0);
    p.K = 12;
    const TransferOptions o = quick(300.0);
    const TransferResult a = run_transfer(p, 300.0, 1.0, 0.0, o);
    const TransferResult b = run_transfer(p, 300.0, std::polar(1.0, 2.1), 0.0, o);
    CHECK(*a.epsilon == *b.epsilon);
    CHECK(*a.fidelity_superposition == doctest::Approx(*b.fidelity_superposition).epsilon(1e-14));
}

TEST_CASE("convergence ladders") {
    ModelParams p = reference_params(0.5);
    TransferOptions o = default_options(300.0);
    o.integrator.halvings_max = 1;
    o.integrator.fidelity_tol = 1.0;
    o.convergence.K_doublings_max = 1;
    o.convergence.K_tol = 1.0;
    const TransferResult r = run_transfer(p, 300.0, 1.0, 0.0, o);
    CHECK(r.K_used == 200);
    CHECK(r.dt_used == doctest::Approx(300.0 / 65536));
    CHECK(r.converged);
}

TEST_CASE("length sweep") {
    ModelParams p = reference_params(1.0);
    const std::vector<double> Ls{0.5, 1.0, 2.0};
    const TransferOptions o = quick(300.0);
    const auto par = sweep_length(p, Ls, 300.0, PulseSchedule{}, o);
    const auto ser = sweep_length_serial(p, Ls, 300.0, PulseSchedule{}, o);
    REQUIRE(par.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(par[i].L == Ls[i]);
        REQUIRE(par[i].result.has_value());
        REQUIRE(ser[i].result.has_value());
        CHECK(*par[i].result->epsilon == *ser[i].result->epsilon);
        CHECK(par[i].result->K_used == ser[i].result->K_used);
    }
    // The L = 1 point equals a direct run at the same parameters.
    const TransferResult direct = run_transfer(reference_params(1.0), 300.0, 1.0, 0.0, o);
    CHECK(*par[1].result->epsilon == *direct.epsilon);
    CHECK(*par[1].result->pi0 == *direct.pi0);
    CHECK(par[1].result->K_used == direct.K_used);

    CHECK_THROWS_AS(sweep_length(p, {1.0, 0.5}, 300.0, PulseSchedule{}, o), ConfigurationError);
    CHECK_THROWS_AS(sweep_length(p, {-1.0, 0.5}, 300.0, PulseSchedule{}, o), ConfigurationError);
    CHECK_THROWS_AS(sweep_length_serial(p, {1.0, 1.0}, 300.0, PulseSchedule{}, o), ConfigurationError);
}

TEST_CASE("adiabaticity scan") {
    ModelParams p = reference_params(0.5);
    p.kappa = 0.0;
    const auto pts = adiabaticity_scan(p, {10.0, 300.0, 600.0, -5.0}, PulseSchedule{}, quick(300.0));
    REQUIRE(pts.size() == 4);
    REQUIRE(pts[0].result.has_value());
    CHECK(*pts[0].result->epsilon < 0.5);
    CHECK(pts[0].result->dt_used == doctest::Approx(10.0 / 32768));
    REQUIRE(pts[1].result.has_value());
    REQUIRE(pts[2].result.has_value());
    CHECK(pts[2].result->max_cav_pop < pts[1].result->max_cav_pop);
    CHECK(pts[1].result->max_cav_pop <= 0.05);
    CHECK_FALSE(pts[3].result.has_value());
    CHECK_FALSE(pts[3].error.empty());
}

TEST_CASE("pulse width insensitivity") {
    const TransferOptions o = quick(300.0);
    const double eps = *run_transfer(reference_params(0.5), 300.0, 1.0, 0.0, o).epsilon;
    for (double f : {0.8, 1.2}) {
        PulseSchedule s;
        s.width_fraction *= f;
        const double e = *run_transfer(reference_params(0.5, 300.0, s), 300.0, 1.0, 0.0, o).epsilon;
        CHECK(std::abs(e - eps) < 0.05);
    }
}

TEST_CASE("eliminated counterpart of a full configuration") {
    const ModelParams full = full_config(1.0, 1.0, 20.0);
    const ModelParams e = eliminated_counterpart(full);
    CHECK(e.model_kind == ModelKind::eliminated);
    CHECK(e.pulses.a.peak == doctest::Approx(20.0 / 400.0));
    CHECK(e.include_s11_shift);
    CHECK(max_saturation(full) == doctest::Approx(0.0025));
    CHECK(max_saturation(full_config(1.0, 1.0, 2.0)) == doctest::Approx(0.25));
    CHECK_THROWS_AS(eliminated_counterpart(reference_params(1.0)), ConfigurationError);
    CHECK_THROWS_AS(compare_models(reference_params(1.0), 300.0, quick(300.0)), ConfigurationError);
}

TEST_CASE("model comparison") {
    SUBCASE("weak saturation agrees") {
        const ModelComparison c = compare_models(full_config(1.0, 1.0, 20.0), 300.0, quick(300.0));
        CHECK(c.max_saturation == doctest::Approx(0.0025));
        CHECK(std::abs(c.epsilon_full - c.epsilon_eliminated) <= 0.05);
        CHECK_FALSE(c.saturation_warning);
    }
    SUBCASE("strong saturation disagrees and is flagged") {
        const ModelComparison c = compare_models(full_config(2.0, 2.0, 2.0), 300.0, quick(300.0));
        CHECK(c.saturation_warning);
        CHECK(std::abs(c.epsilon_full - c.epsilon_eliminated) > 0.05);
    }
    SUBCASE("no drive") {
        ModelParams p = full_config(0.0, 1.0, 20.0);
        p.K = 3;
        const ModelComparison c = compare_models(p, 300.0, quick(300.0));
        CHECK(c.epsilon_full == 0.0);
        CHECK(c.epsilon_eliminated == 0.0);
        const TransferResult r = run_transfer(p, 300.0, 1.0, 0.0, quick(300.0));
        CHECK(population(*r.final_state, {Role::AtomA_a0}) == doctest::Approx(1.0).epsilon(1e-12));
    }
}
