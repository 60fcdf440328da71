#include <doctest.h>
#include <mhilb/evolution.hpp>
#include <mhilb/expm.hpp>
#include <mhilb/hilbert.hpp>
#include <mhilb/errors.hpp>

#include <cmath>
#include <vector>

using namespace mhilb;

namespace {

cxmat sigma_x() {
    cxmat h(2, 2);
    h << 0.0, 1.0,
         1.0, 0.0;
    return h;
}

// H = sigma_x, Y0 = diag(1, 0), hbar = 1 has the closed form
// Y(t) = [[ (1+cos 2t)/2, -(i/2) sin 2t ], [ (i/2) sin 2t, (1-cos 2t)/2 ]]
cxmat oscillation(double t) {
    cxmat y(2, 2);
    const double c = std::cos(2 * t), s = std::sin(2 * t);
    y << cxd(0.5 * (1 + c), 0), cxd(0, -0.5 * s),
         cxd(0, 0.5 * s), cxd(0.5 * (1 - c), 0);
    return y;
}

}  // namespace

TEST_CASE("hamiltonians validate their input") {
    CHECK_THROWS_AS(hamiltonian(sigma_x(), 0.0), value_error);
    CHECK_THROWS_AS(hamiltonian(sigma_x(), -1.0), value_error);

    cxmat nonherm(2, 2);
    nonherm << 0.0, 1.0,
               2.0, 0.0;
    CHECK_THROWS_AS(hamiltonian(nonherm, 1.0), not_self_adjoint);

    cxmat rect(2, 3);
    rect.setZero();
    CHECK_THROWS_AS(hamiltonian(rect, 1.0), dimension_mismatch);
}

TEST_CASE("the propagator of a diagonal Hamiltonian is the diagonal phase") {
    cxmat h = cxmat::Zero(2, 2);
    h(0, 0) = 1.0;
    h(1, 1) = 2.0;
    hamiltonian ham(h, 1.0);

    cxmat u = ham.propagator(0.5);
    CHECK(std::abs(u(0, 0) - cxd(0.87758256189037276, -0.47942553860420301)) < 1e-14);
    CHECK(std::abs(u(1, 1) - cxd(std::cos(1.0), -std::sin(1.0))) < 1e-14);
    CHECK(std::abs(u(0, 1)) < 1e-16);

    // unitary for a wide range of times, group law, identity at zero
    for (double t : {-10.0, -3.0, 0.0, 0.5, 10.0})
        CHECK(max_abs(cxmat(ham.propagator(t).adjoint() * ham.propagator(t) -
                            cxmat::Identity(2, 2))) < 1e-13);
    CHECK(max_abs(cxmat(ham.propagator(0.3) * ham.propagator(0.9) - ham.propagator(1.2))) < 1e-13);
    CHECK(max_abs(cxmat(ham.propagator(0.0) - cxmat::Identity(2, 2))) < 1e-15);
}

TEST_CASE("rescaling H and hbar together leaves the flow unchanged") {
    cxmat h(2, 2);
    h << 1.0, cxd(0.3, 0.2),
         cxd(0.3, -0.2), -0.7;
    hamiltonian a(h, 1.0);
    hamiltonian b(cxmat(7.0 * h), 7.0);
    for (double t : {-5.0, 0.4, 3.0})
        CHECK(max_abs(cxmat(a.propagator(t) - b.propagator(t))) < 1e-12);
}

TEST_CASE("evolved trajectories satisfy the equation of motion") {
    hamiltonian ham(sigma_x(), 1.0);
    state_vector psi{cxvec(2)};
    psi.coords << cxd(0.6, 0), cxd(0, 0.8);

    auto moved = evolve_state(ham, 1.3, psi);
    CHECK(moved.norm() == doctest::Approx(1.0).epsilon(1e-13));

    auto residual_at = [&](double step) {
        std::vector<cxvec> traj;
        for (int k = -1; k <= 1; ++k)
            traj.push_back(evolve_state(ham, 0.2 + step * k, psi).coords);
        return schrodinger_residual(ham, traj, step);
    };
    double r1 = residual_at(1e-3);
    double r2 = residual_at(5e-4);
    CHECK(r1 < 1e-6);
    // halving the step quarters the central difference error
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.15));

    CHECK_THROWS_AS(residual_at(2e-3), grid_too_coarse);
    std::vector<cxvec> tiny = {psi.coords, psi.coords};
    CHECK_THROWS_AS(schrodinger_residual(ham, tiny, 1e-4), insufficient_samples);
}

TEST_CASE("the moving picture operator matches the closed form oscillation") {
    hamiltonian ham(sigma_x(), 1.0);
    cxmat y0 = cxmat::Zero(2, 2);
    y0(0, 0) = 1.0;
    observable y(y0);

    for (double t : {0.0, 0.4, 1.1, -2.3}) {
        auto yt = heisenberg_operator(ham, t, y);
        CHECK(max_abs(cxmat(yt.matrix() - oscillation(t))) < 1e-13);
    }

    // expectation values agree between the two pictures
    state_vector psi{cxvec(2)};
    psi.coords << cxd(0.6, 0), cxd(0, 0.8);
    double t = 0.7;
    auto yt = heisenberg_operator(ham, t, y);
    cxd still = state_functional(yt, psi);
    cxd moving = state_functional(y, evolve_state(ham, t, psi));
    CHECK(std::abs(still - moving) < 1e-13);

    // derivative at zero: dY/dt = -(1/i hbar)[H, Y] = i[H, Y] for hbar 1
    double hstep = 1e-5;
    cxmat diff = (heisenberg_operator(ham, hstep, y).matrix() -
                  heisenberg_operator(ham, -hstep, y).matrix()) /
                 (2 * hstep);
    cxmat commutator = sigma_x() * y0 - y0 * sigma_x();
    CHECK(max_abs(cxmat(diff - cxd(0, 1) * commutator)) < 1e-9);
}

TEST_CASE("stationary states span the kernel of the Hamiltonian") {
    cxmat h = cxmat::Zero(3, 3);
    h(2, 2) = 3.0;
    hamiltonian ham(h, 1.0);

    auto states = stationary_states(ham);
    REQUIRE(states.size() == 2);
    for (const auto& v : states) {
        CHECK(max_abs(cxvec(h * v)) < 1e-12);
        CHECK(std::abs(v.norm() - 1.0) < 1e-12);
        // invariant under the flow
        CHECK(max_abs(cxvec(ham.propagator(2.7) * v - v)) < 1e-12);
    }
    CHECK(std::abs(states[0].dot(states[1])) < 1e-12);

    hamiltonian gapped(cxmat(sigma_x()), 1.0);
    CHECK(stationary_states(gapped).empty());
}

TEST_CASE("the energy spectrum clusters eigenvalues and reassembles H") {
    cxmat h = cxmat::Zero(3, 3);
    h(0, 0) = 2.0;
    h(1, 1) = 2.0;
    h(2, 2) = 5.0;
    hamiltonian ham(h, 1.0);

    auto lines = energy_spectrum(ham);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].energy == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(lines[1].energy == doctest::Approx(5.0).epsilon(1e-13));
    CHECK(std::abs(lines[0].projection.trace() - cxd(2.0, 0)) < 1e-12);

    cxmat total = cxmat::Zero(3, 3), rebuilt = cxmat::Zero(3, 3);
    for (const auto& line : lines) {
        total += line.projection;
        rebuilt += line.energy * line.projection;
        observable p(line.projection);
        CHECK(p.hermiticity_defect() < 1e-13);
        CHECK(p.idempotency_defect() < 1e-13);
    }
    CHECK(max_abs(cxmat(total - cxmat::Identity(3, 3))) < 1e-13);
    CHECK(max_abs(cxmat(rebuilt - h)) < 1e-12);

    // eigenvalues closer than the clustering width merge into one line
    cxmat near = cxmat::Zero(2, 2);
    near(0, 0) = 1.0;
    near(1, 1) = 1.0 + 1e-12;
    CHECK(energy_spectrum(hamiltonian(near, 1.0)).size() == 1);
    cxmat split = cxmat::Zero(2, 2);
    split(0, 0) = 1.0;
    split(1, 1) = 1.1;
    CHECK(energy_spectrum(hamiltonian(split, 1.0)).size() == 2);
}

TEST_CASE("evaluation maps read coefficient vectors at grid times") {
    std::vector<std::function<cxd(double)>> monomials = {
        [](double) { return cxd(1, 0); },
        [](double t) { return cxd(t, 0); },
        [](double t) { return cxd(t * t, 0); },
    };
    evaluation_map em(monomials, {0.0, 1.0, 2.0, 3.0});

    cxvec x(3);
    x << 1.0, 2.0, 3.0;
    CHECK(std::abs(em.apply(2.0, x) - cxd(17.0, 0)) < 1e-14);
    CHECK(std::abs(em.apply(0.0, x) - cxd(1.0, 0)) < 1e-14);
    CHECK_THROWS_AS(em.apply(2.5, x), out_of_domain);

    cxvec wrong(2);
    wrong.setZero();
    CHECK_THROWS_AS(em.apply(2.0, wrong), dimension_mismatch);
}

TEST_CASE("evaluation of a Fourier family intertwines with phase gauges") {
    const double omega[3] = {0.0, 1.0, 2.0};
    std::vector<std::function<cxd(double)>> fourier;
    for (double w : omega)
        fourier.push_back([w](double t) { return std::exp(cxd(0, w * t)); });
    evaluation_map em(fourier, {0.0, 0.3, 0.5, 0.8});

    cxvec x(3);
    x << cxd(0.4, 0.1), cxd(-0.2, 0.6), cxd(0.9, -0.3);

    // multiplying coefficient k by exp(i omega_k theta) translates time
    double theta = 0.5;
    cxvec shifted(3);
    for (int k = 0; k < 3; ++k) shifted(k) = std::exp(cxd(0, omega[k] * theta)) * x(k);
    CHECK(std::abs(em.apply(0.3 + theta, x) - em.apply(0.3, shifted)) < 1e-14);
    CHECK(std::abs(em.apply(0.0 + theta, x) - em.apply(0.0, shifted)) < 1e-14);
}
