#include <doctest.h>

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "free_packet.hpp"
#include "test_support.hpp"
#include "tunnelkit/constants.hpp"
#include "tunnelkit/errors.hpp"
#include "tunnelkit/tdse.hpp"

using namespace tunnelkit;
using tunnelkit::test::relative_error;
using C = std::complex<double>;

namespace {

const double kMe = constants::electron_mass;

// Sine modes of the discrete hard-wall Laplacian on n points: the walls sit one
// spacing outside both end points.
struct SineModes {
    std::size_t n;
    double kinetic;  // hbar^2 / (2 m dx^2), J
    double v;        // constant potential, J

    double mode(std::size_t m, std::size_t j) const {
        return std::sqrt(2.0 / static_cast<double>(n + 1)) *
               std::sin(constants::pi * static_cast<double>(m * (j + 1)) / static_cast<double>(n + 1));
    }
    double energy(std::size_t m) const {
        return 2.0 * kinetic * (1.0 - std::cos(constants::pi * static_cast<double>(m) / static_cast<double>(n + 1))) + v;
    }
    // Exact evolution of psi over time t.
    std::vector<C> evolve(const std::vector<C>& psi, double t) const {
        std::vector<C> out(n, 0.0);
        for (std::size_t m = 1; m <= n; ++m) {
            C c = 0.0;
            for (std::size_t j = 0; j < n; ++j) c += mode(m, j) * psi[j];
            c *= std::exp(C(0, -energy(m) * t / constants::hbar));
            for (std::size_t j = 0; j < n; ++j) out[j] += c * mode(m, j);
        }
        return out;
    }
};

double distance(const std::vector<C>& a, const std::vector<C>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

GaussianPacket packet_for(double energy_ev, double k0_sigma, double x0) {
    const double k0 = energy_to_wavenumber(energy_ev, kMe);
    return {k0, k0_sigma / k0, x0};
}

}  // namespace

TEST_CASE("grid validation") {
    CHECK_NOTHROW((Grid1D{0.0, 1.0, 16}.validate()));
    CHECK_THROWS((Grid1D{0.0, 1.0, 15}.validate()));
    CHECK_THROWS((Grid1D{1.0, 0.0, 32}.validate()));
    const Grid1D g{0.0, 1.0, 11};
    CHECK(g.dx() == doctest::Approx(0.1));
    CHECK(g.floor_index(0.55) == 5);
    CHECK(g.floor_index(-3.0) == 0);
    CHECK(g.floor_index(7.0) == 10);
}

TEST_CASE("gaussian initial state") {
    const auto p = packet_for(5.0, 8.0, 0.0);
    const double dx = 1.0 / (32.0 * p.center_wavenumber);
    const Grid1D grid{-10 * p.spatial_sigma, 10 * p.spatial_sigma,
                      static_cast<std::size_t>(20 * p.spatial_sigma / dx) + 1};
    const auto psi = init_gaussian(grid, p);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
    CHECK(std::abs(psi.centroid() - p.center_position) < grid.dx());
    CHECK(relative_error(psi.mean_wavenumber(), p.center_wavenumber) < 1e-3);
    CHECK(relative_error(std::sqrt(psi.variance()), p.spatial_sigma) < 1e-6);
    CHECK(std::abs(psi.peak_position() - p.center_position) < 0.1 * grid.dx());
}

TEST_CASE("gaussian guards") {
    const auto p = packet_for(5.0, 8.0, 0.0);
    const Grid1D coarse{-10 * p.spatial_sigma, 10 * p.spatial_sigma, 64};
    CHECK_THROWS_WITH_AS(init_gaussian(coarse, p), doctest::Contains("resolution guard"), ConfigurationError);
    const Grid1D narrow{-2 * p.spatial_sigma, 10 * p.spatial_sigma, 20000};
    CHECK_THROWS_AS(init_gaussian(narrow, p), ConfigurationError);
}

TEST_CASE("one free step preserves the norm") {
    const auto p = packet_for(5.0, 8.0, 0.0);
    const Grid1D grid{-10 * p.spatial_sigma, 10 * p.spatial_sigma, 8192};
    const auto psi = init_gaussian(grid, p);
    const double dt = 0.02 * constants::hbar / (5.0 * constants::ev_to_joule);
    const auto next = step(psi, PotentialField::zero(grid), dt);
    CHECK(std::abs(next.norm() - psi.norm()) < 1e-12);
    CHECK_THROWS(CrankNicolson(PotentialField::zero(grid), kMe, 0.0));
    CHECK_THROWS(CrankNicolson(PotentialField::zero(grid), kMe, -dt));
}

TEST_CASE("discrete eigenstates only acquire a phase") {
    const std::size_t n = 64;
    const Grid1D grid{0.0, 1e-9, n};
    const double v_ev = 1.0;
    PotentialField field = PotentialField::zero(grid);
    for (auto& v : field.values) v = v_ev;
    const SineModes modes{n, constants::hbar * constants::hbar / (2 * kMe * grid.dx() * grid.dx()),
                          v_ev * constants::ev_to_joule};
    for (std::size_t m : {1u, 3u, 17u, 40u}) {
        const double e = modes.energy(m);
        const double dt = 1e-3 * constants::hbar / e;
        WaveFunction psi{grid, std::vector<C>(n)};
        for (std::size_t j = 0; j < n; ++j) psi.values[j] = modes.mode(m, j);
        const auto before = psi.values;
        CrankNicolson(field, kMe, dt).step(psi);
        const C expected_phase = std::exp(C(0, -e * dt / constants::hbar));
        for (std::size_t j = 0; j < n; ++j) {
            CHECK(std::abs(std::abs(psi.values[j]) - std::abs(before[j])) < 1e-10);
            CHECK(std::abs(psi.values[j] - expected_phase * before[j]) < 1e-10);
        }
    }
}

TEST_CASE("local error is third order in dt") {
    const std::size_t n = 64;
    const Grid1D grid{0.0, 2e-9, n};
    const PotentialField field = PotentialField::zero(grid);
    const SineModes modes{n, constants::hbar * constants::hbar / (2 * kMe * grid.dx() * grid.dx()), 0.0};
    WaveFunction psi0{grid, std::vector<C>(n)};
    for (std::size_t j = 0; j < n; ++j) {
        const double x = grid.x(j) - 1e-9;
        psi0.values[j] = std::exp(-x * x / (4 * 0.15e-9 * 0.15e-9)) * std::exp(C(0, 3e9 * x));
    }
    const double base = 0.2 * constants::hbar / modes.energy(8);
    std::vector<double> step_errors, exact_errors;
    for (double dt : {base, base / 2, base / 4}) {
        WaveFunction one = psi0;
        CrankNicolson(field, kMe, dt).step(one);
        WaveFunction two = psi0;
        const CrankNicolson half(field, kMe, dt / 2);
        half.step(two);
        half.step(two);
        step_errors.push_back(distance(one.values, two.values));
        exact_errors.push_back(distance(one.values, modes.evolve(psi0.values, dt)));
    }
    for (std::size_t i = 1; i < step_errors.size(); ++i) {
        const double order_step = std::log2(step_errors[i - 1] / step_errors[i]);
        const double order_exact = std::log2(exact_errors[i - 1] / exact_errors[i]);
        CHECK(order_step == doctest::Approx(3.0).epsilon(0.05));
        CHECK(order_exact == doctest::Approx(3.0).epsilon(0.05));
    }
}

TEST_CASE("norm survives ten thousand steps against a wall") {
    const auto p = packet_for(5.0, 6.0, 0.0);
    const double dx = 1.0 / (32.0 * p.center_wavenumber);
    const Grid1D grid{-8 * p.spatial_sigma, 12 * p.spatial_sigma,
                      static_cast<std::size_t>(20 * p.spatial_sigma / dx) + 1};
    RectangularBarrier wall{8.0, 2 * p.spatial_sigma, kMe};
    const auto field = PotentialField::rectangular(grid, 6 * p.spatial_sigma, wall);
    const double dt = 0.02 * constants::hbar / (5.0 * constants::ev_to_joule);
    EvolveConfig config{dt, 10000, 1000, 0.0, kMe};
    const auto traj = evolve(init_gaussian(grid, p), field, config);
    for (const auto& row : traj.rows) CHECK(std::abs(row.norm - 1.0) < 1e-9);
    CHECK(traj.rows.size() == 11);
}

TEST_CASE("energy is conserved with a static barrier") {
    const auto p = packet_for(5.0, 8.0, -4e-9);
    const double dx = 1.0 / (32.0 * p.center_wavenumber);
    const Grid1D grid{-10e-9, 10e-9, static_cast<std::size_t>(20e-9 / dx) + 1};
    const auto field = PotentialField::rectangular(grid, 0.0, {10.0, 0.5e-9, kMe});
    const double dt = 0.02 * constants::hbar / (5.0 * constants::ev_to_joule);
    const CrankNicolson cn(field, kMe, dt);
    auto psi = init_gaussian(grid, p);
    const double e0 = cn.energy(psi);
    CHECK(e0 == doctest::Approx(5.0).epsilon(0.05));
    double worst = 0;
    for (int i = 0; i < 3000; ++i) {
        cn.step(psi);
        if (i % 100 == 0) worst = std::max(worst, std::abs(cn.energy(psi) - e0) / e0);
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("free packet follows the closed-form motion") {
    const auto check = test::run_free_packet();
    CHECK(relative_error(check.velocity, check.expected_velocity) < 0.005);
    CHECK(check.worst_width_error < 0.01);
    CHECK(check.norm_drift < 1e-9);
}

TEST_CASE("potential fields") {
    const Grid1D grid{-1e-9, 1e-9, 201};
    const auto f = PotentialField::rectangular(grid, 0.0, {3.0, 0.5e-9, kMe});
    CHECK(f.max_abs() == 3.0);
    CHECK(f.values[grid.floor_index(-0.1e-9)] == 0.0);
    CHECK(f.values[grid.floor_index(0.25e-9)] == 3.0);
    CHECK(f.values[grid.floor_index(0.8e-9)] == 0.0);
    CHECK(PotentialField::zero(grid).max_abs() == 0.0);
}

TEST_CASE("trajectory csv layout") {
    std::vector<Observation> rows{{0, 0.0, 1.0, -1e-9, -1e-9, 0.0}, {10, 1e-17, 1.0, -0.9e-9, -0.9e-9, 2e8}};
    std::ostringstream os;
    write_trajectory_csv(os, rows);
    CHECK(os.str() ==
          "step,t,norm,centroid,peak_x,detector_flux\n"
          "0,0.00000000e+00,1.00000000e+00,-1.00000000e-09,-1.00000000e-09,0.00000000e+00\n"
          "10,1.00000000e-17,1.00000000e+00,-9.00000000e-10,-9.00000000e-10,2.00000000e+08\n");
}

TEST_CASE("simulation plan keeps walls away") {
    TraversalScenario s;
    s.barrier = {10.0, 8.0 / energy_to_wavenumber(5.0, kMe), kMe};
    s.packet = packet_for(5.0, 8.0, 0.0);
    s.packet.center_position = -9 * s.packet.spatial_sigma;
    s.detector_offset = 3 * s.packet.spatial_sigma;
    const auto plan = plan_simulation(s);
    CHECK(walls_safe(plan, s.barrier.width));
    CHECK(plan.grid.dx() * s.packet.center_wavenumber < 0.5);
    CHECK(plan.detector_x == doctest::Approx(s.barrier.width + s.detector_offset));
    CHECK(plan.n_steps > 1000);

    TraversalScenario broad = s;
    broad.packet.spatial_sigma = 3.0 / broad.packet.center_wavenumber;
    CHECK_THROWS_AS(plan_simulation(broad), ConfigurationError);
    TraversalScenario overlapping = s;
    overlapping.packet.center_position = -2 * s.packet.spatial_sigma;
    CHECK_THROWS_AS(plan_simulation(overlapping), ConfigurationError);
    TraversalScenario coarse = s;
    coarse.settings.dx = 1.0 / s.packet.center_wavenumber;
    CHECK_THROWS_WITH(plan_simulation(coarse), doctest::Contains("resolution guard"));
}
