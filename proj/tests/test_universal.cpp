#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "tunnelkit/constants.hpp"
#include "tunnelkit/errors.hpp"
#include "tunnelkit/format.hpp"
#include "tunnelkit/phasetime.hpp"
#include "tunnelkit/serialization.hpp"
#include "tunnelkit/universal.hpp"

using namespace tunnelkit;
using tunnelkit::test::relative_error;

TEST_CASE("oscillation period") {
    CHECK(relative_error(oscillation_period(8.696e9), 115e-12) < 1e-3);
    CHECK(relative_error(oscillation_period(4.274e14), 2.34e-15) < 1e-3);
    CHECK(oscillation_period(1.0) == 1.0);
    CHECK_THROWS_AS(oscillation_period(0.0), DomainError);
}

TEST_CASE("massive particle period") {
    CHECK(relative_error(massive_period(54.39), 75e-18) < 0.02);
    CHECK(relative_error(massive_period(54.39), 7.60e-17) < 1e-3);
    CHECK(relative_error(massive_period(4.13567), 1.0e-15) < 1e-5);
    CHECK(relative_error(massive_period(2.0), massive_period(1.0) / 2.0) < 1e-15);
    CHECK_THROWS_AS(massive_period(-1.0), DomainError);
}

TEST_CASE("modified time and A factor") {
    CHECK(relative_error(tau_modified(120e-12, 0.675), 81e-12) < 1e-12);
    CHECK(tau_modified(3e-9, 1.0) == 3e-9);
    CHECK(relative_error(tau_modified(75e-18, 0.0567), 4.25e-18) < 1e-3);
    CHECK(relative_error(a_factor_schrodinger(54.39, 78.98), 0.0560) < 2e-3);
    // E = 4 pi^2 (V0 - E) gives A = 1.
    const double p = 4 * constants::pi * constants::pi;
    const double v0 = 10.0;
    const double e = p * v0 / (1 + p);
    CHECK(relative_error(a_factor_schrodinger(e, v0), 1.0) < 1e-12);
    CHECK(a_factor_schrodinger(1e-12, 10.0) < 1e-13);
    CHECK_THROWS_AS(a_factor_schrodinger(10.0, 10.0), DomainError);
    CHECK_THROWS_AS(a_factor_schrodinger(12.0, 10.0), DomainError);
}

TEST_CASE("both square-barrier forms") {
    CHECK(relative_error(tau_A_ratio_form(54.39, 78.98), 4.25e-18) < 0.01);
    CHECK(relative_error(tau_A_ratio_form(54.39, 78.98), 4.26e-18) < 1e-3);
    CHECK(relative_error(tau_A_ratio_form(1.0, 6.0), tau_A_ratio_form(4.0, 9.0)) < 1e-14);
    CHECK(relative_error(tau_A_ratio_form(5.0, 10.0), 2.095e-17) < 1e-3);
    CHECK(relative_error(tau_A_sqrt_form(54.39, 78.98), 18.0e-18) < 1e-3);
    CHECK(relative_error(tau_A_sqrt_form(5.0, 10.0), 1.316e-16) < 1e-3);
    CHECK(relative_error(tau_A_sqrt_form(54.39, 78.98) / tau_A_ratio_form(54.39, 78.98), 4.22) < 0.01);
}

TEST_CASE("period times A factor equals the ratio form") {
    auto rng = test::make_rng(31);
    for (int i = 0; i < 100; ++i) {
        const double v0 = test::uniform(rng, 0.1, 100.0);
        const double e = test::uniform(rng, 0.001, 0.999) * v0;
        const double lhs = tau_modified(massive_period(e), a_factor_schrodinger(e, v0));
        CHECK(relative_error(lhs, tau_A_ratio_form(e, v0)) < 1e-12);
    }
}

TEST_CASE("sqrt form is the saturated phase time") {
    for (auto [e, v0] : {std::pair{5.0, 10.0}, std::pair{54.39, 78.98}, std::pair{2.0, 9.0}}) {
        const double kappa = energy_to_wavenumber(v0 - e, constants::electron_mass);
        const BarrierModel b = RectangularBarrier{v0, 8.0 / kappa, constants::electron_mass};
        const double tau = phase_time(b, energy_to_angular_frequency(e)).value;
        CHECK(relative_error(tau, tau_A_sqrt_form(e, v0)) < 0.01);
    }
}

TEST_CASE("builtin table") {
    const auto& t = builtin_table();
    REQUIRE(t.size() == 8);
    CHECK(t[6].barrier_kind == BarrierKind::ionization);
    CHECK(t[6].tau_measured == 6e-18);
    CHECK(t[7].barrier_kind == BarrierKind::acoustic);
    CHECK(t[7].period_T == 1e-6);
    CHECK(t[0].tau_measured == 117e-12);
    CHECK(t[1].period_T == 11.3e-15);
    CHECK(t[4].tau_A == 2.98e-15);
    for (const auto& r : t) CHECK_NOTHROW(r.validate());
}

TEST_CASE("builtin table serialization is byte-stable") {
    const std::string text = to_json_text(table_to_json(builtin_table()));
    CHECK(test::fnv1a(text) == 5921894516744496389ull);
    // The shipped data file holds the same records.
    std::ifstream in(std::string(TUNNELKIT_SOURCE_DIR) + "/data/table.json");
    REQUIRE(in);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == text + "\n");
    const auto loaded = table_from_json(json::parse(buf.str()));
    REQUIRE(loaded.size() == builtin_table().size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded[i].tau_measured == builtin_table()[i].tau_measured);
        CHECK(loaded[i].period_T == builtin_table()[i].period_T);
        CHECK(loaded[i].tau_A == builtin_table()[i].tau_A);
        CHECK(loaded[i].reference == builtin_table()[i].reference);
    }
}

TEST_CASE("comparison against the table") {
    const auto report = compare(builtin_table());
    REQUIRE(report.entries.size() == 8);
    CHECK(report.universal);
    const auto& enders = report.entries[5];
    CHECK(enders.ratio_T == doctest::Approx(130.0 / 115.0));
    CHECK(enders.universal);
    const auto& ion = report.entries[6];
    CHECK(ion.ratio_T == doctest::Approx(0.08));
    CHECK(std::abs(ion.log10_ratio_T) == doctest::Approx(1.097).epsilon(1e-3));
    CHECK(ion.universal);
    CHECK_FALSE(ion.order_of_magnitude_T);
    CHECK(ion.ratio_A == doctest::Approx(6.0 / 4.25));
    CHECK(ion.order_of_magnitude_A);

    const std::string text = render_text(report);
    CHECK(text.find("universal within first order: PASS") != std::string::npos);

    // A time twenty periods long breaks universality.
    std::vector<TableRecord> bad{{BarrierKind::ftir, "hypothetical", 20e-12, 1e-12, 1e-12}};
    CHECK_FALSE(compare(bad).universal);
    CHECK_THROWS_AS(compare(std::vector<TableRecord>{}), DomainError);
}

TEST_CASE("barrier kind names round-trip") {
    for (auto k : {BarrierKind::ftir, BarrierKind::photonic_lattice, BarrierKind::undersized_waveguide,
                   BarrierKind::ionization, BarrierKind::acoustic})
        CHECK(barrier_kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(barrier_kind_from_string("phonon"), DomainError);
}
