#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "tunnelkit/constants.hpp"
#include "tunnelkit/errors.hpp"
#include "tunnelkit/phasetime.hpp"
#include "tunnelkit/scenario.hpp"
#include "tunnelkit/tdse.hpp"

using namespace tunnelkit;
using tunnelkit::test::relative_error;

namespace {
TraversalScenario bundled(const char* name) {
    return load_scenario(std::string(TUNNELKIT_SOURCE_DIR) + "/scenarios/" + name);
}
}  // namespace

TEST_CASE("free flight through a zero-height barrier") {
    const auto s = bundled("free_v0.json");
    const auto m = measure_traversal(s);
    const double v = constants::hbar * s.packet.center_wavenumber / s.barrier.mass;
    CHECK(relative_error(m.delay.value, s.barrier.width / v) < 0.01);
    CHECK(m.norm_drift < 1e-9);
}

TEST_CASE("halving dx and dt moves the traversal time by under 2%") {
    const auto coarse_s = bundled("rect_e5_v10.json");
    const auto coarse = measure_traversal(coarse_s);
    auto fine_s = coarse_s;
    fine_s.settings.dx = plan_simulation(coarse_s).grid.dx() / 2.0;
    fine_s.settings.phase_per_step = coarse_s.settings.phase_per_step / 2.0;
    fine_s.settings.sample_every = 2 * coarse_s.settings.sample_every;
    const auto fine = measure_traversal(fine_s);
    MESSAGE("coarse " << coarse.delay.value << " s, fine " << fine.delay.value << " s");
    CHECK(relative_error(coarse.delay.value, fine.delay.value) < 0.02);
}

TEST_CASE("peak and centroid estimators agree for a narrow-band packet") {
    const auto m = measure_traversal(bundled("rect_e5_v10_kd8_s16.json"));
    const double centroid = m.delay.metadata.at("tau_centroid_s").get<double>();
    CHECK(relative_error(centroid, m.delay.value) < 0.10);
    CHECK_FALSE(m.delay.metadata.at("packet_breakup").get<bool>());
}

TEST_CASE("an opaque barrier is rejected") {
    auto s = bundled("rect_e5_v10.json");
    s.barrier.width *= 4.0;  // kappa d = 32
    CHECK_THROWS_AS(measure_traversal(s), OpaqueBarrierError);
}
