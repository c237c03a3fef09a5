#include <benchmark/benchmark.h>

#include <vector>

#include "tunnelkit/analytic.hpp"
#include "tunnelkit/constants.hpp"
#include "tunnelkit/phasetime.hpp"
#include "tunnelkit/tdse.hpp"

using namespace tunnelkit;

namespace {

void BM_CrankNicolsonStep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const double k0 = energy_to_wavenumber(5.0, constants::electron_mass);
    const double dx = 1.0 / (32.0 * k0);
    const Grid1D grid{0.0, dx * static_cast<double>(n - 1), n};
    const GaussianPacket packet{k0, 8.0 / k0, 0.5 * grid.x_max};
    const auto field = PotentialField::rectangular(grid, 0.7 * grid.x_max, {10.0, 20 * dx, constants::electron_mass});
    const CrankNicolson cn(field, constants::electron_mass, 0.02 * constants::hbar / (5.0 * constants::ev_to_joule));
    auto psi = init_gaussian(grid, packet);
    for (auto _ : state) {
        cn.step(psi);
        benchmark::DoNotOptimize(psi.values.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_CrankNicolsonStep)->Arg(4096)->Arg(23000)->Arg(65536);

void BM_StackMatrix(benchmark::State& state) {
    DielectricStack stack{{}, 1.0};
    for (int i = 0; i < state.range(0); ++i) {
        const double n = (i % 2 == 0) ? 2.25 : 1.5;
        stack.layers.push_back({n, 1e-6 / (4 * n)});
    }
    const double omega = 2 * constants::pi * constants::speed_of_light / 1e-6;
    for (auto _ : state) benchmark::DoNotOptimize(stack_scattering(omega, stack));
}
BENCHMARK(BM_StackMatrix)->Arg(10)->Arg(100)->Arg(1000);

void BM_PhaseTimeRect(benchmark::State& state) {
    const double kappa = energy_to_wavenumber(5.0, constants::electron_mass);
    const BarrierModel model = RectangularBarrier{10.0, 8.0 / kappa, constants::electron_mass};
    const double omega = energy_to_angular_frequency(5.0);
    for (auto _ : state) benchmark::DoNotOptimize(phase_time(model, omega));
}
BENCHMARK(BM_PhaseTimeRect);

void BM_HartmanCurve(benchmark::State& state) {
    const double kappa = energy_to_wavenumber(5.0, constants::electron_mass);
    const BarrierModel model = RectangularBarrier{10.0, 1e-9, constants::electron_mass};
    std::vector<double> lengths;
    for (int i = 0; i < 64; ++i) lengths.push_back((6.0 + 0.1 * i) / kappa);
    const double omega = energy_to_angular_frequency(5.0);
    for (auto _ : state) benchmark::DoNotOptimize(hartman_curve(model, lengths, omega, {}, 1));
}
BENCHMARK(BM_HartmanCurve);

}  // namespace
BENCHMARK_MAIN();
