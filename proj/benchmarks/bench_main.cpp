#include <benchmark/benchmark.h>

#include "qtoken/phonon.hpp"
#include "qtoken/spectra.hpp"
#include "qtoken/spin_channel.hpp"
#include "qtoken/token.hpp"

using namespace qtoken;

namespace {

spectra::CavitySpinParams cavity() {
    spectra::CavitySpinParams p;
    p.omega_a = 484000;
    p.kappa = p.kappa_l = 34.07;
    p.delta = 108.76;
    p.g = 5.091082;
    p.gamma = 0.0212207;
    p.omega_s = 70.8;
    return p;
}

const spectra::PhotonSpectrum line(484000 - 63.66, 0.506);

void BM_CpFidelity(benchmark::State& state) {
    const auto p = cavity();
    for (auto _ : state) benchmark::DoNotOptimize(spectra::cp_gate_fidelity(p, line));
}
BENCHMARK(BM_CpFidelity);

void BM_ReflectionGram(benchmark::State& state) {
    const auto p = cavity();
    for (auto _ : state) benchmark::DoNotOptimize(spectra::reflection_gram(p, line));
}
BENCHMARK(BM_ReflectionGram);

void BM_DiffusedGram(benchmark::State& state) {
    const auto p = cavity();
    const spin::DiffusionModel d{static_cast<double>(state.range(0)) / 10.0};
    for (auto _ : state) benchmark::DoNotOptimize(spin::diffused_gram(p, line, d));
}
BENCHMARK(BM_DiffusedGram)->Arg(5)->Arg(20);

void BM_InputFidelities(benchmark::State& state) {
    const auto pipe = spin::Pipeline::build(cavity(), line, spin::Pi2Channel::depolarized(0.9977), 0.999);
    for (auto _ : state) benchmark::DoNotOptimize(spin::input_fidelities(pipe));
}
BENCHMARK(BM_InputFidelities);

void BM_ForgeTail(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(token::forge_acceptance_prob(n, n - 1));
}
BENCHMARK(BM_ForgeTail)->Arg(42)->Arg(1000);

void BM_MinTokenSize(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(token::min_token_size(1e-6));
}
BENCHMARK(BM_MinTokenSize);

void BM_MonteCarlo(benchmark::State& state) {
    token::Scenario s;
    s.design = {42, 41, 0.75, 1e-4};
    s.f_avg = 0.987;
    for (auto _ : state) benchmark::DoNotOptimize(token::monte_carlo_verify(s, 100000, 1));
    state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_MonteCarlo)->Unit(benchmark::kMillisecond);

void BM_Christoffel(benchmark::State& state) {
    const auto m = phonon::ElasticMedium::diamond();
    const Eigen::Vector3d k = Eigen::Vector3d(0.3, -0.5, 0.81).normalized();
    for (auto _ : state) benchmark::DoNotOptimize(phonon::christoffel_velocities(k, m));
}
BENCHMARK(BM_Christoffel);

void BM_CrossSection(benchmark::State& state) {
    const auto m = phonon::ElasticMedium::diamond();
    const Eigen::Matrix3d d = phonon::StrainSusceptibility::ground().ebx();
    for (auto _ : state) benchmark::DoNotOptimize(phonon::absorption_cross_section(d, m));
}
BENCHMARK(BM_CrossSection)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
