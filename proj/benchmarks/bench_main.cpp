#include <electroconvect/dynamics.hpp>
#include <electroconvect/measurements.hpp>
#include <electroconvect/stokes.hpp>

#include <benchmark/benchmark.h>

#include <memory>

namespace ec = electroconvect;

namespace {

std::shared_ptr<const ec::Mesh> square(int n) {
  return std::make_shared<const ec::Mesh>(ec::build_rectangle_mesh(n, n, 1.0, 1.0));
}

ec::GalerkinBases bases(int n, int m) {
  const auto mesh = square(n);
  return {mesh, std::make_shared<const ec::StokesBasis>(ec::stokes_basis(mesh, m)),
          std::make_shared<const ec::EigenBasis>(ec::dirichlet_basis(*mesh, m))};
}

void BM_DirichletLanczos(benchmark::State& state) {
  const auto mesh = square(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(ec::dirichlet_basis(*mesh, state.range(1), {.method = ec::EigenMethod::lanczos}));
}
BENCHMARK(BM_DirichletLanczos)->Args({32, 16})->Args({64, 32})->Unit(benchmark::kMillisecond);

void BM_StokesBasis(benchmark::State& state) {
  const auto mesh = square(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ec::stokes_basis(mesh, state.range(1)));
}
BENCHMARK(BM_StokesBasis)->Args({32, 16})->Args({64, 32})->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& state) {
  const ec::GalerkinBases b = bases(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto m = b.velocity->size();
  ec::SimState s{0.0, ec::random_span_coeffs(m, m, 1), ec::random_span_coeffs(m, m, 2)};
  const ec::StepParams params;
  for (auto _ : state) {
    s = ec::step(s, 1e-4, b, params);
    benchmark::DoNotOptimize(s.a.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Step)->Args({32, 16})->Args({64, 32})->Args({128, 64})->Unit(benchmark::kMicrosecond);

void BM_Advect(benchmark::State& state) {
  const auto mesh = square(static_cast<int>(state.range(0)));
  const ec::StokesBasis sb = ec::stokes_basis(mesh, 8);
  const ec::VectorField u = sb.reconstruct(ec::random_span_coeffs(8, 8, 3));
  const Eigen::VectorXd f = Eigen::VectorXd::Random(mesh->size());
  for (auto _ : state) benchmark::DoNotOptimize(ec::advect(*mesh, u, f));
  state.SetItemsProcessed(state.iterations() * mesh->size());
}
BENCHMARK(BM_Advect)->Arg(64)->Arg(128)->Arg(256);

void BM_NonlinearTerm(benchmark::State& state) {
  const auto mesh = square(64);
  const ec::StokesBasis sb = ec::stokes_basis(mesh, state.range(0));
  const ec::VelocityCoeffs a = ec::random_span_coeffs(sb.size(), sb.size(), 4);
  for (auto _ : state) benchmark::DoNotOptimize(ec::nonlinear_term(sb, a));
}
BENCHMARK(BM_NonlinearTerm)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
