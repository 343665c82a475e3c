#include <benchmark/benchmark.h>

#include <string>

#include "qres/ec.hpp"
#include "qres/ihhl.hpp"
#include "qres/json_io.hpp"
#include "qres/physics.hpp"
#include "qres/qsim.hpp"

namespace {

using namespace qres;

std::string fixture(const char* name) {
  return std::string(QRES_FIXTURE_DIR) + "/" + name;
}

const ComplexMatrix& fixture_h() {
  static const ComplexMatrix h = load_matrix(fixture("h_theta20.json"));
  return h;
}

const ComplexVector& fixture_seed() {
  static const ComplexVector phi = load_vector(fixture("phi1_seed.json"));
  return phi;
}

DilatedSystem first_step_system() {
  ComplexVector phi = fixture_seed();
  phi /= hermitian_norm(phi);
  const Complex e0 = c_product(phi, fixture_h() * phi) / c_product(phi, phi);
  return dilate(build_c_operator(fixture_h(), e0, Complex(1.0, 0.0)), phi);
}

void BM_DenseEigenFixture(benchmark::State& state) {
  const ComplexMatrix& h = fixture_h();
  for (auto _ : state) {
    benchmark::DoNotOptimize(dense_eigen(h));
  }
}
BENCHMARK(BM_DenseEigenFixture);

void BM_BuildHamiltonian(benchmark::State& state) {
  RadialBasis basis;
  basis.size = static_cast<int>(state.range(0));
  const ScalingAngle theta = ScalingAngle::from_degrees(20.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        build_hamiltonian(1.0, theta, basis, ChannelSpec{}, PotentialParams{}));
  }
}
BENCHMARK(BM_BuildHamiltonian)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_EcTrainAndProject(benchmark::State& state) {
  RadialBasis basis;
  basis.size = 20;
  const auto lambdas = uniform_lambdas(1.45, 1.75, 8);
  for (auto _ : state) {
    const auto sub =
        build_subspace(solve_training_set(lambdas, basis, ChannelSpec{}, PotentialParams{}));
    benchmark::DoNotOptimize(project_target(sub, 1.0, ScalingAngle::from_degrees(20.0), basis,
                                            ChannelSpec{}, PotentialParams{}));
  }
}
BENCHMARK(BM_EcTrainAndProject)->Unit(benchmark::kMillisecond);

void BM_IhhlClassicalSolve(benchmark::State& state) {
  IhhlOptions opt;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ihhl_solve(fixture_h(), fixture_seed(), opt));
  }
}
BENCHMARK(BM_IhhlClassicalSolve)->Unit(benchmark::kMillisecond);

void BM_IhhlFullSpectrumClassical(benchmark::State& state) {
  IhhlOptions opt;
  for (auto _ : state) {
    benchmark::DoNotOptimize(full_spectrum(fixture_h(), {fixture_seed()}, opt));
  }
}
BENCHMARK(BM_IhhlFullSpectrumClassical)->Unit(benchmark::kMillisecond);

void BM_HhlCircuitDilatedSolve(benchmark::State& state) {
  const DilatedSystem sys = first_step_system();
  HhlConfig cfg;
  cfg.clock_qubits = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hhl_solve(sys.a_matrix, sys.rhs_real, cfg));
  }
}
BENCHMARK(BM_HhlCircuitDilatedSolve)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_PauliDecomposeDilated(benchmark::State& state) {
  const ComplexMatrix a = first_step_system().a_matrix;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pauli_decompose(a));
  }
}
BENCHMARK(BM_PauliDecomposeDilated);

}  // namespace

BENCHMARK_MAIN();
