#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qres/ec.hpp"
#include "test_util.hpp"

using namespace qres;
using testutil::check_close;

namespace {

RadialBasis test_basis() {
  RadialBasis basis;
  basis.size = 20;  // enough structure for EC, cheap enough to train repeatedly
  return basis;
}

std::vector<TrainingPoint> default_training(const RadialBasis& basis) {
  return solve_training_set(uniform_lambdas(1.45, 1.75, 8), basis, ChannelSpec{},
                            PotentialParams{});
}

double full_ground_energy(double lambda, const RadialBasis& basis) {
  const auto ham = build_hamiltonian(lambda, ScalingAngle{}, basis, ChannelSpec{},
                                     PotentialParams{});
  return dense_eigen(ham.matrix).eigenvalues(0).real();
}

}  // namespace

TEST_CASE("uniform_lambdas: inclusive endpoints, spacing 0.3/7") {
  const auto ls = uniform_lambdas(1.45, 1.75, 8);
  REQUIRE(ls.size() == 8);
  CHECK(ls.front() == doctest::Approx(1.45));
  CHECK(ls.back() == doctest::Approx(1.75));
  for (int i = 0; i < 8; ++i) CHECK(ls[i] == doctest::Approx(1.45 + 0.3 * i / 7.0));
  const auto single = uniform_lambdas(1.6, 1.6, 1);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == doctest::Approx(1.6));
}

TEST_CASE("solve_training_set: 8 default points, bound and strictly deeper with lambda") {
  const auto basis = test_basis();
  const auto points = default_training(basis);
  REQUIRE(points.size() == 8);
  for (int i = 0; i < 8; ++i) {
    const auto& p = points[i];
    CHECK(p.lambda == doctest::Approx(1.45 + 0.3 * i / 7.0));
    CHECK(p.energy < 0.0);
    if (i > 0) CHECK(p.energy < points[i - 1].energy);
    REQUIRE(p.wavefunction.size() == basis.size);
    // Real entries, unit Hermitian norm, largest-magnitude component positive.
    CHECK(p.wavefunction.imag().norm() <= 1e-12);
    CHECK(hermitian_norm(p.wavefunction) == doctest::Approx(1.0).epsilon(1e-12));
    Eigen::Index imax = 0;
    p.wavefunction.cwiseAbs().maxCoeff(&imax);
    CHECK(p.wavefunction(imax).real() > 0.0);
  }
}

TEST_CASE("solve_training_set: single point matches full diagonalization exactly") {
  const auto basis = test_basis();
  const auto points = solve_training_set({1.75}, basis, ChannelSpec{}, PotentialParams{});
  REQUIRE(points.size() == 1);
  CHECK(points[0].energy == doctest::Approx(full_ground_energy(1.75, basis)).epsilon(1e-14));
}

TEST_CASE("solve_training_set: unbound coupling is rejected") {
  // At lambda = 0.1 the well is far too shallow against the L = 4 barrier;
  // the full spectrum is positive (checked via dense_eigen below).
  const auto basis = test_basis();
  const auto ham =
      build_hamiltonian(0.1, ScalingAngle{}, basis, ChannelSpec{}, PotentialParams{});
  CHECK(dense_eigen(ham.matrix).eigenvalues(0).real() >= 0.0);
  CHECK_THROWS_WITH_AS(solve_training_set({0.1}, basis, ChannelSpec{}, PotentialParams{}),
                       doctest::Contains("unbound training point"), physics_error);
}

TEST_CASE("build_subspace: default training set spans dimension 8 with Gram = I") {
  const auto points = default_training(test_basis());
  const auto sub = build_subspace(points);
  CHECK(sub.dimension == 8);
  CHECK(sub.basis_vectors.cols() == 8);
  CHECK(sub.warnings.empty());
  REQUIRE(sub.source_lambdas.size() == 8);
  for (int i = 0; i < 8; ++i) CHECK(sub.source_lambdas[i] == doctest::Approx(points[i].lambda));
  const ComplexMatrix gram = sub.basis_vectors.adjoint() * sub.basis_vectors;
  CHECK((gram - ComplexMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("build_subspace: duplicated point collapses to dimension 1 with a warning") {
  const auto basis = test_basis();
  const auto points = solve_training_set({1.6}, basis, ChannelSpec{}, PotentialParams{});
  std::vector<TrainingPoint> dup = {points[0], points[0]};
  const auto sub = build_subspace(dup);
  CHECK(sub.dimension == 1);
  CHECK(sub.basis_vectors.cols() == 1);
  CHECK_FALSE(sub.warnings.empty());
}

TEST_CASE("build_subspace: one point gives that normalized vector") {
  const auto basis = test_basis();
  const auto points = solve_training_set({1.7}, basis, ChannelSpec{}, PotentialParams{});
  const auto sub = build_subspace(points);
  REQUIRE(sub.dimension == 1);
  const ComplexVector u = sub.basis_vectors.col(0);
  CHECK(hermitian_norm(u) == doctest::Approx(1.0).epsilon(1e-12));
  // Training vectors are already unit-norm, so orthonormalization is a no-op.
  CHECK((u - points[0].wavefunction).norm() <= 1e-12);
  CHECK_THROWS_AS(build_subspace({}), std::invalid_argument);
}

TEST_CASE("project_target: theta = 0 inside the window matches the full basis to 1e-3") {
  const auto basis = test_basis();
  const auto sub = build_subspace(default_training(basis));
  for (double target : {1.5, 1.6, 1.72}) {
    const auto mats =
        project_target(sub, target, ScalingAngle{}, basis, ChannelSpec{}, PotentialParams{});
    CHECK(mats.target_lambda == doctest::Approx(target));
    CHECK((mats.n_ec - ComplexMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-12);
    const auto gen = generalized_eigen(mats.h_ec, mats.n_ec);
    CHECK(std::abs(gen.eigenvalues(0).real() - full_ground_energy(target, basis)) <= 1e-3);
    CHECK(std::abs(gen.eigenvalues(0).imag()) <= 1e-8);
  }
}

TEST_CASE("project_target: theta = 20 deg resonance candidate near the reference") {
  const auto basis = test_basis();
  const auto sub = build_subspace(default_training(basis));
  const auto mats = project_target(sub, 1.0, ScalingAngle::from_degrees(20.0), basis,
                                   ChannelSpec{}, PotentialParams{});
  REQUIRE(mats.h_ec.rows() == 8);
  CHECK(is_complex_symmetric(mats.h_ec, 1e-10));
  const auto eig = dense_eigen(mats.h_ec);
  const Complex cand = pick_resonance(eig.eigenvalues, Complex(11.8079, -1.8085));
  CHECK(std::abs(cand.real() - 11.8079) <= 0.5);
}

TEST_CASE("project_target: dimension-1 subspace gives the 1x1 c-expectation value") {
  const auto basis = test_basis();
  const auto points = solve_training_set({1.6}, basis, ChannelSpec{}, PotentialParams{});
  const auto sub = build_subspace(points);
  const ScalingAngle theta = ScalingAngle::from_degrees(20.0);
  const auto mats = project_target(sub, 1.0, theta, basis, ChannelSpec{}, PotentialParams{});
  REQUIRE(mats.h_ec.rows() == 1);
  REQUIRE(mats.h_ec.cols() == 1);
  const auto ham = build_hamiltonian(1.0, theta, basis, ChannelSpec{}, PotentialParams{});
  const ComplexVector u = sub.basis_vectors.col(0);
  const Complex want = c_product(u, ham.matrix * u);
  check_close(mats.h_ec(0, 0), want, 1e-12 * std::abs(want));
}

TEST_CASE("project_target: dimension mismatch with the primary basis is rejected") {
  const auto points = solve_training_set({1.6}, test_basis(), ChannelSpec{}, PotentialParams{});
  const auto sub = build_subspace(points);
  RadialBasis other = test_basis();
  other.size = 12;
  CHECK_THROWS_AS(
      project_target(sub, 1.0, ScalingAngle{}, other, ChannelSpec{}, PotentialParams{}),
      std::invalid_argument);
}

TEST_CASE("EC reproduces training energies at theta = 0 to 1e-8") {
  const auto basis = test_basis();
  const auto points = default_training(basis);
  const auto sub = build_subspace(points);
  for (const auto& p : {points[0], points[3], points[7]}) {
    const auto mats =
        project_target(sub, p.lambda, ScalingAngle{}, basis, ChannelSpec{}, PotentialParams{});
    const auto gen = generalized_eigen(mats.h_ec, mats.n_ec);
    CHECK(std::abs(gen.eigenvalues(0).real() - p.energy) <= 1e-8);
  }
}

TEST_CASE("EC variational property and monotone convergence in subspace dimension") {
  const auto basis = test_basis();
  const auto points = default_training(basis);
  for (double target : {1.3, 1.55, 1.8}) {
    const double e_full = full_ground_energy(target, basis);
    const double tol = 1e-10 * std::max(1.0, std::abs(e_full));
    double prev_gap = 1e30;
    for (int dim = 1; dim <= 8; ++dim) {
      const std::vector<TrainingPoint> head(points.begin(), points.begin() + dim);
      const auto sub = build_subspace(head);
      const auto mats =
          project_target(sub, target, ScalingAngle{}, basis, ChannelSpec{}, PotentialParams{});
      const double e_ec = generalized_eigen(mats.h_ec, mats.n_ec).eigenvalues(0).real();
      const double gap = e_ec - e_full;
      CHECK(gap >= -tol);
      CHECK(gap <= prev_gap + tol);
      prev_gap = gap;
    }
  }
}

TEST_CASE("EC resonance within 1 percent of the full-basis resonance") {
  const RadialBasis basis;  // production default: the resonance needs the full 30
  const Complex ref(11.8079, -1.8085);
  const auto ham = build_hamiltonian(1.0, ScalingAngle::from_degrees(20.0), basis,
                                     ChannelSpec{}, PotentialParams{});
  const Complex full = pick_resonance(dense_eigen(ham.matrix).eigenvalues, ref);
  const auto sub = build_subspace(
      solve_training_set(uniform_lambdas(1.45, 1.75, 8), basis, ChannelSpec{}, PotentialParams{}));
  const auto mats = project_target(sub, 1.0, ScalingAngle::from_degrees(20.0), basis,
                                   ChannelSpec{}, PotentialParams{});
  const Complex ec = pick_resonance(dense_eigen(mats.h_ec).eigenvalues, ref);
  CHECK(std::abs(ec - full) <= 0.01 * std::abs(full));
}

TEST_CASE("pick_resonance: nearest eigenvalue in the complex plane") {
  ComplexVector vals(3);
  vals << Complex(1.0, -1.0), Complex(11.5, -2.0), Complex(40.0, -9.0);
  check_close(pick_resonance(vals, Complex(11.8079, -1.8085)), Complex(11.5, -2.0), 1e-15);
  CHECK_THROWS_AS(pick_resonance(ComplexVector(), Complex(1.0, 0.0)), std::invalid_argument);
}
