#pragma once

#include <vector>

#include "qres/linalg.hpp"
#include "qres/physics.hpp"

namespace qres {

struct TrainingPoint {
  double lambda = 0.0;
  double energy = 0.0;       // bound: < 0
  ComplexVector wavefunction;  // real entries, unit Hermitian norm, sign-fixed
};

struct ECSubspace {
  ComplexMatrix basis_vectors;  // columns, orthonormal
  std::vector<double> source_lambdas;
  int dimension = 0;
  std::vector<std::string> warnings;  // dependence drops
};

struct ECMatrices {
  ComplexMatrix h_ec;
  ComplexMatrix n_ec;
  double target_lambda = 0.0;
  ScalingAngle theta;
};

std::vector<double> uniform_lambdas(double lo, double hi, int count);

// Ground states of the theta = 0 Hamiltonian per coupling; throws
// physics_error("unbound training point ...") when a lowest eigenvalue >= 0.
std::vector<TrainingPoint> solve_training_set(const std::vector<double>& lambdas,
                                              const RadialBasis& basis,
                                              const ChannelSpec& ch,
                                              const PotentialParams& pot);

ECSubspace build_subspace(const std::vector<TrainingPoint>& points);

// h_ec[i][j] = (u_i | H^theta(lambda_target) | u_j) via the c-product.
ECMatrices project_target(const ECSubspace& subspace, double lambda_target,
                          ScalingAngle theta, const RadialBasis& basis,
                          const ChannelSpec& ch, const PotentialParams& pot);

// The eigenvalue closest to `reference` in the complex plane.
Complex pick_resonance(const ComplexVector& eigenvalues, Complex reference);

}  // namespace qres
