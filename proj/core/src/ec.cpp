#include "qres/ec.hpp"

#include <cmath>
#include <sstream>

namespace qres {

std::vector<double> uniform_lambdas(double lo, double hi, int count) {
  if (count < 1) throw std::invalid_argument("uniform_lambdas: count must be >= 1");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
  return out;
}

std::vector<TrainingPoint> solve_training_set(const std::vector<double>& lambdas,
                                              const RadialBasis& basis,
                                              const ChannelSpec& ch,
                                              const PotentialParams& pot) {
  std::vector<TrainingPoint> points;
  points.reserve(lambdas.size());
  for (const double lambda : lambdas) {
    const ScaledHamiltonian h = build_hamiltonian(lambda, ScalingAngle(0.0), basis, ch, pot);
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h.matrix.real());
    if (solver.info() != Eigen::Success)
      throw convergence_error("solve_training_set: diagonalization failed");
    const double energy = solver.eigenvalues()(0);
    if (energy >= 0.0) {
      std::ostringstream msg;
      msg << "unbound training point at lambda=" << lambda << " (E=" << energy << " MeV)";
      throw physics_error(msg.str());
    }
    RealVector ground = solver.eigenvectors().col(0);
    Eigen::Index imax = 0;
    ground.cwiseAbs().maxCoeff(&imax);
    if (ground[imax] < 0.0) ground = -ground;
    TrainingPoint p;
    p.lambda = lambda;
    p.energy = energy;
    p.wavefunction = ground.cast<Complex>();
    points.push_back(std::move(p));
  }
  return points;
}

ECSubspace build_subspace(const std::vector<TrainingPoint>& points) {
  if (points.empty()) throw std::invalid_argument("build_subspace: no training points");
  std::vector<ComplexVector> inputs;
  inputs.reserve(points.size());
  for (const auto& p : points) inputs.push_back(p.wavefunction);
  const auto ortho = gram_schmidt(inputs, InnerProduct::hermitian);

  ECSubspace out;
  out.dimension = static_cast<int>(ortho.size());
  out.basis_vectors.resize(inputs.front().size(), out.dimension);
  for (int k = 0; k < out.dimension; ++k) out.basis_vectors.col(k) = ortho[k];
  for (const auto& p : points) out.source_lambdas.push_back(p.lambda);
  if (ortho.size() < inputs.size()) {
    std::ostringstream msg;
    msg << "dropped " << inputs.size() - ortho.size()
        << " linearly dependent training vector(s)";
    out.warnings.push_back(msg.str());
  }
  return out;
}

ECMatrices project_target(const ECSubspace& subspace, double lambda_target,
                          ScalingAngle theta, const RadialBasis& basis,
                          const ChannelSpec& ch, const PotentialParams& pot) {
  const ScaledHamiltonian h = build_hamiltonian(lambda_target, theta, basis, ch, pot);
  if (subspace.basis_vectors.rows() != h.matrix.rows())
    throw std::invalid_argument("project_target: subspace dimension mismatch with primary basis");
  const ComplexMatrix& B = subspace.basis_vectors;
  ECMatrices out;
  out.h_ec = B.transpose() * h.matrix * B;  // c-product: plain transpose contraction
  out.n_ec = B.transpose() * B;
  out.target_lambda = lambda_target;
  out.theta = theta;
  return out;
}

Complex pick_resonance(const ComplexVector& eigenvalues, Complex reference) {
  if (eigenvalues.size() == 0)
    throw std::invalid_argument("pick_resonance: empty spectrum");
  Eigen::Index best = 0;
  (eigenvalues.array() - reference).abs().minCoeff(&best);
  return eigenvalues[best];
}

}  // namespace qres
