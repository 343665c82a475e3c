#include <cmath>
#include <numbers>
#include <random>

#include "qres/qsim.hpp"
#include "qsim_internal.hpp"

namespace qres {

namespace {

constexpr double kPostSelectFloor = 1e-12;

ComplexVector ideal_inverse(const Eigen::SelfAdjointEigenSolver<ComplexMatrix>& eig,
                            const RealVector& b) {
  const RealVector& lam = eig.eigenvalues();
  const double lmax = lam.cwiseAbs().maxCoeff();
  ComplexVector weights = eig.eigenvectors().adjoint() * b.cast<Complex>();
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    if (std::abs(lam[k]) < 1e-14 * std::max(lmax, 1e-300))
      throw physics_error("hhl_solve: singular A in ideal mode");
    weights[k] /= lam[k];
  }
  return eig.eigenvectors() * weights;
}

}  // namespace

ComplexVector hhl_solve(const ComplexMatrix& A, const RealVector& b, const HhlConfig& cfg) {
  if (A.rows() != A.cols()) throw std::invalid_argument("hhl_solve: non-square A");
  const int m = detail::log2_exact(A.rows(), "hhl_solve");
  if (b.size() != A.rows()) throw std::invalid_argument("hhl_solve: size mismatch");
  if (!is_hermitian(A)) throw std::invalid_argument("hhl_solve: A is not Hermitian");
  const double bnorm = b.norm();
  if (bnorm == 0.0) throw std::invalid_argument("hhl_solve: zero right-hand side");

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(A);
  if (eig.info() != Eigen::Success)
    throw convergence_error("hhl_solve: eigendecomposition failed");

  if (cfg.mode == HhlMode::ideal) return ideal_inverse(eig, b);

  if (cfg.clock_qubits < 1) throw std::invalid_argument("hhl_solve: clock_qubits must be >= 1");
  const double spectral = eig.eigenvalues().cwiseAbs().maxCoeff();
  const double t = cfg.evolution_time.value_or(std::numbers::pi / (1.1 * gershgorin_bound(A)));
  if (!(t > 0.0)) throw std::invalid_argument("hhl_solve: evolution_time must be positive");
  if (t * spectral >= std::numbers::pi)
    throw std::invalid_argument("hhl_solve: evolution_time violates the anti-aliasing bound");

  const int nc = cfg.clock_qubits;
  if (m + nc + 1 > 24) throw std::invalid_argument("hhl_solve: register too large");
  const Eigen::Index nc_dim = Eigen::Index(1) << nc;
  const double c_min = 2.0 * std::numbers::pi / (double(nc_dim) * t);
  double C = cfg.rotation_constant.value_or(c_min);
  if (!(C > 0.0)) throw std::invalid_argument("hhl_solve: rotation_constant must be positive");
  C = std::min(C, c_min);  // keep every rotation angle defined

  std::vector<ComplexMatrix> powers(nc);
  for (int k = 0; k < nc; ++k) {
    const ComplexVector phases = (Complex(0.0, t * double(Eigen::Index(1) << k)) *
                                  eig.eigenvalues().cast<Complex>().array())
                                     .exp()
                                     .matrix();
    powers[k] = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  }

  const Eigen::Index sys_dim = A.rows();
  const Eigen::Index total = sys_dim << (nc + 1);
  ComplexVector amps = ComplexVector::Zero(total);
  amps.head(sys_dim) = (b / bnorm).cast<Complex>();

  detail::execute(detail::hhl_plan(m, nc, t, C), amps, &powers);

  const Eigen::Index anc_bit = Eigen::Index(1) << (m + nc);
  ComplexVector raw(sys_dim);
  for (Eigen::Index s = 0; s < sys_dim; ++s) raw[s] = amps[anc_bit | s];

  if (cfg.shots) {
    std::mt19937_64 rng(cfg.shot_seed);
    std::discrete_distribution<Eigen::Index> dist = [&] {
      std::vector<double> p(total);
      for (Eigen::Index i = 0; i < total; ++i) p[i] = std::norm(amps[i]);
      return std::discrete_distribution<Eigen::Index>(p.begin(), p.end());
    }();
    RealVector counts = RealVector::Zero(sys_dim);
    for (std::uint64_t shot = 0; shot < *cfg.shots; ++shot) {
      const Eigen::Index outcome = dist(rng);
      if ((outcome & ~(sys_dim - 1)) == anc_bit) counts[outcome & (sys_dim - 1)] += 1.0;
    }
    for (Eigen::Index s = 0; s < sys_dim; ++s) {
      const double mag = std::sqrt(counts[s] / double(*cfg.shots));
      const double phase = std::arg(raw[s]);
      raw[s] = std::polar(mag, phase);
    }
  }

  const double post_prob = raw.squaredNorm();
  if (post_prob < kPostSelectFloor)
    throw convergence_error("hhl_solve: post-selection probability below 1e-12");

  return raw * (bnorm / C);
}

std::string hhl_circuit_json(const ComplexMatrix& A, const HhlConfig& cfg) {
  const int m = detail::log2_exact(A.rows(), "hhl_circuit_json");
  if (!is_hermitian(A)) throw std::invalid_argument("hhl_circuit_json: A is not Hermitian");
  const double t =
      cfg.evolution_time.value_or(std::numbers::pi / (1.1 * gershgorin_bound(A)));
  const double c_min =
      2.0 * std::numbers::pi / (double(Eigen::Index(1) << cfg.clock_qubits) * t);
  const double C = std::min(cfg.rotation_constant.value_or(c_min), c_min);
  return circuit_to_json(detail::hhl_plan(m, cfg.clock_qubits, t, C));
}

}  // namespace qres
