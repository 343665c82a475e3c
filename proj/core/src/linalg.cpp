#include "qres/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qres {

namespace {

void require_same_dim(const ComplexVector& u, const ComplexVector& v) {
  if (u.size() != v.size())
    throw std::invalid_argument("dimension mismatch: " + std::to_string(u.size()) +
                                " vs " + std::to_string(v.size()));
}

std::vector<int> sort_order(const ComplexVector& values) {
  std::vector<int> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (values[a].real() != values[b].real()) return values[a].real() < values[b].real();
    return values[a].imag() < values[b].imag();
  });
  return idx;
}

EigenDecomposition sort_and_check(const ComplexMatrix& H, const ComplexVector& values,
                                  const ComplexMatrix& vectors, const Tolerances& tol) {
  const auto idx = sort_order(values);
  const Eigen::Index n = H.rows();
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  out.residual_norms.resize(n);
  const double scale = H.norm();
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues[k] = values[idx[k]];
    ComplexVector v = vectors.col(idx[k]);
    v /= hermitian_norm(v);
    out.eigenvectors.col(k) = v;
    out.residual_norms[k] = (H * v - out.eigenvalues[k] * v).norm();
    if (out.residual_norms[k] > tol.eigen_residual_rel * std::max(scale, 1e-300))
      throw convergence_error("dense_eigen: residual " +
                              std::to_string(out.residual_norms[k]) +
                              " exceeds tolerance for eigenvalue index " +
                              std::to_string(k));
  }
  return out;
}

}  // namespace

Complex c_product(const ComplexVector& u, const ComplexVector& v) {
  require_same_dim(u, v);
  return u.transpose() * v;  // no conjugation
}

double hermitian_norm(const ComplexVector& v) { return v.norm(); }

ComplexVector c_normalize(const ComplexVector& v, const Tolerances& tol) {
  const Complex cc = c_product(v, v);
  if (std::abs(cc) < tol.quasi_null)
    throw quasi_null_error("quasi-null vector: |c_product(v,v)| = " +
                           std::to_string(std::abs(cc)));
  return v / std::sqrt(cc);
}

std::vector<ComplexVector> gram_schmidt(const std::vector<ComplexVector>& vectors,
                                        InnerProduct product, const Tolerances& tol) {
  if (vectors.empty()) throw std::invalid_argument("gram_schmidt: empty input");
  const Eigen::Index dim = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != dim) throw std::invalid_argument("gram_schmidt: ragged input");
  }

  const auto dot = [&](const ComplexVector& a, const ComplexVector& b) -> Complex {
    return product == InnerProduct::hermitian ? Complex(a.adjoint() * b)
                                              : c_product(a, b);
  };

  std::vector<ComplexVector> basis;
  for (const auto& input : vectors) {
    const double input_norm = hermitian_norm(input);
    if (input_norm == 0.0) continue;
    ComplexVector w = input;
    // Two projection passes keep the Gram matrix at identity to 1e-12 even for
    // strongly clustered inputs (single-pass MGS loses ~kappa*eps digits).
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : basis) w -= u * dot(u, w);
    }
    if (hermitian_norm(w) < tol.dependence_drop_rel * input_norm) continue;  // dependent
    if (product == InnerProduct::hermitian) {
      w /= hermitian_norm(w);
    } else {
      w = c_normalize(w, tol);  // throws quasi_null_error at exceptional points
    }
    basis.push_back(std::move(w));
  }
  return basis;
}

EigenDecomposition dense_eigen(const ComplexMatrix& H, const Tolerances& tol) {
  if (H.rows() != H.cols()) throw std::invalid_argument("dense_eigen: non-square input");
  require_finite(H, "dense_eigen input");
  if (is_hermitian(H)) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(H);
    if (solver.info() != Eigen::Success)
      throw convergence_error("dense_eigen: Hermitian solver failed");
    return sort_and_check(H, solver.eigenvalues().cast<Complex>(),
                          solver.eigenvectors(), tol);
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(H, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw convergence_error("dense_eigen: iteration failure");
  return sort_and_check(H, solver.eigenvalues(), solver.eigenvectors(), tol);
}

ComplexVector linear_solve(const ComplexMatrix& A, const ComplexVector& b,
                           const Tolerances& tol) {
  if (A.rows() != A.cols()) throw std::invalid_argument("linear_solve: non-square A");
  if (A.rows() != b.size()) throw std::invalid_argument("linear_solve: size mismatch");
  Eigen::JacobiSVD<ComplexMatrix> svd(A);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (smin == 0.0 || smax / smin >= tol.condition_max)
    throw physics_error("linear_solve: singular or ill-conditioned matrix (cond >= 1e12)");
  const Eigen::PartialPivLU<ComplexMatrix> lu(A);
  ComplexVector x = lu.solve(b);
  x += lu.solve(b - A * x);  // one refinement step: residual to O(eps)*||b||
  const double bnorm = b.norm();
  if (bnorm > 0 && (A * x - b).norm() > tol.solve_residual_rel * bnorm)
    throw convergence_error("linear_solve: residual exceeds tolerance");
  require_finite(x, "linear_solve output");
  return x;
}

EigenDecomposition generalized_eigen(const ComplexMatrix& H, const ComplexMatrix& N,
                                     const Tolerances& tol) {
  if (H.rows() != H.cols() || N.rows() != N.cols() || H.rows() != N.rows())
    throw std::invalid_argument("generalized_eigen: size mismatch");
  Eigen::JacobiSVD<ComplexMatrix> svd(N);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (smin == 0.0 || smax / smin >= tol.condition_max)
    throw physics_error("generalized_eigen: redundant basis (N singular)");

  const ComplexMatrix M = Eigen::PartialPivLU<ComplexMatrix>(N).solve(H);
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(M, true);
  if (solver.info() != Eigen::Success)
    throw convergence_error("generalized_eigen: iteration failure");

  const auto idx = sort_order(solver.eigenvalues());
  const Eigen::Index n = H.rows();
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  out.residual_norms.resize(n);
  const double scale = H.norm();
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues[k] = solver.eigenvalues()[idx[k]];
    ComplexVector v = solver.eigenvectors().col(idx[k]);
    v /= hermitian_norm(v);
    out.eigenvectors.col(k) = v;
    out.residual_norms[k] = (H * v - out.eigenvalues[k] * (N * v)).norm();
    if (out.residual_norms[k] > tol.gen_eigen_residual_rel * std::max(scale, 1e-300))
      throw convergence_error("generalized_eigen: residual exceeds tolerance");
  }
  return out;
}

bool is_hermitian(const ComplexMatrix& A, double rel_tol) {
  const double scale = std::max(A.norm(), 1e-300);
  return (A - A.adjoint()).norm() <= rel_tol * scale;
}

bool is_complex_symmetric(const ComplexMatrix& A, double rel_tol) {
  const double scale = std::max(A.norm(), 1e-300);
  return (A - A.transpose()).norm() <= rel_tol * scale;
}

void require_finite(const ComplexVector& v, const std::string& what) {
  if (!v.allFinite()) throw std::invalid_argument(what + ": non-finite entries");
}

void require_finite(const ComplexMatrix& m, const std::string& what) {
  if (!m.allFinite()) throw std::invalid_argument(what + ": non-finite entries");
}

}  // namespace qres
