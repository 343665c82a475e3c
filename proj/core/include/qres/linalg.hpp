#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qres {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Exit-code-bearing error categories (see cli): 2 physics precondition,
// 3 non-convergence, 4 I/O.
struct physics_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Exceptional-point signal: a c-norm collapsed below the quasi-null threshold.
struct quasi_null_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double eigen_residual_rel = 1e-10;      // ||Hv - Ev|| / ||H||_F
  double gen_eigen_residual_rel = 1e-9;   // ||Hv - ENv|| / ||H||_F
  double ortho = 1e-12;                   // Gram-matrix deviation from identity
  double quasi_null = 1e-10;              // |c_product(v,v)| floor
  double dependence_drop_rel = 1e-10;     // Gram-Schmidt drop threshold
  double solve_residual_rel = 1e-10;      // ||Ax - b|| / ||b||
  double condition_max = 1e12;            // linear_solve / generalized_eigen guard
};

struct EigenDecomposition {
  ComplexVector eigenvalues;   // sorted ascending by (Re, Im)
  ComplexMatrix eigenvectors;  // columns, unit Hermitian norm
  RealVector residual_norms;   // ||Hv_k - E_k v_k||_2 (or ||Hv - E Nv|| for the
                               // generalized problem), one per pair
};

enum class InnerProduct { hermitian, cproduct };

// Bilinear c-product (u|v) = sum_i u_i v_i, no conjugation.
Complex c_product(const ComplexVector& u, const ComplexVector& v);

double hermitian_norm(const ComplexVector& v);

// v / sqrt(c_product(v,v)), principal branch. Throws quasi_null_error when
// |c_product(v,v)| < tol.quasi_null.
ComplexVector c_normalize(const ComplexVector& v, const Tolerances& tol = {});

// Orthonormalizes under the chosen product, preserving input order and
// dropping linearly dependent vectors. Under the c-product a vector that keeps
// O(1) Hermitian norm but loses its c-norm signals an exceptional point and
// throws quasi_null_error.
std::vector<ComplexVector> gram_schmidt(const std::vector<ComplexVector>& vectors,
                                        InnerProduct product,
                                        const Tolerances& tol = {});

EigenDecomposition dense_eigen(const ComplexMatrix& H, const Tolerances& tol = {});

ComplexVector linear_solve(const ComplexMatrix& A, const ComplexVector& b,
                           const Tolerances& tol = {});

// H v = E N v. Singular N raises a "redundant basis" error.
EigenDecomposition generalized_eigen(const ComplexMatrix& H, const ComplexMatrix& N,
                                     const Tolerances& tol = {});

bool is_hermitian(const ComplexMatrix& A, double rel_tol = 1e-10);
bool is_complex_symmetric(const ComplexMatrix& A, double rel_tol = 1e-10);

void require_finite(const ComplexVector& v, const std::string& what);
void require_finite(const ComplexMatrix& m, const std::string& what);

}  // namespace qres
