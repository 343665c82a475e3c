#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qres/linalg.hpp"

namespace qres {

struct FixedPointOperator {
  ComplexMatrix matrix;  // C(E, beta) = (H - (E - beta) I) / beta
  Complex energy_shift;  // E
  Complex beta;
};

struct DilatedSystem {
  ComplexMatrix a_matrix;  // [[0, C], [C^dag, 0]], Hermitian
  RealVector rhs_real;     // (Re phi, 0...0)
  RealVector rhs_imag;     // (Im phi, 0...0)
};

struct IterationTrace {
  std::vector<Complex> energies;       // E_0 ... E_k
  std::vector<double> deltas;          // |E_{k+1} - E_k|
  std::vector<ComplexVector> iterates;
  std::vector<std::string> events;     // beta nudges, retries, divergence
  bool converged = false;
  int iterations_used = 0;
};

struct DeflationSet {
  std::vector<ComplexVector> eigenvectors;  // c-normalized
  std::vector<Complex> eigenvalues;
  bool empty() const { return eigenvectors.empty(); }
};

enum class SolverBackend { classical, hhl_ideal, hhl_circuit };
enum class EnergyUpdate { shift_invert, rayleigh };

SolverBackend parse_solver(const std::string& name);
EnergyUpdate parse_update(const std::string& name);
std::string to_string(SolverBackend solver);
std::string to_string(EnergyUpdate update);

struct IhhlOptions {
  Complex beta{1.0, 0.0};
  double epsilon = 1e-4;  // MeV
  int max_iter = 100;
  SolverBackend solver = SolverBackend::classical;
  EnergyUpdate update = EnergyUpdate::shift_invert;
  int clock_qubits = 8;
  std::optional<Complex> e0;  // default: c-Rayleigh quotient of the seed
  std::uint64_t seed = 12345;
  std::optional<std::uint64_t> shots;
  Tolerances tol;
};

FixedPointOperator build_c_operator(const ComplexMatrix& H, Complex E, Complex beta);

DilatedSystem dilate(const FixedPointOperator& c_op, const ComplexVector& phi);

// phi - sum_k v_k c(v_k, phi) / c(v_k, v_k); quasi-null set members signal an
// exceptional point.
ComplexVector deflate(const ComplexVector& phi, const DeflationSet& set,
                      const Tolerances& tol = {});

// One fixed-point iteration: solve C(E, beta) phi* = phi through the dilated
// Hermitian system (real and imaginary right-hand sides recombined by
// linearity), deflate, update the energy, renormalize.
std::pair<ComplexVector, Complex> ihhl_step(const ComplexVector& phi, Complex E,
                                            const ComplexMatrix& H,
                                            const IhhlOptions& opt,
                                            const DeflationSet& deflation,
                                            IterationTrace* trace = nullptr);

struct IhhlResult {
  Complex eigenvalue;
  ComplexVector eigenvector;  // unit Hermitian norm
  double residual = 0.0;      // ||H v - E v||_2
  IterationTrace trace;
};

// Iterates until |E_{k+1} - E_k| < epsilon. Non-convergence (max_iter or
// divergence past 1e3 ||H||_F) returns a trace with converged == false.
IhhlResult ihhl_solve(const ComplexMatrix& H, const ComplexVector& phi0,
                      const IhhlOptions& opt, const DeflationSet& deflation = {});

struct SpectrumEntry {
  Complex eigenvalue;
  ComplexVector eigenvector;
  bool converged = false;
  IterationTrace trace;
};

struct SpectrumResult {
  std::vector<SpectrumEntry> entries;  // sorted ascending by (Re, Im)
  bool all_converged = false;
};

// One ihhl_solve per index with cumulative c-product deflation. Provided seeds
// are used in order; remaining indices draw reproducible random seeds. Two
// converged eigenvalues within 1e-6 of each other raise a deflation-failure
// error.
SpectrumResult full_spectrum(const ComplexMatrix& H,
                             const std::vector<ComplexVector>& seeds,
                             const IhhlOptions& opt);

std::string trace_to_csv(const IterationTrace& trace);
std::string trace_to_json(const IterationTrace& trace);

}  // namespace qres
