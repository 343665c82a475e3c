#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qres/linalg.hpp"

namespace qres {

// Qubit 0 is least significant in state indexing throughout, including every
// serialized circuit and register layout.

struct QuantumState {
  ComplexVector amplitudes;
  int num_qubits = 0;

  static QuantumState from_amplitudes(const ComplexVector& amps);
  static QuantumState basis_state(int num_qubits, std::uint64_t index);
};

struct GateOp {
  std::string gate;           // h | cp | swap | cu_pow | cu_pow_dag | eig_rot
  std::vector<int> targets;
  std::vector<int> controls;
  std::vector<double> params;
  int matrix_index = -1;  // for cu_pow*: index into the executor's power table
};

std::string circuit_to_json(const std::vector<GateOp>& plan);

// --- Pauli algebra -----------------------------------------------------------

// word is written most-significant-qubit first: word[k] acts on qubit m-1-k.
struct PauliTerm {
  Complex coefficient;
  std::string word;
};

ComplexMatrix pauli_word_matrix(const std::string& word);
ComplexMatrix pauli_rebuild(const std::vector<PauliTerm>& terms, int num_qubits);

// c_word = Tr(P H) / 2^m over all 4^m words; negligible coefficients dropped.
std::vector<PauliTerm> pauli_decompose(const ComplexMatrix& H);

// Pauli representation of the fermionic a^dag_i a_j under Jordan-Wigner.
std::vector<PauliTerm> jordan_wigner(int i, int j, int n_modes);

// Single ladder operator a_mode (or a^dag_mode) as a 2-term Pauli sum.
std::vector<PauliTerm> jordan_wigner_ladder(int mode, int n_modes, bool dagger);

// First-order Trotter product from the Pauli decomposition; cross-check path,
// bounded to num_qubits <= 4.
ComplexMatrix trotter_unitary(const ComplexMatrix& H, double t, int steps);

// --- Evolution / QPE ---------------------------------------------------------

// e^(+iHt) via eigendecomposition; H Hermitian.
ComplexMatrix evolve_unitary(const ComplexMatrix& H, double t);

// Probability distribution over the 2^clock phase-register outcomes after QPE
// of U applied to `state` on the system register.
RealVector qpe(const ComplexMatrix& U, const QuantumState& state, int clock);

std::string qpe_circuit_json(int system_qubits, int clock);

// --- HHL ---------------------------------------------------------------------

enum class HhlMode { circuit, ideal };

struct HhlConfig {
  int clock_qubits = 8;
  // Defaults applied at solve time: evolution_time = pi / (1.1 * Gershgorin
  // bound of A); rotation_constant = 2*pi / (2^clock_qubits * evolution_time),
  // the smallest representable eigenvalue magnitude (larger values clamped).
  std::optional<double> evolution_time;
  std::optional<double> rotation_constant;
  HhlMode mode = HhlMode::circuit;
  std::optional<std::uint64_t> shots;  // exact amplitudes when unset
  std::uint64_t shot_seed = 0;
};

// Solves A x = b. Circuit mode runs QPE + eigenvalue-inversion rotation +
// uncompute and post-selects ancilla=1, clock=0; scale is recovered from the
// post-selected amplitudes and ||b||, phase by direct statevector readout
// (simulator privilege). Clock phases are read in two's complement, so the
// symmetric spectra of dilated operators invert correctly. Ideal mode applies
// the exact inverse through the eigendecomposition.
ComplexVector hhl_solve(const ComplexMatrix& A, const RealVector& b,
                        const HhlConfig& cfg = {});

std::string hhl_circuit_json(const ComplexMatrix& A, const HhlConfig& cfg = {});

double gershgorin_bound(const ComplexMatrix& A);

}  // namespace qres
