#pragma once

#include <vector>

#include "qres/qsim.hpp"

namespace qres::detail {

void apply_h(ComplexVector& amps, int q);
void apply_cp(ComplexVector& amps, int ctrl, int tgt, double angle);
void apply_swap(ComplexVector& amps, int a, int b);
// U acts on the contiguous low register (qubits [0, log2(U.rows()))).
void apply_controlled_block(ComplexVector& amps, int ctrl, const ComplexMatrix& U);
void apply_eig_rot(ComplexVector& amps, int system_qubits, int clock_qubits, double C,
                   double t);

std::vector<GateOp> qft_plan(const std::vector<int>& qubits, bool inverse);

// power_table[k] = U^(2^k); cu_pow_dag uses the adjoint of the table entry.
void execute(const std::vector<GateOp>& plan, ComplexVector& amps,
             const std::vector<ComplexMatrix>* power_table);

std::vector<GateOp> hhl_plan(int system_qubits, int clock_qubits, double t, double C);

int log2_exact(Eigen::Index n, const char* what);

}  // namespace qres::detail
