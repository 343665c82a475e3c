#include "qres/qsim.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "qsim_internal.hpp"

namespace qres {

namespace detail {

int log2_exact(Eigen::Index n, const char* what) {
  if (n < 1 || (n & (n - 1)) != 0)
    throw std::invalid_argument(std::string(what) + ": dimension is not a power of two");
  int m = 0;
  while ((Eigen::Index(1) << m) < n) ++m;
  return m;
}

void apply_h(ComplexVector& amps, int q) {
  const Eigen::Index n = amps.size();
  const Eigen::Index bit = Eigen::Index(1) << q;
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i & bit) continue;
    const Complex a = amps[i];
    const Complex b = amps[i | bit];
    amps[i] = (a + b) * inv_sqrt2;
    amps[i | bit] = (a - b) * inv_sqrt2;
  }
}

void apply_cp(ComplexVector& amps, int ctrl, int tgt, double angle) {
  const Eigen::Index n = amps.size();
  const Eigen::Index mask = (Eigen::Index(1) << ctrl) | (Eigen::Index(1) << tgt);
  const Complex phase = std::exp(Complex(0.0, angle));
  for (Eigen::Index i = 0; i < n; ++i)
    if ((i & mask) == mask) amps[i] *= phase;
}

void apply_swap(ComplexVector& amps, int a, int b) {
  const Eigen::Index n = amps.size();
  const Eigen::Index ba = Eigen::Index(1) << a;
  const Eigen::Index bb = Eigen::Index(1) << b;
  for (Eigen::Index i = 0; i < n; ++i)
    if ((i & ba) && !(i & bb)) std::swap(amps[i], amps[(i & ~ba) | bb]);
}

void apply_controlled_block(ComplexVector& amps, int ctrl, const ComplexMatrix& U) {
  const Eigen::Index dim = U.rows();
  const Eigen::Index n = amps.size();
  for (Eigen::Index base = 0; base < n; base += dim) {
    if (!((base >> ctrl) & 1)) continue;
    Eigen::Map<ComplexVector> block(amps.data() + base, dim);
    block = (U * block).eval();
  }
}

void apply_eig_rot(ComplexVector& amps, int system_qubits, int clock_qubits, double C,
                   double t) {
  const Eigen::Index nc_dim = Eigen::Index(1) << clock_qubits;
  const Eigen::Index sys_dim = Eigen::Index(1) << system_qubits;
  const Eigen::Index anc_bit = Eigen::Index(1) << (system_qubits + clock_qubits);
  std::vector<double> cos_half(nc_dim, 1.0), sin_half(nc_dim, 0.0);
  for (Eigen::Index c = 1; c < nc_dim; ++c) {
    const double signed_c = c < nc_dim / 2 ? double(c) : double(c) - double(nc_dim);
    const double lambda = 2.0 * std::numbers::pi * signed_c / (double(nc_dim) * t);
    const double ratio = std::clamp(C / lambda, -1.0, 1.0);
    const double half = std::asin(ratio);
    cos_half[c] = std::cos(half);
    sin_half[c] = std::sin(half);
  }
  for (Eigen::Index c = 1; c < nc_dim; ++c) {
    for (Eigen::Index s = 0; s < sys_dim; ++s) {
      const Eigen::Index i0 = (c << system_qubits) | s;
      const Eigen::Index i1 = i0 | anc_bit;
      const Complex a0 = amps[i0];
      const Complex a1 = amps[i1];
      amps[i0] = cos_half[c] * a0 - sin_half[c] * a1;
      amps[i1] = sin_half[c] * a0 + cos_half[c] * a1;
    }
  }
}

std::vector<GateOp> qft_plan(const std::vector<int>& qubits, bool inverse) {
  const int n = static_cast<int>(qubits.size());
  std::vector<GateOp> plan;
  for (int i = n - 1; i >= 0; --i) {
    plan.push_back({"h", {qubits[i]}, {}, {}});
    for (int j = i - 1; j >= 0; --j) {
      const double angle = std::numbers::pi / double(Eigen::Index(1) << (i - j));
      plan.push_back({"cp", {qubits[i]}, {qubits[j]}, {angle}});
    }
  }
  for (int k = 0; k < n / 2; ++k)
    plan.push_back({"swap", {qubits[k], qubits[n - 1 - k]}, {}, {}});
  if (inverse) {
    std::reverse(plan.begin(), plan.end());
    for (auto& op : plan)
      if (op.gate == "cp") op.params[0] = -op.params[0];
  }
  return plan;
}

void execute(const std::vector<GateOp>& plan, ComplexVector& amps,
             const std::vector<ComplexMatrix>* power_table) {
  for (const auto& op : plan) {
    if (op.gate == "h") {
      apply_h(amps, op.targets[0]);
    } else if (op.gate == "cp") {
      apply_cp(amps, op.controls[0], op.targets[0], op.params[0]);
    } else if (op.gate == "swap") {
      apply_swap(amps, op.targets[0], op.targets[1]);
    } else if (op.gate == "cu_pow") {
      apply_controlled_block(amps, op.controls[0], (*power_table)[op.matrix_index]);
    } else if (op.gate == "cu_pow_dag") {
      apply_controlled_block(amps, op.controls[0],
                             (*power_table)[op.matrix_index].adjoint());
    } else if (op.gate == "eig_rot") {
      const int nc = static_cast<int>(op.controls.size());
      const int m = op.targets[0] - nc;  // ancilla index = m + nc
      apply_eig_rot(amps, m, nc, op.params[0], op.params[1]);
    } else {
      throw std::invalid_argument("execute: unknown gate " + op.gate);
    }
  }
}

std::vector<GateOp> hhl_plan(int system_qubits, int clock_qubits, double t, double C) {
  std::vector<GateOp> plan;
  std::vector<int> clock(clock_qubits);
  std::vector<int> system(system_qubits);
  for (int k = 0; k < clock_qubits; ++k) clock[k] = system_qubits + k;
  for (int s = 0; s < system_qubits; ++s) system[s] = s;
  const int ancilla = system_qubits + clock_qubits;

  for (int k = 0; k < clock_qubits; ++k) plan.push_back({"h", {clock[k]}, {}, {}});
  for (int k = 0; k < clock_qubits; ++k) {
    GateOp op{"cu_pow", system, {clock[k]}, {t * double(Eigen::Index(1) << k)}};
    op.matrix_index = k;
    plan.push_back(op);
  }
  for (const auto& op : qft_plan(clock, /*inverse=*/true)) plan.push_back(op);

  plan.push_back({"eig_rot", {ancilla}, clock, {C, t}});

  for (const auto& op : qft_plan(clock, /*inverse=*/false)) plan.push_back(op);
  for (int k = clock_qubits - 1; k >= 0; --k) {
    GateOp op{"cu_pow_dag", system, {clock[k]}, {t * double(Eigen::Index(1) << k)}};
    op.matrix_index = k;
    plan.push_back(op);
  }
  for (int k = 0; k < clock_qubits; ++k) plan.push_back({"h", {clock[k]}, {}, {}});
  return plan;
}

}  // namespace detail

QuantumState QuantumState::from_amplitudes(const ComplexVector& amps) {
  const int n = detail::log2_exact(amps.size(), "QuantumState");
  const double norm = amps.norm();
  if (std::abs(norm - 1.0) > 1e-10)
    throw std::invalid_argument("QuantumState: amplitudes are not normalized");
  return QuantumState{amps, n};
}

QuantumState QuantumState::basis_state(int num_qubits, std::uint64_t index) {
  ComplexVector amps = ComplexVector::Zero(Eigen::Index(1) << num_qubits);
  amps[static_cast<Eigen::Index>(index)] = 1.0;
  return QuantumState{std::move(amps), num_qubits};
}

std::string circuit_to_json(const std::vector<GateOp>& plan) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& op : plan) {
    nlohmann::json g;
    g["gate"] = op.gate;
    g["targets"] = op.targets;
    g["controls"] = op.controls;
    g["params"] = op.params;
    arr.push_back(g);
  }
  return arr.dump(1) + "\n";
}

ComplexMatrix evolve_unitary(const ComplexMatrix& H, double t) {
  if (H.rows() != H.cols()) throw std::invalid_argument("evolve_unitary: non-square H");
  if (!is_hermitian(H)) throw std::invalid_argument("evolve_unitary: H is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(H);
  if (eig.info() != Eigen::Success)
    throw convergence_error("evolve_unitary: eigendecomposition failed");
  const ComplexVector phases =
      (Complex(0.0, t) * eig.eigenvalues().cast<Complex>().array()).exp().matrix();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

RealVector qpe(const ComplexMatrix& U, const QuantumState& state, int clock) {
  if (U.rows() != U.cols()) throw std::invalid_argument("qpe: non-square U");
  const int m = detail::log2_exact(U.rows(), "qpe");
  if (state.num_qubits != m) throw std::invalid_argument("qpe: state/U size mismatch");
  if (clock < 1 || m + clock > 24) throw std::invalid_argument("qpe: clock register out of range");
  const double unitarity =
      (U * U.adjoint() - ComplexMatrix::Identity(U.rows(), U.cols())).norm();
  if (unitarity > 1e-10 * std::max(1.0, U.norm()))
    throw std::invalid_argument("qpe: U is not unitary");

  const Eigen::Index sys_dim = U.rows();
  const Eigen::Index total = sys_dim << clock;
  ComplexVector amps = ComplexVector::Zero(total);
  amps.head(sys_dim) = state.amplitudes;

  std::vector<ComplexMatrix> powers(clock);
  powers[0] = U;
  for (int k = 1; k < clock; ++k) powers[k] = powers[k - 1] * powers[k - 1];

  std::vector<GateOp> plan;
  std::vector<int> clock_qubits(clock);
  for (int k = 0; k < clock; ++k) clock_qubits[k] = m + k;
  for (int k = 0; k < clock; ++k) plan.push_back({"h", {clock_qubits[k]}, {}, {}});
  for (int k = 0; k < clock; ++k) {
    GateOp op{"cu_pow", {}, {clock_qubits[k]}, {double(Eigen::Index(1) << k)}};
    op.matrix_index = k;
    plan.push_back(op);
  }
  for (const auto& op : detail::qft_plan(clock_qubits, true)) plan.push_back(op);

  detail::execute(plan, amps, &powers);

  RealVector probs = RealVector::Zero(Eigen::Index(1) << clock);
  for (Eigen::Index i = 0; i < total; ++i) probs[i >> m] += std::norm(amps[i]);
  return probs;
}

std::string qpe_circuit_json(int system_qubits, int clock) {
  std::vector<GateOp> plan;
  std::vector<int> clock_qubits(clock);
  for (int k = 0; k < clock; ++k) clock_qubits[k] = system_qubits + k;
  for (int k = 0; k < clock; ++k) plan.push_back({"h", {clock_qubits[k]}, {}, {}});
  std::vector<int> system(system_qubits);
  for (int s = 0; s < system_qubits; ++s) system[s] = s;
  for (int k = 0; k < clock; ++k) {
    GateOp op{"cu_pow", system, {clock_qubits[k]}, {double(Eigen::Index(1) << k)}};
    op.matrix_index = k;
    plan.push_back(op);
  }
  for (const auto& op : detail::qft_plan(clock_qubits, true)) plan.push_back(op);
  return circuit_to_json(plan);
}

double gershgorin_bound(const ComplexMatrix& A) {
  double bound = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    bound = std::max(bound, A.row(i).cwiseAbs().sum());
  return bound;
}

}  // namespace qres
