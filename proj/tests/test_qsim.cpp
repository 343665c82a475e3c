#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "qres/ihhl.hpp"
#include "qres/qsim.hpp"
#include "test_util.hpp"

using namespace qres;
using testutil::check_close;

namespace {

constexpr double kPi = 3.14159265358979323846;
const Complex kI(0.0, 1.0);

// Independent Kronecker product, used as the oracle against pauli_word_matrix
// and pauli_rebuild.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix pauli_letter(char c) {
  ComplexMatrix m(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -kI, kI, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: REQUIRE(false);
  }
  return m;
}

// word[0] is the most significant qubit: outermost Kronecker factor.
ComplexMatrix oracle_word(const std::string& word) {
  ComplexMatrix out = pauli_letter(word[0]);
  for (std::size_t k = 1; k < word.size(); ++k) out = kron(out, pauli_letter(word[k]));
  return out;
}

ComplexMatrix oracle_rebuild(const std::vector<PauliTerm>& terms, int num_qubits) {
  const Eigen::Index dim = Eigen::Index(1) << num_qubits;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (const auto& t : terms) out += t.coefficient * oracle_word(t.word);
  return out;
}

// Fermionic annihilation operator in the occupation basis (qubit 0 carries
// mode 0 and is the least significant index bit), built from first principles.
ComplexMatrix fermion_annihilate(int mode, int n_modes) {
  const Eigen::Index dim = Eigen::Index(1) << n_modes;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index occ = 0; occ < dim; ++occ) {
    if (!(occ >> mode & 1)) continue;
    int parity = 0;
    for (int k = 0; k < mode; ++k) parity += int(occ >> k & 1);
    out(occ ^ (Eigen::Index(1) << mode), occ) = (parity % 2 == 0) ? 1.0 : -1.0;
  }
  return out;
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  const ComplexMatrix a = testutil::random_cmatrix(rng, n);
  return 0.5 * (a + a.adjoint());
}

// Textbook QPE outcome distribution for a single eigenphase.
double analytic_qpe_prob(double phase, int k, int clock) {
  const double dim = double(Eigen::Index(1) << clock);
  const double delta = phase - k / dim;
  const double x = std::abs(std::remainder(delta, 1.0));
  if (x < 1e-15) return 1.0;
  const double num = std::sin(dim * kPi * delta);
  const double den = dim * std::sin(kPi * delta);
  return (num * num) / (den * den);
}

// First IHHL fixed-point step for the shipped fixture, the 16x16 dilated
// system the circuit backend has to invert in production.
DilatedSystem fixture_dilated() {
  const ComplexMatrix h = testutil::fixture_h();
  ComplexVector phi = testutil::fixture_vec("phi1_seed.json");
  phi /= hermitian_norm(phi);
  const Complex e0 = c_product(phi, h * phi) / c_product(phi, phi);
  return dilate(build_c_operator(h, e0, Complex(1.0, 0.0)), phi);
}

double fidelity(const ComplexVector& a, const ComplexVector& b) {
  return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

}  // namespace

TEST_CASE("QuantumState: construction and validation") {
  const auto basis = QuantumState::basis_state(3, 5);
  CHECK(basis.num_qubits == 3);
  REQUIRE(basis.amplitudes.size() == 8);
  check_close(basis.amplitudes(5), Complex(1.0, 0.0), 1e-15);
  CHECK(basis.amplitudes.norm() == doctest::Approx(1.0));

  ComplexVector amps(2);
  amps << Complex(0.6, 0.0), Complex(0.0, 0.8);
  CHECK(QuantumState::from_amplitudes(amps).num_qubits == 1);
  amps *= 1.5;  // norm off by 50 percent
  CHECK_THROWS_WITH_AS(QuantumState::from_amplitudes(amps),
                       doctest::Contains("not normalized"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(QuantumState::from_amplitudes(ComplexVector::Ones(3)),
                       doctest::Contains("power of two"), std::invalid_argument);
}

TEST_CASE("pauli_word_matrix: single letters and MSB-first ordering") {
  for (const char* w : {"I", "X", "Y", "Z"})
    CHECK((pauli_word_matrix(w) - oracle_word(w)).norm() <= 1e-15);
  // "ZX": Z on qubit 1 (high bit), X on qubit 0.
  for (const char* w : {"ZX", "XZ", "YI", "IY", "XYZ", "ZZY"})
    CHECK((pauli_word_matrix(w) - oracle_word(w)).norm() <= 1e-14);
  CHECK_THROWS_AS(pauli_word_matrix("XQ"), std::invalid_argument);
}

TEST_CASE("pauli_decompose: canonical single-qubit cases") {
  ComplexMatrix z(2, 2), x(2, 2);
  z << 1, 0, 0, -1;
  x << 0, 1, 1, 0;
  const auto tz = pauli_decompose(z);
  REQUIRE(tz.size() == 1);
  CHECK(tz[0].word == "Z");
  check_close(tz[0].coefficient, Complex(1.0, 0.0), 1e-14);
  const auto tx = pauli_decompose(x);
  REQUIRE(tx.size() == 1);
  CHECK(tx[0].word == "X");
  check_close(tx[0].coefficient, Complex(1.0, 0.0), 1e-14);
}

TEST_CASE("pauli_decompose: round-trip identity on random and structured input") {
  std::mt19937_64 rng(411);
  const ComplexMatrix h4 = random_hermitian(rng, 4);
  const auto terms4 = pauli_decompose(h4);
  CHECK(terms4.size() <= 16);
  // All coefficients real for Hermitian input.
  for (const auto& t : terms4) CHECK(std::abs(t.coefficient.imag()) <= 1e-12);
  // Rebuild through the library and through the independent Kronecker oracle.
  CHECK((pauli_rebuild(terms4, 2) - h4).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((oracle_rebuild(terms4, 2) - h4).cwiseAbs().maxCoeff() <= 1e-12);

  const ComplexMatrix g = testutil::random_cmatrix(rng, 8);  // non-Hermitian is fine
  const auto tg = pauli_decompose(g);
  CHECK((pauli_rebuild(tg, 3) - g).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(pauli_decompose(ComplexMatrix::Identity(3, 3)), std::invalid_argument);
  CHECK_THROWS_AS(pauli_decompose(ComplexMatrix::Zero(2, 4)), std::invalid_argument);
}

TEST_CASE("pauli_decompose: 16x16 dilated fixture operator round-trips") {
  const auto sys = fixture_dilated();
  REQUIRE(sys.a_matrix.rows() == 16);
  const auto terms = pauli_decompose(sys.a_matrix);
  CHECK(terms.size() <= 256);
  const double scale = sys.a_matrix.cwiseAbs().maxCoeff();
  CHECK((pauli_rebuild(terms, 4) - sys.a_matrix).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  for (const auto& t : terms) CHECK(std::abs(t.coefficient.imag()) <= 1e-12 * scale);
}

TEST_CASE("jordan_wigner: number operator on mode 0") {
  const auto terms = jordan_wigner(0, 0, 1);
  const ComplexMatrix n0 = pauli_rebuild(terms, 1);
  ComplexMatrix want(2, 2);
  want << 0, 0, 0, 1;  // (I - Z_0) / 2
  CHECK((n0 - want).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("jordan_wigner: hopping term matches the occupation-basis oracle") {
  const ComplexMatrix hop = pauli_rebuild(jordan_wigner(1, 0, 2), 2);
  const ComplexMatrix want = fermion_annihilate(1, 2).adjoint() * fermion_annihilate(0, 2);
  CHECK((hop - want).cwiseAbs().maxCoeff() <= 1e-12);
  // And for a 3-mode pair with a Z-string in between.
  const ComplexMatrix hop3 = pauli_rebuild(jordan_wigner(2, 0, 3), 3);
  const ComplexMatrix want3 = fermion_annihilate(2, 3).adjoint() * fermion_annihilate(0, 3);
  CHECK((hop3 - want3).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("jordan_wigner_ladder: canonical anticommutation relations, n = 3") {
  const int n = 3;
  const Eigen::Index dim = 8;
  std::vector<ComplexMatrix> a(n), adag(n);
  for (int k = 0; k < n; ++k) {
    a[k] = pauli_rebuild(jordan_wigner_ladder(k, n, false), n);
    adag[k] = pauli_rebuild(jordan_wigner_ladder(k, n, true), n);
    CHECK((adag[k] - a[k].adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((a[k] - fermion_annihilate(k, n)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const ComplexMatrix anti = a[i] * adag[j] + adag[j] * a[i];
      ComplexMatrix want = ComplexMatrix::Zero(dim, dim);
      if (i == j) want.setIdentity();
      CHECK((anti - want).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((a[i] * a[j] + a[j] * a[i]).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
  CHECK_THROWS_AS(jordan_wigner_ladder(3, 3, false), std::out_of_range);
  CHECK_THROWS_AS(jordan_wigner(0, 2, 2), std::out_of_range);
}

TEST_CASE("evolve_unitary: closed-form and semigroup checks") {
  ComplexMatrix z(2, 2);
  z << 1, 0, 0, -1;
  CHECK((evolve_unitary(z, kPi) + ComplexMatrix::Identity(2, 2)).norm() <= 1e-10);
  CHECK((evolve_unitary(z, 0.0) - ComplexMatrix::Identity(2, 2)).norm() <= 1e-14);

  std::mt19937_64 rng(77);
  const ComplexMatrix h = random_hermitian(rng, 4);
  const ComplexMatrix u = evolve_unitary(h, 0.7);
  const ComplexMatrix half = evolve_unitary(h, 0.35);
  CHECK((half * half - u).norm() <= 1e-10);
  CHECK((u * u.adjoint() - ComplexMatrix::Identity(4, 4)).norm() <= 1e-10);

  ComplexMatrix bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(evolve_unitary(bad, 1.0), std::invalid_argument);
}

TEST_CASE("trotter_unitary: exact for commuting terms, first-order otherwise") {
  ComplexMatrix diag = ComplexMatrix::Zero(4, 4);
  diag.diagonal() << 0.3, -0.7, 1.1, 0.2;
  CHECK((trotter_unitary(diag, 0.9, 1) - evolve_unitary(diag, 0.9)).norm() <= 1e-10);

  std::mt19937_64 rng(99);
  const ComplexMatrix h = random_hermitian(rng, 4);
  const ComplexMatrix exact = evolve_unitary(h, 0.4);
  const double err_coarse = (trotter_unitary(h, 0.4, 100) - exact).norm();
  const double err_fine = (trotter_unitary(h, 0.4, 800) - exact).norm();
  CHECK(err_fine <= err_coarse / 4.0);  // O(1/steps) scaling
  CHECK(err_fine <= 1e-3);

  CHECK_THROWS_WITH_AS(trotter_unitary(ComplexMatrix::Identity(32, 32), 1.0, 1),
                       doctest::Contains("bounded to 4 qubits"), std::invalid_argument);
  CHECK_THROWS_AS(trotter_unitary(diag, 1.0, 0), std::invalid_argument);
}

TEST_CASE("qpe: identity and dyadic phases are point masses") {
  const ComplexMatrix eye = ComplexMatrix::Identity(2, 2);
  const RealVector p0 = qpe(eye, QuantumState::basis_state(1, 1), 3);
  CHECK(p0(0) == doctest::Approx(1.0).epsilon(1e-12));

  ComplexMatrix u = ComplexMatrix::Identity(2, 2);
  u(1, 1) = std::exp(kI * (2.0 * kPi * 0.25));
  const RealVector p = qpe(u, QuantumState::basis_state(1, 1), 3);
  REQUIRE(p.size() == 8);
  CHECK(p(2) == doctest::Approx(1.0).epsilon(1e-12));  // 0.25 * 8
  CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
}

TEST_CASE("qpe: superposition splits into both eigenphase peaks") {
  ComplexMatrix u = ComplexMatrix::Identity(2, 2);
  u(1, 1) = std::exp(kI * (2.0 * kPi * 0.25));
  ComplexVector amps(2);
  amps << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const RealVector p = qpe(u, QuantumState::from_amplitudes(amps), 3);
  CHECK(p(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p(2) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("qpe: non-dyadic leakage matches the analytic kernel to 1e-8") {
  const double phase = 0.3;
  ComplexMatrix u = ComplexMatrix::Identity(2, 2);
  u(1, 1) = std::exp(kI * (2.0 * kPi * phase));
  const RealVector p = qpe(u, QuantumState::basis_state(1, 1), 5);
  REQUIRE(p.size() == 32);
  Eigen::Index mode = 0;
  p.maxCoeff(&mode);
  CHECK(mode == 10);  // round(0.3 * 32)
  for (int k = 0; k < 32; ++k)
    CHECK(std::abs(p(k) - analytic_qpe_prob(phase, k, 5)) <= 1e-8);
  CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
}

TEST_CASE("qpe: rejects non-unitary input") {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, 2;
  CHECK_THROWS_WITH_AS(qpe(m, QuantumState::basis_state(1, 0), 3),
                       doctest::Contains("not unitary"), std::invalid_argument);
}

TEST_CASE("hhl_solve: identity system returns b") {
  RealVector b(2);
  b << 1.0, 0.0;
  for (auto mode : {HhlMode::ideal, HhlMode::circuit}) {
    HhlConfig cfg;
    cfg.mode = mode;
    cfg.clock_qubits = 4;
    cfg.evolution_time = kPi / 2.0;  // the unit eigenvalue lands on phase 1/4
    const ComplexVector x = hhl_solve(ComplexMatrix::Identity(2, 2), b, cfg);
    check_close(x(0), Complex(1.0, 0.0), 1e-8);
    check_close(x(1), Complex(0.0, 0.0), 1e-8);
  }
}

TEST_CASE("hhl_solve: diagonal inversion with exactly representable phases") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a.diagonal() << 1.0, 2.0;
  RealVector b(2);
  b << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  HhlConfig cfg;
  cfg.clock_qubits = 3;
  cfg.evolution_time = kPi / 4.0;  // phases 1/8 and 2/8
  const ComplexVector x = hhl_solve(a, b, cfg);
  check_close(x(0), Complex(1.0 / std::sqrt(2.0), 0.0), 1e-8);
  check_close(x(1), Complex(0.5 / std::sqrt(2.0), 0.0), 1e-8);
}

TEST_CASE("hhl_solve: negative eigenvalue handled in two's complement") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a.diagonal() << 1.0, -1.0;
  RealVector b(2);
  b << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  HhlConfig cfg;
  cfg.clock_qubits = 3;
  cfg.evolution_time = kPi / 2.0;  // phases 1/4 and 3/4 -> +1 and -1
  const ComplexVector x = hhl_solve(a, b, cfg);
  check_close(x(0), Complex(1.0 / std::sqrt(2.0), 0.0), 1e-8);
  check_close(x(1), Complex(-1.0 / std::sqrt(2.0), 0.0), 1e-8);
}

TEST_CASE("hhl_solve: input validation") {
  RealVector b(2);
  b << 1.0, 0.0;
  ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(hhl_solve(a, RealVector::Zero(2)), std::invalid_argument);
  CHECK_THROWS_AS(hhl_solve(ComplexMatrix::Identity(3, 3), RealVector::Ones(3)),
                  std::invalid_argument);
  ComplexMatrix nh(2, 2);
  nh << 0, 1, 0, 0;
  CHECK_THROWS_AS(hhl_solve(nh, b), std::invalid_argument);

  HhlConfig ideal;
  ideal.mode = HhlMode::ideal;
  CHECK_THROWS_WITH_AS(hhl_solve(ComplexMatrix::Zero(2, 2), b, ideal),
                       doctest::Contains("singular"), physics_error);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d.diagonal() << 1.0, 2.0;
  HhlConfig aliased;
  aliased.evolution_time = kPi / 2.0;  // t * spectral = pi
  CHECK_THROWS_WITH_AS(hhl_solve(d, b, aliased), doctest::Contains("anti-aliasing"),
                       std::invalid_argument);
}

TEST_CASE("hhl_solve: vanishing post-selection probability is reported") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a.diagonal() << 1.0, 2.0;
  RealVector b(2);
  b << 1.0, 1.0;
  HhlConfig cfg;
  cfg.rotation_constant = 1e-9;  // success amplitude ~ C/lambda, squared ~ 1e-18
  CHECK_THROWS_WITH_AS(hhl_solve(a, b, cfg), doctest::Contains("post-selection"),
                       convergence_error);
}

TEST_CASE("hhl_solve: dilated fixture step reaches 0.99 fidelity at n_c = 8") {
  const auto sys = fixture_dilated();
  const ComplexVector exact = linear_solve(sys.a_matrix, sys.rhs_real.cast<Complex>());
  HhlConfig cfg;
  cfg.clock_qubits = 8;
  const ComplexVector x = hhl_solve(sys.a_matrix, sys.rhs_real, cfg);
  CHECK(fidelity(x, exact) >= 0.99);
}

TEST_CASE("hhl_solve: fidelity non-decreasing in clock precision") {
  ComplexMatrix a(4, 4);
  a << 2.0, 0.3, 0.0, 0.1,
      0.3, 1.5, 0.2, 0.0,
      0.0, 0.2, 2.5, 0.4,
      0.1, 0.0, 0.4, 1.8;
  RealVector b(4);
  b << 0.8, 0.1, -0.5, 0.3;
  const ComplexVector exact = linear_solve(a.cast<Complex>(), b.cast<Complex>());
  double prev = 0.0;
  for (int nc : {4, 6, 8, 10}) {
    HhlConfig cfg;
    cfg.clock_qubits = nc;
    const double f = fidelity(hhl_solve(a, b, cfg), exact);
    CHECK(f >= prev - 1e-12);
    prev = f;
  }
  CHECK(prev >= 0.999);
}

TEST_CASE("hhl_solve: exactly representable spectrum converges past 1 - 1e-3") {
  ComplexMatrix a = ComplexMatrix::Zero(4, 4);
  a.diagonal() << 1.0, 2.0, 3.0, 4.0;
  RealVector b(4);
  b << 0.2, 0.4, -0.6, 0.3;
  HhlConfig cfg;
  cfg.clock_qubits = 10;
  cfg.evolution_time = kPi / 8.0;  // phases k/16, representable from n_c = 4 up
  const ComplexVector x = hhl_solve(a, b, cfg);
  ComplexVector exact(4);
  for (int i = 0; i < 4; ++i) exact(i) = b(i) / a(i, i).real();
  CHECK(fidelity(x, exact) >= 1.0 - 1e-3);
  CHECK((x - exact).norm() <= 1e-8 * exact.norm());
}

TEST_CASE("hhl_solve: seeded shot sampling is deterministic") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a.diagonal() << 1.0, 2.0;
  RealVector b(2);
  b << 1.0, 1.0;
  HhlConfig cfg;
  cfg.clock_qubits = 4;
  cfg.shots = 200000;
  cfg.shot_seed = 7;
  const ComplexVector x1 = hhl_solve(a, b, cfg);
  const ComplexVector x2 = hhl_solve(a, b, cfg);
  CHECK((x1 - x2).norm() == 0.0);
  // Magnitudes estimated from counts stay near the exact-amplitude solution.
  HhlConfig exact_cfg;
  exact_cfg.clock_qubits = 4;
  const ComplexVector xe = hhl_solve(a, b, exact_cfg);
  CHECK((x1 - xe).norm() <= 0.05 * xe.norm());
  cfg.shot_seed = 8;
  const ComplexVector x3 = hhl_solve(a, b, cfg);
  CHECK((x3 - x1).norm() > 0.0);
}

TEST_CASE("circuit JSON: gate-list schema") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a.diagonal() << 1.0, 2.0;
  HhlConfig cfg;
  cfg.clock_qubits = 2;
  const auto parsed = nlohmann::json::parse(hhl_circuit_json(a, cfg));
  REQUIRE(parsed.is_array());
  CHECK(parsed.size() > 0);
  bool saw_rotation = false;
  for (const auto& g : parsed) {
    REQUIRE(g.contains("gate"));
    REQUIRE(g.contains("targets"));
    REQUIRE(g.contains("controls"));
    REQUIRE(g.contains("params"));
    CHECK(g["gate"].is_string());
    CHECK(g["targets"].is_array());
    CHECK(g["controls"].is_array());
    CHECK(g["params"].is_array());
    saw_rotation = saw_rotation || g["gate"] == "eig_rot";
  }
  CHECK(saw_rotation);

  const auto qpe_plan = nlohmann::json::parse(qpe_circuit_json(1, 3));
  REQUIRE(qpe_plan.is_array());
  CHECK(qpe_plan[0]["gate"] == "h");
}

TEST_CASE("gershgorin_bound: row-sum bound dominates the spectral radius") {
  ComplexMatrix a(2, 2);
  a << 2.0, 1.0, 1.0, 3.0;
  CHECK(gershgorin_bound(a) == doctest::Approx(4.0));
  std::mt19937_64 rng(5);
  const ComplexMatrix h = random_hermitian(rng, 8);
  const double bound = gershgorin_bound(h);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
  CHECK(eig.eigenvalues().cwiseAbs().maxCoeff() <= bound + 1e-12);
}
