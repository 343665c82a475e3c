#include <array>
#include <cmath>
#include <map>

#include "qres/qsim.hpp"
#include "qsim_internal.hpp"

namespace qres {

namespace {

const ComplexMatrix& sigma(char letter) {
  static const ComplexMatrix I = ComplexMatrix::Identity(2, 2);
  static const ComplexMatrix X = [] {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
  }();
  static const ComplexMatrix Y = [] {
    ComplexMatrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
  }();
  static const ComplexMatrix Z = [] {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
  }();
  switch (letter) {
    case 'I': return I;
    case 'X': return X;
    case 'Y': return Y;
    case 'Z': return Z;
    default: throw std::invalid_argument(std::string("unknown Pauli letter: ") + letter);
  }
}

// sigma_a * sigma_b = phase * sigma_c
std::pair<Complex, char> mul_letters(char a, char b) {
  if (a == 'I') return {1.0, b};
  if (b == 'I') return {1.0, a};
  if (a == b) return {1.0, 'I'};
  static const std::map<std::pair<char, char>, std::pair<Complex, char>> table = {
      {{'X', 'Y'}, {Complex(0, 1), 'Z'}},  {{'Y', 'X'}, {Complex(0, -1), 'Z'}},
      {{'Y', 'Z'}, {Complex(0, 1), 'X'}},  {{'Z', 'Y'}, {Complex(0, -1), 'X'}},
      {{'Z', 'X'}, {Complex(0, 1), 'Y'}},  {{'X', 'Z'}, {Complex(0, -1), 'Y'}}};
  return table.at({a, b});
}

std::vector<PauliTerm> mul_terms(const std::vector<PauliTerm>& lhs,
                                 const std::vector<PauliTerm>& rhs) {
  std::map<std::string, Complex> acc;
  for (const auto& l : lhs) {
    for (const auto& r : rhs) {
      Complex coeff = l.coefficient * r.coefficient;
      std::string word(l.word.size(), 'I');
      for (size_t k = 0; k < word.size(); ++k) {
        const auto [phase, letter] = mul_letters(l.word[k], r.word[k]);
        coeff *= phase;
        word[k] = letter;
      }
      acc[word] += coeff;
    }
  }
  std::vector<PauliTerm> out;
  for (const auto& [word, coeff] : acc)
    if (std::abs(coeff) > 1e-14) out.push_back({coeff, word});
  return out;
}

}  // namespace

std::vector<PauliTerm> jordan_wigner_ladder(int mode, int n_modes, bool dagger) {
  if (n_modes < 1) throw std::invalid_argument("jordan_wigner_ladder: need at least one mode");
  if (mode < 0 || mode >= n_modes)
    throw std::out_of_range("jordan_wigner_ladder: mode index out of range");
  // a_j     = Z_(j-1) ... Z_0 (X_j + iY_j)/2
  // a^dag_j = Z_(j-1) ... Z_0 (X_j - iY_j)/2
  // word index k holds qubit n_modes-1-k (MSB first).
  std::string base(n_modes, 'I');
  for (int q = 0; q < mode; ++q) base[n_modes - 1 - q] = 'Z';
  std::string wx = base, wy = base;
  wx[n_modes - 1 - mode] = 'X';
  wy[n_modes - 1 - mode] = 'Y';
  const Complex yc = dagger ? Complex(0.0, -0.5) : Complex(0.0, 0.5);
  return {{Complex(0.5, 0.0), wx}, {yc, wy}};
}

ComplexMatrix pauli_word_matrix(const std::string& word) {
  // word[0] is the most significant qubit, so it must become the outermost
  // Kronecker factor; letters are folded in from the right.
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const ComplexMatrix& s = sigma(*it);
    ComplexMatrix next(out.rows() * 2, out.cols() * 2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) next.block(r * out.rows(), c * out.cols(), out.rows(), out.cols()) = s(r, c) * out;
    out = std::move(next);
  }
  return out;
}

ComplexMatrix pauli_rebuild(const std::vector<PauliTerm>& terms, int num_qubits) {
  const Eigen::Index dim = Eigen::Index(1) << num_qubits;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (const auto& term : terms) {
    if (static_cast<int>(term.word.size()) != num_qubits)
      throw std::invalid_argument("pauli_rebuild: word length does not match register size");
    out += term.coefficient * pauli_word_matrix(term.word);
  }
  return out;
}

std::vector<PauliTerm> pauli_decompose(const ComplexMatrix& H) {
  if (H.rows() != H.cols()) throw std::invalid_argument("pauli_decompose: non-square input");
  const int m = detail::log2_exact(H.rows(), "pauli_decompose");
  const Eigen::Index dim = H.rows();
  const double drop = 1e-15 * std::max(H.cwiseAbs().maxCoeff(), 1e-300);

  std::vector<PauliTerm> terms;
  const Eigen::Index n_words = Eigen::Index(1) << (2 * m);
  for (Eigen::Index code = 0; code < n_words; ++code) {
    // Two bits per qubit: 0=I, 1=X, 2=Y, 3=Z (qubit q at bit position 2q).
    Eigen::Index x_mask = 0, y_mask = 0, z_mask = 0;
    std::string word(m, 'I');
    for (int q = 0; q < m; ++q) {
      const int letter = (code >> (2 * q)) & 3;
      const Eigen::Index bit = Eigen::Index(1) << q;
      if (letter == 1) {
        x_mask |= bit;
        word[m - 1 - q] = 'X';
      } else if (letter == 2) {
        x_mask |= bit;
        y_mask |= bit;
        word[m - 1 - q] = 'Y';
      } else if (letter == 3) {
        z_mask |= bit;
        word[m - 1 - q] = 'Z';
      }
    }
    Complex trace(0.0, 0.0);
    for (Eigen::Index r = 0; r < dim; ++r) {
      const Eigen::Index c = r ^ x_mask;
      // P(r,c) = prod_{q in Y} i(2 r_q - 1) * prod_{q in Z} (-1)^(r_q)
      Complex p(1.0, 0.0);
      Eigen::Index ybits = r & y_mask;
      int y_ones = 0, y_total = 0;
      for (Eigen::Index b = y_mask; b; b &= b - 1) ++y_total;
      for (Eigen::Index b = ybits; b; b &= b - 1) ++y_ones;
      // each Y contributes i*(+1) when r_q=1, i*(-1) when r_q=0
      const int y_zeros = y_total - y_ones;
      // i^y_total * (-1)^y_zeros
      switch (y_total & 3) {
        case 0: p = 1.0; break;
        case 1: p = Complex(0, 1); break;
        case 2: p = -1.0; break;
        case 3: p = Complex(0, -1); break;
      }
      if (y_zeros & 1) p = -p;
      int z_ones = 0;
      for (Eigen::Index b = r & z_mask; b; b &= b - 1) ++z_ones;
      if (z_ones & 1) p = -p;
      trace += p * H(c, r);
    }
    const Complex coeff = trace / double(dim);
    if (std::abs(coeff) > drop) terms.push_back({coeff, word});
  }
  return terms;
}

std::vector<PauliTerm> jordan_wigner(int i, int j, int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("jordan_wigner: need at least one mode");
  if (i < 0 || j < 0 || i >= n_modes || j >= n_modes)
    throw std::out_of_range("jordan_wigner: mode index out of range");
  return mul_terms(jordan_wigner_ladder(i, n_modes, /*dagger=*/true),
                   jordan_wigner_ladder(j, n_modes, /*dagger=*/false));
}

ComplexMatrix trotter_unitary(const ComplexMatrix& H, double t, int steps) {
  if (steps < 1) throw std::invalid_argument("trotter_unitary: steps must be >= 1");
  const int m = detail::log2_exact(H.rows(), "trotter_unitary");
  if (m > 4) throw std::invalid_argument("trotter_unitary: cross-check path bounded to 4 qubits");
  if (!is_hermitian(H)) throw std::invalid_argument("trotter_unitary: H is not Hermitian");
  const Eigen::Index dim = H.rows();
  const auto terms = pauli_decompose(H);

  ComplexMatrix step = ComplexMatrix::Identity(dim, dim);
  for (const auto& term : terms) {
    const double theta = term.coefficient.real() * t / steps;
    const ComplexMatrix P = pauli_word_matrix(term.word);
    // P^2 = I, so exp(i theta P) = cos(theta) I + i sin(theta) P
    const ComplexMatrix factor =
        std::cos(theta) * ComplexMatrix::Identity(dim, dim) + Complex(0, 1) * std::sin(theta) * P;
    step = factor * step;
  }
  ComplexMatrix out = ComplexMatrix::Identity(dim, dim);
  for (int k = 0; k < steps; ++k) out = step * out;
  return out;
}

}  // namespace qres
