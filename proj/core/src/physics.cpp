#include "qres/physics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace qres {

namespace {

constexpr double kQuadratureTol = 1e-8;

struct BasisData {
  RealVector alpha;  // 1 / (2 b_k^2)
  RealVector norm;   // N_k
};

BasisData basis_data(const RadialBasis& basis, int L) {
  BasisData d;
  d.alpha.resize(basis.size);
  d.norm.resize(basis.size);
  const double g = std::tgamma(L + 1.5);
  for (int k = 0; k < basis.size; ++k) {
    const double b = basis.width(k);
    d.alpha[k] = 1.0 / (2.0 * b * b);
    d.norm[k] = std::sqrt(2.0 * std::pow(2.0 * d.alpha[k], L + 1.5) / g);
  }
  return d;
}

struct PrimitiveMatrices {
  RealMatrix overlap;
  ComplexMatrix hamiltonian;
};

// Closed forms over the unorthonormalized Gaussians. With gamma = a_i + a_j:
//   S    = N_i N_j Gamma(L+3/2) / (2 gamma^(L+3/2))
//   T    = e^(-2i theta) (hbar^2/2mu) (2L+3) (2 a_i a_j / gamma) S
//   V    = lambda V0 N_i N_j Gamma(L+3/2) / (2 c^(L+3/2)), c = gamma + e^(2i theta)/a^2
//   Coul = e^(-i theta) 4e^2 N_i N_j Gamma(L+1) / (2 gamma^(L+1))
PrimitiveMatrices primitive_matrices(double lambda, ScalingAngle theta,
                                     const RadialBasis& basis, const ChannelSpec& ch,
                                     const PotentialParams& pot) {
  const int n = basis.size;
  const int L = ch.L;
  const BasisData bd = basis_data(basis, L);
  const double gL32 = std::tgamma(L + 1.5);
  const double gL1 = std::tgamma(L + 1.0);
  const Complex phase2 = std::exp(Complex(0.0, -2.0 * theta.radians()));
  const Complex phase1 = std::exp(Complex(0.0, -theta.radians()));
  const Complex cshift = std::exp(Complex(0.0, 2.0 * theta.radians())) / (pot.a * pot.a);

  PrimitiveMatrices out;
  out.overlap.resize(n, n);
  out.hamiltonian.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double gamma = bd.alpha[i] + bd.alpha[j];
      const double nfac = bd.norm[i] * bd.norm[j];
      const double S = nfac * gL32 / (2.0 * std::pow(gamma, L + 1.5));
      const double Tbase =
          ch.hbar2_over_2mu * (2 * L + 3) * (2.0 * bd.alpha[i] * bd.alpha[j] / gamma) * S;
      const Complex c = gamma + cshift;
      const Complex V = lambda * pot.v0 * nfac * gL32 / (2.0 * std::pow(c, L + 1.5));
      const double Cb = ch.coulomb_strength * nfac * gL1 / (2.0 * std::pow(gamma, L + 1.0));
      const Complex h = phase2 * Tbase + V + phase1 * Cb;
      out.overlap(i, j) = S;
      out.overlap(j, i) = S;
      out.hamiltonian(i, j) = h;
      out.hamiltonian(j, i) = h;
    }
  }
  return out;
}

const std::pair<RealVector, RealVector>& cached_gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::pair<RealVector, RealVector>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::pair<RealVector, RealVector> nw;
    gauss_legendre(n, nw.first, nw.second);
    it = cache.emplace(n, std::move(nw)).first;
  }
  return it->second;
}

struct QuadResult {
  Complex integral{0.0, 0.0};
  double l1 = 0.0;
};

template <typename F>
QuadResult composite_quad(F&& f, double R, int points, int panels) {
  const auto& [x, w] = cached_gauss_legendre(points);
  QuadResult out;
  for (int p = 0; p < panels; ++p) {
    const double lo = R * std::pow(double(p) / panels, 2);
    const double hi = R * std::pow(double(p + 1) / panels, 2);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (int k = 0; k < points; ++k) {
      const double r = mid + half * x[k];
      const Complex fv = f(r);
      out.integral += half * w[k] * fv;
      out.l1 += half * w[k] * std::abs(fv);
    }
  }
  return out;
}

}  // namespace

void PotentialParams::validate() const {
  if (!(a > 0.0)) throw physics_error("potential range a must be positive");
}

void ChannelSpec::validate() const {
  if (L < 0) throw physics_error("orbital angular momentum L must be >= 0");
  if (!(hbar2_over_2mu > 0.0)) throw physics_error("hbar2_over_2mu must be positive");
  if (coulomb_strength < 0.0) throw physics_error("coulomb_strength must be >= 0");
}

double RadialBasis::width(int k) const { return b0 * std::pow(q, k); }

void RadialBasis::validate() const {
  if (size < 1) throw physics_error("basis size must be >= 1");
  if (!(b0 > 0.0)) throw physics_error("basis b0 must be positive");
  if (!(q > 1.0)) throw physics_error("basis ratio q must exceed 1 (strictly increasing widths)");
}

ScalingAngle::ScalingAngle(double radians) : theta_(radians) {
  if (!(theta_ >= 0.0 && theta_ < std::numbers::pi / 4.0))
    throw physics_error("scaling angle must lie in [0, pi/4)");
}

ScalingAngle ScalingAngle::from_degrees(double deg) {
  return ScalingAngle(deg * std::numbers::pi / 180.0);
}

double ScalingAngle::degrees() const { return theta_ * 180.0 / std::numbers::pi; }

Complex gaussian_potential(Complex r, const PotentialParams& p) {
  p.validate();
  return p.lambda * p.v0 * std::exp(-r * r / (p.a * p.a));
}

double QuadratureReport::max_dev() const {
  return std::max(kinetic_dev, std::max(potential_dev, coulomb_dev));
}

QuadratureReport verify_quadrature(double lambda, ScalingAngle theta,
                                   const RadialBasis& basis, const ChannelSpec& ch,
                                   const PotentialParams& pot, int points_per_panel,
                                   int panels) {
  if (points_per_panel < 2 || panels < 1)
    throw std::invalid_argument("verify_quadrature: need >= 2 points and >= 1 panel");
  const int n = basis.size;
  const int L = ch.L;
  const BasisData bd = basis_data(basis, L);
  const double gL32 = std::tgamma(L + 1.5);
  const double gL1 = std::tgamma(L + 1.0);
  const double c2t = std::cos(2.0 * theta.radians());
  const Complex rot2 = std::exp(Complex(0.0, 2.0 * theta.radians()));
  const double reach = std::sqrt(double(L + 1)) + 9.0;

  QuadratureReport rep;
  auto update = [](double& slot, const QuadResult& q, Complex closed, int i, int j,
                   const char* term) {
    const double dev = std::abs(q.integral - closed) / std::max(q.l1, 1e-300);
    slot = std::max(slot, dev);
    if (dev > kQuadratureTol) {
      std::ostringstream msg;
      msg << "quadrature non-convergence: " << term << " element (" << i << "," << j
          << ") deviates by " << dev << " (quad " << q.integral << ", closed " << closed
          << ")";
      throw physics_error(msg.str());
    }
  };

  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double ai = bd.alpha[i], aj = bd.alpha[j];
      const double gamma = ai + aj;
      const double nfac = bd.norm[i] * bd.norm[j];
      const double S = nfac * gL32 / (2.0 * std::pow(gamma, L + 1.5));
      const double Tbase =
          ch.hbar2_over_2mu * (2 * L + 3) * (2.0 * ai * aj / gamma) * S;
      const Complex c = gamma + rot2 / (pot.a * pot.a);
      const Complex V = lambda * pot.v0 * nfac * gL32 / (2.0 * std::pow(c, L + 1.5));
      const double Cb = ch.coulomb_strength * nfac * gL1 / (2.0 * std::pow(gamma, L + 1.0));

      const double R = reach / std::sqrt(gamma);
      const double Rv = reach / std::sqrt(gamma + c2t / (pot.a * pot.a));

      auto ui = [&](double r) { return bd.norm[i] * std::pow(r, L + 1) * std::exp(-ai * r * r); };
      auto uj = [&](double r) { return bd.norm[j] * std::pow(r, L + 1) * std::exp(-aj * r * r); };

      // Radial kinetic action on u_j: -(d^2/dr^2 - L(L+1)/r^2) u_j
      //   = (2 a_j (2L+3) r^(L+1) - 4 a_j^2 r^(L+3)) N_j e^(-a_j r^2)
      const QuadResult qt = composite_quad(
          [&](double r) {
            const double tu = ch.hbar2_over_2mu *
                              (2.0 * aj * (2 * L + 3) * std::pow(r, L + 1) -
                               4.0 * aj * aj * std::pow(r, L + 3)) *
                              bd.norm[j] * std::exp(-aj * r * r);
            return Complex(ui(r) * tu, 0.0);
          },
          R, points_per_panel, panels);
      update(rep.kinetic_dev, qt, Tbase, i, j, "kinetic");

      const QuadResult qv = composite_quad(
          [&](double r) {
            return ui(r) * uj(r) * lambda * pot.v0 *
                   std::exp(-r * r * rot2 / (pot.a * pot.a));
          },
          Rv, points_per_panel, panels);
      update(rep.potential_dev, qv, V, i, j, "potential");

      const QuadResult qc = composite_quad(
          [&](double r) {
            return Complex(ui(r) * uj(r) * ch.coulomb_strength / r, 0.0);
          },
          R, points_per_panel, panels);
      update(rep.coulomb_dev, qc, Cb, i, j, "coulomb");
    }
  }
  return rep;
}

ScaledHamiltonian build_hamiltonian(double lambda, ScalingAngle theta,
                                    const RadialBasis& basis, const ChannelSpec& ch,
                                    const PotentialParams& pot) {
  basis.validate();
  ch.validate();
  pot.validate();

  PrimitiveMatrices prim = primitive_matrices(lambda, theta, basis, ch, pot);
  verify_quadrature(lambda, theta, basis, ch, pot);

  Eigen::SelfAdjointEigenSolver<RealMatrix> overlap_eig(prim.overlap);
  if (overlap_eig.info() != Eigen::Success)
    throw convergence_error("build_hamiltonian: overlap diagonalization failed");
  const RealVector& s = overlap_eig.eigenvalues();
  const double smax = s[s.size() - 1];
  int first_kept = 0;
  while (first_kept < s.size() && s[first_kept] < basis.lowdin_rel_cut * smax)
    ++first_kept;
  const int kept = static_cast<int>(s.size()) - first_kept;
  if (kept < 1) throw physics_error("build_hamiltonian: overlap numerically rank zero");

  RealMatrix X(basis.size, kept);
  for (int k = 0; k < kept; ++k)
    X.col(k) = overlap_eig.eigenvectors().col(first_kept + k) /
               std::sqrt(s[first_kept + k]);

  ScaledHamiltonian out;
  out.matrix = X.transpose().cast<Complex>() * prim.hamiltonian * X.cast<Complex>();
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose()).eval();
  out.lambda = lambda;
  out.theta = theta;
  out.basis = basis;
  out.channel = ch;
  out.potential = pot;
  out.primitive_size = basis.size;
  require_finite(out.matrix, "build_hamiltonian output");
  return out;
}

bool check_angle(ScalingAngle theta, Complex E) {
  if (!(E.real() > 0.0))
    throw physics_error("check_angle: undefined rotation for nonpositive Re(E)");
  return 2.0 * theta.radians() > std::atan(std::abs(E.imag()) / E.real());
}

void gauss_legendre(int n, RealVector& nodes, RealVector& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  nodes.resize(n);
  weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

}  // namespace qres
