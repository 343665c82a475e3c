#include "qres/ihhl.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qres/qsim.hpp"

namespace qres {

namespace {

constexpr double kBetaSingularGuard = 1e-8;
constexpr double kBetaNudge = 0.1;
constexpr double kDuplicateTol = 1e-6;
constexpr double kDivergenceFactor = 1e3;
constexpr int kSeedAttempts = 5;

Complex c_rayleigh(const ComplexVector& phi, const ComplexMatrix& H,
                   const Tolerances& tol) {
  const Complex denom = c_product(phi, phi);
  if (std::abs(denom) < tol.quasi_null)
    throw quasi_null_error("c-Rayleigh quotient: quasi-null c-norm");
  return c_product(phi, H * phi) / denom;
}

void log_event(IterationTrace* trace, const std::string& msg) {
  if (trace) trace->events.push_back(msg);
}

ComplexVector solve_dilated(const DilatedSystem& sys, const IhhlOptions& opt,
                            double spectral_norm) {
  const Eigen::Index n = sys.a_matrix.rows() / 2;
  const bool imag_nonzero = sys.rhs_imag.norm() > 0.0;

  if (opt.solver == SolverBackend::classical) {
    const ComplexVector xr = linear_solve(sys.a_matrix, sys.rhs_real.cast<Complex>(), opt.tol);
    ComplexVector lower = xr.tail(n);
    if (imag_nonzero) {
      const ComplexVector xi =
          linear_solve(sys.a_matrix, sys.rhs_imag.cast<Complex>(), opt.tol);
      lower += Complex(0.0, 1.0) * xi.tail(n);
    }
    return lower;
  }

  HhlConfig cfg;
  cfg.clock_qubits = opt.clock_qubits;
  cfg.mode = opt.solver == SolverBackend::hhl_ideal ? HhlMode::ideal : HhlMode::circuit;
  cfg.shots = opt.shots;
  // The dilated operator is fully known here, so the evolution time is set
  // from its exact spectral norm instead of the looser Gershgorin default:
  // the finer phase grid is what keeps the n_c=8 runs inside the 0.01 MeV
  // acceptance budget.
  cfg.evolution_time = std::numbers::pi / (1.1 * spectral_norm);

  const ComplexVector xr = hhl_solve(sys.a_matrix, sys.rhs_real, cfg);
  ComplexVector lower = xr.tail(n);
  if (imag_nonzero) {
    const ComplexVector xi = hhl_solve(sys.a_matrix, sys.rhs_imag, cfg);
    lower += Complex(0.0, 1.0) * xi.tail(n);
  }
  return lower;
}

}  // namespace

SolverBackend parse_solver(const std::string& name) {
  if (name == "classical") return SolverBackend::classical;
  if (name == "hhl-ideal") return SolverBackend::hhl_ideal;
  if (name == "hhl-circuit") return SolverBackend::hhl_circuit;
  throw std::invalid_argument("unknown solver: " + name);
}

EnergyUpdate parse_update(const std::string& name) {
  if (name == "shift-invert") return EnergyUpdate::shift_invert;
  if (name == "rayleigh") return EnergyUpdate::rayleigh;
  throw std::invalid_argument("unknown energy update: " + name);
}

std::string to_string(SolverBackend solver) {
  switch (solver) {
    case SolverBackend::classical: return "classical";
    case SolverBackend::hhl_ideal: return "hhl-ideal";
    case SolverBackend::hhl_circuit: return "hhl-circuit";
  }
  return "?";
}

std::string to_string(EnergyUpdate update) {
  return update == EnergyUpdate::shift_invert ? "shift-invert" : "rayleigh";
}

FixedPointOperator build_c_operator(const ComplexMatrix& H, Complex E, Complex beta) {
  if (H.rows() != H.cols()) throw std::invalid_argument("build_c_operator: non-square H");
  if (beta == Complex(0.0, 0.0))
    throw std::invalid_argument("build_c_operator: beta must be nonzero");
  FixedPointOperator out;
  out.matrix = (H - (E - beta) * ComplexMatrix::Identity(H.rows(), H.cols())) / beta;
  out.energy_shift = E;
  out.beta = beta;
  return out;
}

DilatedSystem dilate(const FixedPointOperator& c_op, const ComplexVector& phi) {
  const Eigen::Index n = c_op.matrix.rows();
  if (phi.size() != n) throw std::invalid_argument("dilate: dimension mismatch");
  DilatedSystem out;
  out.a_matrix = ComplexMatrix::Zero(2 * n, 2 * n);
  out.a_matrix.topRightCorner(n, n) = c_op.matrix;
  out.a_matrix.bottomLeftCorner(n, n) = c_op.matrix.adjoint();
  out.rhs_real = RealVector::Zero(2 * n);
  out.rhs_imag = RealVector::Zero(2 * n);
  out.rhs_real.head(n) = phi.real();
  out.rhs_imag.head(n) = phi.imag();
  return out;
}

ComplexVector deflate(const ComplexVector& phi, const DeflationSet& set,
                      const Tolerances& tol) {
  ComplexVector out = phi;
  for (const auto& v : set.eigenvectors) {
    const Complex vv = c_product(v, v);
    if (std::abs(vv) < tol.quasi_null)
      throw quasi_null_error("deflate: exceptional point (set member has quasi-null c-norm)");
    out -= v * (c_product(v, out) / vv);
  }
  return out;
}

std::pair<ComplexVector, Complex> ihhl_step(const ComplexVector& phi, Complex E,
                                            const ComplexMatrix& H,
                                            const IhhlOptions& opt,
                                            const DeflationSet& deflation,
                                            IterationTrace* trace) {
  if (!std::isfinite(E.real()) || !std::isfinite(E.imag()))
    throw std::invalid_argument("ihhl_step: non-finite energy");
  require_finite(phi, "ihhl_step iterate");

  Complex beta = opt.beta;
  Eigen::JacobiSVD<ComplexMatrix> svd(
      H - (E - beta) * ComplexMatrix::Identity(H.rows(), H.cols()));
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (smin < kBetaSingularGuard) {
    beta += kBetaNudge;
    std::ostringstream msg;
    msg << "beta nudged to " << beta.real() << "+" << beta.imag()
        << "i (C singular to " << smin << " at E=" << E.real() << (E.imag() < 0 ? "-" : "+")
        << std::abs(E.imag()) << "i)";
    log_event(trace, msg.str());
    svd.compute(H - (E - beta) * ComplexMatrix::Identity(H.rows(), H.cols()));
    smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin < kBetaSingularGuard)
      throw convergence_error("ihhl_step: C(E, beta) singular even after beta nudge");
  }
  const double smax = svd.singularValues()(0);

  const FixedPointOperator c_op = build_c_operator(H, E, beta);
  const DilatedSystem sys = dilate(c_op, phi);
  // Singular values of C are |eigenvalues| of the dilation.
  const ComplexVector raw = solve_dilated(sys, opt, smax / std::abs(beta));

  Complex e_star;
  if (opt.update == EnergyUpdate::shift_invert) {
    const Complex denom = c_product(phi, raw);
    e_star = (E - beta) + beta * c_product(phi, phi) / denom;
  }

  ComplexVector next = deflation.empty() ? raw : deflate(raw, deflation, opt.tol);
  if (opt.update == EnergyUpdate::rayleigh) e_star = c_rayleigh(next, H, opt.tol);

  const double norm = hermitian_norm(next);
  if (norm < opt.tol.quasi_null)
    throw quasi_null_error("ihhl_step: iterate annihilated by deflation");
  next /= norm;

  if (!std::isfinite(e_star.real()) || !std::isfinite(e_star.imag()))
    throw convergence_error("ihhl_step: energy update produced a non-finite value");
  return {std::move(next), e_star};
}

IhhlResult ihhl_solve(const ComplexMatrix& H, const ComplexVector& phi0,
                      const IhhlOptions& opt, const DeflationSet& deflation) {
  if (!(opt.epsilon > 0.0)) throw std::invalid_argument("ihhl_solve: epsilon must be positive");
  if (phi0.size() != H.rows()) throw std::invalid_argument("ihhl_solve: seed dimension mismatch");
  if (hermitian_norm(phi0) == 0.0) throw std::invalid_argument("ihhl_solve: zero seed");

  IhhlResult result;
  IterationTrace& trace = result.trace;

  ComplexVector phi = deflation.empty() ? phi0 : deflate(phi0, deflation, opt.tol);
  const double norm = hermitian_norm(phi);
  if (norm < opt.tol.quasi_null)
    throw quasi_null_error("ihhl_solve: seed annihilated by deflation");
  phi /= norm;

  Complex E = opt.e0 ? *opt.e0 : c_rayleigh(phi, H, opt.tol);
  trace.energies.push_back(E);
  trace.iterates.push_back(phi);

  const double h_scale = H.norm();
  for (int it = 1; it <= opt.max_iter; ++it) {
    auto [next, e_next] = ihhl_step(phi, E, H, opt, deflation, &trace);
    const double delta = std::abs(e_next - E);
    phi = std::move(next);
    E = e_next;
    trace.energies.push_back(E);
    trace.deltas.push_back(delta);
    trace.iterates.push_back(phi);
    trace.iterations_used = it;
    if (std::abs(E) > kDivergenceFactor * std::max(h_scale, 1.0)) {
      trace.events.push_back("divergence declared: |E| exceeded 1e3 * ||H||_F");
      break;
    }
    if (delta < opt.epsilon) {
      trace.converged = true;
      break;
    }
  }

  result.eigenvalue = E;
  result.eigenvector = phi;
  result.residual = (H * phi - E * phi).norm();
  return result;
}

SpectrumResult full_spectrum(const ComplexMatrix& H,
                             const std::vector<ComplexVector>& seeds,
                             const IhhlOptions& opt) {
  const Eigen::Index n = H.rows();
  if (static_cast<Eigen::Index>(seeds.size()) > n)
    throw std::invalid_argument("full_spectrum: more seeds than eigenvalues");

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const auto random_seed = [&] {
    ComplexVector v(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double re = uni(rng);
      const double im = uni(rng);
      v[k] = Complex(re, im);
    }
    return v;
  };

  DeflationSet found;
  SpectrumResult result;
  result.all_converged = true;

  for (Eigen::Index idx = 0; idx < n; ++idx) {
    SpectrumEntry entry;
    for (int attempt = 0; attempt < kSeedAttempts; ++attempt) {
      ComplexVector seed;
      if (attempt == 0 && idx < static_cast<Eigen::Index>(seeds.size()))
        seed = seeds[idx];
      else
        seed = random_seed();
      IhhlResult solve;
      try {
        solve = ihhl_solve(H, seed, opt, found);
      } catch (const quasi_null_error&) {
        continue;  // seed fell into the deflated subspace; redraw
      }
      entry.trace = solve.trace;
      if (!solve.trace.converged) {
        entry.trace.events.push_back("attempt " + std::to_string(attempt) +
                                     " did not converge");
        continue;
      }
      for (const Complex known : found.eigenvalues) {
        if (std::abs(solve.eigenvalue - known) < kDuplicateTol) {
          std::ostringstream msg;
          msg << "full_spectrum: deflation failure, duplicate eigenvalue "
              << solve.eigenvalue.real() << (solve.eigenvalue.imag() < 0 ? "-" : "+")
              << std::abs(solve.eigenvalue.imag()) << "i";
          throw convergence_error(msg.str());
        }
      }
      entry.eigenvalue = solve.eigenvalue;
      entry.eigenvector = solve.eigenvector;
      entry.converged = true;
      found.eigenvectors.push_back(c_normalize(solve.eigenvector, opt.tol));
      found.eigenvalues.push_back(solve.eigenvalue);
      break;
    }
    if (!entry.converged) result.all_converged = false;
    result.entries.push_back(std::move(entry));
  }

  std::sort(result.entries.begin(), result.entries.end(),
            [](const SpectrumEntry& a, const SpectrumEntry& b) {
              if (!a.converged || !b.converged) return b.converged < a.converged;
              if (a.eigenvalue.real() != b.eigenvalue.real())
                return a.eigenvalue.real() < b.eigenvalue.real();
              return a.eigenvalue.imag() < b.eigenvalue.imag();
            });
  return result;
}

std::string trace_to_csv(const IterationTrace& trace) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "iteration,re_e,im_e,delta_abs\n";
  for (size_t k = 0; k < trace.energies.size(); ++k) {
    out << k << ',' << trace.energies[k].real() << ',' << trace.energies[k].imag() << ',';
    if (k > 0) out << trace.deltas[k - 1];
    out << '\n';
  }
  return out.str();
}

std::string trace_to_json(const IterationTrace& trace) {
  nlohmann::json j;
  j["converged"] = trace.converged;
  j["iterations_used"] = trace.iterations_used;
  j["events"] = trace.events;
  j["energies"] = nlohmann::json::array();
  for (const auto& e : trace.energies)
    j["energies"].push_back({{"re", e.real()}, {"im", e.imag()}});
  j["deltas"] = trace.deltas;
  j["iterates"] = nlohmann::json::array();
  for (const auto& v : trace.iterates) {
    const RealVector re = v.real();
    const RealVector im = v.imag();
    nlohmann::json vec;
    vec["re"] = std::vector<double>(re.data(), re.data() + re.size());
    vec["im"] = std::vector<double>(im.data(), im.data() + im.size());
    j["iterates"].push_back(vec);
  }
  return j.dump(1) + "\n";
}

}  // namespace qres
