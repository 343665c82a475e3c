#include "qres/verify.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qres/ec.hpp"
#include "qres/ihhl.hpp"
#include "qres/json_io.hpp"
#include "qres/linalg.hpp"
#include "qres/physics.hpp"
#include "qres/qsim.hpp"

namespace qres::verify {

namespace {

struct FixtureFile {
  const char* name;
  std::uint64_t checksum;
};

constexpr FixtureFile kFixtureFiles[] = {
    {"h_theta20.json", 0xb1260f54e598d2edull},
    {"phi1_seed.json", 0x92fdd012a46fde70ull},
    {"phi2_seed.json", 0xd532f1283e308977ull},
    {"phi1_converged.json", 0x5d61587145268ac1ull},
    {"phi2_converged.json", 0xe0a56991249ab6ecull},
};

const std::array<Complex, 8> kEDiag = {{{97.9800, -123.9785},
                                        {48.8284, -52.2619},
                                        {29.3705, -22.4434},
                                        {17.3572, -12.6788},
                                        {11.8079, -1.8110},
                                        {7.6260, -5.9790},
                                        {3.6284, -2.7683},
                                        {1.5967, -1.1574}}};
const Complex kQuotedFirst{29.3599, -22.4433};
const Complex kQuotedSecond{11.8211, -1.8107};
const Complex kReferenceResonance{11.8079, -1.8085};

struct Fixture {
  ComplexMatrix h;
  ComplexVector phi1_seed, phi2_seed, phi1_conv, phi2_conv;
};

std::string fixture_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

Fixture load_fixture(const std::string& dir) {
  for (const auto& f : kFixtureFiles) {
    const std::string p = fixture_path(dir, f.name);
    if (!std::filesystem::exists(p)) throw io_error("fixture not found: " + p);
  }
  Fixture fx;
  fx.h = load_matrix(fixture_path(dir, "h_theta20.json"));
  fx.phi1_seed = load_vector(fixture_path(dir, "phi1_seed.json"));
  fx.phi2_seed = load_vector(fixture_path(dir, "phi2_seed.json"));
  fx.phi1_conv = load_vector(fixture_path(dir, "phi1_converged.json"));
  fx.phi2_conv = load_vector(fixture_path(dir, "phi2_converged.json"));
  return fx;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << "0x" << std::hex << std::setfill('0') << std::setw(16) << v;
  return out.str();
}

std::string fmt(Complex z, int prec = 6) {
  std::ostringstream out;
  out << std::setprecision(prec) << z.real() << (z.imag() < 0 ? "-" : "+")
      << std::abs(z.imag()) << "i";
  return out.str();
}

// Per-component deviation: the fixture tolerances are quoted per real/imag
// part.
double comp_dev(Complex a, Complex b) {
  return std::max(std::abs(a.real() - b.real()), std::abs(a.imag() - b.imag()));
}

Complex closest(const ComplexVector& values, Complex target) {
  Complex best = values[0];
  for (Eigen::Index k = 1; k < values.size(); ++k)
    if (std::abs(values[k] - target) < std::abs(best - target)) best = values[k];
  return best;
}

std::vector<Complex> sorted_reference_diag() {
  std::vector<Complex> v(kEDiag.begin(), kEDiag.end());
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return v;
}

struct SingleRun {
  IhhlResult result;
  double elapsed_s = 0.0;
};

SingleRun run_ihhl(const ComplexMatrix& h, const ComplexVector& seed,
                   const IhhlOptions& opt, const DeflationSet& defl = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  SingleRun run;
  run.result = ihhl_solve(h, seed, opt, defl);
  run.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

// --- criterion bodies --------------------------------------------------------

CriterionResult criterion_fixture_diag(const Fixture& fx) {
  CriterionResult r{1, "fixture-diagonalization"};
  const auto t0 = std::chrono::steady_clock::now();
  const EigenDecomposition eig = dense_eigen(fx.h);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::vector<Complex> expected = sorted_reference_diag();
  double worst = 0.0;
  for (size_t k = 0; k < expected.size(); ++k)
    worst = std::max(worst, comp_dev(eig.eigenvalues[static_cast<Eigen::Index>(k)], expected[k]));

  std::ostringstream d;
  d << "max per-component deviation " << std::setprecision(3) << worst
    << " MeV (limit 0.01), elapsed " << elapsed << " s (limit 1)";
  r.pass = worst <= 0.01 && elapsed < 1.0;
  r.details = d.str();
  return r;
}

CriterionResult criterion_ihhl_first(const Fixture& fx) {
  CriterionResult r{2, "ihhl-first-eigenvalue"};
  const EigenDecomposition eig = dense_eigen(fx.h);
  const Complex own = closest(eig.eigenvalues, kQuotedFirst);

  std::ostringstream d;
  bool pass = true;
  const auto check = [&](const char* label, const IhhlOptions& opt, double time_limit) {
    const SingleRun run = run_ihhl(fx.h, fx.phi1_seed, opt);
    const double dev_own = comp_dev(run.result.eigenvalue, own);
    const double dev_quoted = comp_dev(run.result.eigenvalue, kQuotedFirst);
    const bool ok = run.result.trace.converged && run.result.trace.iterations_used <= 10 &&
                    dev_own <= 0.01 && dev_quoted <= 0.02 && run.elapsed_s < time_limit;
    d << label << ": E=" << fmt(run.result.eigenvalue) << " in "
      << run.result.trace.iterations_used << " iters, dev(own)=" << std::setprecision(3)
      << dev_own << ", dev(quoted)=" << dev_quoted << ", " << std::setprecision(3)
      << run.elapsed_s << " s; ";
    pass = pass && ok;
  };

  IhhlOptions classical;
  check("classical", classical, 1.0);
  IhhlOptions ideal = classical;
  ideal.solver = SolverBackend::hhl_ideal;
  check("hhl-ideal", ideal, 1.0);
  IhhlOptions circuit = classical;
  circuit.solver = SolverBackend::hhl_circuit;
  circuit.update = EnergyUpdate::rayleigh;
  circuit.clock_qubits = 8;
  check("hhl-circuit(n_c=8)", circuit, 60.0);

  r.pass = pass;
  r.details = d.str();
  return r;
}

CriterionResult criterion_ihhl_second(const Fixture& fx) {
  CriterionResult r{3, "ihhl-second-eigenvalue-deflated"};
  const EigenDecomposition eig = dense_eigen(fx.h);
  const Complex own = closest(eig.eigenvalues, kQuotedSecond);

  IhhlOptions opt;
  const IhhlResult first = ihhl_solve(fx.h, fx.phi1_seed, opt);
  DeflationSet defl;
  defl.eigenvectors.push_back(c_normalize(first.eigenvector));
  defl.eigenvalues.push_back(first.eigenvalue);

  std::ostringstream d;
  bool pass = first.trace.converged;
  for (const auto solver : {SolverBackend::classical, SolverBackend::hhl_ideal}) {
    IhhlOptions o = opt;
    o.solver = solver;
    const SingleRun run = run_ihhl(fx.h, fx.phi2_seed, o, defl);
    const double dev_own = comp_dev(run.result.eigenvalue, own);
    const double dev_quoted = comp_dev(run.result.eigenvalue, kQuotedSecond);
    const bool ok = run.result.trace.converged && run.result.trace.iterations_used <= 10 &&
                    dev_own <= 0.01 && dev_quoted <= 0.02;
    d << to_string(solver) << ": E=" << fmt(run.result.eigenvalue) << " in "
      << run.result.trace.iterations_used << " iters, dev(own)=" << std::setprecision(3)
      << dev_own << ", dev(quoted)=" << dev_quoted << "; ";
    pass = pass && ok;
  }

  r.pass = pass;
  r.details = d.str();
  return r;
}

CriterionResult criterion_full_spectrum(const Fixture& fx) {
  CriterionResult r{4, "full-spectrum-sweep"};
  const EigenDecomposition eig = dense_eigen(fx.h);

  IhhlOptions opt;
  const SpectrumResult spec = full_spectrum(fx.h, {fx.phi1_seed, fx.phi2_seed}, opt);

  double worst = 0.0;
  for (size_t k = 0; k < spec.entries.size(); ++k)
    worst = std::max(worst, comp_dev(spec.entries[k].eigenvalue,
                                     eig.eigenvalues[static_cast<Eigen::Index>(k)]));

  std::ostringstream d;
  d << (spec.all_converged ? "all 8 converged" : "non-convergence")
    << ", max per-component deviation vs dense " << std::setprecision(3) << worst
    << " MeV (limit 0.01)";
  r.pass = spec.all_converged && spec.entries.size() == 8 && worst <= 0.01;
  r.details = d.str();
  return r;
}

CriterionResult criterion_backend_equivalence(const Fixture& fx) {
  CriterionResult r{5, "backend-equivalence"};
  const std::vector<ComplexVector> seeds = {fx.phi1_seed, fx.phi2_seed};

  IhhlOptions classical;
  const SpectrumResult s_cl = full_spectrum(fx.h, seeds, classical);

  IhhlOptions ideal = classical;
  ideal.solver = SolverBackend::hhl_ideal;
  const SpectrumResult s_id = full_spectrum(fx.h, seeds, ideal);

  IhhlOptions circuit = classical;
  circuit.solver = SolverBackend::hhl_circuit;
  circuit.update = EnergyUpdate::rayleigh;
  circuit.clock_qubits = 10;
  const SpectrumResult s_ci = full_spectrum(fx.h, seeds, circuit);

  double dev_id = 0.0, dev_ci = 0.0;
  for (size_t k = 0; k < s_cl.entries.size(); ++k) {
    dev_id = std::max(dev_id,
                      std::abs(s_id.entries[k].eigenvalue - s_cl.entries[k].eigenvalue));
    dev_ci = std::max(dev_ci,
                      std::abs(s_ci.entries[k].eigenvalue - s_cl.entries[k].eigenvalue));
  }

  std::ostringstream d;
  d << "classical vs ideal max |diff| " << std::setprecision(3) << dev_id
    << " (limit 1e-6); vs circuit(n_c=10) " << dev_ci << " (limit 1e-3)";
  r.pass = s_cl.all_converged && s_id.all_converged && s_ci.all_converged &&
           dev_id <= 1e-6 && dev_ci <= 1e-3;
  r.details = d.str();
  return r;
}

CriterionResult criterion_physics_pipeline() {
  CriterionResult r{6, "physics-pipeline"};
  const RadialBasis basis;
  const ChannelSpec channel;
  const PotentialParams pot;
  const ScalingAngle theta = ScalingAngle::from_degrees(20.0);

  const ScaledHamiltonian full = build_hamiltonian(1.0, theta, basis, channel, pot);
  const EigenDecomposition full_eig = dense_eigen(full.matrix);
  const Complex full_res = pick_resonance(full_eig.eigenvalues, kReferenceResonance);
  const double dev_re = std::abs(full_res.real() - kReferenceResonance.real());
  const double dev_im = std::abs(full_res.imag() - kReferenceResonance.imag());

  const auto lambdas = uniform_lambdas(1.45, 1.75, 8);
  const auto points = solve_training_set(lambdas, basis, channel, pot);
  const ECSubspace sub = build_subspace(points);
  const ECMatrices ec = project_target(sub, 1.0, theta, basis, channel, pot);
  const EigenDecomposition ec_eig = generalized_eigen(ec.h_ec, ec.n_ec);
  const Complex ec_res = pick_resonance(ec_eig.eigenvalues, kReferenceResonance);
  const double rel = std::abs(ec_res - full_res) / std::abs(full_res);

  std::ostringstream d;
  d << "full-basis resonance " << fmt(full_res) << " (devs " << std::setprecision(3)
    << dev_re << "/" << dev_im << " MeV, limit 0.5); EC estimate " << fmt(ec_res)
    << ", relative diff " << rel << " (limit 0.01)";
  r.pass = dev_re <= 0.5 && dev_im <= 0.5 && rel <= 0.01;
  r.details = d.str();
  return r;
}

CriterionResult criterion_ec_variational() {
  CriterionResult r{7, "ec-variational"};
  const RadialBasis basis;
  const ChannelSpec channel;
  const PotentialParams pot;

  const auto lambdas = uniform_lambdas(1.45, 1.75, 8);
  const auto points = solve_training_set(lambdas, basis, channel, pot);
  const ECSubspace sub = build_subspace(points);
  const RealMatrix b = sub.basis_vectors.real();

  bool pass = sub.dimension == 8;
  double worst_gap = 0.0;       // most negative E_ec - E_full
  double worst_increase = 0.0;  // most positive err(d+1) - err(d)
  for (int s = 0; s < 20; ++s) {
    const double lam = 1.0 + 0.8 * s / 19.0;
    const ScaledHamiltonian h = build_hamiltonian(lam, ScalingAngle(0.0), basis, channel, pot);
    const RealMatrix hr = h.matrix.real();
    const double e_full = Eigen::SelfAdjointEigenSolver<RealMatrix>(hr).eigenvalues()(0);
    const RealMatrix m = b.transpose() * hr * b;
    const double scale = std::abs(e_full) + 1.0;

    double prev_err = 0.0;
    for (int dim = 1; dim <= sub.dimension; ++dim) {
      const double e_ec =
          Eigen::SelfAdjointEigenSolver<RealMatrix>(m.topLeftCorner(dim, dim)).eigenvalues()(0);
      const double err = e_ec - e_full;
      worst_gap = std::min(worst_gap, err);
      if (err < -1e-10 * scale) pass = false;
      if (dim > 1) {
        worst_increase = std::max(worst_increase, err - prev_err);
        if (err > prev_err + 1e-10 * scale) pass = false;
      }
      prev_err = err;
    }
  }

  std::ostringstream d;
  d << "20 lambda targets, dims 1-8: min(E_ec - E_full) = " << std::setprecision(3)
    << worst_gap << ", max error increase with dim = " << worst_increase;
  r.pass = pass;
  r.details = d.str();
  return r;
}

CriterionResult criterion_hhl_battery(const Fixture& fx) {
  CriterionResult r{8, "hhl-unit-battery"};
  std::ostringstream d;
  bool pass = true;

  {  // dyadic QPE point mass: phase 5/16 on a one-qubit unitary
    ComplexMatrix u = ComplexMatrix::Identity(2, 2);
    u(1, 1) = std::exp(Complex(0.0, 2.0 * M_PI * 5.0 / 16.0));
    const RealVector probs = qpe(u, QuantumState::basis_state(1, 1), 4);
    const bool ok = probs(5) > 1.0 - 1e-10;
    d << "QPE point mass p(5)=" << std::setprecision(12) << probs(5) << "; ";
    pass = pass && ok;
  }

  {  // negative-eigenvalue inversion on an exactly representable spectrum
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = -1.0;
    RealVector b(2);
    b << 1.0, 1.0;
    HhlConfig cfg;
    cfg.clock_qubits = 3;
    cfg.evolution_time = M_PI / 2.0;
    const ComplexVector x = hhl_solve(a, b, cfg);
    const double err = (x - ComplexVector(Eigen::Vector2cd(1.0, -1.0))).norm();
    d << "diag(1,-1) inversion error " << std::setprecision(3) << err << "; ";
    pass = pass && err <= 1e-8;
  }

  {  // circuit-vs-classical fidelity on the first dilated fixture step
    ComplexVector phi = fx.phi1_seed / hermitian_norm(fx.phi1_seed);
    const Complex e0 = c_product(phi, fx.h * phi) / c_product(phi, phi);
    const DilatedSystem sys = dilate(build_c_operator(fx.h, e0, Complex(1.0, 0.0)), phi);
    const ComplexVector x_cl = linear_solve(sys.a_matrix, sys.rhs_real.cast<Complex>());
    HhlConfig cfg;
    cfg.clock_qubits = 8;
    const ComplexVector x_ci = hhl_solve(sys.a_matrix, sys.rhs_real, cfg);
    const double fid = std::abs(x_ci.dot(x_cl)) / (x_ci.norm() * x_cl.norm());
    d << "dilated-step fidelity " << std::setprecision(6) << fid << " (limit 0.99); ";
    pass = pass && fid >= 0.99;
  }

  {  // Pauli decompose/rebuild round trip on a random Hermitian 16x16
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    ComplexMatrix h(16, 16);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) h(i, j) = Complex(uni(rng), uni(rng));
    h = (h + h.adjoint()).eval();
    const ComplexMatrix back = pauli_rebuild(pauli_decompose(h), 4);
    const double err = (back - h).cwiseAbs().maxCoeff();
    d << "Pauli round-trip max error " << std::setprecision(3) << err << "; ";
    pass = pass && err <= 1e-12;
  }

  {  // Jordan-Wigner anticommutators on 3 modes
    const int n = 3;
    const auto op = [&](const std::vector<PauliTerm>& terms) {
      return pauli_rebuild(terms, n);
    };
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const ComplexMatrix ai = op(jordan_wigner_ladder(i, n, false));
        const ComplexMatrix aj = op(jordan_wigner_ladder(j, n, false));
        const ComplexMatrix ajd = op(jordan_wigner_ladder(j, n, true));
        ComplexMatrix want = ComplexMatrix::Zero(1 << n, 1 << n);
        if (i == j) want.setIdentity();
        err = std::max(err, (ai * ajd + ajd * ai - want).cwiseAbs().maxCoeff());
        err = std::max(err, (ai * aj + aj * ai).cwiseAbs().maxCoeff());
      }
    }
    d << "JW anticommutator max deviation " << std::setprecision(3) << err;
    pass = pass && err <= 1e-12;
  }

  r.pass = pass;
  r.details = d.str();
  return r;
}

}  // namespace

Report run_all(const std::string& fixture_dir, const std::vector<int>& which) {
  const auto wants = [&which](int id) {
    return which.empty() || std::find(which.begin(), which.end(), id) != which.end();
  };

  const auto t_start = std::chrono::steady_clock::now();
  Report report;

  bool checksums_ok = true;
  for (const auto& f : kFixtureFiles) {
    const std::string path = fixture_path(fixture_dir, f.name);
    if (!std::filesystem::exists(path)) throw io_error("fixture not found: " + path);
    ChecksumRecord rec;
    rec.file = f.name;
    rec.expected = hex64(f.checksum);
    const std::uint64_t computed = fnv1a64(read_file(path));
    rec.computed = hex64(computed);
    rec.match = computed == f.checksum;
    checksums_ok = checksums_ok && rec.match;
    report.checksums.push_back(std::move(rec));
  }

  const Fixture fx = load_fixture(fixture_dir);

  using Body = std::function<CriterionResult()>;
  const std::vector<std::pair<int, Body>> bodies = {
      {1, [&] { return criterion_fixture_diag(fx); }},
      {2, [&] { return criterion_ihhl_first(fx); }},
      {3, [&] { return criterion_ihhl_second(fx); }},
      {4, [&] { return criterion_full_spectrum(fx); }},
      {5, [&] { return criterion_backend_equivalence(fx); }},
      {6, [] { return criterion_physics_pipeline(); }},
      {7, [] { return criterion_ec_variational(); }},
      {8, [&] { return criterion_hhl_battery(fx); }},
  };

  bool all = checksums_ok;
  for (const auto& [id, body] : bodies) {
    if (!wants(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult res;
    try {
      res = body();
    } catch (const std::exception& e) {
      res.id = id;
      res.name = "criterion-" + std::to_string(id);
      res.pass = false;
      res.details = std::string("exception: ") + e.what();
    }
    res.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    all = all && res.pass;
    report.criteria.push_back(std::move(res));
  }

  report.total_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start).count();

  if (wants(9)) {
    CriterionResult r{9, "headless-runtime"};
    r.pass = report.total_ms < 5.0 * 60.0 * 1000.0;
    std::ostringstream d;
    d << "suite completed in " << std::setprecision(4) << report.total_ms / 1000.0
      << " s (limit 300)";
    r.details = d.str();
    all = all && r.pass;
    report.criteria.push_back(std::move(r));
  }

  report.all_pass = all;
  return report;
}

std::string report_to_json(const Report& report) {
  nlohmann::json j;
  j["all_pass"] = report.all_pass;
  j["total_ms"] = report.total_ms;
  j["checksums"] = nlohmann::json::array();
  for (const auto& c : report.checksums)
    j["checksums"].push_back({{"file", c.file},
                              {"computed", c.computed},
                              {"expected", c.expected},
                              {"match", c.match}});
  j["criteria"] = nlohmann::json::array();
  for (const auto& c : report.criteria)
    j["criteria"].push_back({{"id", c.id},
                             {"name", c.name},
                             {"pass", c.pass},
                             {"details", c.details},
                             {"elapsed_ms", c.elapsed_ms}});
  return j.dump(1) + "\n";
}

std::string resolve_fixture_dir() {
  if (const char* env = std::getenv("QRES_FIXTURES")) return env;
#ifdef QRES_DEFAULT_FIXTURE_DIR
  if (std::filesystem::exists(QRES_DEFAULT_FIXTURE_DIR)) return QRES_DEFAULT_FIXTURE_DIR;
#endif
  return "./fixtures";
}

}  // namespace qres::verify
