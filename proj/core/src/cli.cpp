#include "qres/cli.hpp"

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qres/config.hpp"
#include "qres/ec.hpp"
#include "qres/ihhl.hpp"
#include "qres/json_io.hpp"
#include "qres/physics.hpp"
#include "qres/verify.hpp"

namespace qres::cli {

namespace {

namespace fs = std::filesystem;

nlohmann::json parse_json(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw io_error(what + ": " + e.what());
  }
}

nlohmann::json matrix_obj(const ComplexMatrix& m) {
  return nlohmann::json::parse(matrix_to_json(m));
}

ComplexMatrix matrix_from_obj(const nlohmann::json& j, const std::string& what) {
  if (!j.is_object()) throw io_error(what + ": expected a matrix object");
  return matrix_from_json(j.dump());
}

RunConfig effective_config(const std::string& config_flag) {
  std::string path = config_flag.empty() ? default_config_path() : config_flag;
  if (path.empty()) return RunConfig{};
  return load_config(path);
}

fs::path ensure_out_dir(const std::string& out) {
  fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io_error("cannot create output directory " + dir.string());
  return dir;
}

void emit(const fs::path& path, const std::string& content) {
  write_file(path.string(), content);
  std::cout << "wrote " << path.string() << "\n";
}

std::string spectrum_csv(const SpectrumResult& spec, const EigenDecomposition& dense) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "index,re_ihhl,im_ihhl,re_dense,im_dense,max_abs_diff,converged,iterations\n";
  for (size_t k = 0; k < spec.entries.size(); ++k) {
    const auto& e = spec.entries[k];
    const Complex d = dense.eigenvalues[static_cast<Eigen::Index>(k)];
    const double diff =
        std::max(std::abs(e.eigenvalue.real() - d.real()), std::abs(e.eigenvalue.imag() - d.imag()));
    out << k << ',' << e.eigenvalue.real() << ',' << e.eigenvalue.imag() << ',' << d.real()
        << ',' << d.imag() << ',' << diff << ',' << (e.converged ? 1 : 0) << ','
        << e.trace.iterations_used << '\n';
  }
  return out.str();
}

std::string spectrum_json(const SpectrumResult& spec, const EigenDecomposition& dense) {
  nlohmann::json j;
  j["all_converged"] = spec.all_converged;
  j["entries"] = nlohmann::json::array();
  for (size_t k = 0; k < spec.entries.size(); ++k) {
    const auto& e = spec.entries[k];
    const Complex d = dense.eigenvalues[static_cast<Eigen::Index>(k)];
    const double diff =
        std::max(std::abs(e.eigenvalue.real() - d.real()), std::abs(e.eigenvalue.imag() - d.imag()));
    j["entries"].push_back({{"index", k},
                            {"ihhl", {{"re", e.eigenvalue.real()}, {"im", e.eigenvalue.imag()}}},
                            {"dense", {{"re", d.real()}, {"im", d.imag()}}},
                            {"max_abs_diff", diff},
                            {"converged", e.converged},
                            {"iterations", e.trace.iterations_used}});
  }
  return j.dump(1) + "\n";
}

std::string dense_csv(const EigenDecomposition& eig) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "index,re,im,residual\n";
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k)
    out << k << ',' << eig.eigenvalues[k].real() << ',' << eig.eigenvalues[k].imag() << ','
        << eig.residual_norms[k] << '\n';
  return out.str();
}

std::string dense_json(const EigenDecomposition& eig) {
  nlohmann::json j;
  j["eigenvalues"] = nlohmann::json::array();
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k)
    j["eigenvalues"].push_back({{"re", eig.eigenvalues[k].real()},
                                {"im", eig.eigenvalues[k].imag()},
                                {"residual", eig.residual_norms[k]}});
  return j.dump(1) + "\n";
}

void print_complex_table(const std::string& header, const std::vector<Complex>& values) {
  std::cout << header << "\n" << std::setprecision(10);
  for (size_t k = 0; k < values.size(); ++k)
    std::cout << "  " << k << ": " << values[k].real() << (values[k].imag() < 0 ? " - " : " + ")
              << std::abs(values[k].imag()) << "i MeV\n";
}

// --- subcommand bodies -------------------------------------------------------

int cmd_train(const RunConfig& cfg, const std::string& out) {
  const auto lambdas = uniform_lambdas(cfg.lambda_min, cfg.lambda_max, cfg.training_count);
  const auto points = solve_training_set(lambdas, cfg.basis, cfg.channel, cfg.potential);
  const ECSubspace sub = build_subspace(points);

  std::cout << "lambda          ground energy (MeV)\n" << std::setprecision(10);
  for (const auto& p : points)
    std::cout << "  " << std::left << std::setw(14) << p.lambda << std::right << p.energy << "\n";
  for (const auto& w : sub.warnings) std::cout << "warning: " << w << "\n";

  ComplexMatrix wf(points.empty() ? 0 : points[0].wavefunction.size(),
                   static_cast<Eigen::Index>(points.size()));
  nlohmann::json j;
  j["points"] = nlohmann::json::array();
  for (size_t k = 0; k < points.size(); ++k) {
    wf.col(static_cast<Eigen::Index>(k)) = points[k].wavefunction;
    j["points"].push_back({{"lambda", points[k].lambda}, {"energy", points[k].energy}});
  }
  j["wavefunctions"] = matrix_obj(wf);
  j["subspace"] = matrix_obj(sub.basis_vectors);
  j["source_lambdas"] = sub.source_lambdas;
  j["warnings"] = sub.warnings;
  j["basis"] = {{"size", cfg.basis.size}, {"b0", cfg.basis.b0}, {"q", cfg.basis.q}};
  j["channel"] = {{"l", cfg.channel.L},
                  {"hbar2_over_2mu", cfg.channel.hbar2_over_2mu},
                  {"coulomb_strength", cfg.channel.coulomb_strength}};
  j["potential"] = {{"v0", cfg.potential.v0}, {"a", cfg.potential.a}};

  emit(ensure_out_dir(out) / "training_set.json", j.dump(1) + "\n");
  return 0;
}

int cmd_project(const RunConfig& cfg, const std::string& training_path, const std::string& out) {
  const nlohmann::json j = parse_json(read_file(training_path), "training file");
  for (const char* key : {"subspace", "source_lambdas", "basis", "channel", "potential"})
    if (!j.contains(key)) throw io_error(std::string("training file: missing field ") + key);

  const auto differs = [](double a, double b) { return a != b; };
  if (j["basis"]["size"].get<int>() != cfg.basis.size ||
      differs(j["basis"]["b0"].get<double>(), cfg.basis.b0) ||
      differs(j["basis"]["q"].get<double>(), cfg.basis.q) ||
      j["channel"]["l"].get<int>() != cfg.channel.L ||
      differs(j["channel"]["hbar2_over_2mu"].get<double>(), cfg.channel.hbar2_over_2mu) ||
      differs(j["channel"]["coulomb_strength"].get<double>(), cfg.channel.coulomb_strength) ||
      differs(j["potential"]["v0"].get<double>(), cfg.potential.v0) ||
      differs(j["potential"]["a"].get<double>(), cfg.potential.a))
    throw io_error("training file: stale basis metadata (regenerate with `train`)");

  ECSubspace sub;
  sub.basis_vectors = matrix_from_obj(j["subspace"], "training file subspace");
  sub.source_lambdas = j["source_lambdas"].get<std::vector<double>>();
  sub.dimension = static_cast<int>(sub.basis_vectors.cols());

  const ScalingAngle theta = ScalingAngle::from_degrees(cfg.theta_deg);
  const ECMatrices ec =
      project_target(sub, cfg.target_lambda, theta, cfg.basis, cfg.channel, cfg.potential);

  if (!is_complex_symmetric(ec.h_ec))
    std::cout << "warning: projected matrix is not complex symmetric\n";
  if (!check_angle(theta, cfg.ec_reference))
    std::cout << "warning: 2*theta = " << 2.0 * cfg.theta_deg
              << " deg does not uncover the reference resonance (needs 2*theta > "
              << std::atan2(std::abs(cfg.ec_reference.imag()), cfg.ec_reference.real()) * 180.0 /
                     M_PI
              << " deg)\n";

  const fs::path dir = ensure_out_dir(out);
  emit(dir / "h_ec.json", matrix_to_json(ec.h_ec));
  emit(dir / "n_ec.json", matrix_to_json(ec.n_ec));
  return 0;
}

int cmd_solve(const RunConfig& cfg, bool fixture, const std::string& matrix_path,
              const std::string& seeds_path, const std::string& out, const std::string& format) {
  ComplexMatrix h;
  std::vector<ComplexVector> seeds;
  if (fixture) {
    const std::string dir = verify::resolve_fixture_dir();
    for (const char* f : {"h_theta20.json", "phi1_seed.json", "phi2_seed.json"}) {
      const fs::path p = fs::path(dir) / f;
      if (!fs::exists(p)) throw io_error("fixture not found: " + p.string());
    }
    h = load_matrix((fs::path(dir) / "h_theta20.json").string());
    seeds.push_back(load_vector((fs::path(dir) / "phi1_seed.json").string()));
    seeds.push_back(load_vector((fs::path(dir) / "phi2_seed.json").string()));
  } else {
    if (matrix_path.empty()) throw io_error("solve: provide a matrix file or --fixture");
    h = load_matrix(matrix_path);
    if (!seeds_path.empty()) {
      const ComplexMatrix s = load_matrix(seeds_path);
      if (s.rows() != h.rows()) throw io_error("seeds file: row count does not match the matrix");
      for (Eigen::Index c = 0; c < s.cols(); ++c) seeds.push_back(s.col(c));
    }
  }
  if (h.rows() != h.cols() || h.rows() == 0) throw io_error("solve: matrix must be square");

  const SpectrumResult spec = full_spectrum(h, seeds, cfg.ihhl);
  const EigenDecomposition dense = dense_eigen(h);

  std::vector<Complex> shown;
  for (const auto& e : spec.entries) shown.push_back(e.eigenvalue);
  print_complex_table("ihhl spectrum:", shown);
  std::cout << (spec.all_converged ? "all solves converged\n" : "non-convergence detected\n");

  const fs::path dir = ensure_out_dir(out);
  if (format == "json") {
    emit(dir / "spectrum.json", spectrum_json(spec, dense));
    emit(dir / "dense_spectrum.json", dense_json(dense));
  } else {
    emit(dir / "spectrum.csv", spectrum_csv(spec, dense));
    emit(dir / "dense_spectrum.csv", dense_csv(dense));
  }
  for (size_t k = 0; k < spec.entries.size(); ++k) {
    const std::string stem = "trace_" + std::to_string(k + 1);
    if (format == "json")
      emit(dir / (stem + ".json"), trace_to_json(spec.entries[k].trace));
    else
      emit(dir / (stem + ".csv"), trace_to_csv(spec.entries[k].trace));
  }
  return spec.all_converged ? 0 : 3;
}

int cmd_spectrum(const std::string& matrix_path, const std::string& out,
                 const std::string& format) {
  const ComplexMatrix h = load_matrix(matrix_path);
  if (h.rows() != h.cols() || h.rows() == 0) throw io_error("spectrum: matrix must be square");
  const EigenDecomposition eig = dense_eigen(h);

  std::vector<Complex> shown(eig.eigenvalues.data(), eig.eigenvalues.data() + eig.eigenvalues.size());
  print_complex_table("dense spectrum:", shown);

  const fs::path dir = ensure_out_dir(out);
  if (format == "json")
    emit(dir / "dense_spectrum.json", dense_json(eig));
  else
    emit(dir / "dense_spectrum.csv", dense_csv(eig));
  return 0;
}

int cmd_verify(const std::string& fixtures_flag, const std::vector<int>& criteria,
               const std::string& out) {
  const std::string dir = fixtures_flag.empty() ? verify::resolve_fixture_dir() : fixtures_flag;
  const verify::Report report = verify::run_all(dir, criteria);
  const std::string text = verify::report_to_json(report);
  std::cout << text;
  if (!out.empty()) emit(ensure_out_dir(out) / "verify_report.json", text);
  return report.all_pass ? 0 : 3;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"nuclear resonance spectra: eigenvector continuation + iterative HHL"};
  app.require_subcommand(1);

  std::string config_path, out_dir, format = "csv";
  std::string solver_flag, update_flag;
  std::string training_path, matrix_path, seeds_path, fixtures_flag;
  std::vector<int> criteria;
  bool fixture = false;
  std::uint64_t seed = 0;

  app.add_option("--config", config_path, "config file path (default: $QRES_CONFIG)");

  auto* train = app.add_subcommand("train", "solve the training set and build the EC subspace");
  train->add_option("--out", out_dir, "output directory");

  auto* project =
      app.add_subcommand("project", "project the target Hamiltonian onto the EC subspace");
  project->add_option("training_file", training_path, "training_set.json from `train`")
      ->required();
  project->add_option("--out", out_dir, "output directory");

  auto* solve = app.add_subcommand("solve", "extract the full spectrum with iterative HHL");
  solve->add_option("matrix_file", matrix_path, "complex matrix JSON");
  solve->add_flag("--fixture", fixture, "use the shipped reference fixture and seeds");
  solve->add_option("--seeds", seeds_path, "seed vectors as matrix columns");
  auto* solver_opt = solve->add_option("--solver", solver_flag, "classical | hhl-ideal | hhl-circuit")
                         ->check(CLI::IsMember({"classical", "hhl-ideal", "hhl-circuit"}));
  auto* update_opt = solve->add_option("--update", update_flag, "shift-invert | rayleigh")
                         ->check(CLI::IsMember({"shift-invert", "rayleigh"}));
  auto* seed_opt = solve->add_option("--seed", seed, "random seed for unseeded indices");
  solve->add_option("--out", out_dir, "output directory");
  solve->add_option("--format", format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* spectrum = app.add_subcommand("spectrum", "direct dense diagonalization of a matrix file");
  spectrum->add_option("matrix_file", matrix_path, "complex matrix JSON")->required();
  spectrum->add_option("--out", out_dir, "output directory");
  spectrum->add_option("--format", format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite against the fixture");
  verify_cmd->add_option("--fixtures", fixtures_flag, "fixture directory (default: $QRES_FIXTURES)");
  verify_cmd->add_option("--criteria", criteria, "criterion ids to run (default: all)")
      ->delimiter(',');
  verify_cmd->add_option("--out", out_dir, "also write verify_report.json here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    RunConfig cfg = effective_config(config_path);
    if (*solver_opt) cfg.ihhl.solver = parse_solver(solver_flag);
    if (*update_opt) {
      cfg.ihhl.update = parse_update(update_flag);
      cfg.ihhl_update_set = true;
    }
    if (*seed_opt) cfg.ihhl.seed = seed;
    // Quantized circuit arithmetic defeats the shift-invert formula, so the
    // scale-invariant rule is the default there unless one was chosen.
    if (cfg.ihhl.solver == SolverBackend::hhl_circuit && !cfg.ihhl_update_set)
      cfg.ihhl.update = EnergyUpdate::rayleigh;

    if (train->parsed()) return cmd_train(cfg, out_dir);
    if (project->parsed()) return cmd_project(cfg, training_path, out_dir);
    if (solve->parsed())
      return cmd_solve(cfg, fixture, matrix_path, seeds_path, out_dir, format);
    if (spectrum->parsed()) return cmd_spectrum(matrix_path, out_dir, format);
    if (verify_cmd->parsed()) return cmd_verify(fixtures_flag, criteria, out_dir);
    return 1;
  } catch (const physics_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const quasi_null_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const convergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qres::cli
