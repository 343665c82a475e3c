#include "qres/config.hpp"

#include <cstdlib>
#include <iomanip>
#include <sstream>

#include "qres/json_io.hpp"

namespace qres {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
  size_t pos = 0;
  double out;
  try {
    out = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw io_error("config: bad numeric value for " + key + ": '" + value + "'");
  }
  if (pos != value.size())
    throw io_error("config: bad numeric value for " + key + ": '" + value + "'");
  return out;
}

int to_int(const std::string& key, const std::string& value) {
  size_t pos = 0;
  int out;
  try {
    out = std::stoi(value, &pos);
  } catch (const std::exception&) {
    throw io_error("config: bad integer value for " + key + ": '" + value + "'");
  }
  if (pos != value.size())
    throw io_error("config: bad integer value for " + key + ": '" + value + "'");
  return out;
}

void apply(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "potential.v0") cfg.potential.v0 = to_double(key, value);
  else if (key == "potential.a") cfg.potential.a = to_double(key, value);
  else if (key == "channel.l") cfg.channel.L = to_int(key, value);
  else if (key == "channel.hbar2_over_2mu") cfg.channel.hbar2_over_2mu = to_double(key, value);
  else if (key == "channel.coulomb_strength") cfg.channel.coulomb_strength = to_double(key, value);
  else if (key == "basis.size") cfg.basis.size = to_int(key, value);
  else if (key == "basis.b0") cfg.basis.b0 = to_double(key, value);
  else if (key == "basis.q") cfg.basis.q = to_double(key, value);
  else if (key == "training.lambda_min") cfg.lambda_min = to_double(key, value);
  else if (key == "training.lambda_max") cfg.lambda_max = to_double(key, value);
  else if (key == "training.count") cfg.training_count = to_int(key, value);
  else if (key == "target.lambda") cfg.target_lambda = to_double(key, value);
  else if (key == "target.theta_deg") cfg.theta_deg = to_double(key, value);
  else if (key == "ihhl.epsilon") cfg.ihhl.epsilon = to_double(key, value);
  else if (key == "ihhl.beta_re") cfg.ihhl.beta.real(to_double(key, value));
  else if (key == "ihhl.beta_im") cfg.ihhl.beta.imag(to_double(key, value));
  else if (key == "ihhl.max_iter") cfg.ihhl.max_iter = to_int(key, value);
  else if (key == "ihhl.solver") cfg.ihhl.solver = parse_solver(value);
  else if (key == "ihhl.update") {
    cfg.ihhl.update = parse_update(value);
    cfg.ihhl_update_set = true;
  }
  else if (key == "ihhl.clock_qubits") cfg.ihhl.clock_qubits = to_int(key, value);
  else if (key == "ihhl.seed") cfg.ihhl.seed = static_cast<uint64_t>(to_int(key, value));
  else if (key == "ec.reference_re") cfg.ec_reference.real(to_double(key, value));
  else if (key == "ec.reference_im") cfg.ec_reference.imag(to_double(key, value));
  else throw io_error("config: unknown key '" + key + "'");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw io_error("config: line " + std::to_string(lineno) + " is not key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw io_error("config: line " + std::to_string(lineno) + " has an empty key or value");
    try {
      apply(cfg, key, value);
    } catch (const std::invalid_argument& e) {
      throw io_error(std::string("config: ") + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string config_to_string(const RunConfig& cfg) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "potential.v0 = " << cfg.potential.v0 << "\n";
  out << "potential.a = " << cfg.potential.a << "\n";
  out << "channel.l = " << cfg.channel.L << "\n";
  out << "channel.hbar2_over_2mu = " << cfg.channel.hbar2_over_2mu << "\n";
  out << "channel.coulomb_strength = " << cfg.channel.coulomb_strength << "\n";
  out << "basis.size = " << cfg.basis.size << "\n";
  out << "basis.b0 = " << cfg.basis.b0 << "\n";
  out << "basis.q = " << cfg.basis.q << "\n";
  out << "training.lambda_min = " << cfg.lambda_min << "\n";
  out << "training.lambda_max = " << cfg.lambda_max << "\n";
  out << "training.count = " << cfg.training_count << "\n";
  out << "target.lambda = " << cfg.target_lambda << "\n";
  out << "target.theta_deg = " << cfg.theta_deg << "\n";
  out << "ihhl.epsilon = " << cfg.ihhl.epsilon << "\n";
  out << "ihhl.beta_re = " << cfg.ihhl.beta.real() << "\n";
  out << "ihhl.beta_im = " << cfg.ihhl.beta.imag() << "\n";
  out << "ihhl.max_iter = " << cfg.ihhl.max_iter << "\n";
  out << "ihhl.solver = " << to_string(cfg.ihhl.solver) << "\n";
  out << "ihhl.update = " << to_string(cfg.ihhl.update) << "\n";
  out << "ihhl.clock_qubits = " << cfg.ihhl.clock_qubits << "\n";
  out << "ihhl.seed = " << cfg.ihhl.seed << "\n";
  out << "ec.reference_re = " << cfg.ec_reference.real() << "\n";
  out << "ec.reference_im = " << cfg.ec_reference.imag() << "\n";
  return out.str();
}

std::string default_config_path() {
  const char* env = std::getenv("QRES_CONFIG");
  return env ? std::string(env) : std::string();
}

}  // namespace qres
