#include "qres/json_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qres {

namespace {

using nlohmann::json;

json matrix_to_json_obj(const ComplexMatrix& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  std::vector<double> re, im;
  re.reserve(m.size());
  im.reserve(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

ComplexMatrix matrix_from_json_obj(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  if (rows <= 0 || cols <= 0) throw io_error("matrix json: nonpositive dimensions");
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(re.size()) != rows * cols ||
      static_cast<Eigen::Index>(im.size()) != rows * cols)
    throw io_error("matrix json: entry count does not match rows*cols");
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto k = r * cols + c;
      m(r, c) = Complex(re[k], im[k]);
    }
  return m;
}

}  // namespace

std::string matrix_to_json(const ComplexMatrix& m) {
  return matrix_to_json_obj(m).dump(1) + "\n";
}

ComplexMatrix matrix_from_json(const std::string& text) {
  try {
    return matrix_from_json_obj(json::parse(text));
  } catch (const json::exception& e) {
    throw io_error(std::string("matrix json parse: ") + e.what());
  }
}

std::string vector_to_json(const ComplexVector& v) { return matrix_to_json(v); }

ComplexVector vector_from_json(const std::string& text) {
  const ComplexMatrix m = matrix_from_json(text);
  if (m.cols() != 1) throw io_error("vector json: expected a single column");
  return m.col(0);
}

void save_matrix(const std::string& path, const ComplexMatrix& m) {
  write_file(path, matrix_to_json(m));
}

ComplexMatrix load_matrix(const std::string& path) {
  return matrix_from_json(read_file(path));
}

void save_vector(const std::string& path, const ComplexVector& v) {
  write_file(path, vector_to_json(v));
}

ComplexVector load_vector(const std::string& path) {
  return vector_from_json(read_file(path));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write file: " + path);
  out << content;
  if (!out) throw io_error("write failed: " + path);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace qres
