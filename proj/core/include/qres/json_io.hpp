#pragma once

#include <cstdint>
#include <string>

#include "qres/linalg.hpp"

namespace qres {

// Schema: {"rows":N,"cols":M,"re":[...],"im":[...]} with row-major entry
// order. Vectors are N x 1 matrices. Doubles round-trip losslessly (shortest
// representation that reparses to the same bits).
std::string matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const std::string& text);

std::string vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const std::string& text);

void save_matrix(const std::string& path, const ComplexMatrix& m);
ComplexMatrix load_matrix(const std::string& path);
void save_vector(const std::string& path, const ComplexVector& v);
ComplexVector load_vector(const std::string& path);

std::string read_file(const std::string& path);    // io_error when missing
void write_file(const std::string& path, const std::string& content);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace qres
