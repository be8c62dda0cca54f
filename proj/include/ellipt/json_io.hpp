#pragma once

#include <string>

#include "ellipt/applications.hpp"
#include "ellipt/ellipse.hpp"

namespace ellipt {

/// Thrown on malformed input; carries 1-based line/column of the offence
/// when it came from the JSON parser.
struct JsonInputError : std::runtime_error {
    JsonInputError(const std::string& msg, int line, int column)
        : std::runtime_error(msg), line(line), column(column) {}
    explicit JsonInputError(const std::string& msg) : std::runtime_error(msg) {}
    int line = 0;
    int column = 0;
};

/// {"dim": d, "ellipses": [{"a": [...], "b": [...]}, ...]}
EllipticPolytope read_ellipse_set(const std::string& text);
EllipticPolytope read_ellipse_set_file(const std::string& path);
std::string write_ellipse_set(const EllipticPolytope& p, int indent = 2);

/// {"matrices": [[[row], [row], ...], ...]}
MatrixFamily read_matrix_family(const std::string& text);
MatrixFamily read_matrix_family_file(const std::string& path);
std::string write_matrix_family(const MatrixFamily& fam, int indent = 2);

}  // namespace ellipt
