#pragma once

#include <nlohmann/json.hpp>

#include "liblab/linalg.hpp"

namespace liblab {

/// {"n": n, "entries": [re, im, re, im, ...]} in row-major order.
nlohmann::json matrix_to_json(const ComplexMatrix& a);
/// Inverse of matrix_to_json; throws ShapeError on malformed input.
ComplexMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace liblab
