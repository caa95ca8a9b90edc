#include "liblab/serialization.hpp"

#include "liblab/errors.hpp"

namespace liblab {

nlohmann::json matrix_to_json(const ComplexMatrix& a) {
  nlohmann::json flat = nlohmann::json::array();
  for (const auto& z : a.entries()) {
    flat.push_back(z.real());
    flat.push_back(z.imag());
  }
  return {{"n", a.n()}, {"entries", std::move(flat)}};
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries") || !j["entries"].is_array())
    throw ShapeError("matrix json: expected {n, entries}");
  auto n = j["n"].get<std::size_t>();
  const auto& e = j["entries"];
  if (e.size() != 2 * n * n) throw ShapeError("matrix json: entries length is not 2*n*n");
  std::vector<cplx> v(n * n);
  for (std::size_t k = 0; k < n * n; ++k) v[k] = {e[2 * k].get<double>(), e[2 * k + 1].get<double>()};
  return ComplexMatrix(n, std::move(v));
}

}  // namespace liblab
