#include "steercert/io.hpp"

#include <fstream>
#include <sstream>

#include "steercert/error.hpp"

namespace steercert::io {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError("malformed JSON: " + what);
}

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const std::vector<cplx>& v) {
  json out = json::array();
  for (const cplx& z : v) out.push_back(to_json(z));
  return out;
}

json to_json(const Povm& p) {
  json out = json::array();
  for (const auto& e : p.elements()) out.push_back(to_json(e));
  return out;
}

json to_json(const CorrelationTable& t) {
  return json{{"d", t.d()}, {"nx", t.nx()}, {"ny", t.ny()}, {"p", t.flat()}};
}

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(), "complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

ComplexMatrix matrix_from_json(const json& j) {
  require(j.is_array() && !j.empty(), "matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  require(j[0].is_array() && !j[0].empty(), "matrix rows must be non-empty arrays");
  const std::size_t cols = j[0].size();
  std::vector<cplx> entries;
  entries.reserve(rows * cols);
  for (const auto& row : j) {
    require(row.is_array() && row.size() == cols, "matrix rows must have equal length");
    for (const auto& z : row) entries.push_back(complex_from_json(z));
  }
  return ComplexMatrix(rows, cols, std::move(entries));
}

std::vector<cplx> vector_from_json(const json& j) {
  require(j.is_array(), "vector must be an array");
  std::vector<cplx> v;
  v.reserve(j.size());
  for (const auto& z : j) v.push_back(complex_from_json(z));
  return v;
}

Povm povm_from_json(const json& j) {
  const json& elems = j.is_object() ? j.at("elements") : j;
  require(elems.is_array() && !elems.empty(), "POVM must be a non-empty array of matrices");
  std::vector<ComplexMatrix> out;
  for (const auto& e : elems) out.push_back(matrix_from_json(e));
  return Povm(std::move(out));
}

CorrelationTable table_from_json(const json& j) {
  require(j.is_object(), "correlation table must be an object");
  return CorrelationTable(j.at("d").get<std::size_t>(), j.at("nx").get<std::size_t>(), j.at("ny").get<std::size_t>(),
                          j.at("p").get<std::vector<double>>());
}

json realization_to_json(const Realization& r, const SchmidtVector& sv) {
  json bob = json::array();
  for (const auto& g : r.bob) {
    json ops = json::array();
    for (const auto& b : g.operators()) ops.push_back(to_json(b));
    bob.push_back(std::move(ops));
  }
  json alice = json::array();
  for (const auto& a : r.alice) alice.push_back(to_json(a));
  return json{{"d", r.d()},
              {"alpha", sv.alpha()},
              {"factor_dims", r.state.factor_dims()},
              {"state", to_json(r.state.vec())},
              {"alice_observables", std::move(alice)},
              {"bob_observables", std::move(bob)}};
}

RealizationFile realization_from_json(const json& j) {
  require(j.is_object(), "realization must be an object");
  for (const char* key : {"d", "alpha", "factor_dims", "state", "alice_observables", "bob_observables"}) {
    require(j.contains(key), std::string("realization is missing field '") + key + "'");
  }
  RealizationFile f;
  const auto d = j.at("d").get<std::size_t>();
  f.alpha = SchmidtVector(j.at("alpha").get<std::vector<double>>());
  if (f.alpha.d() != d) throw DomainError("realization: alpha length does not match d");
  auto dims = j.at("factor_dims").get<std::vector<std::size_t>>();
  require(dims.size() == 3, "factor_dims must list (A, B, E)");
  f.realization.state = Ket(vector_from_json(j.at("state")), dims, 1e-6);
  for (const auto& a : j.at("alice_observables")) f.realization.alice.push_back(matrix_from_json(a));
  for (const auto& g : j.at("bob_observables")) {
    require(g.is_array() && g.size() == d, "each Bob observable must list d operators B_0..B_{d-1}");
    std::vector<ComplexMatrix> ops;
    for (const auto& b : g) ops.push_back(matrix_from_json(b));
    f.realization.bob.emplace_back(std::move(ops), 1e-8);
  }
  validate_realization(f.realization, 1e-8);
  return f;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path + "'");
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw DomainError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace steercert::io
