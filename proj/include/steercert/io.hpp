#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "steercert/complex_matrix.hpp"
#include "steercert/error.hpp"
#include "steercert/ket.hpp"
#include "steercert/measurements.hpp"
#include "steercert/states.hpp"

namespace steercert::io {

using json = nlohmann::json;

// Complex numbers are [re, im]; matrices are row-major nested arrays of them.
json to_json(cplx z);
json to_json(const ComplexMatrix& m);
json to_json(const std::vector<cplx>& v);
json to_json(const Povm& p);
json to_json(const CorrelationTable& t);

cplx complex_from_json(const json& j);
ComplexMatrix matrix_from_json(const json& j);
std::vector<cplx> vector_from_json(const json& j);
Povm povm_from_json(const json& j);
CorrelationTable table_from_json(const json& j);

// {d, alpha, factor_dims, state, alice_observables, bob_observables}; each Bob
// observable is the list B_0..B_{d-1}.
json realization_to_json(const Realization& r, const SchmidtVector& sv);

struct RealizationFile {
  SchmidtVector alpha = SchmidtVector::uniform(2);
  Realization realization;
};

RealizationFile realization_from_json(const json& j);

// File could not be opened or read.
class IoError : public Error {
 public:
  using Error::Error;
};

// Throws IoError when the file is unreadable and DomainError when it is not JSON.
json read_json_file(const std::string& path);

}  // namespace steercert::io
