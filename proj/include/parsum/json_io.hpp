#pragma once

// JSON schemas for the CLI: matrices (complex entries as a bare number or
// an [re, im] pair), charges, functionals (density matrix), kernels (block
// map), plus a serializer that prints every floating-point number with 17
// significant digits so reports are byte-identical across runs and
// platforms.

#include "parsum/charges.hpp"
#include "parsum/forms.hpp"
#include "parsum/functionals.hpp"
#include "parsum/kernels.hpp"

#include "json.hpp"

#include <string>

namespace parsum {

// Malformed input: missing keys, wrong types, ragged rows, unparsable text.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses text as JSON; wraps parse failures in SchemaError.
nlohmann::ordered_json parse_json_text(const std::string& text);
nlohmann::ordered_json load_json_file(const std::string& path);

// {"dim": n, "entries": [[e, ...], ...]} with e a number or [re, im].
Matrix read_matrix(const nlohmann::ordered_json& j);
nlohmann::ordered_json write_matrix(const Matrix& m);

// {"atoms": [...], "weights": [...]}
Charge read_charge(const nlohmann::ordered_json& j);
nlohmann::ordered_json write_charge(const Charge& c);

// {"d": n, "rho": [[e, ...], ...]}
MatrixFunctional read_functional(const nlohmann::ordered_json& j,
                                 double psd_tol = kDefaultPsdTol);
nlohmann::ordered_json write_functional(const MatrixFunctional& w);

// {"points": [...], "fiber_dim": d, "blocks": {"s,t": [[e, ...], ...]}}
OperatorKernel read_kernel(const nlohmann::ordered_json& j,
                           double psd_tol = kDefaultPsdTol);
nlohmann::ordered_json write_kernel(const OperatorKernel& k);

// Compact serialization with doubles formatted as %.17g. Throws on
// non-finite numbers (reports never contain them).
std::string dump_json(const nlohmann::ordered_json& j);

}  // namespace parsum
