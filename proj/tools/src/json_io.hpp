#pragma once

// JSON encodings of library values.  Complex numbers are [re, im] pairs and
// matrices are row-major nested arrays.

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "eqrh/atheta.hpp"
#include "eqrh/bqtau.hpp"

namespace eqrh::cli {

using Json = nlohmann::json;

/// Category parameters used when a document does not carry its own.
struct Defaults {
  Complex tau{1.0, -1.0};
  double theta = 0.0;
  double offset = 0.0;
};

Json to_json(Complex z);
Json to_json(const CMat& m);
Json to_json(const laurent::PolyMat& p);
Json to_json(const bq::BqObject& obj);
Json to_json(const bq::NormalForm& nf);
Json to_json(const bq::RepZ2& rep);
Json to_json(const bq::K0ClassB& c);
Json to_json(const atheta::AElem& x);
Json to_json(const atheta::FrVectObj& f);
Json to_json(const atheta::DivisorXtau& d);
Json to_json(const numkit::FunctionDiagnostics& d);

Complex complex_from(const Json& j, const char* what = "complex number");
CMat matrix_from(const Json& j, const char* what = "matrix");
laurent::PolyMat polymat_from(const Json& j, int dim, laurent::Params params);
atheta::AElem aelem_from(const Json& j, double theta);
atheta::FrVectObj frvect_from(const Json& j, const Defaults& d);
atheta::DivisorXtau divisor_from(const Json& j, const Defaults& d, const Tolerances& tol);
bq::K0ClassB k0_from(const Json& j, const Defaults& d, const Tolerances& tol);

/// A report's "result" member, or the document itself.
const Json& payload(const Json& j);

/// "A0" selects a normal form, "A" an object, "M1" a representation.
using AnyObject = std::variant<bq::NormalForm, bq::BqObject, bq::RepZ2>;
AnyObject object_from(const Json& j, const Defaults& d, const Tolerances& tol);

Complex tau_of(const Json& j, const Defaults& d);
double theta_of(const Json& j, const Defaults& d);
double offset_of(const Json& j, const Defaults& d);

/// Parses text, converting syntax errors to ParseError with line and column.
Json parse_document(const std::string& text, const std::string& origin);

}  // namespace eqrh::cli
