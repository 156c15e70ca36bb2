#ifndef BMOBMOJN_SERIALIZE_HPP
#define BMOBMOJN_SERIALIZE_HPP

#include <json.hpp>

#include "bmojn/piecewise.hpp"

namespace bmojn {

// JSON descriptions used by the CLI for round-tripping constructed
// functions: {type, segments} for piecewise, {type, depth, pieces} for
// dyadic step functions (plus dense leaves when small enough to print).

nlohmann::json to_json(const PiecewiseFunction& phi);
nlohmann::json to_json(const DyadicStepFunction& phi);

PiecewiseFunction piecewise_from_json(const nlohmann::json& j);
DyadicStepFunction dyadic_from_json(const nlohmann::json& j);

} // namespace bmojn

#endif
