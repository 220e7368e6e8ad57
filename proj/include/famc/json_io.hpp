#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "famc/filter.hpp"
#include "famc/invariant.hpp"
#include "famc/kernel.hpp"
#include "famc/measure.hpp"
#include "famc/operator.hpp"
#include "famc/set_expr.hpp"

namespace famc {

using Json = nlohmann::ordered_json;

// The ground and the declared filters a JSON document refers to by id.
struct JsonContext {
  GroundSpace ground;
  std::map<std::string, FilterFunctional> filters;

  const FilterFunctional& filter(const std::string& id, const std::string& where) const;
};

Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j, const std::string& where);

Json ground_to_json(const GroundSpace& g);
GroundSpace ground_from_json(const Json& j, const std::string& where);

// {"op":"union","args":[...]}; leaves are interval, points, residue, empty, full.
Json set_to_json(const SetExpr& e);
SetExpr set_from_json(const Json& j, const GroundSpace& g, const std::string& where);

// {"id":"eta0plus","tails":{"family":"left-of-point","point":"0"}}
Json filter_to_json(const FilterFunctional& f);
FilterFunctional filter_from_json(const Json& j, const GroundSpace& g, const std::string& where);

// {"atoms":[["0","1/2"]],"pfa":[["eta0plus","1/2"]]}
Json measure_to_json(const Measure& mu);
Measure measure_from_json(const Json& j, const JsonContext& ctx, const std::string& where);

// Rule values: {"kind":"constant","measure":...}, {"kind":"diagonal","coef":...},
// {"kind":"point","target":...,"coef":...}, {"kind":"shift","offset":n,"coef":...}
// and {"kind":"sum","terms":[...]} for rows with several terms.
Json row_to_json(const Row& row);
Row row_from_json(const Json& j, const JsonContext& ctx, const std::string& where);
Json kernel_to_json(const Kernel& k);
// "ground" is optional inside a document that already fixes the ground.
Kernel kernel_from_json(const Json& j, const JsonContext& ctx, const std::string& where);

Json generator_to_json(const Generator& g);
Generator generator_from_json(const Json& j, const JsonContext& ctx, const std::string& where);

Json trace_to_json(const NormTrace& t);
Json h_verdict_to_json(const HVerdict& v);
Json range_report_to_json(const RangeReport& r);
Json invariant_report_to_json(const InvariantReport& r);
Json verdict_to_json(const Verdict& v);

// Helpers for strict object parsing with field paths in errors.
const Json& json_field(const Json& j, const char* key, const std::string& where);
std::string json_string(const Json& j, const std::string& where);

}  // namespace famc
