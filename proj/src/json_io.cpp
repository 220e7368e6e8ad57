#include "famc/json_io.hpp"

#include "famc/error.hpp"

namespace famc {

namespace {

// Re-raise library errors met while building a value as ParseErrors that
// name the offending field.
template <typename F>
auto at_field(const std::string& where, F&& build) -> decltype(build()) {
  try {
    return build();
  } catch (const ParseError& e) {
    if (!e.where().empty()) throw;
    throw ParseError(where, e.what());
  } catch (const Error& e) {
    throw ParseError(where, e.what());
  }
}

const Json& json_array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array");
  return j;
}

}  // namespace

const FilterFunctional& JsonContext::filter(const std::string& id, const std::string& where) const {
  auto it = filters.find(id);
  if (it == filters.end()) throw ParseError(where, "undeclared filter '" + id + "'");
  return it->second;
}

const Json& json_field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string json_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where, "expected a string");
  return j.get<std::string>();
}

Json rational_to_json(const Rational& r) { return format_rational(r); }

Rational rational_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(Integer(static_cast<long>(j.get<std::int64_t>())));
  return at_field(where, [&] { return parse_rational(json_string(j, where)); });
}

Json ground_to_json(const GroundSpace& g) {
  Json j;
  j["kind"] = std::string(ground_kind_name(g.kind()));
  j["label"] = g.label();
  if (g.is_finite()) {
    Json pts = Json::array();
    for (const auto& p : g.points()) pts.push_back(rational_to_json(p));
    j["points"] = std::move(pts);
  }
  return j;
}

GroundSpace ground_from_json(const Json& j, const std::string& where) {
  const auto kind = at_field(where + "/kind", [&] { return parse_ground_kind(json_string(json_field(j, "kind", where), where + "/kind")); });
  std::string label = j.contains("label") ? json_string(j["label"], where + "/label") : std::string();
  switch (kind) {
    case GroundKind::UnitRationals: return GroundSpace::unit_interval(label.empty() ? "I" : label);
    case GroundKind::Integers: return GroundSpace::integers(label.empty() ? "Z" : label);
    case GroundKind::FiniteLabeled: {
      std::vector<Rational> pts;
      const auto& arr = json_array(json_field(j, "points", where), where + "/points");
      for (std::size_t i = 0; i < arr.size(); ++i) pts.push_back(rational_from_json(arr[i], where + "/points/" + std::to_string(i)));
      return at_field(where, [&] { return GroundSpace::finite(label.empty() ? "F" : label, std::move(pts)); });
    }
  }
  throw ParseError(where, "unreachable ground kind");
}

Json set_to_json(const SetExpr& e) {
  Json j;
  switch (e.op()) {
    case SetExpr::Op::Empty: j["op"] = "empty"; break;
    case SetExpr::Op::Full: j["op"] = "full"; break;
    case SetExpr::Op::Interval: {
      const auto& b = e.bounds();
      j["op"] = "interval";
      j["lo"] = b.lo ? rational_to_json(*b.lo) : Json(nullptr);
      j["hi"] = b.hi ? rational_to_json(*b.hi) : Json(nullptr);
      j["lo_open"] = b.lo_open;
      j["hi_open"] = b.hi_open;
      break;
    }
    case SetExpr::Op::Points: {
      j["op"] = "points";
      Json pts = Json::array();
      for (const auto& p : e.point_list()) pts.push_back(rational_to_json(p));
      j["points"] = std::move(pts);
      break;
    }
    case SetExpr::Op::Residue:
      j["op"] = "residue";
      j["modulus"] = e.modulus();
      j["residue"] = e.residue_value();
      break;
    case SetExpr::Op::Union:
    case SetExpr::Op::Intersection:
    case SetExpr::Op::Complement: {
      j["op"] = e.op() == SetExpr::Op::Union ? "union" : e.op() == SetExpr::Op::Intersection ? "intersection" : "complement";
      Json args = Json::array();
      for (const auto& a : e.args()) args.push_back(set_to_json(a));
      j["args"] = std::move(args);
      break;
    }
  }
  return j;
}

SetExpr set_from_json(const Json& j, const GroundSpace& g, const std::string& where) {
  const std::string op = json_string(json_field(j, "op", where), where + "/op");
  auto children = [&]() {
    std::vector<SetExpr> out;
    const auto& args = json_array(json_field(j, "args", where), where + "/args");
    for (std::size_t i = 0; i < args.size(); ++i) out.push_back(set_from_json(args[i], g, where + "/args/" + std::to_string(i)));
    if (out.empty()) throw ParseError(where + "/args", "needs at least one argument");
    return out;
  };
  if (op == "empty") return SetExpr::empty(g);
  if (op == "full") return SetExpr::full(g);
  if (op == "interval") {
    IntervalBounds b;
    if (j.contains("lo") && !j["lo"].is_null()) b.lo = rational_from_json(j["lo"], where + "/lo");
    if (j.contains("hi") && !j["hi"].is_null()) b.hi = rational_from_json(j["hi"], where + "/hi");
    b.lo_open = j.value("lo_open", false);
    b.hi_open = j.value("hi_open", false);
    return SetExpr::interval(g, b);
  }
  if (op == "points") {
    std::vector<Rational> pts;
    const auto& arr = json_array(json_field(j, "points", where), where + "/points");
    for (std::size_t i = 0; i < arr.size(); ++i) pts.push_back(rational_from_json(arr[i], where + "/points/" + std::to_string(i)));
    return SetExpr::points(g, std::move(pts));
  }
  if (op == "residue") {
    const auto& m = json_field(j, "modulus", where);
    const auto& r = json_field(j, "residue", where);
    if (!m.is_number_integer() || !r.is_number_integer()) throw ParseError(where, "modulus and residue must be integers");
    return at_field(where, [&] { return SetExpr::residue(g, m.get<std::int64_t>(), r.get<std::int64_t>()); });
  }
  if (op == "union") return SetExpr::unite(children());
  if (op == "intersection") return SetExpr::intersect(children());
  if (op == "complement") {
    auto c = children();
    if (c.size() != 1) throw ParseError(where + "/args", "complement takes one argument");
    return SetExpr::complement(c.front());
  }
  if (op == "difference") {
    auto c = children();
    if (c.size() != 2) throw ParseError(where + "/args", "difference takes two arguments");
    return set_difference(c[0], c[1]);
  }
  throw ParseError(where + "/op", "unknown set op '" + op + "'");
}

Json filter_to_json(const FilterFunctional& f) {
  Json tails;
  tails["family"] = std::string(tail_family_name(f.family()));
  if (f.family() == TailFamily::LeftOfPoint || f.family() == TailFamily::RightOfPoint) {
    tails["point"] = rational_to_json(f.point());
  }
  Json j;
  j["id"] = f.id();
  j["tails"] = std::move(tails);
  return j;
}

FilterFunctional filter_from_json(const Json& j, const GroundSpace& g, const std::string& where) {
  std::string id = json_string(json_field(j, "id", where), where + "/id");
  const auto& tails = json_field(j, "tails", where);
  const auto family = at_field(where + "/tails/family", [&] {
    return parse_tail_family(json_string(json_field(tails, "family", where + "/tails"), where + "/tails/family"));
  });
  Rational point = 0;
  if (tails.contains("point")) point = rational_from_json(tails["point"], where + "/tails/point");
  return at_field(where, [&] { return FilterFunctional::make(std::move(id), g, family, point); });
}

Json measure_to_json(const Measure& mu) {
  Json atoms = Json::array();
  for (const auto& [x, w] : mu.atoms()) atoms.push_back(Json::array({rational_to_json(x), rational_to_json(w)}));
  Json pfa = Json::array();
  for (const auto& [f, c] : mu.pfa()) pfa.push_back(Json::array({f.id(), rational_to_json(c)}));
  Json j;
  j["atoms"] = std::move(atoms);
  j["pfa"] = std::move(pfa);
  return j;
}

Measure measure_from_json(const Json& j, const JsonContext& ctx, const std::string& where) {
  if (!j.is_object()) throw ParseError(where, "expected a measure object");
  Measure mu(ctx.ground);
  if (j.contains("atoms")) {
    const auto& atoms = json_array(j["atoms"], where + "/atoms");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const std::string at = where + "/atoms/" + std::to_string(i);
      if (!atoms[i].is_array() || atoms[i].size() != 2) throw ParseError(at, "expected [point, weight]");
      const Rational x = rational_from_json(atoms[i][0], at + "/0");
      const Rational w = rational_from_json(atoms[i][1], at + "/1");
      at_field(at, [&] { mu.add_atom(x, w); return 0; });
    }
  }
  if (j.contains("pfa")) {
    const auto& pfa = json_array(j["pfa"], where + "/pfa");
    for (std::size_t i = 0; i < pfa.size(); ++i) {
      const std::string at = where + "/pfa/" + std::to_string(i);
      if (!pfa[i].is_array() || pfa[i].size() != 2) throw ParseError(at, "expected [filter-id, coefficient]");
      const auto& f = ctx.filter(json_string(pfa[i][0], at + "/0"), at + "/0");
      mu.add_filter(f, rational_from_json(pfa[i][1], at + "/1"));
    }
  }
  return mu;
}

Json row_to_json(const Row& row) {
  Json terms = Json::array();
  if (!row.constant.is_zero()) {
    Json t;
    t["kind"] = "constant";
    t["measure"] = measure_to_json(row.constant);
    terms.push_back(std::move(t));
  }
  for (const auto& [s, c] : row.shifts) {
    Json t;
    if (s == 0) {
      t["kind"] = "diagonal";
    } else {
      t["kind"] = "shift";
      t["offset"] = s;
    }
    t["coef"] = rational_to_json(c);
    terms.push_back(std::move(t));
  }
  if (terms.empty()) {
    Json t;
    t["kind"] = "constant";
    t["measure"] = measure_to_json(row.constant);
    return t;
  }
  if (terms.size() == 1) return terms.front();
  Json j;
  j["kind"] = "sum";
  j["terms"] = std::move(terms);
  return j;
}

Row row_from_json(const Json& j, const JsonContext& ctx, const std::string& where) {
  const std::string kind = json_string(json_field(j, "kind", where), where + "/kind");
  Row row(ctx.ground);
  if (kind == "constant") {
    row.constant = measure_from_json(json_field(j, "measure", where), ctx, where + "/measure");
  } else if (kind == "diagonal") {
    row.add_shift(0, rational_from_json(json_field(j, "coef", where), where + "/coef"));
  } else if (kind == "point") {
    const Rational target = rational_from_json(json_field(j, "target", where), where + "/target");
    const Rational coef = rational_from_json(json_field(j, "coef", where), where + "/coef");
    at_field(where + "/target", [&] { row.constant.add_atom(target, coef); return 0; });
  } else if (kind == "shift") {
    const auto& off = json_field(j, "offset", where);
    if (!off.is_number_integer()) throw ParseError(where + "/offset", "expected an integer");
    row.add_shift(off.get<std::int64_t>(), rational_from_json(json_field(j, "coef", where), where + "/coef"));
  } else if (kind == "sum") {
    const auto& terms = json_array(json_field(j, "terms", where), where + "/terms");
    for (std::size_t i = 0; i < terms.size(); ++i) row.add(1, row_from_json(terms[i], ctx, where + "/terms/" + std::to_string(i)));
  } else {
    throw ParseError(where + "/kind", "unknown rule value kind '" + kind + "'");
  }
  return row;
}

Json kernel_to_json(const Kernel& k) {
  Json rules = Json::array();
  for (const auto& r : k.rules()) {
    Json rule;
    rule["piece"] = set_to_json(r.piece);
    rule["value"] = row_to_json(r.row);
    rules.push_back(std::move(rule));
  }
  Json j;
  j["ground"] = ground_to_json(k.ground());
  j["rules"] = std::move(rules);
  return j;
}

Kernel kernel_from_json(const Json& j, const JsonContext& ctx, const std::string& where) {
  if (j.contains("ground")) {
    const GroundSpace g = ground_from_json(j["ground"], where + "/ground");
    if (!(g == ctx.ground)) throw ParseError(where + "/ground", "kernel ground differs from the document ground");
  }
  std::vector<KernelRule> rules;
  const auto& arr = json_array(json_field(j, "rules", where), where + "/rules");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = where + "/rules/" + std::to_string(i);
    SetExpr piece = set_from_json(json_field(arr[i], "piece", at), ctx.ground, at + "/piece");
    Row row = row_from_json(json_field(arr[i], "value", at), ctx, at + "/value");
    rules.push_back({std::move(piece), std::move(row)});
  }
  return Kernel(ctx.ground, std::move(rules));
}

Json generator_to_json(const Generator& g) {
  Json j;
  if (g.is_atom()) {
    j["atom"] = rational_to_json(g.point());
  } else {
    j["filter"] = g.filter().id();
  }
  return j;
}

Generator generator_from_json(const Json& j, const JsonContext& ctx, const std::string& where) {
  if (j.is_object() && j.contains("atom")) {
    const Rational x = rational_from_json(j["atom"], where + "/atom");
    at_field(where + "/atom", [&] { require_point(ctx.ground, x, "generator"); return 0; });
    return Generator::atom(x);
  }
  if (j.is_object() && j.contains("filter")) {
    return Generator::filter(ctx.filter(json_string(j["filter"], where + "/filter"), where + "/filter"));
  }
  throw ParseError(where, "expected {\"atom\":...} or {\"filter\":...}");
}

Json trace_to_json(const NormTrace& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json row;
    row["n"] = r.n;
    row["ca_norm"] = format_rational(r.ca_norm);
    row["pfa_norm"] = format_rational(r.pfa_norm);
    row["ca_norm_decimal"] = format_decimal(r.ca_norm);
    row["pfa_norm_decimal"] = format_decimal(r.pfa_norm);
    rows.push_back(std::move(row));
  }
  Json retained = Json::array();
  for (const auto& m : t.retained) retained.push_back(measure_to_json(m));
  Json j;
  j["initial"] = measure_to_json(t.initial);
  j["rows"] = std::move(rows);
  j["retained"] = std::move(retained);
  return j;
}

Json h_verdict_to_json(const HVerdict& v) {
  Json j;
  j["status"] = std::string(h_status_name(v.status));
  j["witness"] = v.witness ? Json(v.witness->id()) : Json(nullptr);
  j["image"] = v.image ? measure_to_json(*v.image) : Json(nullptr);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

Json range_report_to_json(const RangeReport& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    Json e;
    e["index"] = v.index;
    e["inclusion"] = v.inclusion;
    e["input"] = measure_to_json(v.input);
    e["image"] = measure_to_json(v.image);
    violations.push_back(std::move(e));
  }
  Json j;
  j["checked"] = r.checked;
  j["skipped"] = r.skipped;
  j["notes"] = r.notes;
  j["violations"] = std::move(violations);
  return j;
}

Json invariant_report_to_json(const InvariantReport& r) {
  Json basis = Json::array();
  for (const auto& g : r.basis) basis.push_back(generator_to_json(g));
  Json solutions = Json::array();
  for (std::size_t i = 0; i < r.solutions.size(); ++i) {
    Json s;
    s["measure"] = measure_to_json(r.solutions[i]);
    s["classification"] = std::string(measure_type_name(r.classification[i]));
    solutions.push_back(std::move(s));
  }
  Json null_basis = Json::array();
  for (const auto& m : r.nullspace_basis) null_basis.push_back(measure_to_json(m));
  Json delta;
  delta["ba_nonempty"] = r.enumerated ? Json(r.delta_ba_nonempty) : Json(nullptr);
  delta["ca_empty"] = r.enumerated ? Json(r.delta_ca_empty) : Json(nullptr);
  delta["pfa_nonempty"] = r.enumerated ? Json(r.delta_pfa_nonempty) : Json(nullptr);
  Json j;
  j["basis"] = std::move(basis);
  j["nullspace_dim"] = r.nullspace_dim;
  j["enumerated"] = r.enumerated;
  j["solutions"] = std::move(solutions);
  j["nullspace_basis"] = std::move(null_basis);
  j["delta"] = std::move(delta);
  return j;
}

Json verdict_to_json(const Verdict& v) {
  Json j;
  j["name"] = v.name;
  j["status"] = std::string(verdict_status_name(v.status));
  j["detail"] = v.detail;
  j["witness"] = v.witness ? measure_to_json(*v.witness) : Json(nullptr);
  return j;
}

}  // namespace famc
