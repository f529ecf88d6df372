#include "rauzy/io.hpp"

#include <string>

#include "rauzy/error.hpp"

namespace rauzy {

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw DomainError(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::vector<std::string> strings(const Json& j, const char* name) {
  const Json& a = field(j, name);
  if (!a.is_array()) throw DomainError(std::string("field '") + name + "' must be an array");
  std::vector<std::string> out;
  for (const auto& x : a) {
    if (!x.is_string()) throw DomainError(std::string("field '") + name + "' must hold strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

BigReal real_from(const Json& x, BigReal::Precision bits) {
  if (x.is_string()) return BigReal::parse(x.get<std::string>(), bits);
  if (x.is_number_integer()) return BigReal(x.get<long>(), bits);
  if (x.is_number()) return BigReal(x.get<double>(), bits);
  throw DomainError("expected a number or a decimal string");
}

RealVec reals(const Json& j, const char* name, BigReal::Precision bits) {
  const Json& a = field(j, name);
  if (!a.is_array()) throw DomainError(std::string("field '") + name + "' must be an array");
  RealVec out;
  for (const auto& x : a) out.push_back(real_from(x, bits));
  return out;
}

BigReal::Precision bits_from(const Json& j, BigReal::Precision fallback) {
  if (!j.contains("precision_bits")) return fallback;
  const Json& b = j.at("precision_bits");
  if (!b.is_number_integer() || b.get<long>() < 16) throw DomainError("precision_bits must be an integer >= 16");
  return static_cast<BigReal::Precision>(b.get<long>());
}

Json reals_json(const RealVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.to_string());
  return a;
}

Json verdict_json(Verdict v) { return to_string(v); }

}  // namespace

Json to_json(const Perm& p) { return Json{{"top", p.top_symbols()}, {"bottom", p.bottom_symbols()}}; }

Perm perm_from_json(const Json& j) { return Perm::from_rows(strings(j, "top"), strings(j, "bottom")); }

Json to_json(const RatVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(format_rational(x));
  return a;
}

RatVec rat_vec_from_json(const Json& j) {
  if (!j.is_array()) throw DomainError("expected an array of rationals");
  RatVec out;
  for (const auto& x : j) {
    if (x.is_string()) {
      out.push_back(parse_rational(x.get<std::string>()));
    } else if (x.is_number_integer()) {
      out.emplace_back(x.get<long>());
    } else {
      throw DomainError("rationals must be \"p/q\" strings or integers");
    }
  }
  return out;
}

Json to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.size(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.size(); ++c) row.push_back(m(r, c).get_str());
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const IET& t) { return Json{{"perm", to_json(t.perm())}, {"lambda", to_json(t.lambda())}}; }

IET iet_from_json(const Json& j) {
  const Perm p = perm_from_json(field(j, "perm"));
  return build_iet(rat_vec_from_json(field(j, "lambda")), p);
}

Json to_json(const AIET& f) {
  return Json{{"perm", to_json(f.perm())},
              {"lengths", reals_json(f.lengths())},
              {"log_slope", reals_json(f.log_slope())},
              {"precision_bits", f.precision()}};
}

AIET aiet_from_json(const Json& j) {
  const BigReal::Precision bits = bits_from(j, BigReal::default_precision());
  const Perm p = perm_from_json(field(j, "perm"));
  return AIET(p, reals(j, "lengths", bits), reals(j, "log_slope", bits), bits);
}

Json to_json(const PLCircleMap& f) {
  return Json{{"breaks", reals_json(f.breaks())},
              {"slopes", reals_json(f.slopes())},
              {"shift", f.shift().to_string()},
              {"precision_bits", f.precision()}};
}

PLCircleMap pl_map_from_json(const Json& j, BigReal::Precision default_bits) {
  const BigReal::Precision bits = bits_from(j, default_bits);
  BigReal shift(0, bits);
  if (j.contains("shift")) shift = real_from(j.at("shift"), bits);
  return PLCircleMap(reals(j, "breaks", bits), reals(j, "slopes", bits), shift, bits);
}

Json to_json(const RauzyClass& cls) {
  Json nodes = Json::array();
  for (std::size_t i = 0; i < cls.perms.size(); ++i) {
    Json n = to_json(cls.perms[i]);
    n["id"] = i;
    n["key"] = cls.perms[i].key();
    n["rotation_type"] = is_rotation_type(cls.perms[i]);
    nodes.push_back(std::move(n));
  }
  Json arcs = Json::array();
  for (const auto& a : cls.arcs) arcs.push_back(Json{{"from", a.from}, {"type", to_string(a.type)}, {"to", a.to}});
  return Json{{"size", cls.perms.size()}, {"nodes", std::move(nodes)}, {"arcs", std::move(arcs)}};
}

Json to_json(const RotationPath& path) {
  Json a = Json::array();
  for (const auto& r : path) a.push_back(Json{{"perm", r.perm.key()}, {"type", to_string(r.type)}, {"z", r.z}});
  return a;
}

Json to_json(const GenericConditionReport& rep) {
  Json visits = Json::array();
  for (const auto& v : rep.visits) {
    visits.push_back(Json{{"n", v.n},
                          {"perm", v.perm.key()},
                          {"last_bottom", v.perm.symbol(v.last_bottom)},
                          {"target", v.target.get_str()},
                          {"min_ratio", format_rational(v.min_ratio)},
                          {"min_length", format_rational(v.min_length)},
                          {"height_balance", format_rational(v.height_balance)},
                          {"lengths_ok", v.lengths_ok},
                          {"balanced_ok", v.balanced_ok},
                          {"heights_ok", v.heights_ok},
                          {"hit", v.hit()}});
  }
  Json div = rep.schedule_diverges ? Json(*rep.schedule_diverges) : Json(nullptr);
  return Json{{"c0", format_rational(rep.c0)},     {"schedule", rep.schedule},
              {"schedule_diverges", div},          {"blocks", rep.blocks},
              {"hits", rep.hits},                  {"visits", std::move(visits)},
              {"warnings", rep.warnings}};
}

Json to_json(const CriterionReport& rep) {
  Json entries = Json::array();
  for (const auto& e : rep.entries) {
    Json x{{"level", e.level},
           {"letter", e.letter},
           {"designated", e.designated},
           {"height", e.height.get_str()},
           {"cond1", verdict_json(e.cond1)},
           {"cond2", verdict_json(e.cond2)},
           {"cond3", verdict_json(e.cond3)},
           {"cond4", verdict_json(e.cond4)},
           {"cond5", verdict_json(e.cond5)},
           {"tower_mass", e.tower_mass},
           {"slope_gap", e.slope_gap},
           {"rigidity", e.rigidity},
           {"rigidity_capped", e.rigidity_capped},
           {"rigidity_target", e.rigidity_target ? Json(e.rigidity_target->get_str()) : Json(nullptr)},
           {"rigidity_ratio", e.rigidity_ratio}};
    if (e.overlap) {
      x["overlap"] = Json{{"tower_a", e.overlap->tower_a},
                          {"floor_a", e.overlap->floor_a},
                          {"tower_b", e.overlap->tower_b},
                          {"floor_b", e.overlap->floor_b},
                          {"interval", e.overlap->overlap}};
    }
    entries.push_back(std::move(x));
  }
  return Json{{"applicable", rep.applicable},
              {"mass_lower_bound", rep.mass_lower_bound},
              {"slope_gap_inf", rep.slope_gap_inf},
              {"status", to_string(rep.status)},
              {"levels_computed", rep.levels_computed},
              {"note", rep.note},
              {"entries", std::move(entries)}};
}

Json to_json(const LyapunovEstimate& est) {
  return Json{{"theta_top", est.theta_top},
              {"normalization", to_string(est.normalization)},
              {"theta_per_zorich_block", est.theta_per_block},
              {"theta_per_rv_step", est.theta_per_rv_step},
              {"n_blocks", est.n_blocks},
              {"samples", est.samples},
              {"skipped", est.skipped}};
}

Json to_json(const CFExpansion& cf) {
  auto ints = [](const std::vector<BigInt>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(x.get_str());
    return a;
  };
  return Json{{"quotients", ints(cf.a)}, {"p", ints(cf.p)}, {"q", ints(cf.q)}, {"terminated", cf.terminated}};
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace rauzy
