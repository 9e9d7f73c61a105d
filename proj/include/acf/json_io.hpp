#pragma once

// JSON encodings of series, one-forms, instances, certificates and decider
// outcomes. Rationals are written as decimal strings "num"/"den" so that no
// precision is lost; terms are listed by ascending degree, then descending
// lex within a degree.

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "acf/constructor.hpp"
#include "acf/decider.hpp"
#include "acf/ideal.hpp"

namespace acf {

using Json = nlohmann::json;

// Malformed or semantically invalid input document.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::vector<std::string> variable_names(unsigned n) {
  if (n == 2) return {"x", "y"};
  if (n == 3) return {"x", "y", "z"};
  std::vector<std::string> v;
  for (unsigned i = 1; i <= n; ++i) v.push_back("x" + std::to_string(i));
  return v;
}

inline Json rational_to_json(const Rational& r) { return r.get_str(); }

namespace detail {
inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::string string_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw InputError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

inline std::uint64_t uint_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw InputError(std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

inline unsigned small_uint_field(const Json& j, const char* key) {
  const auto v = uint_field(j, key);
  if (v > 100000) throw InputError(std::string("field '") + key + "' is out of range");
  return static_cast<unsigned>(v);
}

inline Integer integer_text(const Json& v, const char* what) {
  try {
    if (v.is_string()) return parse_integer(v.get<std::string>());
    if (v.is_number_integer()) return Integer(std::to_string(v.get<long long>()));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
  throw InputError(std::string(what) + " must be an integer or a decimal string");
}

inline Rational rational_value(const Json& v, const char* what) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(Integer(std::to_string(v.get<long long>())));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
  throw InputError(std::string(what) + " must be a rational string");
}

template <class F>
auto translate_errors(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError&) {
    throw;
  } catch (const Json::exception& e) {
    throw InputError(e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  } catch (const std::out_of_range& e) {
    throw InputError(e.what());
  }
}
}  // namespace detail

inline Json series_to_json(const TruncSeries& s) {
  Json terms = Json::array();
  for (const auto& [k, p] : s.components()) {
    for (const auto& [e, c] : p.terms()) {
      terms.push_back({{"exp", e}, {"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}});
    }
  }
  return {{"variables", variable_names(s.num_vars())}, {"truncation_order", s.trunc_order()}, {"terms", terms}};
}

inline TruncSeries series_from_json(const Json& j) {
  return detail::translate_errors([&] {
    const Json& vars = detail::field(j, "variables");
    if (!vars.is_array() || vars.empty()) throw InputError("'variables' must be a non-empty array");
    const unsigned n = static_cast<unsigned>(vars.size());
    const unsigned order = detail::small_uint_field(j, "truncation_order");
    if (order == 0) throw InputError("truncation_order must be positive");
    TruncSeries s(n, order);
    std::set<Exponent> seen;
    const Json& terms = detail::field(j, "terms");
    if (!terms.is_array()) throw InputError("'terms' must be an array");
    for (const Json& t : terms) {
      const Json& ej = detail::field(t, "exp");
      if (!ej.is_array() || ej.size() != n) throw InputError("term exponent length does not match variable count");
      Exponent e;
      for (const Json& x : ej) {
        if (!x.is_number_unsigned() && !(x.is_number_integer() && x.get<long long>() >= 0)) {
          throw InputError("exponents must be non-negative integers");
        }
        e.push_back(x.get<unsigned>());
      }
      if (!seen.insert(e).second) throw InputError("duplicate exponent in series terms");
      const Integer num = detail::integer_text(detail::field(t, "num"), "num");
      const Integer den = detail::integer_text(detail::field(t, "den"), "den");
      if (den <= 0) throw InputError("term denominator must be positive");
      const Rational c = make_rational(num, den);
      if (is_zero(c)) continue;
      const unsigned deg = total_degree(e);
      if (deg >= order) throw InputError("term of degree " + std::to_string(deg) + " not below truncation_order");
      s.add_component(HomogPoly::monomial(n, e, c));
    }
    return s;
  });
}

inline Json one_form_to_json(const OneForm& f) {
  Json comps = Json::array();
  for (const auto& c : f.components()) comps.push_back(series_to_json(c));
  return {{"kind", "one_form"}, {"variables", variable_names(f.num_vars())}, {"components", comps}};
}

inline OneForm one_form_from_json(const Json& j) {
  return detail::translate_errors([&] {
    if (detail::string_field(j, "kind") != "one_form") throw InputError("expected kind 'one_form'");
    const Json& comps = detail::field(j, "components");
    if (!comps.is_array()) throw InputError("'components' must be an array");
    std::vector<TruncSeries> cs;
    for (const Json& c : comps) cs.push_back(series_from_json(c));
    return OneForm(std::move(cs));
  });
}

inline Json ideal_to_json(const TruncatedIdeal& I) {
  Json gens = Json::array();
  for (const auto& g : I.generators) gens.push_back(series_to_json(g));
  return {{"kind", "ideal"}, {"generators", gens}};
}

// Accepts {"kind":"ideal","generators":[...]} or a one-form (its component
// ideal).
inline TruncatedIdeal ideal_from_json(const Json& j) {
  return detail::translate_errors([&] {
    const std::string kind = detail::string_field(j, "kind");
    if (kind == "one_form") return ideal_of(one_form_from_json(j));
    if (kind != "ideal") throw InputError("expected kind 'ideal' or 'one_form'");
    const Json& gens = detail::field(j, "generators");
    if (!gens.is_array()) throw InputError("'generators' must be an array");
    std::vector<TruncSeries> gs;
    for (const Json& g : gens) gs.push_back(series_from_json(g));
    return TruncatedIdeal(std::move(gs));
  });
}

inline Json instance_to_json(const Instance& inst) {
  return {{"d", inst.d},
          {"N", inst.N},
          {"seed", inst.seed},
          {"coeff_bound", inst.coeff_bound},
          {"mode", to_string(inst.mode)},
          {"C", series_to_json(inst.C)},
          {"D", series_to_json(inst.D)}};
}

// Required: d, N, C, D. Optional: seed (0), coeff_bound (10), mode
// ("generic"). Invariants are checked by Instance::validate, not here.
inline Instance instance_from_json(const Json& j) {
  return detail::translate_errors([&] {
    Instance inst;
    inst.d = detail::small_uint_field(j, "d");
    inst.N = detail::small_uint_field(j, "N");
    if (j.contains("seed")) inst.seed = detail::uint_field(j, "seed");
    if (j.contains("coeff_bound")) inst.coeff_bound = detail::uint_field(j, "coeff_bound");
    if (j.contains("mode")) inst.mode = parse_build_mode(detail::string_field(j, "mode"));
    inst.C = series_from_json(detail::field(j, "C"));
    inst.D = series_from_json(detail::field(j, "D"));
    return inst;
  });
}

inline Json poly_to_json(const HomogPoly& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"exp", e}, {"coeff", c.get_str()}});
  return {{"degree", p.degree()}, {"terms", terms}, {"text", format_poly(p)}};
}

inline Json construction_log_to_json(const ConstructionState& st) {
  Json choices = Json::array();
  for (const auto& c : st.free_choice_log) {
    choices.push_back({{"degree", c.degree},
                       {"F", poly_to_json(c.F)},
                       {"top_a", c.top_a.get_str()},
                       {"top_b", c.top_b.get_str()},
                       {"scale", c.scale.get_str()}});
  }
  Json norms = Json::array();
  for (const auto& n : st.norm_log) {
    norms.push_back({{"degree", n.degree}, {"norm_A", n.norm_a.get_str()}, {"norm_B", n.norm_b.get_str()},
                     {"calA", n.calA.get_str()}});
  }
  Json log = {{"instance", instance_to_json(st.instance)},
              {"P", poly_to_json(st.P)},
              {"free_choices", choices},
              {"norms", norms}};
  if (st.C_const) log["C_const"] = st.C_const->get_str();
  return log;
}

inline Json certificate_to_json(const ChartCertificate& cc, unsigned order) {
  Json rows = Json::array();
  for (const auto& r : cc.certificate.row_combination) rows.push_back(r.get_str());
  return {{"kind", "farkas"},
          {"chart", to_string(cc.chart)},
          {"through_degree", cc.through_degree},
          {"order", order},
          {"system_hash", cc.system_hash},
          {"rows", rows}};
}

struct CertificateDocument {
  ChartCertificate certificate;
  unsigned order;
};

inline CertificateDocument certificate_from_json(const Json& j) {
  return detail::translate_errors([&] {
    if (detail::string_field(j, "kind") != "farkas") throw InputError("expected kind 'farkas'");
    CertificateDocument doc{{parse_chart(detail::string_field(j, "chart")), detail::small_uint_field(j, "through_degree"),
                             {}, detail::string_field(j, "system_hash")},
                            detail::small_uint_field(j, "order")};
    const Json& rows = detail::field(j, "rows");
    if (!rows.is_array()) throw InputError("'rows' must be an array");
    for (const Json& r : rows) doc.certificate.certificate.row_combination.push_back(detail::rational_value(r, "row"));
    return doc;
  });
}

inline Json staged_to_json(const std::vector<StagedRecord>& staged) {
  Json out = Json::array();
  for (const auto& rec : staged) {
    Json blocks = Json::array();
    for (const auto& b : rec.blocks) {
      Json bj = {{"block", b.block}, {"dimension", b.dimension}};
      if (b.forced) {
        bj["forced"] = {{"X", format_poly((*b.forced)[0])},
                        {"Y", format_poly((*b.forced)[1])},
                        {"Z", format_poly((*b.forced)[2])},
                        {"W", format_poly((*b.forced)[3])}};
      }
      blocks.push_back(std::move(bj));
    }
    out.push_back({{"through_degree", rec.through_degree}, {"feasible", rec.feasible}, {"blocks", blocks}});
  }
  return out;
}

inline Json witness_to_json(const PotentialWitness& w) {
  return {{"chart", to_string(w.chart)}, {"X", series_to_json(w.X)}, {"Y", series_to_json(w.Y)},
          {"Z", series_to_json(w.Z)},    {"W", series_to_json(w.W)}, {"Phi", series_to_json(w.phi)},
          {"ideals_equal", w.ideals_equal}};
}

inline Json guard_to_json(const GuardReport& g) {
  Json checks = Json::array();
  for (const auto& c : g.checks) {
    checks.push_back({{"name", c.name}, {"expected", c.expected}, {"observed", c.observed}, {"ok", c.ok()}});
  }
  return {{"d", g.d}, {"passes", g.passes()}, {"checks", checks}};
}

inline Json outcome_to_json(const DeciderOutcome& o) {
  Json j = {{"verdict", to_string(o.verdict)},
            {"lowest_degree", o.lowest_degree},
            {"order", o.order},
            {"equations", o.equations},
            {"unknowns", o.unknowns}};
  j["failing_degree"] = o.failing_degree ? Json(*o.failing_degree) : Json(nullptr);
  j["certificate"] = o.certificate ? certificate_to_json(*o.certificate, o.order) : Json(nullptr);
  Json certs = Json::array();
  for (const auto& c : o.chart_certificates) certs.push_back(certificate_to_json(c, o.order));
  j["chart_certificates"] = certs;
  Json charts = Json::array();
  for (const auto& c : o.charts) {
    Json cj = {{"chart", to_string(c.chart)}, {"solvable", c.solvable}, {"unit_vanishes", c.unit_vanishes}};
    cj["min_infeasible_degree"] = c.min_infeasible_degree ? Json(*c.min_infeasible_degree) : Json(nullptr);
    charts.push_back(std::move(cj));
  }
  j["charts"] = charts;
  j["staged"] = staged_to_json(o.staged);
  j["witness"] = o.witness ? witness_to_json(*o.witness) : Json(nullptr);
  return j;
}

inline Json witness_to_json(const MembershipWitness& w, const TruncatedIdeal& I) {
  Json cof = Json::array();
  for (const auto& c : w.cofactors) cof.push_back(series_to_json(c));
  return {{"kind", "membership_witness"},
          {"target", series_to_json(w.target)},
          {"generators", ideal_to_json(I)["generators"]},
          {"cofactors", cof},
          {"valid_order", w.valid_order}};
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

inline std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Pretty-printed with sorted keys and a trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace acf
