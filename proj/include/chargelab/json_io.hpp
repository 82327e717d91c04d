#pragma once

#include <string>

#include <json.hpp>

#include "chargelab/chain.hpp"
#include "chargelab/charge_space.hpp"
#include "chargelab/function.hpp"

namespace chargelab {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Charge spaces
//
// {"universe":{"kind":"finite","points":[...]},
//  "field":{"kind":"atoms","atoms":[[...],...]} | {"kind":"generators","sets":[[...]]},
//  "charge":{"kind":"atom-weights","weights":{"<atom-index>":"p/q"}}}
// or {"universe":{"kind":"nat"},"field":{"kind":"cofinite"|"periodic"|"eventually-periodic"}}
// ---------------------------------------------------------------------------

inline Mask mask_from_labels(const std::vector<std::string>& points, const Json& arr) {
  if (!arr.is_array()) throw Error("set must be an array of point labels");
  Mask m = 0;
  for (const auto& el : arr) {
    std::string label = el.is_string() ? el.get<std::string>() : el.dump();
    bool found = false;
    for (size_t i = 0; i < points.size(); ++i)
      if (points[i] == label) {
        m |= Mask(1) << i;
        found = true;
        break;
      }
    if (!found) throw Error("unknown point label: " + label);
  }
  return m;
}

inline Json mask_to_labels(const std::vector<std::string>& points, Mask m) {
  Json arr = Json::array();
  for (size_t i = 0; i < points.size(); ++i)
    if (m & (Mask(1) << i)) arr.push_back(points[i]);
  return arr;
}

inline ChargeSpace space_from_json(const Json& j) {
  if (!j.contains("universe")) throw Error("missing universe");
  const Json& u = j.at("universe");
  std::string ukind = u.value("kind", "");
  if (ukind == "nat") {
    std::string fkind = j.at("field").value("kind", "");
    if (fkind == "cofinite") return ChargeSpace::nat(NatField::Cofinite);
    if (fkind == "periodic") return ChargeSpace::nat(NatField::Periodic);
    if (fkind == "eventually-periodic") return ChargeSpace::nat(NatField::EventuallyPeriodic);
    throw Error("unknown nat field kind: " + fkind);
  }
  if (ukind != "finite") throw Error("unknown universe kind: " + ukind);
  std::vector<std::string> points;
  for (const auto& p : u.at("points"))
    points.push_back(p.is_string() ? p.get<std::string>() : p.dump());
  const Json& f = j.at("field");
  std::string fkind = f.value("kind", "");
  std::vector<Mask> atoms;
  if (fkind == "atoms") {
    for (const auto& a : f.at("atoms")) atoms.push_back(mask_from_labels(points, a));
  } else if (fkind == "generators") {
    std::vector<Mask> gens;
    for (const auto& g : f.at("sets")) gens.push_back(mask_from_labels(points, g));
    atoms = generated_field(static_cast<int>(points.size()), gens);
  } else {
    throw Error("unknown field kind: " + fkind);
  }
  std::vector<Rat> weights(atoms.size(), Rat(0));
  if (j.contains("charge")) {
    const Json& c = j.at("charge");
    if (c.value("kind", "") != "atom-weights") throw Error("unknown charge kind");
    for (const auto& [key, val] : c.at("weights").items()) {
      size_t idx = std::stoul(key);
      if (idx >= atoms.size()) throw Error("weight index out of range: " + key);
      weights[idx] = parse_rat(val.get<std::string>());
    }
  }
  return ChargeSpace(FiniteChargeSpace(std::move(points), std::move(atoms), std::move(weights)));
}

inline Json space_to_json(const ChargeSpace& s) {
  Json j;
  if (!s.finite()) {
    j["universe"]["kind"] = "nat";
    j["field"]["kind"] = nat_field_name(s.nat_kind());
    return j;
  }
  const auto& f = s.fin();
  j["universe"]["kind"] = "finite";
  j["universe"]["points"] = f.points();
  j["field"]["kind"] = "atoms";
  Json atoms = Json::array();
  for (Mask a : f.atoms()) atoms.push_back(mask_to_labels(f.points(), a));
  j["field"]["atoms"] = atoms;
  j["charge"]["kind"] = "atom-weights";
  Json w = Json::object();
  for (size_t i = 0; i < f.weights().size(); ++i) w[std::to_string(i)] = rat_str(f.weights()[i]);
  j["charge"]["weights"] = w;
  return j;
}

// ---------------------------------------------------------------------------
// Sets
//
// N sets: {"kind":"eventually-periodic","preperiod":"0110","period":"01"}
//         {"kind":"finite","elements":[...]}
//         {"kind":"cofinite-complement","elements":[...]}
// Finite-universe sets: {"kind":"points","elements":["a","b"]}
// ---------------------------------------------------------------------------

inline UniSet set_from_json(const ChargeSpace& s, const Json& j) {
  std::string kind = j.value("kind", "");
  if (s.finite()) {
    if (kind != "points") throw Error("finite-universe sets use kind \"points\"");
    return UniSet(mask_from_labels(s.fin().points(), j.at("elements")));
  }
  if (kind == "eventually-periodic")
    return UniSet(EpSet::from_strings(j.value("preperiod", ""), j.at("period").get<std::string>()));
  std::vector<std::uint64_t> elems;
  if (j.contains("elements"))
    for (const auto& e : j.at("elements")) elems.push_back(e.get<std::uint64_t>());
  if (kind == "finite") return UniSet(elems.empty() ? EpSet::empty_set() : EpSet::finite(elems));
  if (kind == "cofinite-complement")
    return UniSet(elems.empty() ? EpSet::all() : EpSet::cofinite_complement(elems));
  throw Error("unknown set kind: " + kind);
}

inline Json set_to_json(const ChargeSpace& s, const UniSet& a) {
  Json j;
  if (s.finite()) {
    j["kind"] = "points";
    j["elements"] = mask_to_labels(s.fin().points(), std::get<Mask>(a));
    return j;
  }
  const EpSet& e = std::get<EpSet>(a);
  if (e.is_finite()) {
    j["kind"] = "finite";
    Json arr = Json::array();
    for (auto n : e.finite_elements()) arr.push_back(n);
    j["elements"] = arr;
    return j;
  }
  std::string pre, per;
  for (bool b : e.preperiod_bits()) pre += b ? '1' : '0';
  for (bool b : e.period_bits()) per += b ? '1' : '0';
  j["kind"] = "eventually-periodic";
  j["preperiod"] = pre;
  j["period"] = per;
  return j;
}

// ---------------------------------------------------------------------------
// Functions: documents mirroring the representation catalog.
// ---------------------------------------------------------------------------

inline Func func_from_json(const ChargeSpace& s, const Json& j) {
  std::string kind = j.value("kind", "");
  auto sub = [&](const char* key) { return func_from_json(s, j.at(key)); };
  if (kind == "constant") {
    Rat c = parse_rat(j.at("value").get<std::string>());
    return s.finite() ? Func::constant_finite(s.fin().num_points(), c) : Func::constant_nat(c);
  }
  if (kind == "simple") {
    if (s.finite()) {
      std::vector<Rat> vals(s.fin().num_points(), Rat(0));
      std::vector<bool> seen(vals.size(), false);
      for (const auto& piece : j.at("pieces")) {
        Rat v = parse_rat(piece.at("value").get<std::string>());
        Mask m = std::get<Mask>(set_from_json(s, piece.at("set")));
        for (int i = 0; i < s.fin().num_points(); ++i)
          if (m & (Mask(1) << i)) {
            if (seen[i]) throw Error("simple function pieces overlap");
            seen[i] = true;
            vals[i] = v;
          }
      }
      for (bool b : seen)
        if (!b) throw Error("simple function pieces do not cover the ground set");
      return Func::finite_pointwise(std::move(vals));
    }
    std::vector<NatPiece> pieces;
    for (const auto& piece : j.at("pieces"))
      pieces.push_back({std::get<EpSet>(set_from_json(s, piece.at("set"))),
                        Laurent::constant(parse_rat(piece.at("value").get<std::string>()))});
    return Func::nat_pieces(std::move(pieces));
  }
  if (kind == "indicator") {
    UniSet a = set_from_json(s, j.at("set"));
    return s.finite() ? Func::indicator_finite(s.fin().num_points(), std::get<Mask>(a))
                      : Func::indicator_nat(std::get<EpSet>(a));
  }
  if (kind == "reciprocal") {
    if (s.finite()) throw Error("reciprocal is a function on N");
    return Func::reciprocal(parse_rat(j.at("scale").get<std::string>()));
  }
  if (kind == "linear") {
    if (s.finite()) throw Error("linear is a function on N");
    return Func::linear_nat(parse_rat(j.at("scale").get<std::string>()));
  }
  if (kind == "affine")
    return Func::affine(parse_rat(j.at("a").get<std::string>()), sub("f"),
                        parse_rat(j.at("b").get<std::string>()), sub("g"));
  if (kind == "product") return sub("f") * sub("g");
  if (kind == "abs") return sub("f").abs_();
  if (kind == "pos-part") return sub("f").pos_part();
  if (kind == "neg-part") return sub("f").neg_part();
  if (kind == "pow") return sub("f").pow_int(j.at("p").get<unsigned>());
  if (kind == "max") return Func::max_(sub("f"), sub("g"));
  if (kind == "min") return Func::min_(sub("f"), sub("g"));
  throw Error("unknown function kind: " + kind);
}

/// Emits the normal form as a simple-function document when piecewise
/// constant; general pieces are emitted with their polynomial rendered.
inline Json func_to_json(const ChargeSpace& s, const Func& f) {
  Json j;
  if (f.piecewise_constant()) {
    j["kind"] = "simple";
    Json pieces = Json::array();
    for (const auto& [value, set] : f.simple_pieces()) {
      Json p;
      p["value"] = rat_str(value);
      p["set"] = set_to_json(s, set);
      pieces.push_back(p);
    }
    j["pieces"] = pieces;
    return j;
  }
  j["kind"] = "nat-piecewise";
  Json pieces = Json::array();
  for (const auto& p : f.pieces()) {
    Json e;
    e["set"] = set_to_json(s, UniSet(p.set));
    e["fn"] = p.fn.to_string();
    pieces.push_back(e);
  }
  j["pieces"] = pieces;
  return j;
}

// ---------------------------------------------------------------------------
// Reports and chains
// ---------------------------------------------------------------------------

inline Json pj_report_to_json(const PjReport& r) {
  Json j;
  j["inner"] = rat_str(r.inner);
  j["outer"] = rat_str(r.outer);
  j["inside"] = r.inside;
  j["attained"] = r.attained;
  return j;
}

inline Chain chain_from_json(const ChargeSpace& s, const Json& j) {
  Chain c;
  for (const auto& e : j.at("entries"))
    c.entries.push_back(
        {parse_rat(e.at("level").get<std::string>()), set_from_json(s, e.at("set"))});
  validate_chain(c);
  return c;
}

inline Json chain_to_json(const ChargeSpace& s, const Chain& c) {
  Json j;
  Json entries = Json::array();
  for (const auto& e : c.entries) {
    Json je;
    je["level"] = rat_str(e.level);
    je["set"] = set_to_json(s, e.set);
    entries.push_back(je);
  }
  j["entries"] = entries;
  return j;
}

inline std::vector<Mask> subfield_from_json(const FiniteChargeSpace& sp, const Json& j) {
  std::vector<Mask> atoms;
  for (const auto& a : j.at("atoms")) atoms.push_back(mask_from_labels(sp.points(), a));
  return atoms;
}

}  // namespace chargelab
