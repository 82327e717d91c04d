#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chargelab/suites.hpp"

namespace chargelab::cli {

// Exit codes: 0 success / verdict true, 1 verdict false, 2 input error,
// 3 internal error.
inline constexpr int kOk = 0;
inline constexpr int kVerdictFalse = 1;
inline constexpr int kInputError = 2;
inline constexpr int kInternalError = 3;

namespace detail {

inline Json load_json(const std::string& path_or_inline) {
  // Inline JSON is accepted anywhere a path is: documents start with '{'.
  if (!path_or_inline.empty() && path_or_inline[0] == '{')
    return Json::parse(path_or_inline);
  std::ifstream in(path_or_inline);
  if (!in) throw Error("cannot open file: " + path_or_inline);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw Error(std::string("malformed JSON document: ") + e.what());
  }
  return j;
}

struct Ctx {
  std::string space_path, space2_path, f_path, g_path, set_path, chain_path, subfield_path;
  std::string levels, format = "human";
  int depth = kDefaultCauchyDepth;
  unsigned p = 1;
  unsigned precision = 12;
  std::uint64_t seed = 1;
  int max_points = 4;
  Rat eps = Rat(1, 10);
  std::string eps_str = "1/10";

  ChargeSpace space() const { return space_from_json(load_json(space_path)); }
  Func f(const ChargeSpace& s) const { return func_from_json(s, load_json(f_path)); }
  Func g(const ChargeSpace& s) const { return func_from_json(s, load_json(g_path)); }
  UniSet set(const ChargeSpace& s) const { return set_from_json(s, load_json(set_path)); }
  std::vector<Rat> parsed_levels() const {
    std::vector<Rat> out;
    std::stringstream ss(levels);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_rat(tok));
    return out;
  }
};

inline void emit(const Ctx& ctx, std::ostream& out, const Json& j, const std::string& human) {
  if (ctx.format == "json")
    out << j.dump(2) << "\n";
  else
    out << human << "\n";
}

}  // namespace detail

inline int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact computations on bounded finitely additive charge spaces"};
  app.require_subcommand(1);
  detail::Ctx ctx;
  std::string suite_id;
  int enum_n = 3;

  auto add_common = [&](CLI::App* cmd, bool needs_space = true) {
    if (needs_space) cmd->add_option("--space", ctx.space_path, "charge space document")->required();
    cmd->add_option("--format", ctx.format, "human|json");
    return cmd;
  };

  auto* c_validate = add_common(app.add_subcommand("space-validate", "load and validate a space"));
  auto* c_atoms = add_common(app.add_subcommand("atoms", "atom partition of the field"));
  auto* c_outer = add_common(app.add_subcommand("outer", "outer charge of a set"));
  c_outer->add_option("--set", ctx.set_path, "set document")->required();
  auto* c_pj = add_common(app.add_subcommand("pj", "Peano-Jordan membership report"));
  c_pj->add_option("--set", ctx.set_path, "set document")->required();
  auto* c_complete = add_common(app.add_subcommand("complete", "completion by null sets"));
  auto* c_quotient = add_common(app.add_subcommand("quotient", "quotient by the charge kernel"));
  auto* c_meas = add_common(app.add_subcommand("measurable", "T1-measurability decision"));
  c_meas->add_option("--f", ctx.f_path, "function document")->required();
  auto* c_smooth = add_common(app.add_subcommand("smooth", "smoothness decision"));
  c_smooth->add_option("--f", ctx.f_path, "function document")->required();
  auto* c_dist = add_common(app.add_subcommand("distance", "L0 pseudometric"));
  c_dist->add_option("--f", ctx.f_path)->required();
  c_dist->add_option("--g", ctx.g_path)->required();
  auto* c_aeq = add_common(app.add_subcommand("aeq", "equality almost everywhere"));
  c_aeq->add_option("--f", ctx.f_path)->required();
  c_aeq->add_option("--g", ctx.g_path)->required();
  std::string method = "direct";
  c_aeq->add_option("--method", method, "direct|ray-symmetric-difference|truncated-ray");
  auto* c_dyadic = add_common(app.add_subcommand("dyadic", "approximation sequence"));
  c_dyadic->add_option("--f", ctx.f_path)->required();
  c_dyadic->add_option("--depth", ctx.depth);
  auto* c_int = add_common(app.add_subcommand("integrate", "integral with evidence"));
  c_int->add_option("--f", ctx.f_path)->required();
  c_int->add_option("--depth", ctx.depth);
  auto* c_norm = add_common(app.add_subcommand("norm", "L_p pseudonorm"));
  c_norm->add_option("--f", ctx.f_path)->required();
  c_norm->add_option("--p", ctx.p);
  c_norm->add_option("--precision", ctx.precision);
  auto* c_order = add_common(app.add_subcommand("order-check", "order-integrals comparison"));
  c_order->add_option("--space2", ctx.space2_path, "second charge (same atoms)")->required();
  c_order->add_option("--f", ctx.f_path)->required();
  auto* c_c2f = add_common(app.add_subcommand("chain-to-fn", "function from a chain"));
  c_c2f->add_option("--chain", ctx.chain_path)->required();
  auto* c_f2c = add_common(app.add_subcommand("fn-to-chain", "ray chain of a function"));
  c_f2c->add_option("--f", ctx.f_path)->required();
  c_f2c->add_option("--levels", ctx.levels, "comma-separated rationals")->required();
  auto* c_nullmod = add_common(app.add_subcommand("nullmod", "null modification of a chain"));
  c_nullmod->add_option("--subfield", ctx.subfield_path)->required();
  c_nullmod->add_option("--chain", ctx.chain_path)->required();
  auto* c_iso = add_common(app.add_subcommand("iso-check", "completion isomorphism check"));
  c_iso->add_option("--subfield", ctx.subfield_path)->required();
  c_iso->add_option("--p", ctx.p);
  auto* c_verify = app.add_subcommand("verify", "run a theorem suite");
  c_verify->add_option("id", suite_id, "theorem id, or 'all'")->required();
  c_verify->add_option("--max-points", ctx.max_points);
  c_verify->add_option("--seed", ctx.seed);
  c_verify->add_option("--format", ctx.format);
  auto* c_enum = app.add_subcommand("enumerate", "atom partitions of an n-point set");
  c_enum->add_option("--n", enum_n)->required();
  c_enum->add_option("--format", ctx.format);
  auto* c_t2 = add_common(app.add_subcommand("t2", "T2 partition at a given epsilon"));
  c_t2->add_option("--f", ctx.f_path)->required();
  c_t2->add_option("--eps", ctx.eps_str);

  std::vector<const char*> argv;
  argv.push_back("chargelab");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help() << "\n";
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (c_validate->parsed()) {
      ChargeSpace s = ctx.space();
      Json j = space_to_json(s);
      detail::emit(ctx, out, j,
                   s.finite() ? "valid finite space with " +
                                    std::to_string(s.fin().atoms().size()) + " atoms, total charge " +
                                    rat_str(s.fin().total_charge())
                              : "valid charge space on N (" + nat_field_name(s.nat_kind()) + ")");
      return kOk;
    }
    if (c_atoms->parsed()) {
      ChargeSpace s = ctx.space();
      if (!s.finite()) throw Error("atoms listing applies to finite spaces");
      Json j = space_to_json(s)["field"]["atoms"];
      detail::emit(ctx, out, j, j.dump());
      return kOk;
    }
    if (c_outer->parsed()) {
      ChargeSpace s = ctx.space();
      Rat v = outer_charge(s, ctx.set(s));
      detail::emit(ctx, out, Json{{"outer", rat_str(v)}}, rat_str(v));
      return kOk;
    }
    if (c_pj->parsed()) {
      ChargeSpace s = ctx.space();
      PjReport r = pj_membership(s, ctx.set(s));
      detail::emit(ctx, out, pj_report_to_json(r),
                   std::string(r.inside ? "inside" : "outside") + " inner=" + rat_str(r.inner) +
                       " outer=" + rat_str(r.outer) +
                       (r.attained ? " (attained)" : " (not attained)"));
      return r.inside ? kOk : kVerdictFalse;
    }
    if (c_complete->parsed()) {
      ChargeSpace s = ctx.space();
      ChargeSpace done = complete_space(s);
      detail::emit(ctx, out, space_to_json(done),
                   ctx.format == "human" ? space_to_json(done).dump() : "");
      return kOk;
    }
    if (c_quotient->parsed()) {
      ChargeSpace s = ctx.space();
      if (!s.finite()) throw Error("quotient applies to finite spaces");
      QuotientAlgebra q = quotient_representation(s.fin());
      Json j;
      j["positive_atoms"] = Json::array();
      for (Mask a : q.positive_atoms) j["positive_atoms"].push_back(mask_to_labels(s.fin().points(), a));
      j["classes"] = q.num_classes();
      Json charges = Json::array();
      for (const Rat& c : q.class_charge) charges.push_back(rat_str(c));
      j["class_charges"] = charges;
      detail::emit(ctx, out, j,
                   std::to_string(q.num_classes()) + " classes over " +
                       std::to_string(q.positive_atoms.size()) + " positive atoms");
      return kOk;
    }
    if (c_meas->parsed()) {
      ChargeSpace s = ctx.space();
      T1Certificate cert = is_t1_measurable(s, ctx.f(s));
      Json j;
      j["ok"] = cert.ok;
      j["smooth"] = cert.smooth;
      Json levels = Json::array();
      for (const Rat& c : cert.exception_levels) levels.push_back(rat_str(c));
      j["exception_levels"] = levels;
      Json checks = Json::array();
      for (const auto& [y, in] : cert.ray_checks)
        checks.push_back(Json{{"level", rat_str(y)}, {"in_completion", in}});
      j["ray_checks"] = checks;
      detail::emit(ctx, out, j, cert.ok ? "T1-measurable" : "not T1-measurable");
      return cert.ok ? kOk : kVerdictFalse;
    }
    if (c_smooth->parsed()) {
      ChargeSpace s = ctx.space();
      bool ok = is_smooth(s, ctx.f(s));
      detail::emit(ctx, out, Json{{"smooth", ok}}, ok ? "smooth" : "not smooth");
      return ok ? kOk : kVerdictFalse;
    }
    if (c_dist->parsed()) {
      ChargeSpace s = ctx.space();
      Rat d = pseudometric_d(s, ctx.f(s), ctx.g(s));
      detail::emit(ctx, out, Json{{"distance", rat_str(d)}}, rat_str(d));
      return kOk;
    }
    if (c_aeq->parsed()) {
      ChargeSpace s = ctx.space();
      AeMethod m = method == "direct" ? AeMethod::Direct
                   : method == "ray-symmetric-difference"
                       ? AeMethod::RaySymdiff
                       : method == "truncated-ray" ? AeMethod::TruncatedRay
                                                   : throw Error("unknown method: " + method);
      bool eq = equal_ae(s, ctx.f(s), ctx.g(s), m);
      detail::emit(ctx, out, Json{{"equal_ae", eq}}, eq ? "equal a.e." : "not equal a.e.");
      return eq ? kOk : kVerdictFalse;
    }
    if (c_dyadic->parsed()) {
      ChargeSpace s = ctx.space();
      Func f = ctx.f(s);
      ApproxSequence seq = build_dyadic_sequence(s, f, ctx.depth);
      Json j;
      j["depth"] = ctx.depth;
      Json grids = Json::array();
      for (const auto& grid : seq.grids) {
        Json g = Json::array();
        for (const Rat& y : grid) g.push_back(rat_str(y));
        grids.push_back(g);
      }
      j["grids"] = grids;
      Json bounds = Json::array();
      bool all_ok = true;
      for (int n = 1; n <= ctx.depth; ++n) {
        auto b = check_dyadic_bound(s, seq, f, n);
        all_ok = all_ok && b.ok;
        bounds.push_back(Json{{"n", n},
                              {"ok", b.ok},
                              {"sup", b.domain_empty ? "0/1" : rat_str(b.exact_sup)}});
      }
      j["bounds"] = bounds;
      detail::emit(ctx, out, j, all_ok ? "construction bound holds" : "construction bound fails");
      return all_ok ? kOk : kVerdictFalse;
    }
    if (c_int->parsed()) {
      ChargeSpace s = ctx.space();
      IntegralResult r = integrate(s, ctx.f(s), ctx.depth);
      Json j;
      j["value"] = rat_str(r.value);
      j["method"] = r.method == IntegralResult::SimpleDirect      ? "simple-direct"
                    : r.method == IntegralResult::AeReduction     ? "ae-reduction"
                                                                  : "determining-sequence";
      Json trace = Json::array();
      for (const Rat& t : r.cauchy_trace) trace.push_back(rat_str(t));
      j["cauchy_trace"] = trace;
      j["certified"] = r.certified;
      detail::emit(ctx, out, j, rat_str(r.value));
      return kOk;
    }
    if (c_norm->parsed()) {
      ChargeSpace s = ctx.space();
      LpNorm n = lp_pseudonorm(s, ctx.f(s), ctx.p, ctx.precision);
      Json j;
      j["integral"] = rat_str(n.integral);
      j["exact"] = n.exact;
      if (n.exact)
        j["value"] = rat_str(n.value);
      else {
        j["low"] = rat_str(n.low);
        j["high"] = rat_str(n.high);
      }
      detail::emit(ctx, out, j,
                   n.exact ? rat_str(n.value)
                           : "[" + rat_str(n.low) + ", " + rat_str(n.high) + "]");
      return kOk;
    }
    if (c_order->parsed()) {
      ChargeSpace s1 = ctx.space();
      ChargeSpace s2 = space_from_json(detail::load_json(ctx.space2_path));
      if (!s1.finite() || !s2.finite()) throw Error("order-check applies to finite spaces");
      OrderIntegralsReport r = order_integrals_check(s1.fin().points(), s1.fin().atoms(),
                                                     s1.fin().weights(), s2.fin().weights(),
                                                     ctx.f(s1));
      Json j;
      j["chain_dominated"] = r.chain_dominated;
      j["integrals_ordered"] = r.integrals_ordered;
      j["variants_ok"] = r.variants_ok;
      j["integral_1"] = rat_str(r.integral_1);
      j["integral_2"] = rat_str(r.integral_2);
      bool verdict = !r.chain_dominated || (r.integrals_ordered && r.variants_ok);
      detail::emit(ctx, out, j,
                   std::string("chain_dominated=") + (r.chain_dominated ? "yes" : "no") +
                       " integrals " + rat_str(r.integral_1) + " vs " + rat_str(r.integral_2));
      return verdict ? kOk : kVerdictFalse;
    }
    if (c_c2f->parsed()) {
      ChargeSpace s = ctx.space();
      Chain c = chain_from_json(s, detail::load_json(ctx.chain_path));
      Func f = chain_to_function(s, c);
      detail::emit(ctx, out, func_to_json(s, f), func_to_json(s, f).dump());
      return kOk;
    }
    if (c_f2c->parsed()) {
      ChargeSpace s = ctx.space();
      Chain c = function_to_chain(s, ctx.f(s), ctx.parsed_levels());
      detail::emit(ctx, out, chain_to_json(s, c), chain_to_json(s, c).dump());
      return kOk;
    }
    if (c_nullmod->parsed()) {
      ChargeSpace s = ctx.space();
      if (!s.finite()) throw Error("null modification applies to finite spaces");
      std::vector<Mask> sub = subfield_from_json(s.fin(), detail::load_json(ctx.subfield_path));
      Chain c = chain_from_json(s, detail::load_json(ctx.chain_path));
      std::vector<Mask> sets;
      for (const auto& e : c.entries) sets.push_back(std::get<Mask>(e.set));
      NullModMap nm = null_modification(s.fin(), sub, sets);
      Json j;
      Json pairs = Json::array();
      for (const auto& [a, img] : nm.pairs)
        pairs.push_back(Json{{"set", mask_to_labels(s.fin().points(), a)},
                             {"image", mask_to_labels(s.fin().points(), img)}});
      j["pairs"] = pairs;
      j["property1"] = nm.property1_ok;
      j["property2"] = nm.property2_ok;
      j["charges_match"] = nm.charges_match;
      detail::emit(ctx, out, j, "null modification constructed; properties verified");
      return kOk;
    }
    if (c_iso->parsed()) {
      ChargeSpace s = ctx.space();
      if (!s.finite()) throw Error("iso-check applies to finite spaces");
      std::vector<Mask> sub = subfield_from_json(s.fin(), detail::load_json(ctx.subfield_path));
      IsomorphismReport r = completion_isomorphism_check(s.fin(), sub, ctx.p);
      Json j;
      j["lp_equal"] = r.lp_equal;
      j["classes_isomorphic"] = r.classes_isomorphic;
      if (r.missing_null_set)
        j["missing_null_set"] = mask_to_labels(s.fin().points(), *r.missing_null_set);
      if (r.classes_isomorphic) {
        j["surjectivity"] = r.surjectivity_ok;
        j["isometry"] = r.isometry_ok;
      }
      detail::emit(ctx, out, j,
                   std::string("lp_equal=") + (r.lp_equal ? "yes" : "no") +
                       " classes_isomorphic=" + (r.classes_isomorphic ? "yes" : "no"));
      return (r.lp_equal && r.classes_isomorphic) ? kOk : kVerdictFalse;
    }
    if (c_verify->parsed()) {
      InstanceSpec spec;
      spec.max_points = ctx.max_points;
      spec.seed = ctx.seed;
      std::vector<std::string> ids;
      if (suite_id == "all")
        for (const auto& [id, fn] : theorem_registry()) ids.push_back(id);
      else
        ids.push_back(suite_id);
      int failures = 0;
      Json all = Json::array();
      for (const std::string& id : ids) {
        SuiteReport rep = run_theorem_suite(id, spec);
        failures += rep.failures;
        Json j;
        j["id"] = rep.id;
        j["instances"] = rep.instances;
        j["failures"] = rep.failures;
        j["counterexamples"] = rep.counterexamples;
        all.push_back(j);
        if (ctx.format != "json")
          out << rep.id << ": " << rep.instances << " instances, " << rep.failures
              << " failures\n";
      }
      if (ctx.format == "json") out << all.dump(2) << "\n";
      return failures == 0 ? kOk : kVerdictFalse;
    }
    if (c_enum->parsed()) {
      auto parts = set_partitions(enum_n);
      Json j;
      j["count"] = parts.size();
      detail::emit(ctx, out, j, std::to_string(parts.size()) + " partitions");
      return kOk;
    }
    if (c_t2->parsed()) {
      ChargeSpace s = ctx.space();
      ctx.eps = parse_rat(ctx.eps_str);
      T2Report r = t2_measurability(s, ctx.f(s), ctx.eps);
      Json j;
      j["ok"] = r.ok;
      if (r.partition) {
        Json parts = Json::array();
        for (const auto& p : *r.partition) parts.push_back(set_to_json(s, p));
        j["partition"] = parts;
      }
      detail::emit(ctx, out, j, r.ok ? "feasible" : "not feasible");
      return r.ok ? kOk : kVerdictFalse;
    }
    throw InternalError("no subcommand handled");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace chargelab::cli
