#pragma once

// Command-line front end: builtins, report schema, exit codes.

#include <chrono>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kanset/abelian.hpp"
#include "kanset/constructors.hpp"
#include "kanset/eilenberg_maclane.hpp"
#include "kanset/errors.hpp"
#include "kanset/homology.hpp"
#include "kanset/homotopy_groups.hpp"
#include "kanset/io.hpp"
#include "kanset/kan.hpp"
#include "kanset/parallel.hpp"
#include "kanset/simplicial_set.hpp"
#include "kanset/spectral.hpp"

#ifndef KANSET_VERSION
#define KANSET_VERSION "0.0.0"
#endif

namespace kanset::cli {

inline constexpr const char* kSchema = "kanset.report/1";
inline constexpr std::uint64_t kDefaultSeed = 20261016;

enum Exit : int { kOk = 0, kInput = 1, kValidation = 2, kBudget = 3, kPrecondition = 4 };

// ---------------------------------------------------------------------------
// Builtins
// ---------------------------------------------------------------------------

struct Builtin {
  int default_cap;
  std::function<ComplexPtr(int cap)> make;
};

inline const std::map<std::string, Builtin>& builtins() {
  static const std::map<std::string, Builtin> table = [] {
    std::map<std::string, Builtin> t;
    t["point"] = {3, [](int c) { return point(c); }};
    for (int n = 0; n <= 3; ++n)
      t["delta-" + std::to_string(n)] = {std::max(n, 2), [n](int c) { return standard_simplex(n, c); }};
    for (int n = 1; n <= 3; ++n) {
      t["boundary-" + std::to_string(n)] = {std::max(n, 2), [n](int c) { return boundary_complex(n, c); }};
      for (int k = 0; k <= n; ++k)
        t["horn-" + std::to_string(n) + "-" + std::to_string(k)] = {std::max(n, 2),
                                                                    [n, k](int c) { return horn_complex(n, k, c); }};
    }
    auto sphere = [](int d) {
      return [d](int c) {
        auto S = standard_simplex(d, c);
        return quotient(S, S->subcomplex("boundary"), "S" + std::to_string(d)).complex;
      };
    };
    t["circle"] = {2, sphere(1)};
    t["sphere-2"] = {3, sphere(2)};
    struct Em {
      const char* tag;
      const char* group;
      int n;
    };
    for (Em e : {Em{"z2", "Z/2", 1}, Em{"z3", "Z/3", 1}, Em{"z4", "Z/4", 1}, Em{"z2z2", "Z/2+Z/2", 1},
                 Em{"z2", "Z/2", 2}}) {
      const std::string suffix = std::string(e.tag) + "-" + std::to_string(e.n);
      const std::string group = e.group;
      const int n = e.n;
      t["em-" + suffix] = {n + 2, [group, n](int c) { return em_space(parse_group(group), n, c).complex; }};
      t["em-skeleton-" + suffix] = {n + 1, [group, n](int c) {
                                      if (c != n + 1) throw CapTooSmall("em skeleton: cap is fixed at n+1");
                                      return em_skeleton(parse_group(group), n);
                                    }};
    }
    return t;
  }();
  return table;
}

inline std::string builtin_listing() {
  std::string s = "Builtin complexes (address as builtin:<name>, --cap overrides the default cap):\n";
  for (const auto& [name, b] : builtins()) s += "  " + name + " (cap " + std::to_string(b.default_cap) + ")\n";
  return s;
}

// ---------------------------------------------------------------------------
// JSON helpers
// ---------------------------------------------------------------------------

inline Json bigint_json(const BigInt& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return static_cast<long long>(v);
  return v.str();
}

inline Json group_json(const FinAbGroup& g) {
  Json t = Json::array();
  for (const auto& m : g.torsion()) t.push_back(bigint_json(m));
  return Json{{"free_rank", g.free_rank()}, {"torsion", t}};
}

inline Json level_sizes(const SimplicialSet& K) {
  Json a = Json::array();
  for (int k = 0; k <= K.cap(); ++k) a.push_back(K.size(k));
  return a;
}

inline Json complex_summary(const SimplicialSet& K) {
  return Json{{"name", K.name()}, {"cap", K.cap()}, {"level_sizes", level_sizes(K)},
              {"digest", digest(to_canonical_string(K))}};
}

inline Json horn_json(const SimplicialSet& K, const HornCounterexample& h) {
  Json e = Json::array();
  for (std::size_t i = 0; i < h.entries.size(); ++i)
    e.push_back(static_cast<int>(i) == h.gap ? Json(nullptr) : Json(K.label(h.dim, h.entries[i])));
  return Json{{"dim", h.dim}, {"gap", h.gap}, {"entries", e}};
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

struct Options {
  std::vector<std::string> positionals;
  std::optional<int> dim, n, up_to, cap, k;
  std::string coeff = "Z";
  std::optional<std::string> subcomplex, basepoint, group, output;
  std::size_t level_budget = kDefaultLevelBudget;
  unsigned threads = 1;
  std::uint64_t seed = kDefaultSeed;
  std::size_t count = 100;
  bool timing = false;
  bool unnormalized = false;
  bool skeleton = false;
};

class Runner {
 public:
  Runner(Options opt, Json command) : opt_(std::move(opt)), command_(std::move(command)) {}

  Json report(const Json& result) const {
    Json r;
    r["schema"] = kSchema;
    r["tool_version"] = KANSET_VERSION;
    r["command"] = command_;
    r["inputs"] = inputs_;
    r["result"] = result;
    r["warnings"] = warnings_;
    return r;
  }

  void warn(const std::string& w) { warnings_.push_back(w); }
  void warn_all(const std::vector<std::string>& ws) {
    for (const auto& w : ws) warn(w);
  }
  int code() const noexcept { return code_; }
  void degrade() { code_ = std::max(code_, static_cast<int>(kPrecondition)); }

  ComplexPtr resolve(const std::string& ref) {
    ComplexPtr K;
    static const std::string prefix = "builtin:";
    if (ref.rfind(prefix, 0) == 0) {
      const std::string name = ref.substr(prefix.size());
      auto it = builtins().find(name);
      if (it == builtins().end()) throw ParseError("unknown builtin '" + name + "' (see --help)");
      K = it->second.make(opt_.cap.value_or(it->second.default_cap));
    } else {
      K = load(ref);
    }
    if (opt_.basepoint) K = with_basepoint(K, *opt_.basepoint);
    inputs_.push_back(Json{{"ref", ref}, {"name", K->name()}, {"digest", digest(to_canonical_string(*K))}});
    return K;
  }

  Subcomplex pick_subcomplex(const SimplicialSet& K, const std::string& fallback) const {
    const std::string name = opt_.subcomplex.value_or(fallback);
    if (name == "empty") return empty_subcomplex(K);
    if (name == "full") return full_subcomplex(K);
    if (name == "basepoint") {
      if (!K.basepoint()) throw PreconditionError("complex '" + K.name() + "' is not pointed");
      return basepoint_closure(K);
    }
    try {
      return K.subcomplex(name);
    } catch (const std::exception&) {
      throw ParseError("complex '" + K.name() + "' has no subcomplex '" + name + "'");
    }
  }

  FinAbGroup coefficients() const {
    try {
      return parse_group(opt_.coeff);
    } catch (const std::exception& e) {
      throw ParseError(std::string("--coeff: ") + e.what());
    }
  }

  FinAbGroup finite_coefficients() const {
    auto A = coefficients();
    if (!A.is_finite()) throw ParseError("--coeff must be a finite group for this analysis");
    return A;
  }

  const Options& opt() const noexcept { return opt_; }

  Json run_validate() {
    if (opt_.positionals.size() != 1) throw ParseError("validate takes exactly one input");
    const std::string& ref = opt_.positionals[0];
    if (ref.rfind("builtin:", 0) == 0) {
      auto K = resolve(ref);
      auto rep = validate(*K);
      if (!rep.ok()) throw ValidationError("builtin failed validation");
      return Json{{"valid", true}, {"complex", complex_summary(*K)}};
    }
    std::ifstream in(ref, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + ref + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    inputs_.push_back(Json{{"ref", ref}, {"digest", digest(text)}});
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    SimplicialSet K = from_json_unchecked(doc);
    auto rep = validate(K);
    inputs_.back()["name"] = K.name();
    if (rep.ok()) return Json{{"valid", true}, {"complex", complex_summary(K)}};
    Json v = Json::array();
    for (std::size_t i = 0; i < rep.violations.size() && i < 50; ++i) {
      const auto& x = rep.violations[i];
      v.push_back(Json{{"identity", x.identity}, {"law", identity_law(x.identity)}, {"level", x.k}, {"i", x.i},
                       {"j", x.j}, {"simplex", x.simplex}, {"message", x.describe()}});
    }
    code_ = kValidation;
    return Json{{"valid", false}, {"violation_count", rep.violations.size()}, {"violations", v}};
  }

  Json run_build() {
    if (opt_.positionals.empty()) throw ParseError("build needs a constructor name");
    const std::string what = opt_.positionals[0];
    std::vector<std::string> args(opt_.positionals.begin() + 1, opt_.positionals.end());
    auto need = [&](std::size_t c) {
      if (args.size() != c)
        throw ParseError("build " + what + " takes " + std::to_string(c) + " input(s), got " + std::to_string(args.size()));
    };
    auto need_dim = [&]() {
      if (!opt_.dim) throw ParseError("build " + what + " needs --dim");
      return *opt_.dim;
    };
    Json extra = Json::object();
    ComplexPtr out;
    if (what == "standard-simplex") {
      need(0);
      const int d = need_dim();
      out = standard_simplex(d, opt_.cap.value_or(d));
    } else if (what == "boundary") {
      need(0);
      const int d = need_dim();
      out = boundary_complex(d, opt_.cap.value_or(d));
    } else if (what == "horn") {
      need(0);
      const int d = need_dim();
      if (!opt_.k) throw ParseError("build horn needs --k");
      out = horn_complex(d, *opt_.k, opt_.cap.value_or(d));
    } else if (what == "point") {
      need(0);
      out = point(opt_.cap.value_or(0));
    } else if (what == "product" || what == "coproduct") {
      need(2);
      auto K = resolve(args[0]), L = resolve(args[1]);
      if (K->cap() != L->cap()) {
        const int c = std::min(K->cap(), L->cap());
        warn("inputs truncated to the common cap " + std::to_string(c));
        K = truncate(K, c);
        L = truncate(L, c);
      }
      out = what == "product" ? product(K, L) : coproduct(K, L);
    } else if (what == "quotient") {
      need(1);
      auto K = resolve(args[0]);
      if (!opt_.subcomplex) throw ParseError("build quotient needs --subcomplex");
      out = quotient(K, pick_subcomplex(*K, "")).complex;
    } else if (what == "cone") {
      need(1);
      out = cone(resolve(args[0])).complex;
    } else if (what == "path-space") {
      need(1);
      out = path_space(resolve(args[0])).complex;
    } else if (what == "loop-space") {
      need(1);
      out = loop_space(resolve(args[0]));
    } else if (what == "complete") {
      need(1);
      auto S = resolve(args[0]);
      auto sk = kan_skeleton_check(S);
      extra["skeleton_check"] = Json{{"passed", sk.passed},
                                     {"unfilled", sk.unfilled ? horn_json(*S, *sk.unfilled) : Json(nullptr)},
                                     {"uncompletable", sk.uncompletable ? horn_json(*S, *sk.uncompletable) : Json(nullptr)}};
      if (!sk.passed) warn("skeleton fails the Kan skeleton check; the completion is defined but not Kan");
      out = complete(S, opt_.cap.value_or(S->cap() + 1), opt_.level_budget);
    } else if (what == "em-space") {
      need(0);
      if (!opt_.group || !opt_.n) throw ParseError("build em-space needs --group and --n");
      FinAbGroup A;
      try {
        A = parse_group(*opt_.group);
      } catch (const std::exception& e) {
        throw ParseError(std::string("--group: ") + e.what());
      }
      auto E = em_space(A, *opt_.n, opt_.cap.value_or(*opt_.n + 2), opt_.level_budget);
      warn_all(E.warnings);
      out = E.complex;
    } else {
      throw ParseError("unknown constructor '" + what + "'");
    }
    Json r{{"complex", complex_summary(*out)}};
    for (auto& [key, v] : extra.items()) r[key] = v;
    if (opt_.output) {
      save(*out, *opt_.output);
      r["output"] = *opt_.output;
    } else {
      r["document"] = to_json(*out);
    }
    return r;
  }

  Json run_analyze() {
    if (opt_.positionals.empty()) throw ParseError("analyze needs an analysis name");
    const std::string what = opt_.positionals[0];
    std::vector<std::string> args(opt_.positionals.begin() + 1, opt_.positionals.end());
    auto one = [&]() {
      if (args.size() != 1) throw ParseError("analyze " + what + " takes exactly one input");
      return resolve(args[0]);
    };
    auto degree = [&](const char* role) {
      auto d = opt_.n ? opt_.n : opt_.dim;
      if (!d) throw ParseError(std::string("analyze ") + what + " needs --n or --dim (" + role + ")");
      return *d;
    };
    if (what == "kan") return kan(one());
    if (what == "minimal") return minimal(one());
    if (what == "homotopy-group") return homotopy(one(), degree("dimension"));
    if (what == "homology" || what == "cohomology") return homology_report(one(), what == "cohomology");
    if (what == "hurewicz") return hurewicz(one(), degree("dimension"));
    if (what == "exactness") return exactness(one());
    if (what == "spec-cohomology") return spec_cohomology(one(), degree("cohomological degree"));
    if (what == "compare-sim-spec") return compare(one(), degree("cohomological degree"));
    if (what == "matrix-lemma") return matrix_lemma(one(), opt_.n.value_or(1));
    if (what == "key-lemma") return key_lemma(one(), opt_.n.value_or(1));
    if (what == "additivity") {
      if (args.empty()) throw ParseError("analyze additivity needs inputs");
      std::vector<ComplexPtr> Ks;
      for (const auto& a : args) Ks.push_back(resolve(a));
      auto rep = additivity_check(Ks, coefficients());
      Json d = Json::array();
      for (std::size_t i = 0; i < rep.coproduct_groups.size(); ++i)
        d.push_back(Json{{"degree", i}, {"coproduct", group_json(rep.coproduct_groups[i])},
                         {"summed", group_json(rep.summed_groups[i])}});
      return Json{{"passed", rep.passed}, {"degrees", d}};
    }
    if (what == "acyclicity") {
      auto K = one();
      auto rep = cone_acyclicity_check(K);
      Json g = Json::array();
      for (const auto& x : rep.groups) g.push_back(group_json(x));
      return Json{{"passed", rep.passed}, {"cone_homology", g}};
    }
    if (what == "adjunction") {
      if (args.size() != 2) throw ParseError("analyze adjunction takes K and a skeleton S");
      auto K = resolve(args[0]), S = resolve(args[1]);
      auto rep = completion_adjunction_check(K, S);
      return Json{{"bijection", rep.bijection},
                  {"maps_into_completion", rep.maps_into_completion},
                  {"skeleton_maps", rep.skeleton_maps},
                  {"restriction_injective", rep.restriction_injective},
                  {"extensions_valid", rep.extensions_valid}};
    }
    throw ParseError("unknown analysis '" + what + "'");
  }

 private:
  static ComplexPtr with_basepoint(const ComplexPtr& K, const std::string& label) {
    for (SimplexId v = 0; v < K->size(0); ++v)
      if (K->label(0, v) == label) {
        auto d = K->data();
        d.basepoint = v;
        return make_complex(std::move(d));
      }
    throw ParseError("--basepoint: no vertex labelled '" + label + "' in '" + K->name() + "'");
  }

  Json kan(const ComplexPtr& K) {
    const int up = opt_.up_to.value_or(K->cap() - 1);
    auto rep = kan_check(K, up);
    return Json{{"passed", rep.passed},
                {"scope", "within cap"},
                {"up_to", rep.up_to},
                {"horns_checked", rep.horns_checked},
                {"counterexample", rep.counterexample ? horn_json(*K, *rep.counterexample) : Json(nullptr)}};
  }

  Json minimal(const ComplexPtr& K) {
    FillingIndex F(K);
    auto rep = minimal_check(F, opt_.skeleton);
    Json w = nullptr;
    if (rep.witness) {
      const auto& [a, b] = *rep.witness;
      w = Json::array({Json{{"dim", a.dim}, {"simplex", K->label(a.dim, a.index)}},
                       Json{{"dim", b.dim}, {"simplex", K->label(b.dim, b.index)}}});
    }
    return Json{{"passed", rep.passed}, {"scope", "within cap"}, {"checked_up_to", rep.checked_up_to}, {"witness", w}};
  }

  Json table_json(const SimplicialSet& K, const HomotopyGroupTable& T) {
    Json classes = Json::array();
    for (std::size_t c = 0; c < T.size(); ++c)
      classes.push_back(Json{{"representative", K.label(T.n, T.representative(c))}, {"size", T.classes[c].size()}});
    Json r{{"n", T.n},
           {"relative", T.relative},
           {"order", T.size()},
           {"identity", T.identity},
           {"classes", classes},
           {"has_product", T.has_product},
           {"raw_equivalence", T.raw_equivalence}};
    if (T.has_product) {
      r["mult"] = T.mult;
      r["axioms_ok"] = T.axioms_ok;
      r["abelian"] = T.abelian;
      r["product_well_defined"] = T.product_well_defined;
      r["group"] = T.abelian && T.axioms_ok ? group_json(abelianization(T).group) : Json(nullptr);
    }
    r["kan_passed"] = T.kan_passed ? Json(*T.kan_passed) : Json(nullptr);
    warn_all(T.warnings);
    if (T.kan_passed == false) degrade();
    return r;
  }

  Json homotopy(const ComplexPtr& K, int n) {
    FillingIndex F(K);
    if (opt_.subcomplex) return table_json(*K, relative_homotopy_group(F, pick_subcomplex(*K, ""), n));
    return table_json(*K, homotopy_group(F, n));
  }

  Json homology_report(const ComplexPtr& K, bool co) {
    auto A = coefficients();
    std::optional<Subcomplex> L;
    if (opt_.subcomplex) L = pick_subcomplex(*K, "");
    auto C = chain_complex(*K, L ? &*L : nullptr, !opt_.unnormalized);
    auto one = [&](int d) { return co ? cohomology(C, A, d) : homology(C, A, d); };
    const char* kind = co ? "cohomology" : "homology";
    if (opt_.dim) {
      auto H = one(*opt_.dim);
      if (H.truncated) warn(std::string(kind) + " in degree " + std::to_string(*opt_.dim) + " is truncated at the cap");
      return group_json(H.group);
    }
    Json d = Json::array();
    for (int k = 0; k <= K->cap(); ++k) {
      auto H = one(k);
      Json g = group_json(H.group);
      g["degree"] = k;
      g["truncated"] = H.truncated;
      d.push_back(g);
    }
    return Json{{"degrees", d}};
  }

  Json hurewicz(const ComplexPtr& K, int n) {
    FillingIndex F(K);
    auto rep = hurewicz_check(F, n);
    warn_all(rep.warnings);
    if (!rep.precondition) degrade();
    Json images = Json::array();
    for (const auto& im : rep.images)
      images.push_back(Json{{"class", im.source_class}, {"image", format_element(rep.homology, im.image)}});
    return Json{{"n", rep.n},
                {"passed", rep.passed},
                {"precondition", rep.precondition},
                {"representative_independent", rep.representative_independent},
                {"pipelines_agree", rep.pipelines_agree},
                {"homomorphism", rep.homomorphism},
                {"bijective", rep.bijective},
                {"homotopy", group_json(rep.homotopy)},
                {"homology", group_json(rep.homology)},
                {"images", images}};
  }

  Json exactness(const ComplexPtr& K) {
    auto rep = exactness_check(K, pick_subcomplex(*K, "basepoint"));
    warn_all(rep.warnings);
    Json nodes = Json::array();
    for (const auto& nd : rep.nodes)
      nodes.push_back(Json{{"node", nd.name}, {"exact", nd.exact}, {"image", nd.image_size}, {"kernel", nd.kernel_size}});
    Json pb = Json::array(), bh = Json::array();
    for (int n = 1; n <= rep.top; ++n) {
      if (static_cast<std::size_t>(n) < rep.p_bijective.size()) pb.push_back(Json{{"n", n}, {"bijective", bool(rep.p_bijective[n])}});
      if (n >= 2 && static_cast<std::size_t>(n) < rep.boundary_homomorphism.size())
        bh.push_back(Json{{"n", n}, {"homomorphism", bool(rep.boundary_homomorphism[n])}});
    }
    return Json{{"passed", rep.passed},
                {"top", rep.top},
                {"boundary_well_defined", rep.boundary_well_defined},
                {"p_bijective", pb},
                {"boundary_homomorphism", bh},
                {"nodes", nodes}};
  }

  Json spec_cohomology(const ComplexPtr& K, int n) {
    auto A = finite_coefficients();
    auto L = pick_subcomplex(*K, "empty");
    auto Z = z_spec(K, L, A, n, opt_.level_budget);
    std::set<std::size_t> B;
    for (std::size_t i = 0; i < Z.size(); ++i)
      if (is_nullhomotopic(Z, i)) B.insert(i);
    return Json{{"n", n},
                {"coefficients", format_group(A)},
                {"z_spec", Z.size()},
                {"b_spec", B.size()},
                {"group_axioms", Z.group_axioms},
                {"mu_matches_pointwise", Z.mu_matches_pointwise},
                {"h_spec", group_json(quotient_group(Z, B))}};
  }

  Json compare(const ComplexPtr& K, int n) {
    auto A = finite_coefficients();
    auto rep = compare_sim_spec(K, pick_subcomplex(*K, "empty"), A, n, opt_.level_budget);
    warn_all(rep.warnings);
    return Json{{"n", n},
                {"coefficients", format_group(A)},
                {"isomorphic", rep.isomorphic},
                {"passed", rep.passed},
                {"h_spec", group_json(rep.h_spec)},
                {"h_sim", group_json(rep.h_sim)},
                {"z_spec", rep.z_spec},
                {"z_sim", rep.z_sim},
                {"b_spec_nullhomotopy", rep.b_spec_nullhomotopy},
                {"b_spec_cone", rep.b_spec_cone ? Json(*rep.b_spec_cone) : Json(nullptr)},
                {"b_sim", rep.b_sim},
                {"bijection", rep.bijection},
                {"homomorphism", rep.homomorphism},
                {"b_methods_agree", rep.b_methods_agree},
                {"b_corresponds", rep.b_corresponds},
                {"witnesses_valid", rep.witnesses_valid},
                {"spec_group_ok", rep.spec_group_ok}};
  }

  Json matrix_lemma(const ComplexPtr& K, int m) {
    FillingIndex F(K);
    auto rep = matrix_lemma_property(F, m, opt_.count, opt_.seed);
    Json s = Json::array();
    for (auto [k, y] : rep.solutions)
      s.push_back(Json{{"k", k}, {"filling", y == static_cast<SimplexId>(-1) ? Json(nullptr) : Json(K->label(m + 1, y))}});
    return Json{{"passed", rep.passed}, {"m", rep.m}, {"seed", rep.seed}, {"instances", rep.instances}, {"solutions", s}};
  }

  Json key_lemma(const ComplexPtr& K, int n) {
    FillingIndex F(K);
    auto rep = key_lemma_property(F, n);
    return Json{{"passed", rep.passed}, {"n", rep.n}, {"cases", rep.cases}, {"filled", rep.filled}};
  }

  Options opt_;
  Json command_;
  Json inputs_ = Json::array();
  Json warnings_ = Json::array();
  int code_ = kOk;
};

/// Arguments after the program name; echo drops --threads and --timing.
inline Json command_echo(const std::vector<std::string>& args) {
  Json a = Json::array();
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& s = args[i];
    if (s == "--timing") continue;
    if (s == "--threads") {
      ++i;
      continue;
    }
    if (s.rfind("--threads=", 0) == 0) continue;
    a.push_back(s);
  }
  return a;
}

inline int error_code(const std::exception& e) {
  if (dynamic_cast<const BudgetExceeded*>(&e)) return kBudget;
  if (dynamic_cast<const ValidationError*>(&e)) return kValidation;
  if (dynamic_cast<const PreconditionError*>(&e) || dynamic_cast<const CapTooSmall*>(&e)) return kPrecondition;
  return kInput;
}

inline const char* error_kind(int code) {
  switch (code) {
    case kValidation: return "validation";
    case kBudget: return "budget";
    case kPrecondition: return "precondition";
    default: return "input";
  }
}

/// Runs one invocation; args exclude the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"kanset: truncated simplicial sets, Kan complexes and their invariants", "kanset"};
  app.footer(builtin_listing());
  app.require_subcommand(1);
  Options opt;
  auto common = [&](CLI::App* s) {
    s->add_option("--dim", opt.dim, "Dimension or degree");
    s->add_option("--n", opt.n, "Degree n (EM spaces, spectral cohomology, lemmas)");
    s->add_option("--k", opt.k, "Missing face of a horn");
    s->add_option("--coeff", opt.coeff, "Coefficient group, e.g. Z, Z/6, Z/2+Z/2");
    s->add_option("--subcomplex", opt.subcomplex, "Named subcomplex, or empty|full|basepoint");
    s->add_option("--basepoint", opt.basepoint, "Vertex label to use as basepoint");
    s->add_option("--up-to", opt.up_to, "Highest simplex dimension of horns to check");
    s->add_option("--cap", opt.cap, "Truncation cap");
    s->add_option("--level-budget", opt.level_budget, "Maximum simplices per level");
    s->add_option("--group", opt.group, "Group for em-space");
    s->add_option("--threads", opt.threads, "Worker threads (0 = hardware)");
    s->add_option("--seed", opt.seed, "Seed for randomized checks");
    s->add_option("--count", opt.count, "Instances for randomized checks");
    s->add_option("-o,--output", opt.output, "Write the built complex here");
    s->add_flag("--timing", opt.timing, "Add wall_time to the report");
    s->add_flag("--unnormalized", opt.unnormalized, "Use all simplices as chain generators");
    s->add_flag("--skeleton", opt.skeleton, "Treat the top level as a skeleton");
  };
  auto* v = app.add_subcommand("validate", "Load a complex and check the simplicial identities");
  auto* b = app.add_subcommand("build", "Construct a complex: standard-simplex, boundary, horn, point, product, "
                                        "coproduct, quotient, cone, path-space, loop-space, complete, em-space");
  auto* a = app.add_subcommand("analyze", "kan, minimal, homotopy-group, homology, cohomology, hurewicz, exactness, "
                                          "spec-cohomology, compare-sim-spec, matrix-lemma, key-lemma, additivity, "
                                          "acyclicity, adjunction");
  for (auto* s : {v, b, a}) {
    common(s);
    s->footer(builtin_listing());
  }
  v->add_option("input", opt.positionals, "File or builtin:<name>")->required();
  b->add_option("args", opt.positionals, "Constructor and its inputs")->required();
  a->add_option("args", opt.positionals, "Analysis and its inputs")->required();

  std::vector<const char*> argv{"kanset"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInput;
  }

  set_threads(opt.threads);
  const auto start = std::chrono::steady_clock::now();
  Runner r(opt, command_echo(args));
  Json result;
  int code = kOk;
  std::optional<Json> error;
  try {
    if (v->parsed()) result = r.run_validate();
    else if (b->parsed()) result = r.run_build();
    else result = r.run_analyze();
    code = r.code();
  } catch (const BudgetExceeded& e) {
    code = kBudget;
    error = Json{{"kind", error_kind(code)}, {"message", e.what()}, {"dimension", e.dim()}};
  } catch (const std::exception& e) {
    code = error_code(e);
    error = Json{{"kind", error_kind(code)}, {"message", e.what()}};
  }
  Json rep = r.report(error ? Json(nullptr) : result);
  if (error) {
    rep["error"] = *error;
    err << "kanset: " << (*error)["message"].get<std::string>() << "\n";
  }
  if (opt.timing)
    rep["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << rep.dump(2) << "\n";
  return code;
}

}  // namespace kanset::cli
