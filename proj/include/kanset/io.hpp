#pragma once

// JSON documents for complexes.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "json.hpp"

#include "kanset/errors.hpp"
#include "kanset/simplicial_set.hpp"

namespace kanset {

using Json = nlohmann::ordered_json;

/// Label used for collapsed simplices at level k.
inline std::string collapsed_label(int k) { return "⋆" + std::to_string(k); }

/// If label has the collapsed form "⋆j", return j.
inline std::optional<int> collapsed_level(const std::string& label) {
  static const std::string star = "⋆";
  if (label.compare(0, star.size(), star) != 0 || label.size() == star.size()) return std::nullopt;
  int v = 0;
  for (std::size_t p = star.size(); p < label.size(); ++p) {
    if (label[p] < '0' || label[p] > '9') return std::nullopt;
    v = v * 10 + (label[p] - '0');
  }
  return v;
}

class ValidationFailure : public ValidationError {
 public:
  ValidationFailure(const std::string& what, ValidationReport report)
      : ValidationError(what), report_(std::move(report)) {}
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Canonical document: levels sorted by label (byte order), every table in that order.
inline Json to_json(const SimplicialSet& K) {
  const int N = K.cap();
  std::vector<std::vector<SimplexId>> order(N + 1);
  for (int k = 0; k <= N; ++k) {
    order[k].resize(K.size(k));
    std::iota(order[k].begin(), order[k].end(), 0);
    std::sort(order[k].begin(), order[k].end(),
              [&](SimplexId a, SimplexId b) { return K.label(k, a) < K.label(k, b); });
  }
  Json doc;
  doc["name"] = K.name();
  doc["cap"] = N;
  Json levels = Json::array();
  for (int k = 0; k <= N; ++k) {
    Json lv = Json::array();
    for (SimplexId x : order[k]) lv.push_back(K.label(k, x));
    levels.push_back(std::move(lv));
  }
  doc["levels"] = std::move(levels);
  Json faces = Json::array();
  for (int k = 1; k <= N; ++k) {
    Json per_i = Json::array();
    for (int i = 0; i <= k; ++i) {
      Json col = Json::array();
      for (SimplexId x : order[k]) col.push_back(K.label(k - 1, K.face(k, i, x)));
      per_i.push_back(std::move(col));
    }
    faces.push_back(std::move(per_i));
  }
  doc["faces"] = std::move(faces);
  Json degens = Json::array();
  for (int k = 0; k < N; ++k) {
    Json per_i = Json::array();
    for (int i = 0; i <= k; ++i) {
      Json col = Json::array();
      for (SimplexId x : order[k]) col.push_back(K.label(k + 1, K.degen(k, i, x)));
      per_i.push_back(std::move(col));
    }
    degens.push_back(std::move(per_i));
  }
  doc["degeneracies"] = std::move(degens);
  if (K.basepoint()) doc["basepoint"] = K.label(0, *K.basepoint());
  if (!K.subcomplexes().empty()) {
    Json subs = Json::object();
    for (const auto& [nm, mask] : K.subcomplexes()) {
      Json per = Json::array();
      for (int k = 0; k <= N; ++k) {
        Json lv = Json::array();
        for (SimplexId x : order[k])
          if (mask.contains(k, x)) lv.push_back(K.label(k, x));
        per.push_back(std::move(lv));
      }
      subs[nm] = std::move(per);
    }
    doc["subcomplexes"] = std::move(subs);
  }
  if (K.em()) doc["em"] = Json{{"group", K.em()->group}, {"n", K.em()->n}};
  return doc;
}

inline std::string to_canonical_string(const SimplicialSet& K) { return to_json(K).dump(2) + "\n"; }

namespace detail {

[[noreturn]] inline void field_error(const std::string& field, const std::string& msg) {
  throw ParseError("field '" + field + "': " + msg);
}

inline const Json& require(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) field_error(key, "missing");
  return *it;
}

inline std::vector<std::string> string_array(const Json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array");
  std::vector<std::string> out;
  for (std::size_t p = 0; p < j.size(); ++p) {
    if (!j[p].is_string()) field_error(field + "[" + std::to_string(p) + "]", "expected a string label");
    out.push_back(j[p].get<std::string>());
  }
  return out;
}

}  // namespace detail

/// Parse a complex document (no validation of the simplicial identities).
inline SimplicialSet from_json_unchecked(const Json& doc) {
  using detail::field_error;
  if (!doc.is_object()) throw ParseError("document is not a JSON object");
  static const std::vector<std::string> known{"name",     "cap",          "levels", "faces",
                                              "degeneracies", "basepoint", "subcomplexes", "em"};
  for (const auto& [key, _] : doc.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) field_error(key, "unknown field");

  SimplicialSetData d;
  const Json& name = detail::require(doc, "name");
  if (!name.is_string()) field_error("name", "expected a string");
  d.name = name.get<std::string>();
  const Json& cap = detail::require(doc, "cap");
  if (!cap.is_number_integer() || cap.get<long long>() < 0) field_error("cap", "expected a non-negative integer");
  d.cap = cap.get<int>();
  const int N = d.cap;

  const Json& levels = detail::require(doc, "levels");
  if (!levels.is_array() || static_cast<int>(levels.size()) != N + 1)
    field_error("levels", "expected " + std::to_string(N + 1) + " levels");
  std::vector<std::unordered_map<std::string, SimplexId>> index(N + 1);
  for (int k = 0; k <= N; ++k) {
    const std::string f = "levels[" + std::to_string(k) + "]";
    d.labels.push_back(detail::string_array(levels[k], f));
    for (SimplexId j = 0; j < d.labels[k].size(); ++j) {
      const auto& lab = d.labels[k][j];
      if (auto c = collapsed_level(lab); c && *c != k)
        field_error(f, "label '" + lab + "' is reserved for collapsed simplices of level " + std::to_string(*c));
      if (!index[k].emplace(lab, j).second) field_error(f, "duplicate label '" + lab + "'");
    }
  }
  auto resolve = [&](const Json& v, int k, const std::string& f) -> SimplexId {
    if (!v.is_string()) field_error(f, "expected a string label");
    auto it = index[k].find(v.get<std::string>());
    if (it == index[k].end()) field_error(f, "unknown label '" + v.get<std::string>() + "' at level " + std::to_string(k));
    return it->second;
  };
  auto read_ops = [&](const Json& ops, int k, int target, const std::string& f) {
    if (!ops.is_array() || static_cast<int>(ops.size()) != k + 1)
      field_error(f, "expected " + std::to_string(k + 1) + " operator tables");
    std::vector<Level> out;
    for (int i = 0; i <= k; ++i) {
      const std::string fi = f + "[" + std::to_string(i) + "]";
      const Json& col = ops[i];
      if (!col.is_array() || col.size() != d.labels[k].size())
        field_error(fi, "expected " + std::to_string(d.labels[k].size()) + " entries");
      Level l;
      for (std::size_t j = 0; j < col.size(); ++j) l.push_back(resolve(col[j], target, fi + "[" + std::to_string(j) + "]"));
      out.push_back(std::move(l));
    }
    return out;
  };

  const Json& faces = detail::require(doc, "faces");
  if (!faces.is_array() || static_cast<int>(faces.size()) != N) field_error("faces", "expected " + std::to_string(N) + " entries");
  d.faces.resize(N + 1);
  for (int k = 1; k <= N; ++k) d.faces[k] = read_ops(faces[k - 1], k, k - 1, "faces[" + std::to_string(k - 1) + "]");
  const Json& degens = detail::require(doc, "degeneracies");
  if (!degens.is_array() || static_cast<int>(degens.size()) != N)
    field_error("degeneracies", "expected " + std::to_string(N) + " entries");
  for (int k = 0; k < N; ++k) d.degens.push_back(read_ops(degens[k], k, k + 1, "degeneracies[" + std::to_string(k) + "]"));

  if (auto it = doc.find("basepoint"); it != doc.end()) d.basepoint = resolve(*it, 0, "basepoint");
  if (auto it = doc.find("subcomplexes"); it != doc.end()) {
    if (!it->is_object()) field_error("subcomplexes", "expected an object");
    for (const auto& [nm, per] : it->items()) {
      const std::string f = "subcomplexes." + nm;
      if (!per.is_array() || static_cast<int>(per.size()) != N + 1)
        field_error(f, "expected " + std::to_string(N + 1) + " levels");
      Subcomplex m;
      for (int k = 0; k <= N; ++k) {
        m.member.emplace_back(d.labels[k].size(), 0);
        for (const auto& lab : detail::string_array(per[k], f)) m.member[k][resolve(Json(lab), k, f)] = 1;
      }
      d.subcomplexes[nm] = std::move(m);
    }
  }
  if (auto it = doc.find("em"); it != doc.end()) {
    if (!it->is_object()) field_error("em", "expected an object");
    for (const auto& [key, _] : it->items())
      if (key != "group" && key != "n") field_error("em." + key, "unknown field");
    const Json& g = detail::require(*it, "group");
    const Json& n = detail::require(*it, "n");
    if (!g.is_string()) field_error("em.group", "expected a string");
    if (!n.is_number_integer()) field_error("em.n", "expected an integer");
    d.em = EmTag{g.get<std::string>(), n.get<int>()};
  }
  return SimplicialSet(std::move(d));
}

/// Parse and validate; invalid complexes raise ValidationFailure.
inline ComplexPtr from_json(const Json& doc) {
  auto K = std::make_shared<const SimplicialSet>(from_json_unchecked(doc));
  auto rep = validate(*K);
  if (!rep.ok()) {
    // first instance of each violated identity
    std::string msg = "complex '" + K->name() + "' is invalid";
    std::vector<bool> seen(6, false);
    for (const auto& v : rep.violations)
      if (!seen[v.identity]) {
        seen[v.identity] = true;
        msg += "; " + v.describe();
      }
    throw ValidationFailure(msg, rep);
  }
  return K;
}

inline ComplexPtr parse_complex(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return from_json(doc);
}

inline ComplexPtr load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_complex(ss.str());
}

inline void save(const SimplicialSet& K, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << to_canonical_string(K);
}

/// FNV-1a 64-bit digest, hex.
inline std::string digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace kanset
