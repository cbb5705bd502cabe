#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "semistab/orthogonal.hpp"
#include "semistab/parabolic.hpp"

namespace semistab {

using json = nlohmann::ordered_json;

// syntax-level failure: the text cannot be turned into an instance at all;
// semantic problems are reported through validate_instance instead
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct DecoratedData {
  long long b = 0;
  long long c = 0;
  long long n_N = 0;

  bool operator==(const DecoratedData&) const = default;
};

struct Instance {
  std::string kind;  // filtration | catalog | orthogonal | parabolic

  // kind == filtration
  WeightedFiltration filtration;
  VanishingPattern pattern;

  // the catalog kinds all live here; plain catalogs leave perp/radical empty
  OrthogonalCatalog ortho;

  // kind == parabolic
  ParabolicData parabolic;

  std::optional<DecoratedData> decorated;

  // semantic defects discovered while loading (sparse tables not closed);
  // they fail validation but are not syntax errors
  std::vector<std::string> load_problems;

  bool operator==(const Instance&) const = default;
};

namespace detail {

inline void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == key;
    if (!ok) throw ParseError("unknown key \"" + key + "\" in " + where);
  }
}

inline const json& field(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing key \"" + key + "\" in " + where);
  return *it;
}

inline long long take_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError(where + " must be an integer");
  return v.get<long long>();
}

inline rat take_fraction(const json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where + " must be a \"p/q\" string");
  auto parsed = parse_fraction(v.get<std::string>());
  if (!parsed) throw ParseError(where + " is not a valid \"p/q\" rational");
  return *parsed;
}

// a vanishing slot is an element id or the string "AMBIENT"
inline int take_slot(const json& v, const SubbundleCatalog& cat, const std::string& where) {
  if (v.is_string()) {
    if (v.get<std::string>() == "AMBIENT") return cat.top();
    throw ParseError(where + ": the only named slot is \"AMBIENT\"");
  }
  const int p = cat.position_of(static_cast<int>(take_int(v, where)));
  if (p < 0) throw ParseError(where + ": unknown element id");
  return p;
}

inline int take_element(const json& v, const SubbundleCatalog& cat, const std::string& where) {
  const int p = cat.position_of(static_cast<int>(take_int(v, where)));
  if (p < 0) throw ParseError(where + ": unknown element id");
  return p;
}

// symmetric + monotone + ambient closure of a vanishing table; loading
// requires the listed entries to be closed already
inline std::vector<std::vector<int>> closed_vanishing(const SubbundleCatalog& cat,
                                                      std::vector<std::vector<int>> v) {
  const int n = cat.size();
  auto slot_leq = [&](int a, int b) {
    if (a == b || b == n) return true;
    return a < n && b < n && cat.below[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] == 1;
  };
  v[static_cast<std::size_t>(n)][static_cast<std::size_t>(n)] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b) {
        if (v[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 1) continue;
        for (int a2 = 0; a2 <= n; ++a2)
          for (int b2 = 0; b2 <= n; ++b2)
            if (slot_leq(a, a2) && slot_leq(b, b2) &&
                v[static_cast<std::size_t>(a2)][static_cast<std::size_t>(b2)] != 1) {
              v[static_cast<std::size_t>(a2)][static_cast<std::size_t>(b2)] = 1;
              changed = true;
            }
        if (v[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] != 1) {
          v[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1;
          changed = true;
        }
      }
  }
  return v;
}

inline void parse_catalog_body(const json& obj, Instance& inst) {
  auto& cat = inst.ortho.base;
  const auto& amb = field(obj, "ambient", "instance");
  if (!amb.is_object()) throw ParseError("\"ambient\" must be an object");
  reject_unknown_keys(amb, {"rank", "degree"}, "\"ambient\"");
  cat.ambient_rank = take_int(field(amb, "rank", "\"ambient\""), "ambient rank");
  cat.ambient_degree = take_int(field(amb, "degree", "\"ambient\""), "ambient degree");

  const auto& els = field(obj, "elements", "instance");
  if (!els.is_array()) throw ParseError("\"elements\" must be an array");
  for (const auto& e : els) {
    if (!e.is_object()) throw ParseError("each element must be an object");
    reject_unknown_keys(e, {"id", "rank", "degree"}, "an element");
    CatalogElement el;
    el.id = static_cast<int>(take_int(field(e, "id", "an element"), "element id"));
    el.rank = take_int(field(e, "rank", "an element"), "element rank");
    el.degree = take_int(field(e, "degree", "an element"), "element degree");
    cat.elements.push_back(el);
  }
  const int n = cat.size();

  cat.below.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  const auto& below = field(obj, "containment", "instance");
  if (!below.is_array()) throw ParseError("\"containment\" must be an array of id pairs");
  for (const auto& pr : below) {
    if (!pr.is_array() || pr.size() != 2)
      throw ParseError("\"containment\" entries must be [id, id] pairs");
    const int a = take_element(pr[0], cat, "containment");
    const int b = take_element(pr[1], cat, "containment");
    cat.below[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
  }

  cat.vanishing.assign(static_cast<std::size_t>(n) + 1,
                       std::vector<int>(static_cast<std::size_t>(n) + 1, 0));
  const auto& vang = field(obj, "vanishing", "instance");
  if (!vang.is_array()) throw ParseError("\"vanishing\" must be an array of slot pairs");
  for (const auto& pr : vang) {
    if (!pr.is_array() || pr.size() != 2)
      throw ParseError("\"vanishing\" entries must be [slot, slot] pairs");
    const int a = take_slot(pr[0], cat, "vanishing");
    const int b = take_slot(pr[1], cat, "vanishing");
    cat.vanishing[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
    cat.vanishing[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1;
  }
  auto closed = closed_vanishing(cat, cat.vanishing);
  if (closed != cat.vanishing) {
    inst.load_problems.push_back("vanishing list must already contain its closure");
    cat.vanishing = std::move(closed);
  }
}

inline void parse_perp_block(const json& obj, Instance& inst) {
  auto& oc = inst.ortho;
  const auto& cat = oc.base;
  oc.perp.assign(static_cast<std::size_t>(cat.size()), -1);
  const auto& perp = field(obj, "perp", "instance");
  if (!perp.is_array()) throw ParseError("\"perp\" must be an array of id pairs");
  auto assign = [&](int x, int y) {
    int& slot = oc.perp[static_cast<std::size_t>(x)];
    if (slot != -1 && slot != y) throw ParseError("conflicting perp assignment");
    slot = y;
  };
  for (const auto& pr : perp) {
    if (!pr.is_array() || pr.size() != 2) throw ParseError("\"perp\" entries must be [id, id] pairs");
    const int a = take_element(pr[0], cat, "perp");
    const int b = take_element(pr[1], cat, "perp");
    assign(a, b);
    assign(b, a);
  }
  for (int v : oc.perp)
    if (v == -1) throw ParseError("\"perp\" must cover every element");

  if (auto it = obj.find("twist"); it != obj.end())
    oc.twist_degree = take_int(*it, "twist degree");

  if (auto it = obj.find("radical"); it != obj.end()) {
    if (!it->is_array()) throw ParseError("\"radical\" must be an array of pairs");
    for (const auto& pr : *it) {
      if (!pr.is_array() || pr.size() != 2)
        throw ParseError("\"radical\" entries must be [id, id or \"ZERO\"] pairs");
      const int key = take_element(pr[0], cat, "radical");
      int value = ID_ZERO;
      if (!(pr[1].is_string() && pr[1].get<std::string>() == "ZERO"))
        value = take_element(pr[1], cat, "radical");
      if (oc.radical.count(key)) throw ParseError("duplicate radical key");
      oc.radical[key] = value;
    }
  }
}

inline void parse_parabolic_block(const json& obj, Instance& inst) {
  const auto& cat = inst.ortho.base;
  const auto& block = field(obj, "parabolic", "instance");
  if (!block.is_object()) throw ParseError("\"parabolic\" must be an object");
  reject_unknown_keys(block, {"gluing", "top"}, "\"parabolic\"");
  inst.parabolic.p.assign(static_cast<std::size_t>(cat.size()), -1);
  const auto& gluing = field(block, "gluing", "\"parabolic\"");
  if (!gluing.is_array()) throw ParseError("\"gluing\" must be an array of [id, value] pairs");
  std::vector<bool> seen(static_cast<std::size_t>(cat.size()), false);
  for (const auto& pr : gluing) {
    if (!pr.is_array() || pr.size() != 2)
      throw ParseError("\"gluing\" entries must be [id, value] pairs");
    const int p = take_element(pr[0], cat, "gluing");
    if (seen[static_cast<std::size_t>(p)]) throw ParseError("duplicate gluing entry");
    seen[static_cast<std::size_t>(p)] = true;
    inst.parabolic.p[static_cast<std::size_t>(p)] = take_int(pr[1], "gluing value");
  }
  for (bool s : seen)
    if (!s) throw ParseError("\"gluing\" must list every element exactly once");
  inst.parabolic.p_top = take_int(field(block, "top", "\"parabolic\""), "ambient gluing value");
}

inline void parse_decorated_block(const json& obj, Instance& inst) {
  auto it = obj.find("decorated");
  if (it == obj.end()) return;
  if (!it->is_object()) throw ParseError("\"decorated\" must be an object");
  reject_unknown_keys(*it, {"b", "c", "nN"}, "\"decorated\"");
  DecoratedData dd;
  dd.b = take_int(field(*it, "b", "\"decorated\""), "decorated b");
  dd.c = take_int(field(*it, "c", "\"decorated\""), "decorated c");
  dd.n_N = take_int(field(*it, "nN", "\"decorated\""), "decorated nN");
  inst.decorated = dd;
}

}  // namespace detail

inline Instance parse_instance(const std::string& text) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("not valid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw ParseError("instance must be a JSON object");

  Instance inst;
  const auto& kind = detail::field(obj, "kind", "instance");
  if (!kind.is_string()) throw ParseError("\"kind\" must be a string");
  inst.kind = kind.get<std::string>();

  if (inst.kind == "filtration") {
    detail::reject_unknown_keys(
        obj, {"kind", "ambient", "ranks", "degrees", "weights", "pattern", "decorated"}, "instance");
    const auto& amb = detail::field(obj, "ambient", "instance");
    if (!amb.is_object()) throw ParseError("\"ambient\" must be an object");
    detail::reject_unknown_keys(amb, {"rank", "degree"}, "\"ambient\"");
    inst.filtration.ambient_rank =
        detail::take_int(detail::field(amb, "rank", "\"ambient\""), "ambient rank");
    inst.filtration.ambient_degree =
        detail::take_int(detail::field(amb, "degree", "\"ambient\""), "ambient degree");
    const std::pair<const char*, std::vector<long long>*> int_arrays[] = {
        {"ranks", &inst.filtration.ranks}, {"degrees", &inst.filtration.degrees}};
    for (const auto& [key, target] : int_arrays) {
      const auto& arr = detail::field(obj, key, "instance");
      if (!arr.is_array()) throw ParseError(std::string("\"") + key + "\" must be an array");
      for (const auto& v : arr) target->push_back(detail::take_int(v, key));
    }
    const auto& ws = detail::field(obj, "weights", "instance");
    if (!ws.is_array()) throw ParseError("\"weights\" must be an array");
    for (const auto& v : ws) inst.filtration.weights.push_back(detail::take_fraction(v, "weight"));
    const auto& rows = detail::field(obj, "pattern", "instance");
    if (!rows.is_array()) throw ParseError("\"pattern\" must be an array of rows");
    for (const auto& row : rows) {
      if (!row.is_array()) throw ParseError("\"pattern\" rows must be arrays");
      std::vector<int> r;
      for (const auto& v : row) r.push_back(static_cast<int>(detail::take_int(v, "pattern entry")));
      inst.pattern.m.push_back(std::move(r));
    }
  } else if (inst.kind == "catalog" || inst.kind == "orthogonal" || inst.kind == "parabolic") {
    std::vector<std::string> allowed = {"kind", "ambient", "elements", "containment", "vanishing",
                                        "decorated"};
    if (inst.kind == "orthogonal") {
      allowed.push_back("perp");
      allowed.push_back("twist");
      allowed.push_back("radical");
    }
    if (inst.kind == "parabolic") allowed.push_back("parabolic");
    detail::reject_unknown_keys(obj, allowed, "instance");
    detail::parse_catalog_body(obj, inst);
    if (inst.kind == "orthogonal") detail::parse_perp_block(obj, inst);
    if (inst.kind == "parabolic") detail::parse_parabolic_block(obj, inst);
  } else {
    throw ParseError("unknown kind \"" + inst.kind + "\"");
  }
  detail::parse_decorated_block(obj, inst);
  return inst;
}

// semantic check of a parsed instance; parse errors never reach this far
inline ValidationReport validate_instance(const Instance& inst) {
  ValidationReport rep;
  for (const auto& p : inst.load_problems) rep.add(p);
  if (inst.kind == "filtration") {
    for (const auto& p : validate_filtration(inst.filtration).problems) rep.add(p);
    for (const auto& p : validate_pattern(inst.pattern).problems) rep.add(p);
    if (inst.pattern.size() != inst.filtration.length() + 1)
      rep.add("pattern size does not match the filtration length");
  } else if (inst.kind == "catalog") {
    for (const auto& p : validate_catalog(inst.ortho.base).problems) rep.add(p);
  } else if (inst.kind == "orthogonal") {
    for (const auto& p : validate_orthogonal(inst.ortho).problems) rep.add(p);
  } else if (inst.kind == "parabolic") {
    auto base = validate_catalog(inst.ortho.base);
    for (const auto& p : base.problems) rep.add(p);
    if (base.ok())
      for (const auto& p : validate_parabolic(inst.ortho.base, inst.parabolic).problems) rep.add(p);
  } else {
    rep.add("unknown kind");
  }
  return rep;
}

namespace detail {

inline json catalog_body_json(const Instance& inst) {
  const auto& cat = inst.ortho.base;
  json obj;
  obj["kind"] = inst.kind;
  obj["ambient"] = {{"rank", cat.ambient_rank}, {"degree", cat.ambient_degree}};
  obj["elements"] = json::array();
  for (const auto& e : cat.elements)
    obj["elements"].push_back({{"id", e.id}, {"rank", e.rank}, {"degree", e.degree}});
  obj["containment"] = json::array();
  for (int i = 0; i < cat.size(); ++i)
    for (int j = 0; j < cat.size(); ++j)
      if (cat.below[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
        obj["containment"].push_back({cat.elements[static_cast<std::size_t>(i)].id,
                                      cat.elements[static_cast<std::size_t>(j)].id});
  auto slot_json = [&](int s) -> json {
    if (s == cat.size()) return "AMBIENT";
    return cat.elements[static_cast<std::size_t>(s)].id;
  };
  obj["vanishing"] = json::array();
  for (int a = 0; a <= cat.size(); ++a)
    for (int b = a; b <= cat.size(); ++b)
      if (cat.vanishing[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)])
        obj["vanishing"].push_back({slot_json(a), slot_json(b)});
  return obj;
}

}  // namespace detail

// canonical text form; parse_instance(print_instance(x)) == x for every valid
// instance, and byte-identical output for equal instances
inline std::string print_instance(const Instance& inst, int indent = 2) {
  json obj;
  if (inst.kind == "filtration") {
    obj["kind"] = inst.kind;
    obj["ambient"] = {{"rank", inst.filtration.ambient_rank},
                      {"degree", inst.filtration.ambient_degree}};
    obj["ranks"] = inst.filtration.ranks;
    obj["degrees"] = inst.filtration.degrees;
    obj["weights"] = json::array();
    for (const auto& w : inst.filtration.weights) obj["weights"].push_back(fraction_string(w));
    obj["pattern"] = inst.pattern.m;
  } else {
    obj = detail::catalog_body_json(inst);
    if (inst.kind == "orthogonal") {
      const auto& oc = inst.ortho;
      obj["perp"] = json::array();
      for (int i = 0; i < oc.base.size(); ++i)
        if (oc.perp[static_cast<std::size_t>(i)] >= i)
          obj["perp"].push_back({oc.base.elements[static_cast<std::size_t>(i)].id,
                                 oc.base.elements[static_cast<std::size_t>(
                                     oc.perp[static_cast<std::size_t>(i)])].id});
      obj["twist"] = oc.twist_degree;
      if (!oc.radical.empty()) {
        obj["radical"] = json::array();
        for (const auto& [key, value] : oc.radical) {
          json img;
          if (value == ID_ZERO)
            img = "ZERO";
          else
            img = oc.base.elements[static_cast<std::size_t>(value)].id;
          obj["radical"].push_back({oc.base.elements[static_cast<std::size_t>(key)].id, img});
        }
      }
    }
    if (inst.kind == "parabolic") {
      json block;
      block["gluing"] = json::array();
      for (int i = 0; i < inst.ortho.base.size(); ++i)
        block["gluing"].push_back({inst.ortho.base.elements[static_cast<std::size_t>(i)].id,
                                   inst.parabolic.p[static_cast<std::size_t>(i)]});
      block["top"] = inst.parabolic.p_top;
      obj["parabolic"] = block;
    }
  }
  if (inst.decorated)
    obj["decorated"] = {{"b", inst.decorated->b}, {"c", inst.decorated->c},
                        {"nN", inst.decorated->n_N}};
  return obj.dump(indent) + (indent >= 0 ? "\n" : "");
}

// convenience wrappers used by the generators and the command line
inline Instance filtration_instance(WeightedFiltration f, VanishingPattern M) {
  Instance inst;
  inst.kind = "filtration";
  inst.filtration = std::move(f);
  inst.pattern = std::move(M);
  return inst;
}

inline Instance catalog_instance(SubbundleCatalog cat) {
  Instance inst;
  inst.kind = "catalog";
  inst.ortho.base = std::move(cat);
  return inst;
}

inline Instance orthogonal_instance(OrthogonalCatalog oc) {
  Instance inst;
  inst.kind = "orthogonal";
  inst.ortho = std::move(oc);
  return inst;
}

inline Instance parabolic_instance(SubbundleCatalog cat, ParabolicData pd) {
  Instance inst;
  inst.kind = "parabolic";
  inst.ortho.base = std::move(cat);
  inst.parabolic = std::move(pd);
  return inst;
}

}  // namespace semistab
