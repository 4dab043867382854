// Apache License, Version 2.0, refer to LICENSE.txt

#include "cbr/specio.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cbr/error.hpp"

namespace cbr {

using Json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------- reading

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(Errc::parse_error, path + ": " + what);
}

void allow_keys(const Json& j, const std::string& path, std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) fail(path + "." + key, "unknown field");
  }
}

const Json& field(const Json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "required field missing");
  return *it;
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::uint64_t as_count(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  if (j.is_number_float()) {
    double v = j.get<double>();
    if (v >= 0.0 && v == std::floor(v) && v < 1.8e19) return static_cast<std::uint64_t>(v);
  }
  fail(path, "expected a non-negative integer");
}

std::string string_at(const Json& j, const std::string& path, const char* key) {
  return as_string(field(j, path, key), path + "." + key);
}

std::optional<std::string> optional_string(const Json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) return std::nullopt;
  return as_string(*it, path + "." + key);
}

std::vector<std::string> strings(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_string(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> numbers(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

template <class T, class Parse>
T enum_value(const Json& j, const std::string& path, Parse parse) {
  auto text = as_string(j, path);
  auto v = parse(text);
  if (!v) fail(path, "unrecognized value '" + text + "'");
  return *v;
}

AlphabetDecl read_alphabet(const Json& j, const std::string& path) {
  AlphabetDecl a;
  if (!j.is_object()) fail(path, "expected an object");
  a.name = string_at(j, path, "name");
  a.kind = string_at(j, path, "kind");
  if (a.kind == "enumerated") {
    allow_keys(j, path, {"name", "kind", "letters", "probabilities"});
    const auto& letters = field(j, path, "letters");
    if (!letters.is_array()) fail(path + ".letters", "expected an array");
    for (std::size_t i = 0; i < letters.size(); ++i) {
      std::string lp = path + ".letters[" + std::to_string(i) + "]";
      if (letters[i].is_string()) {
        a.letters.push_back({letters[i].get<std::string>(), ""});
      } else {
        allow_keys(letters[i], lp, {"id", "payload"});
        a.letters.push_back({string_at(letters[i], lp, "id"), optional_string(letters[i], lp, "payload").value_or("")});
      }
    }
    if (auto it = j.find("probabilities"); it != j.end()) a.probabilities = numbers(*it, path + ".probabilities");
  } else if (a.kind == "symbolic") {
    allow_keys(j, path, {"name", "kind", "entropy_bits", "max_entropy_bits"});
    a.entropy_bits = as_number(field(j, path, "entropy_bits"), path + ".entropy_bits");
    a.max_entropy_bits = as_number(field(j, path, "max_entropy_bits"), path + ".max_entropy_bits");
  } else if (a.kind == "product") {
    allow_keys(j, path, {"name", "kind", "factor", "count"});
    a.base = string_at(j, path, "factor");
    a.count = as_count(field(j, path, "count"), path + ".count");
  } else if (a.kind == "restricted") {
    allow_keys(j, path, {"name", "kind", "base", "subset"});
    a.base = string_at(j, path, "base");
    a.subset = strings(field(j, path, "subset"), path + ".subset");
  } else if (a.kind == "derived") {
    allow_keys(j, path, {"name", "kind"});
  } else {
    fail(path + ".kind", "unrecognized alphabet kind '" + a.kind + "'");
  }
  return a;
}

CostDecl read_cost(const Json& j, const std::string& path) {
  CostDecl c;
  if (j.is_number()) {
    c.amount = j.get<double>();
    return c;
  }
  allow_keys(j, path, {"amount", "kind", "unit"});
  c.amount = as_number(field(j, path, "amount"), path + ".amount");
  if (auto it = j.find("kind"); it != j.end()) {
    c.kind = enum_value<CostKind>(*it, path + ".kind", [](std::string_view s) { return parse_cost_kind(s); });
  }
  c.unit = optional_string(j, path, "unit");
  return c;
}

TransformDecl read_transform(const Json& j, const std::string& path) {
  TransformDecl t;
  if (!j.is_object()) fail(path, "expected an object");
  t.name = string_at(j, path, "name");
  t.kind = string_at(j, path, "kind");
  if (auto it = j.find("node_kind"); it != j.end()) {
    t.node_kind = enum_value<NodeKind>(*it, path + ".node_kind", [](std::string_view s) { return parse_node_kind(s); });
  }
  if (auto it = j.find("cost"); it != j.end()) t.cost = read_cost(*it, path + ".cost");

  if (t.kind == "grouping") {
    allow_keys(j, path, {"name", "kind", "node_kind", "cost", "map"});
    const auto& map = field(j, path, "map");
    if (!map.is_object()) fail(path + ".map", "expected an object of input letter -> output letter");
    for (const auto& [in, out] : map.items()) t.map.emplace_back(in, as_string(out, path + ".map." + in));
  } else if (t.kind == "quantizer") {
    allow_keys(j, path, {"name", "kind", "node_kind", "cost", "edges", "labels"});
    t.edges = numbers(field(j, path, "edges"), path + ".edges");
    if (auto it = j.find("labels"); it != j.end()) t.labels = strings(*it, path + ".labels");
  } else if (t.kind == "aggregator") {
    allow_keys(j, path, {"name", "kind", "node_kind", "cost", "window", "statistic", "levels"});
    t.window = as_count(field(j, path, "window"), path + ".window");
    if (auto s = optional_string(j, path, "statistic")) t.statistic = *s;
    if (auto it = j.find("levels"); it != j.end()) t.levels = as_count(*it, path + ".levels");
  } else if (t.kind == "channel") {
    allow_keys(j, path, {"name", "kind", "node_kind", "cost", "output_letters", "rows"});
    t.output_letters = strings(field(j, path, "output_letters"), path + ".output_letters");
    const auto& rows = field(j, path, "rows");
    if (!rows.is_object()) fail(path + ".rows", "expected an object of input letter -> probabilities");
    for (const auto& [in, row] : rows.items()) t.rows.emplace_back(in, numbers(row, path + ".rows." + in));
  } else if (t.kind == "declared") {
    allow_keys(j, path, {"name", "kind", "node_kind", "cost", "output", "distortion_bits"});
    t.output = string_at(j, path, "output");
    if (auto it = j.find("distortion_bits"); it != j.end()) t.distortion_bits = as_number(*it, path + ".distortion_bits");
  } else if (t.kind == "composite") {
    allow_keys(j, path, {"name", "kind", "node_kind", "cost", "first", "second"});
    t.first = string_at(j, path, "first");
    t.second = string_at(j, path, "second");
  } else {
    fail(path + ".kind", "unrecognized transform kind '" + t.kind + "'");
  }
  return t;
}

ReconstructionDecl read_reconstruction(const Json& j, const std::string& path) {
  ReconstructionDecl r;
  if (!j.is_object()) fail(path, "expected an object");
  r.name = string_at(j, path, "name");
  r.kind = string_at(j, path, "kind");
  if (r.kind == "prior_weighted") {
    allow_keys(j, path, {"name", "kind", "prior"});
    const auto& prior = field(j, path, "prior");
    if (!prior.is_object()) fail(path + ".prior", "expected an object of letter -> mass");
    for (const auto& [id, mass] : prior.items()) r.prior.emplace_back(id, as_number(mass, path + ".prior." + id));
  } else if (r.kind == "declared") {
    allow_keys(j, path, {"name", "kind", "bits"});
    r.bits = as_number(field(j, path, "bits"), path + ".bits");
  } else if (r.kind == "exact_conditional" || r.kind == "uniform_preimage" || r.kind == "mutual_information") {
    allow_keys(j, path, {"name", "kind"});
  } else {
    fail(path + ".kind", "unrecognized reconstruction kind '" + r.kind + "'");
  }
  return r;
}

GraphDecl read_graph(const Json& j, const std::string& path) {
  GraphDecl g;
  allow_keys(j, path, {"edges", "decisional", "node_kinds", "shared_mi", "class_tag", "level_tag"});
  if (auto it = j.find("edges"); it != j.end()) {
    if (!it->is_array()) fail(path + ".edges", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      std::string ep = path + ".edges[" + std::to_string(i) + "]";
      const auto& e = (*it)[i];
      allow_keys(e, ep, {"id", "from", "to", "transform", "reconstruction"});
      g.edges.push_back({optional_string(e, ep, "id"), string_at(e, ep, "from"), string_at(e, ep, "to"),
                         string_at(e, ep, "transform"), optional_string(e, ep, "reconstruction")});
    }
  }
  g.decisional = optional_string(j, path, "decisional");
  if (auto it = j.find("node_kinds"); it != j.end()) {
    if (!it->is_object()) fail(path + ".node_kinds", "expected an object");
    for (const auto& [node, kind] : it->items()) {
      g.node_kinds[node] =
          enum_value<NodeKind>(kind, path + ".node_kinds." + node, [](std::string_view s) { return parse_node_kind(s); });
    }
  }
  if (auto it = j.find("shared_mi"); it != j.end()) {
    if (!it->is_object()) fail(path + ".shared_mi", "expected an object");
    for (const auto& [node, bits] : it->items()) g.shared_mi[node] = as_number(bits, path + ".shared_mi." + node);
  }
  if (auto it = j.find("class_tag"); it != j.end()) {
    g.class_tag = enum_value<WorkflowClass>(*it, path + ".class_tag",
                                            [](std::string_view s) { return parse_workflow_class(s); });
  }
  if (auto it = j.find("level_tag"); it != j.end()) {
    g.level_tag = enum_value<VisLevel>(*it, path + ".level_tag", [](std::string_view s) { return parse_vis_level(s); });
  }
  return g;
}

std::string value_label(const ParamValue& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  std::ostringstream os;
  os << std::get<double>(v);
  return os.str();
}

std::vector<Dimension> read_param_space(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<Dimension> dims;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string dp = path + "[" + std::to_string(i) + "]";
    allow_keys(j[i], dp, {"edge", "parameter", "candidates"});
    Dimension d{string_at(j[i], dp, "edge"), string_at(j[i], dp, "parameter"), {}};
    const auto& cs = field(j[i], dp, "candidates");
    if (!cs.is_array()) fail(dp + ".candidates", "expected an array");
    for (std::size_t k = 0; k < cs.size(); ++k) {
      std::string cp = dp + ".candidates[" + std::to_string(k) + "]";
      Candidate c;
      const Json* value = &cs[k];
      if (cs[k].is_object()) {
        allow_keys(cs[k], cp, {"label", "value", "cost"});
        value = &field(cs[k], cp, "value");
        if (auto it = cs[k].find("cost"); it != cs[k].end()) c.cost = as_number(*it, cp + ".cost");
      }
      if (value->is_boolean()) {
        c.value = value->get<bool>();
      } else if (value->is_number()) {
        c.value = value->get<double>();
      } else if (value->is_string()) {
        c.value = value->get<std::string>();
      } else {
        fail(cp + ".value", "expected a number, boolean or name");
      }
      c.label = cs[k].is_object() ? optional_string(cs[k], cp, "label").value_or(value_label(c.value))
                                  : value_label(c.value);
      d.candidates.push_back(std::move(c));
    }
    dims.push_back(std::move(d));
  }
  return dims;
}

template <class T, class Read>
std::vector<T> read_list(const Json& j, const char* key, Read read) {
  std::vector<T> out;
  auto it = j.find(key);
  if (it == j.end()) return out;
  if (!it->is_array()) fail(key, "expected an array");
  for (std::size_t i = 0; i < it->size(); ++i) out.push_back(read((*it)[i], std::string(key) + "[" + std::to_string(i) + "]"));
  return out;
}

WorkflowSpec spec_from_json(const Json& j) {
  allow_keys(j, "$", {"schema_version", "name", "fixture_tag", "entropy_mode", "cost_model", "alphabets",
                      "transforms", "reconstructions", "graph", "param_space", "notes"});
  WorkflowSpec s;
  s.schema_version = string_at(j, "$", "schema_version");
  if (s.schema_version != kSchemaVersion) {
    throw Error(Errc::unknown_schema_version, "'" + s.schema_version + "', expected '" + std::string(kSchemaVersion) + "'");
  }
  s.name = optional_string(j, "$", "name").value_or("");
  s.fixture_tag = optional_string(j, "$", "fixture_tag");
  if (auto it = j.find("entropy_mode"); it != j.end()) {
    s.entropy_mode =
        enum_value<EntropyMode>(*it, "entropy_mode", [](std::string_view t) { return parse_entropy_mode(t); });
  }
  if (auto it = j.find("cost_model"); it != j.end()) {
    allow_keys(*it, "cost_model", {"kind", "unit", "merge"});
    if (auto k = it->find("kind"); k != it->end()) {
      s.cost_model.kind = enum_value<CostKind>(*k, "cost_model.kind", [](std::string_view t) { return parse_cost_kind(t); });
    }
    if (auto u = optional_string(*it, "cost_model", "unit")) s.cost_model.unit = *u;
    if (auto m = it->find("merge"); m != it->end()) {
      s.cost_model.merge =
          enum_value<CostMerge>(*m, "cost_model.merge", [](std::string_view t) { return parse_cost_merge(t); });
    }
  }
  s.alphabets = read_list<AlphabetDecl>(j, "alphabets", read_alphabet);
  s.transforms = read_list<TransformDecl>(j, "transforms", read_transform);
  s.reconstructions = read_list<ReconstructionDecl>(j, "reconstructions", read_reconstruction);
  if (auto it = j.find("graph"); it != j.end()) s.graph = read_graph(*it, "graph");
  if (auto it = j.find("param_space"); it != j.end()) s.param_space = read_param_space(*it, "param_space");
  if (auto it = j.find("notes"); it != j.end()) s.notes = strings(*it, "notes");
  return s;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < upto; ++i) line += text[i] == '\n';
    throw Error(Errc::parse_error, "line " + std::to_string(line) + ": " + e.what());
  }
}

// ---------------------------------------------------------------- writing

Json cost_json(const CostDecl& c) {
  if (!c.kind && !c.unit) return c.amount;
  Json j;
  j["amount"] = c.amount;
  if (c.kind) j["kind"] = std::string(to_string(*c.kind));
  if (c.unit) j["unit"] = *c.unit;
  return j;
}

Json alphabet_json(const AlphabetDecl& a) {
  Json j;
  j["name"] = a.name;
  j["kind"] = a.kind;
  if (a.kind == "enumerated") {
    Json letters = Json::array();
    for (const auto& l : a.letters) {
      if (l.payload.empty()) {
        letters.push_back(l.id);
      } else {
        letters.push_back(Json{{"id", l.id}, {"payload", l.payload}});
      }
    }
    j["letters"] = letters;
    if (a.probabilities) j["probabilities"] = *a.probabilities;
  } else if (a.kind == "symbolic") {
    j["entropy_bits"] = a.entropy_bits;
    j["max_entropy_bits"] = a.max_entropy_bits;
  } else if (a.kind == "product") {
    j["factor"] = a.base;
    j["count"] = a.count;
  } else if (a.kind == "restricted") {
    j["base"] = a.base;
    j["subset"] = a.subset;
  }
  return j;
}

Json transform_json(const TransformDecl& t) {
  Json j;
  j["name"] = t.name;
  j["kind"] = t.kind;
  j["node_kind"] = std::string(to_string(t.node_kind));
  j["cost"] = cost_json(t.cost);
  if (t.kind == "grouping") {
    Json map = Json::object();
    for (const auto& [in, out] : t.map) map[in] = out;
    j["map"] = map;
  } else if (t.kind == "quantizer") {
    j["edges"] = t.edges;
    if (!t.labels.empty()) j["labels"] = t.labels;
  } else if (t.kind == "aggregator") {
    j["window"] = t.window;
    j["statistic"] = t.statistic;
    if (t.levels) j["levels"] = *t.levels;
  } else if (t.kind == "channel") {
    j["output_letters"] = t.output_letters;
    Json rows = Json::object();
    for (const auto& [in, row] : t.rows) rows[in] = row;
    j["rows"] = rows;
  } else if (t.kind == "declared") {
    j["output"] = t.output;
    j["distortion_bits"] = t.distortion_bits;
  } else if (t.kind == "composite") {
    j["first"] = t.first;
    j["second"] = t.second;
  }
  return j;
}

Json reconstruction_json(const ReconstructionDecl& r) {
  Json j;
  j["name"] = r.name;
  j["kind"] = r.kind;
  if (r.kind == "prior_weighted") {
    Json prior = Json::object();
    for (const auto& [id, mass] : r.prior) prior[id] = mass;
    j["prior"] = prior;
  } else if (r.kind == "declared") {
    j["bits"] = r.bits;
  }
  return j;
}

Json value_json(const ParamValue& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return std::get<double>(v);
}

Json spec_json(const WorkflowSpec& s) {
  Json j;
  j["schema_version"] = s.schema_version;
  j["name"] = s.name;
  if (s.fixture_tag) j["fixture_tag"] = *s.fixture_tag;
  j["entropy_mode"] = std::string(to_string(s.entropy_mode));
  j["cost_model"] = Json{{"kind", std::string(to_string(s.cost_model.kind))},
                         {"unit", s.cost_model.unit},
                         {"merge", std::string(to_string(s.cost_model.merge))}};
  j["alphabets"] = Json::array();
  for (const auto& a : s.alphabets) j["alphabets"].push_back(alphabet_json(a));
  j["transforms"] = Json::array();
  for (const auto& t : s.transforms) j["transforms"].push_back(transform_json(t));
  j["reconstructions"] = Json::array();
  for (const auto& r : s.reconstructions) j["reconstructions"].push_back(reconstruction_json(r));

  Json g;
  g["edges"] = Json::array();
  for (const auto& e : s.graph.edges) {
    Json ej;
    if (e.id) ej["id"] = *e.id;
    ej["from"] = e.from;
    ej["to"] = e.to;
    ej["transform"] = e.transform;
    if (e.reconstruction) ej["reconstruction"] = *e.reconstruction;
    g["edges"].push_back(ej);
  }
  if (s.graph.decisional) g["decisional"] = *s.graph.decisional;
  if (!s.graph.node_kinds.empty()) {
    Json kinds = Json::object();
    for (const auto& [node, kind] : s.graph.node_kinds) kinds[node] = std::string(to_string(kind));
    g["node_kinds"] = kinds;
  }
  if (!s.graph.shared_mi.empty()) {
    Json mi = Json::object();
    for (const auto& [node, bits] : s.graph.shared_mi) mi[node] = bits;
    g["shared_mi"] = mi;
  }
  if (s.graph.class_tag) g["class_tag"] = std::string(to_string(*s.graph.class_tag));
  if (s.graph.level_tag) g["level_tag"] = std::string(to_string(*s.graph.level_tag));
  j["graph"] = g;

  if (s.param_space) {
    Json dims = Json::array();
    for (const auto& d : *s.param_space) {
      Json cs = Json::array();
      for (const auto& c : d.candidates) {
        Json cj{{"label", c.label}, {"value", value_json(c.value)}};
        if (c.cost) cj["cost"] = *c.cost;
        cs.push_back(cj);
      }
      dims.push_back(Json{{"edge", d.edge}, {"parameter", d.parameter}, {"candidates", cs}});
    }
    j["param_space"] = dims;
  }
  if (!s.notes.empty()) j["notes"] = s.notes;
  return j;
}

// ---------------------------------------------------------------- building

const AlphabetDecl& alphabet_decl(const WorkflowSpec& spec, std::string_view name) {
  for (const auto& a : spec.alphabets) {
    if (a.name == name) return a;
  }
  throw Error(Errc::dangling_reference, "alphabet '" + std::string(name) + "'");
}

const TransformDecl& transform_decl(const WorkflowSpec& spec, std::string_view name) {
  for (const auto& t : spec.transforms) {
    if (t.name == name) return t;
  }
  throw Error(Errc::dangling_reference, "transform '" + std::string(name) + "'");
}

const ReconstructionDecl* reconstruction_decl(const WorkflowSpec& spec, std::string_view name) {
  for (const auto& r : spec.reconstructions) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

Alphabet build_alphabet_at(const WorkflowSpec& spec, std::string_view name, int depth) {
  if (depth > 64) throw Error(Errc::invariant_violation, "alphabet '" + std::string(name) + "' refers to itself");
  const auto& a = alphabet_decl(spec, name);
  if (a.kind == "enumerated") {
    if (a.letters.empty()) throw Error(Errc::invalid_pmf, "alphabet '" + a.name + "' has no letters");
    std::vector<double> p = a.probabilities.value_or(std::vector<double>(a.letters.size(), 1.0 / a.letters.size()));
    if (p.size() != a.letters.size()) {
      throw Error(Errc::invalid_pmf, "alphabet '" + a.name + "' has " + std::to_string(a.letters.size()) +
                                         " letters and " + std::to_string(p.size()) + " probabilities");
    }
    return Alphabet::enumerated(a.name, a.letters, std::move(p));
  }
  if (a.kind == "symbolic") return Alphabet::symbolic(a.name, a.entropy_bits, a.max_entropy_bits);
  if (a.kind == "product") return Alphabet::product(a.name, build_alphabet_at(spec, a.base, depth + 1), a.count);
  if (a.kind == "restricted") return restrict_to(build_alphabet_at(spec, a.base, depth + 1), a.subset).renamed(a.name);
  throw Error(Errc::invariant_violation, "alphabet '" + a.name + "' is derived from the graph and has no model");
}

Transform build_transform_at(const WorkflowSpec& spec, std::string_view name, int depth) {
  if (depth > 64) throw Error(Errc::invariant_violation, "transform '" + std::string(name) + "' refers to itself");
  const auto& t = transform_decl(spec, name);
  CostRecord cost = CostRecord::make(t.cost.kind.value_or(spec.cost_model.kind), t.cost.amount,
                                     t.cost.unit.value_or(spec.cost_model.unit));
  Transform::Mapping mapping = Aggregator{};
  if (t.kind == "grouping") {
    mapping = Grouping::from_assignment(t.map);
  } else if (t.kind == "quantizer") {
    mapping = Quantizer{t.edges, t.labels};
  } else if (t.kind == "aggregator") {
    mapping = Aggregator{t.window, t.statistic, t.levels};
  } else if (t.kind == "channel") {
    mapping = Channel{t.output_letters, t.rows};
  } else if (t.kind == "declared") {
    mapping = Declared{build_alphabet_at(spec, t.output, 0), t.distortion_bits};
  } else if (t.kind == "composite") {
    auto first = std::make_shared<const Transform>(build_transform_at(spec, t.first, depth + 1));
    auto second = std::make_shared<const Transform>(build_transform_at(spec, t.second, depth + 1));
    mapping = Composite{first, second};
  } else {
    throw Error(Errc::invariant_violation, "transform '" + t.name + "' has unknown kind '" + t.kind + "'");
  }
  return Transform(t.name, std::move(mapping), cost, t.node_kind);
}

void check_param_space(const WorkflowSpec& spec) {
  if (!spec.param_space) return;
  std::set<std::string> edge_ids;
  for (const auto& e : spec.graph.edges) edge_ids.insert(e.id.value_or(e.from + "->" + e.to));
  static const std::set<std::string> parameters = {"bins", "window", "levels", "cost", "distortion_bits",
                                                   "reconstruction", "transform", "include"};
  for (std::size_t i = 0; i < spec.param_space->size(); ++i) {
    const auto& d = (*spec.param_space)[i];
    std::string path = "param_space[" + std::to_string(i) + "]";
    if (!edge_ids.count(d.edge)) throw Error(Errc::dangling_reference, path + ".edge = " + d.edge);
    if (!parameters.count(d.parameter)) throw Error(Errc::invariant_violation, path + ": unknown parameter '" + d.parameter + "'");
    if (d.candidates.empty()) throw Error(Errc::invariant_violation, path + ": no candidates");
    for (const auto& c : d.candidates) {
      const auto* name = std::get_if<std::string>(&c.value);
      if (d.parameter == "transform") {
        if (!name) throw Error(Errc::invariant_violation, path + ": transform candidates must be names");
        transform_decl(spec, *name);
      } else if (d.parameter == "reconstruction") {
        if (!name) throw Error(Errc::invariant_violation, path + ": reconstruction candidates must be names");
        build_reconstruction(spec, *name);
      } else if (d.parameter == "include") {
        if (!std::holds_alternative<bool>(c.value)) {
          throw Error(Errc::invariant_violation, path + ": include candidates must be booleans");
        }
      } else if (!std::holds_alternative<double>(c.value)) {
        throw Error(Errc::invariant_violation, path + ": " + d.parameter + " candidates must be numbers");
      }
    }
  }
}

// ---------------------------------------------------------------- reports

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json interval_json(const Interval& i) { return Json{{"lo", i.lo}, {"hi", i.hi}, {"mid", i.mid()}}; }

std::string model_name(const Alphabet& a) {
  switch (a.kind()) {
    case Alphabet::Kind::enumerated: return "enumerated(" + std::to_string(a.size()) + ")";
    case Alphabet::Kind::symbolic: return "symbolic";
    case Alphabet::Kind::product: return "product(" + model_name(a.factor()) + " x " + std::to_string(a.count()) + ")";
  }
  return "";
}

std::string transform_kind(const Transform& t) {
  static constexpr const char* names[] = {"grouping", "quantizer", "aggregator", "channel", "declared", "composite"};
  return names[t.mapping().index()];
}

std::string num(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : "-"; }

}  // namespace

WorkflowSpec read_spec(std::string_view text) { return spec_from_json(parse_json(text)); }

WorkflowSpec parse_spec(std::string_view text) {
  WorkflowSpec spec = read_spec(text);
  build_graph(spec);
  check_param_space(spec);
  build_param_space(spec);
  return spec;
}

std::string emit_spec(const WorkflowSpec& spec) { return spec_json(spec).dump(2) + "\n"; }

Alphabet build_alphabet(const WorkflowSpec& spec, std::string_view name) { return build_alphabet_at(spec, name, 0); }

Transform build_transform(const WorkflowSpec& spec, std::string_view name) { return build_transform_at(spec, name, 0); }

Reconstruction build_reconstruction(const WorkflowSpec& spec, std::string_view name) {
  if (const auto* r = reconstruction_decl(spec, name)) {
    if (r->kind == "exact_conditional") return Reconstruction(ExactConditional{});
    if (r->kind == "uniform_preimage") return Reconstruction(UniformPreimage{});
    if (r->kind == "prior_weighted") return Reconstruction(PriorWeighted{r->prior});
    if (r->kind == "declared") return Reconstruction(DeclaredDivergence{r->bits});
    if (r->kind == "mutual_information") return Reconstruction(MutualInformationShortcut{});
    throw Error(Errc::invariant_violation, "reconstruction '" + r->name + "' has unknown kind '" + r->kind + "'");
  }
  if (name == "exact_conditional") return Reconstruction(ExactConditional{});
  if (name == "uniform_preimage") return Reconstruction(UniformPreimage{});
  if (name == "mutual_information") return Reconstruction(MutualInformationShortcut{});
  throw Error(Errc::dangling_reference, "reconstruction '" + std::string(name) + "'");
}

WorkflowDefinition build_definition(const WorkflowSpec& spec) {
  std::set<std::string> seen;
  for (const auto& a : spec.alphabets) {
    if (!seen.insert(a.name).second) throw Error(Errc::invariant_violation, "duplicate alphabet '" + a.name + "'");
  }
  seen.clear();
  for (const auto& t : spec.transforms) {
    if (!seen.insert(t.name).second) throw Error(Errc::invariant_violation, "duplicate transform '" + t.name + "'");
  }
  seen.clear();
  for (const auto& r : spec.reconstructions) {
    if (!seen.insert(r.name).second) throw Error(Errc::invariant_violation, "duplicate reconstruction '" + r.name + "'");
  }

  std::set<std::string> used;
  for (std::size_t i = 0; i < spec.graph.edges.size(); ++i) {
    const auto& e = spec.graph.edges[i];
    std::string path = "graph.edges[" + std::to_string(i) + "]";
    for (const auto* end : {&e.from, &e.to}) {
      bool declared = std::any_of(spec.alphabets.begin(), spec.alphabets.end(),
                                  [&](const AlphabetDecl& a) { return a.name == *end; });
      if (!declared) throw Error(Errc::dangling_reference, path + (end == &e.from ? ".from = " : ".to = ") + *end);
      used.insert(*end);
    }
    bool has_transform = std::any_of(spec.transforms.begin(), spec.transforms.end(),
                                     [&](const TransformDecl& t) { return t.name == e.transform; });
    if (!has_transform) throw Error(Errc::dangling_reference, path + ".transform = " + e.transform);
  }
  if (spec.graph.decisional) {
    alphabet_decl(spec, *spec.graph.decisional);
    used.insert(*spec.graph.decisional);
  }
  for (const auto& [node, kind] : spec.graph.node_kinds) {
    (void)kind;
    if (!used.count(node) && !(spec.graph.edges.empty())) {
      throw Error(Errc::dangling_reference, "graph.node_kinds." + node);
    }
  }

  WorkflowDefinition def;
  for (const auto& a : spec.alphabets) {
    if (!used.empty() && !used.count(a.name)) continue;
    NodeDef node{a.name, std::nullopt, std::nullopt};
    if (a.kind != "derived") node.alphabet = build_alphabet(spec, a.name);
    if (auto it = spec.graph.node_kinds.find(a.name); it != spec.graph.node_kinds.end()) node.kind = it->second;
    def.nodes.push_back(std::move(node));
  }
  for (const auto& e : spec.graph.edges) {
    Transform t = build_transform(spec, e.transform);
    std::optional<Reconstruction> g;
    if (e.reconstruction) {
      g = build_reconstruction(spec, *e.reconstruction);
    } else if (const auto* d = t.as<Declared>()) {
      g = Reconstruction(DeclaredDivergence{d->distortion_bits});
    }
    def.edges.push_back(EdgeDef{e.id.value_or(""), e.from, e.to, std::move(t), std::move(g)});
  }
  def.decisional = spec.graph.decisional;
  def.shared_mi = spec.graph.shared_mi;
  def.class_tag = spec.graph.class_tag;
  def.level_tag = spec.graph.level_tag;
  return def;
}

WorkflowGraph build_graph(const WorkflowSpec& spec) { return WorkflowGraph(build_definition(spec)); }

ParamSpace build_param_space(const WorkflowSpec& spec) {
  ParamSpace space;
  if (!spec.param_space) return space;
  check_param_space(spec);
  space.dimensions = *spec.param_space;
  for (const auto& d : space.dimensions) {
    for (const auto& c : d.candidates) {
      const auto* name = std::get_if<std::string>(&c.value);
      if (!name) continue;
      if (d.parameter == "transform" && !space.transforms.count(*name)) {
        space.transforms.emplace(*name, build_transform(spec, *name));
      } else if (d.parameter == "reconstruction" && !space.reconstructions.count(*name)) {
        space.reconstructions.emplace(*name, build_reconstruction(spec, *name));
      }
    }
  }
  return space;
}

Analysis analyze(const WorkflowSpec& spec, std::optional<EntropyMode> mode) {
  Analysis a{spec, build_graph(spec), mode.value_or(spec.entropy_mode), {}, std::nullopt, {}, {}};
  const auto& g = a.graph;
  a.steps = score_edges(g, a.mode);
  a.classification = classify(g);
  a.notes = spec.notes;
  a.notes.push_back("entropies in bits, " + std::string(to_string(a.mode)) + " entropy");
  a.notes.push_back("interaction is modeled as annotated forward steps; feedback loops are not represented as cycles");

  std::string missing;
  for (std::size_t e = 0; e < g.edge_count() && missing.empty(); ++e) {
    if (!g.edge(e).reconstruction) missing = g.edge(e).id;
  }
  if (g.edge_count() == 0) {
    a.notes.push_back("no transformations: total cost and benefit are undefined");
  } else if (!missing.empty()) {
    a.notes.push_back("total benefit unavailable: edge '" + missing + "' has no reconstruction");
  } else {
    a.overall = overall_metrics(g, spec.cost_model.merge, a.mode);
    a.notes.push_back("cost_weighted_uncertainty is the sum over steps of (H(out) + D) / C, an as-printed variant "
                      "reported beside the benefit/cost ratio, not a replacement for it");
    if (!a.overall->total_benefit.point()) {
      a.notes.push_back("total benefit is an interval: branches join before the decisional alphabet");
    }
  }
  return a;
}

double metric(const Analysis& a, std::string_view path) {
  const std::string full(path);
  auto undefined = [&]() -> double { throw Error(Errc::invariant_violation, "metric '" + full + "' is undefined here"); };
  auto split = [&](std::string_view prefix) -> std::pair<std::string, std::string> {
    std::string_view rest = path.substr(prefix.size());
    auto dot = rest.rfind('.');
    if (dot == std::string_view::npos) throw Error(Errc::dangling_reference, "metric '" + full + "'");
    return {std::string(rest.substr(0, dot)), std::string(rest.substr(dot + 1))};
  };
  auto get = [&](const std::optional<double>& v) { return v ? *v : undefined(); };

  if (path.starts_with("nodes.")) {
    auto [name, f] = split("nodes.");
    auto v = a.graph.node_index(name);
    if (!v) throw Error(Errc::dangling_reference, "metric '" + full + "'");
    const auto& alpha = a.graph.alphabet(*v);
    if (f == "entropy") return entropy(alpha, a.mode);
    if (f == "actual_entropy") return entropy(alpha);
    if (f == "max_entropy") return max_entropy(alpha);
  } else if (path.starts_with("edges.")) {
    auto [id, f] = split("edges.");
    auto e = a.graph.edge_index(id);
    if (!e) throw Error(Errc::dangling_reference, "metric '" + full + "'");
    const auto& s = a.steps[*e];
    if (f == "h_in") return s.h_in;
    if (f == "h_out") return s.h_out;
    if (f == "cost") return s.cost.amount;
    if (f == "acr") return get(s.acr);
    if (f == "pdr") return get(s.pdr);
    if (f == "ecr") return get(s.ecr);
    if (f == "distortion") return get(s.distortion_bits);
    if (f == "benefit") return get(s.benefit_bits);
    if (f == "cbr") return get(s.incremental_cbr);
    if (f == "mutual_information") return get(s.mutual_information);
    if (f == "machine_cbr") return get(s.machine_cbr);
  } else if (path.starts_with("overall.")) {
    if (!a.overall) return undefined();
    const auto& o = *a.overall;
    std::string_view f = path.substr(8);
    if (f == "cost") return o.total_cost.amount;
    if (f == "benefit_lo") return o.total_benefit.lo;
    if (f == "benefit_hi") return o.total_benefit.hi;
    if (f == "cbr_lo") return o.overall_cbr.lo;
    if (f == "cbr_hi") return o.overall_cbr.hi;
    if (f == "cbr_mid") return o.overall_cbr.mid();
    if (f == "distortion_sum") return o.distortion_sum;
    if (f == "cost_weighted_uncertainty") return o.cost_weighted_uncertainty;
  }
  throw Error(Errc::dangling_reference, "metric '" + full + "'");
}

std::string report_json(const Analysis& a) {
  const auto& g = a.graph;
  Json j;
  j["name"] = a.spec.name;
  j["entropy_mode"] = std::string(to_string(a.mode));
  j["cost_model"] = spec_json(a.spec)["cost_model"];
  Json cls;
  cls["workflow_class"] = a.classification.workflow_class
                              ? Json(std::string(to_string(*a.classification.workflow_class)))
                              : Json(nullptr);
  if (a.classification.level) {
    cls["level"] = std::string(to_string(a.classification.level->level));
    cls["question_form"] = a.classification.level->question_form;
    cls["complexity_class"] = a.classification.level->complexity_class;
  } else {
    cls["level"] = nullptr;
  }
  cls["interaction"] = a.classification.interaction;
  j["classification"] = cls;

  j["nodes"] = Json::array();
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    Json n;
    n["name"] = g.node(v).name;
    auto kind = g.node_kind(v);
    n["kind"] = kind ? Json(std::string(to_string(*kind))) : Json(nullptr);
    n["model"] = model_name(g.alphabet(v));
    n["entropy"] = entropy(g.alphabet(v), a.mode);
    n["max_entropy"] = max_entropy(g.alphabet(v));
    n["decisional"] = v == g.decisional();
    j["nodes"].push_back(n);
  }
  j["edges"] = Json::array();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& s = a.steps[e];
    const auto& edge = g.edge(e);
    Json ej;
    ej["id"] = edge.id;
    ej["from"] = edge.from;
    ej["to"] = edge.to;
    ej["transform"] = edge.transform.name();
    ej["transform_kind"] = transform_kind(edge.transform);
    ej["node_kind"] = std::string(to_string(edge.transform.node_kind()));
    ej["reconstruction"] = edge.reconstruction ? Json(std::string(edge.reconstruction->kind_name())) : Json(nullptr);
    ej["h_in"] = s.h_in;
    ej["h_out"] = s.h_out;
    ej["acr"] = optional_json(s.acr);
    ej["pdr"] = optional_json(s.pdr);
    ej["ecr"] = optional_json(s.ecr);
    ej["distortion_bits"] = optional_json(s.distortion_bits);
    ej["benefit_bits"] = optional_json(s.benefit_bits);
    ej["incremental_cbr"] = optional_json(s.incremental_cbr);
    ej["mutual_information"] = optional_json(s.mutual_information);
    ej["machine_cbr"] = optional_json(s.machine_cbr);
    ej["cost"] = Json{{"amount", s.cost.amount}, {"kind", std::string(to_string(s.cost.kind))}, {"unit", s.cost.unit}};
    j["edges"].push_back(ej);
  }
  if (a.overall) {
    const auto& o = *a.overall;
    j["overall"] = Json{{"total_cost", o.total_cost.amount},
                        {"cost_unit", o.total_cost.unit},
                        {"cost_merge", std::string(to_string(a.spec.cost_model.merge))},
                        {"total_benefit", interval_json(o.total_benefit)},
                        {"overall_cbr", interval_json(o.overall_cbr)},
                        {"distortion_sum", o.distortion_sum},
                        {"cost_weighted_uncertainty", o.cost_weighted_uncertainty}};
  } else {
    j["overall"] = nullptr;
  }
  j["notes"] = a.notes;
  return j.dump(2) + "\n";
}

std::string report_table(const Analysis& a) {
  const auto& g = a.graph;
  std::ostringstream os;
  os << "workflow " << (a.spec.name.empty() ? "(unnamed)" : a.spec.name) << ", " << to_string(a.mode)
     << " entropy, bits\n";
  if (a.classification.workflow_class) os << "class " << to_string(*a.classification.workflow_class);
  else os << "class -";
  if (a.classification.level) {
    os << ", level " << to_string(a.classification.level->level) << " " << a.classification.level->complexity_class;
  }
  os << "\n\n";
  os << std::left << std::setw(24) << "alphabet" << std::setw(30) << "model" << std::right << std::setw(14)
     << "H" << std::setw(14) << "H max" << "\n";
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    os << std::left << std::setw(24) << (g.node(v).name + (v == g.decisional() ? " *" : "")) << std::setw(30)
       << model_name(g.alphabet(v)) << std::right << std::setw(14) << num(entropy(g.alphabet(v), a.mode))
       << std::setw(14) << num(max_entropy(g.alphabet(v))) << "\n";
  }
  os << "\n"
     << std::left << std::setw(20) << "step" << std::setw(4) << "k" << std::right << std::setw(11) << "ACR"
     << std::setw(11) << "PDR" << std::setw(11) << "ECR" << std::setw(13) << "D" << std::setw(13) << "B"
     << std::setw(11) << "cost" << std::setw(13) << "CBR" << "\n";
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& s = a.steps[e];
    os << std::left << std::setw(20) << g.edge(e).id << std::setw(4) << to_string(g.edge(e).transform.node_kind())
       << std::right << std::setw(11) << num(s.acr) << std::setw(11) << num(s.pdr) << std::setw(11) << num(s.ecr)
       << std::setw(13) << num(s.distortion_bits) << std::setw(13) << num(s.benefit_bits) << std::setw(11)
       << num(s.cost.amount) << std::setw(13) << num(s.incremental_cbr) << "\n";
  }
  if (a.overall) {
    const auto& o = *a.overall;
    os << "\ntotal cost    " << num(o.total_cost.amount) << " " << o.total_cost.unit << " ("
       << to_string(a.spec.cost_model.merge) << ")\n";
    os << "total benefit [" << num(o.total_benefit.lo) << ", " << num(o.total_benefit.hi) << "]\n";
    os << "overall CBR   [" << num(o.overall_cbr.lo) << ", " << num(o.overall_cbr.hi) << "]\n";
    os << "sum (H+D)/C   " << num(o.cost_weighted_uncertainty) << "\n";
  }
  for (const auto& n : a.notes) os << "note: " << n << "\n";
  return os.str();
}

std::string optimize_json(const OptimizeResult& r) {
  Json j;
  j["certified"] = r.certified;
  j["seed"] = r.seed;
  j["evaluations"] = r.evaluations;
  Json best = Json::object();
  for (const auto& [k, v] : r.best_assignment) best[k] = v;
  j["best_assignment"] = best;
  j["best_cbr"] = interval_json(r.best_cbr);
  j["best_benefit"] = interval_json(r.best_benefit);
  j["best_cost"] = r.best_cost.amount;
  j["frontier"] = Json::array();
  for (const auto& p : r.frontier) {
    j["frontier"].push_back(Json{{"assignment", p.assignment},
                                 {"cost", p.cost},
                                 {"benefit_lo", p.benefit_interval.lo},
                                 {"benefit_hi", p.benefit_interval.hi},
                                 {"cbr_mid", p.benefit_interval.mid() / p.cost}});
  }
  return j.dump(2) + "\n";
}

std::string optimize_table(const OptimizeResult& r) {
  std::ostringstream os;
  os << (r.certified ? "exhaustive search (global optimum)" : "greedy search (local optimum, not certified)")
     << ", " << r.evaluations << " evaluations";
  if (!r.certified) os << ", seed " << r.seed;
  os << "\n";
  for (const auto& [k, v] : r.best_assignment) os << "  " << k << " = " << v << "\n";
  os << "overall CBR [" << num(r.best_cbr.lo) << ", " << num(r.best_cbr.hi) << "], benefit [" << num(r.best_benefit.lo)
     << ", " << num(r.best_benefit.hi) << "], cost " << num(r.best_cost.amount) << "\n";
  os << "frontier:\n";
  for (const auto& p : r.frontier) {
    os << "  cost " << std::setw(10) << num(p.cost) << "  benefit " << std::setw(12) << num(p.benefit) << "  "
       << p.assignment << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------- fixtures

Fixture parse_fixture(std::string_view text) {
  Json j = parse_json(text);
  allow_keys(j, "$", {"name", "description", "variants", "expected"});
  Fixture f;
  f.name = string_at(j, "$", "name");
  f.description = optional_string(j, "$", "description").value_or("");
  const auto& variants = field(j, "$", "variants");
  if (!variants.is_object()) fail("variants", "expected an object of variant name -> spec");
  for (const auto& [name, spec] : variants.items()) {
    try {
      f.variants.emplace_back(name, spec_from_json(spec));
    } catch (const Error& e) {
      throw Error(e.code(), "variants." + name + ": " + e.what());
    }
  }
  const auto& expected = field(j, "$", "expected");
  if (!expected.is_array()) fail("expected", "expected an array");
  for (std::size_t i = 0; i < expected.size(); ++i) {
    std::string p = "expected[" + std::to_string(i) + "]";
    const auto& x = expected[i];
    allow_keys(x, p, {"metric", "relation", "value", "other", "tolerance", "provenance", "note"});
    Expectation ex;
    ex.metric = string_at(x, p, "metric");
    ex.relation = optional_string(x, p, "relation").value_or("eq");
    if (auto it = x.find("value"); it != x.end()) ex.value = as_number(*it, p + ".value");
    ex.other = optional_string(x, p, "other");
    if (auto it = x.find("tolerance"); it != x.end()) ex.tolerance = as_number(*it, p + ".tolerance");
    ex.provenance = string_at(x, p, "provenance");
    ex.note = optional_string(x, p, "note").value_or("");
    if (ex.value.has_value() == ex.other.has_value()) fail(p, "exactly one of value and other is required");
    f.expected.push_back(std::move(ex));
  }
  return f;
}

std::string emit_fixture(const Fixture& f) {
  Json j;
  j["name"] = f.name;
  j["description"] = f.description;
  Json variants = Json::object();
  for (const auto& [name, spec] : f.variants) variants[name] = spec_json(spec);
  j["variants"] = variants;
  j["expected"] = Json::array();
  for (const auto& x : f.expected) {
    Json xj;
    xj["metric"] = x.metric;
    xj["relation"] = x.relation;
    if (x.value) xj["value"] = *x.value;
    if (x.other) xj["other"] = *x.other;
    xj["tolerance"] = x.tolerance;
    xj["provenance"] = x.provenance;
    if (!x.note.empty()) xj["note"] = x.note;
    j["expected"].push_back(xj);
  }
  return j.dump(2) + "\n";
}

bool FixtureRun::pass() const {
  return std::all_of(results.begin(), results.end(), [](const ExpectationResult& r) { return r.pass; });
}

FixtureRun run_fixture(const Fixture& f) {
  FixtureRun run{f.name, {}};
  std::map<std::string, Analysis> analyses;
  auto value_of = [&](const std::string& ref) {
    auto colon = ref.find(':');
    if (colon == std::string::npos) throw Error(Errc::dangling_reference, "metric '" + ref + "' names no variant");
    std::string variant = ref.substr(0, colon);
    auto it = analyses.find(variant);
    if (it == analyses.end()) {
      auto v = std::find_if(f.variants.begin(), f.variants.end(), [&](const auto& p) { return p.first == variant; });
      if (v == f.variants.end()) throw Error(Errc::dangling_reference, "variant '" + variant + "'");
      it = analyses.emplace(variant, analyze(v->second)).first;
    }
    return metric(it->second, std::string_view(ref).substr(colon + 1));
  };

  for (const auto& x : f.expected) {
    ExpectationResult r{x, 0.0, std::nullopt, false, ""};
    try {
      r.computed = value_of(x.metric);
      r.reference = x.value ? *x.value : value_of(*x.other);
      double c = r.computed;
      double ref = *r.reference;
      if (x.relation == "eq") r.pass = std::abs(c - ref) <= x.tolerance;
      else if (x.relation == "le") r.pass = c <= ref + x.tolerance;
      else if (x.relation == "ge") r.pass = c >= ref - x.tolerance;
      else if (x.relation == "lt") r.pass = c < ref;
      else if (x.relation == "gt") r.pass = c > ref;
      else r.error = "unknown relation '" + x.relation + "'";
    } catch (const Error& e) {
      r.error = e.what();
    }
    run.results.push_back(std::move(r));
  }
  return run;
}

std::string fixture_table(const FixtureRun& run) {
  std::ostringstream os;
  os << "fixture " << run.name << "\n";
  for (const auto& r : run.results) {
    const auto& x = r.expectation;
    os << "  " << (r.pass ? "ok  " : "FAIL") << "  " << std::left << std::setw(46) << x.metric << std::right << " "
       << std::setw(2) << x.relation << " " << std::left << std::setw(30)
       << (x.other ? *x.other : num(*x.value, 10) + (x.tolerance > 0 ? " +/- " + num(x.tolerance) : std::string()))
       << std::right << " computed " << std::setw(14) << (r.error.empty() ? num(r.computed, 10) : "error") << "  ["
       << x.provenance << "]";
    if (!r.error.empty()) os << " " << r.error;
    os << "\n";
  }
  os << (run.pass() ? "PASS" : "FAIL") << " " << run.name << "\n";
  return os.str();
}

}  // namespace cbr
