#include "tmkit/pg.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "tmkit/diagnostics.hpp"

namespace tmkit {

const PgNode* PropertyGraph::find_node(std::string_view id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

std::string PropertyGraph::node_display_name(const PgNode& n) const {
  const auto it = n.props.find("name");
  if (it != n.props.end() && std::holds_alternative<std::string>(it->second))
    return std::get<std::string>(it->second);
  return n.id;
}

const PgNode* PropertyGraph::find_node_by_name(std::string_view name) const {
  for (const auto& n : nodes)
    if (node_display_name(n) == name) return &n;
  return find_node(name);
}

void PropertyGraph::canonicalize() {
  for (auto& n : nodes) {
    std::stable_sort(n.labels.begin(), n.labels.end(), NaturalLess{});
    n.labels.erase(std::unique(n.labels.begin(), n.labels.end()),
                   n.labels.end());
  }
  std::stable_sort(nodes.begin(), nodes.end(),
                   [](const PgNode& a, const PgNode& b) {
                     return natural_less(a.id, b.id);
                   });
  std::stable_sort(rels.begin(), rels.end(),
                   [](const PgRel& a, const PgRel& b) {
                     return natural_less(a.id, b.id);
                   });
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json value_to_json(const Value& v) {
  if (std::holds_alternative<long long>(v)) return std::get<long long>(v);
  if (std::holds_alternative<bool>(v)) return std::get<bool>(v);
  return std::get<std::string>(v);
}

std::string id_from_json(const ordered_json& j, const char* what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw TmError("E_BAD_GRAPH", std::string(what) + " id must be a string or integer");
}

Value value_from_json(const ordered_json& j) {
  if (j.is_number_integer()) return Value{j.get<long long>()};
  if (j.is_boolean()) return Value{j.get<bool>()};
  if (j.is_string()) return Value{j.get<std::string>()};
  throw TmError("E_BAD_GRAPH",
                "property values must be integers, booleans or strings");
}

std::map<std::string, Value> props_from_json(const ordered_json& j) {
  std::map<std::string, Value> out;
  if (j.is_null()) return out;
  if (!j.is_object()) throw TmError("E_BAD_GRAPH", "props must be an object");
  for (const auto& [k, v] : j.items()) out[k] = value_from_json(v);
  return out;
}

}  // namespace

std::string pg_to_json(const PropertyGraph& g) {
  PropertyGraph canon = g;
  canon.canonicalize();
  ordered_json out;
  out["nodes"] = ordered_json::array();
  for (const auto& n : canon.nodes) {
    ordered_json jn;
    jn["id"] = n.id;
    jn["labels"] = n.labels;
    jn["props"] = ordered_json::object();
    for (const auto& [k, v] : n.props) jn["props"][k] = value_to_json(v);
    out["nodes"].push_back(std::move(jn));
  }
  out["rels"] = ordered_json::array();
  for (const auto& r : canon.rels) {
    ordered_json jr;
    jr["id"] = r.id;
    jr["type"] = r.type;
    jr["start"] = r.start;
    jr["end"] = r.end;
    jr["props"] = ordered_json::object();
    for (const auto& [k, v] : r.props) jr["props"][k] = value_to_json(v);
    out["rels"].push_back(std::move(jr));
  }
  return out.dump(2) + "\n";
}

PropertyGraph pg_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw TmError("E_BAD_GRAPH", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object())
    throw TmError("E_BAD_GRAPH", "expected an object with nodes and rels");

  PropertyGraph g;
  std::set<std::string> node_ids, rel_ids;
  for (const auto& jn : j.value("nodes", ordered_json::array())) {
    PgNode n;
    n.id = id_from_json(jn.at("id"), "node");
    if (!node_ids.insert(n.id).second)
      throw TmError("E_BAD_GRAPH", "duplicate node id '" + n.id + "'");
    if (jn.contains("labels")) {
      if (!jn["labels"].is_array())
        throw TmError("E_BAD_GRAPH", "labels must be an array");
      for (const auto& l : jn["labels"]) n.labels.push_back(l.get<std::string>());
    }
    n.props = props_from_json(jn.value("props", ordered_json()));
    g.nodes.push_back(std::move(n));
  }
  for (const auto& jr : j.value("rels", ordered_json::array())) {
    PgRel r;
    r.id = id_from_json(jr.at("id"), "rel");
    if (!rel_ids.insert(r.id).second)
      throw TmError("E_BAD_GRAPH", "duplicate rel id '" + r.id + "'");
    r.type = jr.at("type").get<std::string>();
    r.start = id_from_json(jr.at("start"), "rel start");
    r.end = id_from_json(jr.at("end"), "rel end");
    if (!node_ids.count(r.start) || !node_ids.count(r.end))
      throw TmError("E_BAD_GRAPH",
                    "rel '" + r.id + "' references an unknown node");
    r.props = props_from_json(jr.value("props", ordered_json()));
    g.rels.push_back(std::move(r));
  }
  g.canonicalize();
  return g;
}

}  // namespace tmkit
