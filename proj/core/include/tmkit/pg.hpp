#pragma once

#include <map>
#include <string>
#include <vector>

#include "tmkit/value.hpp"

namespace tmkit {

struct PgNode {
  std::string id;
  std::vector<std::string> labels;  // non-empty
  std::map<std::string, Value> props;
  bool operator==(const PgNode&) const = default;
};

struct PgRel {
  std::string id;
  std::string type;
  std::string start;  // node id
  std::string end;    // node id
  std::map<std::string, Value> props;
  bool operator==(const PgRel&) const = default;
};

/// Labeled nodes plus typed directed relationships; duplicate edges are
/// allowed (distinct rel ids).
struct PropertyGraph {
  std::vector<PgNode> nodes;
  std::vector<PgRel> rels;

  const PgNode* find_node(std::string_view id) const;
  /// Resolves by "name" property first, then by id.
  const PgNode* find_node_by_name(std::string_view name) const;
  std::string node_display_name(const PgNode& n) const;

  void canonicalize();  // nodes and rels in natural id order
  bool operator==(const PropertyGraph&) const = default;
};

/// Interchange JSON: top-level "nodes" and "rels", field names matching the
/// structs bit for bit, arrays ordered by id, keys in declaration order.
std::string pg_to_json(const PropertyGraph& g);
/// Throws TmError E_BAD_GRAPH on malformed input.
PropertyGraph pg_from_json(const std::string& text);

}  // namespace tmkit
