#pragma once

#include <set>
#include <string>
#include <vector>

#include "tmkit/diagnostics.hpp"
#include "tmkit/document.hpp"
#include "tmkit/pg.hpp"

namespace tmkit {

/// Full -> Simplified: removes Release/Transfer/Receive stages and
/// contracts every chain x -> Release -> Transfer => Transfer -> Receive
/// [-> y] to a direct arc; cross-arc labels and effects move onto the
/// contracted arc. Directed reachability between retained stages is
/// preserved. Throws TmError E_NOT_FULL_FORM.
StaticModel simplify_static(const StaticModel& model);

/// Document-level simplify: event regions referencing contracted machinery
/// are rewritten onto the contracted arcs.
ModelDocument simplify_document(const ModelDocument& doc);

/// Output of reduce_dynamic: a property-graph-shaped skeleton plus
/// diagnostics for events that do not reduce.
struct ReducedSkeleton {
  PropertyGraph graph;
  std::vector<Diagnostic> diagnostics;  // unreducible events, self loops

  bool reducible() const {
    for (const auto& d : diagnostics)
      if (d.severity == Severity::Error) return false;
    return true;
  }
};

/// Eliminates actions from the dynamic model: instances become nodes
/// (label = host thimac name), binary events become directed relationships
/// (type = event label, both directions for mutual regions), unary events
/// become node properties, events touching three or more instances are
/// reported unreducible.
ReducedSkeleton reduce_dynamic(const StaticModel& statics,
                               const std::vector<EventDef>& events);

/// Emits the interchange graph; node ids = instance ids, rel ids = event
/// ids (suffixed .1/.2 for mutual events). Throws TmError E_UNREDUCIBLE if
/// the skeleton carries error diagnostics.
PropertyGraph to_property_graph(const ReducedSkeleton& skeleton);

struct LiftOptions {
  /// Relationship types to lift as containment (nested class boxes)
  /// instead of flow channels.
  std::set<std::string> containment_types;
};

struct LiftReport {
  StaticModel statics;             // class thimacs + full-form channels
  std::vector<EventDef> instances; // one per node
  std::vector<EventDef> events;    // one per relationship
  std::vector<Diagnostic> mixing;  // static/dynamic level-mixing findings

  std::vector<EventDef> all_events() const;
  ModelDocument to_document() const;
};

/// Lifts a property graph to the two-level TM form: one class thimac per
/// label, one full-form flow channel per (type, source label, target label)
/// triple, one Instance per node, one Event per relationship. Mixing
/// diagnostics flag single-node labels equal to the node's name and
/// property values duplicating labels. Throws TmError E_EMPTY_LABEL.
LiftReport lift_property_graph(const PropertyGraph& graph,
                               const LiftOptions& options = {});

enum class Direction { In, Out, Both };

/// Names of nodes connected to `node_name` by `rel_type` arcs in the given
/// direction; set semantics. Throws TmError E_NO_SUCH_NODE.
std::set<std::string> query_neighbors(const PropertyGraph& graph,
                                      const std::string& node_name,
                                      const std::string& rel_type,
                                      Direction direction);

}  // namespace tmkit
