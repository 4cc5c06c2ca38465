#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tmkit/diagnostics.hpp"
#include "tmkit/model.hpp"

namespace tmkit {

struct ThimacElement {
  std::string id;
  bool operator==(const ThimacElement&) const = default;
};
struct StageElement {
  ActionRef ref;
  bool operator==(const StageElement&) const = default;
};
struct FlowElement {
  ActionRef source, target;
  bool operator==(const FlowElement&) const = default;
};
struct TriggerElement {
  ActionRef source, target;
  bool operator==(const TriggerElement&) const = default;
};

using ElementRef =
    std::variant<ThimacElement, StageElement, FlowElement, TriggerElement>;

std::string to_string(const ElementRef& e);
bool element_less(const ElementRef& a, const ElementRef& b);

/// A weakly connected subdiagram of one static model; the footprint an
/// event occupies when injected with time.
struct Region {
  std::vector<ElementRef> elements;  // canonical order, arc endpoints included

  bool contains(const ElementRef& e) const;
  std::vector<ActionRef> stages() const;
  std::vector<FlowElement> flow_refs() const;
  std::vector<TriggerElement> trigger_refs() const;
  std::vector<std::string> thimac_refs() const;
  void canonicalize();

  bool operator==(const Region&) const = default;
};

enum class Classification { Event, Instance };

std::string_view to_string(Classification c);

struct EventDef {
  std::string id;
  std::optional<std::string> label;  // e.g. relationship type for reductions
  Region region;
  Classification classification = Classification::Event;
  /// Endpoint binding (source instance id -> target instance id) for events
  /// whose region alone cannot identify them, e.g. lifted relationships.
  std::optional<std::pair<std::string, std::string>> participants;
  /// Carried node/rel properties so graph round trips keep them.
  std::map<std::string, Value> props;

  std::string display_name() const { return label.value_or(id); }
  bool operator==(const EventDef&) const = default;
};

enum class EdgeKind { Sequence, Repeat };

struct BehaviorEdge {
  std::string from, to;
  EdgeKind kind = EdgeKind::Sequence;
  bool operator==(const BehaviorEdge&) const = default;
};

/// Chronology of events: per-component edge lists; components run in
/// parallel, Sequence edges order firings, Repeat edges may close cycles.
struct BehaviorComponent {
  std::string name;
  std::vector<std::string> nodes;  // includes edge endpoints, canonical order
  std::vector<BehaviorEdge> edges;
  bool operator==(const BehaviorComponent&) const = default;
};

struct BehaviorModel {
  std::vector<BehaviorComponent> components;
  void canonicalize();
  bool operator==(const BehaviorModel&) const = default;
};

/// Builds an EventDef after checking region invariants: non-empty, all
/// references resolve, arcs exist, induced subdiagram weakly connected, and
/// instances include exactly one thimac's Create stage. Endpoint stages of
/// listed arcs are included automatically; nothing else is closed over.
/// Throws TmError: E_EMPTY_REGION, E_DANGLING_REF, E_DISCONNECTED_REGION,
/// E_INSTANCE_WITHOUT_CREATE.
EventDef make_event(const StaticModel& model, std::string id,
                    std::vector<ElementRef> elements,
                    Classification classification,
                    std::optional<std::string> label = std::nullopt,
                    std::optional<std::pair<std::string, std::string>>
                        participants = std::nullopt);

/// Diagnostics only: unknown event ids, Sequence cycles inside a component,
/// edges crossing components; warnings for events absent from the graph.
ValidationReport validate_behavior(const BehaviorModel& behavior,
                                   const std::vector<EventDef>& events);

/// Instance iff the region's stages are exactly Create stages and exactly
/// one thimac's Create is present; Event otherwise.
Classification classify(const Region& region);

}  // namespace tmkit
