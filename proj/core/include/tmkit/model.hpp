#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tmkit/action.hpp"
#include "tmkit/guard.hpp"
#include "tmkit/value.hpp"

namespace tmkit {

enum class SlotKind { Counter, Queue, Flag };

std::string_view to_string(SlotKind kind);

/// The only mutable state kinds: integer counter, FIFO queue, boolean flag.
struct StateSlot {
  std::string name;
  SlotKind kind = SlotKind::Counter;
  long long initial = 0;        // counters
  bool initial_flag = false;    // flags
  std::optional<Operand> max;   // optional counter bound ("max $capacity")
  std::optional<int> annotation;
  bool operator==(const StateSlot&) const = default;
};

struct ActionStage {
  ActionKind kind = ActionKind::Create;
  std::optional<int> annotation;
  bool operator==(const ActionStage&) const = default;
};

/// A thing/machine. Ids are dotted paths mirroring the nesting, so they are
/// unique by construction; names are free display strings.
struct Thimac {
  std::string id;
  std::string name;
  std::optional<std::string> parent;
  std::vector<ActionStage> actions;  // at most one per kind
  std::vector<StateSlot> slots;      // names unique within the thimac
  std::optional<int> annotation;

  bool has_action(ActionKind kind) const;
  const ActionStage* find_action(ActionKind kind) const;
  const StateSlot* find_slot(std::string_view name) const;
  std::string_view local_name() const;

  bool operator==(const Thimac&) const = default;
};

/// Addresses one stage of one thimac. Stage identity is structural, so
/// normalize/simplify round trips do not invent identifiers.
struct ActionRef {
  std::string thimac;
  ActionKind kind = ActionKind::Create;

  std::string str() const;
  bool operator==(const ActionRef&) const = default;
};

bool natural_ref_less(const ActionRef& a, const ActionRef& b);

struct FlowArc {
  ActionRef source;
  ActionRef target;
  std::optional<std::string> thing_label;
  std::optional<int> annotation;
  std::vector<Effect> effects;

  bool is_cross() const { return source.thimac != target.thimac; }
  bool operator==(const FlowArc&) const = default;
};

struct TriggerArc {
  ActionRef source;
  ActionRef target;
  std::optional<Guard> guard;
  std::optional<std::string> label;
  std::optional<int> annotation;
  std::vector<Effect> effects;

  bool operator==(const TriggerArc&) const = default;
};

enum class ModelForm { Full, Simplified };

/// The static level: thimacs, stages as potentialities, flow and trigger
/// arcs. Canonical order everywhere (natural id order) so that equality,
/// serialization and scheduling are deterministic.
struct StaticModel {
  ModelForm form = ModelForm::Full;
  std::vector<Thimac> thimacs;
  std::vector<FlowArc> flows;
  std::vector<TriggerArc> triggers;

  const Thimac* find_thimac(std::string_view id) const;
  Thimac* find_thimac(std::string_view id);
  bool has_stage(const ActionRef& ref) const;
  std::vector<const Thimac*> roots() const;
  std::vector<const Thimac*> children_of(std::string_view id) const;
  const FlowArc* find_flow(const ActionRef& source, const ActionRef& target) const;
  const TriggerArc* find_trigger(const ActionRef& source,
                                 const ActionRef& target) const;

  /// Sorts thimacs, arcs, stages and slots into canonical order.
  void canonicalize();

  bool operator==(const StaticModel&) const = default;
};

}  // namespace tmkit
