#pragma once

#include <map>
#include <optional>
#include <string>

#include "tmkit/dynamics.hpp"
#include "tmkit/model.hpp"

namespace tmkit {

/// One .tm file: the three levels of one system plus named parameters.
struct ModelDocument {
  StaticModel statics;
  std::vector<EventDef> events;
  std::optional<BehaviorModel> behavior;
  std::map<std::string, Value> params;

  const EventDef* find_event(std::string_view id) const;
  void canonicalize();

  bool operator==(const ModelDocument&) const = default;
};

/// Whole-document validation: static well-formedness, event region checks,
/// classification mismatches (warnings), behavior checks, param references.
ValidationReport validate_document(const ModelDocument& doc);

}  // namespace tmkit
