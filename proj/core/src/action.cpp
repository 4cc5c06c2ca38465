#include "tmkit/action.hpp"

namespace tmkit {

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::Create: return "create";
    case ActionKind::Process: return "process";
    case ActionKind::Release: return "release";
    case ActionKind::Transfer: return "transfer";
    case ActionKind::Receive: return "receive";
  }
  return "?";
}

std::optional<ActionKind> action_kind_from(std::string_view name) {
  if (name == "create") return ActionKind::Create;
  if (name == "process") return ActionKind::Process;
  if (name == "release") return ActionKind::Release;
  if (name == "transfer") return ActionKind::Transfer;
  if (name == "receive") return ActionKind::Receive;
  return std::nullopt;
}

std::vector<Successor> legal_successors(ActionKind kind) {
  switch (kind) {
    case ActionKind::Create:
      return {{ActionKind::Process, ArcContext::Intra},
              {ActionKind::Release, ArcContext::Intra}};
    case ActionKind::Receive:
      return {{ActionKind::Process, ArcContext::Intra},
              {ActionKind::Release, ArcContext::Intra}};
    case ActionKind::Process:
      return {{ActionKind::Release, ArcContext::Intra}};
    case ActionKind::Release:
      return {{ActionKind::Transfer, ArcContext::Intra}};
    case ActionKind::Transfer:
      return {{ActionKind::Receive, ArcContext::Intra},
              {ActionKind::Transfer, ArcContext::Cross}};
  }
  return {};
}

bool flow_is_legal(ActionKind source, ActionKind target, ArcContext context) {
  for (const auto& s : legal_successors(source))
    if (s.kind == target && s.context == context) return true;
  return false;
}

bool simplified_flow_is_legal(ActionKind source, ActionKind target,
                              ArcContext context) {
  // Contracted chains: sources are the stages that fed Release, targets the
  // stages Receive fed (or an elided Receive itself).
  const bool src_ok = source == ActionKind::Create ||
                      source == ActionKind::Process ||
                      source == ActionKind::Receive;
  if (context == ArcContext::Cross) {
    return src_ok &&
           (target == ActionKind::Process || target == ActionKind::Receive);
  }
  // Intra arcs that never involved elided stages survive as-is.
  return (source == ActionKind::Create || source == ActionKind::Receive) &&
         target == ActionKind::Process;
}

}  // namespace tmkit
