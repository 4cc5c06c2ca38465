#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tmkit {

/// The five machine stages. The metamodel is closed over these; arriving
/// things are assumed accepted, so there is no separate arrive/accept.
enum class ActionKind { Create, Process, Release, Transfer, Receive };

inline constexpr std::array<ActionKind, 5> kAllActionKinds = {
    ActionKind::Create, ActionKind::Process, ActionKind::Release,
    ActionKind::Transfer, ActionKind::Receive};

std::string_view to_string(ActionKind kind);
std::optional<ActionKind> action_kind_from(std::string_view name);

/// Whether a successor stage sits in the same thimac or across a boundary.
enum class ArcContext { Intra, Cross };

struct Successor {
  ActionKind kind;
  ArcContext context;
  bool operator==(const Successor&) const = default;
};

/// The fixed stage-wiring table of a machine:
///   Create   -> Process, Release        (intra)
///   Receive  -> Process, Release        (intra)
///   Process  -> Release                 (intra)
///   Release  -> Transfer                (intra)
///   Transfer -> Receive (intra), Transfer (cross)
/// Total function; every pair outside the table is an illegal flow.
std::vector<Successor> legal_successors(ActionKind kind);

/// Legality of one flow arc in a full-form model.
bool flow_is_legal(ActionKind source, ActionKind target, ArcContext context);

/// Legality in simplified form, where release/transfer/receive chains are
/// elided and inter-thimac flows connect retained actions directly.
bool simplified_flow_is_legal(ActionKind source, ActionKind target,
                              ArcContext context);

}  // namespace tmkit
