#pragma once

#include <optional>
#include <string>

#include "tmkit/document.hpp"
#include "tmkit/pg.hpp"

namespace tmkit {

enum class RenderView {
  StaticFull,
  StaticSimplified,
  Dynamic,
  Behavior,
  PropertyGraphView
};

std::optional<RenderView> render_view_from(std::string_view name);
std::string_view to_string(RenderView view);

/// DOT text for the requested view: thimacs as nested clusters, stages as
/// nodes (annotations as xlabels), flows solid, triggers dashed; Dynamic
/// adds event membership to stage labels; Behavior draws the chronology
/// graph (Repeat edges dashed); PropertyGraphView draws the reduced graph.
/// Deterministic: equal inputs give byte-identical output. Throws TmError
/// E_INVALID_VIEW_INPUT when the document lacks what the view needs.
std::string render(const ModelDocument& doc, RenderView view);

/// DOT for a property graph (also used by PropertyGraphView).
std::string render_graph(const PropertyGraph& graph);

}  // namespace tmkit
