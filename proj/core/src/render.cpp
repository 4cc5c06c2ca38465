#include "tmkit/render.hpp"

#include <map>
#include <set>
#include <sstream>

#include "tmkit/normalize.hpp"
#include "tmkit/transform.hpp"

namespace tmkit {

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

std::string node_id(const std::string& thimac, std::string_view suffix) {
  std::string out;
  for (char c : thimac) out += c == '.' ? std::string("__") : std::string(1, c);
  out += "__";
  out += suffix;
  return out;
}

std::string stage_id(const ActionRef& ref) {
  return node_id(ref.thimac, to_string(ref.kind));
}

class StaticDot {
 public:
  StaticDot(const StaticModel& model,
            const std::map<std::string, std::vector<std::string>>* membership)
      : model_(model), membership_(membership) {}

  std::string text() {
    out_ << "digraph tm {\n";
    out_ << "  compound=true;\n  rankdir=LR;\n";
    out_ << "  node [shape=box, fontsize=10];\n";
    for (const auto* root : model_.roots()) cluster(*root, 1);
    ghost_nodes();
    arcs();
    out_ << "}\n";
    return out_.str();
  }

 private:
  const StaticModel& model_;
  const std::map<std::string, std::vector<std::string>>* membership_;
  std::ostringstream out_;

  void indent(int depth) {
    for (int i = 0; i < depth; ++i) out_ << "  ";
  }

  std::string stage_label(const ActionRef& ref) {
    std::string label{to_string(ref.kind)};
    if (membership_ != nullptr) {
      const auto it = membership_->find(ref.str());
      if (it != membership_->end()) {
        label += "\\n[";
        for (std::size_t i = 0; i < it->second.size(); ++i) {
          if (i) label += ",";
          label += it->second[i];
        }
        label += "]";
      }
    }
    return label;
  }

  void cluster(const Thimac& t, int depth) {
    indent(depth);
    out_ << "subgraph cluster_" << node_id(t.id, "box") << " {\n";
    indent(depth + 1);
    out_ << "label=\"" << dot_escape(t.name);
    if (t.annotation) out_ << " #" << *t.annotation;
    out_ << "\";\n";
    for (const auto& a : t.actions) {
      const ActionRef ref{t.id, a.kind};
      indent(depth + 1);
      out_ << stage_id(ref) << " [label=\"" << stage_label(ref) << "\"";
      if (a.annotation) out_ << ", xlabel=\"" << *a.annotation << "\"";
      out_ << "];\n";
    }
    for (const auto& s : t.slots) {
      indent(depth + 1);
      out_ << node_id(t.id, "slot_" + s.name) << " [label=\""
           << to_string(s.kind) << " " << dot_escape(s.name)
           << "\", shape=note";
      if (s.annotation) out_ << ", xlabel=\"" << *s.annotation << "\"";
      out_ << "];\n";
    }
    for (const auto* child : model_.children_of(t.id)) cluster(*child, depth + 1);
    indent(depth);
    out_ << "}\n";
  }

  // Referenced-but-elided stages render dotted so arcs stay drawable.
  void ghost_nodes() {
    std::set<std::string> ghosts;
    auto note = [&](const ActionRef& ref) {
      if (!model_.has_stage(ref) && model_.find_thimac(ref.thimac) != nullptr)
        ghosts.insert(ref.str());
    };
    for (const auto& f : model_.flows) {
      note(f.source);
      note(f.target);
    }
    for (const auto& t : model_.triggers) {
      note(t.source);
      note(t.target);
    }
    for (const auto& key : ghosts) {
      const auto pos = key.rfind('.');
      const ActionRef ref{key.substr(0, pos),
                          *action_kind_from(key.substr(pos + 1))};
      out_ << "  " << stage_id(ref) << " [label=\"" << dot_escape(key)
           << "\", style=dotted];\n";
    }
  }

  void arcs() {
    for (const auto& f : model_.flows) {
      out_ << "  " << stage_id(f.source) << " -> " << stage_id(f.target);
      std::vector<std::string> attrs;
      if (f.thing_label) attrs.push_back("label=\"" + dot_escape(*f.thing_label) + "\"");
      if (f.annotation)
        attrs.push_back("xlabel=\"" + std::to_string(*f.annotation) + "\"");
      if (!f.effects.empty()) {
        std::string text = "do ";
        for (std::size_t i = 0; i < f.effects.size(); ++i) {
          if (i) text += ", ";
          text += to_string(f.effects[i]);
        }
        attrs.push_back("taillabel=\"" + dot_escape(text) + "\"");
      }
      emit_attrs(attrs);
    }
    for (const auto& t : model_.triggers) {
      out_ << "  " << stage_id(t.source) << " -> " << stage_id(t.target);
      std::vector<std::string> attrs{"style=dashed"};
      std::string label = t.label.value_or("");
      if (t.guard) {
        if (!label.empty()) label += "\\n";
        label += "when " + to_string(*t.guard);
      }
      if (!label.empty()) attrs.push_back("label=\"" + dot_escape(label) + "\"");
      if (t.annotation)
        attrs.push_back("xlabel=\"" + std::to_string(*t.annotation) + "\"");
      if (!t.effects.empty()) {
        std::string text = "do ";
        for (std::size_t i = 0; i < t.effects.size(); ++i) {
          if (i) text += ", ";
          text += to_string(t.effects[i]);
        }
        attrs.push_back("taillabel=\"" + dot_escape(text) + "\"");
      }
      emit_attrs(attrs);
    }
  }

  void emit_attrs(const std::vector<std::string>& attrs) {
    if (!attrs.empty()) {
      out_ << " [";
      for (std::size_t i = 0; i < attrs.size(); ++i) {
        if (i) out_ << ", ";
        out_ << attrs[i];
      }
      out_ << "]";
    }
    out_ << ";\n";
  }
};

std::string behavior_dot(const ModelDocument& doc) {
  std::ostringstream out;
  out << "digraph tm_behavior {\n  rankdir=LR;\n"
      << "  node [shape=box, fontsize=10];\n";
  for (const auto& c : doc.behavior->components) {
    out << "  subgraph cluster_" << c.name << " {\n";
    out << "    label=\"" << dot_escape(c.name) << "\";\n";
    for (const auto& n : c.nodes) {
      const EventDef* def = doc.find_event(n);
      out << "    \"" << dot_escape(n) << "\" [label=\"" << dot_escape(n);
      if (def != nullptr && def->label) out << ": " << dot_escape(*def->label);
      out << "\"";
      if (def != nullptr && def->classification == Classification::Instance)
        out << ", shape=ellipse";
      out << "];\n";
    }
    for (const auto& e : c.edges) {
      out << "    \"" << dot_escape(e.from) << "\" -> \"" << dot_escape(e.to)
          << "\"";
      if (e.kind == EdgeKind::Repeat) out << " [style=dashed]";
      out << ";\n";
    }
    out << "  }\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace

std::optional<RenderView> render_view_from(std::string_view name) {
  if (name == "static-full" || name == "StaticFull") return RenderView::StaticFull;
  if (name == "static-simplified" || name == "StaticSimplified")
    return RenderView::StaticSimplified;
  if (name == "dynamic" || name == "Dynamic") return RenderView::Dynamic;
  if (name == "behavior" || name == "Behavior") return RenderView::Behavior;
  if (name == "property-graph" || name == "PropertyGraphView")
    return RenderView::PropertyGraphView;
  return std::nullopt;
}

std::string_view to_string(RenderView view) {
  switch (view) {
    case RenderView::StaticFull: return "static-full";
    case RenderView::StaticSimplified: return "static-simplified";
    case RenderView::Dynamic: return "dynamic";
    case RenderView::Behavior: return "behavior";
    case RenderView::PropertyGraphView: return "property-graph";
  }
  return "?";
}

std::string render_graph(const PropertyGraph& graph) {
  PropertyGraph g = graph;
  g.canonicalize();
  std::ostringstream out;
  out << "digraph tm_pg {\n  rankdir=LR;\n  node [shape=ellipse, fontsize=10];\n";
  std::map<std::string, std::string> dot_id;
  std::size_t i = 0;
  for (const auto& n : g.nodes) {
    dot_id[n.id] = "n" + std::to_string(i++);
    std::string label = g.node_display_name(n);
    for (const auto& l : n.labels) label += ":" + l;
    out << "  " << dot_id[n.id] << " [label=\"" << dot_escape(label) << "\"];\n";
  }
  for (const auto& r : g.rels)
    out << "  " << dot_id[r.start] << " -> " << dot_id[r.end] << " [label=\""
        << dot_escape(r.type) << "\"];\n";
  out << "}\n";
  return out.str();
}

std::string render(const ModelDocument& doc, RenderView view) {
  switch (view) {
    case RenderView::StaticFull: {
      if (doc.statics.form == ModelForm::Full)
        return StaticDot(doc.statics, nullptr).text();
      return StaticDot(normalize(doc.statics), nullptr).text();
    }
    case RenderView::StaticSimplified: {
      if (doc.statics.form == ModelForm::Simplified)
        return StaticDot(doc.statics, nullptr).text();
      return StaticDot(simplify_static(doc.statics), nullptr).text();
    }
    case RenderView::Dynamic: {
      if (doc.events.empty())
        throw TmError("E_INVALID_VIEW_INPUT",
                      "dynamic view needs declared events");
      std::map<std::string, std::vector<std::string>> membership;
      for (const auto& e : doc.events)
        for (const auto& s : e.region.stages())
          membership[s.str()].push_back(e.id);
      return StaticDot(doc.statics, &membership).text();
    }
    case RenderView::Behavior: {
      if (!doc.behavior || doc.behavior->components.empty())
        throw TmError("E_INVALID_VIEW_INPUT",
                      "behavior view needs a behavior model");
      return behavior_dot(doc);
    }
    case RenderView::PropertyGraphView: {
      const ReducedSkeleton skeleton =
          reduce_dynamic(doc.statics, doc.events);
      if (!skeleton.reducible())
        throw TmError("E_INVALID_VIEW_INPUT",
                      "document does not reduce to a property graph: " +
                          skeleton.diagnostics.front().message);
      return render_graph(skeleton.graph);
    }
  }
  throw TmError("E_INVALID_VIEW_INPUT", "unknown view");
}

}  // namespace tmkit
