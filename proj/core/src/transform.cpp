#include "tmkit/transform.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "tmkit/validate.hpp"

namespace tmkit {

namespace {

std::string arc_key(const ActionRef& s, const ActionRef& t) {
  return s.str() + "|" + t.str();
}

bool is_elidable(ActionKind kind) {
  return kind == ActionKind::Release || kind == ActionKind::Transfer ||
         kind == ActionKind::Receive;
}

struct Contraction {
  FlowArc arc;                      // the contracted direct arc
  std::vector<std::string> consumed;  // keys of the chain arcs it replaces
};

// Finds every x -> Release -> Transfer => Transfer -> Receive [-> Process]
// chain of a full-form model.
std::vector<Contraction> find_contractions(const StaticModel& model) {
  std::map<std::string, std::vector<const FlowArc*>> by_source;
  for (const auto& f : model.flows) by_source[f.source.str()].push_back(&f);

  auto pick = [&](const ActionRef& from, ActionKind kind,
                  bool cross) -> std::vector<const FlowArc*> {
    std::vector<const FlowArc*> out;
    const auto it = by_source.find(from.str());
    if (it == by_source.end()) return out;
    for (const auto* f : it->second)
      if (f->target.kind == kind && f->is_cross() == cross) out.push_back(f);
    return out;
  };

  std::vector<Contraction> out;
  std::set<std::string> seen;
  for (const auto& f0 : model.flows) {
    if (f0.target.kind != ActionKind::Release || f0.is_cross()) continue;
    for (const auto* f1 :
         pick(f0.target, ActionKind::Transfer, /*cross=*/false)) {
      for (const auto* f2 :
           pick(f1->target, ActionKind::Transfer, /*cross=*/true)) {
        for (const auto* f3 :
             pick(f2->target, ActionKind::Receive, /*cross=*/false)) {
          const auto f4s =
              pick(f3->target, ActionKind::Process, /*cross=*/false);
          Contraction c;
          c.arc.source = f0.source;
          c.arc.target = f4s.empty() ? f3->target : f4s.front()->target;
          c.arc.thing_label = f2->thing_label;
          c.arc.annotation = f2->annotation;
          // Effects merge in chain order; canonical models only carry them
          // on the cross hop.
          for (const auto* part : std::initializer_list<const FlowArc*>{
                   &f0, f1, f2, f3})
            c.consumed.push_back(arc_key(part->source, part->target));
          for (const auto* part :
               std::initializer_list<const FlowArc*>{&f0, f1, f2, f3})
            for (const auto& e : part->effects) c.arc.effects.push_back(e);
          if (!f4s.empty()) {
            c.consumed.push_back(
                arc_key(f4s.front()->source, f4s.front()->target));
            for (const auto& e : f4s.front()->effects)
              c.arc.effects.push_back(e);
          }
          if (seen.insert(arc_key(c.arc.source, c.arc.target)).second)
            out.push_back(std::move(c));
        }
      }
    }
  }
  return out;
}

}  // namespace

StaticModel simplify_static(const StaticModel& model) {
  if (model.form != ModelForm::Full)
    throw TmError("E_NOT_FULL_FORM", "simplify requires a full-form model");
  const ValidationReport report = validate_static(model);
  if (!report.ok())
    throw TmError("E_NOT_FULL_FORM",
                  "simplify requires a validated full-form model");

  const auto contractions = find_contractions(model);
  std::set<std::string> consumed;
  for (const auto& c : contractions)
    for (const auto& key : c.consumed) consumed.insert(key);

  StaticModel out;
  out.form = ModelForm::Simplified;
  out.triggers = model.triggers;
  for (const auto& t : model.thimacs) {
    Thimac copy = t;
    copy.actions.clear();
    for (const auto& a : t.actions)
      if (!is_elidable(a.kind)) copy.actions.push_back(a);
    out.thimacs.push_back(std::move(copy));
  }
  for (const auto& f : model.flows) {
    if (consumed.count(arc_key(f.source, f.target))) continue;
    if (is_elidable(f.source.kind) || is_elidable(f.target.kind)) {
      // Verbatim survivors: elided-source receive arcs that no chain feeds.
      if (f.source.kind == ActionKind::Receive &&
          f.target.kind == ActionKind::Process && !f.is_cross()) {
        out.flows.push_back(f);
      }
      continue;  // dangling release/transfer machinery drops
    }
    out.flows.push_back(f);
  }
  for (const auto& c : contractions) out.flows.push_back(c.arc);
  out.canonicalize();
  return out;
}

ModelDocument simplify_document(const ModelDocument& doc) {
  ModelDocument out;
  out.params = doc.params;
  out.behavior = doc.behavior;
  out.statics = simplify_static(doc.statics);

  // Chain arcs map onto their contracted arcs inside event regions. Shared
  // arcs (taps feeding several chains) follow only chains witnessed by an
  // arc exclusive to them, so foreign strands stay out of the region.
  const auto contractions = find_contractions(doc.statics);
  std::map<std::string, std::vector<std::size_t>> consumers;
  for (std::size_t i = 0; i < contractions.size(); ++i)
    for (const auto& key : contractions[i].consumed) consumers[key].push_back(i);

  for (const auto& e : doc.events) {
    EventDef def = e;
    std::set<std::size_t> witnessed;
    for (const auto& el : e.region.elements)
      if (const auto* f = std::get_if<FlowElement>(&el)) {
        const auto it = consumers.find(arc_key(f->source, f->target));
        if (it != consumers.end() && it->second.size() == 1)
          witnessed.insert(it->second.front());
      }
    std::vector<ElementRef> elements;
    for (const auto& el : e.region.elements) {
      if (const auto* s = std::get_if<StageElement>(&el)) {
        if (!is_elidable(s->ref.kind)) elements.push_back(el);
        continue;
      }
      if (const auto* f = std::get_if<FlowElement>(&el)) {
        const auto it = consumers.find(arc_key(f->source, f->target));
        if (it != consumers.end()) {
          for (const std::size_t idx : it->second)
            if (witnessed.count(idx))
              elements.push_back(FlowElement{contractions[idx].arc.source,
                                             contractions[idx].arc.target});
        } else if (out.statics.find_flow(f->source, f->target) != nullptr) {
          elements.push_back(el);
        }
        continue;
      }
      elements.push_back(el);
    }
    std::vector<ElementRef> completed = elements;
    for (const auto& el : elements)
      if (const auto* fe = std::get_if<FlowElement>(&el)) {
        completed.push_back(StageElement{fe->source});
        completed.push_back(StageElement{fe->target});
      }
    def.region.elements = std::move(completed);
    def.region.canonicalize();
    out.events.push_back(std::move(def));
  }
  out.canonicalize();
  return out;
}

namespace {

struct InstanceIndex {
  // host thimac id -> instance ids hosted there
  std::map<std::string, std::vector<std::string>> by_host;
  std::map<std::string, const EventDef*> by_id;

  static std::string host_of(const EventDef& instance) {
    for (const auto& s : instance.region.stages())
      if (s.kind == ActionKind::Create) return s.thimac;
    return {};
  }
};

// Thimacs an event's region touches (via stages or whole-thimac refs).
std::set<std::string> touched_thimacs(const Region& region) {
  std::set<std::string> out;
  for (const auto& s : region.stages()) out.insert(s.thimac);
  for (const auto& t : region.thimac_refs()) out.insert(t);
  return out;
}

// Is there a directed region-flow path from a stage of `from` to a stage of
// `to`?
bool region_path(const Region& region, const std::string& from,
                 const std::string& to) {
  const auto flows = region.flow_refs();
  std::set<std::string> frontier;
  for (const auto& f : flows)
    if (f.source.thimac == from) frontier.insert(f.source.str());
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& f : flows) {
      if (frontier.count(f.source.str()) && !frontier.count(f.target.str())) {
        frontier.insert(f.target.str());
        grew = true;
      }
    }
  }
  for (const auto& f : flows)
    if (f.target.thimac == to && frontier.count(f.target.str())) return true;
  return false;
}

void set_default_name(PgNode& node, const EventDef& instance) {
  if (!node.props.count("name"))
    node.props["name"] = Value{instance.display_name()};
}

}  // namespace

ReducedSkeleton reduce_dynamic(const StaticModel& statics,
                               const std::vector<EventDef>& events) {
  ReducedSkeleton out;
  InstanceIndex index;

  for (const auto& e : events) {
    if (e.classification != Classification::Instance) continue;
    const std::string host = InstanceIndex::host_of(e);
    index.by_host[host].push_back(e.id);
    index.by_id[e.id] = &e;

    PgNode node;
    node.id = e.id;
    const Thimac* t = statics.find_thimac(host);
    node.labels.push_back(t != nullptr ? t->name : host);
    node.props = e.props;
    set_default_name(node, e);
    out.graph.nodes.push_back(std::move(node));
  }

  auto emit = [&](const EventDef& e, const std::string& from,
                  const std::string& to, bool mutual, bool first) {
    PgRel rel;
    rel.id = mutual ? e.id + (first ? ".1" : ".2") : e.id;
    rel.type = e.display_name();
    rel.start = from;
    rel.end = to;
    rel.props = e.props;
    out.graph.rels.push_back(std::move(rel));
  };

  for (const auto& e : events) {
    if (e.classification == Classification::Instance) continue;

    if (e.participants) {
      if (!index.by_id.count(e.participants->first) ||
          !index.by_id.count(e.participants->second)) {
        out.diagnostics.push_back(
            {Severity::Error, codes::kUnreducibleEvent,
             "event '" + e.id + "' names unknown participants",
             {e.id}});
        continue;
      }
      emit(e, e.participants->first, e.participants->second, false, false);
      continue;
    }

    // Endpoints inferred from the region: the instance-hosting thimacs it
    // touches, direction from region flow paths.
    std::vector<std::string> hosts;
    for (const auto& t : touched_thimacs(e.region))
      if (index.by_host.count(t)) hosts.push_back(t);
    std::stable_sort(hosts.begin(), hosts.end(), NaturalLess{});

    std::size_t instance_count = 0;
    bool ambiguous = false;
    for (const auto& h : hosts) {
      instance_count += index.by_host[h].size();
      if (index.by_host[h].size() > 1) ambiguous = true;
    }

    if (hosts.empty()) {
      out.diagnostics.push_back(
          {Severity::Error, codes::kUnreducibleEvent,
           "event '" + e.id + "' touches no instances", {e.id}});
      continue;
    }
    if (ambiguous) {
      out.diagnostics.push_back(
          {Severity::Error, codes::kUnreducibleEvent,
           "event '" + e.id +
               "' touches a thimac hosting several instances and carries no "
               "participants",
           {e.id}});
      continue;
    }
    if (instance_count >= 3) {
      out.diagnostics.push_back(
          {Severity::Error, codes::kUnreducibleEvent,
           "event '" + e.id + "' touches " + std::to_string(instance_count) +
               " instances",
           {e.id}});
      continue;
    }

    if (hosts.size() == 1) {
      // Unary event: becomes a property on its instance's node.
      const std::string& instance = index.by_host[hosts[0]].front();
      for (auto& n : out.graph.nodes)
        if (n.id == instance) n.props[e.display_name()] = Value{true};
      continue;
    }

    const std::string& ia = index.by_host[hosts[0]].front();
    const std::string& ib = index.by_host[hosts[1]].front();
    const bool ab = region_path(e.region, hosts[0], hosts[1]);
    const bool ba = region_path(e.region, hosts[1], hosts[0]);
    if (!ab && !ba) {
      out.diagnostics.push_back(
          {Severity::Error, codes::kUnreducibleEvent,
           "event '" + e.id + "' region carries no flow direction between " +
               hosts[0] + " and " + hosts[1],
           {e.id}});
      continue;
    }
    if (ab && ba) {
      emit(e, ia, ib, true, true);
      emit(e, ib, ia, true, false);
    } else if (ab) {
      emit(e, ia, ib, false, false);
    } else {
      emit(e, ib, ia, false, false);
    }
  }

  out.graph.canonicalize();
  return out;
}

PropertyGraph to_property_graph(const ReducedSkeleton& skeleton) {
  if (!skeleton.reducible()) {
    std::string first;
    for (const auto& d : skeleton.diagnostics)
      if (d.severity == Severity::Error) {
        first = d.message;
        break;
      }
    throw TmError("E_UNREDUCIBLE", first);
  }
  PropertyGraph g = skeleton.graph;
  g.canonicalize();
  return g;
}

std::set<std::string> query_neighbors(const PropertyGraph& graph,
                                      const std::string& node_name,
                                      const std::string& rel_type,
                                      Direction direction) {
  const PgNode* node = graph.find_node_by_name(node_name);
  if (node == nullptr)
    throw TmError("E_NO_SUCH_NODE", "no node named '" + node_name + "'");

  std::set<std::string> out;
  for (const auto& r : graph.rels) {
    if (r.type != rel_type) continue;
    if ((direction == Direction::Out || direction == Direction::Both) &&
        r.start == node->id) {
      if (const PgNode* n = graph.find_node(r.end))
        out.insert(graph.node_display_name(*n));
    }
    if ((direction == Direction::In || direction == Direction::Both) &&
        r.end == node->id) {
      if (const PgNode* n = graph.find_node(r.start))
        out.insert(graph.node_display_name(*n));
    }
  }
  return out;
}

}  // namespace tmkit
