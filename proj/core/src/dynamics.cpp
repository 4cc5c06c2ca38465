#include "tmkit/dynamics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "tmkit/validate.hpp"

namespace tmkit {

std::string to_string(const ElementRef& e) {
  if (const auto* t = std::get_if<ThimacElement>(&e)) return t->id;
  if (const auto* s = std::get_if<StageElement>(&e)) return s->ref.str();
  if (const auto* f = std::get_if<FlowElement>(&e))
    return "flow(" + f->source.str() + " -> " + f->target.str() + ")";
  const auto& t = std::get<TriggerElement>(e);
  return "trigger(" + t.source.str() + " --> " + t.target.str() + ")";
}

bool element_less(const ElementRef& a, const ElementRef& b) {
  if (a.index() != b.index()) return a.index() < b.index();
  switch (a.index()) {
    case 0:
      return natural_less(std::get<ThimacElement>(a).id,
                          std::get<ThimacElement>(b).id);
    case 1: {
      const auto& x = std::get<StageElement>(a).ref;
      const auto& y = std::get<StageElement>(b).ref;
      return natural_ref_less(x, y);
    }
    case 2: {
      const auto& x = std::get<FlowElement>(a);
      const auto& y = std::get<FlowElement>(b);
      if (!(x.source == y.source)) return natural_ref_less(x.source, y.source);
      return natural_ref_less(x.target, y.target);
    }
    default: {
      const auto& x = std::get<TriggerElement>(a);
      const auto& y = std::get<TriggerElement>(b);
      if (!(x.source == y.source)) return natural_ref_less(x.source, y.source);
      return natural_ref_less(x.target, y.target);
    }
  }
}

bool Region::contains(const ElementRef& e) const {
  return std::find(elements.begin(), elements.end(), e) != elements.end();
}

std::vector<ActionRef> Region::stages() const {
  std::vector<ActionRef> out;
  for (const auto& e : elements)
    if (const auto* s = std::get_if<StageElement>(&e)) out.push_back(s->ref);
  return out;
}

std::vector<FlowElement> Region::flow_refs() const {
  std::vector<FlowElement> out;
  for (const auto& e : elements)
    if (const auto* f = std::get_if<FlowElement>(&e)) out.push_back(*f);
  return out;
}

std::vector<TriggerElement> Region::trigger_refs() const {
  std::vector<TriggerElement> out;
  for (const auto& e : elements)
    if (const auto* t = std::get_if<TriggerElement>(&e)) out.push_back(*t);
  return out;
}

std::vector<std::string> Region::thimac_refs() const {
  std::vector<std::string> out;
  for (const auto& e : elements)
    if (const auto* t = std::get_if<ThimacElement>(&e)) out.push_back(t->id);
  return out;
}

void Region::canonicalize() {
  // Arc endpoints are part of the canonical region.
  std::vector<ElementRef> completed = elements;
  for (const auto& e : elements) {
    if (const auto* f = std::get_if<FlowElement>(&e)) {
      completed.push_back(StageElement{f->source});
      completed.push_back(StageElement{f->target});
    } else if (const auto* t = std::get_if<TriggerElement>(&e)) {
      completed.push_back(StageElement{t->source});
      completed.push_back(StageElement{t->target});
    }
  }
  elements = std::move(completed);
  std::stable_sort(elements.begin(), elements.end(), element_less);
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
}

std::string_view to_string(Classification c) {
  return c == Classification::Event ? "event" : "instance";
}

void BehaviorModel::canonicalize() {
  for (auto& c : components) {
    std::stable_sort(c.nodes.begin(), c.nodes.end(), NaturalLess{});
    c.nodes.erase(std::unique(c.nodes.begin(), c.nodes.end()), c.nodes.end());
    std::stable_sort(c.edges.begin(), c.edges.end(),
              [](const BehaviorEdge& a, const BehaviorEdge& b) {
                if (a.from != b.from) return natural_less(a.from, b.from);
                if (a.to != b.to) return natural_less(a.to, b.to);
                return static_cast<int>(a.kind) < static_cast<int>(b.kind);
              });
  }
  std::stable_sort(components.begin(), components.end(),
            [](const BehaviorComponent& a, const BehaviorComponent& b) {
              return natural_less(a.name, b.name);
            });
}

namespace {

// Union-find over region vertices for the weak-connectivity check.
struct DisjointSet {
  std::map<std::string, std::string> parent;

  void add(const std::string& v) {
    parent.emplace(v, v);
  }
  std::string find(const std::string& v) {
    std::string cur = v;
    while (parent[cur] != cur) cur = parent[cur];
    return cur;
  }
  void unite(const std::string& a, const std::string& b) {
    parent[find(a)] = find(b);
  }
};

}  // namespace

EventDef make_event(const StaticModel& model, std::string id,
                    std::vector<ElementRef> elements,
                    Classification classification,
                    std::optional<std::string> label,
                    std::optional<std::pair<std::string, std::string>>
                        participants) {
  if (elements.empty())
    throw TmError("E_EMPTY_REGION", "event '" + id + "' has an empty region");

  // Arc endpoints complete the region; nothing else is closed over.
  std::vector<ElementRef> completed = elements;
  for (const auto& e : elements) {
    if (const auto* f = std::get_if<FlowElement>(&e)) {
      completed.push_back(StageElement{f->source});
      completed.push_back(StageElement{f->target});
    } else if (const auto* t = std::get_if<TriggerElement>(&e)) {
      completed.push_back(StageElement{t->source});
      completed.push_back(StageElement{t->target});
    }
  }

  Region region{std::move(completed)};
  region.canonicalize();

  for (const auto& e : region.elements) {
    if (const auto* t = std::get_if<ThimacElement>(&e)) {
      if (model.find_thimac(t->id) == nullptr)
        throw TmError("E_DANGLING_REF", "event '" + id +
                                            "' references undeclared thimac '" +
                                            t->id + "'");
    } else if (const auto* s = std::get_if<StageElement>(&e)) {
      const bool elided_ok = model.form == ModelForm::Simplified &&
                             s->ref.kind != ActionKind::Process &&
                             model.find_thimac(s->ref.thimac) != nullptr;
      if (!model.has_stage(s->ref) && !elided_ok)
        throw TmError("E_DANGLING_REF", "event '" + id +
                                            "' references undeclared stage '" +
                                            s->ref.str() + "'");
    } else if (const auto* f = std::get_if<FlowElement>(&e)) {
      if (model.find_flow(f->source, f->target) == nullptr)
        throw TmError("E_DANGLING_REF",
                      "event '" + id + "' references undeclared " +
                          to_string(e));
    } else if (const auto* t = std::get_if<TriggerElement>(&e)) {
      if (model.find_trigger(t->source, t->target) == nullptr)
        throw TmError("E_DANGLING_REF",
                      "event '" + id + "' references undeclared " +
                          to_string(e));
    }
  }

  // Weak connectivity over the induced subdiagram: arcs connect their
  // endpoint stages, stages of one thimac connect through their box, and a
  // thimac element connects to its stages, subthimacs and parent when those
  // are in the region.
  DisjointSet ds;
  for (const auto& e : region.elements) ds.add(to_string(e));
  auto stage_key = [](const ActionRef& r) { return r.str(); };
  {
    std::map<std::string, std::string> first_stage_of;
    for (const auto& e : region.elements)
      if (const auto* s = std::get_if<StageElement>(&e)) {
        auto [it, inserted] =
            first_stage_of.emplace(s->ref.thimac, stage_key(s->ref));
        if (!inserted) ds.unite(stage_key(s->ref), it->second);
      }
  }
  for (const auto& e : region.elements) {
    if (const auto* f = std::get_if<FlowElement>(&e)) {
      ds.unite(to_string(e), stage_key(f->source));
      ds.unite(to_string(e), stage_key(f->target));
    } else if (const auto* t = std::get_if<TriggerElement>(&e)) {
      ds.unite(to_string(e), stage_key(t->source));
      ds.unite(to_string(e), stage_key(t->target));
    } else if (const auto* s = std::get_if<StageElement>(&e)) {
      // A stage sits inside every box on its thimac's parent chain.
      const Thimac* host = model.find_thimac(s->ref.thimac);
      while (host != nullptr) {
        if (region.contains(ElementRef{ThimacElement{host->id}}))
          ds.unite(to_string(e), host->id);
        host = host->parent ? model.find_thimac(*host->parent) : nullptr;
      }
    } else if (const auto* t = std::get_if<ThimacElement>(&e)) {
      const Thimac* th = model.find_thimac(t->id);
      if (th && th->parent &&
          region.contains(ElementRef{ThimacElement{*th->parent}}))
        ds.unite(t->id, *th->parent);
    }
  }
  std::set<std::string> components;
  for (const auto& e : region.elements)
    components.insert(ds.find(to_string(e)));
  if (components.size() > 1)
    throw TmError("E_DISCONNECTED_REGION",
                  "event '" + id + "' region splits into " +
                      std::to_string(components.size()) + " parts");

  if (classification == Classification::Instance) {
    std::set<std::string> creating;
    for (const auto& s : region.stages())
      if (s.kind == ActionKind::Create) creating.insert(s.thimac);
    if (creating.size() != 1)
      throw TmError("E_INSTANCE_WITHOUT_CREATE",
                    "instance '" + id +
                        "' must include the create stage of exactly one "
                        "thimac, found " +
                        std::to_string(creating.size()));
  }

  EventDef def;
  def.id = std::move(id);
  def.label = std::move(label);
  def.region = std::move(region);
  def.classification = classification;
  def.participants = std::move(participants);
  return def;
}

Classification classify(const Region& region) {
  std::set<std::string> creating;
  for (const auto& s : region.stages()) {
    if (s.kind != ActionKind::Create) return Classification::Event;
    creating.insert(s.thimac);
  }
  return creating.size() == 1 ? Classification::Instance
                              : Classification::Event;
}

ValidationReport validate_behavior(const BehaviorModel& behavior,
                                   const std::vector<EventDef>& events) {
  ValidationReport report;
  std::set<std::string> known;
  for (const auto& e : events) known.insert(e.id);

  std::map<std::string, std::string> component_of;
  for (const auto& c : behavior.components) {
    for (const auto& n : c.nodes) {
      if (!known.count(n))
        report.error(codes::kUnknownEvent,
                     "behavior node '" + n + "' is not a declared event",
                     {n});
      auto [it, inserted] = component_of.emplace(n, c.name);
      if (!inserted && it->second != c.name)
        report.error(codes::kDuplicateBehaviorNode,
                     "event '" + n + "' appears in components '" + it->second +
                         "' and '" + c.name + "'",
                     {n});
    }
    for (const auto& e : c.edges) {
      for (const auto& endpoint : {e.from, e.to}) {
        if (std::find(c.nodes.begin(), c.nodes.end(), endpoint) ==
            c.nodes.end()) {
          const auto other = component_of.find(endpoint);
          if (other != component_of.end() && other->second != c.name)
            report.error(codes::kCrossComponentEdge,
                         "edge " + e.from + " -> " + e.to +
                             " crosses into component '" + other->second + "'",
                         {e.from, e.to});
          else if (!known.count(endpoint))
            report.error(codes::kUnknownEvent,
                         "behavior edge references undeclared event '" +
                             endpoint + "'",
                         {endpoint});
        }
      }
    }

    // Sequence cycles: DFS over Sequence edges restricted to the component.
    std::map<std::string, std::vector<std::string>> next;
    for (const auto& e : c.edges)
      if (e.kind == EdgeKind::Sequence) next[e.from].push_back(e.to);
    std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
    std::vector<std::string> stack;
    bool cycle = false;
    std::string cycle_at;
    auto dfs = [&](auto&& self, const std::string& v) -> void {
      state[v] = 1;
      for (const auto& w : next[v]) {
        if (state[w] == 1) {
          cycle = true;
          if (cycle_at.empty()) cycle_at = w;
          return;
        }
        if (state[w] == 0) self(self, w);
        if (cycle) return;
      }
      state[v] = 2;
    };
    for (const auto& n : c.nodes) {
      if (state[n] == 0 && !cycle) dfs(dfs, n);
    }
    if (cycle)
      report.error(codes::kSequenceCycle,
                   "component '" + c.name +
                       "' has a Sequence cycle through '" + cycle_at +
                       "'; repetition must use repeat edges",
                   {cycle_at});
  }

  for (const auto& e : events)
    if (!component_of.count(e.id))
      report.warn(codes::kEventNotInBehavior,
                  "event '" + e.id + "' does not appear in the behavior graph",
                  {e.id});

  return report;
}

}  // namespace tmkit
