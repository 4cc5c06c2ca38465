#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "tmkit/transform.hpp"
#include "tmkit/validate.hpp"

namespace tmkit {

namespace {

std::string sanitize(const std::string& label) {
  std::string out;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else
      out += '_';
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0])))
    out = "t_" + out;
  return out;
}

std::string join_labels(const std::vector<std::string>& labels) {
  std::string out;
  for (const auto& l : labels) {
    if (!out.empty()) out += "&";
    out += l;
  }
  return out;
}

void ensure_stage(StaticModel& model, const std::string& thimac,
                  ActionKind kind) {
  Thimac* t = model.find_thimac(thimac);
  if (t != nullptr && !t->has_action(kind))
    t->actions.push_back({kind, std::nullopt});
}

}  // namespace

std::vector<EventDef> LiftReport::all_events() const {
  std::vector<EventDef> out = instances;
  out.insert(out.end(), events.begin(), events.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const EventDef& a, const EventDef& b) {
                     return natural_less(a.id, b.id);
                   });
  return out;
}

ModelDocument LiftReport::to_document() const {
  ModelDocument doc;
  doc.statics = statics;
  doc.events = all_events();
  doc.canonicalize();
  return doc;
}

LiftReport lift_property_graph(const PropertyGraph& graph,
                               const LiftOptions& options) {
  PropertyGraph g = graph;
  g.canonicalize();

  LiftReport report;
  report.statics.form = ModelForm::Full;

  // One class thimac per distinct label set.
  std::map<std::string, std::string> class_base;  // label key -> base id
  std::set<std::string> used_ids;
  std::set<std::string> label_universe;
  auto class_key = [&](const PgNode& n) { return join_labels(n.labels); };

  for (const auto& n : g.nodes) {
    if (n.labels.empty())
      throw TmError("E_EMPTY_LABEL", "node '" + n.id + "' carries no label");
    for (const auto& l : n.labels) label_universe.insert(l);
    const std::string key = class_key(n);
    if (class_base.count(key)) continue;
    std::string id = sanitize(key);
    while (!used_ids.insert(id).second) id += "_";
    class_base[key] = id;
  }

  std::map<std::string, std::string> node_base;  // node id -> class base id
  for (const auto& n : g.nodes) node_base[n.id] = class_base[class_key(n)];

  // Containment nests a child class inside its (unique, acyclic) parent
  // class; thimac ids are nesting paths, so nested classes get dotted ids.
  std::map<std::string, std::set<std::string>> containment_parents;
  for (const auto& r : g.rels)
    if (options.containment_types.count(r.type) &&
        node_base[r.start] != node_base[r.end])
      containment_parents[node_base[r.end]].insert(node_base[r.start]);

  std::map<std::string, std::string> parent_of;  // child base -> parent base
  for (const auto& [child, parents] : containment_parents) {
    if (parents.size() != 1) continue;
    // Reject parent chains that loop back.
    std::string up = *parents.begin();
    bool cycle = up == child;
    std::set<std::string> seen{child};
    while (!cycle && containment_parents.count(up) &&
           containment_parents[up].size() == 1) {
      if (!seen.insert(up).second) cycle = true;
      up = *containment_parents[up].begin();
      if (up == child) cycle = true;
    }
    if (!cycle) parent_of[child] = *parents.begin();
  }

  std::map<std::string, std::string> final_id;  // base id -> nesting path id
  auto resolve_id = [&](auto&& self, const std::string& base) -> std::string {
    const auto done = final_id.find(base);
    if (done != final_id.end()) return done->second;
    const auto up = parent_of.find(base);
    const std::string id =
        up == parent_of.end() ? base : self(self, up->second) + "." + base;
    final_id[base] = id;
    return id;
  };
  for (const auto& [key, base] : class_base) resolve_id(resolve_id, base);

  for (const auto& [key, base] : class_base) {
    Thimac t;
    t.id = final_id[base];
    t.name = key;
    if (parent_of.count(base)) t.parent = final_id[parent_of[base]];
    t.actions.push_back({ActionKind::Create, std::nullopt});
    report.statics.thimacs.push_back(std::move(t));
  }

  std::map<std::string, std::string> node_class;  // node id -> class thimac id
  for (const auto& n : g.nodes) node_class[n.id] = final_id[node_base[n.id]];

  // Channels: one relationship box per (type, source class, target class).
  struct Channel {
    std::string box;
    std::vector<FlowElement> strand;
    bool containment = false;
    std::string child;  // containment: child class id
  };
  std::map<std::string, Channel> channels;  // triple key -> channel

  std::set<std::string> arc_keys;
  auto add_flow = [&](const ActionRef& s, const ActionRef& t) {
    if (arc_keys.insert(s.str() + "|" + t.str()).second)
      report.statics.flows.push_back({s, t, std::nullopt, std::nullopt, {}});
  };

  for (const auto& r : g.rels) {
    const std::string& src = node_class[r.start];
    const std::string& dst = node_class[r.end];
    const std::string triple = r.type + "|" + src + "|" + dst;
    if (channels.count(triple)) continue;

    Channel ch;
    const bool nest = options.containment_types.count(r.type) &&
                      parent_of.count(node_base[r.end]) &&
                      final_id[parent_of[node_base[r.end]]] == src;
    if (nest) {
      ch.containment = true;
      ch.child = dst;
      channels[triple] = std::move(ch);
      continue;
    }

    std::string box =
        sanitize(r.type) + "_" + sanitize(src) + "_" + sanitize(dst);
    while (!used_ids.insert(box).second) box += "_";
    Thimac t;
    t.id = box;
    t.name = r.type;
    report.statics.thimacs.push_back(std::move(t));
    ch.box = box;

    const ActionRef s_create{src, ActionKind::Create};
    const ActionRef s_rel{src, ActionKind::Release};
    const ActionRef s_xfer{src, ActionKind::Transfer};
    const ActionRef b_in{box, ActionKind::Transfer};
    const ActionRef b_rcv{box, ActionKind::Receive};
    const ActionRef b_proc{box, ActionKind::Process};
    const ActionRef b_rel{box, ActionKind::Release};
    const ActionRef d_xfer{dst, ActionKind::Transfer};
    const ActionRef d_rcv{dst, ActionKind::Receive};
    for (const auto& ref : {s_rel, s_xfer}) ensure_stage(report.statics, src, ref.kind);
    for (const auto& ref : {b_in, b_rcv, b_proc, b_rel})
      ensure_stage(report.statics, box, ref.kind);
    for (const auto& ref : {d_xfer, d_rcv}) ensure_stage(report.statics, dst, ref.kind);

    const std::vector<std::pair<ActionRef, ActionRef>> arcs = {
        {s_create, s_rel}, {s_rel, s_xfer},  {s_xfer, b_in},
        {b_in, b_rcv},     {b_rcv, b_proc},  {b_proc, b_rel},
        {b_rel, {box, ActionKind::Transfer}}, {{box, ActionKind::Transfer}, d_xfer},
        {d_xfer, d_rcv}};
    for (const auto& [s, t] : arcs) {
      add_flow(s, t);
      ch.strand.push_back({s, t});
    }
    channels[triple] = std::move(ch);
  }

  // Instances: one per node, region = its class's Create.
  for (const auto& n : g.nodes) {
    EventDef inst;
    inst.id = n.id;
    inst.classification = Classification::Instance;
    inst.region.elements.push_back(
        StageElement{{node_class[n.id], ActionKind::Create}});
    inst.region.canonicalize();
    auto props = n.props;
    const auto name_it = props.find("name");
    if (name_it != props.end() &&
        std::holds_alternative<std::string>(name_it->second)) {
      inst.label = std::get<std::string>(name_it->second);
      props.erase("name");
    }
    inst.props = std::move(props);
    report.instances.push_back(std::move(inst));
  }

  // Events: one per relationship, region = its channel, endpoints bound.
  for (const auto& r : g.rels) {
    const std::string triple =
        r.type + "|" + node_class[r.start] + "|" + node_class[r.end];
    const Channel& ch = channels[triple];
    EventDef ev;
    ev.id = r.id;
    ev.label = r.type;
    ev.participants = {{r.start, r.end}};
    ev.props = r.props;
    if (ch.containment) {
      ev.region.elements.push_back(
          StageElement{{ch.child, ActionKind::Create}});
    } else {
      for (const auto& fe : ch.strand) ev.region.elements.push_back(fe);
      std::vector<ElementRef> completed = ev.region.elements;
      for (const auto& el : ev.region.elements)
        if (const auto* fe = std::get_if<FlowElement>(&el)) {
          completed.push_back(StageElement{fe->source});
          completed.push_back(StageElement{fe->target});
        }
      ev.region.elements = std::move(completed);
    }
    ev.region.canonicalize();
    report.events.push_back(std::move(ev));

    if (r.start == r.end)
      report.mixing.push_back({Severity::Warning, codes::kSelfLoopRel,
                               "rel '" + r.id + "' is a self loop on node '" +
                                   r.start + "'; self loops have no TM analogue",
                               {r.id}});
  }

  // Level-mixing findings: a single-node label equal to that node's name
  // treats a particular as a type; property values duplicating labels mix
  // the class level into the data.
  std::map<std::string, std::vector<const PgNode*>> by_label;
  for (const auto& n : g.nodes)
    for (const auto& l : n.labels) by_label[l].push_back(&n);
  for (const auto& [label, nodes] : by_label) {
    if (nodes.size() == 1 && g.node_display_name(*nodes[0]) == label)
      report.mixing.push_back(
          {Severity::Warning, codes::kMixingNodeAsType,
           "label '" + label + "' names exactly one node and equals its name",
           {nodes[0]->id}});
  }
  for (const auto& n : g.nodes)
    for (const auto& [key, value] : n.props)
      if (std::holds_alternative<std::string>(value) &&
          label_universe.count(std::get<std::string>(value)))
        report.mixing.push_back(
            {Severity::Warning, codes::kMixingPropIsLabel,
             "node '" + n.id + "' prop '" + key + "' duplicates label '" +
                 std::get<std::string>(value) + "'",
             {n.id}});

  report.statics.canonicalize();
  std::stable_sort(report.instances.begin(), report.instances.end(),
                   [](const EventDef& a, const EventDef& b) {
                     return natural_less(a.id, b.id);
                   });
  std::stable_sort(report.events.begin(), report.events.end(),
                   [](const EventDef& a, const EventDef& b) {
                     return natural_less(a.id, b.id);
                   });
  return report;
}

}  // namespace tmkit
