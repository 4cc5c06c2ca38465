#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "tmkit/dsl.hpp"
#include "tmkit/normalize.hpp"
#include "tmkit/pg.hpp"

namespace tmkit::test {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string model_path(const std::string& name) {
  return std::string(TMKIT_MODELS_DIR) + "/" + name;
}

inline ModelDocument load_corpus(const std::string& name) {
  const auto result = parse(slurp(model_path(name)));
  if (!result.ok())
    throw std::runtime_error("corpus " + name + " failed to parse");
  if (!result.report.ok())
    throw std::runtime_error("corpus " + name + " failed to validate");
  return *result.document;
}

using Rng = std::mt19937;

inline int pick(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Random simplified-form model, legal by construction: boxes with create
/// and process stages, cross flows from create/process into process or an
/// elided receive, plus guarded-free triggers. Canonical (no annotations,
/// labels or effects on elidable machinery).
inline StaticModel gen_simplified_model(Rng& rng, int max_thimacs = 5) {
  StaticModel m;
  m.form = ModelForm::Simplified;
  const int n = pick(rng, 2, max_thimacs);
  for (int i = 0; i < n; ++i) {
    Thimac t;
    t.id = "box" + std::to_string(i + 1);
    t.name = t.id;
    t.actions.push_back({ActionKind::Create, std::nullopt});
    t.actions.push_back({ActionKind::Process, std::nullopt});
    m.thimacs.push_back(std::move(t));
  }
  // Canonical discipline: per box, one inbound style (elided terminal
  // receive or process) and one outbound source kind (create or process).
  // Full form shares one release/transfer per box, so mixed styles cannot
  // be told apart after a normalize/simplify trip.
  std::vector<ActionKind> inbound_kind(n), outbound_kind(n);
  for (int i = 0; i < n; ++i) {
    inbound_kind[i] =
        pick(rng, 0, 1) == 0 ? ActionKind::Process : ActionKind::Receive;
    outbound_kind[i] =
        pick(rng, 0, 1) == 0 ? ActionKind::Create : ActionKind::Process;
  }
  const int arcs = pick(rng, 1, 2 * n);
  for (int i = 0; i < arcs; ++i) {
    const int a = pick(rng, 0, n - 1);
    int b = pick(rng, 0, n - 2);
    if (b >= a) ++b;  // cross arcs need distinct thimacs
    FlowArc f;
    f.source = {m.thimacs[a].id, outbound_kind[a]};
    f.target = {m.thimacs[b].id, inbound_kind[b]};
    m.flows.push_back(std::move(f));
  }
  if (pick(rng, 0, 2) == 0 && n >= 2) {
    TriggerArc t;
    t.source = {m.thimacs[0].id, ActionKind::Process};
    t.target = {m.thimacs[n - 1].id, ActionKind::Create};
    if (t.source.thimac != t.target.thimac) m.triggers.push_back(std::move(t));
  }
  m.canonicalize();
  // Dedupe arcs the random picks may have repeated.
  m.flows.erase(std::unique(m.flows.begin(), m.flows.end()), m.flows.end());
  m.triggers.erase(std::unique(m.triggers.begin(), m.triggers.end()),
                   m.triggers.end());
  return m;
}

/// Random valid document (full form) with instances over creates, a flow
/// event when arcs exist, and a chain behavior.
inline ModelDocument gen_document(Rng& rng) {
  ModelDocument doc;
  doc.statics = normalize(gen_simplified_model(rng));
  int k = 0;
  for (const auto& t : doc.statics.thimacs) {
    if (!t.has_action(ActionKind::Create)) continue;
    if (pick(rng, 0, 1) == 0) continue;
    EventDef e;
    e.id = "I" + std::to_string(++k);
    e.classification = Classification::Instance;
    e.region.elements.push_back(StageElement{{t.id, ActionKind::Create}});
    e.region.canonicalize();
    doc.events.push_back(std::move(e));
  }
  if (!doc.statics.flows.empty()) {
    EventDef e;
    e.id = "E1";
    e.classification = Classification::Event;
    const auto& arc = doc.statics.flows[pick(
        rng, 0, static_cast<int>(doc.statics.flows.size()) - 1)];
    e.region.elements.push_back(FlowElement{arc.source, arc.target});
    e.region.canonicalize();
    doc.events.push_back(std::move(e));
  }
  if (!doc.events.empty() && pick(rng, 0, 1) == 0) {
    BehaviorModel b;
    BehaviorComponent c;
    c.name = "main";
    for (const auto& e : doc.events) c.nodes.push_back(e.id);
    for (std::size_t i = 0; i + 1 < doc.events.size(); ++i)
      c.edges.push_back({doc.events[i].id, doc.events[i + 1].id,
                         pick(rng, 0, 3) == 0 ? EdgeKind::Repeat
                                              : EdgeKind::Sequence});
    b.components.push_back(std::move(c));
    doc.behavior = std::move(b);
  }
  if (pick(rng, 0, 1) == 0) doc.params["limit"] = Value{(long long)pick(rng, 1, 9)};
  doc.canonicalize();
  return doc;
}

/// Random property graph: <=10 nodes over three labels, <=20 rels over
/// three types, no self loops.
inline PropertyGraph gen_property_graph(Rng& rng, int max_nodes = 10,
                                        int max_rels = 20) {
  PropertyGraph g;
  const int n = pick(rng, 1, max_nodes);
  const char* labels[] = {"Alpha", "Beta", "Gamma"};
  const char* types[] = {"REL", "SEES", "TIES"};
  for (int i = 0; i < n; ++i) {
    PgNode node;
    node.id = "n" + std::to_string(i + 1);
    node.labels.push_back(labels[pick(rng, 0, 2)]);
    if (pick(rng, 0, 1) == 0)
      node.props["name"] = Value{std::string("name") + std::to_string(i + 1)};
    if (pick(rng, 0, 2) == 0) node.props["weight"] = Value{(long long)pick(rng, 1, 99)};
    g.nodes.push_back(std::move(node));
  }
  if (n >= 2) {
    const int m = pick(rng, 0, max_rels);
    for (int i = 0; i < m; ++i) {
      PgRel r;
      r.id = "r" + std::to_string(i + 1);
      r.type = types[pick(rng, 0, 2)];
      const int a = pick(rng, 0, n - 1);
      int b = pick(rng, 0, n - 2);
      if (b >= a) ++b;
      r.start = g.nodes[a].id;
      r.end = g.nodes[b].id;
      g.rels.push_back(std::move(r));
    }
  }
  g.canonicalize();
  return g;
}

}  // namespace tmkit::test
