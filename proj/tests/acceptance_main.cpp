// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances and budgets are pinned in code.

#include <algorithm>
#include <chrono>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "iso_oracle.hpp"
#include "test_util.hpp"
#include "tmkit/dsl.hpp"
#include "tmkit/normalize.hpp"
#include "tmkit/render.hpp"
#include "tmkit/sim.hpp"
#include "tmkit/transform.hpp"
#include "tmkit/validate.hpp"

using namespace tmkit;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, const std::string& title, bool pass,
            const std::string& detail = {}) {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << ": "
            << title;
  if (!pass && !detail.empty()) std::cout << " -- " << detail;
  std::cout << std::endl;
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Stimulus order_at(long long tick, bool ok) {
  Stimulus s;
  s.at_tick = tick;
  s.type = "customer.order";
  s.attributes["payment_ok"] = Value{ok};
  return s;
}

std::vector<std::string> firings(const Trace& trace) {
  std::vector<std::string> out;
  for (const auto& e : trace.entries) out.push_back(e.event_id);
  return out;
}

// ---- criterion 1: corpus fidelity ------------------------------------

void criterion_1() {
  const auto start = Clock::now();
  std::ostringstream why;
  bool pass = true;

  std::map<std::string, ModelDocument> docs;
  for (const char* name : {"pizza.tm", "followship.tm", "orders.tm"}) {
    const auto result = parse(test::slurp(test::model_path(name)));
    if (!result.ok()) {
      pass = false;
      why << name << " has parse errors; ";
      continue;
    }
    if (!result.report.ok()) {
      pass = false;
      why << name << " has validation errors; ";
      continue;
    }
    docs[name] = *result.document;
  }

  if (docs.count("pizza.tm")) {
    const auto& pizza = docs["pizza.tm"];
    std::map<int, int> seen;
    for (const auto& t : pizza.statics.thimacs) {
      if (t.annotation) ++seen[*t.annotation];
      for (const auto& a : t.actions)
        if (a.annotation) ++seen[*a.annotation];
      for (const auto& s : t.slots)
        if (s.annotation) ++seen[*s.annotation];
    }
    for (const auto& f : pizza.statics.flows)
      if (f.annotation) ++seen[*f.annotation];
    for (const auto& g : pizza.statics.triggers)
      if (g.annotation) ++seen[*g.annotation];
    if (seen.size() != 28) {
      pass = false;
      why << "pizza has " << seen.size() << " annotation numbers; ";
    }
    for (int i = 1; i <= 28; ++i)
      if (seen[i] != 1) {
        pass = false;
        why << "annotation " << i << " appears " << seen[i] << " times; ";
      }
    if (pizza.events.size() != 20) {
      pass = false;
      why << "pizza declares " << pizza.events.size() << " events; ";
    }
    for (int i = 1; i <= 20; ++i)
      if (pizza.find_event("E" + std::to_string(i)) == nullptr) {
        pass = false;
        why << "E" << i << " missing; ";
      }
  }

  const double elapsed = seconds_since(start);
  if (elapsed >= 1.0) {
    pass = false;
    why << "took " << elapsed << "s (budget 1s)";
  }
  report(1, "corpus fidelity (parse, validate, annotations 1-28, E1-E20)",
         pass, why.str());
}

// ---- criterion 2: simulation branch semantics -------------------------

void criterion_2() {
  std::ostringstream why;
  bool pass = true;
  const auto doc = test::load_corpus("pizza.tm");

  const auto rejected = simulate(doc, {order_at(0, false)});
  const auto rej = firings(rejected.trace);
  const std::set<std::string> rej_set(rej.begin(), rej.end());
  if (!rej_set.count("E6")) {
    pass = false;
    why << "rejected run never fired E6; ";
  }
  for (int i = 7; i <= 20; ++i)
    if (rej_set.count("E" + std::to_string(i))) {
      pass = false;
      why << "rejected run fired E" << i << "; ";
    }

  const auto accepted = simulate(doc, {order_at(0, true)});
  const auto acc = firings(accepted.trace);
  const std::set<std::string> acc_set(acc.begin(), acc.end());
  if (!acc_set.count("E7")) {
    pass = false;
    why << "accepted run never fired E7; ";
  }
  if (acc_set.count("E6")) {
    pass = false;
    why << "accepted run fired E6; ";
  }
  report(2, "payment branch semantics (E6 xor E7, exact event sets)", pass,
         why.str());
}

// ---- criterion 3: simulation invariants --------------------------------

void criterion_3() {
  const auto start = Clock::now();
  std::ostringstream why;
  bool pass = true;
  const auto base = test::load_corpus("pizza.tm");

  test::Rng rng(97531);
  for (int round = 0; round < 100 && pass; ++round) {
    ModelDocument doc = base;
    const long long capacity = 1 + round % 3;
    doc.params["oven_capacity"] = Value{capacity};

    std::vector<Stimulus> stimuli;
    const int orders = test::pick(rng, 1, 10);
    int accepted = 0;
    for (int i = 0; i < orders; ++i) {
      const bool ok = test::pick(rng, 0, 3) > 0;
      accepted += ok ? 1 : 0;
      stimuli.push_back(order_at(test::pick(rng, 0, 30), ok));
    }

    const auto result = simulate(doc, stimuli);
    if (!result.diagnostics.ok()) {
      pass = false;
      why << "round " << round << ": simulator diagnostics; ";
      break;
    }

    for (const auto& entry : result.trace.entries) {
      const auto it = entry.state.find("oven.count");
      if (it == entry.state.end()) continue;
      if (it->second.counter < 0 || it->second.counter > capacity) {
        pass = false;
        why << "round " << round << ": oven.count=" << it->second.counter
            << " outside [0," << capacity << "]; ";
      }
    }
    if (!check_trace(result.trace, doc).ok()) {
      pass = false;
      why << "round " << round << ": check_trace failed; ";
    }

    std::vector<std::string> pushes, pops;
    int deliveries = 0;
    for (const auto& entry : result.trace.entries) {
      if (entry.event_id == "E8") pushes.push_back(entry.token_ids.front());
      if (entry.event_id == "E11") pops.push_back(entry.token_ids.front());
      if (entry.event_id == "E20") ++deliveries;
    }
    if (pushes != pops) {
      pass = false;
      why << "round " << round << ": E11 order differs from E8; ";
    }
    if (deliveries != accepted) {
      pass = false;
      why << "round " << round << ": " << deliveries << " deliveries for "
          << accepted << " accepted orders; ";
    }

    const auto again = simulate(doc, stimuli);
    if (trace_to_tsv(again.trace) != trace_to_tsv(result.trace)) {
      pass = false;
      why << "round " << round << ": rerun trace differs; ";
    }
  }

  const double elapsed = seconds_since(start);
  if (elapsed >= 30.0) {
    pass = false;
    why << "took " << elapsed << "s (budget 30s)";
  }
  report(3, "simulation invariants over 100 randomized schedules", pass,
         why.str());
}

// ---- criterion 4: followship export ------------------------------------

void criterion_4() {
  std::ostringstream why;
  bool pass = true;
  const auto doc = test::load_corpus("followship.tm");
  const auto skeleton = reduce_dynamic(doc.statics, doc.events);
  if (!skeleton.reducible()) {
    report(4, "followship export", false, "unreducible events");
    return;
  }
  const auto graph = to_property_graph(skeleton);

  PropertyGraph expected;
  expected.nodes.push_back(
      {"I1", {"User"}, {{"name", Value{std::string("Billy")}}}});
  expected.nodes.push_back(
      {"I2", {"User"}, {{"name", Value{std::string("Harry")}}}});
  expected.nodes.push_back(
      {"I3", {"User"}, {{"name", Value{std::string("Ruth")}}}});
  expected.rels.push_back({"E4.1", "FOLLOWS", "I1", "I2", {}});
  expected.rels.push_back({"E4.2", "FOLLOWS", "I2", "I1", {}});
  expected.rels.push_back({"E5", "FOLLOWS", "I3", "I1", {}});
  expected.rels.push_back({"E6.1", "FOLLOWS", "I2", "I3", {}});
  expected.rels.push_back({"E6.2", "FOLLOWS", "I3", "I2", {}});
  expected.canonicalize();

  if (graph.nodes.size() != 3) {
    pass = false;
    why << graph.nodes.size() << " nodes; ";
  }
  if (graph.rels.size() != 5) {
    pass = false;
    why << graph.rels.size() << " rels; ";
  }
  if (pg_to_json(graph) != pg_to_json(expected)) {
    pass = false;
    why << "canonical graphs differ";
  }
  report(4, "followship reduce+export equals the five-arrow graph", pass,
         why.str());
}

// ---- criterion 5: friends query -----------------------------------------

void criterion_5() {
  std::ostringstream why;
  bool pass = true;
  const auto graph = pg_from_json(test::slurp(test::model_path("friends.json")));

  const auto lifted = lift_property_graph(graph);
  if (lifted.instances.size() != 3 || lifted.events.size() != 4) {
    pass = false;
    why << "lift shape off (" << lifted.instances.size() << " instances, "
        << lifted.events.size() << " events); ";
  }
  if (!validate_static(lifted.statics).ok()) {
    pass = false;
    why << "lifted model invalid; ";
  }

  const auto in = query_neighbors(graph, "Bob", "FRIEND", Direction::In);
  if (in != std::set<std::string>{"Alice"}) {
    pass = false;
    why << "incoming was not {Alice}; ";
  }
  const auto out = query_neighbors(graph, "Bob", "FRIEND", Direction::Out);
  if (out != std::set<std::string>{"Alice", "Zach"}) {
    pass = false;
    why << "outgoing was not {Alice, Zach}; ";
  }
  report(5, "friends lift and reciprocal query", pass, why.str());
}

// ---- criterion 6: round trips --------------------------------------------

void criterion_6() {
  const auto start = Clock::now();
  std::ostringstream why;
  bool pass = true;

  // (a) parse/serialize fixpoints.
  for (const char* name : {"pizza.tm", "followship.tm", "orders.tm"}) {
    const auto doc = test::load_corpus(name);
    const auto text = serialize(doc);
    const auto again = parse(text);
    if (!again.ok() || !(*again.document == doc) ||
        serialize(*again.document) != text) {
      pass = false;
      why << name << " is not a parse/serialize fixpoint; ";
    }
  }
  {
    test::Rng rng(86420);
    for (int i = 0; i < 100; ++i) {
      const ModelDocument doc = test::gen_document(rng);
      const auto again = parse(serialize(doc));
      if (!again.ok() || !(*again.document == doc)) {
        pass = false;
        why << "generated document " << i << " broke the fixpoint; ";
        break;
      }
    }
  }

  // (b) normalize and simplify invert each other on canonical full models.
  {
    test::Rng rng(13579);
    for (int i = 0; i < 100; ++i) {
      const StaticModel m = test::gen_simplified_model(rng);
      const StaticModel full = normalize(m);
      if (!(simplify_static(full) == m) ||
          !(normalize(simplify_static(full)) == full)) {
        pass = false;
        why << "static round trip " << i << " failed; ";
        break;
      }
    }
    for (const char* name : {"followship.tm", "orders.tm"}) {
      const auto doc = test::load_corpus(name);
      if (!(normalize(simplify_document(doc)) == doc)) {
        pass = false;
        why << name << " did not invert; ";
      }
    }
    // Pizza carries annotations on elided stages; it reaches the canonical
    // fixpoint after one trip and stays there.
    const auto pizza = test::load_corpus("pizza.tm");
    const auto canonical = normalize(simplify_document(pizza));
    if (!(normalize(simplify_document(canonical)) == canonical)) {
      pass = false;
      why << "pizza fixpoint unstable; ";
    }
  }

  // (c) lift -> reduce -> export is isomorphic to the input.
  {
    test::Rng rng(24680);
    for (int i = 0; i < 100; ++i) {
      const PropertyGraph input = test::gen_property_graph(rng);
      const auto lifted = lift_property_graph(input);
      const auto skeleton =
          reduce_dynamic(lifted.statics, lifted.all_events());
      if (!skeleton.reducible()) {
        pass = false;
        why << "graph " << i << " did not reduce; ";
        break;
      }
      const auto output = to_property_graph(skeleton);
      if (!test::pg_isomorphic(input, output)) {
        pass = false;
        why << "graph " << i << " not isomorphic after the round trip; ";
        break;
      }
    }
  }

  const double elapsed = seconds_since(start);
  if (elapsed >= 60.0) {
    pass = false;
    why << "took " << elapsed << "s (budget 60s)";
  }
  report(6, "round trips (parse/serialize, normalize/simplify, lift/reduce)",
         pass, why.str());
}

// ---- criterion 7: validator totality --------------------------------------

void criterion_7() {
  std::ostringstream why;
  bool pass = true;

  const auto build = [](ActionKind src, ActionKind tgt, bool cross) {
    StaticModel m;
    for (const char* id : {"a", "b"}) {
      Thimac t;
      t.id = id;
      t.name = id;
      for (const auto kind : kAllActionKinds) t.actions.push_back({kind, {}});
      m.thimacs.push_back(std::move(t));
    }
    m.flows.push_back({{"a", src}, {cross ? "b" : "a", tgt}, {}, {}, {}});
    return m;
  };

  int checked = 0;
  for (const auto src : kAllActionKinds)
    for (const auto tgt : kAllActionKinds)
      for (const bool cross : {false, true}) {
        ++checked;
        const auto report_ = validate_static(build(src, tgt, cross));
        const bool legal = flow_is_legal(
            src, tgt, cross ? ArcContext::Cross : ArcContext::Intra);
        const bool flagged = report_.has_code(codes::kIllegalFlow);
        if (legal == flagged) {
          pass = false;
          why << (cross ? "cross " : "intra ") << to_string(src) << "->"
              << to_string(tgt) << " misjudged; ";
        }
      }
  if (checked != 50) {
    pass = false;
    why << "enumerated " << checked << " pairs";
  }

  // The pinned table itself, spelled out.
  const std::vector<std::pair<ActionKind, std::vector<Successor>>> table = {
      {ActionKind::Create,
       {{ActionKind::Process, ArcContext::Intra},
        {ActionKind::Release, ArcContext::Intra}}},
      {ActionKind::Receive,
       {{ActionKind::Process, ArcContext::Intra},
        {ActionKind::Release, ArcContext::Intra}}},
      {ActionKind::Process, {{ActionKind::Release, ArcContext::Intra}}},
      {ActionKind::Release, {{ActionKind::Transfer, ArcContext::Intra}}},
      {ActionKind::Transfer,
       {{ActionKind::Receive, ArcContext::Intra},
        {ActionKind::Transfer, ArcContext::Cross}}},
  };
  for (const auto& [kind, expected] : table)
    if (legal_successors(kind) != expected) {
      pass = false;
      why << "legal_successors(" << to_string(kind) << ") off; ";
    }

  report(7, "validator accepts exactly the legality table over all 25 pairs",
         pass, why.str());
}

// ---- criterion 8: rendering determinism -----------------------------------

void criterion_8() {
  std::ostringstream why;
  bool pass = true;

  const std::vector<std::pair<std::string, RenderView>> cases = {
      {"pizza.tm", RenderView::StaticFull},
      {"pizza.tm", RenderView::StaticSimplified},
      {"pizza.tm", RenderView::Dynamic},
      {"pizza.tm", RenderView::Behavior},
      {"followship.tm", RenderView::StaticFull},
      {"followship.tm", RenderView::StaticSimplified},
      {"followship.tm", RenderView::Dynamic},
      {"followship.tm", RenderView::Behavior},
      {"followship.tm", RenderView::PropertyGraphView},
      {"orders.tm", RenderView::StaticFull},
      {"orders.tm", RenderView::StaticSimplified},
      {"orders.tm", RenderView::Dynamic},
      {"orders.tm", RenderView::Behavior},
      {"orders.tm", RenderView::PropertyGraphView},
  };
  for (const auto& [name, view] : cases) {
    const auto doc = test::load_corpus(name);
    const std::string golden_name =
        name.substr(0, name.size() - 3) + "." + std::string(to_string(view)) +
        ".dot";
    const std::string golden = test::slurp(std::string(TMKIT_GOLDEN_DIR) +
                                           "/" + golden_name);
    const std::string first = render(doc, view);
    const std::string second = render(doc, view);
    if (first != second) {
      pass = false;
      why << golden_name << " differs across runs; ";
    }
    if (golden.empty()) {
      pass = false;
      why << golden_name << " golden missing; ";
    } else if (first != golden) {
      pass = false;
      why << golden_name << " differs from golden; ";
    }
  }
  report(8, "golden DOT renders are byte-identical", pass, why.str());
}

}  // namespace

int main() {
  try {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
  } catch (const std::exception& e) {
    std::cout << "FAIL: unexpected exception: " << e.what() << std::endl;
    return 1;
  }
  if (failures == 0) std::cout << "all acceptance criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
