#include <set>

#include "doctest.h"
#include "test_util.hpp"
#include "tmkit/validate.hpp"

using namespace tmkit;
using tmkit::test::load_corpus;

namespace {

StaticModel disconnected_pair() {
  StaticModel m;
  for (const char* id : {"left", "right"}) {
    Thimac t;
    t.id = id;
    t.name = id;
    t.actions.push_back({ActionKind::Create, {}});
    t.actions.push_back({ActionKind::Process, {}});
    m.thimacs.push_back(std::move(t));
  }
  m.canonicalize();
  return m;
}

}  // namespace

TEST_CASE("make_event accepts the delivery handoff region") {
  const auto doc = load_corpus("pizza.tm");
  const auto event = make_event(
      doc.statics, "handoff",
      {FlowElement{{"delivery.pizza", ActionKind::Receive},
                   {"delivery.pizza", ActionKind::Process}},
       FlowElement{{"delivery.pizza", ActionKind::Process},
                   {"delivery.pizza", ActionKind::Release}},
       ThimacElement{"delivery"}},
      Classification::Event);
  CHECK(classify(event.region) == Classification::Event);
}

TEST_CASE("make_event accepts a create-only instance region") {
  const auto doc = load_corpus("followship.tm");
  const auto inst = make_event(doc.statics, "I9",
                               {StageElement{{"use.user1", ActionKind::Create}}},
                               Classification::Instance);
  CHECK(classify(inst.region) == Classification::Instance);
}

TEST_CASE("make_event rejects broken regions") {
  const StaticModel pair = disconnected_pair();
  SUBCASE("empty region") {
    CHECK_THROWS_WITH_AS(
        make_event(pair, "x", {}, Classification::Event),
        doctest::Contains("E_EMPTY_REGION"), TmError);
  }
  SUBCASE("two arc-disconnected thimacs") {
    CHECK_THROWS_WITH_AS(
        make_event(pair, "x",
                   {StageElement{{"left", ActionKind::Create}},
                    StageElement{{"right", ActionKind::Create}}},
                   Classification::Event),
        doctest::Contains("E_DISCONNECTED_REGION"), TmError);
  }
  SUBCASE("dangling reference") {
    CHECK_THROWS_WITH_AS(
        make_event(pair, "x", {ThimacElement{"ghost"}},
                   Classification::Event),
        doctest::Contains("E_DANGLING_REF"), TmError);
    CHECK_THROWS_WITH_AS(
        make_event(pair, "x",
                   {StageElement{{"left", ActionKind::Release}}},
                   Classification::Event),
        doctest::Contains("E_DANGLING_REF"), TmError);
  }
  SUBCASE("instance without a create stage") {
    CHECK_THROWS_WITH_AS(
        make_event(pair, "x",
                   {StageElement{{"left", ActionKind::Process}}},
                   Classification::Instance),
        doctest::Contains("E_INSTANCE_WITHOUT_CREATE"), TmError);
  }
}

TEST_CASE("classify depends only on the stage multiset") {
  Region one_create{{StageElement{{"user", ActionKind::Create}}}};
  one_create.canonicalize();
  CHECK(classify(one_create) == Classification::Instance);

  Region with_process{{StageElement{{"object", ActionKind::Process}},
                       StageElement{{"straight", ActionKind::Create}},
                       StageElement{{"bent", ActionKind::Create}}}};
  with_process.canonicalize();
  CHECK(classify(with_process) == Classification::Event);

  Region two_creates{{StageElement{{"a", ActionKind::Create}},
                      StageElement{{"b", ActionKind::Create}}}};
  two_creates.canonicalize();
  CHECK(classify(two_creates) == Classification::Event);
}

TEST_CASE("pizza behavior validates with its two components") {
  const auto doc = load_corpus("pizza.tm");
  const auto report = validate_behavior(*doc.behavior, doc.events);
  CHECK(report.ok());
}

TEST_CASE("single-node behavior without edges is fine") {
  const auto doc = load_corpus("pizza.tm");
  BehaviorModel b;
  b.components.push_back({"solo", {"E1"}, {}});
  CHECK(validate_behavior(b, doc.events).ok());
}

TEST_CASE("sequence cycles must be declared as repeat edges") {
  const auto doc = load_corpus("pizza.tm");
  BehaviorModel b;
  BehaviorComponent c;
  c.name = "loop";
  c.nodes = {"E9", "E11"};
  c.edges = {{"E9", "E11", EdgeKind::Sequence},
             {"E11", "E9", EdgeKind::Sequence}};
  b.components.push_back(c);
  const auto bad = validate_behavior(b, doc.events);
  CHECK(bad.has_code(codes::kSequenceCycle));

  // The same cycle closed by a repeat edge is legal.
  b.components[0].edges[1].kind = EdgeKind::Repeat;
  CHECK(validate_behavior(b, doc.events).ok());
}

TEST_CASE("cycle detection agrees with an independent DFS oracle") {
  // Oracle: plain recursive DFS over the Sequence edges.
  const auto has_cycle = [](int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> next(n);
    for (const auto& [a, b] : edges) next[a].push_back(b);
    std::vector<int> state(n, 0);
    bool found = false;
    auto dfs = [&](auto&& self, int v) -> void {
      state[v] = 1;
      for (int w : next[v]) {
        if (state[w] == 1) found = true;
        if (state[w] == 0 && !found) self(self, w);
      }
      state[v] = 2;
    };
    for (int v = 0; v < n; ++v)
      if (state[v] == 0 && !found) dfs(dfs, v);
    return found;
  };

  test::Rng rng(4242);
  for (int round = 0; round < 100; ++round) {
    const int n = test::pick(rng, 2, 7);
    std::vector<EventDef> events;
    BehaviorComponent comp;
    comp.name = "c";
    for (int i = 0; i < n; ++i) {
      EventDef e;
      e.id = "N" + std::to_string(i);
      events.push_back(e);
      comp.nodes.push_back(e.id);
    }
    std::vector<std::pair<int, int>> edges;
    const int m = test::pick(rng, 1, 2 * n);
    for (int i = 0; i < m; ++i) {
      const int a = test::pick(rng, 0, n - 1);
      const int b = test::pick(rng, 0, n - 1);
      edges.push_back({a, b});
      comp.edges.push_back({"N" + std::to_string(a), "N" + std::to_string(b),
                            EdgeKind::Sequence});
    }
    BehaviorModel model;
    model.components.push_back(comp);
    const auto report = validate_behavior(model, events);
    CAPTURE(round);
    CHECK(report.has_code(codes::kSequenceCycle) == has_cycle(n, edges));
  }
}

TEST_CASE("behavior defects are reported") {
  const auto doc = load_corpus("pizza.tm");
  SUBCASE("unknown event") {
    BehaviorModel b;
    b.components.push_back({"c", {"E99"}, {}});
    CHECK(validate_behavior(b, doc.events).has_code(codes::kUnknownEvent));
  }
  SUBCASE("edge crossing components") {
    BehaviorModel b;
    b.components.push_back({"a", {"E1"}, {}});
    b.components.push_back({"b", {"E2"}, {{"E2", "E1", EdgeKind::Sequence}}});
    CHECK(validate_behavior(b, doc.events)
              .has_code(codes::kCrossComponentEdge));
  }
  SUBCASE("event missing from the graph warns") {
    BehaviorModel b;
    b.components.push_back({"c", {"E1"}, {}});
    const auto report = validate_behavior(b, doc.events);
    CHECK(report.ok());
    CHECK(report.has_code(codes::kEventNotInBehavior));
  }
}

TEST_CASE("participants must name declared instances") {
  auto doc = load_corpus("orders.tm");
  for (auto& e : doc.events)
    if (e.id == "P1") e.participants = {{"IA", "GHOST"}};
  const auto report = validate_document(doc);
  CHECK_FALSE(report.ok());
  CHECK(report.has_code(codes::kUnknownEvent));
}

TEST_CASE("undeclared parameters are validation errors") {
  const auto result = parse(
      "static {\n"
      "  thimac a { create }\n"
      "  thimac b { process counter c }\n"
      "  trigger a.create --> b.process when b.c < $missing\n"
      "}\n");
  REQUIRE(result.ok());
  CHECK_FALSE(result.report.ok());
  CHECK(result.report.has_code(codes::kGuardUndeclaredRef));
}

TEST_CASE("corpus event rosters match the narratives") {
  const auto pizza = load_corpus("pizza.tm");
  for (const auto& e : pizza.events)
    CHECK(e.classification == Classification::Event);

  const auto follow = load_corpus("followship.tm");
  std::set<std::string> instances, events;
  for (const auto& e : follow.events)
    (e.classification == Classification::Instance ? instances : events)
        .insert(e.id);
  CHECK(instances == std::set<std::string>{"I1", "I2", "I3"});
  // E4 and E5 are the listed pair; E6 carries the second mutual followship
  // so the exported graph matches the full relationship set.
  CHECK(events == std::set<std::string>{"E4", "E5", "E6"});

  const auto orders = load_corpus("orders.tm");
  int inst = 0;
  for (const auto& e : orders.events)
    if (e.classification == Classification::Instance) ++inst;
  CHECK(inst == 6);
  CHECK(orders.events.size() == 12);
}
