#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "doctest.h"
#include "test_util.hpp"
#include "tmkit/sim.hpp"
#include "tmkit/transform.hpp"

using namespace tmkit;
using tmkit::test::load_corpus;
using tmkit::test::model_path;
using tmkit::test::slurp;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

RunResult run(const std::string& args) {
  const std::string out_path = "/tmp/tmkit_cli_out.txt";
  const std::string cmd = std::string("TM_COLOR=0 ") + TMKIT_TM_BIN + " " +
                          args + " > " + out_path + " 2>/tmp/tmkit_cli_err.txt";
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(status);
  result.output = slurp(out_path);
  return result;
}

std::string cli_err() { return slurp("/tmp/tmkit_cli_err.txt"); }

}  // namespace

TEST_CASE("validate returns 0 on clean corpora and prints a summary") {
  for (const char* name : {"pizza.tm", "followship.tm", "orders.tm"}) {
    CAPTURE(name);
    const auto r = run("validate " + model_path(name));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("ok:") == 0);
  }
}

TEST_CASE("an empty static section validates with one warning") {
  const std::string empty = "/tmp/tmkit_empty.tm";
  std::ofstream(empty) << "static { }\n";
  const auto r = run("validate " + empty);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("ok: 0 errors, 1 warnings") == 0);
  CHECK(cli_err().find("EMPTY_MODEL") != std::string::npos);
}

TEST_CASE("validate returns 1 on models with errors") {
  const std::string bad = "/tmp/tmkit_bad.tm";
  std::ofstream(bad) << "static { thimac oven { receive transfer }\n"
                        "flow oven.receive -> oven.transfer }\n";
  const auto r = run("validate " + bad);
  CHECK(r.exit_code == 1);
  CHECK(cli_err().find("ILLEGAL_FLOW") != std::string::npos);
  CHECK(cli_err().find("\033") == std::string::npos);  // TM_COLOR=0
}

TEST_CASE("missing files exit with the usage code") {
  const auto r = run("validate /tmp/does_not_exist.tm");
  CHECK(r.exit_code == 2);
}

TEST_CASE("unknown flags exit with the usage code") {
  const auto r = run("validate --bogus");
  CHECK(r.exit_code == 2);
}

TEST_CASE("query prints sorted names, one per line") {
  const auto in = run("query " + model_path("friends.json") +
                      " --node Bob --rel FRIEND --dir in");
  CHECK(in.exit_code == 0);
  CHECK(in.output == "Alice\n");
  const auto out = run("query " + model_path("friends.json") +
                       " --node Bob --rel FRIEND --dir out");
  CHECK(out.exit_code == 0);
  CHECK(out.output == "Alice\nZach\n");
  const auto missing = run("query " + model_path("friends.json") +
                           " --node Nobody --rel FRIEND --dir both");
  CHECK(missing.exit_code == 1);
}

TEST_CASE("simulate honors parameter overrides and counts deliveries") {
  const auto r = run("simulate " + model_path("pizza.tm") + " --stimuli " +
                     model_path("stimuli/three_orders.json") +
                     " --param oven_capacity=1");
  CHECK(r.exit_code == 0);
  std::size_t deliveries = 0, pos = 0;
  while ((pos = r.output.find("\tE20\t", pos)) != std::string::npos) {
    ++deliveries;
    pos += 1;
  }
  CHECK(deliveries == 3);
}

TEST_CASE("simulate emits the same trace as the library") {
  const auto doc = load_corpus("pizza.tm");
  const auto stimuli =
      stimuli_from_json(slurp(model_path("stimuli/one_order_ok.json")));
  const auto expected = trace_to_tsv(simulate(doc, stimuli).trace);
  const auto r = run("simulate " + model_path("pizza.tm") + " --stimuli " +
                     model_path("stimuli/one_order_ok.json"));
  CHECK(r.output == expected);

  const auto expected_json = trace_to_json(simulate(doc, stimuli).trace);
  const auto rj = run("simulate " + model_path("pizza.tm") + " --stimuli " +
                      model_path("stimuli/one_order_ok.json") +
                      " --format json");
  CHECK(rj.output == expected_json);
}

TEST_CASE("simplify and normalize emit exactly the library's canonical text") {
  const auto doc = load_corpus("followship.tm");
  const auto simplified = run("simplify " + model_path("followship.tm"));
  CHECK(simplified.exit_code == 0);
  CHECK(simplified.output == serialize(simplify_document(doc)));

  const auto normalized = run("normalize " + model_path("followship.tm"));
  CHECK(normalized.exit_code == 0);
  CHECK(normalized.output == serialize(normalize(doc)));
}

TEST_CASE("export-pg and lift round trip through files") {
  const std::string graph_path = "/tmp/tmkit_graph.json";
  const std::string model_out = "/tmp/tmkit_lifted.tm";
  const auto exported =
      run("export-pg " + model_path("followship.tm") + " -o " + graph_path);
  REQUIRE(exported.exit_code == 0);

  const auto doc = load_corpus("followship.tm");
  const auto direct =
      pg_to_json(to_property_graph(reduce_dynamic(doc.statics, doc.events)));
  CHECK(slurp(graph_path) == direct);

  const auto lifted = run("lift " + graph_path + " -o " + model_out);
  REQUIRE(lifted.exit_code == 0);
  const auto lifted_doc = parse(slurp(model_out));
  REQUIRE(lifted_doc.ok());
  const auto again = to_property_graph(reduce_dynamic(
      lifted_doc.document->statics, lifted_doc.document->events));
  CHECK(pg_to_json(again) == direct);
}

TEST_CASE("reduce prints the skeleton graph") {
  const auto r = run("reduce " + model_path("followship.tm"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"FOLLOWS\"") != std::string::npos);
}

TEST_CASE("render emits DOT on stdout") {
  const auto r =
      run("render " + model_path("pizza.tm") + " --view static-full");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("digraph tm {") == 0);
}

TEST_CASE("subcommands never mutate their inputs") {
  const std::string before = slurp(model_path("pizza.tm"));
  run("validate " + model_path("pizza.tm"));
  run("simplify " + model_path("pizza.tm"));
  run("render " + model_path("pizza.tm") + " --view dynamic");
  CHECK(slurp(model_path("pizza.tm")) == before);

  const std::string graph_before = slurp(model_path("friends.json"));
  run("lift " + model_path("friends.json") + " -o /tmp/tmkit_lift2.tm");
  run("query " + model_path("friends.json") +
      " --node Bob --rel FRIEND --dir both");
  CHECK(slurp(model_path("friends.json")) == graph_before);
}
