#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "tmkit/dsl.hpp"
#include "tmkit/normalize.hpp"
#include "tmkit/render.hpp"
#include "tmkit/sim.hpp"
#include "tmkit/transform.hpp"
#include "tmkit/validate.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string& pizza_text() {
  static const std::string text =
      slurp(std::string(TMKIT_MODELS_DIR) + "/pizza.tm");
  return text;
}

const tmkit::ModelDocument& pizza_doc() {
  static const tmkit::ModelDocument doc = *tmkit::parse(pizza_text()).document;
  return doc;
}

std::vector<tmkit::Stimulus> orders(int n) {
  std::vector<tmkit::Stimulus> out;
  for (int i = 0; i < n; ++i) {
    tmkit::Stimulus s;
    s.at_tick = i;
    s.type = "customer.order";
    s.attributes["payment_ok"] = tmkit::Value{true};
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

static void BM_ParsePizza(benchmark::State& state) {
  for (auto _ : state) {
    auto result = tmkit::parse(pizza_text());
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_ParsePizza);

static void BM_ValidatePizza(benchmark::State& state) {
  const auto& doc = pizza_doc();
  for (auto _ : state) {
    auto report = tmkit::validate_document(doc);
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_ValidatePizza);

static void BM_SerializePizza(benchmark::State& state) {
  const auto& doc = pizza_doc();
  for (auto _ : state) {
    auto text = tmkit::serialize(doc);
    benchmark::DoNotOptimize(text);
  }
}
BENCHMARK(BM_SerializePizza);

static void BM_SimulatePizza(benchmark::State& state) {
  const auto& doc = pizza_doc();
  const auto stimuli = orders(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto result = tmkit::simulate(doc, stimuli);
    benchmark::DoNotOptimize(result);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SimulatePizza)->Arg(1)->Arg(4)->Arg(16)->Complexity();

static void BM_SimplifyNormalize(benchmark::State& state) {
  const auto& doc = pizza_doc();
  for (auto _ : state) {
    auto round = tmkit::normalize(tmkit::simplify_document(doc));
    benchmark::DoNotOptimize(round);
  }
}
BENCHMARK(BM_SimplifyNormalize);

static void BM_LiftReduceRoundtrip(benchmark::State& state) {
  const auto graph = tmkit::pg_from_json(
      slurp(std::string(TMKIT_MODELS_DIR) + "/friends.json"));
  for (auto _ : state) {
    auto lifted = tmkit::lift_property_graph(graph);
    auto out = tmkit::to_property_graph(
        tmkit::reduce_dynamic(lifted.statics, lifted.all_events()));
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_LiftReduceRoundtrip);

static void BM_RenderStaticFull(benchmark::State& state) {
  const auto& doc = pizza_doc();
  for (auto _ : state) {
    auto dot = tmkit::render(doc, tmkit::RenderView::StaticFull);
    benchmark::DoNotOptimize(dot);
  }
}
BENCHMARK(BM_RenderStaticFull);

BENCHMARK_MAIN();
