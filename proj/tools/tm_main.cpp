#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tmkit/dsl.hpp"
#include "tmkit/normalize.hpp"
#include "tmkit/render.hpp"
#include "tmkit/sim.hpp"
#include "tmkit/transform.hpp"
#include "tmkit/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

bool use_color() {
  const char* env = std::getenv("TM_COLOR");
  if (env != nullptr && std::string(env) == "0") return false;
  return isatty(fileno(stderr)) != 0;
}

void print_diagnostic(const tmkit::Diagnostic& d) {
  const bool color = use_color();
  const char* tag = d.severity == tmkit::Severity::Error ? "error" : "warning";
  const char* code_color =
      d.severity == tmkit::Severity::Error ? "\033[31m" : "\033[33m";
  if (color)
    std::cerr << code_color << tag << "\033[0m";
  else
    std::cerr << tag;
  std::cerr << " [" << d.code << "] " << d.message << "\n";
}

void print_report(const tmkit::ValidationReport& report) {
  for (const auto& d : report.diagnostics) print_diagnostic(d);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write '" + path + "'");
  out << content;
}

// Loads and validates a .tm file; exits on parse or validation errors.
tmkit::ModelDocument load_document(const std::string& path) {
  const auto result = tmkit::parse(slurp(path));
  if (!result.errors.empty()) {
    for (const auto& e : result.errors) {
      std::cerr << path << ":" << e.line << ":" << e.column << ": "
                << e.message;
      if (!e.expected.empty()) std::cerr << " (expected " << e.expected << ")";
      std::cerr << "\n";
    }
    std::exit(kExitValidation);
  }
  print_report(result.report);
  if (!result.report.ok()) std::exit(kExitValidation);
  return *result.document;
}

void apply_param_overrides(tmkit::ModelDocument& doc,
                           const std::vector<std::string>& params) {
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) {
      std::cerr << "--param expects name=value, got '" << p << "'\n";
      std::exit(kExitUsage);
    }
    const std::string name = p.substr(0, eq);
    const std::string value = p.substr(eq + 1);
    if (value == "true" || value == "false") {
      doc.params[name] = tmkit::Value{value == "true"};
      continue;
    }
    try {
      std::size_t used = 0;
      const long long n = std::stoll(value, &used);
      if (used == value.size()) {
        doc.params[name] = tmkit::Value{n};
        continue;
      }
    } catch (...) {
    }
    doc.params[name] = tmkit::Value{value};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thinging-machine modeling toolkit"};
  app.require_subcommand(1);

  std::string input, stimuli_path, output, format = "tsv", view_name, node,
                                           rel, dir = "both";
  long long max_ticks = 100000;
  std::vector<std::string> param_overrides, containment;

  auto* validate_cmd = app.add_subcommand("validate", "Check a .tm model");
  validate_cmd->add_option("file", input, "model file")->required();

  auto* simulate_cmd = app.add_subcommand("simulate", "Run the behavior model");
  simulate_cmd->add_option("file", input, "model file")->required();
  simulate_cmd->add_option("--stimuli", stimuli_path, "stimuli JSON file")
      ->required();
  simulate_cmd->add_option("--max-ticks", max_ticks, "tick budget");
  simulate_cmd->add_option("--param", param_overrides, "override name=value");
  simulate_cmd->add_option("--format", format, "tsv or json")
      ->check(CLI::IsMember({"tsv", "json"}));

  auto* simplify_cmd =
      app.add_subcommand("simplify", "Elide release/transfer/receive chains");
  simplify_cmd->add_option("file", input, "model file")->required();

  auto* normalize_cmd = app.add_subcommand("normalize", "Expand to full form");
  normalize_cmd->add_option("file", input, "model file")->required();

  auto* reduce_cmd = app.add_subcommand(
      "reduce", "Reduce the dynamic model to a graph skeleton");
  reduce_cmd->add_option("file", input, "model file")->required();

  auto* export_cmd =
      app.add_subcommand("export-pg", "Export the reduced property graph");
  export_cmd->add_option("file", input, "model file")->required();
  export_cmd->add_option("-o,--output", output, "output JSON file");

  auto* lift_cmd =
      app.add_subcommand("lift", "Lift a property graph to a TM model");
  lift_cmd->add_option("graph", input, "graph JSON file")->required();
  lift_cmd->add_option("-o,--output", output, "output .tm file");
  lift_cmd->add_option("--containment", containment,
                       "relationship types lifted as nesting");

  auto* query_cmd = app.add_subcommand("query", "Neighborhood query");
  query_cmd->add_option("graph", input, "graph JSON file")->required();
  query_cmd->add_option("--node", node, "node name")->required();
  query_cmd->add_option("--rel", rel, "relationship type")->required();
  query_cmd->add_option("--dir", dir, "in, out or both")
      ->check(CLI::IsMember({"in", "out", "both"}));

  auto* render_cmd = app.add_subcommand("render", "Emit DOT for a view");
  render_cmd->add_option("file", input, "model file")->required();
  render_cmd
      ->add_option("--view", view_name,
                   "static-full, static-simplified, dynamic, behavior or "
                   "property-graph")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) {
      const auto result = tmkit::parse(slurp(input));
      if (!result.errors.empty()) {
        for (const auto& e : result.errors) {
          std::cerr << input << ":" << e.line << ":" << e.column << ": "
                    << e.message;
          if (!e.expected.empty())
            std::cerr << " (expected " << e.expected << ")";
          std::cerr << "\n";
        }
        return kExitValidation;
      }
      print_report(result.report);
      std::cout << (result.report.ok() ? "ok" : "invalid") << ": "
                << result.report.error_count() << " errors, "
                << result.report.warning_count() << " warnings\n";
      return result.report.ok() ? kExitOk : kExitValidation;
    }

    if (simulate_cmd->parsed()) {
      auto doc = load_document(input);
      apply_param_overrides(doc, param_overrides);
      const auto stimuli = tmkit::stimuli_from_json(slurp(stimuli_path));
      const auto result = tmkit::simulate(doc, stimuli, {max_ticks});
      print_report(result.diagnostics);
      std::cout << (format == "json" ? tmkit::trace_to_json(result.trace)
                                     : tmkit::trace_to_tsv(result.trace));
      return result.diagnostics.ok() ? kExitOk : kExitValidation;
    }

    if (simplify_cmd->parsed()) {
      const auto doc = load_document(input);
      std::cout << tmkit::serialize(tmkit::simplify_document(doc));
      return kExitOk;
    }

    if (normalize_cmd->parsed()) {
      const auto doc = load_document(input);
      std::cout << tmkit::serialize(tmkit::normalize(doc));
      return kExitOk;
    }

    if (reduce_cmd->parsed()) {
      const auto doc = load_document(input);
      const auto skeleton = tmkit::reduce_dynamic(doc.statics, doc.events);
      for (const auto& d : skeleton.diagnostics) print_diagnostic(d);
      std::cout << tmkit::pg_to_json(skeleton.graph);
      return skeleton.reducible() ? kExitOk : kExitValidation;
    }

    if (export_cmd->parsed()) {
      const auto doc = load_document(input);
      const auto skeleton = tmkit::reduce_dynamic(doc.statics, doc.events);
      for (const auto& d : skeleton.diagnostics) print_diagnostic(d);
      const auto graph = tmkit::to_property_graph(skeleton);
      if (output.empty())
        std::cout << tmkit::pg_to_json(graph);
      else
        spill(output, tmkit::pg_to_json(graph));
      return kExitOk;
    }

    if (lift_cmd->parsed()) {
      const auto graph = tmkit::pg_from_json(slurp(input));
      tmkit::LiftOptions options;
      for (const auto& t : containment) options.containment_types.insert(t);
      const auto report = tmkit::lift_property_graph(graph, options);
      for (const auto& d : report.mixing) print_diagnostic(d);
      const std::string text = tmkit::serialize(report.to_document());
      if (output.empty())
        std::cout << text;
      else
        spill(output, text);
      return kExitOk;
    }

    if (query_cmd->parsed()) {
      const auto graph = tmkit::pg_from_json(slurp(input));
      const tmkit::Direction direction = dir == "in"    ? tmkit::Direction::In
                                         : dir == "out" ? tmkit::Direction::Out
                                                        : tmkit::Direction::Both;
      for (const auto& name :
           tmkit::query_neighbors(graph, node, rel, direction))
        std::cout << name << "\n";
      return kExitOk;
    }

    if (render_cmd->parsed()) {
      const auto view = tmkit::render_view_from(view_name);
      if (!view) {
        std::cerr << "unknown view '" << view_name << "'\n";
        return kExitUsage;
      }
      const auto doc = load_document(input);
      std::cout << tmkit::render(doc, *view);
      return kExitOk;
    }
  } catch (const tmkit::TmError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const std::ios_base::failure& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
