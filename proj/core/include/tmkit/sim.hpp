#pragma once

#include <deque>
#include <map>
#include <string>
#include <vector>

#include "tmkit/diagnostics.hpp"
#include "tmkit/document.hpp"

namespace tmkit {

/// A thing moving through stages. `type` is the thimac whose Create made
/// it; `lineage` is the root token id of its trigger-transformation tree.
struct Token {
  std::string id;
  std::string type;
  std::map<std::string, Value> attributes;
  ActionRef location;
  std::string lineage;
  bool operator==(const Token&) const = default;
};

/// External injection: a token spec placed at a Create stage at a tick.
struct Stimulus {
  long long at_tick = 0;
  std::string type;  // thimac id; its Create stage receives the token
  std::map<std::string, Value> attributes;
  bool operator==(const Stimulus&) const = default;
};

struct SlotSnapshot {
  SlotKind kind = SlotKind::Counter;
  long long counter = 0;
  bool flag = false;
  std::vector<std::string> queue;
  bool operator==(const SlotSnapshot&) const = default;
};

struct TraceEntry {
  long long tick = 0;
  std::string event_id;
  std::vector<std::string> token_ids;           // participating tokens
  std::map<std::string, SlotSnapshot> state;    // post-firing, all slots
  bool operator==(const TraceEntry&) const = default;
};

struct Trace {
  std::vector<TraceEntry> entries;
  bool operator==(const Trace&) const = default;
};

struct SimLimits {
  long long max_ticks = 100000;
};

struct SimResult {
  Trace trace;
  ValidationReport diagnostics;  // E_TICK_LIMIT, E_GUARD_EVAL, ...
};

// Simulator diagnostic codes.
namespace codes {
inline constexpr const char* kTickLimit = "E_TICK_LIMIT";
inline constexpr const char* kGuardEval = "E_GUARD_EVAL";
inline constexpr const char* kCapacityUnderflow = "E_CAPACITY_UNDERFLOW";
inline constexpr const char* kBadStimulus = "E_BAD_STIMULUS";
}  // namespace codes

/// Deterministic discrete-event run over integer ticks. Each tick every
/// behavior component fires at most one enabled event; an event is enabled
/// for a token lineage when its Sequence predecessors have fired for that
/// lineage, tokens of the lineage sit at all entry stages of its region,
/// and every region trigger guard holds. Ties break by event order, then
/// lineage seniority. Firing walks tokens along region flow arcs, runs
/// region triggers (Create targets make child tokens), and applies arc
/// effects. Disabled events simply re-check next tick; the run stops at
/// quiescence or max_ticks. Identical inputs give byte-identical traces.
SimResult simulate(const ModelDocument& doc, const std::vector<Stimulus>& stimuli,
                   const SimLimits& limits = {});

/// Built-in trace properties: counters within bounds, FIFO pops in push
/// order, guarded alternatives exclusive per lineage, Sequence edges
/// respected. Diagnostics only.
ValidationReport check_trace(const Trace& trace, const ModelDocument& doc);

/// Line format: tick<TAB>event_id<TAB>token_ids(comma)<TAB>slot=value ...
std::string trace_to_tsv(const Trace& trace);
/// JSON mirroring Trace fields exactly.
std::string trace_to_json(const Trace& trace);

/// Reads a JSON array of {"at_tick": n, "type": id, "attributes": {...}}.
/// Throws TmError E_BAD_STIMULUS on malformed input.
std::vector<Stimulus> stimuli_from_json(const std::string& text);

}  // namespace tmkit
