#include <map>
#include <set>

#include "tmkit/sim.hpp"
#include "tmkit/validate.hpp"

namespace tmkit {

namespace {

std::string lineage_of_id(const std::string& token_id) {
  const auto pos = token_id.find('.');
  return pos == std::string::npos ? token_id : token_id.substr(0, pos);
}

std::optional<long long> eval_static_int(const Operand& op,
                                         const ModelDocument& doc) {
  if (op.kind == OperandKind::IntLit) return op.int_value;
  if (op.kind == OperandKind::Param) {
    const auto it = doc.params.find(op.text);
    if (it != doc.params.end() && std::holds_alternative<long long>(it->second))
      return std::get<long long>(it->second);
  }
  return std::nullopt;
}

// q_next must follow from q by popping a front prefix and appending items
// never queued before; anything else reorders service.
bool fifo_step_ok(const std::vector<std::string>& q,
                  const std::vector<std::string>& q_next,
                  std::set<std::string>& ever_queued) {
  for (std::size_t k = 0; k <= q.size(); ++k) {
    const std::size_t kept = q.size() - k;
    if (kept > q_next.size()) continue;
    bool match = true;
    for (std::size_t i = 0; i < kept; ++i)
      if (q[k + i] != q_next[i]) {
        match = false;
        break;
      }
    if (!match) continue;
    bool fresh = true;
    for (std::size_t i = kept; i < q_next.size(); ++i)
      if (ever_queued.count(q_next[i])) fresh = false;
    if (!fresh) continue;
    for (std::size_t i = kept; i < q_next.size(); ++i)
      ever_queued.insert(q_next[i]);
    return true;
  }
  return false;
}

}  // namespace

ValidationReport check_trace(const Trace& trace, const ModelDocument& doc) {
  ValidationReport report;

  // Counter bounds: non-negative always, within declared max when given.
  std::map<std::string, long long> max_of;
  for (const auto& t : doc.statics.thimacs)
    for (const auto& s : t.slots)
      if (s.kind == SlotKind::Counter && s.max)
        if (const auto v = eval_static_int(*s.max, doc))
          max_of[t.id + "." + s.name] = *v;

  for (std::size_t i = 0; i < trace.entries.size(); ++i) {
    for (const auto& [name, snap] : trace.entries[i].state) {
      if (snap.kind != SlotKind::Counter) continue;
      if (snap.counter < 0)
        report.error(codes::kCounterBounds,
                     "counter '" + name + "' is " +
                         std::to_string(snap.counter) + " at entry " +
                         std::to_string(i),
                     {name});
      const auto it = max_of.find(name);
      if (it != max_of.end() && snap.counter > it->second)
        report.error(codes::kCounterBounds,
                     "counter '" + name + "' is " +
                         std::to_string(snap.counter) + " over max " +
                         std::to_string(it->second) + " at entry " +
                         std::to_string(i),
                     {name});
    }
  }

  // Queues only move by front pops and pushes of fresh items.
  std::map<std::string, std::vector<std::string>> last_queue;
  std::map<std::string, std::set<std::string>> ever_queued;
  for (std::size_t i = 0; i < trace.entries.size(); ++i) {
    for (const auto& [name, snap] : trace.entries[i].state) {
      if (snap.kind != SlotKind::Queue) continue;
      const auto prev = last_queue.find(name);
      if (prev == last_queue.end()) {
        for (const auto& item : snap.queue) ever_queued[name].insert(item);
      } else if (!fifo_step_ok(prev->second, snap.queue, ever_queued[name])) {
        report.error(codes::kFifoOrder,
                     "queue '" + name + "' did not pop in push order at entry " +
                         std::to_string(i),
                     {name});
      }
      last_queue[name] = snap.queue;
    }
  }

  // Guarded alternatives: events whose regions hold guarded triggers off the
  // same source stage are exclusive per token.
  std::map<std::string, std::set<std::string>> alternatives;  // stage -> events
  for (const auto& e : doc.events)
    for (const auto& tr : e.region.trigger_refs()) {
      const TriggerArc* arc = doc.statics.find_trigger(tr.source, tr.target);
      if (arc != nullptr && arc->guard)
        alternatives[tr.source.str()].insert(e.id);
    }
  std::map<std::string, std::set<std::string>> fired_for_token;  // token -> events
  for (const auto& entry : trace.entries)
    for (const auto& id : entry.token_ids)
      fired_for_token[id].insert(entry.event_id);
  for (const auto& [stage, events] : alternatives) {
    if (events.size() < 2) continue;
    for (const auto& [token, fired] : fired_for_token) {
      int hits = 0;
      for (const auto& e : events)
        if (fired.count(e)) ++hits;
      if (hits > 1)
        report.error(codes::kBranchExclusive,
                     "token '" + token + "' fired " + std::to_string(hits) +
                         " alternatives guarded off '" + stage + "'",
                     {token, stage});
    }
  }

  // Sequence edges: a firing's predecessors must have fired for the same
  // lineage earlier in the trace.
  if (doc.behavior) {
    std::map<std::string, std::set<std::string>> fired_lineages;
    std::map<std::string, std::vector<std::string>> preds;
    for (const auto& c : doc.behavior->components)
      for (const auto& e : c.edges)
        if (e.kind == EdgeKind::Sequence) preds[e.to].push_back(e.from);
    for (const auto& entry : trace.entries) {
      if (entry.token_ids.empty()) continue;
      const std::string lineage = lineage_of_id(entry.token_ids.front());
      for (const auto& pred : preds[entry.event_id])
        if (!fired_lineages[pred].count(lineage))
          report.error(codes::kSequenceViolation,
                       "'" + entry.event_id + "' fired for lineage '" +
                           lineage + "' before its predecessor '" + pred + "'",
                       {entry.event_id, pred});
      fired_lineages[entry.event_id].insert(lineage);
    }
  }

  return report;
}

}  // namespace tmkit
