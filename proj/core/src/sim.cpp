#include "tmkit/sim.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"
#include "tmkit/normalize.hpp"
#include "tmkit/validate.hpp"

namespace tmkit {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string lineage_of_id(const std::string& token_id) {
  const auto pos = token_id.find('.');
  return pos == std::string::npos ? token_id : token_id.substr(0, pos);
}

struct SlotState {
  SlotKind kind = SlotKind::Counter;
  long long counter = 0;
  bool flag = false;
  std::deque<std::string> queue;
};

struct EventSpec {
  const EventDef* def = nullptr;
  std::vector<const FlowArc*> flows;        // region flows, canonical order
  std::vector<const TriggerArc*> triggers;  // region triggers, canonical order
  std::vector<ActionRef> entries;           // stages that must hold tokens
  std::vector<std::string> predecessors;    // Sequence predecessors
};

struct ComponentSpec {
  std::string name;
  std::vector<std::string> event_ids;  // canonical order = firing priority
};

class Simulation {
 public:
  Simulation(const ModelDocument& doc, const std::vector<Stimulus>& stimuli,
             const SimLimits& limits)
      : doc_(doc), stimuli_(stimuli), limits_(limits) {}

  SimResult run() {
    build();
    long long tick = 0;

    while (tick < limits_.max_ticks) {
      inject(tick);
      bool fired = false;
      for (const auto& comp : components_) {
        for (const auto& event_id : comp.event_ids) {
          const EventSpec& spec = specs_.at(event_id);
          const std::string lineage = first_enabled_lineage(spec);
          if (lineage.empty()) continue;
          fire(spec, lineage, tick);
          fired = true;
          break;  // one firing per component per tick
        }
      }
      // Quiescence: nothing fired and no stimulus can change that later.
      if (!fired && !pending_stimuli_) return finish(/*work_left=*/false);
      ++tick;
    }
    // Tick budget exhausted; report when enabled work or stimuli remain.
    bool work_left = pending_stimuli_;
    for (const auto& comp : components_)
      for (const auto& event_id : comp.event_ids)
        if (!first_enabled_lineage(specs_.at(event_id)).empty())
          work_left = true;
    return finish(work_left);
  }

 private:
  const ModelDocument& doc_;
  const std::vector<Stimulus>& stimuli_;
  SimLimits limits_;

  SimResult result_;
  std::vector<ComponentSpec> components_;
  std::map<std::string, EventSpec> specs_;
  std::deque<Token> tokens_;  // creation order; deque keeps pointers stable
  std::map<std::string, SlotState> slots_;
  std::map<std::string, int> lineage_children_;
  std::map<std::string, std::set<std::string>> fired_;  // event -> lineages
  std::set<std::string> reported_;  // diagnostic dedupe
  bool pending_stimuli_ = false;
  long long root_seq_ = 0;

  void diagnose(Severity severity, const char* code, const std::string& msg) {
    if (!reported_.insert(std::string(code) + "|" + msg).second) return;
    result_.diagnostics.diagnostics.push_back({severity, code, msg, {}});
  }

  void build() {
    for (const auto& t : doc_.statics.thimacs)
      for (const auto& s : t.slots) {
        SlotState st;
        st.kind = s.kind;
        st.counter = s.initial;
        st.flag = s.initial_flag;
        slots_[t.id + "." + s.name] = std::move(st);
      }

    if (!doc_.behavior) return;
    for (const auto& comp : doc_.behavior->components) {
      ComponentSpec cs;
      cs.name = comp.name;
      for (const auto& id : comp.nodes) {  // canonicalized natural order
        const EventDef* def = doc_.find_event(id);
        if (def == nullptr) continue;
        cs.event_ids.push_back(id);
        EventSpec spec;
        spec.def = def;
        for (const auto& fe : def->region.flow_refs())
          if (const FlowArc* arc = doc_.statics.find_flow(fe.source, fe.target))
            spec.flows.push_back(arc);
        for (const auto& te : def->region.trigger_refs())
          if (const TriggerArc* arc =
                  doc_.statics.find_trigger(te.source, te.target))
            spec.triggers.push_back(arc);
        // Entry stages: arc sources that are not arc targets; when the
        // region has no arcs at all, its stages stand alone.
        std::set<std::string> sources, targets;
        for (const auto* f : spec.flows) {
          sources.insert(f->source.str());
          targets.insert(f->target.str());
        }
        for (const auto* t : spec.triggers) {
          sources.insert(t->source.str());
          targets.insert(t->target.str());
        }
        for (const auto& s : def->region.stages()) {
          const std::string key = s.str();
          if (targets.count(key)) continue;
          if (sources.count(key)) spec.entries.push_back(s);
        }
        if (spec.entries.empty())
          for (const auto& s : def->region.stages())
            if (!targets.count(s.str())) spec.entries.push_back(s);
        for (const auto& e : comp.edges)
          if (e.kind == EdgeKind::Sequence && e.to == id)
            spec.predecessors.push_back(e.from);
        specs_.emplace(id, std::move(spec));
      }
      components_.push_back(std::move(cs));
    }
  }

  void inject(long long tick) {
    pending_stimuli_ = false;
    for (std::size_t i = 0; i < stimuli_.size(); ++i) {
      const Stimulus& s = stimuli_[i];
      if (s.at_tick > tick) pending_stimuli_ = true;
      if (s.at_tick != tick) continue;
      const Thimac* t = doc_.statics.find_thimac(s.type);
      if (t == nullptr || !t->has_action(ActionKind::Create)) {
        diagnose(Severity::Error, codes::kBadStimulus,
                 "stimulus type '" + s.type + "' has no create stage");
        continue;
      }
      Token token;
      token.id = "t" + std::to_string(++root_seq_);
      token.type = s.type;
      token.attributes = s.attributes;
      token.location = {s.type, ActionKind::Create};
      token.lineage = token.id;
      tokens_.push_back(std::move(token));
    }
  }

  std::vector<Token*> tokens_at(const ActionRef& stage, const std::string& lineage) {
    std::vector<Token*> out;
    for (auto& t : tokens_)
      if (t.lineage == lineage && t.location == stage) out.push_back(&t);
    return out;
  }

  // Lineages in root-creation order.
  std::vector<std::string> lineages() const {
    std::vector<std::string> out;
    for (const auto& t : tokens_)
      if (t.id == t.lineage) out.push_back(t.id);
    return out;
  }

  Token* lineage_context_token(const std::string& lineage,
                               const ActionRef* preferred_stage) {
    if (preferred_stage != nullptr) {
      auto at = tokens_at(*preferred_stage, lineage);
      if (!at.empty()) return at.front();
    }
    for (auto& t : tokens_)
      if (t.lineage == lineage) return &t;
    return nullptr;
  }

  // ---- guard and effect evaluation -----------------------------------

  std::optional<Value> eval_operand(const Operand& op, const Token* token) {
    switch (op.kind) {
      case OperandKind::IntLit: return Value{op.int_value};
      case OperandKind::BoolLit: return Value{op.bool_value};
      case OperandKind::StrLit: return Value{op.text};
      case OperandKind::Param: {
        const auto it = doc_.params.find(op.text);
        if (it == doc_.params.end()) {
          diagnose(Severity::Error, codes::kGuardEval,
                   "undefined parameter '$" + op.text + "'");
          return std::nullopt;
        }
        return it->second;
      }
      case OperandKind::Attr: {
        if (token == nullptr) {
          diagnose(Severity::Error, codes::kGuardEval,
                   "no token in scope for attribute '" + op.text + "'");
          return std::nullopt;
        }
        const auto it = token->attributes.find(op.text);
        if (it == token->attributes.end()) {
          diagnose(Severity::Error, codes::kGuardEval,
                   "token '" + token->id + "' has no attribute '" + op.text +
                       "'");
          return std::nullopt;
        }
        return it->second;
      }
      case OperandKind::Slot: {
        const auto it = slots_.find(op.text);
        if (it == slots_.end()) {
          diagnose(Severity::Error, codes::kGuardEval,
                   "undefined slot '" + op.text + "'");
          return std::nullopt;
        }
        if (it->second.kind == SlotKind::Counter) return Value{it->second.counter};
        if (it->second.kind == SlotKind::Flag) return Value{it->second.flag};
        diagnose(Severity::Error, codes::kGuardEval,
                 "queue slot '" + op.text + "' used as a value; use size()");
        return std::nullopt;
      }
      case OperandKind::QueueSize: {
        const auto it = slots_.find(op.text);
        if (it == slots_.end() || it->second.kind != SlotKind::Queue) {
          diagnose(Severity::Error, codes::kGuardEval,
                   "size() needs a queue slot, got '" + op.text + "'");
          return std::nullopt;
        }
        return Value{static_cast<long long>(it->second.queue.size())};
      }
    }
    return std::nullopt;
  }

  bool eval_guard(const Guard& g, const Token* token) {
    switch (g.kind) {
      case Guard::Kind::And:
        for (const auto& c : g.children)
          if (!eval_guard(c, token)) return false;
        return true;
      case Guard::Kind::Or:
        for (const auto& c : g.children)
          if (eval_guard(c, token)) return true;
        return false;
      case Guard::Kind::Not:
        return !eval_guard(g.children.front(), token);
      case Guard::Kind::Atom: {
        const auto v = eval_operand(g.lhs, token);
        if (!v || !std::holds_alternative<bool>(*v)) {
          if (v)
            diagnose(Severity::Error, codes::kGuardEval,
                     "guard atom '" + to_string(g.lhs) + "' is not boolean");
          return false;
        }
        return std::get<bool>(*v);
      }
      case Guard::Kind::Cmp: {
        const auto a = eval_operand(g.lhs, token);
        const auto b = eval_operand(g.rhs, token);
        if (!a || !b) return false;
        if (a->index() != b->index()) {
          diagnose(Severity::Error, codes::kGuardEval,
                   "type mismatch comparing '" + to_string(g.lhs) + "' and '" +
                       to_string(g.rhs) + "'");
          return false;
        }
        const int cmp =
            *a == *b ? 0
                     : (std::holds_alternative<long long>(*a)
                            ? (std::get<long long>(*a) < std::get<long long>(*b)
                                   ? -1
                                   : 1)
                            : (std::holds_alternative<std::string>(*a)
                                   ? (std::get<std::string>(*a) <
                                              std::get<std::string>(*b)
                                          ? -1
                                          : 1)
                                   : 1));
        switch (g.op) {
          case CmpOp::Eq: return cmp == 0;
          case CmpOp::Ne: return cmp != 0;
          case CmpOp::Lt:
          case CmpOp::Le:
            if (!std::holds_alternative<long long>(*a)) {
              diagnose(Severity::Error, codes::kGuardEval,
                       "ordering comparison needs integers");
              return false;
            }
            return g.op == CmpOp::Lt ? cmp < 0 : cmp <= 0;
        }
        return false;
      }
    }
    return false;
  }

  void apply_effects(const std::vector<Effect>& effects, Token* walking) {
    for (const auto& e : effects) {
      auto it = slots_.find(e.slot);
      if (it == slots_.end()) continue;  // validated earlier
      SlotState& slot = it->second;
      switch (e.op) {
        case EffectOp::Add:
        case EffectOp::Sub: {
          const auto v = eval_operand(e.value, walking);
          if (!v || !std::holds_alternative<long long>(*v)) break;
          const long long delta = std::get<long long>(*v);
          slot.counter += e.op == EffectOp::Add ? delta : -delta;
          if (slot.counter < 0)
            diagnose(Severity::Error, codes::kCapacityUnderflow,
                     "counter '" + e.slot + "' fell below zero");
          break;
        }
        case EffectOp::Assign: {
          const auto v = eval_operand(e.value, walking);
          if (!v) break;
          if (slot.kind == SlotKind::Counter &&
              std::holds_alternative<long long>(*v))
            slot.counter = std::get<long long>(*v);
          else if (slot.kind == SlotKind::Flag &&
                   std::holds_alternative<bool>(*v))
            slot.flag = std::get<bool>(*v);
          break;
        }
        case EffectOp::Push:
          if (walking != nullptr) slot.queue.push_back(walking->id);
          break;
        case EffectOp::Pop:
          if (slot.queue.empty())
            diagnose(Severity::Error, codes::kCapacityUnderflow,
                     "pop on empty queue '" + e.slot + "'");
          else
            slot.queue.pop_front();
          break;
      }
    }
  }

  // ---- enablement and firing ------------------------------------------

  bool enabled_for(const EventSpec& spec, const std::string& lineage) {
    if (fired_[spec.def->id].count(lineage)) return false;
    for (const auto& pred : spec.predecessors)
      if (!fired_[pred].count(lineage)) return false;
    if (spec.entries.empty()) return false;
    for (const auto& entry : spec.entries)
      if (tokens_at(entry, lineage).empty()) return false;
    for (const auto* trig : spec.triggers) {
      if (!trig->guard) continue;
      Token* context = lineage_context_token(lineage, &trig->source);
      if (!eval_guard(*trig->guard, context)) return false;
    }
    return true;
  }

  std::string first_enabled_lineage(const EventSpec& spec) {
    if (spec.def == nullptr) return {};
    for (const auto& lineage : lineages())
      if (enabled_for(spec, lineage)) return lineage;
    return {};
  }

  void walk(const EventSpec& spec, Token* token) {
    std::set<std::string> visited;
    while (visited.insert(token->location.str()).second) {
      const FlowArc* next = nullptr;
      for (const auto* f : spec.flows)
        if (f->source == token->location) {
          next = f;
          break;
        }
      if (next == nullptr) break;
      apply_effects(next->effects, token);
      token->location = next->target;
    }
  }

  void fire(const EventSpec& spec, const std::string& lineage, long long tick) {
    std::vector<std::string> participating;

    for (const auto& entry : spec.entries)
      for (Token* t : tokens_at(entry, lineage)) {
        participating.push_back(t->id);
        walk(spec, t);
      }

    for (const auto* trig : spec.triggers) {
      Token* source_token = nullptr;
      auto at = tokens_at(trig->source, lineage);
      if (!at.empty()) source_token = at.front();
      if (source_token == nullptr)
        source_token = lineage_context_token(lineage, nullptr);

      if (trig->target.kind == ActionKind::Create) {
        Token child;
        const int n = ++lineage_children_[lineage];
        child.id = lineage + "." + std::to_string(n);
        child.type = trig->target.thimac;
        child.attributes = source_token != nullptr ? source_token->attributes
                                                   : std::map<std::string, Value>{};
        child.location = trig->target;
        child.lineage = lineage;
        tokens_.push_back(std::move(child));
        Token* created = &tokens_.back();
        participating.push_back(created->id);
        apply_effects(trig->effects, created);
        walk(spec, created);
      } else {
        apply_effects(trig->effects, source_token);
      }
    }

    std::stable_sort(participating.begin(), participating.end(), NaturalLess{});
    participating.erase(
        std::unique(participating.begin(), participating.end()),
        participating.end());

    TraceEntry entry;
    entry.tick = tick;
    entry.event_id = spec.def->id;
    entry.token_ids = std::move(participating);
    for (const auto& [name, slot] : slots_) {
      SlotSnapshot snap;
      snap.kind = slot.kind;
      snap.counter = slot.counter;
      snap.flag = slot.flag;
      snap.queue.assign(slot.queue.begin(), slot.queue.end());
      entry.state[name] = std::move(snap);
    }
    result_.trace.entries.push_back(std::move(entry));
    fired_[spec.def->id].insert(lineage);
  }

  SimResult finish(bool work_left) {
    if (work_left)
      diagnose(Severity::Error, codes::kTickLimit,
               "tick limit " + std::to_string(limits_.max_ticks) +
                   " reached with pending work");
    return std::move(result_);
  }
};

}  // namespace

SimResult simulate(const ModelDocument& doc, const std::vector<Stimulus>& stimuli,
                   const SimLimits& limits) {
  const ValidationReport report = validate_document(doc);
  if (!report.ok()) {
    std::string first;
    for (const auto& d : report.diagnostics)
      if (d.severity == Severity::Error) {
        first = d.message;
        break;
      }
    throw TmError("E_NOT_VALID", "document does not validate: " + first);
  }
  if (doc.statics.form == ModelForm::Simplified) {
    const ModelDocument full = normalize(doc);
    Simulation sim(full, stimuli, limits);
    return sim.run();
  }
  Simulation sim(doc, stimuli, limits);
  return sim.run();
}

std::string trace_to_tsv(const Trace& trace) {
  std::string out;
  for (const auto& e : trace.entries) {
    out += std::to_string(e.tick);
    out += '\t';
    out += e.event_id;
    out += '\t';
    for (std::size_t i = 0; i < e.token_ids.size(); ++i) {
      if (i) out += ',';
      out += e.token_ids[i];
    }
    out += '\t';
    bool first = true;
    for (const auto& [name, snap] : e.state) {
      if (!first) out += ' ';
      first = false;
      out += name + "=";
      if (snap.kind == SlotKind::Counter) {
        out += std::to_string(snap.counter);
      } else if (snap.kind == SlotKind::Flag) {
        out += snap.flag ? "true" : "false";
      } else {
        out += '[';
        for (std::size_t i = 0; i < snap.queue.size(); ++i) {
          if (i) out += ',';
          out += snap.queue[i];
        }
        out += ']';
      }
    }
    out += '\n';
  }
  return out;
}

std::string trace_to_json(const Trace& trace) {
  ordered_json entries = ordered_json::array();
  for (const auto& e : trace.entries) {
    ordered_json je;
    je["tick"] = e.tick;
    je["event_id"] = e.event_id;
    je["token_ids"] = e.token_ids;
    je["state_snapshot"] = ordered_json::object();
    for (const auto& [name, snap] : e.state) {
      if (snap.kind == SlotKind::Counter)
        je["state_snapshot"][name] = snap.counter;
      else if (snap.kind == SlotKind::Flag)
        je["state_snapshot"][name] = snap.flag;
      else
        je["state_snapshot"][name] = snap.queue;
    }
    entries.push_back(std::move(je));
  }
  ordered_json out;
  out["entries"] = std::move(entries);
  return out.dump(2) + "\n";
}

std::vector<Stimulus> stimuli_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw TmError(codes::kBadStimulus, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_array())
    throw TmError(codes::kBadStimulus, "expected an array of stimuli");
  std::vector<Stimulus> out;
  for (const auto& js : j) {
    Stimulus s;
    if (!js.is_object() || !js.contains("type"))
      throw TmError(codes::kBadStimulus, "each stimulus needs a type");
    s.at_tick = js.value("at_tick", 0LL);
    if (s.at_tick < 0)
      throw TmError(codes::kBadStimulus, "at_tick must be non-negative");
    s.type = js["type"].get<std::string>();
    if (js.contains("attributes")) {
      for (const auto& [k, v] : js["attributes"].items()) {
        if (v.is_number_integer())
          s.attributes[k] = Value{v.get<long long>()};
        else if (v.is_boolean())
          s.attributes[k] = Value{v.get<bool>()};
        else if (v.is_string())
          s.attributes[k] = Value{v.get<std::string>()};
        else
          throw TmError(codes::kBadStimulus,
                        "attribute '" + k + "' must be int, bool or string");
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace tmkit
