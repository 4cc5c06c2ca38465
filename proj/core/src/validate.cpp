#include "tmkit/validate.hpp"

#include <map>
#include <set>

namespace tmkit {

namespace {

struct SlotLookup {
  const StaticModel& model;

  // Slot paths are thimac id + "." + slot name; slot names carry no dots.
  const StateSlot* resolve(const std::string& path) const {
    const auto pos = path.rfind('.');
    if (pos == std::string::npos) return nullptr;
    const Thimac* t = model.find_thimac(path.substr(0, pos));
    return t ? t->find_slot(path.substr(pos + 1)) : nullptr;
  }
};

void collect_operands(const Guard& g, std::vector<const Operand*>& out) {
  if (g.kind == Guard::Kind::Cmp) {
    out.push_back(&g.lhs);
    out.push_back(&g.rhs);
  } else if (g.kind == Guard::Kind::Atom) {
    out.push_back(&g.lhs);
  }
  for (const auto& c : g.children) collect_operands(c, out);
}

void check_operand_slots(const Operand& op, const SlotLookup& slots,
                         const std::string& where, ValidationReport& report) {
  if (op.kind != OperandKind::Slot && op.kind != OperandKind::QueueSize) return;
  const StateSlot* slot = slots.resolve(op.text);
  if (slot == nullptr) {
    report.error(codes::kGuardUndeclaredRef,
                 where + " references undeclared slot '" + op.text + "'",
                 {op.text});
    return;
  }
  if (op.kind == OperandKind::QueueSize && slot->kind != SlotKind::Queue) {
    report.error(codes::kGuardUndeclaredRef,
                 where + " applies size() to non-queue slot '" + op.text + "'",
                 {op.text});
  }
}

void check_effects(const std::vector<Effect>& effects, const SlotLookup& slots,
                   const std::string& where, ValidationReport& report) {
  for (const auto& e : effects) {
    const StateSlot* slot = slots.resolve(e.slot);
    if (slot == nullptr) {
      report.error(codes::kGuardUndeclaredRef,
                   where + " effect references undeclared slot '" + e.slot + "'",
                   {e.slot});
      continue;
    }
    const bool ok =
        ((e.op == EffectOp::Add || e.op == EffectOp::Sub) &&
         slot->kind == SlotKind::Counter) ||
        (e.op == EffectOp::Assign && slot->kind != SlotKind::Queue) ||
        ((e.op == EffectOp::Push || e.op == EffectOp::Pop) &&
         slot->kind == SlotKind::Queue);
    if (!ok) {
      report.error(codes::kEffectTypeMismatch,
                   where + " effect '" + to_string(e) + "' does not match " +
                       std::string(to_string(slot->kind)) + " slot '" + e.slot +
                       "'",
                   {e.slot});
    }
    check_operand_slots(e.value, slots, where, report);
  }
}

// Whether a stage reference may stay undeclared in the given form.
bool may_be_elided(ModelForm form, ActionKind kind) {
  if (form == ModelForm::Full) return false;
  return kind != ActionKind::Process;
}

void check_ref(const StaticModel& model, const ActionRef& ref,
               const std::string& where, ValidationReport& report) {
  const Thimac* t = model.find_thimac(ref.thimac);
  if (t == nullptr) {
    report.error(codes::kDanglingRef,
                 where + " references undeclared thimac '" + ref.thimac + "'",
                 {ref.thimac});
    return;
  }
  if (!t->has_action(ref.kind) && !may_be_elided(model.form, ref.kind)) {
    report.error(codes::kDanglingStage,
                 where + " references undeclared stage '" + ref.str() + "'",
                 {ref.str()});
  }
}

}  // namespace

ValidationReport validate_static(const StaticModel& model) {
  ValidationReport report;
  SlotLookup slots{model};

  if (model.thimacs.empty() && model.flows.empty() && model.triggers.empty()) {
    report.warn(codes::kEmptyModel, "model declares no thimacs");
    return report;
  }

  // Thimac-level checks: unique ids, stage/slot duplicates, nesting forest.
  std::set<std::string> ids;
  for (const auto& t : model.thimacs) {
    if (!ids.insert(t.id).second)
      report.error(codes::kDuplicateThimac,
                   "thimac id '" + t.id + "' declared more than once", {t.id});
  }
  for (const auto& t : model.thimacs) {
    std::set<ActionKind> kinds;
    for (const auto& a : t.actions) {
      if (!kinds.insert(a.kind).second)
        report.error(codes::kDuplicateStage,
                     "thimac '" + t.id + "' declares stage '" +
                         std::string(to_string(a.kind)) + "' more than once",
                     {t.id});
      if (model.form == ModelForm::Simplified &&
          (a.kind == ActionKind::Release || a.kind == ActionKind::Transfer ||
           a.kind == ActionKind::Receive))
        report.error(codes::kMixedForm,
                     "simplified model declares elided stage '" + t.id + "." +
                         std::string(to_string(a.kind)) + "'",
                     {t.id});
    }
    std::set<std::string> slot_names;
    for (const auto& s : t.slots) {
      if (!slot_names.insert(s.name).second)
        report.error(codes::kDuplicateSlot,
                     "thimac '" + t.id + "' declares slot '" + s.name +
                         "' more than once",
                     {t.id});
    }
    if (t.parent) {
      if (model.find_thimac(*t.parent) == nullptr)
        report.error(codes::kDanglingRef,
                     "thimac '" + t.id + "' nests under undeclared '" +
                         *t.parent + "'",
                     {t.id, *t.parent});
    }
  }
  for (const auto& t : model.thimacs) {
    std::set<std::string> seen{t.id};
    const Thimac* cur = &t;
    while (cur->parent) {
      const Thimac* up = model.find_thimac(*cur->parent);
      if (up == nullptr) break;
      if (!seen.insert(up->id).second) {
        report.error(codes::kNestingCycle,
                     "nesting cycle through thimac '" + t.id + "'", {t.id});
        break;
      }
      cur = up;
    }
  }

  // Arc checks.
  for (const auto& f : model.flows) {
    const std::string where = "flow " + f.source.str() + " -> " + f.target.str();
    check_ref(model, f.source, where, report);
    check_ref(model, f.target, where, report);
    const ArcContext ctx =
        f.is_cross() ? ArcContext::Cross : ArcContext::Intra;
    const bool legal =
        model.form == ModelForm::Full
            ? flow_is_legal(f.source.kind, f.target.kind, ctx)
            : simplified_flow_is_legal(f.source.kind, f.target.kind, ctx);
    if (!legal)
      report.error(codes::kIllegalFlow,
                   where + " is not a legal " +
                       (ctx == ArcContext::Cross ? "cross-thimac" : "intra-thimac") +
                       " stage pair",
                   {f.source.str(), f.target.str()});
    check_effects(f.effects, slots, where, report);
  }
  for (const auto& g : model.triggers) {
    const std::string where =
        "trigger " + g.source.str() + " --> " + g.target.str();
    check_ref(model, g.source, where, report);
    check_ref(model, g.target, where, report);
    if (g.source.thimac == g.target.thimac)
      report.error(codes::kTriggerNotCrossing,
                   where + " does not cross thimac boundaries",
                   {g.source.str(), g.target.str()});
    if (g.target.kind != ActionKind::Create &&
        g.target.kind != ActionKind::Process)
      report.error(codes::kIllegalTriggerTarget,
                   where + " targets a " +
                       std::string(to_string(g.target.kind)) +
                       " stage; triggers land on create or process",
                   {g.target.str()});
    if (g.guard) {
      std::vector<const Operand*> ops;
      collect_operands(*g.guard, ops);
      for (const auto* op : ops) check_operand_slots(*op, slots, where, report);
    }
    check_effects(g.effects, slots, where, report);
  }

  // Duplicate annotation numbers (corpus hygiene; warning only).
  std::map<int, std::vector<std::string>> annotations;
  for (const auto& t : model.thimacs) {
    if (t.annotation) annotations[*t.annotation].push_back(t.id);
    for (const auto& a : t.actions)
      if (a.annotation)
        annotations[*a.annotation].push_back(
            t.id + "." + std::string(to_string(a.kind)));
    for (const auto& s : t.slots)
      if (s.annotation) annotations[*s.annotation].push_back(t.id + "." + s.name);
  }
  for (const auto& f : model.flows)
    if (f.annotation)
      annotations[*f.annotation].push_back(f.source.str() + "->" +
                                           f.target.str());
  for (const auto& g : model.triggers)
    if (g.annotation)
      annotations[*g.annotation].push_back(g.source.str() + "-->" +
                                           g.target.str());
  for (const auto& [num, elements] : annotations)
    if (elements.size() > 1)
      report.warn(codes::kDuplicateAnnotation,
                  "annotation #" + std::to_string(num) + " appears " +
                      std::to_string(elements.size()) + " times",
                  elements);

  // Reachability: Create stages are roots; arcs propagate reachability.
  std::set<std::string> reached;
  for (const auto& t : model.thimacs)
    if (t.has_action(ActionKind::Create))
      reached.insert(ActionRef{t.id, ActionKind::Create}.str());
  bool grew = true;
  while (grew) {
    grew = false;
    auto propagate = [&](const ActionRef& src, const ActionRef& tgt) {
      if (reached.count(src.str()) && !reached.count(tgt.str())) {
        reached.insert(tgt.str());
        grew = true;
      }
    };
    for (const auto& f : model.flows) propagate(f.source, f.target);
    for (const auto& g : model.triggers) propagate(g.source, g.target);
  }
  for (const auto& t : model.thimacs)
    for (const auto& a : t.actions) {
      const ActionRef ref{t.id, a.kind};
      if (a.kind != ActionKind::Create && !reached.count(ref.str()))
        report.warn(codes::kUnreachableStage,
                    "stage '" + ref.str() + "' is not reachable from any create",
                    {ref.str()});
    }

  for (const auto& t : model.thimacs)
    if (t.actions.empty() && model.children_of(t.id).empty() &&
        t.slots.empty())
      report.warn(codes::kEmptyThimac,
                  "thimac '" + t.id + "' has no actions and no subthimacs",
                  {t.id});

  return report;
}

}  // namespace tmkit
