#include "tmkit/normalize.hpp"

#include <map>
#include <set>

#include "tmkit/validate.hpp"

namespace tmkit {

namespace {

std::string arc_key(const ActionRef& s, const ActionRef& t) {
  return s.str() + "|" + t.str();
}

void ensure_stage(StaticModel& model, const ActionRef& ref) {
  Thimac* t = model.find_thimac(ref.thimac);
  if (t != nullptr && !t->has_action(ref.kind))
    t->actions.push_back({ref.kind, std::nullopt});
}

}  // namespace

StaticModel normalize(const StaticModel& model) {
  const ValidationReport report = validate_static(model);
  if (!report.ok()) {
    std::string first;
    for (const auto& d : report.diagnostics)
      if (d.severity == Severity::Error) {
        first = d.message;
        break;
      }
    throw TmError("E_NOT_VALID", "model does not validate: " + first);
  }
  if (model.form == ModelForm::Full) {
    StaticModel out = model;
    out.canonicalize();
    return out;
  }

  StaticModel out;
  out.form = ModelForm::Full;
  out.thimacs = model.thimacs;
  out.triggers = model.triggers;

  std::set<std::string> have;
  auto add_arc = [&](FlowArc arc) {
    if (have.insert(arc_key(arc.source, arc.target)).second)
      out.flows.push_back(std::move(arc));
  };

  for (const auto& f : model.flows) {
    if (!f.is_cross()) {
      add_arc(f);
      continue;
    }
    // x -> B.y expands to x -> A.Release -> A.Transfer => B.Transfer ->
    // B.Receive [-> B.y]; the cross hop keeps the label, effects and
    // annotation.
    const std::string& a = f.source.thimac;
    const std::string& b = f.target.thimac;
    const ActionRef a_rel{a, ActionKind::Release};
    const ActionRef a_xfer{a, ActionKind::Transfer};
    const ActionRef b_xfer{b, ActionKind::Transfer};
    const ActionRef b_rcv{b, ActionKind::Receive};
    ensure_stage(out, a_rel);
    ensure_stage(out, a_xfer);
    ensure_stage(out, b_xfer);
    ensure_stage(out, b_rcv);

    add_arc({f.source, a_rel, std::nullopt, std::nullopt, {}});
    add_arc({a_rel, a_xfer, std::nullopt, std::nullopt, {}});
    add_arc({a_xfer, b_xfer, f.thing_label, f.annotation, f.effects});
    add_arc({b_xfer, b_rcv, std::nullopt, std::nullopt, {}});
    if (f.target.kind != ActionKind::Receive)
      add_arc({b_rcv, f.target, std::nullopt, std::nullopt, {}});
  }

  // Stages referenced but never declared (elided in the source form).
  for (const auto& f : out.flows) {
    ensure_stage(out, f.source);
    ensure_stage(out, f.target);
  }
  for (const auto& t : out.triggers) {
    ensure_stage(out, t.source);
    ensure_stage(out, t.target);
  }

  // Boxes that originate activity or stand alone get their elided Create.
  std::set<std::string> has_inbound;
  for (const auto& f : out.flows) has_inbound.insert(f.target.str());
  for (const auto& t : out.triggers) has_inbound.insert(t.target.str());
  for (auto& t : out.thimacs) {
    if (t.has_action(ActionKind::Create)) continue;
    const bool standalone =
        t.actions.empty() && out.children_of(t.id).empty();
    bool any_inbound = false;
    for (const auto& a : t.actions)
      if (has_inbound.count(ActionRef{t.id, a.kind}.str())) any_inbound = true;
    const bool originates = !t.actions.empty() && !any_inbound;
    if (standalone || originates)
      t.actions.push_back({ActionKind::Create, std::nullopt});
  }

  out.canonicalize();
  return out;
}

ModelDocument normalize(const ModelDocument& doc) {
  ModelDocument out;
  out.params = doc.params;
  out.behavior = doc.behavior;
  out.statics = normalize(doc.statics);

  const bool expanded = doc.statics.form == ModelForm::Simplified;
  for (const auto& e : doc.events) {
    EventDef def = e;
    if (expanded) {
      std::vector<ElementRef> remapped;
      for (const auto& el : e.region.elements) {
        const auto* f = std::get_if<FlowElement>(&el);
        if (f == nullptr) {
          if (const auto* s = std::get_if<StageElement>(&el)) {
            remapped.push_back(el);
            (void)s;
          } else {
            remapped.push_back(el);
          }
          continue;
        }
        const FlowArc* arc = doc.statics.find_flow(f->source, f->target);
        if (arc == nullptr || !arc->is_cross()) {
          remapped.push_back(el);
          continue;
        }
        const std::string& a = f->source.thimac;
        const std::string& b = f->target.thimac;
        const ActionRef a_rel{a, ActionKind::Release};
        const ActionRef a_xfer{a, ActionKind::Transfer};
        const ActionRef b_xfer{b, ActionKind::Transfer};
        const ActionRef b_rcv{b, ActionKind::Receive};
        remapped.push_back(FlowElement{f->source, a_rel});
        remapped.push_back(FlowElement{a_rel, a_xfer});
        remapped.push_back(FlowElement{a_xfer, b_xfer});
        remapped.push_back(FlowElement{b_xfer, b_rcv});
        if (f->target.kind != ActionKind::Receive)
          remapped.push_back(FlowElement{b_rcv, f->target});
      }
      // Endpoint stages of the expanded arcs.
      std::vector<ElementRef> completed = remapped;
      for (const auto& el : remapped)
        if (const auto* fe = std::get_if<FlowElement>(&el)) {
          completed.push_back(StageElement{fe->source});
          completed.push_back(StageElement{fe->target});
        }
      def.region.elements = std::move(completed);
      def.region.canonicalize();
    }
    out.events.push_back(std::move(def));
  }
  out.canonicalize();
  return out;
}

}  // namespace tmkit
