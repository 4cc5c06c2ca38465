#include "tmkit/document.hpp"

#include <algorithm>
#include <set>

#include "tmkit/validate.hpp"

namespace tmkit {

const EventDef* ModelDocument::find_event(std::string_view id) const {
  for (const auto& e : events)
    if (e.id == id) return &e;
  return nullptr;
}

void ModelDocument::canonicalize() {
  statics.canonicalize();
  for (auto& e : events) e.region.canonicalize();
  std::stable_sort(events.begin(), events.end(),
            [](const EventDef& a, const EventDef& b) {
              return natural_less(a.id, b.id);
            });
  if (behavior) behavior->canonicalize();
}

namespace {

void collect_param_refs(const Guard& g, std::vector<std::string>& out) {
  auto take = [&](const Operand& op) {
    if (op.kind == OperandKind::Param) out.push_back(op.text);
  };
  if (g.kind == Guard::Kind::Cmp) {
    take(g.lhs);
    take(g.rhs);
  } else if (g.kind == Guard::Kind::Atom) {
    take(g.lhs);
  }
  for (const auto& c : g.children) collect_param_refs(c, out);
}

void check_params(const ModelDocument& doc, ValidationReport& report) {
  std::vector<std::string> refs;
  for (const auto& t : doc.statics.triggers) {
    if (t.guard) collect_param_refs(*t.guard, refs);
    for (const auto& e : t.effects)
      if (e.value.kind == OperandKind::Param) refs.push_back(e.value.text);
  }
  for (const auto& f : doc.statics.flows)
    for (const auto& e : f.effects)
      if (e.value.kind == OperandKind::Param) refs.push_back(e.value.text);
  for (const auto& t : doc.statics.thimacs)
    for (const auto& s : t.slots)
      if (s.max && s.max->kind == OperandKind::Param) refs.push_back(s.max->text);

  std::stable_sort(refs.begin(), refs.end());
  refs.erase(std::unique(refs.begin(), refs.end()), refs.end());
  for (const auto& name : refs)
    if (!doc.params.count(name))
      report.error(codes::kGuardUndeclaredRef,
                   "reference to undeclared parameter '$" + name + "'", {name});
}

}  // namespace

ValidationReport validate_document(const ModelDocument& doc) {
  ValidationReport report = validate_static(doc.statics);
  check_params(doc, report);

  std::set<std::string> event_ids;
  std::set<std::string> instance_ids;
  for (const auto& e : doc.events) {
    if (!event_ids.insert(e.id).second)
      report.error(codes::kUnknownEvent,
                   "event id '" + e.id + "' declared more than once", {e.id});
    if (e.classification == Classification::Instance) instance_ids.insert(e.id);
  }

  for (const auto& e : doc.events) {
    try {
      make_event(doc.statics, e.id, e.region.elements, e.classification,
                 e.label, e.participants);
    } catch (const TmError& err) {
      report.error(err.code(), err.what(), {e.id});
      continue;
    }
    if (classify(e.region) != e.classification)
      report.warn(codes::kClassificationMismatch,
                  "'" + e.id + "' is declared " +
                      std::string(to_string(e.classification)) +
                      " but its region classifies as " +
                      std::string(to_string(classify(e.region))),
                  {e.id});
    if (e.participants) {
      for (const auto& p : {e.participants->first, e.participants->second})
        if (!instance_ids.count(p))
          report.error(codes::kUnknownEvent,
                       "event '" + e.id +
                           "' names undeclared instance participant '" + p + "'",
                       {e.id, p});
    }
  }

  if (doc.behavior) report.merge(validate_behavior(*doc.behavior, doc.events));

  return report;
}

}  // namespace tmkit
