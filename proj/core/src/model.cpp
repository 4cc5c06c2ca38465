#include "tmkit/model.hpp"

#include <algorithm>
#include <cctype>

namespace tmkit {

std::string value_to_string(const Value& v) {
  if (std::holds_alternative<long long>(v))
    return std::to_string(std::get<long long>(v));
  if (std::holds_alternative<bool>(v)) return std::get<bool>(v) ? "true" : "false";
  return std::get<std::string>(v);
}

bool natural_less(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const unsigned char ca = a[i], cb = b[j];
    if (std::isdigit(ca) && std::isdigit(cb)) {
      std::size_t ia = i, jb = j;
      while (ia < a.size() && std::isdigit(static_cast<unsigned char>(a[ia]))) ++ia;
      while (jb < b.size() && std::isdigit(static_cast<unsigned char>(b[jb]))) ++jb;
      std::string_view da = a.substr(i, ia - i), db = b.substr(j, jb - j);
      std::string_view ta = da.substr(da.find_first_not_of('0') == da.npos
                                          ? da.size() - 1
                                          : da.find_first_not_of('0'));
      std::string_view tb = db.substr(db.find_first_not_of('0') == db.npos
                                          ? db.size() - 1
                                          : db.find_first_not_of('0'));
      if (ta.size() != tb.size()) return ta.size() < tb.size();
      if (ta != tb) return ta < tb;
      if (da.size() != db.size()) return da.size() > db.size();  // more zeros first
      i = ia;
      j = jb;
      continue;
    }
    if (ca != cb) return ca < cb;
    ++i;
    ++j;
  }
  return a.size() - i < b.size() - j;
}

std::string_view to_string(SlotKind kind) {
  switch (kind) {
    case SlotKind::Counter: return "counter";
    case SlotKind::Queue: return "queue";
    case SlotKind::Flag: return "flag";
  }
  return "?";
}

bool Thimac::has_action(ActionKind kind) const {
  return find_action(kind) != nullptr;
}

const ActionStage* Thimac::find_action(ActionKind kind) const {
  for (const auto& a : actions)
    if (a.kind == kind) return &a;
  return nullptr;
}

const StateSlot* Thimac::find_slot(std::string_view name) const {
  for (const auto& s : slots)
    if (s.name == name) return &s;
  return nullptr;
}

std::string_view Thimac::local_name() const {
  const auto pos = id.rfind('.');
  return pos == std::string::npos ? std::string_view(id)
                                  : std::string_view(id).substr(pos + 1);
}

std::string ActionRef::str() const {
  return thimac + "." + std::string(to_string(kind));
}

bool natural_ref_less(const ActionRef& a, const ActionRef& b) {
  if (a.thimac != b.thimac) return natural_less(a.thimac, b.thimac);
  return static_cast<int>(a.kind) < static_cast<int>(b.kind);
}

const Thimac* StaticModel::find_thimac(std::string_view id) const {
  for (const auto& t : thimacs)
    if (t.id == id) return &t;
  return nullptr;
}

Thimac* StaticModel::find_thimac(std::string_view id) {
  for (auto& t : thimacs)
    if (t.id == id) return &t;
  return nullptr;
}

bool StaticModel::has_stage(const ActionRef& ref) const {
  const Thimac* t = find_thimac(ref.thimac);
  return t != nullptr && t->has_action(ref.kind);
}

std::vector<const Thimac*> StaticModel::roots() const {
  std::vector<const Thimac*> out;
  for (const auto& t : thimacs)
    if (!t.parent) out.push_back(&t);
  return out;
}

std::vector<const Thimac*> StaticModel::children_of(std::string_view id) const {
  std::vector<const Thimac*> out;
  for (const auto& t : thimacs)
    if (t.parent && *t.parent == id) out.push_back(&t);
  return out;
}

const FlowArc* StaticModel::find_flow(const ActionRef& source,
                                      const ActionRef& target) const {
  for (const auto& f : flows)
    if (f.source == source && f.target == target) return &f;
  return nullptr;
}

const TriggerArc* StaticModel::find_trigger(const ActionRef& source,
                                            const ActionRef& target) const {
  for (const auto& t : triggers)
    if (t.source == source && t.target == target) return &t;
  return nullptr;
}

void StaticModel::canonicalize() {
  std::stable_sort(thimacs.begin(), thimacs.end(),
            [](const Thimac& a, const Thimac& b) {
              return natural_less(a.id, b.id);
            });
  for (auto& t : thimacs) {
    std::stable_sort(t.actions.begin(), t.actions.end(),
              [](const ActionStage& a, const ActionStage& b) {
                return static_cast<int>(a.kind) < static_cast<int>(b.kind);
              });
    std::stable_sort(t.slots.begin(), t.slots.end(),
              [](const StateSlot& a, const StateSlot& b) {
                return natural_less(a.name, b.name);
              });
  }
  std::stable_sort(flows.begin(), flows.end(), [](const FlowArc& a, const FlowArc& b) {
    if (!(a.source == b.source)) return natural_ref_less(a.source, b.source);
    return natural_ref_less(a.target, b.target);
  });
  std::stable_sort(triggers.begin(), triggers.end(),
            [](const TriggerArc& a, const TriggerArc& b) {
              if (!(a.source == b.source))
                return natural_ref_less(a.source, b.source);
              return natural_ref_less(a.target, b.target);
            });
}

}  // namespace tmkit
