#include <cctype>
#include <set>
#include <sstream>

#include "tmkit/dsl.hpp"

namespace tmkit {

namespace {

bool plain_ident(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

std::string name_or_quoted(const std::string& s) {
  return plain_ident(s) ? s : quoted(s);
}

// Event ids may also be bare integers (lifted node ids).
std::string event_id_text(const std::string& s) {
  if (plain_ident(s)) return s;
  const bool all_digits =
      !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
  return all_digits ? s : quoted(s);
}

std::string value_text(const Value& v) {
  if (std::holds_alternative<std::string>(v))
    return quoted(std::get<std::string>(v));
  return value_to_string(v);
}

class Writer {
 public:
  explicit Writer(const ModelDocument& doc) : doc_(doc) {}

  std::string text() {
    if (!doc_.params.empty()) write_params();
    write_static();
    if (!doc_.events.empty()) write_events();
    if (doc_.behavior && !doc_.behavior->components.empty()) write_behavior();
    return out_.str();
  }

 private:
  const ModelDocument& doc_;
  std::ostringstream out_;
  int indent_ = 0;

  void line(const std::string& s) {
    for (int i = 0; i < indent_; ++i) out_ << "  ";
    out_ << s << "\n";
  }
  void open(const std::string& s) {
    line(s + " {");
    ++indent_;
  }
  void close() {
    --indent_;
    line("}");
  }

  void write_params() {
    open("params");
    for (const auto& [name, value] : doc_.params)
      line(name + " = " + value_text(value));
    close();
    out_ << "\n";
  }

  void write_static() {
    open(doc_.statics.form == ModelForm::Simplified ? "static simplified"
                                                    : "static");
    for (const auto* root : doc_.statics.roots()) write_thimac(*root);
    for (const auto& f : doc_.statics.flows) write_flow(f);
    for (const auto& t : doc_.statics.triggers) write_trigger(t);
    close();
  }

  void write_thimac(const Thimac& t) {
    std::string head = "thimac " + std::string(t.local_name());
    if (t.name != t.local_name()) head += " as " + name_or_quoted(t.name);
    if (t.annotation) head += " #" + std::to_string(*t.annotation);
    open(head);
    for (const auto& a : t.actions) {
      std::string s{to_string(a.kind)};
      if (a.annotation) s += " #" + std::to_string(*a.annotation);
      line(s);
    }
    for (const auto& slot : t.slots) {
      std::string s{to_string(slot.kind)};
      s += " " + slot.name;
      if (slot.kind == SlotKind::Counter && slot.initial != 0)
        s += " = " + std::to_string(slot.initial);
      if (slot.kind == SlotKind::Counter && slot.max)
        s += " max " + to_string(*slot.max);
      if (slot.kind == SlotKind::Flag && slot.initial_flag) s += " = true";
      if (slot.annotation) s += " #" + std::to_string(*slot.annotation);
      line(s);
    }
    for (const auto* child : doc_.statics.children_of(t.id))
      write_thimac(*child);
    close();
  }

  std::string effects_text(const std::vector<Effect>& effects) {
    std::string s = " do ";
    for (std::size_t i = 0; i < effects.size(); ++i) {
      if (i) s += ", ";
      s += to_string(effects[i]);
    }
    return s;
  }

  void write_flow(const FlowArc& f) {
    std::string s = "flow " + f.source.str() + " -> " + f.target.str();
    if (f.thing_label) s += " as " + name_or_quoted(*f.thing_label);
    if (f.annotation) s += " #" + std::to_string(*f.annotation);
    if (!f.effects.empty()) s += effects_text(f.effects);
    line(s);
  }

  void write_trigger(const TriggerArc& t) {
    std::string s = "trigger " + t.source.str() + " --> " + t.target.str();
    if (t.label) s += " as " + name_or_quoted(*t.label);
    if (t.annotation) s += " #" + std::to_string(*t.annotation);
    if (t.guard) s += " when " + to_string(*t.guard);
    if (!t.effects.empty()) s += effects_text(t.effects);
    line(s);
  }

  void write_events() {
    out_ << "\n";
    open("events");
    for (const auto& e : doc_.events) {
      std::string s{e.classification == Classification::Instance ? "instance"
                                                                 : "event"};
      s += " " + event_id_text(e.id);
      if (e.label) s += " as " + name_or_quoted(*e.label);
      s += " = { ";
      for (std::size_t i = 0; i < e.region.elements.size(); ++i) {
        if (i) s += ", ";
        s += to_string(e.region.elements[i]);
      }
      s += " }";
      if (e.participants)
        s += " with (" + event_id_text(e.participants->first) + " -> " +
             event_id_text(e.participants->second) + ")";
      if (!e.props.empty()) {
        s += " props { ";
        bool first = true;
        for (const auto& [k, v] : e.props) {
          if (!first) s += ", ";
          first = false;
          s += k + " = " + value_text(v);
        }
        s += " }";
      }
      line(s);
    }
    close();
  }

  void write_behavior() {
    out_ << "\n";
    open("behavior");
    for (const auto& c : doc_.behavior->components) {
      open("component " + c.name);
      std::set<std::string> in_edges;
      for (const auto& e : c.edges) {
        line(event_id_text(e.from) +
             (e.kind == EdgeKind::Sequence ? " -> " : " => ") +
             event_id_text(e.to));
        in_edges.insert(e.from);
        in_edges.insert(e.to);
      }
      for (const auto& n : c.nodes)
        if (!in_edges.count(n)) line(event_id_text(n));
      close();
    }
    close();
  }
};

}  // namespace

std::string serialize_unchecked(const ModelDocument& doc) {
  ModelDocument canonical = doc;
  canonical.canonicalize();
  return Writer(canonical).text();
}

std::string serialize(const ModelDocument& doc) {
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
  return serialize_unchecked(doc);
}

}  // namespace tmkit
