#include <map>
#include <set>

#include "dsl_internal.hpp"
#include "tmkit/dsl.hpp"
#include "tmkit/validate.hpp"

namespace tmkit {

namespace {

using dsl::Tok;
using dsl::Token;

constexpr std::size_t kMaxErrors = 50;
constexpr int kMaxNesting = 64;

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, std::vector<ParseError>& errors)
      : toks_(tokens), errors_(errors) {}

  ModelDocument run() {
    while (!at(Tok::End) && errors_.size() < kMaxErrors) {
      if (at(Tok::Ident)) {
        const std::string section = peek().text;
        if (section == "params") {
          next();
          parse_params();
          continue;
        }
        if (section == "static") {
          next();
          parse_static();
          continue;
        }
        if (section == "events") {
          next();
          parse_events();
          continue;
        }
        if (section == "behavior") {
          next();
          parse_behavior();
          continue;
        }
      }
      error("expected a section", "params, static, events or behavior");
      sync_line();
    }
    doc_.canonicalize();
    return std::move(doc_);
  }

 private:
  const std::vector<Token>& toks_;
  std::vector<ParseError>& errors_;
  std::size_t pos_ = 0;
  ModelDocument doc_;
  bool saw_static_ = false, saw_events_ = false, saw_behavior_ = false,
       saw_params_ = false;

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_ident(std::string_view word) const {
    return at(Tok::Ident) && peek().text == word;
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(Tok kind) {
    if (!at(kind)) return false;
    next();
    return true;
  }
  bool accept_ident(std::string_view word) {
    if (!at_ident(word)) return false;
    next();
    return true;
  }

  void error(const std::string& message, std::string expected = {}) {
    if (errors_.size() >= kMaxErrors) return;
    const Token& t = peek();
    errors_.push_back({t.line, t.column, message, std::move(expected)});
  }

  bool expect(Tok kind, const std::string& what) {
    if (accept(kind)) return true;
    error("expected " + dsl::token_name(kind) + " " + what + ", found " +
              describe(peek()),
          dsl::token_name(kind));
    return false;
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::Ident) return "'" + t.text + "'";
    if (t.kind == Tok::Int) return "'" + std::to_string(t.number) + "'";
    return dsl::token_name(t.kind);
  }

  // Recovery: skip the rest of the offending line, stopping at braces.
  void sync_line() {
    const int line = peek().line;
    while (!at(Tok::End) && peek().line == line && !at(Tok::RBrace) &&
           !at(Tok::LBrace))
      next();
  }

  void skip_block_remainder() {
    int depth = 1;
    while (!at(Tok::End) && depth > 0) {
      if (at(Tok::LBrace)) ++depth;
      if (at(Tok::RBrace)) --depth;
      next();
    }
  }

  // ---- sections ------------------------------------------------------

  void parse_params() {
    if (saw_params_) error("duplicate params section");
    saw_params_ = true;
    if (!expect(Tok::LBrace, "to open params")) return;
    while (!at(Tok::RBrace) && !at(Tok::End) && errors_.size() < kMaxErrors) {
      if (!at(Tok::Ident)) {
        error("expected a parameter name", "identifier");
        sync_line();
        if (at(Tok::End)) return;
        if (!at(Tok::Ident) && !at(Tok::RBrace)) next();
        continue;
      }
      const std::string name = next().text;
      if (!expect(Tok::Assign, "after parameter name")) {
        sync_line();
        continue;
      }
      if (at(Tok::Int)) {
        doc_.params[name] = Value{next().number};
      } else if (at(Tok::Str)) {
        doc_.params[name] = Value{next().text};
      } else if (at_ident("true") || at_ident("false")) {
        doc_.params[name] = Value{next().text == "true"};
      } else {
        error("expected a parameter value", "integer, string or boolean");
        sync_line();
      }
    }
    expect(Tok::RBrace, "to close params");
  }

  void parse_static() {
    if (saw_static_) error("duplicate static section");
    saw_static_ = true;
    if (accept_ident("simplified")) doc_.statics.form = ModelForm::Simplified;
    if (!expect(Tok::LBrace, "to open static")) return;
    while (!at(Tok::RBrace) && !at(Tok::End) && errors_.size() < kMaxErrors) {
      if (accept_ident("thimac")) {
        parse_thimac({});
      } else if (accept_ident("flow")) {
        parse_flow();
      } else if (accept_ident("trigger")) {
        parse_trigger();
      } else {
        error("expected thimac, flow or trigger", "thimac/flow/trigger");
        sync_line();
        if (!at(Tok::RBrace) && !at(Tok::End) && !at_ident("thimac") &&
            !at_ident("flow") && !at_ident("trigger"))
          next();
      }
    }
    expect(Tok::RBrace, "to close static");
  }

  void parse_thimac(const std::string& parent, int depth = 0) {
    if (depth > kMaxNesting) {
      error("thimac nesting deeper than " + std::to_string(kMaxNesting) +
            " levels");
      skip_block_remainder();
      return;
    }
    if (!at(Tok::Ident)) {
      error("expected a thimac name", "identifier");
      sync_line();
      return;
    }
    const std::string local = next().text;
    const std::string id = parent.empty() ? local : parent + "." + local;

    Thimac t;
    t.id = id;
    t.name = local;
    if (!parent.empty()) t.parent = parent;
    if (accept_ident("as")) {
      if (at(Tok::Str) || at(Tok::Ident))
        t.name = next().text;
      else
        error("expected a display name after 'as'", "string or identifier");
    }
    if (accept(Tok::Hash)) t.annotation = read_annotation();

    if (!expect(Tok::LBrace, "to open thimac '" + id + "'")) return;
    doc_.statics.thimacs.push_back(std::move(t));

    while (!at(Tok::RBrace) && !at(Tok::End) && errors_.size() < kMaxErrors) {
      if (accept_ident("thimac")) {
        parse_thimac(id, depth + 1);
        continue;
      }
      if (at_ident("counter") || at_ident("queue") || at_ident("flag")) {
        parse_slot(id);
        continue;
      }
      if (at(Tok::Ident)) {
        const auto kind = action_kind_from(peek().text);
        if (kind) {
          next();
          ActionStage stage{*kind, std::nullopt};
          if (accept(Tok::Hash)) stage.annotation = read_annotation();
          doc_.statics.find_thimac(id)->actions.push_back(stage);
          continue;
        }
      }
      error("expected an action, slot or nested thimac in '" + id + "'",
            "create/process/release/transfer/receive, counter/queue/flag, "
            "thimac");
      sync_line();
      if (!at(Tok::RBrace) && !at(Tok::End) && !at(Tok::Ident)) next();
    }
    expect(Tok::RBrace, "to close thimac '" + id + "'");
  }

  std::optional<int> read_annotation() {
    if (!at(Tok::Int)) {
      error("expected an annotation number after '#'", "integer");
      return std::nullopt;
    }
    return static_cast<int>(next().number);
  }

  void parse_slot(const std::string& thimac_id) {
    const std::string kind_word = next().text;
    StateSlot slot;
    slot.kind = kind_word == "counter" ? SlotKind::Counter
                : kind_word == "queue" ? SlotKind::Queue
                                       : SlotKind::Flag;
    if (!at(Tok::Ident)) {
      error("expected a slot name", "identifier");
      sync_line();
      return;
    }
    slot.name = next().text;
    if (slot.kind == SlotKind::Counter) {
      if (accept(Tok::Assign)) {
        if (at(Tok::Int))
          slot.initial = next().number;
        else
          error("expected an initial counter value", "integer");
      }
      if (accept_ident("max")) slot.max = parse_operand();
    } else if (slot.kind == SlotKind::Flag) {
      if (accept(Tok::Assign)) {
        if (at_ident("true") || at_ident("false"))
          slot.initial_flag = next().text == "true";
        else
          error("expected true or false", "boolean");
      }
    }
    if (accept(Tok::Hash)) slot.annotation = read_annotation();
    doc_.statics.find_thimac(thimac_id)->slots.push_back(std::move(slot));
  }

  std::optional<ActionRef> parse_aref() {
    if (!at(Tok::Ident)) {
      error("expected an action reference", "thimac path ending in a stage");
      return std::nullopt;
    }
    std::vector<std::string> segments{next().text};
    while (accept(Tok::Dot)) {
      if (!at(Tok::Ident)) {
        error("expected a path segment after '.'", "identifier");
        return std::nullopt;
      }
      segments.push_back(next().text);
    }
    if (segments.size() < 2) {
      error("action reference '" + segments[0] + "' needs a stage suffix",
            "thimac.stage");
      return std::nullopt;
    }
    const auto kind = action_kind_from(segments.back());
    if (!kind) {
      error("'" + segments.back() + "' is not an action kind",
            "create/process/release/transfer/receive");
      return std::nullopt;
    }
    std::string thimac = segments[0];
    for (std::size_t i = 1; i + 1 < segments.size(); ++i)
      thimac += "." + segments[i];
    return ActionRef{std::move(thimac), *kind};
  }

  void parse_flow() {
    FlowArc arc;
    auto src = parse_aref();
    if (!src || !expect(Tok::Arrow, "in flow")) {
      sync_line();
      return;
    }
    auto tgt = parse_aref();
    if (!tgt) {
      sync_line();
      return;
    }
    arc.source = *src;
    arc.target = *tgt;
    if (accept_ident("as")) {
      if (at(Tok::Ident) || at(Tok::Str))
        arc.thing_label = next().text;
      else
        error("expected a thing name after 'as'", "identifier or string");
    }
    if (accept(Tok::Hash)) arc.annotation = read_annotation();
    if (accept_ident("do")) arc.effects = parse_effects();
    doc_.statics.flows.push_back(std::move(arc));
  }

  void parse_trigger() {
    TriggerArc arc;
    auto src = parse_aref();
    if (!src || !expect(Tok::DashArrow, "in trigger")) {
      sync_line();
      return;
    }
    auto tgt = parse_aref();
    if (!tgt) {
      sync_line();
      return;
    }
    arc.source = *src;
    arc.target = *tgt;
    if (accept_ident("as")) {
      if (at(Tok::Ident) || at(Tok::Str))
        arc.label = next().text;
      else
        error("expected a label after 'as'", "identifier or string");
    }
    if (accept(Tok::Hash)) arc.annotation = read_annotation();
    if (accept_ident("when")) arc.guard = parse_guard();
    if (accept_ident("do")) arc.effects = parse_effects();
    doc_.statics.triggers.push_back(std::move(arc));
  }

  // ---- guards and effects ---------------------------------------------

  Guard parse_guard() { return parse_or(0); }

  Guard parse_or(int depth) {
    Guard g = parse_and(depth);
    while (accept_ident("or"))
      g = Guard::disjunction(std::move(g), parse_and(depth));
    return g;
  }

  Guard parse_and(int depth) {
    Guard g = parse_unary(depth);
    while (accept_ident("and"))
      g = Guard::conjunction(std::move(g), parse_unary(depth));
    return g;
  }

  Guard parse_unary(int depth = 0) {
    if (depth > kMaxNesting) {
      error("guard nesting deeper than " + std::to_string(kMaxNesting) +
            " levels");
      return Guard::atom(Operand::boolean(false));
    }
    if (accept_ident("not")) return Guard::negate(parse_unary(depth + 1));
    if (accept(Tok::LParen)) {
      Guard g = parse_or(depth + 1);
      expect(Tok::RParen, "to close guard group");
      return g;
    }
    Operand lhs = parse_operand();
    std::optional<CmpOp> op;
    if (accept(Tok::Assign))
      op = CmpOp::Eq;
    else if (accept(Tok::Ne))
      op = CmpOp::Ne;
    else if (accept(Tok::Lt))
      op = CmpOp::Lt;
    else if (accept(Tok::Le))
      op = CmpOp::Le;
    if (!op) return Guard::atom(std::move(lhs));
    Operand rhs = parse_operand();
    return Guard::cmp(std::move(lhs), *op, std::move(rhs));
  }

  Operand parse_operand() {
    if (at(Tok::Int)) return Operand::integer(next().number);
    if (at(Tok::Str)) return Operand::string(next().text);
    if (accept(Tok::Dollar)) {
      if (at(Tok::Ident)) return Operand::param(next().text);
      error("expected a parameter name after '$'", "identifier");
      return Operand::integer(0);
    }
    if (at_ident("true") || at_ident("false"))
      return Operand::boolean(next().text == "true");
    if (at_ident("size") && peek(1).kind == Tok::LParen) {
      next();
      next();
      std::string path = parse_dotted();
      expect(Tok::RParen, "to close size()");
      return Operand::queue_size(std::move(path));
    }
    if (at(Tok::Ident)) {
      std::string path = parse_dotted();
      if (path.find('.') != std::string::npos)
        return Operand::slot(std::move(path));
      return Operand::attr(std::move(path));
    }
    error("expected an operand",
          "literal, attribute, slot path, $param or size()");
    next();
    return Operand::integer(0);
  }

  std::string parse_dotted() {
    std::string path = next().text;  // caller checked Ident
    while (at(Tok::Dot) && peek(1).kind == Tok::Ident) {
      next();
      path += "." + next().text;
    }
    return path;
  }

  std::vector<Effect> parse_effects() {
    std::vector<Effect> out;
    do {
      if ((at_ident("push") || at_ident("pop")) &&
          peek(1).kind == Tok::LParen) {
        const bool is_push = next().text == "push";
        next();  // (
        Effect e;
        e.op = is_push ? EffectOp::Push : EffectOp::Pop;
        if (at(Tok::Ident))
          e.slot = parse_dotted();
        else
          error("expected a queue slot", "thimac.slot path");
        expect(Tok::RParen, "to close effect");
        out.push_back(std::move(e));
        continue;
      }
      if (!at(Tok::Ident)) {
        error("expected an effect", "slot += n, slot -= n, slot = v, "
                                    "push(slot) or pop(slot)");
        sync_line();
        return out;
      }
      Effect e;
      e.slot = parse_dotted();
      if (accept(Tok::PlusEq))
        e.op = EffectOp::Add;
      else if (accept(Tok::MinusEq))
        e.op = EffectOp::Sub;
      else if (accept(Tok::Assign))
        e.op = EffectOp::Assign;
      else {
        error("expected '+=', '-=' or '=' in effect", "assignment operator");
        sync_line();
        return out;
      }
      e.value = parse_operand();
      out.push_back(std::move(e));
    } while (accept(Tok::Comma));
    return out;
  }

  // ---- events ----------------------------------------------------------

  void parse_events() {
    if (saw_events_) error("duplicate events section");
    saw_events_ = true;
    if (!expect(Tok::LBrace, "to open events")) return;
    while (!at(Tok::RBrace) && !at(Tok::End) && errors_.size() < kMaxErrors) {
      const bool is_event = at_ident("event");
      const bool is_instance = at_ident("instance");
      if (!is_event && !is_instance) {
        error("expected an event or instance declaration", "event/instance");
        sync_line();
        if (!at(Tok::RBrace) && !at(Tok::End) && !at_ident("event") &&
            !at_ident("instance"))
          next();
        continue;
      }
      next();
      parse_event_decl(is_instance ? Classification::Instance
                                   : Classification::Event);
    }
    expect(Tok::RBrace, "to close events");
  }

  // Event ids may be bare integers or quoted strings: lifted instances and
  // events keep their node/rel ids whatever shape those take.
  std::optional<std::string> accept_event_id() {
    if (at(Tok::Ident) || at(Tok::Str)) return next().text;
    if (at(Tok::Int)) return std::to_string(next().number);
    return std::nullopt;
  }

  void parse_event_decl(Classification classification) {
    auto id = accept_event_id();
    if (!id) {
      error("expected an event id", "identifier");
      sync_line();
      return;
    }
    EventDef def;
    def.id = std::move(*id);
    def.classification = classification;
    if (accept_ident("as")) {
      if (at(Tok::Ident) || at(Tok::Str))
        def.label = next().text;
      else
        error("expected a label after 'as'", "identifier or string");
    }
    if (!expect(Tok::Assign, "after event id")) {
      sync_line();
      return;
    }
    if (!expect(Tok::LBrace, "to open the region")) {
      sync_line();
      return;
    }
    do {
      auto element = parse_element();
      if (element) def.region.elements.push_back(std::move(*element));
    } while (accept(Tok::Comma));
    expect(Tok::RBrace, "to close the region");

    if (accept_ident("with")) {
      expect(Tok::LParen, "to open participants");
      auto a = accept_event_id();
      if (!a) error("expected a participant id", "identifier");
      expect(Tok::Arrow, "between participants");
      auto b = accept_event_id();
      if (!b) error("expected a participant id", "identifier");
      expect(Tok::RParen, "to close participants");
      if (a && b) def.participants = {*a, *b};
    }
    if (accept_ident("props")) {
      expect(Tok::LBrace, "to open props");
      while (at(Tok::Ident) && errors_.size() < kMaxErrors) {
        const std::string key = next().text;
        if (!expect(Tok::Assign, "after prop name")) break;
        if (at(Tok::Int))
          def.props[key] = Value{next().number};
        else if (at(Tok::Str))
          def.props[key] = Value{next().text};
        else if (at_ident("true") || at_ident("false"))
          def.props[key] = Value{next().text == "true"};
        else {
          error("expected a prop value", "integer, string or boolean");
          break;
        }
      }
      expect(Tok::RBrace, "to close props");
    }
    doc_.events.push_back(std::move(def));
  }

  std::optional<ElementRef> parse_element() {
    if (at_ident("flow") && peek(1).kind == Tok::LParen) {
      next();
      next();
      auto src = parse_aref();
      expect(Tok::Arrow, "in flow element");
      auto tgt = parse_aref();
      expect(Tok::RParen, "to close flow element");
      if (src && tgt) return ElementRef{FlowElement{*src, *tgt}};
      return std::nullopt;
    }
    if (at_ident("trigger") && peek(1).kind == Tok::LParen) {
      next();
      next();
      auto src = parse_aref();
      expect(Tok::DashArrow, "in trigger element");
      auto tgt = parse_aref();
      expect(Tok::RParen, "to close trigger element");
      if (src && tgt) return ElementRef{TriggerElement{*src, *tgt}};
      return std::nullopt;
    }
    if (!at(Tok::Ident)) {
      error("expected a region element",
            "stage ref, thimac path, flow(...) or trigger(...)");
      sync_line();
      return std::nullopt;
    }
    std::vector<std::string> segments{next().text};
    while (accept(Tok::Dot)) {
      if (!at(Tok::Ident)) {
        error("expected a path segment after '.'", "identifier");
        return std::nullopt;
      }
      segments.push_back(next().text);
    }
    const auto kind = action_kind_from(segments.back());
    if (kind && segments.size() >= 2) {
      std::string thimac = segments[0];
      for (std::size_t i = 1; i + 1 < segments.size(); ++i)
        thimac += "." + segments[i];
      return ElementRef{StageElement{{std::move(thimac), *kind}}};
    }
    std::string id = segments[0];
    for (std::size_t i = 1; i < segments.size(); ++i) id += "." + segments[i];
    return ElementRef{ThimacElement{std::move(id)}};
  }

  // ---- behavior ---------------------------------------------------------

  void parse_behavior() {
    if (saw_behavior_) error("duplicate behavior section");
    saw_behavior_ = true;
    if (!expect(Tok::LBrace, "to open behavior")) return;
    BehaviorModel model;
    while (!at(Tok::RBrace) && !at(Tok::End) && errors_.size() < kMaxErrors) {
      if (!accept_ident("component")) {
        error("expected a component", "component NAME { ... }");
        sync_line();
        if (!at(Tok::RBrace) && !at(Tok::End) && !at_ident("component")) next();
        continue;
      }
      BehaviorComponent comp;
      if (at(Tok::Ident))
        comp.name = next().text;
      else
        error("expected a component name", "identifier");
      if (!expect(Tok::LBrace, "to open component")) continue;
      while ((at(Tok::Ident) || at(Tok::Int)) && errors_.size() < kMaxErrors) {
        std::string from = *accept_event_id();
        comp.nodes.push_back(from);
        while (at(Tok::Arrow) || at(Tok::FatArrow)) {
          const EdgeKind kind =
              accept(Tok::Arrow) ? EdgeKind::Sequence
                                 : (next(), EdgeKind::Repeat);
          auto to = accept_event_id();
          if (!to) {
            error("expected an event id after the edge", "identifier");
            break;
          }
          comp.nodes.push_back(*to);
          comp.edges.push_back({from, *to, kind});
          from = std::move(*to);
        }
      }
      expect(Tok::RBrace, "to close component");
      model.components.push_back(std::move(comp));
    }
    expect(Tok::RBrace, "to close behavior");
    doc_.behavior = std::move(model);
  }
};

}  // namespace

ParseResult parse(std::string_view text) {
  ParseResult result;
  const auto tokens = dsl::lex(text);
  Parser parser(tokens, result.errors);
  ModelDocument doc = parser.run();
  if (result.errors.empty()) {
    result.report = validate_document(doc);
    result.document = std::move(doc);
  }
  return result;
}

}  // namespace tmkit
