#include "tmkit/guard.hpp"

namespace tmkit {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

// Precedence: or < and < not < atom.
std::string guard_text(const Guard& g, int parent_level);

std::string atom_text(const Guard& g) {
  switch (g.kind) {
    case Guard::Kind::Atom:
      return to_string(g.lhs);
    case Guard::Kind::Cmp:
      return to_string(g.lhs) + " " + std::string(to_string(g.op)) + " " +
             to_string(g.rhs);
    default:
      return "(" + guard_text(g, 0) + ")";
  }
}

std::string guard_text(const Guard& g, int parent_level) {
  switch (g.kind) {
    case Guard::Kind::Or: {
      std::string out = guard_text(g.children[0], 1);
      for (std::size_t i = 1; i < g.children.size(); ++i)
        out += " or " + guard_text(g.children[i], 1);
      return parent_level > 0 ? "(" + out + ")" : out;
    }
    case Guard::Kind::And: {
      std::string out = guard_text(g.children[0], 2);
      for (std::size_t i = 1; i < g.children.size(); ++i)
        out += " and " + guard_text(g.children[i], 2);
      return parent_level > 1 ? "(" + out + ")" : out;
    }
    case Guard::Kind::Not:
      return "not " + guard_text(g.children[0], 3);
    default:
      return atom_text(g);
  }
}

}  // namespace

std::string to_string(const Operand& op) {
  switch (op.kind) {
    case OperandKind::IntLit: return std::to_string(op.int_value);
    case OperandKind::StrLit: return quoted(op.text);
    case OperandKind::BoolLit: return op.bool_value ? "true" : "false";
    case OperandKind::Attr: return op.text;
    case OperandKind::Slot: return op.text;
    case OperandKind::Param: return "$" + op.text;
    case OperandKind::QueueSize: return "size(" + op.text + ")";
  }
  return "?";
}

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
  }
  return "?";
}

std::string to_string(const Guard& g) { return guard_text(g, 0); }

std::string to_string(const Effect& e) {
  switch (e.op) {
    case EffectOp::Add: return e.slot + " += " + to_string(e.value);
    case EffectOp::Sub: return e.slot + " -= " + to_string(e.value);
    case EffectOp::Assign: return e.slot + " = " + to_string(e.value);
    case EffectOp::Push: return "push(" + e.slot + ")";
    case EffectOp::Pop: return "pop(" + e.slot + ")";
  }
  return "?";
}

}  // namespace tmkit
