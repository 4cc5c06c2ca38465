#pragma once

#include <string>
#include <vector>

#include "tmkit/value.hpp"

namespace tmkit {

/// Operands of the minimal condition language. Bare names are token
/// attributes, dotted paths are thimac state slots, $names are document
/// parameters, size(slot) is a queue length.
enum class OperandKind { IntLit, StrLit, BoolLit, Attr, Slot, Param, QueueSize };

struct Operand {
  OperandKind kind = OperandKind::IntLit;
  long long int_value = 0;
  bool bool_value = false;
  std::string text;  // string literal, attribute name, slot path or param name

  static Operand integer(long long v) {
    return {OperandKind::IntLit, v, false, {}};
  }
  static Operand boolean(bool v) { return {OperandKind::BoolLit, 0, v, {}}; }
  static Operand string(std::string s) {
    return {OperandKind::StrLit, 0, false, std::move(s)};
  }
  static Operand attr(std::string name) {
    return {OperandKind::Attr, 0, false, std::move(name)};
  }
  static Operand slot(std::string path) {
    return {OperandKind::Slot, 0, false, std::move(path)};
  }
  static Operand param(std::string name) {
    return {OperandKind::Param, 0, false, std::move(name)};
  }
  static Operand queue_size(std::string path) {
    return {OperandKind::QueueSize, 0, false, std::move(path)};
  }

  bool operator==(const Operand&) const = default;
};

std::string to_string(const Operand& op);

enum class CmpOp { Eq, Ne, Lt, Le };

std::string_view to_string(CmpOp op);

/// Closed boolean expression over comparisons; evaluated side-effect free.
struct Guard {
  enum class Kind { And, Or, Not, Cmp, Atom };

  Kind kind = Kind::Atom;
  CmpOp op = CmpOp::Eq;         // Cmp only
  std::vector<Guard> children;  // And/Or: 2, Not: 1
  Operand lhs;                  // Cmp lhs, Atom operand
  Operand rhs;                  // Cmp rhs

  static Guard atom(Operand o) {
    Guard g;
    g.kind = Kind::Atom;
    g.lhs = std::move(o);
    return g;
  }
  static Guard cmp(Operand a, CmpOp op, Operand b) {
    Guard g;
    g.kind = Kind::Cmp;
    g.op = op;
    g.lhs = std::move(a);
    g.rhs = std::move(b);
    return g;
  }
  static Guard negate(Guard inner) {
    Guard g;
    g.kind = Kind::Not;
    g.children.push_back(std::move(inner));
    return g;
  }
  static Guard conjunction(Guard a, Guard b) {
    Guard g;
    g.kind = Kind::And;
    g.children.push_back(std::move(a));
    g.children.push_back(std::move(b));
    return g;
  }
  static Guard disjunction(Guard a, Guard b) {
    Guard g;
    g.kind = Kind::Or;
    g.children.push_back(std::move(a));
    g.children.push_back(std::move(b));
    return g;
  }

  bool operator==(const Guard&) const = default;
};

std::string to_string(const Guard& g);

/// Slot mutations attached to arcs; applied when an event firing walks the
/// arc. push/pop operate on the walking token's id.
enum class EffectOp { Add, Sub, Assign, Push, Pop };

struct Effect {
  EffectOp op = EffectOp::Add;
  std::string slot;  // dotted thimac path + slot name
  Operand value;     // Add/Sub/Assign only

  bool operator==(const Effect&) const = default;
};

std::string to_string(const Effect& e);

}  // namespace tmkit
