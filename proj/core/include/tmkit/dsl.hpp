#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tmkit/diagnostics.hpp"
#include "tmkit/document.hpp"

namespace tmkit {

struct ParseError {
  int line = 0;    // 1-based
  int column = 0;  // 1-based
  std::string message;
  std::string expected;  // hint: what the parser was looking for
};

struct ParseResult {
  std::optional<ModelDocument> document;
  std::vector<ParseError> errors;
  ValidationReport report;  // document validation, when a document was built

  bool ok() const { return document.has_value() && errors.empty(); }
};

/// Parses .tm source. Total: every input yields either a document or
/// positioned errors, never a crash. On success the returned document is
/// canonicalized and `report` carries its validation.
///
/// Grammar (EBNF):
///   document   := section*
///   section    := "params" "{" param* "}"
///               | "static" ["simplified"] "{" item* "}"
///               | "events" "{" eventdecl* "}"
///               | "behavior" "{" component* "}"
///   param      := NAME "=" (INT | STRING | BOOL)
///   item       := thimac | flow | trigger
///   thimac     := "thimac" NAME ["as" STRING] ["#" INT]
///                 "{" (action | slot | thimac)* "}"
///   action     := KIND ["#" INT]
///   slot       := "counter" NAME ["=" INT] ["max" operand] ["#" INT]
///               | "queue" NAME ["#" INT]
///               | "flag" NAME ["=" BOOL] ["#" INT]
///   flow       := "flow" aref "->" aref ["as" NAME] ["#" INT] ["do" effects]
///   trigger    := "trigger" aref "-->" aref ["as" NAME] ["#" INT]
///                 ["when" guard] ["do" effects]
///   aref       := NAME ("." NAME)* "." KIND
///   eventdecl  := ("event" | "instance") ID ["as" NAME] "="
///                 "{" element ("," element)* "}"
///                 ["with" "(" ID "->" ID ")"] ["props" "{" param* "}"]
///   element    := aref | thimac-path | "flow" "(" aref "->" aref ")"
///               | "trigger" "(" aref "-->" aref ")"
///   component  := "component" NAME "{" (edge | ID)* "}"
///   edge       := ID ("->" | "=>") ID            // "=>" marks repetition
///   ID         := NAME | INT | STRING            // lifted ids round trip
///   guard      := or-expr over comparisons (=, !=, <, <=), and/or/not,
///                 operands INT | STRING | BOOL | attr NAME | slot path
///                 | $param | size(slot)
///   effects    := effect ("," effect)*
///   effect     := slot ("+=" | "-=" | "=") operand
///               | "push" "(" slot ")" | "pop" "(" slot ")"
///   KIND       := create | process | release | transfer | receive
/// Comments run from "//" to end of line. Source is UTF-8.
ParseResult parse(std::string_view text);

/// Canonical text: params, static (thimacs then flows then triggers),
/// events, behavior; natural id order, two-space indentation. Byte-stable:
/// parse(serialize(doc)) == doc and serializing twice is identical.
/// Throws TmError E_NOT_VALID when the document does not validate.
std::string serialize(const ModelDocument& doc);

/// serialize() without the validation gate; used for error reporting.
std::string serialize_unchecked(const ModelDocument& doc);

}  // namespace tmkit
