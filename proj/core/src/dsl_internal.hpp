#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tmkit::dsl {

enum class Tok {
  Ident,
  Int,
  Str,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Comma,
  Dot,
  Hash,
  Dollar,
  Assign,     // =
  Arrow,      // ->
  DashArrow,  // -->
  FatArrow,   // =>
  PlusEq,     // +=
  MinusEq,    // -=
  Lt,         // <
  Le,         // <=
  Ne,         // !=
  End,
  Bad,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;      // identifier / string content
  long long number = 0;  // Int
  int line = 1;
  int column = 1;
};

/// Tokenizes the whole input; never throws. Unknown bytes become Bad tokens.
std::vector<Token> lex(std::string_view source);

std::string token_name(Tok kind);

}  // namespace tmkit::dsl
