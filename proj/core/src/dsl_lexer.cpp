#include "dsl_internal.hpp"

#include <cctype>

namespace tmkit::dsl {

namespace {

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_'; }

}  // namespace

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;

  auto push = [&](Tok kind, int at_line, int at_col, std::string text = {},
                  long long number = 0) {
    out.push_back({kind, std::move(text), number, at_line, at_col});
  };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < src.size()) {
    const unsigned char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const int at_line = line, at_col = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      push(Tok::Ident, at_line, at_col, std::string(src.substr(i, j - i)));
      advance(j - i);
      continue;
    }
    if (std::isdigit(c) ||
        (c == '-' && i + 1 < src.size() &&
         std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i + 1;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      // "->" never reaches here: '-' followed by '>' is not a digit.
      long long value = 0;
      try {
        value = std::stoll(std::string(src.substr(i, j - i)));
      } catch (...) {
        push(Tok::Bad, at_line, at_col, std::string(src.substr(i, j - i)));
        advance(j - i);
        continue;
      }
      push(Tok::Int, at_line, at_col, {}, value);
      advance(j - i);
      continue;
    }
    if (c == '"') {
      std::string text;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < src.size()) {
        if (src[j] == '\\' && j + 1 < src.size()) {
          const char esc = src[j + 1];
          text += esc == 'n' ? '\n' : esc == 't' ? '\t' : esc;
          j += 2;
          continue;
        }
        if (src[j] == '"') {
          closed = true;
          ++j;
          break;
        }
        if (src[j] == '\n') break;  // unterminated on this line
        text += src[j];
        ++j;
      }
      push(closed ? Tok::Str : Tok::Bad, at_line, at_col, std::move(text));
      advance(j - i);
      continue;
    }

    auto two = [&](char a, char b) {
      return c == a && i + 1 < src.size() && src[i + 1] == b;
    };
    if (c == '-' && i + 2 < src.size() && src[i + 1] == '-' &&
        src[i + 2] == '>') {
      push(Tok::DashArrow, at_line, at_col);
      advance(3);
      continue;
    }
    if (two('-', '>')) {
      push(Tok::Arrow, at_line, at_col);
      advance(2);
      continue;
    }
    if (two('=', '>')) {
      push(Tok::FatArrow, at_line, at_col);
      advance(2);
      continue;
    }
    if (two('+', '=')) {
      push(Tok::PlusEq, at_line, at_col);
      advance(2);
      continue;
    }
    if (two('-', '=')) {
      push(Tok::MinusEq, at_line, at_col);
      advance(2);
      continue;
    }
    if (two('<', '=')) {
      push(Tok::Le, at_line, at_col);
      advance(2);
      continue;
    }
    if (two('!', '=')) {
      push(Tok::Ne, at_line, at_col);
      advance(2);
      continue;
    }
    switch (c) {
      case '{': push(Tok::LBrace, at_line, at_col); advance(1); continue;
      case '}': push(Tok::RBrace, at_line, at_col); advance(1); continue;
      case '(': push(Tok::LParen, at_line, at_col); advance(1); continue;
      case ')': push(Tok::RParen, at_line, at_col); advance(1); continue;
      case ',': push(Tok::Comma, at_line, at_col); advance(1); continue;
      case '.': push(Tok::Dot, at_line, at_col); advance(1); continue;
      case '#': push(Tok::Hash, at_line, at_col); advance(1); continue;
      case '$': push(Tok::Dollar, at_line, at_col); advance(1); continue;
      case '=': push(Tok::Assign, at_line, at_col); advance(1); continue;
      case '<': push(Tok::Lt, at_line, at_col); advance(1); continue;
      default:
        push(Tok::Bad, at_line, at_col, std::string(1, static_cast<char>(c)));
        advance(1);
        continue;
    }
  }
  out.push_back({Tok::End, {}, 0, line, col});
  return out;
}

std::string token_name(Tok kind) {
  switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Str: return "string";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Hash: return "'#'";
    case Tok::Dollar: return "'$'";
    case Tok::Assign: return "'='";
    case Tok::Arrow: return "'->'";
    case Tok::DashArrow: return "'-->'";
    case Tok::FatArrow: return "'=>'";
    case Tok::PlusEq: return "'+='";
    case Tok::MinusEq: return "'-='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Ne: return "'!='";
    case Tok::End: return "end of input";
    case Tok::Bad: return "invalid token";
  }
  return "?";
}

}  // namespace tmkit::dsl
