// Tokenizer for .gpm sources. Comments run from `--` to end of line.
#pragma once

#include <string>
#include <vector>

#include "gpm/ast.hpp"

namespace gpm {

enum class Tok : uint8_t {
  LParen, RParen, LBrace, RBrace,
  Comma, Dot, Semi, Bar, Colon, Eq,
  IsoArrow,   // <->
  Arrow,      // ->
  At,         // @
  AtAt,       // @@
  ComposeOp,  // <<
  ConsOp,     // ::
  Plus, Star, Backslash,
  Bit0,       // '0
  Bit1,       // '1
  Nil,        // []
  Num,        // 0 or 1 (type literals)
  Ident,
  KwType, KwIso, KwTerm, KwMu, KwLet, KwIn,
  KwInl, KwInr, KwFold, KwNext, KwFix,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  Pos pos;
};

const char* tok_name(Tok t);

// Throws CheckError(ParseError) on an unrecognized character.
std::vector<Token> lex(const std::string& src);

}  // namespace gpm
