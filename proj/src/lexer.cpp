#include "gpm/lexer.hpp"

#include <cctype>
#include <map>

#include "gpm/diagnostics.hpp"

namespace gpm {

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Semi: return "';'";
    case Tok::Bar: return "'|'";
    case Tok::Colon: return "':'";
    case Tok::Eq: return "'='";
    case Tok::IsoArrow: return "'<->'";
    case Tok::Arrow: return "'->'";
    case Tok::At: return "'@'";
    case Tok::AtAt: return "'@@'";
    case Tok::ComposeOp: return "'<<'";
    case Tok::ConsOp: return "'::'";
    case Tok::Plus: return "'+'";
    case Tok::Star: return "'*'";
    case Tok::Backslash: return "'\\'";
    case Tok::Bit0: return "'0 literal";
    case Tok::Bit1: return "'1 literal";
    case Tok::Nil: return "'[]'";
    case Tok::Num: return "numeral";
    case Tok::Ident: return "identifier";
    case Tok::KwType: return "'type'";
    case Tok::KwIso: return "'iso'";
    case Tok::KwTerm: return "'term'";
    case Tok::KwMu: return "'mu'";
    case Tok::KwLet: return "'let'";
    case Tok::KwIn: return "'in'";
    case Tok::KwInl: return "'inl'";
    case Tok::KwInr: return "'inr'";
    case Tok::KwFold: return "'fold'";
    case Tok::KwNext: return "'next'";
    case Tok::KwFix: return "'fix'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(const std::string& src) {
  static const std::map<std::string, Tok> keywords = {
      {"type", Tok::KwType}, {"iso", Tok::KwIso},   {"term", Tok::KwTerm},
      {"mu", Tok::KwMu},     {"let", Tok::KwLet},   {"in", Tok::KwIn},
      {"inl", Tok::KwInl},   {"inr", Tok::KwInr},   {"fold", Tok::KwFold},
      {"next", Tok::KwNext}, {"fix", Tok::KwFix},
  };

  std::vector<Token> out;
  size_t i = 0, n = src.size();
  int line = 1, col = 1;
  auto here = [&]() { return Pos{line, col}; };
  auto bump = [&](size_t k) {
    for (size_t j = 0; j < k; ++j) {
      if (src[i + j] == '\n') { ++line; col = 1; } else { ++col; }
    }
    i += k;
  };
  auto fail = [&](const std::string& msg) {
    throw CheckError(Errc::ParseError, msg, here());
  };
  auto starts = [&](const char* s) {
    size_t k = 0;
    while (s[k]) { if (i + k >= n || src[i + k] != s[k]) return false; ++k; }
    return true;
  };

  while (i < n) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { bump(1); continue; }
    if (starts("--")) {
      while (i < n && src[i] != '\n') bump(1);
      continue;
    }
    Pos p = here();
    auto push = [&](Tok k, size_t len) {
      out.push_back({k, src.substr(i, len), p});
      bump(len);
    };
    if (starts("<->")) { push(Tok::IsoArrow, 3); continue; }
    if (starts("<<")) { push(Tok::ComposeOp, 2); continue; }
    if (starts("->")) { push(Tok::Arrow, 2); continue; }
    if (starts("@@")) { push(Tok::AtAt, 2); continue; }
    if (starts("::")) { push(Tok::ConsOp, 2); continue; }
    if (starts("[]")) { push(Tok::Nil, 2); continue; }
    if (starts("'0")) { push(Tok::Bit0, 2); continue; }
    if (starts("'1")) { push(Tok::Bit1, 2); continue; }
    switch (c) {
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case '{': push(Tok::LBrace, 1); continue;
      case '}': push(Tok::RBrace, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      case '.': push(Tok::Dot, 1); continue;
      case ';': push(Tok::Semi, 1); continue;
      case '|': push(Tok::Bar, 1); continue;
      case ':': push(Tok::Colon, 1); continue;
      case '=': push(Tok::Eq, 1); continue;
      case '@': push(Tok::At, 1); continue;
      case '+': push(Tok::Plus, 1); continue;
      case '*': push(Tok::Star, 1); continue;
      case '\\': push(Tok::Backslash, 1); continue;
      default: break;
    }
    if (std::isdigit((unsigned char)c)) {
      size_t k = 1;
      while (i + k < n && std::isdigit((unsigned char)src[i + k])) ++k;
      std::string num = src.substr(i, k);
      if (num != "0" && num != "1")
        fail("numeral '" + num + "' is not a type (only 0 and 1 exist; spell "
             "larger finite types as sums)");
      push(Tok::Num, k);
      continue;
    }
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t k = 1;
      while (i + k < n &&
             (std::isalnum((unsigned char)src[i + k]) || src[i + k] == '_'))
        ++k;
      std::string word = src.substr(i, k);
      auto kw = keywords.find(word);
      push(kw == keywords.end() ? Tok::Ident : kw->second, k);
      continue;
    }
    fail(std::string("unrecognized character '") + c + "'");
  }
  out.push_back({Tok::End, "", here()});
  return out;
}

}  // namespace gpm
