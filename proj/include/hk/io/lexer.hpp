#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hk/error.hpp"

namespace hk::io {

/// 1-based, end column exclusive.
struct SourceSpan {
  std::string file;
  int line = 0;
  int column = 0;
  int end_line = 0;
  int end_column = 0;

  std::string str() const;
  /// Smallest span covering both.
  static SourceSpan cover(const SourceSpan& a, const SourceSpan& b);
  bool contains(const SourceSpan& inner) const;
};

struct ParseError : Error {
  ParseError(SourceSpan span, const std::string& message);
  SourceSpan span;
  std::string message;
};

enum class TokenKind {
  identifier,
  number,
  string,
  punct,  ///< { } ( ) ; : , = -> <= < > >= == != && || ! #
  end
};

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;
  SourceSpan span;
};

/// Splits UTF-8 text into tokens. `//` starts a line comment; ⊆, ∈ and ∧ are
/// read as `<=`, `in` and `and`.
std::vector<Token> tokenize(std::string_view text, const std::string& file = "<input>");

}  // namespace hk::io
