#include "hk/io/lexer.hpp"

#include <cctype>

namespace hk::io {

std::string SourceSpan::str() const {
  return (file.empty() ? "<input>" : file) + ":" + std::to_string(line) + ":" + std::to_string(column);
}

SourceSpan SourceSpan::cover(const SourceSpan& a, const SourceSpan& b) {
  SourceSpan s = a;
  if (std::make_pair(b.line, b.column) < std::make_pair(s.line, s.column)) {
    s.line = b.line;
    s.column = b.column;
  }
  if (std::make_pair(b.end_line, b.end_column) > std::make_pair(s.end_line, s.end_column)) {
    s.end_line = b.end_line;
    s.end_column = b.end_column;
  }
  return s;
}

bool SourceSpan::contains(const SourceSpan& inner) const {
  return std::make_pair(line, column) <= std::make_pair(inner.line, inner.column) &&
         std::make_pair(inner.end_line, inner.end_column) <= std::make_pair(end_line, end_column);
}

ParseError::ParseError(SourceSpan s, const std::string& msg)
    : Error(s.str() + ": " + msg), span(std::move(s)), message(msg) {}

namespace {

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_'; }

}  // namespace

std::vector<Token> tokenize(std::string_view text, const std::string& file) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      unsigned char c = static_cast<unsigned char>(text[i]);
      if (c == '\n') {
        ++line;
        col = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++col;  // count code points, not bytes
      }
    }
  };
  auto emit = [&](TokenKind kind, std::string t, int l, int c) {
    out.push_back({kind, std::move(t), {file, l, c, line, col}});
  };

  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (text.substr(i, 2) == "//") {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    const int l = line, cl = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(static_cast<unsigned char>(text[j]))) ++j;
      std::string word(text.substr(i, j - i));
      advance(j - i);
      emit(TokenKind::identifier, std::move(word), l, cl);
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && ident_start(static_cast<unsigned char>(text[j]))) {
        // identifiers such as 2nd_floor
        while (j < text.size() && ident_char(static_cast<unsigned char>(text[j]))) ++j;
        std::string word(text.substr(i, j - i));
        advance(j - i);
        emit(TokenKind::identifier, std::move(word), l, cl);
        continue;
      }
      std::string num(text.substr(i, j - i));
      advance(j - i);
      emit(TokenKind::number, std::move(num), l, cl);
      continue;
    }
    if (c == '"') {
      std::string s;
      advance(1);
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\n') throw ParseError({file, l, cl, line, col}, "unterminated string");
        if (text[i] == '\\' && i + 1 < text.size()) advance(1);
        s += text[i];
        advance(1);
      }
      if (i >= text.size()) throw ParseError({file, l, cl, line, col}, "unterminated string");
      advance(1);
      emit(TokenKind::string, std::move(s), l, cl);
      continue;
    }
    static const std::pair<std::string_view, std::string_view> unicode[] = {
        {"⊆", "<="}, {"∈", "in"}, {"∧", "and"}, {"→", "->"}};
    bool matched = false;
    for (const auto& [u, ascii] : unicode)
      if (text.substr(i, u.size()) == u) {
        advance(u.size());
        emit(ascii == "in" || ascii == "and" ? TokenKind::identifier : TokenKind::punct, std::string(ascii), l, cl);
        matched = true;
        break;
      }
    if (matched) continue;
    static const std::string_view two[] = {"->", "<=", ">=", "==", "!=", "&&", "||"};
    for (auto op : two)
      if (text.substr(i, 2) == op) {
        advance(2);
        emit(TokenKind::punct, std::string(op), l, cl);
        matched = true;
        break;
      }
    if (matched) continue;
    if (std::string_view("{}();:,=<>!#").find(static_cast<char>(c)) != std::string_view::npos) {
      advance(1);
      emit(TokenKind::punct, std::string(1, static_cast<char>(c)), l, cl);
      continue;
    }
    std::size_t len = 1;
    if (c >= 0xC0) len = c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : 2;
    std::string bad(text.substr(i, len));
    advance(len);
    throw ParseError({file, l, cl, line, col}, "unexpected character '" + bad + "'");
  }
  out.push_back({TokenKind::end, "", {file, line, col, line, col}});
  return out;
}

}  // namespace hk::io
