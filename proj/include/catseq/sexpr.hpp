#pragma once

// Minimal s-expression reader shared by the term, lexicon and fixture
// parsers. Atoms are runs of non-delimiter characters; double-quoted atoms
// may contain whitespace; `;` starts a comment to end of line.

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

namespace catseq {

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct SExpr {
  bool is_atom = false;
  std::string atom;             // set when is_atom
  std::vector<SExpr> items;     // set when !is_atom

  static SExpr make_atom(std::string s) {
    SExpr e;
    e.is_atom = true;
    e.atom = std::move(s);
    return e;
  }
  static SExpr make_list(std::vector<SExpr> xs) {
    SExpr e;
    e.items = std::move(xs);
    return e;
  }

  const SExpr& at(size_t i) const {
    if (is_atom || i >= items.size()) throw ParseError("s-expression index out of range");
    return items[i];
  }
  size_t size() const { return is_atom ? 0 : items.size(); }
  bool head_is(const std::string& name) const {
    return !is_atom && !items.empty() && items[0].is_atom && items[0].atom == name;
  }
};

namespace detail {

inline bool sexpr_delim(char c) {
  return c == '(' || c == ')' || c == ';' || c == '"' || std::isspace(static_cast<unsigned char>(c));
}

class SExprReader {
 public:
  explicit SExprReader(const std::string& text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_ws();
    while (pos_ < text_.size()) {
      out.push_back(read_one());
      skip_ws();
    }
    return out;
  }

  SExpr read_one() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of s-expression input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      std::vector<SExpr> items;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != ')') {
        items.push_back(read_one());
        skip_ws();
      }
      if (pos_ >= text_.size()) throw ParseError("unbalanced '(' in s-expression");
      ++pos_;  // ')'
      return SExpr::make_list(std::move(items));
    }
    if (c == ')') throw ParseError("unexpected ')' in s-expression");
    if (c == '"') {
      ++pos_;
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != '"') s.push_back(text_[pos_++]);
      if (pos_ >= text_.size()) throw ParseError("unterminated string atom");
      ++pos_;  // '"'
      return SExpr::make_atom(std::move(s));
    }
    std::string s;
    while (pos_ < text_.size() && !sexpr_delim(text_[pos_])) s.push_back(text_[pos_++]);
    return SExpr::make_atom(std::move(s));
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace detail

inline SExpr parse_sexpr(const std::string& text) {
  detail::SExprReader r(text);
  SExpr e = r.read_one();
  return e;
}

inline std::vector<SExpr> parse_sexprs(const std::string& text) {
  detail::SExprReader r(text);
  return r.read_all();
}

}  // namespace catseq
