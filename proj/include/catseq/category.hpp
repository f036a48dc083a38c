#pragma once

// Directional categories: tagged atoms, slash compounds, and schema
// metavariables. A lexical slash may also be direction-neutral (`|`), which
// matches either concrete direction during rule unification.

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "catseq/sexpr.hpp"

namespace catseq {

struct Cat;
using CatPtr = std::shared_ptr<const Cat>;

enum class SlashDir { Forward, Backward, Either };

struct CatAtom {
  std::string name;
  std::string tag;  // empty when untagged
};

struct CatSlash {
  CatPtr result;
  SlashDir dir;
  CatPtr arg;
};

struct CatMeta {
  std::string name;  // schema variable: X, Y, Z, W
};

struct Cat {
  std::variant<CatAtom, CatSlash, CatMeta> node;
};

inline CatPtr mk_atom(std::string name, std::string tag = "") {
  return std::make_shared<Cat>(Cat{CatAtom{std::move(name), std::move(tag)}});
}
inline CatPtr mk_slash(CatPtr result, SlashDir dir, CatPtr arg) {
  return std::make_shared<Cat>(Cat{CatSlash{std::move(result), dir, std::move(arg)}});
}
inline CatPtr mk_meta(std::string name) {
  return std::make_shared<Cat>(Cat{CatMeta{std::move(name)}});
}

inline const CatAtom* cat_atom(const CatPtr& c) { return std::get_if<CatAtom>(&c->node); }
inline const CatSlash* cat_slash(const CatPtr& c) { return std::get_if<CatSlash>(&c->node); }
inline const CatMeta* cat_meta(const CatPtr& c) { return std::get_if<CatMeta>(&c->node); }

inline bool is_atomic(const CatPtr& c) { return cat_atom(c) != nullptr; }

inline char slash_char(SlashDir d) {
  switch (d) {
    case SlashDir::Forward: return '/';
    case SlashDir::Backward: return '\\';
    default: return '|';
  }
}

// --- printing ---------------------------------------------------------------
// Compound results are always parenthesized: (S\NP)/NP, S/(S\T).

namespace detail {

inline void print_cat_rec(const CatPtr& c, std::ostream& os, bool nested) {
  if (auto* a = cat_atom(c)) {
    os << a->name;
    if (!a->tag.empty()) os << "[" << a->tag << "]";
  } else if (auto* m = cat_meta(c)) {
    os << m->name;
  } else {
    auto* s = cat_slash(c);
    if (nested) os << "(";
    print_cat_rec(s->result, os, true);
    os << slash_char(s->dir);
    print_cat_rec(s->arg, os, true);
    if (nested) os << ")";
  }
}

}  // namespace detail

inline std::string print_cat(const CatPtr& c) {
  std::ostringstream os;
  detail::print_cat_rec(c, os, false);
  return os.str();
}

// --- parsing ----------------------------------------------------------------
// Grammar:  cat := part (slash part)*   (left-associative)
//           part := NAME ['[' TAG ']'] | '(' cat ')'
// In schema mode single capitals X, Y, Z, W read as metavariables.

namespace detail {

class CatReader {
 public:
  CatReader(const std::string& text, bool schema) : text_(text), schema_(schema) {}

  CatPtr read() {
    CatPtr c = read_cat();
    skip_ws();
    if (pos_ < text_.size()) throw ParseError("trailing input in category: " + text_);
    return c;
  }

 private:
  CatPtr read_cat() {
    CatPtr c = read_part();
    for (;;) {
      skip_ws();
      if (pos_ >= text_.size()) break;
      char ch = text_[pos_];
      SlashDir dir;
      if (ch == '/') dir = SlashDir::Forward;
      else if (ch == '\\') dir = SlashDir::Backward;
      else if (ch == '|') dir = SlashDir::Either;
      else break;
      ++pos_;
      c = mk_slash(c, dir, read_part());
    }
    return c;
  }

  CatPtr read_part() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of category: " + text_);
    if (text_[pos_] == '(') {
      ++pos_;
      CatPtr c = read_cat();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')')
        throw ParseError("unbalanced '(' in category: " + text_);
      ++pos_;
      return c;
    }
    std::string name = read_name();
    if (schema_ && name.size() == 1 && (name == "X" || name == "Y" || name == "Z" || name == "W"))
      return mk_meta(name);
    std::string tag;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '[') {
      ++pos_;
      tag = read_name();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ']')
        throw ParseError("unbalanced '[' in category: " + text_);
      ++pos_;
      if (tag.empty()) throw ParseError("empty tag in category: " + text_);
    }
    return mk_atom(name, tag);
  }

  std::string read_name() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '+' || c == '-') ++pos_;
      else break;
    }
    if (start == pos_) throw ParseError("expected name in category: " + text_);
    return text_.substr(start, pos_ - start);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  const std::string& text_;
  bool schema_;
  size_t pos_ = 0;
};

}  // namespace detail

inline CatPtr parse_cat(const std::string& text) { return detail::CatReader(text, false).read(); }
inline CatPtr parse_cat_schema(const std::string& text) {
  return detail::CatReader(text, true).read();
}

// --- structural comparison and meet ----------------------------------------

// Meet of two concrete categories: equal atoms must carry equal tags (absent
// counts as a tag of its own); an Either slash meets a directed slash at the
// directed one. Returns nullptr when no meet exists.
inline CatPtr cat_meet(const CatPtr& a, const CatPtr& b) {
  if (auto* aa = cat_atom(a)) {
    auto* ba = cat_atom(b);
    if (!ba || aa->name != ba->name || aa->tag != ba->tag) return nullptr;
    return a;
  }
  if (cat_meta(a) || cat_meta(b)) return nullptr;
  auto* as = cat_slash(a);
  auto* bs = cat_slash(b);
  if (!as || !bs) return nullptr;
  SlashDir dir;
  if (as->dir == bs->dir) dir = as->dir;
  else if (as->dir == SlashDir::Either) dir = bs->dir;
  else if (bs->dir == SlashDir::Either) dir = as->dir;
  else return nullptr;
  CatPtr res = cat_meet(as->result, bs->result);
  CatPtr arg = cat_meet(as->arg, bs->arg);
  if (!res || !arg) return nullptr;
  return mk_slash(res, dir, arg);
}

inline bool cat_equal(const CatPtr& a, const CatPtr& b) {
  CatPtr m = cat_meet(a, b);
  if (!m) return false;
  // Equal only if neither side contributed a refinement, i.e. dirs match too.
  return print_cat(a) == print_cat(b);
}

// --- schema unification -----------------------------------------------------

using CatBindings = std::map<std::string, CatPtr>;

// One-way match of a concrete category against a schema pattern. Metavariables
// bind whole concrete subcategories; rebinding must meet the previous value
// (the meet refines an Either slash to a direction). Directed schema slashes
// accept an Either concrete slash.
inline bool unify(const CatPtr& concrete, const CatPtr& schema, CatBindings& bindings) {
  if (auto* m = cat_meta(schema)) {
    auto it = bindings.find(m->name);
    if (it == bindings.end()) {
      bindings[m->name] = concrete;
      return true;
    }
    CatPtr met = cat_meet(it->second, concrete);
    if (!met) return false;
    it->second = met;
    return true;
  }
  if (auto* sa = cat_atom(schema)) {
    auto* ca = cat_atom(concrete);
    return ca && ca->name == sa->name && ca->tag == sa->tag;
  }
  auto* ss = cat_slash(schema);
  auto* cs = cat_slash(concrete);
  if (!cs) return false;
  if (ss->dir != cs->dir && cs->dir != SlashDir::Either && ss->dir != SlashDir::Either)
    return false;
  return unify(cs->result, ss->result, bindings) && unify(cs->arg, ss->arg, bindings);
}

// Substitutes bindings into a schema pattern; all metavariables must be bound.
inline CatPtr instantiate(const CatPtr& schema, const CatBindings& bindings) {
  if (auto* m = cat_meta(schema)) {
    auto it = bindings.find(m->name);
    if (it == bindings.end()) throw ParseError("unbound category metavariable: " + m->name);
    return it->second;
  }
  if (cat_atom(schema)) return schema;
  auto* s = cat_slash(schema);
  return mk_slash(instantiate(s->result, bindings), s->dir, instantiate(s->arg, bindings));
}

// All subcategories (the category itself, plus every result/argument part,
// recursively), deduplicated by print.
inline void collect_subcategories(const CatPtr& c, std::vector<CatPtr>& out,
                                  std::map<std::string, bool>& seen) {
  std::string key = print_cat(c);
  if (!seen.emplace(key, true).second) return;
  out.push_back(c);
  if (auto* s = cat_slash(c)) {
    collect_subcategories(s->result, out, seen);
    collect_subcategories(s->arg, out, seen);
  }
}

inline std::vector<CatPtr> subcategories(const CatPtr& c) {
  std::vector<CatPtr> out;
  std::map<std::string, bool> seen;
  collect_subcategories(c, out, seen);
  return out;
}

}  // namespace catseq
