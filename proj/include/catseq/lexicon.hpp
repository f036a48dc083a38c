#pragma once

// Lexicon files: s-expression entries mapping surface forms to items.
//
//   (entry "pick-up"
//     (cat "(S\\T)\\T")
//     (lf (lam x (lam y (lam z (pickup x y)))))
//     (pre (inhand y nil) (clear x) (block x) (on x z))
//     (add (inhand y x) (clear z))
//     (del (inhand y nil) (on x z))
//     (raise "S" fwd))        ; optional: add a lexically raised variant
//
// `lf` also accepts a quoted compact string: (lf "\\x.\\y.pickup x y").
// Variable-hood inside lf is positional (lam binders); inside conditions a
// name is a variable when it is bound in the lf or starts with a capital
// letter (existentials such as F).

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "catseq/category.hpp"
#include "catseq/rules.hpp"
#include "catseq/sexpr.hpp"
#include "catseq/strips.hpp"
#include "catseq/term.hpp"

namespace catseq {

class LexiconError : public std::runtime_error {
 public:
  explicit LexiconError(const std::string& what) : std::runtime_error(what) {}
};

struct LexEntry {
  std::string form;
  Item item;
};

struct Lexicon {
  std::vector<LexEntry> entries;  // keeps file order; forms may repeat

  std::vector<Item> lookup(const std::string& form) const {
    std::vector<Item> out;
    for (const auto& e : entries)
      if (e.form == form) out.push_back(e.item);
    return out;
  }
  bool has(const std::string& form) const {
    for (const auto& e : entries)
      if (e.form == form) return true;
    return false;
  }
};

namespace detail {

inline std::set<std::string> lf_binders(const TermPtr& t) {
  std::set<std::string> out;
  std::set<std::string> all = var_names(t);
  // var_names returns binders plus free vars; free vars in a lexical lf are
  // rare, but any of them should still read as variables in conditions.
  return all;
}

inline TermPtr lf_from_sexpr(const SExpr& s) {
  if (s.is_atom) {
    // quoted compact lambda text arrives as an atom
    return parse_lambda(s.atom);
  }
  std::set<std::string> bound;
  return term_from_sexpr(s, bound);
}

}  // namespace detail

inline Lexicon parse_lexicon(const std::string& text) {
  Lexicon lex;
  std::vector<SExpr> forms = parse_sexprs(text);
  for (const auto& s : forms) {
    if (s.is_atom || s.size() < 2 || !s.head_is("entry"))
      throw LexiconError("expected (entry \"form\" ...) at top level");
    LexEntry e;
    e.form = s.at(1).atom;
    bool have_cat = false, have_lf = false;
    std::optional<std::pair<std::string, SlashDir>> raise_req;
    for (size_t i = 2; i < s.size(); ++i) {
      const SExpr& c = s.at(i);
      if (c.is_atom || c.size() < 1 || !c.at(0).is_atom)
        throw LexiconError("bad clause in entry for " + e.form);
      const std::string& key = c.at(0).atom;
      if (key == "cat") {
        e.item.cat = parse_cat(c.at(1).atom);
        have_cat = true;
      } else if (key == "lf") {
        e.item.lf = detail::lf_from_sexpr(c.at(1));
        have_lf = true;
      } else if (key == "raise") {
        if (c.size() != 3) throw LexiconError("raise clause needs target and direction");
        const std::string& d = c.at(2).atom;
        if (d != "fwd" && d != "bwd") throw LexiconError("raise direction must be fwd or bwd");
        raise_req = {c.at(1).atom, d == "fwd" ? SlashDir::Forward : SlashDir::Backward};
      } else if (key == "pre" || key == "add" || key == "del") {
        // handled after lf so binder names are known
      } else {
        throw LexiconError("unknown clause '" + key + "' in entry for " + e.form);
      }
    }
    if (!have_cat || !have_lf) throw LexiconError("entry for " + e.form + " needs cat and lf");
    std::set<std::string> binders = detail::lf_binders(e.item.lf);
    for (size_t i = 2; i < s.size(); ++i) {
      const SExpr& c = s.at(i);
      const std::string& key = c.at(0).atom;
      std::vector<Literal>* list = nullptr;
      if (key == "pre") list = &e.item.conds.pre;
      else if (key == "add") list = &e.item.conds.add;
      else if (key == "del") list = &e.item.conds.del;
      else continue;
      for (size_t j = 1; j < c.size(); ++j) list->push_back(literal_from_sexpr(c.at(j), binders));
    }
    lex.entries.push_back(e);
    if (raise_req) {
      LexEntry raised;
      raised.form = e.form;
      raised.item = type_raise(e.item, parse_cat(raise_req->first), raise_req->second);
      lex.entries.push_back(raised);
    }
  }
  return lex;
}

inline Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LexiconError("cannot open lexicon file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_lexicon(ss.str());
}

}  // namespace catseq
