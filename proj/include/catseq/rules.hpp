#pragma once

// Combinatory rule schemas over category patterns, and the engine that
// combines two derivation items: unify categories, apply the rule's
// combinator to the logical forms, and thread condition lists through the
// beta-substitutions that the combination performs.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "catseq/category.hpp"
#include "catseq/strips.hpp"
#include "catseq/term.hpp"

namespace catseq {

// A derivation item: category, logical form, condition lists.
struct Item {
  CatPtr cat;
  TermPtr lf;
  CondLists conds;
};

struct RuleSchema {
  std::string id;       // display label, e.g. ">B"
  CatPtr left;          // pattern for the left item's category
  CatPtr right;         // pattern for the right item
  CatPtr result;        // pattern for the combined category
  TermPtr comb;         // combinator: takes left lf, then right lf
};

class RuleMismatch : public std::runtime_error {
 public:
  explicit RuleMismatch(const std::string& what) : std::runtime_error(what) {}
};
class NotAtomic : public std::runtime_error {
 public:
  NotAtomic() : std::runtime_error("type raising requires an atomic category") {}
};

// --- builtin rule inventory --------------------------------------------------
//
// Application:   >   X/Y  Y  => X          <   Y  X\Y  => X
// Composition:   >B  X/Y  Y/Z  => X/Z      (Bx crossed; mirrored for <)
// Substitution:  >S  (X/Y)/Z  Y/Z => X/Z   (Sx crossed; mirrored for <)
// Subcompose:    >D  X/(Y\Z)  Y/W => X/(W\Z)  (operational: D f g h x = f(g(h x)))
// Intercalate:   L family: f = (X|Y)|Z two-argument functor whose Y-slash
//                points at g = Y|W; result (X|Z)|W takes W outermost.
//                Suffix letters give f's outer slash and g's slash, so
//                >Lff : (X/Y)/Z  Y/W => (X/Z)/W  (harmonic)
//                <Lfb : Y\W  (X\Y)/Z => (X/Z)\W  (harmonic backward)
//                and the crossed ones are >Lfb, >Lbb, <Lbf, <Lff.

namespace detail {

inline RuleSchema mk_rule(std::string id, const char* l, const char* r, const char* res,
                          const char* comb) {
  return RuleSchema{std::move(id), parse_cat_schema(l), parse_cat_schema(r),
                    parse_cat_schema(res), parse_lambda(comb)};
}

}  // namespace detail

inline const std::vector<RuleSchema>& builtin_rules() {
  static const std::vector<RuleSchema> rules = {
      detail::mk_rule(">", "X/Y", "Y", "X", "\\f.\\a.f a"),
      detail::mk_rule("<", "Y", "X\\Y", "X", "\\a.\\f.f a"),
      detail::mk_rule(">B", "X/Y", "Y/Z", "X/Z", "\\f.\\g.\\x.f (g x)"),
      detail::mk_rule(">Bx", "X/Y", "Y\\Z", "X\\Z", "\\f.\\g.\\x.f (g x)"),
      detail::mk_rule("<B", "Y\\Z", "X\\Y", "X\\Z", "\\g.\\f.\\x.f (g x)"),
      detail::mk_rule("<Bx", "Y/Z", "X\\Y", "X/Z", "\\g.\\f.\\x.f (g x)"),
      detail::mk_rule(">S", "(X/Y)/Z", "Y/Z", "X/Z", "\\f.\\g.\\x.f x (g x)"),
      detail::mk_rule(">Sx", "(X/Y)\\Z", "Y\\Z", "X\\Z", "\\f.\\g.\\x.f x (g x)"),
      detail::mk_rule("<S", "Y\\Z", "(X\\Y)\\Z", "X\\Z", "\\g.\\f.\\x.f x (g x)"),
      detail::mk_rule("<Sx", "Y/Z", "(X\\Y)/Z", "X/Z", "\\g.\\f.\\x.f x (g x)"),
      detail::mk_rule(">D", "X/(Y\\Z)", "Y/W", "X/(W\\Z)", "\\f.\\g.\\h.\\x.f (g (h x))"),
      detail::mk_rule("<D", "Y\\W", "X\\(Y/Z)", "X\\(W/Z)", "\\g.\\f.\\h.\\x.f (g (h x))"),
      detail::mk_rule(">Lff", "(X/Y)/Z", "Y/W", "(X/Z)/W", "\\f.\\g.\\x.\\y.f y (g x)"),
      detail::mk_rule(">Lfb", "(X/Y)/Z", "Y\\W", "(X/Z)\\W", "\\f.\\g.\\x.\\y.f y (g x)"),
      detail::mk_rule(">Lbf", "(X/Y)\\Z", "Y/W", "(X\\Z)/W", "\\f.\\g.\\x.\\y.f y (g x)"),
      detail::mk_rule(">Lbb", "(X/Y)\\Z", "Y\\W", "(X\\Z)\\W", "\\f.\\g.\\x.\\y.f y (g x)"),
      detail::mk_rule("<Lfb", "Y\\W", "(X\\Y)/Z", "(X/Z)\\W", "\\g.\\f.\\x.\\y.f y (g x)"),
      detail::mk_rule("<Lbb", "Y\\W", "(X\\Y)\\Z", "(X\\Z)\\W", "\\g.\\f.\\x.\\y.f y (g x)"),
      detail::mk_rule("<Lbf", "Y/W", "(X\\Y)\\Z", "(X\\Z)/W", "\\g.\\f.\\x.\\y.f y (g x)"),
      detail::mk_rule("<Lff", "Y/W", "(X\\Y)/Z", "(X/Z)/W", "\\g.\\f.\\x.\\y.f y (g x)"),
  };
  return rules;
}

inline const RuleSchema& rule_by_id(const std::string& id) {
  for (const auto& r : builtin_rules())
    if (r.id == id) return r;
  throw RuleMismatch("unknown rule id: " + id);
}

struct RuleConfig {
  std::vector<RuleSchema> rules;
  bool syntactic_raise = false;
  size_t max_tokens = 20;
  size_t max_items = 10000;
};

inline RuleConfig preset(const std::string& name) {
  auto mk = [](std::initializer_list<const char*> ids, bool raise) {
    RuleConfig c;
    for (const char* id : ids) c.rules.push_back(rule_by_id(id));
    c.syntactic_raise = raise;
    return c;
  };
  if (name == "language")
    return mk({">", "<", ">B", "<B", ">Bx", "<Bx", "<Sx", "<Lfb", ">Lbb"}, false);
  if (name == "planning")
    return mk({">", "<", ">B", "<B", ">Bx", "<Bx", ">S", "<S", ">Sx", "<Sx", ">D", ">Lbf", ">Lbb"},
              true);
  if (name == "invariant")
    return mk({">", "<", ">B", "<B", ">Bx", "<Bx", ">S", "<S", ">Sx", "<Sx"}, false);
  if (name == "invariant_crossed_L")
    return mk({">", "<", ">B", "<B", ">Bx", "<Bx", ">S", "<S", ">Sx", "<Sx", ">Lfb", ">Lbb",
               "<Lbf", "<Lff"},
              false);
  throw RuleMismatch("unknown preset: " + name);
}

// --- combination -------------------------------------------------------------

namespace detail {

inline std::set<std::string> item_var_names(const Item& it) {
  std::set<std::string> names = var_names(it.lf);
  std::set<std::string> conds = cond_var_names(it.conds);
  names.insert(conds.begin(), conds.end());
  return names;
}

// Renames every variable-like name of `it` that clashes with `taken` to a
// fresh name, keeping LF and condition variables linked.
inline Item rename_apart(const Item& it, std::set<std::string>& taken) {
  std::set<std::string> own = item_var_names(it);
  std::map<std::string, std::string> ren;
  std::set<std::string> used = taken;
  used.insert(own.begin(), own.end());
  for (const auto& n : own) {
    if (taken.count(n)) {
      std::string f = fresh_name(n, used);
      used.insert(f);
      ren[n] = f;
    }
  }
  taken.insert(used.begin(), used.end());
  if (ren.empty()) return it;
  Item out = it;
  out.lf = rename_vars(it.lf, ren);
  out.conds = rename_conds(it.conds, ren);
  return out;
}

inline TermPtr freshen_binders(const TermPtr& comb, const std::set<std::string>& taken) {
  std::set<std::string> own = var_names(comb);
  std::map<std::string, std::string> ren;
  std::set<std::string> used = taken;
  used.insert(own.begin(), own.end());
  for (const auto& n : own) {
    if (taken.count(n)) {
      std::string f = fresh_name(n, used);
      used.insert(f);
      ren[n] = f;
    }
  }
  return ren.empty() ? comb : rename_vars(comb, ren);
}

// Substitution threading: σ values have their leading binders stripped (the
// binder names stay free in the body) and σ applied again underneath, bounded.
inline TermPtr close_value(const TermPtr& v, const std::map<std::string, TermPtr>& sigma,
                           int depth);

inline TermPtr thread_deep(const TermPtr& t, const std::map<std::string, TermPtr>& sigma,
                           int depth) {
  if (depth <= 0) return t;
  if (auto* v = as_var(t)) {
    auto it = sigma.find(v->name);
    if (it != sigma.end()) return close_value(it->second, sigma, depth - 1);
    return t;
  }
  if (auto* c = as_const(t)) {
    if (c->mod_kind == ModKind::Var) {
      auto it = sigma.find(c->modality);
      if (it != sigma.end())
        return std::make_shared<Term>(Term{fill_modality(*c, it->second)});
    }
    return t;
  }
  if (auto* a = as_abs(t)) {
    std::map<std::string, TermPtr> inner = sigma;
    inner.erase(a->param);
    return mk_abs(a->param, thread_deep(a->body, inner, depth));
  }
  auto* ap = as_app(t);
  return mk_app(thread_deep(ap->fn, sigma, depth), thread_deep(ap->arg, sigma, depth));
}

inline TermPtr close_value(const TermPtr& v, const std::map<std::string, TermPtr>& sigma,
                           int depth) {
  return thread_deep(strip_leading_abs(v), sigma, depth);
}

inline Literal thread_literal(const Literal& l, const std::map<std::string, TermPtr>& sigma) {
  Literal out = l;
  for (auto& a : out.args) a = thread_deep(a, sigma, 6);
  return out;
}

inline CondLists thread_conds(const CondLists& c, const std::map<std::string, TermPtr>& sigma) {
  CondLists out;
  for (const auto& l : c.pre) out.pre.push_back(thread_literal(l, sigma));
  for (const auto& l : c.add) out.add.push_back(thread_literal(l, sigma));
  for (const auto& l : c.del) out.del.push_back(thread_literal(l, sigma));
  return out;
}

}  // namespace detail

// Combines two adjacent items under a rule schema. Returns nothing when the
// categories do not fit the schema. Condition lists of both sides are pushed
// through the substitutions performed while normalizing the combined LF, then
// merged left-to-right.
inline std::optional<Item> combine(const Item& left, const Item& right, const RuleSchema& rule,
                                   int fuel = kDefaultFuel) {
  CatBindings b;
  if (!unify(left.cat, rule.left, b)) return std::nullopt;
  if (!unify(right.cat, rule.right, b)) return std::nullopt;
  CatPtr result_cat = instantiate(rule.result, b);

  std::set<std::string> taken = detail::item_var_names(left);
  Item r = detail::rename_apart(right, taken);
  TermPtr comb = detail::freshen_binders(rule.comb, taken);

  BetaTrace trace;
  TermPtr lf = normalize(mk_app(mk_app(comb, left.lf), r.lf), fuel, &trace);

  // First contraction wins when a binder fires more than once (duplicated
  // arguments keep their first instantiation in the condition lists).
  std::map<std::string, TermPtr> sigma;
  for (const auto& [binder, value] : trace.steps) {
    if (sigma.count(binder)) continue;
    sigma[binder] = normalize(value, fuel);
  }
  // A recorded argument may mention a binder that only contracted later (the
  // function body normalizes before its outer argument arrives), so rewrite
  // the values against sigma itself until stable.
  for (int pass = 0; pass < 8; ++pass) {
    bool changed = false;
    for (auto& [binder, value] : sigma) {
      TermPtr next = value;
      for (const auto& [k, v] : sigma) {
        if (k == binder) continue;
        next = substitute(next, k, v);
      }
      next = normalize(next, fuel);
      if (!alpha_eq(next, value)) {
        value = next;
        changed = true;
      }
    }
    if (!changed) break;
  }

  Item out;
  out.cat = result_cat;
  out.lf = lf;
  out.conds = merge(detail::thread_conds(left.conds, sigma), detail::thread_conds(r.conds, sigma));
  return out;
}

inline std::optional<Item> combine(const Item& left, const Item& right, const std::string& rule_id,
                                   int fuel = kDefaultFuel) {
  return combine(left, right, rule_by_id(rule_id), fuel);
}

// Type raising: an atomic item T : a becomes X/(X\T) : λp.p a (forward) or
// X\(X/T) : λp.p a (backward), X given by `target`. Conditions are unchanged.
inline Item type_raise(const Item& item, const CatPtr& target, SlashDir direction) {
  if (!is_atomic(item.cat)) throw NotAtomic();
  CatPtr raised;
  if (direction == SlashDir::Forward)
    raised = mk_slash(target, SlashDir::Forward, mk_slash(target, SlashDir::Backward, item.cat));
  else
    raised = mk_slash(target, SlashDir::Backward, mk_slash(target, SlashDir::Forward, item.cat));
  std::set<std::string> used = var_names(item.lf);
  std::string p = fresh_name("p", used);
  Item out;
  out.cat = raised;
  out.lf = mk_abs(p, mk_app(mk_var(p), item.lf));
  out.conds = item.conds;
  return out;
}

}  // namespace catseq
