#pragma once

// Lambda terms with two constant annotations: an `offline` mark (printed as a
// `.0` suffix) and an optional event modality (printed as `^m`). Both are
// inert under reduction; the modality slot may hold a lambda-bound variable,
// in which case substituting that variable with an atom-headed term fills the
// slot with the atom.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "catseq/sexpr.hpp"

namespace catseq {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

enum class ModKind { None, Var, Atom };

struct TVar {
  std::string name;
};

struct TConst {
  std::string name;
  bool offline = false;
  ModKind mod_kind = ModKind::None;
  std::string modality;  // meaningful unless mod_kind == None
};

struct TAbs {
  std::string param;
  TermPtr body;
};

struct TApp {
  TermPtr fn;
  TermPtr arg;
};

struct Term {
  std::variant<TVar, TConst, TAbs, TApp> node;
};

class FuelExhausted : public std::runtime_error {
 public:
  FuelExhausted() : std::runtime_error("normalization step budget exhausted") {}
};

inline TermPtr mk_var(std::string name) {
  return std::make_shared<Term>(Term{TVar{std::move(name)}});
}
inline TermPtr mk_const(std::string name, bool offline = false, ModKind mk = ModKind::None,
                        std::string modality = "") {
  return std::make_shared<Term>(Term{TConst{std::move(name), offline, mk, std::move(modality)}});
}
inline TermPtr mk_abs(std::string param, TermPtr body) {
  return std::make_shared<Term>(Term{TAbs{std::move(param), std::move(body)}});
}
inline TermPtr mk_app(TermPtr fn, TermPtr arg) {
  return std::make_shared<Term>(Term{TApp{std::move(fn), std::move(arg)}});
}
inline TermPtr mk_app_spine(TermPtr head, const std::vector<TermPtr>& args) {
  TermPtr t = std::move(head);
  for (const auto& a : args) t = mk_app(t, a);
  return t;
}

inline const TVar* as_var(const TermPtr& t) { return std::get_if<TVar>(&t->node); }
inline const TConst* as_const(const TermPtr& t) { return std::get_if<TConst>(&t->node); }
inline const TAbs* as_abs(const TermPtr& t) { return std::get_if<TAbs>(&t->node); }
inline const TApp* as_app(const TermPtr& t) { return std::get_if<TApp>(&t->node); }
// Non-const overload so unqualified calls never resolve to std::as_const.
inline const TConst* as_const(TermPtr& t) { return std::get_if<TConst>(&t->node); }

// --- name collection -------------------------------------------------------

inline void collect_free_vars(const TermPtr& t, std::set<std::string>& bound,
                              std::set<std::string>& out) {
  if (auto* v = as_var(t)) {
    if (!bound.count(v->name)) out.insert(v->name);
  } else if (auto* c = as_const(t)) {
    if (c->mod_kind == ModKind::Var && !bound.count(c->modality)) out.insert(c->modality);
  } else if (auto* a = as_abs(t)) {
    bool fresh = bound.insert(a->param).second;
    collect_free_vars(a->body, bound, out);
    if (fresh) bound.erase(a->param);
  } else if (auto* ap = as_app(t)) {
    collect_free_vars(ap->fn, bound, out);
    collect_free_vars(ap->arg, bound, out);
  }
}

inline std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> bound, out;
  collect_free_vars(t, bound, out);
  return out;
}

// Every variable-like name in the term: binders, variable occurrences, and
// variable modality slots. Constant names are excluded.
inline void collect_var_names(const TermPtr& t, std::set<std::string>& out) {
  if (auto* v = as_var(t)) {
    out.insert(v->name);
  } else if (auto* c = as_const(t)) {
    if (c->mod_kind == ModKind::Var) out.insert(c->modality);
  } else if (auto* a = as_abs(t)) {
    out.insert(a->param);
    collect_var_names(a->body, out);
  } else if (auto* ap = as_app(t)) {
    collect_var_names(ap->fn, out);
    collect_var_names(ap->arg, out);
  }
}

inline std::set<std::string> var_names(const TermPtr& t) {
  std::set<std::string> out;
  collect_var_names(t, out);
  return out;
}

// Fresh name: base, then base2, base3, ... (stripping a trailing digit run
// from the base first so z2 freshens to z3, not z22).
inline std::string fresh_name(const std::string& base, const std::set<std::string>& used) {
  if (!used.count(base)) return base;
  std::string stem = base;
  while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
  if (stem.empty()) stem = base;
  for (int i = 2;; ++i) {
    std::string cand = stem + std::to_string(i);
    if (!used.count(cand)) return cand;
  }
}

// --- substitution ----------------------------------------------------------

// Head atom of an application spine, if any.
inline TermPtr spine_head(TermPtr t) {
  while (auto* ap = as_app(t)) t = ap->fn;
  return t;
}

// Fill a variable modality slot from the substituted value: an atom-headed
// value contributes its head name; anything else leaves the slot untouched.
inline TConst fill_modality(const TConst& c, const TermPtr& value) {
  TConst out = c;
  TermPtr head = spine_head(value);
  if (auto* hc = as_const(head)) {
    out.mod_kind = ModKind::Atom;
    out.modality = hc->name;
  } else if (auto* hv = as_var(head)) {
    out.mod_kind = ModKind::Var;
    out.modality = hv->name;
  }
  return out;
}

// Capture-avoiding substitution t[name := value].
inline TermPtr substitute(const TermPtr& t, const std::string& name, const TermPtr& value) {
  if (auto* v = as_var(t)) {
    return v->name == name ? value : t;
  }
  if (auto* c = as_const(t)) {
    if (c->mod_kind == ModKind::Var && c->modality == name) {
      return std::make_shared<Term>(Term{fill_modality(*c, value)});
    }
    return t;
  }
  if (auto* a = as_abs(t)) {
    if (a->param == name) return t;
    std::set<std::string> fv = free_vars(value);
    if (fv.count(a->param)) {
      std::set<std::string> used = var_names(t);
      used.insert(fv.begin(), fv.end());
      used.insert(name);
      std::string p = fresh_name(a->param, used);
      TermPtr body = substitute(a->body, a->param, mk_var(p));
      return mk_abs(p, substitute(body, name, value));
    }
    return mk_abs(a->param, substitute(a->body, name, value));
  }
  auto* ap = as_app(t);
  return mk_app(substitute(ap->fn, name, value), substitute(ap->arg, name, value));
}

// Wholesale renaming of variable-like names (binders, occurrences, variable
// modality slots). Callers must supply globally fresh targets; with that
// precondition the renaming is alpha-safe even under shadowing.
inline TermPtr rename_vars(const TermPtr& t, const std::map<std::string, std::string>& m) {
  if (auto* v = as_var(t)) {
    auto it = m.find(v->name);
    return it == m.end() ? t : mk_var(it->second);
  }
  if (auto* c = as_const(t)) {
    if (c->mod_kind == ModKind::Var) {
      auto it = m.find(c->modality);
      if (it != m.end()) {
        TConst out = *c;
        out.modality = it->second;
        return std::make_shared<Term>(Term{out});
      }
    }
    return t;
  }
  if (auto* a = as_abs(t)) {
    auto it = m.find(a->param);
    return mk_abs(it == m.end() ? a->param : it->second, rename_vars(a->body, m));
  }
  auto* ap = as_app(t);
  return mk_app(rename_vars(ap->fn, m), rename_vars(ap->arg, m));
}

// --- normalization ---------------------------------------------------------

// Record of binder -> argument for each beta contraction, in contraction
// order. Values are the arguments as they stood at contraction time.
struct BetaTrace {
  std::vector<std::pair<std::string, TermPtr>> steps;
};

constexpr int kDefaultFuel = 10000;

namespace detail {

inline TermPtr normalize_rec(const TermPtr& t, int& fuel, BetaTrace* trace) {
  if (as_var(t) || as_const(t)) return t;
  if (auto* a = as_abs(t)) {
    return mk_abs(a->param, normalize_rec(a->body, fuel, trace));
  }
  auto* ap = as_app(t);
  // Normal order: bring the function to weak head normal form first.
  TermPtr fn = ap->fn;
  if (!as_abs(fn)) fn = normalize_rec(fn, fuel, trace);
  if (auto* lam = as_abs(fn)) {
    if (--fuel < 0) throw FuelExhausted();
    if (trace) trace->steps.emplace_back(lam->param, ap->arg);
    return normalize_rec(substitute(lam->body, lam->param, ap->arg), fuel, trace);
  }
  return mk_app(fn, normalize_rec(ap->arg, fuel, trace));
}

}  // namespace detail

inline TermPtr normalize(const TermPtr& t, int fuel = kDefaultFuel, BetaTrace* trace = nullptr) {
  int budget = fuel;
  return detail::normalize_rec(t, budget, trace);
}

// --- alpha equivalence -----------------------------------------------------

namespace detail {

inline bool alpha_eq_rec(const TermPtr& a, const TermPtr& b, std::map<std::string, int>& la,
                         std::map<std::string, int>& lb, int depth) {
  auto lookup = [](const std::map<std::string, int>& env, const std::string& n) {
    auto it = env.find(n);
    return it == env.end() ? -1 : it->second;
  };
  if (auto* va = as_var(a)) {
    auto* vb = as_var(b);
    if (!vb) return false;
    int ia = lookup(la, va->name), ib = lookup(lb, vb->name);
    if (ia != ib) return false;
    return ia >= 0 || va->name == vb->name;
  }
  if (auto* ca = as_const(a)) {
    auto* cb = as_const(b);
    if (!cb) return false;
    if (ca->name != cb->name || ca->offline != cb->offline) return false;
    if (ca->mod_kind != cb->mod_kind) return false;
    if (ca->mod_kind == ModKind::Atom) return ca->modality == cb->modality;
    if (ca->mod_kind == ModKind::Var) {
      int ia = lookup(la, ca->modality), ib = lookup(lb, cb->modality);
      if (ia != ib) return false;
      return ia >= 0 || ca->modality == cb->modality;
    }
    return true;
  }
  if (auto* aa = as_abs(a)) {
    auto* ab = as_abs(b);
    if (!ab) return false;
    auto ra = la.find(aa->param) != la.end() ? std::optional<int>(la[aa->param]) : std::nullopt;
    auto rb = lb.find(ab->param) != lb.end() ? std::optional<int>(lb[ab->param]) : std::nullopt;
    la[aa->param] = depth;
    lb[ab->param] = depth;
    bool ok = alpha_eq_rec(aa->body, ab->body, la, lb, depth + 1);
    if (ra) la[aa->param] = *ra; else la.erase(aa->param);
    if (rb) lb[ab->param] = *rb; else lb.erase(ab->param);
    return ok;
  }
  auto* pa = as_app(a);
  auto* pb = as_app(b);
  if (!pa || !pb) return false;
  return alpha_eq_rec(pa->fn, pb->fn, la, lb, depth) &&
         alpha_eq_rec(pa->arg, pb->arg, la, lb, depth);
}

}  // namespace detail

inline bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  std::map<std::string, int> la, lb;
  return detail::alpha_eq_rec(a, b, la, lb, 0);
}

// --- display form ----------------------------------------------------------

// Floats lambda binders that sit in argument position out to the end of the
// top-level binder chain, the row-display convention for derivation output.
// Not meaning-preserving in general: display only, never fed back into
// derivation.
inline TermPtr display_lf(const TermPtr& t) {
  std::vector<std::string> binders;
  TermPtr body = t;
  while (auto* a = as_abs(body)) {
    binders.push_back(a->param);
    body = a->body;
  }
  std::set<std::string> used = var_names(t);
  // Repeatedly pull the leftmost abstraction found in argument position.
  std::function<TermPtr(const TermPtr&, bool&, std::string&)> pull =
      [&](const TermPtr& u, bool& did, std::string& pulled) -> TermPtr {
    if (did || as_var(u) || as_const(u)) return u;
    if (auto* a = as_abs(u)) {
      return mk_abs(a->param, pull(a->body, did, pulled));
    }
    auto* ap = as_app(u);
    TermPtr fn = pull(ap->fn, did, pulled);
    if (did) return mk_app(fn, ap->arg);
    if (auto* arg_abs = as_abs(ap->arg)) {
      did = true;
      std::string p = fresh_name(arg_abs->param, used);
      used.insert(p);
      pulled = p;
      TermPtr inner = p == arg_abs->param ? arg_abs->body
                                          : substitute(arg_abs->body, arg_abs->param, mk_var(p));
      return mk_app(ap->fn, inner);
    }
    return mk_app(fn, pull(ap->arg, did, pulled));
  };
  for (int guard = 0; guard < 64; ++guard) {
    bool did = false;
    std::string pulled;
    TermPtr next = pull(body, did, pulled);
    if (!did) break;
    body = next;
    binders.push_back(pulled);
  }
  TermPtr out = body;
  for (auto it = binders.rbegin(); it != binders.rend(); ++it) out = mk_abs(*it, out);
  return out;
}

// Strip leading binders, keeping their names free in the body.
inline TermPtr strip_leading_abs(TermPtr t) {
  while (auto* a = as_abs(t)) t = a->body;
  return t;
}

// --- printing --------------------------------------------------------------

inline std::string atom_text(const TConst& c) {
  std::string s = c.name;
  if (c.offline) s += ".0";
  if (c.mod_kind != ModKind::None) s += "^" + c.modality;
  return s;
}

namespace detail {

inline void print_term_rec(const TermPtr& t, std::ostream& os, bool fn_pos, bool arg_pos) {
  if (auto* v = as_var(t)) {
    os << v->name;
  } else if (auto* c = as_const(t)) {
    os << atom_text(*c);
  } else if (auto* a = as_abs(t)) {
    bool paren = fn_pos || arg_pos;
    if (paren) os << "(";
    os << "\\" << a->param << ".";
    print_term_rec(a->body, os, false, false);
    if (paren) os << ")";
  } else {
    auto* ap = as_app(t);
    bool paren = arg_pos;
    if (paren) os << "(";
    print_term_rec(ap->fn, os, true, false);
    os << " ";
    print_term_rec(ap->arg, os, false, true);
    if (paren) os << ")";
  }
}

}  // namespace detail

inline std::string print_term(const TermPtr& t) {
  std::ostringstream os;
  detail::print_term_rec(t, os, false, false);
  return os.str();
}

// Alpha-canonical rendering: binders renamed b1, b2, ... in traversal order.
inline std::string canonical_term(const TermPtr& t) {
  int counter = 0;
  std::function<TermPtr(const TermPtr&)> canon = [&](const TermPtr& u) -> TermPtr {
    if (as_var(u) || as_const(u)) return u;
    if (auto* a = as_abs(u)) {
      std::string p = "b" + std::to_string(++counter);
      return mk_abs(p, canon(substitute(a->body, a->param, mk_var(p))));
    }
    auto* ap = as_app(u);
    return mk_app(canon(ap->fn), canon(ap->arg));
  };
  return print_term(canon(t));
}

// --- parsing ---------------------------------------------------------------

// Atom sugar: `name`, `name.0` (offline), `name^m` (modality; also `name.0^m`).
// Whether the base and the modality are variables is decided by the binder
// environment at the use site.
inline TermPtr term_atom(const std::string& text, const std::set<std::string>& bound) {
  std::string base = text;
  std::string mod;
  bool offline = false;
  if (auto caret = base.find('^'); caret != std::string::npos) {
    mod = base.substr(caret + 1);
    base = base.substr(0, caret);
    if (mod.empty()) throw ParseError("empty modality in atom: " + text);
  }
  if (base.size() > 2 && base.compare(base.size() - 2, 2, ".0") == 0) {
    offline = true;
    base = base.substr(0, base.size() - 2);
  }
  if (base.empty()) throw ParseError("empty atom: " + text);
  if (mod.empty() && !offline && bound.count(base)) return mk_var(base);
  ModKind mk = ModKind::None;
  if (!mod.empty()) mk = bound.count(mod) ? ModKind::Var : ModKind::Atom;
  return mk_const(base, offline, mk, mod);
}

inline TermPtr term_from_sexpr(const SExpr& e, std::set<std::string>& bound) {
  if (e.is_atom) return term_atom(e.atom, bound);
  if (e.size() == 0) throw ParseError("empty list in term");
  if (e.head_is("lam")) {
    if (e.size() != 3 || !e.at(1).is_atom) throw ParseError("expected (lam name body)");
    const std::string& p = e.at(1).atom;
    bool fresh = bound.insert(p).second;
    TermPtr body = term_from_sexpr(e.at(2), bound);
    if (fresh) bound.erase(p);
    return mk_abs(p, body);
  }
  TermPtr t = term_from_sexpr(e.at(0), bound);
  for (size_t i = 1; i < e.size(); ++i) t = mk_app(t, term_from_sexpr(e.at(i), bound));
  return t;
}

inline TermPtr parse_term(const std::string& text) {
  std::set<std::string> bound;
  return term_from_sexpr(parse_sexpr(text), bound);
}

// Compact lambda notation used inside process files and CLI arguments:
// `\x.\y. f (g x) y`, application by juxtaposition, parentheses for grouping.
namespace detail {

class LambdaReader {
 public:
  LambdaReader(const std::string& text, std::set<std::string> bound)
      : text_(text), bound_(std::move(bound)) {}

  TermPtr read() {
    TermPtr t = read_term();
    skip_ws();
    if (pos_ < text_.size()) throw ParseError("trailing input in lambda text: " + text_);
    return t;
  }

 private:
  TermPtr read_term() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '\\') {
      ++pos_;
      std::string p = read_name();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != '.') throw ParseError("expected '.' after binder");
      ++pos_;
      bool fresh = bound_.insert(p).second;
      TermPtr body = read_term();
      if (fresh) bound_.erase(p);
      return mk_abs(p, body);
    }
    TermPtr t = read_atomic();
    for (;;) {
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] == ')') break;
      if (text_[pos_] == '\\') {
        t = mk_app(t, read_term());
        break;
      }
      t = mk_app(t, read_atomic());
    }
    return t;
  }

  TermPtr read_atomic() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of lambda text");
    if (text_[pos_] == '(') {
      ++pos_;
      TermPtr t = read_term();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')') throw ParseError("unbalanced '(' in lambda text");
      ++pos_;
      return t;
    }
    return term_atom(read_name(), bound_);
  }

  std::string read_name() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '\\' ||
          (c == '.' && !(pos_ + 1 < text_.size() && text_[pos_ + 1] == '0')))
        break;
      if (c == '.') {  // the ".0" offline suffix
        pos_ += 2;
        continue;
      }
      ++pos_;
    }
    if (start == pos_) throw ParseError("expected name in lambda text");
    return text_.substr(start, pos_ - start);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  const std::string& text_;
  std::set<std::string> bound_;
  size_t pos_ = 0;
};

}  // namespace detail

inline TermPtr parse_lambda(const std::string& text, std::set<std::string> bound = {}) {
  return detail::LambdaReader(text, std::move(bound)).read();
}

}  // namespace catseq
