#pragma once

// Plan conditions attached to derivation items: precondition / add / delete
// lists of predicate literals, plus a closed-world fact store they execute
// against. Execution is atomic: on failure the world is unchanged.

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "catseq/term.hpp"

namespace catseq {

struct Literal {
  bool negated = false;
  std::string pred;
  std::vector<TermPtr> args;
};

struct CondLists {
  std::vector<Literal> pre;
  std::vector<Literal> add;
  std::vector<Literal> del;
  bool empty() const { return pre.empty() && add.empty() && del.empty(); }
};

// Ground facts in insertion order (matching walks oldest-first).
struct WorldState {
  std::vector<Literal> facts;
};

// --- printing ---------------------------------------------------------------

inline std::string print_literal_args(const Literal& l) {
  std::ostringstream os;
  os << l.pred << "(";
  for (size_t i = 0; i < l.args.size(); ++i) {
    if (i) os << ",";
    os << print_term(l.args[i]);
  }
  os << ")";
  return os.str();
}

inline std::string print_literal(const Literal& l) {
  return (l.negated ? "not " : "") + print_literal_args(l);
}

inline std::string print_literals(const std::vector<Literal>& ls) {
  std::ostringstream os;
  for (size_t i = 0; i < ls.size(); ++i) {
    if (i) os << ", ";
    os << print_literal(ls[i]);
  }
  return os.str();
}

inline std::string print_conds(const CondLists& c) {
  std::ostringstream os;
  os << "pre: " << (c.pre.empty() ? "-" : print_literals(c.pre)) << "; ";
  os << "add: " << (c.add.empty() ? "-" : print_literals(c.add)) << "; ";
  os << "del: " << (c.del.empty() ? "-" : print_literals(c.del));
  return os.str();
}

// --- parsing ----------------------------------------------------------------

// A literal s-expr: (pred a1 a2), or (not (pred a1 a2)). Each argument is a
// term s-expr; a plain atom reads as a variable when it is in `binders` or
// starts with a capital letter, as a constant otherwise.
inline TermPtr literal_arg_from_sexpr(const SExpr& e, const std::set<std::string>& binders) {
  std::set<std::string> bound = binders;
  std::function<void(const SExpr&)> mark_caps = [&](const SExpr& s) {
    if (s.is_atom) {
      if (!s.atom.empty() && std::isupper(static_cast<unsigned char>(s.atom[0])))
        bound.insert(s.atom);
    } else {
      for (const auto& it : s.items) mark_caps(it);
    }
  };
  mark_caps(e);
  return term_from_sexpr(e, bound);
}

inline Literal literal_from_sexpr(const SExpr& e, const std::set<std::string>& binders) {
  if (e.is_atom) throw ParseError("expected literal list, got atom: " + e.atom);
  if (e.size() == 0) throw ParseError("empty literal");
  if (e.head_is("not")) {
    if (e.size() != 2) throw ParseError("expected (not (pred args...))");
    Literal l = literal_from_sexpr(e.at(1), binders);
    if (l.negated) throw ParseError("doubly negated literal");
    l.negated = true;
    return l;
  }
  if (!e.at(0).is_atom) throw ParseError("literal head must be a predicate name");
  Literal l;
  l.pred = e.at(0).atom;
  for (size_t i = 1; i < e.size(); ++i) l.args.push_back(literal_arg_from_sexpr(e.at(i), binders));
  return l;
}

// World files: one ground literal per line in `pred(a,b)` style, `#` comments.
inline WorldState parse_world(const std::string& text) {
  WorldState w;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    size_t a = line.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) continue;
    size_t b = line.find_last_not_of(" \t\r\n");
    std::string body = line.substr(a, b - a + 1);
    size_t open = body.find('(');
    if (open == std::string::npos || body.back() != ')')
      throw ParseError("expected pred(args) in world line: " + body);
    Literal l;
    l.pred = body.substr(0, open);
    if (l.pred.empty()) throw ParseError("missing predicate in world line: " + body);
    std::string argtext = body.substr(open + 1, body.size() - open - 2);
    std::string cur;
    auto flush = [&]() {
      size_t x = cur.find_first_not_of(" \t");
      if (x == std::string::npos) {
        cur.clear();
        return;
      }
      size_t y = cur.find_last_not_of(" \t");
      l.args.push_back(mk_const(cur.substr(x, y - x + 1)));
      cur.clear();
    };
    for (char c : argtext) {
      if (c == ',') flush();
      else cur += c;
    }
    if (!cur.empty()) flush();
    w.facts.push_back(l);
  }
  return w;
}

// --- variables, threading, merging ------------------------------------------

inline void collect_literal_vars(const Literal& l, std::set<std::string>& out) {
  for (const auto& a : l.args) collect_var_names(a, out);
}

inline std::set<std::string> cond_var_names(const CondLists& c) {
  std::set<std::string> out;
  for (const auto& l : c.pre) collect_literal_vars(l, out);
  for (const auto& l : c.add) collect_literal_vars(l, out);
  for (const auto& l : c.del) collect_literal_vars(l, out);
  return out;
}

inline Literal rename_literal(const Literal& l, const std::map<std::string, std::string>& m) {
  Literal out = l;
  for (auto& a : out.args) a = rename_vars(a, m);
  return out;
}

inline CondLists rename_conds(const CondLists& c, const std::map<std::string, std::string>& m) {
  CondLists out;
  for (const auto& l : c.pre) out.pre.push_back(rename_literal(l, m));
  for (const auto& l : c.add) out.add.push_back(rename_literal(l, m));
  for (const auto& l : c.del) out.del.push_back(rename_literal(l, m));
  return out;
}

// Substitutes derivation-time variable instantiations into condition
// arguments. Inserted values drop their leading binders (keeping the binder
// names free), so a predicate-valued argument contributes its body.
inline TermPtr thread_arg(const TermPtr& a, const std::map<std::string, TermPtr>& binding) {
  if (auto* v = as_var(a)) {
    auto it = binding.find(v->name);
    if (it != binding.end()) return strip_leading_abs(it->second);
  }
  if (as_var(a) || as_const(a)) {
    if (auto* c = as_const(a); c && c->mod_kind == ModKind::Var) {
      auto it = binding.find(c->modality);
      if (it != binding.end()) {
        TConst filled = fill_modality(*c, it->second);
        return std::make_shared<Term>(Term{filled});
      }
    }
    return a;
  }
  if (auto* ab = as_abs(a)) {
    std::map<std::string, TermPtr> inner = binding;
    inner.erase(ab->param);
    return mk_abs(ab->param, thread_arg(ab->body, inner));
  }
  auto* ap = as_app(a);
  return mk_app(thread_arg(ap->fn, binding), thread_arg(ap->arg, binding));
}

inline CondLists thread(const CondLists& c, const std::map<std::string, TermPtr>& binding) {
  CondLists out;
  auto apply = [&](const std::vector<Literal>& in, std::vector<Literal>& dst) {
    for (const auto& l : in) {
      Literal nl = l;
      for (auto& a : nl.args) a = thread_arg(a, binding);
      dst.push_back(nl);
    }
  };
  apply(c.pre, out.pre);
  apply(c.add, out.add);
  apply(c.del, out.del);
  return out;
}

inline bool literal_identical(const Literal& a, const Literal& b) {
  if (a.negated != b.negated || a.pred != b.pred || a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (print_term(a.args[i]) != print_term(b.args[i])) return false;
  return true;
}

// Concatenation with structural dedup, first occurrence kept.
inline CondLists merge(const CondLists& a, const CondLists& b) {
  CondLists out;
  auto push_unique = [](std::vector<Literal>& dst, const Literal& l) {
    for (const auto& e : dst)
      if (literal_identical(e, l)) return;
    dst.push_back(l);
  };
  auto absorb = [&](const CondLists& src) {
    for (const auto& l : src.pre) push_unique(out.pre, l);
    for (const auto& l : src.add) push_unique(out.add, l);
    for (const auto& l : src.del) push_unique(out.del, l);
  };
  absorb(a);
  absorb(b);
  return out;
}

// Canonical form for golden comparison: variables renamed v1, v2, ... in
// first-appearance order across pre, add, del.
inline CondLists canonical_conds(const CondLists& c) {
  std::map<std::string, std::string> m;
  int n = 0;
  auto visit_term = [&](const TermPtr& t) {
    std::function<void(const TermPtr&)> go = [&](const TermPtr& u) {
      if (auto* v = as_var(u)) {
        if (!m.count(v->name)) m[v->name] = "v" + std::to_string(++n);
      } else if (auto* cc = as_const(u)) {
        if (cc->mod_kind == ModKind::Var && !m.count(cc->modality))
          m[cc->modality] = "v" + std::to_string(++n);
      } else if (auto* a = as_abs(u)) {
        if (!m.count(a->param)) m[a->param] = "v" + std::to_string(++n);
        go(a->body);
      } else if (auto* ap = as_app(u)) {
        go(ap->fn);
        go(ap->arg);
      }
    };
    go(t);
  };
  for (const auto& ls : {c.pre, c.add, c.del})
    for (const auto& l : ls)
      for (const auto& a : l.args) visit_term(a);
  return rename_conds(c, m);
}

inline bool conds_equivalent(const CondLists& a, const CondLists& b) {
  return print_conds(canonical_conds(a)) == print_conds(canonical_conds(b));
}

// --- execution ---------------------------------------------------------------

struct PlanError {
  enum class Kind { PreconditionFailure, NotExecutable } kind;
  Literal literal;  // the failed precondition, for PreconditionFailure
  std::string message;
};

inline bool term_ground(const TermPtr& t) {
  if (as_var(t)) return false;
  if (auto* c = as_const(t)) return c->mod_kind != ModKind::Var;
  if (as_abs(t)) return free_vars(t).empty();
  auto* ap = as_app(t);
  return term_ground(ap->fn) && term_ground(ap->arg);
}

inline bool literal_ground(const Literal& l) {
  for (const auto& a : l.args)
    if (!term_ground(a)) return false;
  return true;
}

namespace detail {

// One-way match of a condition argument against a ground fact argument.
// Variables bind whole fact arguments; everything else must print equal.
inline bool match_arg(const TermPtr& pat, const TermPtr& fact,
                      std::map<std::string, TermPtr>& theta) {
  TermPtr p = pat;
  if (auto* v = as_var(p)) {
    auto it = theta.find(v->name);
    if (it == theta.end()) {
      theta[v->name] = fact;
      return true;
    }
    return print_term(it->second) == print_term(fact);
  }
  // Apply existing bindings before the literal comparison.
  for (const auto& [k, vv] : theta) p = substitute(p, k, vv);
  return print_term(p) == print_term(fact);
}

inline bool match_literal(const Literal& pat, const Literal& fact,
                          std::map<std::string, TermPtr>& theta) {
  if (pat.pred != fact.pred || pat.args.size() != fact.args.size()) return false;
  std::map<std::string, TermPtr> saved = theta;
  for (size_t i = 0; i < pat.args.size(); ++i) {
    if (!match_arg(pat.args[i], fact.args[i], theta)) {
      theta = saved;
      return false;
    }
  }
  return true;
}

// Satisfy positive preconditions in order, backtracking over fact choices.
// Negative preconditions require no fact to match under the current bindings
// (they never extend the bindings). On failure `deepest` records the furthest
// precondition ever reached, which backtracking must not overwrite.
struct PreFailure {
  size_t depth = 0;
  Literal literal;
  bool set = false;
};

inline void note_failure(PreFailure* deepest, size_t idx, const Literal& l) {
  if (deepest && (!deepest->set || idx >= deepest->depth)) {
    deepest->depth = idx;
    deepest->literal = l;
    deepest->set = true;
  }
}

inline bool satisfy_pre(const std::vector<Literal>& pre, size_t idx, const WorldState& world,
                        std::map<std::string, TermPtr>& theta, PreFailure* deepest) {
  if (idx == pre.size()) return true;
  const Literal& l = pre[idx];
  if (l.negated) {
    for (const auto& f : world.facts) {
      std::map<std::string, TermPtr> probe = theta;
      if (match_literal(l, f, probe)) {
        note_failure(deepest, idx, l);
        return false;
      }
    }
    return satisfy_pre(pre, idx + 1, world, theta, deepest);
  }
  for (const auto& f : world.facts) {
    std::map<std::string, TermPtr> trial = theta;
    if (match_literal(l, f, trial)) {
      if (satisfy_pre(pre, idx + 1, world, trial, deepest)) {
        theta = trial;
        return true;
      }
    }
  }
  note_failure(deepest, idx, l);
  return false;
}

inline Literal ground_literal(const Literal& l, const std::map<std::string, TermPtr>& theta) {
  Literal out = l;
  for (auto& a : out.args)
    for (const auto& [k, v] : theta) a = substitute(a, k, v);
  return out;
}

}  // namespace detail

// Ground add/del lists actually applied by a successful execution.
struct ExecEffects {
  std::vector<Literal> add, del;
};

// Executes the conditions against the world: preconditions must all be
// satisfiable together (positive ones by facts, negative ones by absence);
// then deletions apply, then additions, both under the matching bindings.
// Returns the error on failure, leaving the world untouched.
inline std::optional<PlanError> execute(const CondLists& conds, WorldState& world,
                                        ExecEffects* effects = nullptr) {
  std::map<std::string, TermPtr> theta;
  detail::PreFailure failed;
  if (!detail::satisfy_pre(conds.pre, 0, world, theta, &failed)) {
    return PlanError{PlanError::Kind::PreconditionFailure, failed.literal,
                     "PreconditionFailure: " + print_literal(failed.literal)};
  }
  WorldState next = world;
  ExecEffects eff;
  for (const auto& d : conds.del) {
    Literal g = detail::ground_literal(d, theta);
    eff.del.push_back(g);
    for (auto it = next.facts.begin(); it != next.facts.end();) {
      if (literal_identical(*it, g)) it = next.facts.erase(it);
      else ++it;
    }
  }
  for (const auto& a : conds.add) {
    Literal g = detail::ground_literal(a, theta);
    eff.add.push_back(g);
    bool present = false;
    for (const auto& f : next.facts) present = present || literal_identical(f, g);
    if (!present) next.facts.push_back(g);
  }
  world = std::move(next);
  if (effects) *effects = std::move(eff);
  return std::nullopt;
}

// Consistency check for a mid-derivation item: validates only the fully
// ground preconditions, never mutating the world.
inline std::optional<PlanError> check_partial(const CondLists& conds, const WorldState& world) {
  for (const auto& l : conds.pre) {
    if (!literal_ground(l)) continue;
    bool holds = false;
    for (const auto& f : world.facts) {
      std::map<std::string, TermPtr> theta;
      if (detail::match_literal(l, f, theta)) {
        holds = true;
        break;
      }
    }
    if (l.negated) holds = !holds;
    if (!holds) {
      return PlanError{PlanError::Kind::PreconditionFailure, l,
                       "PreconditionFailure: " + print_literal(l)};
    }
  }
  return std::nullopt;
}

}  // namespace catseq
