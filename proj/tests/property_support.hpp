#pragma once

// Shared random-case generators for the property suites: lambda terms,
// applicative functions of a given arity, rule fixtures with their defining
// equations, and small pi-calculus processes with scrambled serializations.
// Used by both the Catch test suite and the acceptance gate.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <catseq/catseq.hpp>

namespace propkit {

using namespace catseq;

using Rng = std::mt19937;

inline int rnd(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
  return xs[static_cast<size_t>(rnd(rng, 0, static_cast<int>(xs.size()) - 1))];
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// --- random lambda terms ------------------------------------------------------

inline TermPtr random_term(Rng& rng, int depth, std::vector<std::string>& binders,
                           int& next_binder) {
  int kind = depth <= 0 ? rnd(rng, 0, 49) : rnd(rng, 0, 99);
  if (kind < 25) {
    static const std::vector<std::string> consts{"run", "see", "give", "mary", "plane"};
    std::string name = pick(rng, consts);
    if (chance(rng, 0.15)) return mk_const(name, true);
    if (chance(rng, 0.15)) return mk_const(name, false, ModKind::Atom, "qi");
    return mk_const(name);
  }
  if (kind < 50) {
    if (!binders.empty()) return mk_var(pick(rng, binders));
    return mk_const("idle");
  }
  if (kind < 75) {
    std::string b = "v" + std::to_string(next_binder++);
    binders.push_back(b);
    TermPtr body = random_term(rng, depth - 1, binders, next_binder);
    binders.pop_back();
    return mk_abs(b, body);
  }
  TermPtr fn = random_term(rng, depth - 1, binders, next_binder);
  TermPtr arg = random_term(rng, depth - 1, binders, next_binder);
  return mk_app(fn, arg);
}

// Applicative spine over the given scope: head constant applied to variables,
// constants, and occasional nested spines. Never diverges under reduction.
inline TermPtr random_spine(Rng& rng, const std::vector<std::string>& scope, int depth) {
  static const std::vector<std::string> heads{"act", "mix", "put", "top"};
  static const std::vector<std::string> consts{"k1", "k2", "k3"};
  TermPtr head = mk_const(pick(rng, heads));
  int nargs = rnd(rng, 0, 3);
  std::vector<TermPtr> args;
  for (int i = 0; i < nargs; ++i) {
    int c = rnd(rng, 0, 9);
    if (!scope.empty() && c < 5) args.push_back(mk_var(pick(rng, scope)));
    else if (c < 8 || depth <= 0) args.push_back(mk_const(pick(rng, consts)));
    else args.push_back(random_spine(rng, scope, depth - 1));
  }
  return mk_app_spine(head, args);
}

// Random function of the given arity: \u1...\un. spine.
inline TermPtr random_fn(Rng& rng, int arity) {
  std::vector<std::string> scope;
  for (int i = 1; i <= arity; ++i) scope.push_back("u" + std::to_string(i));
  TermPtr t = random_spine(rng, scope, 1);
  for (int i = arity; i >= 1; --i) t = mk_abs("u" + std::to_string(i), t);
  return t;
}

inline Item plain_item(const std::string& cat, TermPtr lf) {
  Item it;
  it.cat = parse_cat(cat);
  it.lf = std::move(lf);
  return it;
}

// --- rule fixtures with defining equations --------------------------------------

enum class Eq { Apply, Compose, Substitute, Subcompose, Intercalate };

struct RuleFixture {
  const char* id;
  const char* left_cat;
  const char* right_cat;
  const char* result_cat;
  bool fn_on_left;  // which item carries the main function f
  Eq eq;
};

inline const std::vector<RuleFixture>& rule_fixtures() {
  static const std::vector<RuleFixture> fx{
      {">", "A/B", "B", "A", true, Eq::Apply},
      {"<", "B", "A\\B", "A", false, Eq::Apply},
      {">B", "A/B", "B/C", "A/C", true, Eq::Compose},
      {">Bx", "A/B", "B\\C", "A\\C", true, Eq::Compose},
      {"<B", "B\\C", "A\\B", "A\\C", false, Eq::Compose},
      {"<Bx", "B/C", "A\\B", "A/C", false, Eq::Compose},
      {">S", "(A/B)/C", "B/C", "A/C", true, Eq::Substitute},
      {">Sx", "(A/B)\\C", "B\\C", "A\\C", true, Eq::Substitute},
      {"<S", "B\\C", "(A\\B)\\C", "A\\C", false, Eq::Substitute},
      {"<Sx", "B/C", "(A\\B)/C", "A/C", false, Eq::Substitute},
      {">D", "A/(B\\C)", "B/D", "A/(D\\C)", true, Eq::Subcompose},
      {"<D", "B\\D", "A\\(B/C)", "A\\(D/C)", false, Eq::Subcompose},
      {">Lff", "(A/B)/C", "B/D", "(A/C)/D", true, Eq::Intercalate},
      {">Lfb", "(A/B)/C", "B\\D", "(A/C)\\D", true, Eq::Intercalate},
      {">Lbf", "(A/B)\\C", "B/D", "(A\\C)/D", true, Eq::Intercalate},
      {">Lbb", "(A/B)\\C", "B\\D", "(A\\C)\\D", true, Eq::Intercalate},
      {"<Lfb", "B\\D", "(A\\B)/C", "(A/C)\\D", false, Eq::Intercalate},
      {"<Lbb", "B\\D", "(A\\B)\\C", "(A\\C)\\D", false, Eq::Intercalate},
      {"<Lbf", "B/D", "(A\\B)\\C", "(A\\C)/D", false, Eq::Intercalate},
      {"<Lff", "B/D", "(A\\B)/C", "(A/C)/D", false, Eq::Intercalate},
  };
  return fx;
}

inline int fn_arity(Eq eq) {
  switch (eq) {
    case Eq::Apply: return 1;
    case Eq::Compose: return 1;
    case Eq::Substitute: return 2;
    case Eq::Subcompose: return 1;
    case Eq::Intercalate: return 2;
  }
  return 1;
}

// Instantiates the rule's defining equation for the drawn f and g: `got` is
// the combined logical form applied to fresh arguments, `expect` the raw
// right-hand side. The two must normalize alpha-equal.
struct EquationPair {
  TermPtr got, expect;
};

inline EquationPair equation_for(Eq eq, const TermPtr& out_lf, const TermPtr& f, const TermPtr& g) {
  static const TermPtr x0 = mk_const("x0");
  static const TermPtr h0 = mk_const("h0");
  static const TermPtr w0 = mk_const("w0");
  static const TermPtr z0 = mk_const("z0");
  switch (eq) {
    case Eq::Apply:
      return {out_lf, mk_app(f, g)};
    case Eq::Compose:
      return {mk_app(out_lf, x0), mk_app(f, mk_app(g, x0))};
    case Eq::Substitute:
      return {mk_app(out_lf, x0), mk_app(mk_app(f, x0), mk_app(g, x0))};
    case Eq::Subcompose:
      return {mk_app(mk_app(out_lf, h0), x0), mk_app(f, mk_app(g, mk_app(h0, x0)))};
    case Eq::Intercalate:
      return {mk_app(mk_app(out_lf, w0), z0), mk_app(mk_app(f, z0), mk_app(g, w0))};
  }
  return {out_lf, out_lf};
}

// --- random processes -----------------------------------------------------------

struct RN {
  int kind = 0;  // 0 nil, 1 out, 2 in, 3 tau, 4 par, 5 sum, 6 nu
  std::string chan, name;
  std::vector<RN> kids;  // prefix continuation = kids[0] when present
};

inline RN random_proc(Rng& rng, int depth, bool allow_nu) {
  static const std::vector<std::string> chans{"a", "b", "c"};
  static const std::vector<std::string> payloads{"x", "y", "m"};
  int hi = depth <= 0 ? 3 : (allow_nu ? 6 : 5);
  RN n;
  n.kind = rnd(rng, 0, hi);
  switch (n.kind) {
    case 0:
      break;
    case 1:
    case 2:
      n.chan = pick(rng, chans);
      n.name = pick(rng, payloads);
      if (depth > 0 && chance(rng, 0.6)) n.kids.push_back(random_proc(rng, depth - 1, allow_nu));
      break;
    case 3:
      if (depth > 0 && chance(rng, 0.7)) n.kids.push_back(random_proc(rng, depth - 1, allow_nu));
      break;
    case 4:
    case 5: {
      int c = rnd(rng, 2, 3);
      for (int i = 0; i < c; ++i) n.kids.push_back(random_proc(rng, depth - 1, allow_nu));
      break;
    }
    case 6:
      n.name = pick(rng, chans);
      n.kids.push_back(random_proc(rng, depth - 1, allow_nu));
      break;
  }
  return n;
}

inline std::string serialize(const RN& n, Rng& rng, bool scramble);

inline std::string serialize_cont(const RN& n, Rng& rng, bool scramble) {
  if (n.kids.empty()) return scramble && chance(rng, 0.3) ? ".0" : "";
  return "." + serialize(n.kids[0], rng, scramble);
}

// Scrambled serialization reorders and rebrackets parallel/sum children and
// pads parallel compositions with inert nils; both spellings must denote
// structurally congruent processes.
inline std::string serialize(const RN& n, Rng& rng, bool scramble) {
  switch (n.kind) {
    case 0:
      return "0";
    case 1:
      return n.chan + "^<" + n.name + ">" + serialize_cont(n, rng, scramble);
    case 2:
      return n.chan + "(" + n.name + ")" + serialize_cont(n, rng, scramble);
    case 3:
      return "tau" + serialize_cont(n, rng, scramble);
    case 4:
    case 5: {
      std::string op = n.kind == 4 ? " | " : " + ";
      std::vector<std::string> parts;
      for (const auto& k : n.kids) parts.push_back(serialize(k, rng, scramble));
      if (scramble) {
        std::shuffle(parts.begin(), parts.end(), rng);
        if (n.kind == 4 && chance(rng, 0.4))
          parts.insert(parts.begin() + rnd(rng, 0, static_cast<int>(parts.size())), "0");
        if (parts.size() >= 3 && chance(rng, 0.5)) {
          std::string inner = "(" + parts[parts.size() - 2] + op + parts.back() + ")";
          parts.pop_back();
          parts.back() = inner;
        }
      }
      return "(" + join(parts, op) + ")";
    }
    default:
      return "nu " + n.name + " (" + serialize(n.kids[0], rng, scramble) + ")";
  }
}

inline std::set<std::string> successor_prints(const ProcPtr& p) {
  std::set<std::string> out;
  for (const auto& a : step(p)) out.insert(print_proc(a.next));
  return out;
}

}  // namespace propkit
