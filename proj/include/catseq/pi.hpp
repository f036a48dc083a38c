#pragma once

// A small pi-calculus interpreter with lambda terms embedded at Ground
// leaves: name-passing communication, scope extrusion, indexed replication,
// guarded choice, a world-predicate ternary, trace generation under
// exhaustive or seeded schedulers, an asynchrony (terminal-sender) check, and
// a syntactic stance classifier.
//
// Surface syntax:
//   x(y).P        input on x binding y
//   x^<y>.P       output name y on x
//   x^<[T]>.P     output lambda term T on x
//   tau.P         silent step
//   [T].P         ground computation (terminal record), cont optional
//   cond (L) (P) (Q)   world-predicate ternary
//   P | Q         parallel          P + Q   choice (binds loosest)
//   nu x (P)      restriction       !P  and  !{i}P   replication
//   0             inert process

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "catseq/strips.hpp"
#include "catseq/term.hpp"

namespace catseq {

class PiError : public std::runtime_error {
 public:
  explicit PiError(const std::string& what) : std::runtime_error(what) {}
};

struct Process;
using ProcPtr = std::shared_ptr<const Process>;

// Message payload: a plain name, or an embedded lambda term.
struct Msg {
  bool is_term = false;
  std::string name;
  TermPtr term;
};

struct PNil {};
struct PInput {
  std::string chan, bind;
  ProcPtr cont;
};
struct POutput {
  std::string chan;
  Msg msg;
  ProcPtr cont;
};
struct PTau {
  ProcPtr cont;
};
struct PSum {
  std::vector<ProcPtr> alts;
};
struct PPar {
  std::vector<ProcPtr> parts;
};
struct PRestrict {
  std::string name;
  ProcPtr body;
};
struct PRepl {
  ProcPtr body;
  std::string index;  // empty = plain replication
  int epoch = 1;
};
struct PGround {
  TermPtr term;
  std::vector<Literal> conds;  // optional plan-world linkage
  ProcPtr cont;
};
struct PCond {
  Literal pred;
  ProcPtr then_p, else_p;
};

struct Process {
  std::variant<PNil, PInput, POutput, PTau, PSum, PPar, PRestrict, PRepl, PGround, PCond> node;
};

inline ProcPtr mk_proc(Process p) { return std::make_shared<Process>(std::move(p)); }
inline ProcPtr pi_nil() {
  static ProcPtr n = mk_proc(Process{PNil{}});
  return n;
}
inline ProcPtr pi_input(std::string c, std::string b, ProcPtr k) {
  return mk_proc(Process{PInput{std::move(c), std::move(b), std::move(k)}});
}
inline ProcPtr pi_output(std::string c, Msg m, ProcPtr k) {
  return mk_proc(Process{POutput{std::move(c), std::move(m), std::move(k)}});
}
inline ProcPtr pi_out_name(std::string c, std::string n, ProcPtr k) {
  return pi_output(std::move(c), Msg{false, std::move(n), nullptr}, std::move(k));
}
inline ProcPtr pi_tau(ProcPtr k) { return mk_proc(Process{PTau{std::move(k)}}); }
inline ProcPtr pi_sum(std::vector<ProcPtr> alts) { return mk_proc(Process{PSum{std::move(alts)}}); }
inline ProcPtr pi_par(std::vector<ProcPtr> parts) {
  return mk_proc(Process{PPar{std::move(parts)}});
}
inline ProcPtr pi_par(ProcPtr a, ProcPtr b) { return pi_par(std::vector<ProcPtr>{a, b}); }
inline ProcPtr pi_restrict(std::string n, ProcPtr b) {
  return mk_proc(Process{PRestrict{std::move(n), std::move(b)}});
}
inline ProcPtr pi_repl(ProcPtr b, std::string index = "", int epoch = 1) {
  return mk_proc(Process{PRepl{std::move(b), std::move(index), epoch}});
}
inline ProcPtr pi_ground(TermPtr t, ProcPtr k = nullptr, std::vector<Literal> conds = {}) {
  return mk_proc(Process{PGround{std::move(t), std::move(conds), k ? k : pi_nil()}});
}
inline ProcPtr pi_cond(Literal l, ProcPtr t, ProcPtr e) {
  return mk_proc(Process{PCond{std::move(l), std::move(t), std::move(e)}});
}

template <class T>
const T* pi_as(const ProcPtr& p) {
  return std::get_if<T>(&p->node);
}

// --- printing ----------------------------------------------------------------

inline std::string print_proc(const ProcPtr& p);

namespace pidetail {

inline std::string print_msg(const Msg& m) {
  if (m.is_term) return "[" + print_term(m.term) + "]";
  return m.name;
}

inline std::string cont_suffix(const ProcPtr& k) {
  if (pi_as<PNil>(k)) return "";
  return "." + print_proc(k);
}

}  // namespace pidetail

inline std::string print_proc(const ProcPtr& p) {
  using namespace pidetail;
  if (pi_as<PNil>(p)) return "0";
  if (auto* i = pi_as<PInput>(p)) return i->chan + "(" + i->bind + ")" + cont_suffix(i->cont);
  if (auto* o = pi_as<POutput>(p))
    return o->chan + "^<" + print_msg(o->msg) + ">" + cont_suffix(o->cont);
  if (auto* t = pi_as<PTau>(p)) return "tau" + cont_suffix(t->cont);
  if (auto* g = pi_as<PGround>(p)) {
    std::string s = "[" + print_term(g->term) + "]";
    for (const auto& l : g->conds) s += "{" + print_literal(l) + "}";
    return s + cont_suffix(g->cont);
  }
  if (auto* s = pi_as<PSum>(p)) {
    std::string out = "(";
    for (size_t i = 0; i < s->alts.size(); ++i) {
      if (i) out += " + ";
      out += print_proc(s->alts[i]);
    }
    return out + ")";
  }
  if (auto* par = pi_as<PPar>(p)) {
    std::string out = "(";
    for (size_t i = 0; i < par->parts.size(); ++i) {
      if (i) out += " | ";
      out += print_proc(par->parts[i]);
    }
    return out + ")";
  }
  if (auto* r = pi_as<PRestrict>(p)) return "nu " + r->name + " (" + print_proc(r->body) + ")";
  if (auto* rp = pi_as<PRepl>(p)) {
    std::string head = "!";
    if (!rp->index.empty())
      head += "{" + rp->index + (rp->epoch > 1 ? ":" + std::to_string(rp->epoch) : "") + "}";
    return head + "(" + print_proc(rp->body) + ")";
  }
  auto* c = pi_as<PCond>(p);
  return "cond (" + print_literal(c->pred) + ") (" + print_proc(c->then_p) + ") (" +
         print_proc(c->else_p) + ")";
}

// --- names -------------------------------------------------------------------

namespace pidetail {

inline void term_names(const TermPtr& t, std::set<std::string>& out) {
  auto names = var_names(t);
  out.insert(names.begin(), names.end());
}

inline void literal_names(const Literal& l, std::set<std::string>& out) {
  for (const auto& a : l.args) term_names(a, out);
}

// Every name occurring anywhere (bound or free); used for freshening.
inline void all_names(const ProcPtr& p, std::set<std::string>& out) {
  if (pi_as<PNil>(p)) return;
  if (auto* i = pi_as<PInput>(p)) {
    out.insert(i->chan);
    out.insert(i->bind);
    all_names(i->cont, out);
    return;
  }
  if (auto* o = pi_as<POutput>(p)) {
    out.insert(o->chan);
    if (o->msg.is_term) term_names(o->msg.term, out);
    else out.insert(o->msg.name);
    all_names(o->cont, out);
    return;
  }
  if (auto* t = pi_as<PTau>(p)) return all_names(t->cont, out);
  if (auto* g = pi_as<PGround>(p)) {
    term_names(g->term, out);
    for (const auto& l : g->conds) literal_names(l, out);
    all_names(g->cont, out);
    return;
  }
  if (auto* s = pi_as<PSum>(p)) {
    for (const auto& a : s->alts) all_names(a, out);
    return;
  }
  if (auto* par = pi_as<PPar>(p)) {
    for (const auto& x : par->parts) all_names(x, out);
    return;
  }
  if (auto* r = pi_as<PRestrict>(p)) {
    out.insert(r->name);
    all_names(r->body, out);
    return;
  }
  if (auto* rp = pi_as<PRepl>(p)) return all_names(rp->body, out);
  auto* c = pi_as<PCond>(p);
  literal_names(c->pred, out);
  all_names(c->then_p, out);
  all_names(c->else_p, out);
}

inline void free_names(const ProcPtr& p, std::set<std::string>& bound, std::set<std::string>& out) {
  auto note = [&](const std::string& n) {
    if (!bound.count(n)) out.insert(n);
  };
  auto note_term = [&](const TermPtr& t) {
    std::set<std::string> names;
    term_names(t, names);
    for (const auto& n : names) note(n);
  };
  if (pi_as<PNil>(p)) return;
  if (auto* i = pi_as<PInput>(p)) {
    note(i->chan);
    bool added = bound.insert(i->bind).second;
    free_names(i->cont, bound, out);
    if (added) bound.erase(i->bind);
    return;
  }
  if (auto* o = pi_as<POutput>(p)) {
    note(o->chan);
    if (o->msg.is_term) note_term(o->msg.term);
    else note(o->msg.name);
    free_names(o->cont, bound, out);
    return;
  }
  if (auto* t = pi_as<PTau>(p)) return free_names(t->cont, bound, out);
  if (auto* g = pi_as<PGround>(p)) {
    note_term(g->term);
    for (const auto& l : g->conds)
      for (const auto& a : l.args) note_term(a);
    free_names(g->cont, bound, out);
    return;
  }
  if (auto* s = pi_as<PSum>(p)) {
    for (const auto& a : s->alts) free_names(a, bound, out);
    return;
  }
  if (auto* par = pi_as<PPar>(p)) {
    for (const auto& x : par->parts) free_names(x, bound, out);
    return;
  }
  if (auto* r = pi_as<PRestrict>(p)) {
    bool added = bound.insert(r->name).second;
    free_names(r->body, bound, out);
    if (added) bound.erase(r->name);
    return;
  }
  if (auto* rp = pi_as<PRepl>(p)) return free_names(rp->body, bound, out);
  auto* c = pi_as<PCond>(p);
  for (const auto& a : c->pred.args) note_term(a);
  free_names(c->then_p, bound, out);
  free_names(c->else_p, bound, out);
}

}  // namespace pidetail

inline std::set<std::string> free_names(const ProcPtr& p) {
  std::set<std::string> bound, out;
  pidetail::free_names(p, bound, out);
  return out;
}
inline std::set<std::string> all_names(const ProcPtr& p) {
  std::set<std::string> out;
  pidetail::all_names(p, out);
  return out;
}

// --- substitution ------------------------------------------------------------

namespace pidetail {

// Replaces free Var/Const leaves called `y` inside a lambda term.
inline TermPtr term_subst_name(const TermPtr& t, const std::string& y, const TermPtr& repl) {
  if (auto* v = as_var(t)) return v->name == y ? repl : t;
  if (auto* c = as_const(t)) {
    if (c->name == y) return repl;
    if (c->mod_kind == ModKind::Var && c->modality == y)
      return std::make_shared<Term>(Term{fill_modality(*c, repl)});
    return t;
  }
  if (auto* a = as_abs(t)) {
    if (a->param == y) return t;
    std::set<std::string> rf = var_names(repl);
    if (rf.count(a->param)) {
      std::set<std::string> used = var_names(t);
      used.insert(rf.begin(), rf.end());
      std::string p2 = fresh_name(a->param, used);
      TermPtr body = substitute(a->body, a->param, mk_var(p2));
      return mk_abs(p2, term_subst_name(body, y, repl));
    }
    return mk_abs(a->param, term_subst_name(a->body, y, repl));
  }
  auto* ap = as_app(t);
  return mk_app(term_subst_name(ap->fn, y, repl), term_subst_name(ap->arg, y, repl));
}

inline Literal literal_subst_name(const Literal& l, const std::string& y, const TermPtr& repl) {
  Literal out = l;
  for (auto& a : out.args) a = term_subst_name(a, y, repl);
  return out;
}

struct Subst {
  std::string y;  // name being replaced
  Msg repl;       // replacement: name or term

  std::string repl_name() const {
    if (repl.is_term) throw PiError("a lambda term cannot be used as a channel name");
    return repl.name;
  }
  TermPtr repl_term() const {
    return repl.is_term ? repl.term : mk_const(repl.name);
  }
  std::set<std::string> repl_free() const {
    if (repl.is_term) return var_names(repl.term);
    return {repl.name};
  }
};

inline ProcPtr subst(const ProcPtr& p, const Subst& s);

inline ProcPtr subst_under_binder(const std::string& binder, const ProcPtr& body, const Subst& s,
                                  std::string& binder_out) {
  binder_out = binder;
  if (binder == s.y) return body;  // shadowed: stop
  std::set<std::string> rf = s.repl_free();
  ProcPtr b = body;
  if (rf.count(binder)) {
    std::set<std::string> used = all_names(body);
    used.insert(rf.begin(), rf.end());
    binder_out = fresh_name(binder, used);
    b = subst(body, Subst{binder, Msg{false, binder_out, nullptr}});
  }
  return subst(b, s);
}

inline ProcPtr subst(const ProcPtr& p, const Subst& s) {
  if (pi_as<PNil>(p)) return p;
  if (auto* i = pi_as<PInput>(p)) {
    std::string chan = i->chan == s.y ? s.repl_name() : i->chan;
    std::string b2;
    ProcPtr body = i->bind == s.y ? i->cont : subst_under_binder(i->bind, i->cont, s, b2);
    if (i->bind == s.y) b2 = i->bind;
    return pi_input(chan, b2, body);
  }
  if (auto* o = pi_as<POutput>(p)) {
    std::string chan = o->chan == s.y ? s.repl_name() : o->chan;
    Msg m = o->msg;
    if (m.is_term) m.term = term_subst_name(m.term, s.y, s.repl_term());
    else if (m.name == s.y) m = s.repl;
    return pi_output(chan, m, subst(o->cont, s));
  }
  if (auto* t = pi_as<PTau>(p)) return pi_tau(subst(t->cont, s));
  if (auto* g = pi_as<PGround>(p)) {
    std::vector<Literal> conds;
    for (const auto& l : g->conds) conds.push_back(literal_subst_name(l, s.y, s.repl_term()));
    return pi_ground(term_subst_name(g->term, s.y, s.repl_term()), subst(g->cont, s),
                     std::move(conds));
  }
  if (auto* sm = pi_as<PSum>(p)) {
    std::vector<ProcPtr> alts;
    for (const auto& a : sm->alts) alts.push_back(subst(a, s));
    return pi_sum(std::move(alts));
  }
  if (auto* par = pi_as<PPar>(p)) {
    std::vector<ProcPtr> parts;
    for (const auto& x : par->parts) parts.push_back(subst(x, s));
    return pi_par(std::move(parts));
  }
  if (auto* r = pi_as<PRestrict>(p)) {
    if (r->name == s.y) return p;
    std::string n2;
    ProcPtr body = subst_under_binder(r->name, r->body, s, n2);
    return pi_restrict(n2, body);
  }
  if (auto* rp = pi_as<PRepl>(p)) return pi_repl(subst(rp->body, s), rp->index, rp->epoch);
  auto* c = pi_as<PCond>(p);
  return pi_cond(literal_subst_name(c->pred, s.y, s.repl_term()), subst(c->then_p, s),
                 subst(c->else_p, s));
}

}  // namespace pidetail

inline ProcPtr subst_name(const ProcPtr& p, const std::string& y, const std::string& n) {
  return pidetail::subst(p, pidetail::Subst{y, Msg{false, n, nullptr}});
}
inline ProcPtr subst_term(const ProcPtr& p, const std::string& y, const TermPtr& t) {
  return pidetail::subst(p, pidetail::Subst{y, Msg{true, "", t}});
}

// --- canonical form ----------------------------------------------------------
//
// Structural-congruence normal form: flatten Par/Sum, sort children by their
// printed key, drop Nil under Par, collapse empty restrictions.

inline ProcPtr canonicalize(const ProcPtr& p) {
  if (pi_as<PNil>(p)) return p;
  if (auto* i = pi_as<PInput>(p)) return pi_input(i->chan, i->bind, canonicalize(i->cont));
  if (auto* o = pi_as<POutput>(p)) return pi_output(o->chan, o->msg, canonicalize(o->cont));
  if (auto* t = pi_as<PTau>(p)) return pi_tau(canonicalize(t->cont));
  if (auto* g = pi_as<PGround>(p))
    return pi_ground(g->term, canonicalize(g->cont), g->conds);
  if (auto* s = pi_as<PSum>(p)) {
    std::vector<ProcPtr> alts;
    for (const auto& a : s->alts) {
      ProcPtr c = canonicalize(a);
      if (auto* nested = pi_as<PSum>(c))
        alts.insert(alts.end(), nested->alts.begin(), nested->alts.end());
      else
        alts.push_back(c);
    }
    std::stable_sort(alts.begin(), alts.end(), [](const ProcPtr& a, const ProcPtr& b) {
      return print_proc(a) < print_proc(b);
    });
    if (alts.empty()) return pi_nil();
    if (alts.size() == 1) return alts[0];
    return pi_sum(std::move(alts));
  }
  if (auto* par = pi_as<PPar>(p)) {
    std::vector<ProcPtr> parts;
    for (const auto& x : par->parts) {
      ProcPtr c = canonicalize(x);
      if (pi_as<PNil>(c)) continue;
      if (auto* nested = pi_as<PPar>(c))
        parts.insert(parts.end(), nested->parts.begin(), nested->parts.end());
      else
        parts.push_back(c);
    }
    std::stable_sort(parts.begin(), parts.end(), [](const ProcPtr& a, const ProcPtr& b) {
      return print_proc(a) < print_proc(b);
    });
    if (parts.empty()) return pi_nil();
    if (parts.size() == 1) return parts[0];
    return pi_par(std::move(parts));
  }
  if (auto* r = pi_as<PRestrict>(p)) {
    ProcPtr body = canonicalize(r->body);
    if (pi_as<PNil>(body)) return pi_nil();
    return pi_restrict(r->name, body);
  }
  if (auto* rp = pi_as<PRepl>(p)) return pi_repl(canonicalize(rp->body), rp->index, rp->epoch);
  auto* c = pi_as<PCond>(p);
  return pi_cond(c->pred, canonicalize(c->then_p), canonicalize(c->else_p));
}

inline bool proc_congruent(const ProcPtr& a, const ProcPtr& b) {
  return print_proc(canonicalize(a)) == print_proc(canonicalize(b));
}

// --- parser ------------------------------------------------------------------

namespace pidetail {

class PiReader {
 public:
  explicit PiReader(const std::string& text) : text_(text) {}

  ProcPtr parse() {
    ProcPtr p = parse_sum();
    skip();
    if (pos_ != text_.size()) fail("trailing input");
    return p;
  }

 private:
  const std::string& text_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw PiError("process parse error at offset " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool name_char(char c) const {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }
  std::string read_name() {
    skip();
    size_t start = pos_;
    while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail("expected a name");
    return text_.substr(start, pos_ - start);
  }
  char peek() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  std::string read_bracketed() {  // after '[', up to matching ']'
    size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ']') ++pos_;
    if (pos_ == text_.size()) fail("unterminated '['");
    std::string body = text_.substr(start, pos_ - start);
    ++pos_;
    return body;
  }

  std::string read_paren_text() {  // after '(', up to matching ')', no nesting
    size_t start = pos_;
    int depth = 1;
    while (pos_ < text_.size()) {
      if (text_[pos_] == '(') ++depth;
      if (text_[pos_] == ')' && --depth == 0) break;
      ++pos_;
    }
    if (pos_ == text_.size()) fail("unterminated '('");
    std::string body = text_.substr(start, pos_ - start);
    ++pos_;
    return body;
  }

  Literal parse_pred(const std::string& text) {
    std::istringstream in(text);
    std::string w;
    std::vector<std::string> words;
    while (in >> w) words.push_back(w);
    if (words.empty()) fail("empty predicate");
    Literal l;
    size_t i = 0;
    if (words[0] == "not" && words.size() > 1) {
      l.negated = true;
      i = 1;
    }
    l.pred = words[i++];
    for (; i < words.size(); ++i) l.args.push_back(mk_const(words[i]));
    return l;
  }

  ProcPtr parse_sum() {
    ProcPtr first = parse_par();
    std::vector<ProcPtr> alts{first};
    while (eat('+')) alts.push_back(parse_par());
    return alts.size() == 1 ? first : pi_sum(std::move(alts));
  }

  ProcPtr parse_par() {
    ProcPtr first = parse_prefix();
    std::vector<ProcPtr> parts{first};
    while (eat('|')) parts.push_back(parse_prefix());
    return parts.size() == 1 ? first : pi_par(std::move(parts));
  }

  ProcPtr parse_cont() {
    if (eat('.')) return parse_prefix();
    return pi_nil();
  }

  ProcPtr parse_prefix() {
    skip();
    char c = peek();
    if (c == '0') {
      ++pos_;
      return pi_nil();
    }
    if (c == '(') {
      ++pos_;
      ProcPtr p = parse_sum();
      expect(')');
      return p;
    }
    if (c == '[') {
      ++pos_;
      std::string body = read_bracketed();
      TermPtr t = parse_lambda(body);
      return pi_ground(t, parse_cont());
    }
    if (c == '!') {
      ++pos_;
      std::string index;
      if (eat('{')) {
        index = read_name();
        expect('}');
      }
      ProcPtr body = parse_prefix();
      return pi_repl(body, index);
    }
    std::string n = read_name();
    if (n == "tau") return pi_tau(parse_cont());
    if (n == "nu") {
      std::string bound = read_name();
      expect('(');
      ProcPtr body = parse_sum();
      expect(')');
      return pi_restrict(bound, body);
    }
    if (n == "cond") {
      expect('(');
      Literal pred = parse_pred(read_paren_text());
      expect('(');
      ProcPtr then_p = parse_sum();
      expect(')');
      expect('(');
      ProcPtr else_p = parse_sum();
      expect(')');
      return pi_cond(pred, then_p, else_p);
    }
    if (eat('(')) {
      std::string bind = read_name();
      expect(')');
      return pi_input(n, bind, parse_cont());
    }
    if (eat('^')) {
      expect('<');
      Msg m;
      if (eat('[')) {
        m.is_term = true;
        m.term = parse_lambda(read_bracketed());
      } else {
        m.name = read_name();
      }
      expect('>');
      return pi_output(n, m, parse_cont());
    }
    fail("expected a process after name '" + n + "'");
  }
};

}  // namespace pidetail

inline ProcPtr parse_process(const std::string& text) {
  return pidetail::PiReader(text).parse();
}

// --- stepping ----------------------------------------------------------------

using CondEval = std::function<bool(const Literal&)>;

struct Action {
  std::string rule;     // "comm" | "tau" | "cond"
  std::string channel;  // comm only
  std::string subst;    // comm only, e.g. "[a/y]"
  std::string extruded; // restricted name whose scope widened, if any
  std::string label;    // display, e.g. "[a/y] on channel x"
  ProcPtr next;         // canonical successor
};

namespace pidetail {

struct Head {
  enum Kind { In, Out, Tau, Cond } kind;
  std::vector<int> path;            // child indices from root of expanded tree
  std::vector<std::string> nus;     // restriction names on the path, outermost first
  const Process* node = nullptr;
};

struct Expansion {
  std::string copy_print;      // what the untouched speculative copy prints as
  std::string advanced_print;  // print of the epoch-advanced replication node
  ProcPtr original;            // node to restore when the copy went unused
};

inline ProcPtr rename_indexed(const ProcPtr& p, const std::string& index, int epoch);

inline std::string rename_ix_name(const std::string& n, const std::string& index, int epoch) {
  std::string suffix = "_" + index;
  if (n.size() > suffix.size() && n.compare(n.size() - suffix.size(), suffix.size(), suffix) == 0)
    return n.substr(0, n.size() - suffix.size()) + "_" + std::to_string(epoch);
  return n;
}

inline TermPtr rename_ix_term(const TermPtr& t, const std::string& index, int epoch) {
  if (auto* v = as_var(t)) return mk_var(rename_ix_name(v->name, index, epoch));
  if (auto* c = as_const(t)) {
    TConst out = *c;
    out.name = rename_ix_name(c->name, index, epoch);
    if (out.mod_kind != ModKind::None) out.modality = rename_ix_name(c->modality, index, epoch);
    return std::make_shared<Term>(Term{out});
  }
  if (auto* a = as_abs(t))
    return mk_abs(rename_ix_name(a->param, index, epoch), rename_ix_term(a->body, index, epoch));
  auto* ap = as_app(t);
  return mk_app(rename_ix_term(ap->fn, index, epoch), rename_ix_term(ap->arg, index, epoch));
}

inline Literal rename_ix_literal(const Literal& l, const std::string& index, int epoch) {
  Literal out = l;
  for (auto& a : out.args) a = rename_ix_term(a, index, epoch);
  return out;
}

inline ProcPtr rename_indexed(const ProcPtr& p, const std::string& index, int epoch) {
  auto rn = [&](const std::string& n) { return rename_ix_name(n, index, epoch); };
  if (pi_as<PNil>(p)) return p;
  if (auto* i = pi_as<PInput>(p))
    return pi_input(rn(i->chan), rn(i->bind), rename_indexed(i->cont, index, epoch));
  if (auto* o = pi_as<POutput>(p)) {
    Msg m = o->msg;
    if (m.is_term) m.term = rename_ix_term(m.term, index, epoch);
    else m.name = rn(m.name);
    return pi_output(rn(o->chan), m, rename_indexed(o->cont, index, epoch));
  }
  if (auto* t = pi_as<PTau>(p)) return pi_tau(rename_indexed(t->cont, index, epoch));
  if (auto* g = pi_as<PGround>(p)) {
    std::vector<Literal> conds;
    for (const auto& l : g->conds) conds.push_back(rename_ix_literal(l, index, epoch));
    return pi_ground(rename_ix_term(g->term, index, epoch),
                     rename_indexed(g->cont, index, epoch), std::move(conds));
  }
  if (auto* s = pi_as<PSum>(p)) {
    std::vector<ProcPtr> alts;
    for (const auto& a : s->alts) alts.push_back(rename_indexed(a, index, epoch));
    return pi_sum(std::move(alts));
  }
  if (auto* par = pi_as<PPar>(p)) {
    std::vector<ProcPtr> parts;
    for (const auto& x : par->parts) parts.push_back(rename_indexed(x, index, epoch));
    return pi_par(std::move(parts));
  }
  if (auto* r = pi_as<PRestrict>(p))
    return pi_restrict(rn(r->name), rename_indexed(r->body, index, epoch));
  if (auto* rp = pi_as<PRepl>(p))
    return pi_repl(rename_indexed(rp->body, index, epoch), rp->index, rp->epoch);
  auto* c = pi_as<PCond>(p);
  return pi_cond(rename_ix_literal(c->pred, index, epoch),
                 rename_indexed(c->then_p, index, epoch),
                 rename_indexed(c->else_p, index, epoch));
}

// Alpha-renames every restriction binder in a plain replication copy so that
// materialized copies never collide.
inline ProcPtr freshen_restrictions(const ProcPtr& p, std::set<std::string>& used) {
  if (pi_as<PNil>(p)) return p;
  if (auto* i = pi_as<PInput>(p))
    return pi_input(i->chan, i->bind, freshen_restrictions(i->cont, used));
  if (auto* o = pi_as<POutput>(p))
    return pi_output(o->chan, o->msg, freshen_restrictions(o->cont, used));
  if (auto* t = pi_as<PTau>(p)) return pi_tau(freshen_restrictions(t->cont, used));
  if (auto* g = pi_as<PGround>(p))
    return pi_ground(g->term, freshen_restrictions(g->cont, used), g->conds);
  if (auto* s = pi_as<PSum>(p)) {
    std::vector<ProcPtr> alts;
    for (const auto& a : s->alts) alts.push_back(freshen_restrictions(a, used));
    return pi_sum(std::move(alts));
  }
  if (auto* par = pi_as<PPar>(p)) {
    std::vector<ProcPtr> parts;
    for (const auto& x : par->parts) parts.push_back(freshen_restrictions(x, used));
    return pi_par(std::move(parts));
  }
  if (auto* r = pi_as<PRestrict>(p)) {
    std::string n2 = fresh_name(r->name, used);
    used.insert(n2);
    ProcPtr body = n2 == r->name ? r->body : subst_name(r->body, r->name, n2);
    return pi_restrict(n2, freshen_restrictions(body, used));
  }
  if (auto* rp = pi_as<PRepl>(p))
    return pi_repl(freshen_restrictions(rp->body, used), rp->index, rp->epoch);
  auto* c = pi_as<PCond>(p);
  return pi_cond(c->pred, freshen_restrictions(c->then_p, used),
                 freshen_restrictions(c->else_p, used));
}

// One speculative unfolding per replication node: !P becomes Par(P', !P) so
// P' can offer actions; copies that end up untouched are collapsed afterwards.
inline ProcPtr expand_repls(const ProcPtr& p, std::set<std::string>& used,
                            std::vector<Expansion>& out) {
  if (pi_as<PNil>(p) || pi_as<PInput>(p) || pi_as<POutput>(p) || pi_as<PTau>(p) ||
      pi_as<PGround>(p) || pi_as<PCond>(p))
    return p;  // prefixes guard their continuations; nothing to expand yet
  if (auto* s = pi_as<PSum>(p)) {
    std::vector<ProcPtr> alts;
    for (const auto& a : s->alts) alts.push_back(expand_repls(a, used, out));
    return pi_sum(std::move(alts));
  }
  if (auto* par = pi_as<PPar>(p)) {
    std::vector<ProcPtr> parts;
    for (const auto& x : par->parts) parts.push_back(expand_repls(x, used, out));
    return pi_par(std::move(parts));
  }
  if (auto* r = pi_as<PRestrict>(p)) return pi_restrict(r->name, expand_repls(r->body, used, out));
  if (auto* rp = pi_as<PRepl>(p)) {
    ProcPtr copy;
    ProcPtr advanced;
    if (rp->index.empty()) {
      copy = freshen_restrictions(rp->body, used);
      advanced = p;
    } else {
      copy = rename_indexed(rp->body, rp->index, rp->epoch);
      advanced = pi_repl(rp->body, rp->index, rp->epoch + 1);
    }
    // Record the pre-expansion print: the collapse pass runs bottom-up, so an
    // untouched copy has had its own nested expansions collapsed already.
    std::string copy_print = print_proc(copy);
    copy = expand_repls(copy, used, out);  // nested replications inside the copy
    out.push_back(Expansion{copy_print, print_proc(advanced), p});
    return pi_par({copy, advanced});
  }
  return p;
}

inline void collect_heads(const ProcPtr& p, std::vector<int>& path,
                          std::vector<std::string>& nus, std::vector<Head>& out) {
  if (pi_as<PNil>(p) || pi_as<PGround>(p) || pi_as<PRepl>(p)) return;
  if (pi_as<PInput>(p)) {
    out.push_back(Head{Head::In, path, nus, p.get()});
    return;
  }
  if (pi_as<POutput>(p)) {
    out.push_back(Head{Head::Out, path, nus, p.get()});
    return;
  }
  if (pi_as<PTau>(p)) {
    out.push_back(Head{Head::Tau, path, nus, p.get()});
    return;
  }
  if (pi_as<PCond>(p)) {
    out.push_back(Head{Head::Cond, path, nus, p.get()});
    return;
  }
  if (auto* s = pi_as<PSum>(p)) {
    for (size_t i = 0; i < s->alts.size(); ++i) {
      path.push_back(static_cast<int>(i));
      collect_heads(s->alts[i], path, nus, out);
      path.pop_back();
    }
    return;
  }
  if (auto* par = pi_as<PPar>(p)) {
    for (size_t i = 0; i < par->parts.size(); ++i) {
      path.push_back(static_cast<int>(i));
      collect_heads(par->parts[i], path, nus, out);
      path.pop_back();
    }
    return;
  }
  auto* r = pi_as<PRestrict>(p);
  path.push_back(0);
  nus.push_back(r->name);
  collect_heads(r->body, path, nus, out);
  nus.pop_back();
  path.pop_back();
}

// Rebuilds the tree with the subtree at `path` replaced by `leaf(subtree)`.
// Passing through a Sum commits: the Sum node is replaced by the chosen
// alternative's rebuilt form. `drop_nu_at` removes the restriction node at
// exactly that path depth (scope extrusion relocates it).
struct RebuildPlan {
  const std::vector<int>* path;
  std::function<ProcPtr(const ProcPtr&)> leaf;
  int drop_nu_at = -1;
  bool commit_sums = true;  // false: edit in place without resolving choice
};

inline ProcPtr rebuild(const ProcPtr& p, const RebuildPlan& plan, size_t i) {
  if (i == plan.path->size()) return plan.leaf(p);
  int idx = (*plan.path)[i];
  if (auto* s = pi_as<PSum>(p)) {
    if (plan.commit_sums) return rebuild(s->alts[static_cast<size_t>(idx)], plan, i + 1);
    std::vector<ProcPtr> alts = s->alts;
    alts[static_cast<size_t>(idx)] = rebuild(alts[static_cast<size_t>(idx)], plan, i + 1);
    return pi_sum(std::move(alts));
  }
  if (auto* par = pi_as<PPar>(p)) {
    std::vector<ProcPtr> parts = par->parts;
    parts[static_cast<size_t>(idx)] = rebuild(parts[static_cast<size_t>(idx)], plan, i + 1);
    return pi_par(std::move(parts));
  }
  if (auto* r = pi_as<PRestrict>(p)) {
    ProcPtr body = rebuild(r->body, plan, i + 1);
    if (static_cast<int>(i) == plan.drop_nu_at) return body;
    return pi_restrict(r->name, body);
  }
  throw PiError("internal: rebuild path mismatch");
}

// Rebuilds along two paths that diverge at a Par node; wraps the divergence
// node with a restriction when `wrap_nu` is set (scope extrusion).
struct Rebuild2Plan {
  RebuildPlan a, b;
  std::string wrap_nu;
};

inline ProcPtr rebuild2(const ProcPtr& p, const Rebuild2Plan& plan, size_t i) {
  const auto& pa = *plan.a.path;
  const auto& pb = *plan.b.path;
  if (i < pa.size() && i < pb.size() && pa[i] == pb[i]) {
    int idx = pa[i];
    if (auto* s = pi_as<PSum>(p)) return rebuild2(s->alts[static_cast<size_t>(idx)], plan, i + 1);
    if (auto* par = pi_as<PPar>(p)) {
      std::vector<ProcPtr> parts = par->parts;
      parts[static_cast<size_t>(idx)] = rebuild2(parts[static_cast<size_t>(idx)], plan, i + 1);
      return pi_par(std::move(parts));
    }
    if (auto* r = pi_as<PRestrict>(p)) {
      ProcPtr body = rebuild2(r->body, plan, i + 1);
      return pi_restrict(r->name, body);
    }
    throw PiError("internal: rebuild2 path mismatch");
  }
  auto* par = pi_as<PPar>(p);
  if (!par) throw PiError("internal: communication paths must diverge at a parallel node");
  std::vector<ProcPtr> parts = par->parts;
  size_t ia = static_cast<size_t>(pa[i]);
  size_t ib = static_cast<size_t>(pb[i]);
  parts[ia] = rebuild(parts[ia], plan.a, i + 1);
  parts[ib] = rebuild(parts[ib], plan.b, i + 1);
  ProcPtr out = pi_par(std::move(parts));
  if (!plan.wrap_nu.empty()) out = pi_restrict(plan.wrap_nu, out);
  return out;
}

inline size_t divergence(const std::vector<int>& a, const std::vector<int>& b) {
  size_t i = 0;
  while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
  return i;
}

inline ProcPtr node_at(const ProcPtr& root, const std::vector<int>& path, size_t upto) {
  ProcPtr cur = root;
  for (size_t i = 0; i < upto; ++i) {
    if (auto* s = pi_as<PSum>(cur)) cur = s->alts[static_cast<size_t>(path[i])];
    else if (auto* par = pi_as<PPar>(cur)) cur = par->parts[static_cast<size_t>(path[i])];
    else if (auto* r = pi_as<PRestrict>(cur)) cur = r->body;
    else throw PiError("internal: bad path during scope analysis");
  }
  return cur;
}

// Restores speculative replication copies that the step did not touch.
inline ProcPtr collapse_unused(const ProcPtr& p, const std::vector<Expansion>& exps) {
  if (exps.empty()) return p;
  if (auto* par = pi_as<PPar>(p)) {
    std::vector<ProcPtr> parts;
    for (const auto& x : par->parts) parts.push_back(collapse_unused(x, exps));
    // A Par introduced by expansion has exactly [copy, advanced]; if both
    // still print as expected, revert to the original replication node.
    if (parts.size() == 2) {
      std::string p0 = print_proc(parts[0]);
      std::string p1 = print_proc(parts[1]);
      for (const auto& e : exps) {
        if (p0 == e.copy_print && p1 == e.advanced_print) return e.original;
      }
    }
    return pi_par(std::move(parts));
  }
  if (auto* i = pi_as<PInput>(p)) return pi_input(i->chan, i->bind, collapse_unused(i->cont, exps));
  if (auto* o = pi_as<POutput>(p)) return pi_output(o->chan, o->msg, collapse_unused(o->cont, exps));
  if (auto* t = pi_as<PTau>(p)) return pi_tau(collapse_unused(t->cont, exps));
  if (auto* g = pi_as<PGround>(p)) return pi_ground(g->term, collapse_unused(g->cont, exps), g->conds);
  if (auto* s = pi_as<PSum>(p)) {
    std::vector<ProcPtr> alts;
    for (const auto& a : s->alts) alts.push_back(collapse_unused(a, exps));
    return pi_sum(std::move(alts));
  }
  if (auto* r = pi_as<PRestrict>(p)) return pi_restrict(r->name, collapse_unused(r->body, exps));
  if (auto* rp = pi_as<PRepl>(p)) return pi_repl(collapse_unused(rp->body, exps), rp->index, rp->epoch);
  if (auto* c = pi_as<PCond>(p))
    return pi_cond(c->pred, collapse_unused(c->then_p, exps), collapse_unused(c->else_p, exps));
  return p;
}

// True when no restriction of `name` sits on the path suffix below the
// divergence point (the channel occurrence refers to the shared binding).
inline bool name_visible_across(const Head& h, size_t lca_nus, const std::string& name) {
  for (size_t i = lca_nus; i < h.nus.size(); ++i)
    if (h.nus[i] == name) return false;
  return true;
}

// Counts restrictions on the shared path prefix. Restriction path entries are
// always index 0; nus entries align with Restrict nodes in path order, so we
// recount by walking both paths.
inline size_t shared_nu_count(const ProcPtr& root, const std::vector<int>& path, size_t upto) {
  size_t count = 0;
  ProcPtr cur = root;
  for (size_t i = 0; i < upto; ++i) {
    if (auto* s = pi_as<PSum>(cur)) {
      cur = s->alts[static_cast<size_t>(path[i])];
    } else if (auto* par = pi_as<PPar>(cur)) {
      cur = par->parts[static_cast<size_t>(path[i])];
    } else if (auto* r = pi_as<PRestrict>(cur)) {
      ++count;
      cur = r->body;
    } else {
      throw PiError("internal: bad path during scope analysis");
    }
  }
  return count;
}

}  // namespace pidetail

inline std::vector<Action> step(const ProcPtr& start, const CondEval& cond_eval = {}) {
  using namespace pidetail;
  ProcPtr p = canonicalize(start);
  std::set<std::string> used = all_names(p);
  std::vector<Expansion> exps;
  ProcPtr root = expand_repls(p, used, exps);

  std::vector<Head> heads;
  std::vector<int> path;
  std::vector<std::string> nus;
  collect_heads(root, path, nus, heads);

  std::vector<Action> out;
  auto finish = [&](ProcPtr next) { return canonicalize(collapse_unused(next, exps)); };

  for (const auto& h : heads) {
    if (h.kind == Head::Tau) {
      auto* t = std::get_if<PTau>(&h.node->node);
      RebuildPlan plan{&h.path, [&](const ProcPtr&) { return t->cont; }, -1};
      Action a;
      a.rule = "tau";
      a.label = "tau";
      a.next = finish(rebuild(root, plan, 0));
      out.push_back(std::move(a));
    } else if (h.kind == Head::Cond) {
      auto* c = std::get_if<PCond>(&h.node->node);
      bool truth = cond_eval ? cond_eval(c->pred) : false;
      ProcPtr branch = truth ? c->then_p : c->else_p;
      RebuildPlan plan{&h.path, [&](const ProcPtr&) { return branch; }, -1};
      Action a;
      a.rule = "cond";
      a.label = "cond " + print_literal(c->pred) + " -> " + (truth ? "then" : "else");
      a.next = finish(rebuild(root, plan, 0));
      out.push_back(std::move(a));
    }
  }

  for (const auto& hs : heads) {
    if (hs.kind != Head::Out) continue;
    auto* o = std::get_if<POutput>(&hs.node->node);
    for (const auto& hr : heads) {
      if (hr.kind != Head::In) continue;
      auto* in = std::get_if<PInput>(&hr.node->node);
      if (in->chan != o->chan) continue;
      size_t div = divergence(hs.path, hr.path);
      if (div >= hs.path.size() || div >= hr.path.size()) continue;  // same prefix chain
      // Channel must refer to the same binding on both sides: no restriction
      // of the channel name strictly below the divergence point.
      size_t lca_nus = shared_nu_count(root, hs.path, div);
      if (!name_visible_across(hs, lca_nus, o->chan)) continue;
      if (!name_visible_across(hr, lca_nus, in->chan)) continue;

      // Scope extrusion: a restricted name sent outside its restriction.
      // Find the innermost restriction of the payload name strictly below the
      // divergence point on the sender path.
      std::string extruded;
      int drop_at = -1;
      if (!o->msg.is_term) {
        ProcPtr cur = root;
        for (size_t i = 0; i < hs.path.size(); ++i) {
          if (auto* s = pi_as<PSum>(cur)) {
            cur = s->alts[static_cast<size_t>(hs.path[i])];
          } else if (auto* par = pi_as<PPar>(cur)) {
            cur = par->parts[static_cast<size_t>(hs.path[i])];
          } else if (auto* r = pi_as<PRestrict>(cur)) {
            if (i >= div && r->name == o->msg.name) drop_at = static_cast<int>(i);
            cur = r->body;
          }
        }
        if (drop_at >= 0) extruded = o->msg.name;
      }

      std::string ex_name = extruded;
      ProcPtr work = root;
      if (!extruded.empty()) {
        // Capture check: nothing under the LCA outside the restriction may
        // already use the name freely; otherwise alpha-rename the restriction
        // before widening its scope.
        std::vector<int> nu_path(hs.path.begin(), hs.path.begin() + drop_at);
        RebuildPlan erase{&nu_path, [](const ProcPtr&) { return pi_nil(); }, -1, false};
        ProcPtr lca_without_nu = node_at(rebuild(root, erase, 0), hs.path, div);
        if (free_names(lca_without_nu).count(extruded)) {
          std::set<std::string> avoid = used;
          ex_name = fresh_name(extruded, avoid);
          RebuildPlan rename{&nu_path,
                             [&](const ProcPtr& node) {
                               auto* r = pi_as<PRestrict>(node);
                               return pi_restrict(ex_name,
                                                  subst_name(r->body, extruded, ex_name));
                             },
                             -1, false};
          work = rebuild(work, rename, 0);
        }
      }

      // Re-fetch the (possibly renamed) output node for the payload.
      auto* sender_now = pi_as<POutput>(node_at(work, hs.path, hs.path.size()));
      Msg payload = sender_now->msg;
      ProcPtr recv_cont = payload.is_term ? subst_term(in->cont, in->bind, payload.term)
                                          : subst_name(in->cont, in->bind, payload.name);

      Rebuild2Plan plan;
      plan.a = RebuildPlan{&hs.path, [&](const ProcPtr& node) {
                             auto* oo = pi_as<POutput>(node);
                             return oo->cont;
                           },
                           drop_at};
      plan.b = RebuildPlan{&hr.path, [&](const ProcPtr&) { return recv_cont; }, -1};
      plan.wrap_nu = extruded.empty() ? "" : ex_name;

      ProcPtr next;
      try {
        next = rebuild2(work, plan, 0);
      } catch (const PiError&) {
        continue;  // paths did not diverge at a parallel node
      }

      Action a;
      a.rule = "comm";
      a.channel = o->chan;
      a.subst = "[" + pidetail::print_msg(payload) + "/" + in->bind + "]";
      a.extruded = extruded.empty() ? "" : ex_name;
      a.label = a.subst + " on channel " + o->chan;
      a.next = finish(next);
      out.push_back(std::move(a));
    }
  }
  return out;
}

// --- running -----------------------------------------------------------------

struct RunOptions {
  enum Mode { Exhaustive, Seeded } mode = Exhaustive;
  int depth = 5;             // exhaustive: maximum distance from the root
  size_t max_states = 2000;  // exhaustive safety bound
  std::uint64_t seed = 0;    // seeded mode
  int max_steps = 50;        // seeded mode
  CondEval cond_eval;
};

struct TraceEdge {
  int from = 0, to = 0;
  std::string rule, channel, subst, extruded, label;
};

struct Trace {
  std::vector<std::string> states;  // canonical prints; index 0 is the root
  std::vector<ProcPtr> procs;
  std::vector<TraceEdge> edges;
  bool bound_exceeded = false;
};

inline Trace run(const ProcPtr& start, const RunOptions& opt = {}) {
  Trace tr;
  ProcPtr root = canonicalize(start);
  tr.states.push_back(print_proc(root));
  tr.procs.push_back(root);

  if (opt.mode == RunOptions::Seeded) {
    std::mt19937_64 rng(opt.seed);
    int cur = 0;
    for (int s = 0; s < opt.max_steps; ++s) {
      auto actions = step(tr.procs[static_cast<size_t>(cur)], opt.cond_eval);
      if (actions.empty()) return tr;
      size_t pick = actions.size() == 1
                        ? 0
                        : std::uniform_int_distribution<size_t>(0, actions.size() - 1)(rng);
      const Action& a = actions[pick];
      tr.states.push_back(print_proc(a.next));
      tr.procs.push_back(a.next);
      int next = static_cast<int>(tr.states.size()) - 1;
      tr.edges.push_back(TraceEdge{cur, next, a.rule, a.channel, a.subst, a.extruded, a.label});
      cur = next;
    }
    if (!step(tr.procs[static_cast<size_t>(cur)], opt.cond_eval).empty())
      tr.bound_exceeded = true;
    return tr;
  }

  std::map<std::string, int> ids{{tr.states[0], 0}};
  std::vector<int> depth_of{0};
  std::set<std::string> edge_seen;
  for (size_t i = 0; i < tr.procs.size(); ++i) {
    if (tr.states.size() > opt.max_states) {
      tr.bound_exceeded = true;
      break;
    }
    auto actions = step(tr.procs[i], opt.cond_eval);
    if (depth_of[i] >= opt.depth) {
      if (!actions.empty()) tr.bound_exceeded = true;
      continue;
    }
    for (const auto& a : actions) {
      std::string key = print_proc(a.next);
      auto it = ids.find(key);
      int to;
      if (it == ids.end()) {
        to = static_cast<int>(tr.states.size());
        ids.emplace(key, to);
        tr.states.push_back(key);
        tr.procs.push_back(a.next);
        depth_of.push_back(depth_of[i] + 1);
      } else {
        to = it->second;
      }
      std::string ek = std::to_string(i) + ">" + std::to_string(to) + ":" + a.label;
      if (!edge_seen.insert(ek).second) continue;
      tr.edges.push_back(
          TraceEdge{static_cast<int>(i), to, a.rule, a.channel, a.subst, a.extruded, a.label});
    }
  }
  return tr;
}

// --- analyses ----------------------------------------------------------------

// Boudol subset: every sender is terminal (outputs continue with Nil only).
inline bool check_async(const ProcPtr& p) {
  if (pi_as<PNil>(p) || pi_as<PGround>(p)) {
    if (auto* g = pi_as<PGround>(p)) return check_async(g->cont);
    return true;
  }
  if (auto* i = pi_as<PInput>(p)) return check_async(i->cont);
  if (auto* o = pi_as<POutput>(p)) return pi_as<PNil>(o->cont) != nullptr;
  if (auto* t = pi_as<PTau>(p)) return check_async(t->cont);
  if (auto* s = pi_as<PSum>(p)) {
    for (const auto& a : s->alts)
      if (!check_async(a)) return false;
    return true;
  }
  if (auto* par = pi_as<PPar>(p)) {
    for (const auto& x : par->parts)
      if (!check_async(x)) return false;
    return true;
  }
  if (auto* r = pi_as<PRestrict>(p)) return check_async(r->body);
  if (auto* rp = pi_as<PRepl>(p)) return check_async(rp->body);
  auto* c = pi_as<PCond>(p);
  return check_async(c->then_p) && check_async(c->else_p);
}

enum class Stance { Adversary, Evasive, Deceptive, NondeterministicChoice, None };

inline std::string to_string(Stance s) {
  switch (s) {
    case Stance::Adversary: return "adversary";
    case Stance::Evasive: return "evasive";
    case Stance::Deceptive: return "deceptive";
    case Stance::NondeterministicChoice: return "nondeterministic-choice";
    default: return "none";
  }
}

namespace pidetail {

inline bool contains_repl(const ProcPtr& p) {
  if (pi_as<PRepl>(p)) return true;
  if (auto* i = pi_as<PInput>(p)) return contains_repl(i->cont);
  if (auto* o = pi_as<POutput>(p)) return contains_repl(o->cont);
  if (auto* t = pi_as<PTau>(p)) return contains_repl(t->cont);
  if (auto* g = pi_as<PGround>(p)) return contains_repl(g->cont);
  if (auto* s = pi_as<PSum>(p)) {
    for (const auto& a : s->alts)
      if (contains_repl(a)) return true;
    return false;
  }
  if (auto* par = pi_as<PPar>(p)) {
    for (const auto& x : par->parts)
      if (contains_repl(x)) return true;
    return false;
  }
  if (auto* r = pi_as<PRestrict>(p)) return contains_repl(r->body);
  if (auto* c = pi_as<PCond>(p)) return contains_repl(c->then_p) || contains_repl(c->else_p);
  return false;
}

inline bool contains_input(const ProcPtr& p) {
  if (pi_as<PInput>(p)) return true;
  if (auto* o = pi_as<POutput>(p)) return contains_input(o->cont);
  if (auto* t = pi_as<PTau>(p)) return contains_input(t->cont);
  if (auto* g = pi_as<PGround>(p)) return contains_input(g->cont);
  if (auto* s = pi_as<PSum>(p)) {
    for (const auto& a : s->alts)
      if (contains_input(a)) return true;
    return false;
  }
  if (auto* par = pi_as<PPar>(p)) {
    for (const auto& x : par->parts)
      if (contains_input(x)) return true;
    return false;
  }
  if (auto* r = pi_as<PRestrict>(p)) return contains_input(r->body);
  if (auto* c = pi_as<PCond>(p)) return contains_input(c->then_p) || contains_input(c->else_p);
  return false;
}

inline const POutput* first_output(const ProcPtr& p) {
  if (auto* o = pi_as<POutput>(p)) return o;
  if (auto* i = pi_as<PInput>(p)) return first_output(i->cont);
  if (auto* t = pi_as<PTau>(p)) return first_output(t->cont);
  if (auto* g = pi_as<PGround>(p)) return first_output(g->cont);
  if (auto* s = pi_as<PSum>(p)) {
    for (const auto& a : s->alts)
      if (auto* o = first_output(a)) return o;
    return nullptr;
  }
  if (auto* par = pi_as<PPar>(p)) {
    for (const auto& x : par->parts)
      if (auto* o = first_output(x)) return o;
    return nullptr;
  }
  if (auto* r = pi_as<PRestrict>(p)) return first_output(r->body);
  if (auto* rp = pi_as<PRepl>(p)) return first_output(rp->body);
  if (auto* c = pi_as<PCond>(p)) {
    if (auto* o = first_output(c->then_p)) return o;
    return first_output(c->else_p);
  }
  return nullptr;
}

}  // namespace pidetail

// Syntactic stance classification over the acting component (`roles.first`
// among top-level parallel parts): an unusable (term) payload followed by
// consuming the peer's channel is adversarial; a term payload with an
// independent continuation is evasive; passing on a name the sender itself
// never uses again is deceptive; a top-level choice between replicated
// behaviours is nondeterministic choice.
inline Stance classify_stance(const ProcPtr& p, std::pair<int, int> roles = {0, 1}) {
  using namespace pidetail;
  if (auto* s = pi_as<PSum>(p)) {
    for (const auto& a : s->alts)
      if (contains_repl(a)) return Stance::NondeterministicChoice;
  }
  ProcPtr acting = p;
  if (auto* par = pi_as<PPar>(p)) {
    size_t idx = static_cast<size_t>(roles.first);
    if (idx < par->parts.size()) acting = par->parts[idx];
  }
  const POutput* o = first_output(acting);
  if (!o) return Stance::None;
  if (o->msg.is_term) return contains_input(o->cont) ? Stance::Adversary : Stance::Evasive;
  if (!pi_as<PNil>(o->cont)) {
    std::set<std::string> names = all_names(o->cont);
    if (!names.count(o->msg.name)) return Stance::Deceptive;
  }
  return Stance::None;
}

}  // namespace catseq
