#pragma once

// Permutation patterns and separability: containment of the two forbidden
// patterns 3142/2413, separation-tree construction, enumeration counts, and
// the encoding of permutations as category lexicons whose derivability
// mirrors separability.

#include <algorithm>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "catseq/category.hpp"
#include "catseq/rules.hpp"
#include "catseq/term.hpp"

namespace catseq {

using Permutation = std::vector<int>;

class PermError : public std::runtime_error {
 public:
  explicit PermError(const std::string& what) : std::runtime_error(what) {}
};
class NotSeparable : public std::runtime_error {
 public:
  explicit NotSeparable(const Permutation& p);
};

inline std::string print_permutation(const Permutation& p) {
  bool compact = std::all_of(p.begin(), p.end(), [](int v) { return v >= 1 && v <= 9; });
  std::string out;
  for (size_t i = 0; i < p.size(); ++i) {
    if (!compact && i) out += ",";
    out += std::to_string(p[i]);
  }
  return out;
}

inline NotSeparable::NotSeparable(const Permutation& p)
    : std::runtime_error("permutation is not separable: " + print_permutation(p)) {}

inline void validate_permutation(const Permutation& p) {
  if (p.empty()) throw PermError("empty permutation");
  std::vector<bool> seen(p.size() + 1, false);
  for (int v : p) {
    if (v < 1 || static_cast<size_t>(v) > p.size() || seen[static_cast<size_t>(v)])
      throw PermError("not a permutation of 1..n: " + print_permutation(p));
    seen[static_cast<size_t>(v)] = true;
  }
}

inline Permutation parse_permutation(const std::string& text) {
  Permutation p;
  bool has_sep = text.find(',') != std::string::npos || text.find(' ') != std::string::npos;
  if (has_sep) {
    std::string cur;
    for (char c : text + ",") {
      if (c == ',' || c == ' ') {
        if (!cur.empty()) p.push_back(std::stoi(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
  } else {
    for (char c : text) {
      if (c < '1' || c > '9') throw PermError("bad permutation digit: " + std::string(1, c));
      p.push_back(c - '0');
    }
  }
  validate_permutation(p);
  return p;
}

// --- pattern containment -----------------------------------------------------

namespace permdetail {

inline bool same_relative_order(const std::vector<int>& chosen, const Permutation& pattern) {
  for (size_t i = 0; i < chosen.size(); ++i)
    for (size_t j = i + 1; j < chosen.size(); ++j)
      if ((chosen[i] < chosen[j]) != (pattern[i] < pattern[j])) return false;
  return true;
}

inline bool contains_rec(const Permutation& p, const Permutation& pattern, size_t start,
                         std::vector<int>& chosen) {
  if (chosen.size() == pattern.size()) return same_relative_order(chosen, pattern);
  for (size_t i = start; i + (pattern.size() - chosen.size()) <= p.size(); ++i) {
    chosen.push_back(p[i]);
    // prune: the partial subsequence must already match the pattern prefix
    if (same_relative_order(chosen, pattern) && contains_rec(p, pattern, i + 1, chosen)) {
      chosen.pop_back();
      return true;
    }
    chosen.pop_back();
  }
  return false;
}

}  // namespace permdetail

inline bool contains_pattern(const Permutation& p, const Permutation& pattern) {
  if (pattern.empty() || pattern.size() > p.size()) return false;
  std::vector<int> chosen;
  return permdetail::contains_rec(p, pattern, 0, chosen);
}

inline bool is_separable(const Permutation& p) {
  return !contains_pattern(p, {3, 1, 4, 2}) && !contains_pattern(p, {2, 4, 1, 3});
}

inline long long separable_count(int n) {
  if (n < 1) throw PermError("count requires n >= 1");
  Permutation p(static_cast<size_t>(n));
  std::iota(p.begin(), p.end(), 1);
  long long count = 0;
  do {
    if (is_separable(p)) ++count;
  } while (std::next_permutation(p.begin(), p.end()));
  return count;
}

// --- separation trees ----------------------------------------------------------

struct SepTree;
using SepTreePtr = std::shared_ptr<const SepTree>;

struct SepTree {
  bool is_leaf = true;
  int value = 0;   // leaf
  char op = '+';   // '+' : left block below right block; '-' : above
  SepTreePtr left, right;
};

inline SepTreePtr sep_leaf(int v) {
  auto t = std::make_shared<SepTree>();
  t->is_leaf = true;
  t->value = v;
  return t;
}
inline SepTreePtr sep_node(char op, SepTreePtr l, SepTreePtr r) {
  auto t = std::make_shared<SepTree>();
  t->is_leaf = false;
  t->op = op;
  t->left = std::move(l);
  t->right = std::move(r);
  return t;
}

namespace permdetail {

// Splits at the shortest prefix whose values form a contiguous block entirely
// below (+) or above (-) the suffix block. Both halves of any such split are
// themselves separable, so the greedy choice is complete.
inline SepTreePtr sep_rec(const Permutation& p) {
  if (p.size() == 1) return sep_leaf(p[0]);
  for (size_t k = 1; k < p.size(); ++k) {
    int pre_max = *std::max_element(p.begin(), p.begin() + static_cast<long>(k));
    int pre_min = *std::min_element(p.begin(), p.begin() + static_cast<long>(k));
    int suf_max = *std::max_element(p.begin() + static_cast<long>(k), p.end());
    int suf_min = *std::min_element(p.begin() + static_cast<long>(k), p.end());
    char op = 0;
    if (pre_max < suf_min) op = '+';
    else if (pre_min > suf_max) op = '-';
    if (!op) continue;
    Permutation pre(p.begin(), p.begin() + static_cast<long>(k));
    Permutation suf(p.begin() + static_cast<long>(k), p.end());
    return sep_node(op, sep_rec(pre), sep_rec(suf));
  }
  throw NotSeparable(p);
}

}  // namespace permdetail

inline SepTreePtr separation_tree(const Permutation& p) {
  validate_permutation(p);
  return permdetail::sep_rec(p);
}

inline std::string print_septree(const SepTreePtr& t) {
  if (t->is_leaf) return std::to_string(t->value);
  return std::string(1, t->op) + "(" + print_septree(t->left) + "," + print_septree(t->right) +
         ")";
}

inline void septree_leaves(const SepTreePtr& t, Permutation& out) {
  if (t->is_leaf) {
    out.push_back(t->value);
    return;
  }
  septree_leaves(t->left, out);
  septree_leaves(t->right, out);
}

inline Permutation septree_leaves(const SepTreePtr& t) {
  Permutation out;
  septree_leaves(t, out);
  return out;
}

namespace permdetail {

inline void tree_range(const SepTreePtr& t, int& lo, int& hi) {
  if (t->is_leaf) {
    lo = hi = t->value;
    return;
  }
  int llo, lhi, rlo, rhi;
  tree_range(t->left, llo, lhi);
  tree_range(t->right, rlo, rhi);
  lo = std::min(llo, rlo);
  hi = std::max(lhi, rhi);
}

inline bool tree_valid(const SepTreePtr& t) {
  if (t->is_leaf) return true;
  if (!tree_valid(t->left) || !tree_valid(t->right)) return false;
  int llo, lhi, rlo, rhi;
  tree_range(t->left, llo, lhi);
  tree_range(t->right, rlo, rhi);
  if (t->op == '+') return lhi < rlo;
  if (t->op == '-') return llo > rhi;
  return false;
}

}  // namespace permdetail

// A tree is a valid separation of p when its in-order leaves spell p and every
// internal node keeps its right block entirely above (+) or below (-) its left.
inline bool valid_separation_tree(const SepTreePtr& t, const Permutation& p) {
  return septree_leaves(t) == p && permdetail::tree_valid(t);
}

// --- grammar correspondence ----------------------------------------------------

// "chain" encoding: the token at the position of value v gets category
// v/(v+1) when v+1 occurs later, v\(v+1) when earlier; value n stays atomic.
// Logical forms are distinct constants so lexical content is traceable.
// "split" encoding: the two-argument functor categories for the crossing
// permutations 24135 and 53142 (derivable only with the disharmonic
// intercalation rules).
inline std::vector<Item> encode_permutation(const Permutation& p,
                                            const std::string& style = "chain") {
  validate_permutation(p);
  const int n = static_cast<int>(p.size());
  auto atomic = [](int v) { return mk_atom(std::to_string(v)); };
  auto lf_const = [](size_t pos) { return mk_const("c" + std::to_string(pos + 1)); };
  auto lf_functor = [&](size_t pos, int arity) {
    TermPtr body = lf_const(pos);
    std::vector<std::string> params;
    for (int i = 0; i < arity; ++i) params.push_back("x" + std::to_string(i + 1));
    for (const auto& prm : params) body = mk_app(body, mk_var(prm));
    for (auto it = params.rbegin(); it != params.rend(); ++it) body = mk_abs(*it, body);
    return body;
  };

  if (style == "chain") {
    std::vector<int> pos_of(static_cast<size_t>(n) + 1, 0);
    for (int i = 0; i < n; ++i) pos_of[static_cast<size_t>(p[static_cast<size_t>(i)])] = i;
    std::vector<Item> items;
    for (size_t i = 0; i < p.size(); ++i) {
      int v = p[i];
      Item it;
      if (v == n) {
        it.cat = atomic(v);
        it.lf = lf_const(i);
      } else {
        SlashDir dir = pos_of[static_cast<size_t>(v) + 1] > pos_of[static_cast<size_t>(v)]
                           ? SlashDir::Forward
                           : SlashDir::Backward;
        it.cat = mk_slash(atomic(v), dir, atomic(v + 1));
        it.lf = lf_functor(i, 1);
      }
      items.push_back(std::move(it));
    }
    return items;
  }

  if (style == "split") {
    std::vector<std::string> cats;
    if (p == Permutation{2, 4, 1, 3, 5}) {
      cats = {"2", "4/5", "(1\\4)/3", "3\\2", "5"};
    } else if (p == Permutation{5, 3, 1, 4, 2}) {
      cats = {"5", "3/2", "(1/4)\\3", "4\\5", "2"};
    } else {
      throw PermError("split encoding is defined for 24135 and 53142 only");
    }
    std::vector<Item> items;
    for (size_t i = 0; i < cats.size(); ++i) {
      Item it;
      it.cat = parse_cat(cats[i]);
      int arity = 0;
      for (char c : cats[i])
        if (c == '/' || c == '\\') ++arity;
      it.lf = arity == 0 ? lf_const(i) : lf_functor(i, arity);
      items.push_back(std::move(it));
    }
    return items;
  }

  throw PermError("unknown encoding style: " + style);
}

// The atomic goal category of an encoded permutation: "1".
inline CatPtr encode_goal() { return mk_atom("1"); }

}  // namespace catseq
