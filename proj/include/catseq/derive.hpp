#pragma once

// CKY-style chart deriver over a lexicon and a rule configuration.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "catseq/lexicon.hpp"
#include "catseq/rules.hpp"

namespace catseq {

class UnknownToken : public std::runtime_error {
 public:
  explicit UnknownToken(const std::string& form)
      : std::runtime_error("unknown token: " + form), form(form) {}
  std::string form;
};
class TooManyTokens : public std::runtime_error {
 public:
  TooManyTokens() : std::runtime_error("token sequence exceeds the configured limit") {}
};

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

struct Derivation {
  Item item;
  std::string rule;               // combinator label, "raise", or "lex"
  std::string leaf_form;          // set when rule == "lex"
  std::vector<DerivPtr> children; // 0 (leaf), 1 (raise), or 2
};

struct DeriveResult {
  std::vector<DerivPtr> derivations;  // full-span results, chart order
  bool truncated = false;             // item cap reached; results may be partial
};

inline std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

namespace detail {

inline std::string item_key(const Item& it) {
  return print_cat(it.cat) + " :: " + canonical_term(it.lf) + " :: " +
         print_conds(canonical_conds(it.conds));
}

// Targets for syntactic raising: every subcategory of every lexical category
// used by the token sequence.
inline std::vector<CatPtr> raise_targets(const std::vector<std::vector<Item>>& lex_items) {
  std::vector<CatPtr> out;
  std::set<std::string> seen;
  for (const auto& cell : lex_items)
    for (const auto& it : cell)
      for (const auto& sub : subcategories(it.cat)) {
        std::string k = print_cat(sub);
        if (seen.insert(k).second) out.push_back(sub);
      }
  return out;
}

struct Chart {
  const RuleConfig& config;
  std::vector<CatPtr> targets;
  size_t item_count = 0;
  bool truncated = false;

  // cells[i][len] holds all derivations spanning tokens [i, i+len)
  std::vector<std::map<size_t, std::vector<DerivPtr>>> cells;
  std::vector<std::map<size_t, std::set<std::string>>> seen;

  explicit Chart(const RuleConfig& cfg, size_t n) : config(cfg), cells(n), seen(n) {}

  bool add(size_t i, size_t len, DerivPtr d) {
    if (item_count >= config.max_items) {
      truncated = true;
      return false;
    }
    std::string key = item_key(d->item);
    if (!seen[i][len].insert(key).second) return false;
    cells[i][len].push_back(d);
    ++item_count;
    return true;
  }

  // Raising is lexical: it applies once, to atomic leaf items only, so a
  // derived atomic result never raises again.
  void add_leaf_with_raises(size_t i, DerivPtr d) {
    if (!add(i, 1, d)) return;
    if (!config.syntactic_raise || !is_atomic(d->item.cat)) return;
    for (const auto& target : targets) {
      for (SlashDir dir : {SlashDir::Forward, SlashDir::Backward}) {
        auto raised = std::make_shared<Derivation>();
        raised->item = type_raise(d->item, target, dir);
        raised->rule = "raise";
        raised->children = {d};
        add(i, 1, raised);
      }
    }
  }
};

}  // namespace detail

inline DeriveResult derive(const std::vector<std::string>& tokens, const Lexicon& lexicon,
                           const RuleConfig& config) {
  if (tokens.size() > config.max_tokens) throw TooManyTokens();
  DeriveResult result;
  if (tokens.empty()) return result;

  std::vector<std::vector<Item>> lex_items;
  for (const auto& tok : tokens) {
    auto items = lexicon.lookup(tok);
    if (items.empty()) throw UnknownToken(tok);
    lex_items.push_back(std::move(items));
  }

  const size_t n = tokens.size();
  detail::Chart chart(config, n);
  if (config.syntactic_raise) chart.targets = detail::raise_targets(lex_items);

  for (size_t i = 0; i < n; ++i) {
    for (const auto& it : lex_items[i]) {
      auto leaf = std::make_shared<Derivation>();
      leaf->item = it;
      leaf->rule = "lex";
      leaf->leaf_form = tokens[i];
      chart.add_leaf_with_raises(i, leaf);
    }
  }

  for (size_t len = 2; len <= n; ++len) {
    for (size_t i = 0; i + len <= n; ++i) {
      for (size_t k = 1; k < len; ++k) {
        const auto& lefts = chart.cells[i][k];
        const auto& rights = chart.cells[i + k][len - k];
        for (const auto& l : lefts) {
          for (const auto& r : rights) {
            for (const auto& rule : config.rules) {
              auto combined = combine(l->item, r->item, rule);
              if (!combined) continue;
              auto node = std::make_shared<Derivation>();
              node->item = *combined;
              node->rule = rule.id;
              node->children = {l, r};
              chart.add(i, len, node);
            }
          }
        }
      }
    }
  }

  result.derivations = chart.cells[0][n];
  result.truncated = chart.truncated;
  return result;
}

inline DeriveResult derive(const std::string& text, const Lexicon& lexicon,
                           const RuleConfig& config) {
  return derive(tokenize(text), lexicon, config);
}

}  // namespace catseq
