#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "catseq/derive.hpp"
#include "catseq/lexicon.hpp"
#include "catseq/render.hpp"
#include "catseq/sexpr.hpp"

using namespace catseq;

namespace {

std::string fx(const std::string& name) {
  return std::string(CATSEQ_FIXTURES_DIR) + "/" + name;
}

// Dual comparison for logical-form goldens: either the raw normal form or its
// display lifting (inner abstractions hoisted to the binder prefix) matches.
bool lf_matches(const TermPtr& lf, const TermPtr& golden) {
  return alpha_eq(lf, golden) || alpha_eq(display_lf(lf), golden);
}

DerivPtr find_root(const DeriveResult& res, const std::string& cat, const std::string& golden_lf,
                   const std::set<std::string>& golden_free = {}) {
  TermPtr golden = parse_lambda(golden_lf, golden_free);
  for (const auto& d : res.derivations)
    if (print_cat(d->item.cat) == cat && lf_matches(d->item.lf, golden)) return d;
  return nullptr;
}

std::vector<Literal> lits(const std::string& text, const std::set<std::string>& binders = {}) {
  std::vector<Literal> out;
  for (const auto& e : parse_sexprs(text)) out.push_back(literal_from_sexpr(e, binders));
  return out;
}

// Independent oracle: enumerate every binary bracketing over every lexical
// choice and apply every rule at every node, without chart sharing. Returns
// the deduplicated full-span item keys.
std::set<std::string> oracle_root_keys(const std::vector<std::vector<Item>>& lex,
                                       const RuleConfig& cfg) {
  std::function<std::vector<Item>(size_t, size_t)> span = [&](size_t i,
                                                              size_t j) -> std::vector<Item> {
    if (j - i == 1) return lex[i];
    std::vector<Item> out;
    std::set<std::string> seen;
    for (size_t k = i + 1; k < j; ++k) {
      for (const auto& l : span(i, k)) {
        for (const auto& r : span(k, j)) {
          for (const auto& rule : cfg.rules) {
            auto c = combine(l, r, rule);
            if (c && seen.insert(detail::item_key(*c)).second) out.push_back(*c);
          }
        }
      }
    }
    return out;
  };
  std::set<std::string> keys;
  for (const auto& it : span(0, lex.size())) keys.insert(detail::item_key(it));
  return keys;
}

std::set<std::string> cky_root_keys(const DeriveResult& res) {
  std::set<std::string> keys;
  for (const auto& d : res.derivations) keys.insert(detail::item_key(d->item));
  return keys;
}

std::vector<std::vector<Item>> lex_cells(const Lexicon& lex,
                                         const std::vector<std::string>& tokens) {
  std::vector<std::vector<Item>> out;
  for (const auto& t : tokens) out.push_back(lex.lookup(t));
  return out;
}

}  // namespace

TEST_CASE("chart results match the brute-force bracketing oracle") {
  SECTION("block stacking, full invariant rule set") {
    Lexicon lex = load_lexicon(fx("blocks.lex"));
    std::vector<std::string> tokens = {"John", "B2", "pick-up"};
    RuleConfig cfg = preset("invariant");
    auto got = cky_root_keys(derive(tokens, lex, cfg));
    auto want = oracle_root_keys(lex_cells(lex, tokens), cfg);
    CHECK(got == want);
    CHECK_FALSE(got.empty());
  }
  SECTION("five-token control sentence, language rule set") {
    Lexicon lex = load_lexicon(fx("english.lex"));
    std::vector<std::string> tokens = {"Mary", "persuaded", "John", "to", "study"};
    RuleConfig cfg = preset("language");
    auto got = cky_root_keys(derive(tokens, lex, cfg));
    auto want = oracle_root_keys(lex_cells(lex, tokens), cfg);
    CHECK(got == want);
    CHECK_FALSE(got.empty());
  }
  SECTION("planning rules without raising") {
    Lexicon lex = load_lexicon(fx("flight_compose.lex"));
    std::vector<std::string> tokens = {"John", "fly", "buy", "ticket"};
    RuleConfig cfg = preset("planning");
    cfg.syntactic_raise = false;  // the oracle models combination only
    auto got = cky_root_keys(derive(tokens, lex, cfg));
    auto want = oracle_root_keys(lex_cells(lex, tokens), cfg);
    CHECK(got == want);
    CHECK_FALSE(got.empty());
  }
}

TEST_CASE("tokenize splits on whitespace") {
  CHECK(tokenize("  John  B2\tpick-up ") == std::vector<std::string>{"John", "B2", "pick-up"});
  CHECK(tokenize("").empty());
}

TEST_CASE("derive rejects unknown tokens and over-long inputs") {
  Lexicon lex = load_lexicon(fx("blocks.lex"));
  CHECK_THROWS_AS(derive("John B3 pick-up", lex, preset("planning")), UnknownToken);
  RuleConfig tiny = preset("planning");
  tiny.max_tokens = 2;
  CHECK_THROWS_AS(derive("John B2 pick-up", lex, tiny), TooManyTokens);
}

TEST_CASE("item cap marks the result truncated") {
  Lexicon lex = load_lexicon(fx("flight_compose.lex"));
  RuleConfig cfg = preset("planning");
  cfg.max_items = 3;
  DeriveResult res = derive("John fly buy ticket", lex, cfg);
  CHECK(res.truncated);
}

TEST_CASE("lexicon parsing validates entries") {
  Lexicon lex = load_lexicon(fx("blocks.lex"));
  CHECK(lex.has("pick-up"));
  CHECK(lex.lookup("pick-up").size() == 2);
  CHECK(lex.lookup("nothere").empty());
  CHECK_THROWS_AS(parse_lexicon("(entry \"x\" (cat S))"), LexiconError);
  CHECK_THROWS_AS(parse_lexicon("(entry \"x\" (lf \"a\"))"), LexiconError);
  CHECK_THROWS_AS(parse_lexicon("(entry \"x\" (cat S) (lf \"a\") (huh 1))"), LexiconError);
  CHECK_THROWS_AS(parse_lexicon("(nope)"), LexiconError);
}

TEST_CASE("block pick-up derives a plan-ready sentence") {
  Lexicon lex = load_lexicon(fx("blocks.lex"));
  DeriveResult res = derive("John B2 pick-up", lex, preset("planning"));
  DerivPtr root = find_root(res, "S", "\\z.pickup b2 john");
  REQUIRE(root != nullptr);
  // The primary reading is first in chart order.
  CHECK(res.derivations.front() == root);
  CHECK(print_literals(root->item.conds.pre) ==
        "inhand(john,nil), clear(b2), block(b2), on(b2,z)");
}

TEST_CASE("flight composition spans the whole journey") {
  Lexicon lex = load_lexicon(fx("flight_compose.lex"));
  DeriveResult res = derive("John fly buy ticket", lex, preset("planning"));
  DerivPtr root =
      find_root(res, "S/T", "\\x.\\y.\\z.takeflight (buy z ticket x) y john");
  REQUIRE(root != nullptr);

  CondLists expect;
  expect.pre = lits(
      "(able john (buy z2 ticket x)) (flight z) (payable ticket) (funds F) (have x F)",
      {"x", "z", "z2"});
  expect.add = lits("(at john (dest z)) (at z (dest z)) (have x ticket) (able x z2)",
                    {"x", "z", "z2"});
  expect.del = lits("(at z (orig z)) (at john here)", {"z"});
  CHECK(conds_equivalent(root->item.conds, expect));
}

TEST_CASE("flight substitution closes the buyer role") {
  Lexicon lex = load_lexicon(fx("flight_subst.lex"));
  DeriveResult res = derive("John fly buy ticket", lex, preset("planning"));
  DerivPtr root = find_root(res, "S", "\\y.\\z.takeflight (buy z ticket john) y john");
  REQUIRE(root != nullptr);

  // Same conditions as the composed variant with the buyer fixed to john.
  CondLists expect;
  expect.pre = lits(
      "(able john (buy z2 ticket john)) (flight z) (payable ticket) (funds F) (have john F)",
      {"z", "z2"});
  expect.add = lits("(at john (dest z)) (at z (dest z)) (have john ticket) (able john z2)",
                    {"z", "z2"});
  expect.del = lits("(at z (orig z)) (at john here)", {"z"});
  CHECK(conds_equivalent(root->item.conds, expect));
}

TEST_CASE("flight expectation composes a conjunction for a second agent") {
  Lexicon lex = load_lexicon(fx("flight_expect.lex"));
  DeriveResult res = derive("John fly Harry buy ticket", lex, preset("planning"));
  DerivPtr root = find_root(
      res, "S/S", "\\x.\\z.takeflight (\\z2.and (buy z2 ticket h) (achieve x h)) z john");
  REQUIRE(root != nullptr);

  CondLists expect;
  expect.pre = lits(
      "(able john (and (buy z2 ticket h) (achieve x h))) (flight z) (payable ticket)"
      " (funds F) (have h F)",
      {"x", "z", "z2"});
  expect.add = lits(
      "(at john (dest z)) (at z (dest z)) (have h ticket) (able h z2) (attain h x)",
      {"x", "z", "z2"});
  expect.del = lits("(at z (orig z)) (at john here) (want h (do h x))", {"x", "z"});
  CHECK(conds_equivalent(root->item.conds, expect));
}

TEST_CASE("raising plus subcomposition parses the split instrument phrase") {
  Lexicon lex = load_lexicon(fx("flight_plane.lex"));
  DeriveResult res = derive("plane John fly", lex, preset("planning"));
  DerivPtr root = find_root(res, "S/(S\\T)", "\\h.\\x.takeflight (h x) plane john");
  REQUIRE(root != nullptr);
  // The tree must show the raise steps on both nominals.
  std::string tree = render(*root, "ascii");
  CHECK(tree.find("[raise]") != std::string::npos);
  CHECK(tree.find("[>D]") != std::string::npos);
}

TEST_CASE("control verbs pick distinct controllers") {
  Lexicon lex = load_lexicon(fx("english.lex"));
  auto parse_s = [&](const std::string& sent, const std::string& golden) {
    DeriveResult res = derive(sent, lex, preset("language"));
    DerivPtr root = find_root(res, "S", golden);
    REQUIRE(root != nullptr);
    return root;
  };

  DerivPtr persuaded =
      parse_s("Mary persuaded John to study", "persuade.0 (study.0 john.0) john.0 mary.0");
  CondLists expect;
  expect.pre = lits("(not (do john.0 (study.0 john.0))) (know mary.0 john.0)");
  expect.add = lits("(attempt john.0 (study.0 john.0)) (convince mary.0 john.0)");
  CHECK(conds_equivalent(persuaded->item.conds, expect));

  parse_s("Mary promised John to study", "promise.0 (study.0 mary.0) john.0 mary.0");
  parse_s("Mary expected John to study", "expect.0 (study.0 john.0) mary.0");
  parse_s("Mary wanted John to study", "want.0 (study.0 john.0) mary.0");
}

TEST_CASE("gapped coordination shares both verb arguments") {
  Lexicon lex = load_lexicon(fx("english.lex"));
  DeriveResult res = derive("filed without reading", lex, preset("language"));
  REQUIRE(res.derivations.size() == 1);
  DerivPtr root = find_root(res, "(S\\NP)/NP", "\\w.\\x.wout (read w x) (file w x)");
  REQUIRE(root != nullptr);
}

TEST_CASE("intercalation assembles interrupted verb clusters") {
  Lexicon lex = load_lexicon(fx("english_l.lex"));

  DeriveResult mary = derive("Mary to buy", lex, preset("language"));
  REQUIRE(mary.derivations.size() == 1);
  CHECK(find_root(mary, "((S\\NP)/NP)\\(((S\\NP)/VP)/NP)",
                  "\\f.\\y.f mary (\\x.buy y x)", {}) != nullptr);

  DeriveResult full = derive("persuaded Mary to buy", lex, preset("language"));
  CHECK(find_root(full, "(S\\NP)/NP", "\\w.\\y.persuade (buy w mary) mary y") != nullptr);

  DeriveResult rug = derive("the-rug over", lex, preset("language"));
  CHECK(find_root(rug, "((S\\NP)/NP)\\(((S\\NP)/PP)/NP)", "\\f.\\y.f rug (over y)") != nullptr);

  DeriveResult folded = derive("folded the-rug over", lex, preset("language"));
  CHECK(find_root(folded, "(S\\NP)/NP", "\\y.\\z.fold (over y) rug z") != nullptr);
}

TEST_CASE("split constituents derive through lexically raised hosts") {
  Lexicon lex = load_lexicon(fx("turkish_split.lex"));
  DeriveResult res = derive("Adamin beni evi etkiledi", lex, preset("language"));
  REQUIRE(res.derivations.size() == 1);
  CHECK(find_root(res, "S", "impress me (poss house man)") != nullptr);
  CHECK(res.derivations[0]->rule == "<");
}

TEST_CASE("embedded clause relativization keeps the matrix agent") {
  Lexicon lex = load_lexicon(fx("turkish_embed.lex"));
  DeriveResult res = derive("Hasanin bizi kusattik sandigi universite-rel", lex,
                            preset("language"));
  CHECK(find_root(res, "NP/NP", "\\x.rel (believe (surround x we) hasan) x") != nullptr);
}

TEST_CASE("tagged categories force the idiomatic reading") {
  Lexicon lex = load_lexicon(fx("chinese.lex"));

  DeriveResult idiom = derive("Zhangsan sheng qi", lex, preset("language"));
  REQUIRE(idiom.derivations.size() == 1);
  DerivPtr root = idiom.derivations[0];
  CHECK(print_cat(root->item.cat) == "S");
  CHECK(print_term(root->item.lf) == "angry^qi zhangsan");

  DeriveResult plain = derive("Zhangsan sheng haoda-de-qi", lex, preset("language"));
  REQUIRE(plain.derivations.size() == 1);
  CHECK(print_term(plain.derivations[0]->item.lf) == "generate air zhangsan");
}

TEST_CASE("ascii render shows rules, leaves, and conditions") {
  Lexicon lex = load_lexicon(fx("blocks.lex"));
  DeriveResult res = derive("John B2 pick-up", lex, preset("planning"));
  REQUIRE(!res.derivations.empty());
  std::string tree = render(*res.derivations.front(), "ascii");
  CHECK(tree.find("[lex John] T : john") != std::string::npos);
  CHECK(tree.find("[lex pick-up]") != std::string::npos);
  CHECK(tree.find("pre: ") != std::string::npos);
  CHECK(tree.find("[<] S : \\z.pickup b2 john") != std::string::npos);
}

TEST_CASE("sexpr render is machine readable") {
  Lexicon lex = load_lexicon(fx("blocks.lex"));
  DeriveResult res = derive("John B2 pick-up", lex, preset("planning"));
  REQUIRE(!res.derivations.empty());
  std::string text = render(*res.derivations.front(), "sexpr");
  SExpr e = parse_sexpr(text);
  REQUIRE_FALSE(e.is_atom);
  CHECK(e.head_is("node"));
  CHECK(e.at(1).atom == "<");
}
