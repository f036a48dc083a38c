#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <set>

#include "catseq/derive.hpp"
#include "catseq/perm.hpp"

using namespace catseq;

namespace {

// Independent separability oracle: recursive divide-and-check, no pattern
// machinery. A permutation is separable when some split point cuts it into a
// prefix block entirely below or above the suffix block, both separable.
bool oracle_separable(const Permutation& p) {
  if (p.size() <= 1) return true;
  for (size_t k = 1; k < p.size(); ++k) {
    int pre_max = *std::max_element(p.begin(), p.begin() + static_cast<long>(k));
    int pre_min = *std::min_element(p.begin(), p.begin() + static_cast<long>(k));
    int suf_max = *std::max_element(p.begin() + static_cast<long>(k), p.end());
    int suf_min = *std::min_element(p.begin() + static_cast<long>(k), p.end());
    if (pre_max < suf_min || pre_min > suf_max) {
      Permutation pre(p.begin(), p.begin() + static_cast<long>(k));
      Permutation suf(p.begin() + static_cast<long>(k), p.end());
      return oracle_separable(pre) && oracle_separable(suf);
    }
  }
  return false;
}

std::vector<Permutation> all_permutations(int n) {
  Permutation p(static_cast<size_t>(n));
  std::iota(p.begin(), p.end(), 1);
  std::vector<Permutation> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

TEST_CASE("permutation parsing accepts compact and comma forms") {
  CHECK(parse_permutation("3124") == Permutation{3, 1, 2, 4});
  CHECK(parse_permutation("3,1,2,4") == Permutation{3, 1, 2, 4});
  CHECK(parse_permutation("10,2,3,4,5,6,7,8,9,1") ==
        Permutation{10, 2, 3, 4, 5, 6, 7, 8, 9, 1});
  CHECK(print_permutation(Permutation{3, 1, 2, 4}) == "3124");
  CHECK(print_permutation(Permutation{10, 2, 1}) == "10,2,1");
  CHECK_THROWS_AS(parse_permutation("3125"), PermError);
  CHECK_THROWS_AS(parse_permutation("3122"), PermError);
  CHECK_THROWS_AS(parse_permutation("31a4"), PermError);
  CHECK_THROWS_AS(parse_permutation(""), PermError);
}

TEST_CASE("pattern containment is order-isomorphic subsequence search") {
  CHECK(contains_pattern({3, 1, 4, 2}, {3, 1, 4, 2}));
  CHECK(contains_pattern({5, 3, 1, 4, 2}, {3, 1, 4, 2}));
  CHECK_FALSE(contains_pattern({1, 2, 3, 4}, {3, 1, 4, 2}));
  CHECK(contains_pattern({1, 2, 3}, {1, 2}));
  CHECK_FALSE(contains_pattern({1, 2}, {1, 2, 3}));
  // the published crossing example avoids 2413 but contains 2431
  CHECK_FALSE(contains_pattern(parse_permutation("2546371"), {2, 4, 1, 3}));
  CHECK(contains_pattern(parse_permutation("2546371"), {2, 4, 3, 1}));
}

TEST_CASE("separability matches the recursive block oracle") {
  for (int n = 1; n <= 6; ++n) {
    for (const auto& p : all_permutations(n)) {
      INFO(print_permutation(p));
      REQUIRE(is_separable(p) == oracle_separable(p));
    }
  }
}

TEST_CASE("separable counts match the known sequence") {
  std::vector<long long> want = {1, 2, 6, 22, 90, 394, 1806};
  for (int n = 1; n <= 7; ++n) CHECK(separable_count(n) == want[static_cast<size_t>(n - 1)]);
}

TEST_CASE("the two forbidden patterns are the only non-separable quartets") {
  std::set<std::string> bad;
  for (const auto& p : all_permutations(4))
    if (!is_separable(p)) bad.insert(print_permutation(p));
  CHECK(bad == std::set<std::string>{"3142", "2413"});
}

TEST_CASE("separation trees split at the shortest block prefix") {
  CHECK(print_septree(separation_tree(parse_permutation("3124"))) == "+(-(3,+(1,2)),4)");
  CHECK(print_septree(separation_tree(parse_permutation("1"))) == "1");
  CHECK(print_septree(separation_tree(parse_permutation("21"))) == "-(2,1)");

  SepTreePtr big = separation_tree(parse_permutation("2546371"));
  CHECK(valid_separation_tree(big, parse_permutation("2546371")));
  CHECK(septree_leaves(big) == parse_permutation("2546371"));

  CHECK_THROWS_AS(separation_tree(parse_permutation("3142")), NotSeparable);
  CHECK_THROWS_AS(separation_tree(parse_permutation("2413")), NotSeparable);
}

TEST_CASE("every separable permutation has a valid tree and only those do") {
  for (int n = 1; n <= 6; ++n) {
    for (const auto& p : all_permutations(n)) {
      INFO(print_permutation(p));
      if (is_separable(p)) {
        SepTreePtr t = separation_tree(p);
        REQUIRE(valid_separation_tree(t, p));
      } else {
        REQUIRE_THROWS_AS(separation_tree(p), NotSeparable);
      }
    }
  }
}

TEST_CASE("tree validity rejects wrong leaves and wrong operators") {
  Permutation p = parse_permutation("12");
  SepTreePtr good = sep_node('+', sep_leaf(1), sep_leaf(2));
  CHECK(valid_separation_tree(good, p));
  CHECK_FALSE(valid_separation_tree(sep_node('-', sep_leaf(1), sep_leaf(2)), p));
  CHECK_FALSE(valid_separation_tree(sep_node('+', sep_leaf(2), sep_leaf(1)), p));
}

TEST_CASE("chain encoding assigns successor-directed categories") {
  auto items = encode_permutation(parse_permutation("3124"));
  REQUIRE(items.size() == 4);
  CHECK(print_cat(items[0].cat) == "3/4");
  CHECK(print_cat(items[1].cat) == "1/2");
  CHECK(print_cat(items[2].cat) == "2\\3");
  CHECK(print_cat(items[3].cat) == "4");
  CHECK(print_term(items[0].lf) == "\\x1.c1 x1");
  CHECK(print_term(items[3].lf) == "c4");
  CHECK(print_cat(encode_goal()) == "1");
}

TEST_CASE("split encoding covers exactly the two crossing benchmarks") {
  auto fwd = encode_permutation(parse_permutation("24135"), "split");
  std::vector<std::string> cats;
  for (const auto& it : fwd) cats.push_back(print_cat(it.cat));
  CHECK(cats == std::vector<std::string>{"2", "4/5", "(1\\4)/3", "3\\2", "5"});
  CHECK(print_term(fwd[2].lf) == "\\x1.\\x2.c3 x1 x2");

  auto bwd = encode_permutation(parse_permutation("53142"), "split");
  CHECK(print_cat(bwd[2].cat) == "(1/4)\\3");

  CHECK_THROWS_AS(encode_permutation(parse_permutation("12345"), "split"), PermError);
  CHECK_THROWS_AS(encode_permutation(parse_permutation("3124"), "nope"), PermError);
}

namespace {

bool derives_goal(const std::vector<Item>& items, const RuleConfig& cfg) {
  Lexicon lex;
  for (size_t i = 0; i < items.size(); ++i)
    lex.entries.push_back({"w" + std::to_string(i + 1), items[i]});
  std::vector<std::string> tokens;
  for (size_t i = 0; i < items.size(); ++i) tokens.push_back("w" + std::to_string(i + 1));
  for (const auto& d : derive(tokens, lex, cfg).derivations)
    if (cat_equal(d->item.cat, encode_goal())) return true;
  return false;
}

}  // namespace

TEST_CASE("chain derivability under the invariant rules is separability") {
  RuleConfig inv = preset("invariant");
  for (const auto& p : all_permutations(4)) {
    INFO(print_permutation(p));
    REQUIRE(derives_goal(encode_permutation(p), inv) == is_separable(p));
  }
}

TEST_CASE("crossing dependencies need the disharmonic intercalation rules") {
  RuleConfig inv = preset("invariant");
  RuleConfig invl = preset("invariant_crossed_L");
  auto fwd = encode_permutation(parse_permutation("24135"), "split");
  auto bwd = encode_permutation(parse_permutation("53142"), "split");
  CHECK(derives_goal(fwd, invl));
  CHECK(derives_goal(bwd, invl));
  CHECK_FALSE(derives_goal(encode_permutation(parse_permutation("24135")), inv));
}
