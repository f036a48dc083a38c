// Command-line driver: derivation, plan execution, process traces, and
// permutation queries.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "catseq/catseq.hpp"
#include "catseq/config.hpp"

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

catseq::RuleConfig resolve_config(const std::string& preset_name, const std::string& config_path) {
  if (!config_path.empty()) return catseq::load_rule_config(config_path);
  return catseq::preset(preset_name);
}

json item_json(const catseq::Item& item) {
  json j;
  j["cat"] = catseq::print_cat(item.cat);
  j["lf"] = catseq::print_term(item.lf);
  if (!item.conds.empty()) j["conds"] = catseq::print_conds(item.conds);
  return j;
}

int cmd_derive(const std::string& lexicon_path, const std::string& preset_name,
               const std::string& config_path, const std::string& tokens,
               const std::string& format, const std::string& style) {
  catseq::Lexicon lex = catseq::load_lexicon(lexicon_path);
  catseq::RuleConfig cfg = resolve_config(preset_name, config_path);
  auto toks = catseq::tokenize(tokens);
  if (toks.empty()) {
    std::cerr << "error: empty token list\n";
    return 2;
  }
  catseq::DeriveResult res = catseq::derive(toks, lex, cfg);
  if (format == "json-lines") {
    for (const auto& d : res.derivations) {
      json j = item_json(d->item);
      j["rule"] = d->rule;
      j["render"] = catseq::render(*d, "sexpr");
      std::cout << j.dump() << "\n";
    }
  } else {
    for (size_t i = 0; i < res.derivations.size(); ++i) {
      std::cout << "derivation " << (i + 1) << " of " << res.derivations.size() << ":\n"
                << catseq::render(*res.derivations[i], style);
    }
    if (res.truncated) std::cout << "note: item limit reached; results may be incomplete\n";
  }
  return res.derivations.empty() ? 1 : 0;
}

int cmd_plan(const std::string& lexicon_path, const std::string& world_path,
             const std::string& preset_name, const std::string& config_path,
             const std::string& tokens, const std::string& format) {
  catseq::Lexicon lex = catseq::load_lexicon(lexicon_path);
  catseq::WorldState world = catseq::parse_world(slurp(world_path));
  catseq::RuleConfig cfg = resolve_config(preset_name, config_path);
  auto toks = catseq::tokenize(tokens);
  if (toks.empty()) {
    std::cerr << "error: empty token list\n";
    return 2;
  }
  catseq::DeriveResult res = catseq::derive(toks, lex, cfg);
  if (res.derivations.empty()) {
    std::cerr << "no derivation\n";
    return 1;
  }
  // Derivations are tried in chart order; the first is the primary reading,
  // so when nothing executes its error is the one worth reporting.
  std::optional<catseq::PlanError> first_error;
  for (const auto& d : res.derivations) {
    catseq::WorldState scratch = world;
    catseq::ExecEffects eff;
    auto err = catseq::execute(d->item.conds, scratch, &eff);
    if (err) {
      if (!first_error) first_error = err;
      continue;
    }
    if (format == "json-lines") {
      json j = item_json(d->item);
      json add = json::array(), del = json::array(), facts = json::array();
      for (const auto& l : eff.add) add.push_back(catseq::print_literal(l));
      for (const auto& l : eff.del) del.push_back(catseq::print_literal(l));
      for (const auto& f : scratch.facts) facts.push_back(catseq::print_literal(f));
      j["add"] = add;
      j["del"] = del;
      j["world"] = facts;
      std::cout << j.dump() << "\n";
    } else {
      std::cout << "plan: " << catseq::print_cat(d->item.cat) << " : "
                << catseq::print_term(d->item.lf) << "\n";
      std::cout << "add:";
      for (const auto& l : eff.add) std::cout << " " << catseq::print_literal(l) << ";";
      std::cout << "\ndel:";
      for (const auto& l : eff.del) std::cout << " " << catseq::print_literal(l) << ";";
      std::cout << "\nworld after:\n";
      for (const auto& f : scratch.facts) std::cout << "  " << catseq::print_literal(f) << "\n";
    }
    return 0;
  }
  std::cout << first_error->message << "\n";
  return 1;
}

int cmd_pi(const std::string& file, bool exhaustive, bool seeded, int depth, int steps,
           std::uint64_t seed, bool do_async, bool do_classify, int pred_true_count,
           const std::string& format) {
  catseq::ProcPtr p = catseq::parse_process(slurp(file));
  if (do_async) {
    std::cout << (catseq::check_async(p) ? "true" : "false") << "\n";
    return 0;
  }
  if (do_classify) {
    std::cout << catseq::to_string(catseq::classify_stance(p)) << "\n";
    return 0;
  }
  catseq::RunOptions opt;
  opt.mode = seeded && !exhaustive ? catseq::RunOptions::Seeded : catseq::RunOptions::Exhaustive;
  opt.depth = depth;
  opt.max_steps = steps;
  opt.seed = seed;
  if (pred_true_count >= 0) {
    auto counter = std::make_shared<int>(pred_true_count);
    opt.cond_eval = [counter](const catseq::Literal&) { return (*counter)-- > 0; };
  }
  catseq::Trace tr = catseq::run(p, opt);
  if (format == "json-lines") {
    for (const auto& e : tr.edges) {
      json j;
      j["from"] = e.from;
      j["to"] = e.to;
      j["rule"] = e.rule;
      if (!e.channel.empty()) j["channel"] = e.channel;
      if (!e.subst.empty()) j["subst"] = e.subst;
      if (!e.extruded.empty()) j["extruded"] = e.extruded;
      j["label"] = e.label;
      std::cout << j.dump() << "\n";
    }
    json fin;
    fin["states"] = tr.states.size();
    fin["bound_exceeded"] = tr.bound_exceeded;
    std::cout << fin.dump() << "\n";
  } else {
    for (size_t i = 0; i < tr.states.size(); ++i)
      std::cout << "state " << i << ": " << tr.states[i] << "\n";
    for (const auto& e : tr.edges) {
      std::cout << e.from << " -> " << e.to << ": " << e.label;
      if (!e.extruded.empty()) std::cout << " (scope extrusion of " << e.extruded << ")";
      std::cout << "\n";
    }
    if (tr.bound_exceeded) std::cout << "note: bound exceeded\n";
  }
  return tr.edges.empty() && tr.states.size() <= 1 && !catseq::step(p).empty() ? 1 : 0;
}

int cmd_perm(const std::string& perm_text, int count_n, bool separable, bool tree,
             const std::string& contains, const std::string& encode_style, bool do_encode) {
  if (count_n > 0) {
    std::cout << catseq::separable_count(count_n) << "\n";
    return 0;
  }
  if (perm_text.empty()) {
    std::cerr << "error: permutation required\n";
    return 2;
  }
  catseq::Permutation p = catseq::parse_permutation(perm_text);
  if (separable) {
    std::cout << (catseq::is_separable(p) ? "true" : "false") << "\n";
    return 0;
  }
  if (tree) {
    try {
      std::cout << catseq::print_septree(catseq::separation_tree(p)) << "\n";
      return 0;
    } catch (const catseq::NotSeparable& e) {
      std::cout << e.what() << "\n";
      return 1;
    }
  }
  if (!contains.empty()) {
    catseq::Permutation pat = catseq::parse_permutation(contains);
    std::cout << (catseq::contains_pattern(p, pat) ? "true" : "false") << "\n";
    return 0;
  }
  if (do_encode) {
    auto items = catseq::encode_permutation(p, encode_style.empty() ? "chain" : encode_style);
    for (size_t i = 0; i < items.size(); ++i) {
      std::cout << "w" << (i + 1) << " := " << catseq::print_cat(items[i].cat) << " : "
                << catseq::print_term(items[i].lf) << "\n";
    }
    return 0;
  }
  std::cerr << "error: choose one of --separable, --tree, --contains, --encode\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"categorial derivation, plan execution, process mobility, separability"};
  app.require_subcommand(1);

  std::string format = "text";
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json-lines"}));

  auto* derive_cmd = app.add_subcommand("derive", "derive a token sequence");
  std::string d_lex, d_preset = "language", d_config, d_tokens, d_style = "ascii";
  derive_cmd->add_option("--lexicon", d_lex, "lexicon file")->required();
  derive_cmd->add_option("--preset", d_preset, "rule preset");
  derive_cmd->add_option("--config", d_config, "JSON rule configuration file");
  derive_cmd->add_option("--style", d_style, "render style")
      ->check(CLI::IsMember({"ascii", "sexpr"}));
  derive_cmd->add_option("tokens", d_tokens, "whitespace-separated tokens")->required();

  auto* plan_cmd = app.add_subcommand("plan", "derive then execute against a world");
  std::string p_lex, p_world, p_preset = "planning", p_config, p_tokens;
  plan_cmd->add_option("--lexicon", p_lex, "lexicon file")->required();
  plan_cmd->add_option("--world", p_world, "world facts file")->required();
  plan_cmd->add_option("--preset", p_preset, "rule preset");
  plan_cmd->add_option("--config", p_config, "JSON rule configuration file");
  plan_cmd->add_option("tokens", p_tokens, "whitespace-separated tokens")->required();

  auto* pi_cmd = app.add_subcommand("pi", "run or analyse a process");
  std::string pi_file;
  bool pi_exhaustive = false, pi_seeded = false, pi_async = false, pi_classify = false;
  int pi_depth = 5, pi_steps = 50, pi_pred = -1;
  std::uint64_t pi_seed = 0;
  pi_cmd->add_option("file", pi_file, "process file")->required();
  pi_cmd->add_flag("--exhaustive", pi_exhaustive, "explore all interleavings (default)");
  pi_cmd->add_flag("--seeded", pi_seeded, "single random trace");
  pi_cmd->add_option("--depth", pi_depth, "exhaustive depth bound");
  pi_cmd->add_option("--steps", pi_steps, "seeded step bound");
  pi_cmd->add_option("--seed", pi_seed, "random seed");
  pi_cmd->add_flag("--check-async", pi_async, "print whether all senders are terminal");
  pi_cmd->add_flag("--classify", pi_classify, "print the stance classification");
  pi_cmd->add_option("--pred-true-count", pi_pred,
                     "world predicate evaluates true this many times, then false");

  auto* perm_cmd = app.add_subcommand("perm", "permutation queries");
  std::string pm_perm, pm_contains, pm_encode_style;
  bool pm_separable = false, pm_tree = false, pm_encode = false;
  int pm_count = 0;
  perm_cmd->add_option("permutation", pm_perm, "e.g. 3124 or 3,1,2,4");
  perm_cmd->add_flag("--separable", pm_separable, "print separability");
  perm_cmd->add_flag("--tree", pm_tree, "print the separation tree");
  perm_cmd->add_option("--contains", pm_contains, "pattern containment query");
  perm_cmd->add_flag("--encode", pm_encode, "print the category encoding");
  perm_cmd->add_option("--encode-style", pm_encode_style, "chain (default) or split");
  perm_cmd->add_option("--count", pm_count, "count separable permutations of size N");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(derive_cmd))
      return cmd_derive(d_lex, d_preset, d_config, d_tokens, format, d_style);
    if (app.got_subcommand(plan_cmd))
      return cmd_plan(p_lex, p_world, p_preset, p_config, p_tokens, format);
    if (app.got_subcommand(pi_cmd))
      return cmd_pi(pi_file, pi_exhaustive, pi_seeded, pi_depth, pi_steps, pi_seed, pi_async,
                    pi_classify, pi_pred, format);
    if (app.got_subcommand(perm_cmd))
      return cmd_perm(pm_perm, pm_count, pm_separable, pm_tree, pm_contains, pm_encode_style,
                      pm_encode);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
