#pragma once

// JSON rule configuration: select builtin rules by id or define custom
// schemas inline.
//
//   {
//     "rules": [">", "<", ">B",
//               {"id": "wrap", "left": "(X/Y)/Z", "right": "Y\\W",
//                "result": "(X/Z)\\W", "lf": "\\f.\\g.\\x.\\y.f y (g x)"}],
//     "syntactic_raise": false,
//     "max_tokens": 20,
//     "max_items": 10000
//   }

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "catseq/rules.hpp"

namespace catseq {

inline RuleConfig rule_config_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  RuleConfig cfg;
  if (j.contains("preset")) cfg = preset(j["preset"].get<std::string>());
  if (j.contains("rules")) {
    cfg.rules.clear();
    for (const auto& r : j["rules"]) {
      if (r.is_string()) {
        cfg.rules.push_back(rule_by_id(r.get<std::string>()));
      } else {
        RuleSchema s;
        s.id = r.at("id").get<std::string>();
        s.left = parse_cat_schema(r.at("left").get<std::string>());
        s.right = parse_cat_schema(r.at("right").get<std::string>());
        s.result = parse_cat_schema(r.at("result").get<std::string>());
        s.comb = parse_lambda(r.at("lf").get<std::string>());
        cfg.rules.push_back(std::move(s));
      }
    }
  }
  if (j.contains("syntactic_raise")) cfg.syntactic_raise = j["syntactic_raise"].get<bool>();
  if (j.contains("max_tokens")) cfg.max_tokens = j["max_tokens"].get<size_t>();
  if (j.contains("max_items")) cfg.max_items = j["max_items"].get<size_t>();
  return cfg;
}

inline RuleConfig load_rule_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RuleMismatch("cannot open rule config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return rule_config_from_json(ss.str());
}

}  // namespace catseq
