#pragma once

// Text renderings of derivation trees.
//
// "ascii": indented tree, one node per line:
//     [>B] S/T : \x.\z.takeflight (buy z ticket x) z john
//          | pre: able(john,buy(z,ticket,x)); ...
//       [lex John] T : john
//       ...
// "sexpr": machine-readable nested lists.

#include <sstream>
#include <string>

#include "catseq/derive.hpp"

namespace catseq {

namespace detail {

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline void render_ascii(const Derivation& d, std::ostream& os, int depth) {
  std::string pad(static_cast<size_t>(depth) * 2, ' ');
  os << pad << '[' << d.rule;
  if (d.rule == "lex") os << ' ' << d.leaf_form;
  os << "] " << print_cat(d.item.cat) << " : " << print_term(d.item.lf) << '\n';
  if (!d.item.conds.empty())
    os << pad << "     | " << print_conds(d.item.conds) << '\n';
  for (const auto& c : d.children) render_ascii(*c, os, depth + 1);
}

inline void render_sexpr(const Derivation& d, std::ostream& os) {
  if (d.rule == "lex") {
    os << "(leaf " << quote(d.leaf_form) << " (cat " << quote(print_cat(d.item.cat)) << ") (lf "
       << quote(print_term(d.item.lf)) << "))";
    return;
  }
  os << "(node " << quote(d.rule) << " (cat " << quote(print_cat(d.item.cat)) << ") (lf "
     << quote(print_term(d.item.lf)) << ")";
  if (!d.item.conds.empty()) os << " (conds " << quote(print_conds(d.item.conds)) << ")";
  for (const auto& c : d.children) {
    os << ' ';
    render_sexpr(*c, os);
  }
  os << ')';
}

}  // namespace detail

inline std::string render(const Derivation& d, const std::string& style = "ascii") {
  std::ostringstream os;
  if (style == "sexpr") {
    detail::render_sexpr(d, os);
    os << '\n';
  } else {
    detail::render_ascii(d, os, 0);
  }
  return os.str();
}

}  // namespace catseq
