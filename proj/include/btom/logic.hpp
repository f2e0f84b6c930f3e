#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "btom/error.hpp"
#include "btom/util.hpp"
#include "btom/world.hpp"

namespace btom {

// Typed object universe a formula is checked against. Indices line up with
// the GridMap catalogs so evaluation can read WorldState directly.
struct ModelSignature {
  std::vector<std::string> key_ids;
  std::vector<std::string> box_ids;
  std::vector<std::string> gem_ids;
  std::vector<std::string> color_names;
  std::vector<std::string> agent_ids{"player"};
  std::vector<int> key_colors;  // per key, index into color_names

  static ModelSignature from_map(const GridMap& map) {
    ModelSignature sig;
    for (const auto& k : map.keys) {
      sig.key_ids.push_back(k.id);
      sig.key_colors.push_back(k.color);
    }
    for (const auto& b : map.boxes) sig.box_ids.push_back(b.id);
    for (const auto& g : map.gems) sig.gem_ids.push_back(g.id);
    sig.color_names = map.colors;
    return sig;
  }

  const std::vector<std::string>& objects_of(const std::string& type) const {
    if (type == "key") return key_ids;
    if (type == "box") return box_ids;
    if (type == "gem") return gem_ids;
    if (type == "color") return color_names;
    throw NameError("unknown type: " + type);
  }

  bool is_type(const std::string& t) const {
    return t == "key" || t == "box" || t == "gem" || t == "color";
  }

  bool is_object(const std::string& id) const {
    for (const auto* list : {&key_ids, &box_ids, &gem_ids, &color_names, &agent_ids})
      for (const auto& o : *list)
        if (o == id) return true;
    return false;
  }

  int index_in(const std::vector<std::string>& list, const std::string& id) const {
    for (size_t i = 0; i < list.size(); ++i)
      if (list[i] == id) return static_cast<int>(i);
    return -1;
  }
};

inline const std::vector<std::string> kPredicates = {"iscolor", "inside", "empty"};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Atom {
  std::string pred;
  std::vector<std::string> args;  // object ids or ?variables
};
struct Not {
  FormulaPtr body;
};
struct And {
  FormulaPtr lhs, rhs;
};
struct Or {
  FormulaPtr lhs, rhs;
};
struct Quant {
  bool universal = false;  // false = exists
  std::string var;         // includes the leading '?'
  std::string type;
  FormulaPtr body;
};

class Formula {
 public:
  using Node = std::variant<Atom, Not, And, Or, Quant>;
  explicit Formula(Node n) : node_(std::move(n)) {}
  const Node& node() const { return node_; }

  static FormulaPtr atom(std::string pred, std::vector<std::string> args) {
    return std::make_shared<Formula>(Atom{std::move(pred), std::move(args)});
  }
  static FormulaPtr negation(FormulaPtr f) { return std::make_shared<Formula>(Not{std::move(f)}); }
  static FormulaPtr conj(FormulaPtr a, FormulaPtr b) {
    return std::make_shared<Formula>(And{std::move(a), std::move(b)});
  }
  static FormulaPtr disj(FormulaPtr a, FormulaPtr b) {
    return std::make_shared<Formula>(Or{std::move(a), std::move(b)});
  }
  static FormulaPtr exists(std::string var, std::string type, FormulaPtr body) {
    return std::make_shared<Formula>(Quant{false, std::move(var), std::move(type), std::move(body)});
  }
  static FormulaPtr forall(std::string var, std::string type, FormulaPtr body) {
    return std::make_shared<Formula>(Quant{true, std::move(var), std::move(type), std::move(body)});
  }

 private:
  Node node_;
};

// believes-wrapped formula: psi = (believes agent body).
struct EpistemicStatement {
  std::string agent;
  FormulaPtr body;
};

inline bool formulas_equal(const Formula& a, const Formula& b) {
  if (a.node().index() != b.node().index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node());
        if constexpr (std::is_same_v<T, Atom>) {
          return x.pred == y.pred && x.args == y.args;
        } else if constexpr (std::is_same_v<T, Not>) {
          return formulas_equal(*x.body, *y.body);
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          return formulas_equal(*x.lhs, *y.lhs) && formulas_equal(*x.rhs, *y.rhs);
        } else {
          return x.universal == y.universal && x.var == y.var && x.type == y.type &&
                 formulas_equal(*x.body, *y.body);
        }
      },
      a.node());
}

// --- printing -------------------------------------------------------------

inline std::string print_formula(const Formula& f) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom>) {
          std::string s = "(" + n.pred;
          for (const auto& a : n.args) s += " " + a;
          return s + ")";
        } else if constexpr (std::is_same_v<T, Not>) {
          return "(not " + print_formula(*n.body) + ")";
        } else if constexpr (std::is_same_v<T, And>) {
          return "(and " + print_formula(*n.lhs) + " " + print_formula(*n.rhs) + ")";
        } else if constexpr (std::is_same_v<T, Or>) {
          return "(or " + print_formula(*n.lhs) + " " + print_formula(*n.rhs) + ")";
        } else {
          return std::string("(") + (n.universal ? "forall" : "exists") + " (" + n.var + " - " +
                 n.type + ") " + print_formula(*n.body) + ")";
        }
      },
      f.node());
}

inline std::string print_statement(const EpistemicStatement& st) {
  return "(believes " + st.agent + " " + print_formula(*st.body) + ")";
}

// --- parsing ---------------------------------------------------------------

namespace detail {

struct SExpr {
  // leaf symbol xor list
  std::string sym;
  std::vector<SExpr> list;
  bool is_leaf = false;
};

inline std::vector<std::string> tokenize_sexpr(const std::string& text) {
  std::vector<std::string> toks;
  std::string cur;
  for (char c : text) {
    if (c == '(' || c == ')') {
      if (!cur.empty()) { toks.push_back(cur); cur.clear(); }
      toks.push_back(std::string(1, c));
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) { toks.push_back(cur); cur.clear(); }
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) toks.push_back(cur);
  return toks;
}

inline SExpr read_sexpr(const std::vector<std::string>& toks, size_t& pos) {
  if (pos >= toks.size()) throw SyntaxError("unexpected end of input");
  if (toks[pos] == "(") {
    SExpr e;
    ++pos;
    while (pos < toks.size() && toks[pos] != ")") e.list.push_back(read_sexpr(toks, pos));
    if (pos >= toks.size()) throw SyntaxError("missing ')'");
    ++pos;
    return e;
  }
  if (toks[pos] == ")") throw SyntaxError("unexpected ')'");
  SExpr e;
  e.is_leaf = true;
  e.sym = to_lower(toks[pos++]);
  return e;
}

inline bool is_variable(const std::string& s) { return !s.empty() && s[0] == '?'; }

// Right-fold an n-ary and/or into binary nodes.
template <typename MakeBinary>
FormulaPtr fold_right(std::vector<FormulaPtr> parts, MakeBinary mk) {
  FormulaPtr acc = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;) acc = mk(parts[i], acc);
  return acc;
}

inline FormulaPtr build_formula(const SExpr& e, const ModelSignature& sig,
                                std::vector<std::string>& bound) {
  if (e.is_leaf) throw SyntaxError("expected a list, got symbol '" + e.sym + "'");
  if (e.list.empty()) throw SyntaxError("empty list");
  if (!e.list[0].is_leaf) throw SyntaxError("operator position must be a symbol");
  const std::string& head = e.list[0].sym;

  if (head == "not") {
    if (e.list.size() != 2) throw SyntaxError("not takes exactly one argument");
    return Formula::negation(build_formula(e.list[1], sig, bound));
  }
  if (head == "and" || head == "or") {
    if (e.list.size() < 3) throw SyntaxError(head + " takes at least two arguments");
    std::vector<FormulaPtr> parts;
    for (size_t i = 1; i < e.list.size(); ++i) parts.push_back(build_formula(e.list[i], sig, bound));
    if (head == "and") return fold_right(std::move(parts), Formula::conj);
    return fold_right(std::move(parts), Formula::disj);
  }
  if (head == "exists" || head == "forall") {
    if (e.list.size() != 3) throw SyntaxError(head + " takes a binder and a body");
    const SExpr& binder = e.list[1];
    if (binder.is_leaf || binder.list.size() != 3 || !binder.list[0].is_leaf ||
        !binder.list[1].is_leaf || !binder.list[2].is_leaf || binder.list[1].sym != "-")
      throw SyntaxError("binder must look like (?v - type)");
    const std::string& var = binder.list[0].sym;
    const std::string& type = binder.list[2].sym;
    if (!is_variable(var)) throw SyntaxError("binder variable must start with '?'");
    if (!sig.is_type(type)) throw NameError("unknown type: " + type);
    bound.push_back(var);
    FormulaPtr body = build_formula(e.list[2], sig, bound);
    bound.pop_back();
    if (head == "exists") return Formula::exists(var, type, std::move(body));
    return Formula::forall(var, type, std::move(body));
  }

  // atom
  bool known = false;
  for (const auto& p : kPredicates) known = known || p == head;
  if (!known) throw NameError("unknown predicate: " + head);
  std::vector<std::string> args;
  for (size_t i = 1; i < e.list.size(); ++i) {
    if (!e.list[i].is_leaf) throw SyntaxError("atom arguments must be symbols");
    const std::string& a = e.list[i].sym;
    if (is_variable(a)) {
      bool found = false;
      for (const auto& v : bound) found = found || v == a;
      if (!found) throw ScopeError("unbound variable: " + a);
    } else if (!sig.is_object(a)) {
      throw NameError("unknown object: " + a);
    }
    args.push_back(a);
  }
  if ((head == "iscolor" || head == "inside") && args.size() != 2)
    throw SyntaxError(head + " takes two arguments");
  if (head == "empty" && args.size() != 1) throw SyntaxError("empty takes one argument");
  return Formula::atom(head, std::move(args));
}

}  // namespace detail

struct ParsedFormula {
  // agent is set when the input was believes-wrapped
  std::optional<std::string> agent;
  FormulaPtr body;

  EpistemicStatement as_statement(const std::string& default_agent = "player") const {
    return EpistemicStatement{agent.value_or(default_agent), body};
  }
};

// Accepts bare formulas and (believes <agent> <formula>) statements.
inline ParsedFormula parse_formula(const std::string& text, const ModelSignature& sig) {
  auto toks = detail::tokenize_sexpr(text);
  size_t pos = 0;
  detail::SExpr e = detail::read_sexpr(toks, pos);
  if (pos != toks.size()) throw SyntaxError("trailing input after formula");

  ParsedFormula out;
  const detail::SExpr* body = &e;
  if (!e.is_leaf && !e.list.empty() && e.list[0].is_leaf && e.list[0].sym == "believes") {
    if (e.list.size() != 3 || !e.list[1].is_leaf)
      throw SyntaxError("believes takes an agent and a formula");
    const std::string& agent = e.list[1].sym;
    if (sig.index_in(sig.agent_ids, agent) < 0) throw NameError("unknown agent: " + agent);
    out.agent = agent;
    body = &e.list[2];
  }
  std::vector<std::string> bound;
  out.body = detail::build_formula(*body, sig, bound);
  return out;
}

// --- evaluation -------------------------------------------------------------

using Binding = std::map<std::string, std::string>;

namespace detail {

inline const std::string& resolve_arg(const std::string& a, const Binding& binding) {
  if (!is_variable(a)) return a;
  auto it = binding.find(a);
  if (it == binding.end()) throw UnboundVariable("unbound variable: " + a);
  return it->second;
}

inline bool eval_atom(const Atom& atom, const WorldState& state, const ModelSignature& sig,
                      const Binding& binding) {
  if (atom.pred == "iscolor") {
    const std::string& obj = resolve_arg(atom.args[0], binding);
    const std::string& color = resolve_arg(atom.args[1], binding);
    int k = sig.index_in(sig.key_ids, obj);
    int c = sig.index_in(sig.color_names, color);
    if (k < 0 || c < 0) return false;  // only keys have colors
    return sig.key_colors[k] == c;
  }
  if (atom.pred == "inside") {
    const std::string& obj = resolve_arg(atom.args[0], binding);
    const std::string& box = resolve_arg(atom.args[1], binding);
    int k = sig.index_in(sig.key_ids, obj);
    int b = sig.index_in(sig.box_ids, box);
    if (k < 0 || b < 0) return false;
    return state.box_contents[b] == k;
  }
  // empty
  const std::string& box = resolve_arg(atom.args[0], binding);
  int b = sig.index_in(sig.box_ids, box);
  if (b < 0) return false;
  return state.box_contents[b] < 0;
}

inline bool eval_impl(const Formula& f, const WorldState& state, const ModelSignature& sig,
                      Binding& binding) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom>) {
          return eval_atom(n, state, sig, binding);
        } else if constexpr (std::is_same_v<T, Not>) {
          return !eval_impl(*n.body, state, sig, binding);
        } else if constexpr (std::is_same_v<T, And>) {
          return eval_impl(*n.lhs, state, sig, binding) && eval_impl(*n.rhs, state, sig, binding);
        } else if constexpr (std::is_same_v<T, Or>) {
          return eval_impl(*n.lhs, state, sig, binding) || eval_impl(*n.rhs, state, sig, binding);
        } else {
          // save any shadowed outer binding of the same variable
          std::optional<std::string> shadowed;
          if (auto it = binding.find(n.var); it != binding.end()) shadowed = it->second;
          bool result = n.universal;
          for (const auto& obj : sig.objects_of(n.type)) {
            binding[n.var] = obj;
            bool v = eval_impl(*n.body, state, sig, binding);
            if (v != n.universal) { result = v; break; }
          }
          if (shadowed)
            binding[n.var] = *shadowed;
          else
            binding.erase(n.var);
          return result;
        }
      },
      f.node());
}

}  // namespace detail

// Standard first-order semantics; quantifiers range over the signature's
// objects of the binder's type (forall over an empty type is true, exists is
// false). The binding is never mutated.
inline bool evaluate(const Formula& f, const WorldState& state, const ModelSignature& sig,
                     const Binding& binding) {
  Binding scratch = binding;
  return detail::eval_impl(f, state, sig, scratch);
}

inline bool evaluate(const Formula& f, const WorldState& state, const ModelSignature& sig) {
  Binding scratch;
  return detail::eval_impl(f, state, sig, scratch);
}

enum class TruthClass { AlwaysTrue, AlwaysFalse, Contingent };

// Classify a closed formula by exhaustive evaluation over the given
// hypothesis-space states (typically the expanded initial states).
inline TruthClass tautology_check_smallmodel(const Formula& f, const ModelSignature& sig,
                                             std::span<const WorldState> states,
                                             size_t enumeration_cap = 1000000) {
  if (states.size() > enumeration_cap)
    throw HypothesisSpaceTooLarge("state space of " + std::to_string(states.size()) +
                                  " exceeds enumeration cap " + std::to_string(enumeration_cap));
  bool any_true = false, any_false = false;
  for (const auto& s : states) {
    if (evaluate(f, s, sig))
      any_true = true;
    else
      any_false = true;
    if (any_true && any_false) return TruthClass::Contingent;
  }
  return any_true ? TruthClass::AlwaysTrue : TruthClass::AlwaysFalse;
}

}  // namespace btom
