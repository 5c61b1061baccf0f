#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "acforge/core.hpp"
#include "acforge/nnf.hpp"

// Line-oriented text formats.
//
// Factor file:
//   var <name> <k> <val_1> ... <val_k>
//   factor <name> <m> <var_1> ... <var_m>
//   <table entries, row-major, last listed variable fastest>
//
// Circuit file: `ac`, var lines, one node per line in topological order
//   I <var> <val> | P <rational> | + <c> <id...> | * <c> <id...>
// then `root <id>`. Node ids are 0-based line positions.
//
// NNF file: `nnf`, var lines, nodes
//   L <var> <val> [-] | A <c> <id...> | O <c> <id...> | T | F
// then `root <id>`. A trailing `-` marks a negative literal.
//
// Lines whose first non-blank character is `#` are comments.
namespace acforge {

struct FactorFile {
  std::vector<Variable> variables;
  std::vector<std::string> names;
  std::vector<Factor> factors;
};

namespace detail {

class TokenStream {
 public:
  explicit TokenStream(std::istream& in) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
      ++number;
      std::size_t first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      std::istringstream ls(line);
      std::vector<std::string> toks;
      std::string t;
      while (ls >> t) toks.push_back(t);
      lines_.push_back({number, std::move(toks)});
    }
  }

  bool done() const { return pos_ >= lines_.size(); }
  const std::vector<std::string>& peek() const { return lines_[pos_].tokens; }
  std::size_t line_number() const {
    return pos_ < lines_.size() ? lines_[pos_].number : (lines_.empty() ? 0 : lines_.back().number);
  }
  const std::vector<std::string>& next() { return lines_[pos_++].tokens; }

  [[noreturn]] void fail(const std::string& why) const {
    throw InputError("line " + std::to_string(line_number()) + ": " + why);
  }

 private:
  struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
  };
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

inline std::size_t parse_count(const TokenStream& ts, const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    ts.fail("expected a count, got '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    ts.fail("count out of range '" + s + "'");
  }
}

inline Variable parse_var_line(const TokenStream& ts, const std::vector<std::string>& t) {
  if (t.size() < 3) ts.fail("malformed var line");
  std::size_t k = parse_count(ts, t[2]);
  if (t.size() != 3 + k) ts.fail("var " + t[1] + " declares " + t[2] + " values");
  Variable v{t[1], {t.begin() + 3, t.end()}};
  try {
    validate_variable(v);
  } catch (const InputError& e) {
    ts.fail(e.what());
  }
  return v;
}

inline void write_var_lines(std::ostream& os, const std::vector<Variable>& vars) {
  for (const auto& v : vars) {
    os << "var " << v.name << ' ' << v.size();
    for (const auto& x : v.values) os << ' ' << x;
    os << '\n';
  }
}

inline void parse_var_block(TokenStream& ts, std::vector<Variable>& vars) {
  while (!ts.done() && ts.peek().front() == "var") {
    Variable v = parse_var_line(ts, ts.peek());
    if (find_variable(vars, v.name)) ts.fail("duplicate variable " + v.name);
    vars.push_back(std::move(v));
    ts.next();
  }
}

inline std::size_t parse_id(const TokenStream& ts, const std::string& s, std::size_t bound) {
  std::size_t id = parse_count(ts, s);
  if (id >= bound) ts.fail("node id " + s + " does not precede this node");
  return id;
}

inline std::pair<VarIndex, ValueIndex> parse_value_ref(const TokenStream& ts,
                                                       const std::vector<Variable>& vars,
                                                       const std::string& var,
                                                       const std::string& val) {
  auto v = find_variable(vars, var);
  if (!v) ts.fail("undeclared variable " + var);
  auto x = vars[*v].find_value(val);
  if (!x) ts.fail("value " + val + " not in domain of " + var);
  return {*v, *x};
}

template <class NodeT>
NodeId parse_root(TokenStream& ts, const std::vector<NodeT>& nodes) {
  if (ts.done()) ts.fail("missing root line");
  const auto& t = ts.next();
  if (t.size() != 2 || t[0] != "root") ts.fail("expected 'root <id>'");
  NodeId root = parse_id(ts, t[1], nodes.size());
  if (!ts.done()) ts.fail("content after root line");
  std::vector<bool> seen(nodes.size(), false);
  seen[root] = true;
  for (NodeId id = root + 1; id-- > 0;) {
    if (!seen[id]) continue;
    for (NodeId c : nodes[id].children) seen[c] = true;
  }
  for (NodeId id = 0; id < nodes.size(); ++id) {
    if (!seen[id]) ts.fail("node " + std::to_string(id) + " is unreachable from the root");
  }
  return root;
}

}  // namespace detail

inline FactorFile parse_factor_file(std::istream& in) {
  detail::TokenStream ts(in);
  FactorFile out;
  while (!ts.done()) {
    const auto& t = ts.peek();
    if (t.front() == "var") {
      detail::parse_var_block(ts, out.variables);
      continue;
    }
    if (t.front() != "factor") ts.fail("expected 'var' or 'factor', got '" + t.front() + "'");
    if (t.size() < 3) ts.fail("malformed factor line");
    std::size_t m = detail::parse_count(ts, t[2]);
    if (t.size() != 3 + m) ts.fail("factor " + t[1] + " declares " + t[2] + " variables");
    std::vector<Variable> scope;
    for (std::size_t i = 0; i < m; ++i) {
      auto v = find_variable(out.variables, t[3 + i]);
      if (!v) ts.fail("undeclared variable " + t[3 + i]);
      scope.push_back(out.variables[*v]);
    }
    std::string name = t[1];
    ts.next();
    auto count = instantiation_count(scope);
    if (!count) ts.fail("factor " + name + " is too large");
    std::vector<Rational> table;
    while (table.size() < *count) {
      if (ts.done()) ts.fail("factor " + name + " table is truncated");
      for (const auto& tok : ts.next()) {
        try {
          table.push_back(parse_rational(tok));
        } catch (const InputError& e) {
          ts.fail(e.what());
        }
      }
    }
    if (table.size() != *count) ts.fail("factor " + name + " table has too many entries");
    try {
      out.factors.emplace_back(std::move(scope), std::move(table));
    } catch (const InputError& e) {
      ts.fail(e.what());
    }
    out.names.push_back(std::move(name));
  }
  return out;
}

inline void write_factor_file(std::ostream& os, const FactorFile& ff,
                              const std::vector<std::string>& comments = {}) {
  for (const auto& c : comments) os << "# " << c << '\n';
  detail::write_var_lines(os, ff.variables);
  for (std::size_t i = 0; i < ff.factors.size(); ++i) {
    const Factor& f = ff.factors[i];
    os << "factor " << ff.names[i] << ' ' << f.scope().size();
    for (const auto& v : f.scope()) os << ' ' << v.name;
    os << '\n';
    for (std::size_t j = 0; j < f.table().size(); ++j) {
      if (j) os << ' ';
      os << format_rational(f.table()[j]);
    }
    os << '\n';
  }
}

inline Circuit parse_circuit(std::istream& in) {
  detail::TokenStream ts(in);
  if (ts.done() || ts.peek().size() != 1 || ts.peek().front() != "ac") {
    ts.fail("circuit file must start with 'ac'");
  }
  ts.next();
  std::vector<Variable> vars;
  detail::parse_var_block(ts, vars);
  std::vector<Node> nodes;
  while (!ts.done() && ts.peek().front() != "root") {
    const auto& t = ts.peek();
    const std::string& kind = t.front();
    if (kind == "I") {
      if (t.size() != 3) ts.fail("expected 'I <var> <val>'");
      auto [v, x] = detail::parse_value_ref(ts, vars, t[1], t[2]);
      nodes.push_back(Node::indicator(v, x));
    } else if (kind == "P") {
      if (t.size() != 2) ts.fail("expected 'P <rational>'");
      try {
        nodes.push_back(Node::parameter(parse_rational(t[1])));
      } catch (const InputError& e) {
        ts.fail(e.what());
      }
    } else if (kind == "+" || kind == "*") {
      if (t.size() < 2) ts.fail("expected '" + kind + " <c> <ids>'");
      std::size_t c = detail::parse_count(ts, t[1]);
      if (c == 0) ts.fail("internal node needs at least one child");
      if (t.size() != 2 + c) ts.fail("node declares " + t[1] + " children");
      std::vector<NodeId> children;
      for (std::size_t i = 0; i < c; ++i) {
        children.push_back(detail::parse_id(ts, t[2 + i], nodes.size()));
      }
      nodes.push_back(kind == "+" ? Node::sum(std::move(children))
                                  : Node::product(std::move(children)));
    } else if (kind == "var") {
      ts.fail("var lines must precede all nodes");
    } else {
      ts.fail("unknown node kind '" + kind + "'");
    }
    ts.next();
  }
  if (nodes.empty()) ts.fail("circuit has no nodes");
  NodeId root = detail::parse_root(ts, nodes);
  return Circuit(std::move(vars), std::move(nodes), root);
}

inline void write_circuit(std::ostream& os, const Circuit& c) {
  os << "ac\n";
  detail::write_var_lines(os, c.variables());
  for (const Node& n : c.nodes()) {
    switch (n.kind) {
      case NodeKind::Indicator:
        os << "I " << c.variables()[n.var].name << ' ' << c.variables()[n.var].values[n.value];
        break;
      case NodeKind::Parameter: os << "P " << format_rational(n.theta); break;
      case NodeKind::Sum:
      case NodeKind::Product:
        os << (n.kind == NodeKind::Sum ? '+' : '*') << ' ' << n.children.size();
        for (NodeId ch : n.children) os << ' ' << ch;
        break;
    }
    os << '\n';
  }
  os << "root " << c.root() << '\n';
}

inline NnfCircuit parse_nnf(std::istream& in) {
  detail::TokenStream ts(in);
  if (ts.done() || ts.peek().size() != 1 || ts.peek().front() != "nnf") {
    ts.fail("nnf file must start with 'nnf'");
  }
  ts.next();
  std::vector<Variable> vars;
  detail::parse_var_block(ts, vars);
  std::vector<NnfNode> nodes;
  while (!ts.done() && ts.peek().front() != "root") {
    const auto& t = ts.peek();
    const std::string& kind = t.front();
    if (kind == "L") {
      if (t.size() != 3 && !(t.size() == 4 && t[3] == "-")) {
        ts.fail("expected 'L <var> <val> [-]'");
      }
      auto [v, x] = detail::parse_value_ref(ts, vars, t[1], t[2]);
      nodes.push_back(NnfNode::literal(v, x, t.size() == 3));
    } else if (kind == "T" || kind == "F") {
      if (t.size() != 1) ts.fail("constant nodes take no arguments");
      nodes.push_back(NnfNode::constant(kind == "T"));
    } else if (kind == "A" || kind == "O") {
      if (t.size() < 2) ts.fail("expected '" + kind + " <c> <ids>'");
      std::size_t c = detail::parse_count(ts, t[1]);
      if (c == 0) ts.fail("internal node needs at least one child");
      if (t.size() != 2 + c) ts.fail("node declares " + t[1] + " children");
      std::vector<NodeId> children;
      for (std::size_t i = 0; i < c; ++i) {
        children.push_back(detail::parse_id(ts, t[2 + i], nodes.size()));
      }
      nodes.push_back(kind == "A" ? NnfNode::conj(std::move(children))
                                  : NnfNode::disj(std::move(children)));
    } else {
      ts.fail("unknown nnf node kind '" + kind + "'");
    }
    ts.next();
  }
  if (nodes.empty()) ts.fail("nnf has no nodes");
  NodeId root = detail::parse_root(ts, nodes);
  return NnfCircuit(std::move(vars), std::move(nodes), root);
}

inline void write_nnf(std::ostream& os, const NnfCircuit& c) {
  os << "nnf\n";
  detail::write_var_lines(os, c.variables());
  for (const NnfNode& n : c.nodes()) {
    switch (n.kind) {
      case NnfKind::Literal:
        os << "L " << c.variables()[n.var].name << ' ' << c.variables()[n.var].values[n.value];
        if (!n.positive) os << " -";
        break;
      case NnfKind::True: os << 'T'; break;
      case NnfKind::False: os << 'F'; break;
      case NnfKind::And:
      case NnfKind::Or:
        os << (n.kind == NnfKind::And ? 'A' : 'O') << ' ' << n.children.size();
        for (NodeId ch : n.children) os << ' ' << ch;
        break;
    }
    os << '\n';
  }
  os << "root " << c.root() << '\n';
}

// "Var=value,Var=value"; the empty string is the empty instantiation.
inline Instantiation parse_evidence(std::string_view text) {
  Instantiation out;
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = trim(text.substr(pos, comma - pos));
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == item.size()) {
      throw InputError("malformed evidence item '" + std::string(item) + "'");
    }
    std::string var(trim(item.substr(0, eq)));
    if (out.contains(var)) throw InputError("variable " + var + " assigned twice in evidence");
    out.set(var, std::string(trim(item.substr(eq + 1))));
    pos = comma + 1;
  }
  return out;
}

// Rendered in the order of `vars`; any other variables follow by name.
inline std::string format_evidence(const Instantiation& y, std::span<const Variable> vars = {}) {
  std::string out;
  auto emit = [&](const std::string& var, const std::string& value) {
    if (!out.empty()) out += ',';
    out += var + "=" + value;
  };
  for (const auto& v : vars) {
    if (const std::string* value = y.find(v.name)) emit(v.name, *value);
  }
  for (const auto& [var, value] : y) {
    if (!find_variable(vars, var)) emit(var, value);
  }
  return out;
}

inline std::vector<std::string> parse_name_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string item(text.substr(pos, comma - pos));
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) throw InputError("empty name in list '" + std::string(text) + "'");
    out.push_back(std::move(item));
    pos = comma + 1;
  }
  return out;
}

template <class T, class Parse>
T read_file(const std::string& path, Parse parse) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse(in);
}

inline Circuit read_circuit_file(const std::string& path) {
  return read_file<Circuit>(path, [](std::istream& in) { return parse_circuit(in); });
}
inline FactorFile read_factor_file(const std::string& path) {
  return read_file<FactorFile>(path, [](std::istream& in) { return parse_factor_file(in); });
}
inline NnfCircuit read_nnf_file(const std::string& path) {
  return read_file<NnfCircuit>(path, [](std::istream& in) { return parse_nnf(in); });
}

}  // namespace acforge
