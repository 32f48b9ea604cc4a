#include "fmtwb/eval.hpp"

#include <vector>

#include "fmtwb/errors.hpp"

namespace fmtwb {

namespace {

// Formulas are compiled once per evaluate() call: variable occurrences are
// resolved to assignment slots and relation names to table indices, so the
// recursive evaluation loop does no string work at all.
struct Node {
  Connective kind;
  int relation = -1;        // atom
  int var_slot = -1;        // quantifiers
  int lhs = -1, rhs = -1;
  // Atom / equality arguments: slot index when >= 0, constant index encoded
  // as -1 - index when negative.
  std::vector<int> args;
};

class Compiler {
 public:
  Compiler(const Structure& s, const Assignment& assignment) : s_(s) {
    for (const auto& [name, value] : assignment) {
      if (!s.contains(value))
        fail(Errc::not_a_subset, "assigned value " + std::to_string(value) +
                                     " for " + name + " is outside the universe");
      scope_.emplace_back(name, next_slot_);
      initial_.push_back(value);
      ++next_slot_;
    }
  }

  int compile(const Formula& f) {
    Node node;
    node.kind = f.kind;
    switch (f.kind) {
      case Connective::atom: {
        auto rel = s_.vocab().relation_index(f.symbol);
        if (!rel)
          fail(Errc::unknown_symbol, "relation " + f.symbol + " is not in the vocabulary");
        if (s_.vocab().arity(*rel) != static_cast<int>(f.terms.size()))
          fail(Errc::arity_error,
               f.symbol + " expects " + std::to_string(s_.vocab().arity(*rel)) +
                   " arguments, got " + std::to_string(f.terms.size()));
        node.relation = *rel;
        for (const Term& t : f.terms) node.args.push_back(resolve(t));
        break;
      }
      case Connective::equals:
        node.args.push_back(resolve(f.terms[0]));
        node.args.push_back(resolve(f.terms[1]));
        break;
      case Connective::logical_not:
        node.lhs = compile(*f.lhs);
        break;
      case Connective::logical_and:
      case Connective::logical_or:
      case Connective::implies:
        node.lhs = compile(*f.lhs);
        node.rhs = compile(*f.rhs);
        break;
      case Connective::exists:
      case Connective::forall: {
        node.var_slot = next_slot_++;
        scope_.emplace_back(f.symbol, node.var_slot);
        node.lhs = compile(*f.lhs);
        scope_.pop_back();
        break;
      }
    }
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size() - 1);
  }

  int resolve(const Term& t) {
    if (t.kind == Term::Kind::constant) {
      auto c = s_.vocab().constant_index(t.name);
      if (!c) fail(Errc::unknown_symbol, "constant " + t.name + " is not in the vocabulary");
      return -1 - *c;
    }
    // Innermost binding wins: scan the scope stack from the top.
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == t.name) return it->second;
    // An undeclared identifier in term position may still name a constant of
    // the evaluating structure's vocabulary (inference-mode formulas).
    auto c = s_.vocab().constant_index(t.name);
    if (c) return -1 - *c;
    fail(Errc::unbound_variable, "variable " + t.name + " has no value");
  }

  const Structure& s_;
  std::vector<Node> nodes_;
  std::vector<std::pair<std::string, int>> scope_;
  std::vector<Element> initial_;
  int next_slot_ = 0;
};

class Machine {
 public:
  Machine(const Structure& s, const Compiler& compiled)
      : s_(s), nodes_(compiled.nodes_), slots_(compiled.next_slot_, 0) {
    for (std::size_t i = 0; i < compiled.initial_.size(); ++i)
      slots_[i] = compiled.initial_[i];
  }

  bool run(int index) {
    const Node& node = nodes_[index];
    switch (node.kind) {
      case Connective::atom: {
        Element buffer[8];
        const std::size_t arity = node.args.size();
        if (arity <= 8) {
          for (std::size_t i = 0; i < arity; ++i) buffer[i] = value_of(node.args[i]);
          return s_.has_tuple(node.relation, std::span<const Element>(buffer, arity));
        }
        std::vector<Element> wide(arity);
        for (std::size_t i = 0; i < arity; ++i) wide[i] = value_of(node.args[i]);
        return s_.has_tuple(node.relation, wide);
      }
      case Connective::equals:
        return value_of(node.args[0]) == value_of(node.args[1]);
      case Connective::logical_not:
        return !run(node.lhs);
      case Connective::logical_and:
        return run(node.lhs) && run(node.rhs);
      case Connective::logical_or:
        return run(node.lhs) || run(node.rhs);
      case Connective::implies:
        return !run(node.lhs) || run(node.rhs);
      case Connective::exists:
        for (Element e : s_.universe()) {
          slots_[node.var_slot] = e;
          if (run(node.lhs)) return true;
        }
        return false;
      case Connective::forall:
        for (Element e : s_.universe()) {
          slots_[node.var_slot] = e;
          if (!run(node.lhs)) return false;
        }
        return true;
    }
    return false;
  }

 private:
  Element value_of(int arg) const {
    return arg >= 0 ? slots_[arg] : s_.constant_value(-1 - arg);
  }

  const Structure& s_;
  const std::vector<Node>& nodes_;
  std::vector<Element> slots_;
};

}  // namespace

bool evaluate(const Structure& s, const Formula& f, const Assignment& assignment) {
  Compiler compiler(s, assignment);
  const int root = compiler.compile(f);
  Machine machine(s, compiler);
  return machine.run(root);
}

}  // namespace fmtwb
