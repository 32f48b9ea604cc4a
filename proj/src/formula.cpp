#include "fmtwb/formula.hpp"

#include <sstream>

#include "fmtwb/errors.hpp"

namespace fmtwb {

FormulaPtr make_node(Connective kind, std::string symbol, std::vector<Term> terms,
                     FormulaPtr lhs, FormulaPtr rhs) {
  auto node = std::shared_ptr<Formula>(new Formula());
  node->kind = kind;
  node->symbol = std::move(symbol);
  node->terms = std::move(terms);
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}

FormulaPtr Formula::atom(std::string relation, std::vector<Term> args) {
  if (args.empty()) fail(Errc::arity_error, "atom " + relation + " needs arguments");
  return make_node(Connective::atom, std::move(relation), std::move(args), nullptr,
                   nullptr);
}

FormulaPtr Formula::equals(Term a, Term b) {
  return make_node(Connective::equals, "", {std::move(a), std::move(b)}, nullptr, nullptr);
}

FormulaPtr Formula::negate(FormulaPtr f) {
  if (!f) fail(Errc::precondition_failed, "null operand");
  return make_node(Connective::logical_not, "", {}, std::move(f), nullptr);
}

FormulaPtr Formula::conj(FormulaPtr a, FormulaPtr b) {
  if (!a || !b) fail(Errc::precondition_failed, "null operand");
  return make_node(Connective::logical_and, "", {}, std::move(a), std::move(b));
}

FormulaPtr Formula::disj(FormulaPtr a, FormulaPtr b) {
  if (!a || !b) fail(Errc::precondition_failed, "null operand");
  return make_node(Connective::logical_or, "", {}, std::move(a), std::move(b));
}

FormulaPtr Formula::impl(FormulaPtr a, FormulaPtr b) {
  if (!a || !b) fail(Errc::precondition_failed, "null operand");
  return make_node(Connective::implies, "", {}, std::move(a), std::move(b));
}

FormulaPtr Formula::exists(std::string var, FormulaPtr body) {
  if (!body) fail(Errc::precondition_failed, "null operand");
  return make_node(Connective::exists, std::move(var), {}, std::move(body), nullptr);
}

FormulaPtr Formula::forall(std::string var, FormulaPtr body) {
  if (!body) fail(Errc::precondition_failed, "null operand");
  return make_node(Connective::forall, std::move(var), {}, std::move(body), nullptr);
}

FormulaPtr Formula::conj_all(std::vector<FormulaPtr> fs) {
  if (fs.empty()) fail(Errc::empty_collection, "conjunction of nothing");
  FormulaPtr acc = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = conj(*it, acc);
  return acc;
}

FormulaPtr Formula::disj_all(std::vector<FormulaPtr> fs) {
  if (fs.empty()) fail(Errc::empty_collection, "disjunction of nothing");
  FormulaPtr acc = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = disj(*it, acc);
  return acc;
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.kind != b.kind || a.symbol != b.symbol || a.terms != b.terms) return false;
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs) ||
      static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs))
    return false;
  if (a.lhs && !structurally_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !structurally_equal(*a.rhs, *b.rhs)) return false;
  return true;
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound,
                  std::set<std::string>& out) {
  switch (f.kind) {
    case Connective::atom:
    case Connective::equals:
      for (const Term& t : f.terms)
        if (t.kind == Term::Kind::variable && !bound.count(t.name)) out.insert(t.name);
      return;
    case Connective::logical_not:
      collect_free(*f.lhs, bound, out);
      return;
    case Connective::logical_and:
    case Connective::logical_or:
    case Connective::implies:
      collect_free(*f.lhs, bound, out);
      collect_free(*f.rhs, bound, out);
      return;
    case Connective::exists:
    case Connective::forall: {
      const bool fresh = bound.insert(f.symbol).second;
      collect_free(*f.lhs, bound, out);
      if (fresh) bound.erase(f.symbol);
      return;
    }
  }
}

// Binding strength, loosest first.  Quantifiers take the maximal body to the
// right, so as operands they always get parentheses.
int precedence(Connective k) {
  switch (k) {
    case Connective::exists:
    case Connective::forall: return 0;
    case Connective::implies: return 1;
    case Connective::logical_or: return 2;
    case Connective::logical_and: return 3;
    case Connective::logical_not: return 4;
    case Connective::atom:
    case Connective::equals: return 5;
  }
  return 5;
}

void render_into(const Formula& f, int context, std::ostringstream& out) {
  const int prec = precedence(f.kind);
  const bool parens = prec < context;
  if (parens) out << '(';
  switch (f.kind) {
    case Connective::atom:
      out << f.symbol << '(';
      for (std::size_t i = 0; i < f.terms.size(); ++i) {
        if (i) out << ',';
        out << f.terms[i].name;
      }
      out << ')';
      break;
    case Connective::equals:
      out << f.terms[0].name << " = " << f.terms[1].name;
      break;
    case Connective::logical_not:
      out << '!';
      render_into(*f.lhs, precedence(Connective::logical_not), out);
      break;
    case Connective::logical_and:
      render_into(*f.lhs, prec + 1, out);
      out << " & ";
      render_into(*f.rhs, prec, out);  // conjunction chains fold right
      break;
    case Connective::logical_or:
      render_into(*f.lhs, prec + 1, out);
      out << " | ";
      render_into(*f.rhs, prec, out);
      break;
    case Connective::implies:
      render_into(*f.lhs, prec + 1, out);
      out << " -> ";
      render_into(*f.rhs, prec, out);
      break;
    case Connective::exists:
    case Connective::forall:
      out << (f.kind == Connective::exists ? "exists " : "forall ") << f.symbol << ". ";
      render_into(*f.lhs, 0, out);
      break;
  }
  if (parens) out << ')';
}

}  // namespace

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

std::string render(const Formula& f) {
  std::ostringstream out;
  render_into(f, 0, out);
  return out.str();
}

}  // namespace fmtwb
