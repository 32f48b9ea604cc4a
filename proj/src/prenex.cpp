#include "fmtwb/prenex.hpp"

#include <map>
#include <set>
#include <sstream>

#include "fmtwb/errors.hpp"

namespace fmtwb {

namespace {

void collect_names(const Formula& f, std::set<std::string>& names) {
  for (const Term& t : f.terms) names.insert(t.name);
  if (f.kind == Connective::exists || f.kind == Connective::forall)
    names.insert(f.symbol);
  if (f.lhs) collect_names(*f.lhs, names);
  if (f.rhs) collect_names(*f.rhs, names);
}

// Renames bound variables so that no name is bound twice and no bound name
// shadows a free one.  First binder of a fresh name keeps it.
class Rectifier {
 public:
  explicit Rectifier(const Formula& f) {
    collect_names(f, taken_);
    for (const std::string& v : free_variables(f)) used_.insert(v);
  }

  FormulaPtr run(const Formula& f, std::map<std::string, std::string>& renaming) {
    switch (f.kind) {
      case Connective::atom:
      case Connective::equals: {
        std::vector<Term> terms = f.terms;
        for (Term& t : terms)
          if (t.kind == Term::Kind::variable) {
            auto it = renaming.find(t.name);
            if (it != renaming.end()) t.name = it->second;
          }
        if (f.kind == Connective::atom) return Formula::atom(f.symbol, std::move(terms));
        return Formula::equals(terms[0], terms[1]);
      }
      case Connective::logical_not:
        return Formula::negate(run(*f.lhs, renaming));
      case Connective::logical_and:
        return Formula::conj(run(*f.lhs, renaming), run(*f.rhs, renaming));
      case Connective::logical_or:
        return Formula::disj(run(*f.lhs, renaming), run(*f.rhs, renaming));
      case Connective::implies:
        return Formula::impl(run(*f.lhs, renaming), run(*f.rhs, renaming));
      case Connective::exists:
      case Connective::forall: {
        const std::string fresh = claim(f.symbol);
        auto it = renaming.find(f.symbol);
        std::string saved;
        const bool had = it != renaming.end();
        if (had) saved = it->second;
        renaming[f.symbol] = fresh;
        FormulaPtr body = run(*f.lhs, renaming);
        if (had)
          renaming[f.symbol] = saved;
        else
          renaming.erase(f.symbol);
        return f.kind == Connective::exists ? Formula::exists(fresh, std::move(body))
                                            : Formula::forall(fresh, std::move(body));
      }
    }
    fail(Errc::precondition_failed, "unreachable");
  }

 private:
  std::string claim(const std::string& base) {
    if (used_.insert(base).second) return base;
    for (int i = 1;; ++i) {
      std::ostringstream cand;
      cand << base << '_' << i;
      if (!taken_.count(cand.str()) && used_.insert(cand.str()).second)
        return cand.str();
    }
  }

  std::set<std::string> taken_;  // every name occurring anywhere in the input
  std::set<std::string> used_;   // names no longer available for binders
};

bool has_quantifier(const Formula& f) {
  if (f.kind == Connective::exists || f.kind == Connective::forall) return true;
  if (f.lhs && has_quantifier(*f.lhs)) return true;
  if (f.rhs && has_quantifier(*f.rhs)) return true;
  return false;
}

struct Pulled {
  std::vector<std::pair<Quantifier, std::string>> prefix;
  FormulaPtr matrix;
};

Pulled pull(const FormulaPtr& f) {
  if (!has_quantifier(*f)) return {{}, f};
  switch (f->kind) {
    case Connective::logical_not: {
      Pulled inner = pull(f->lhs);
      for (auto& [q, v] : inner.prefix)
        q = q == Quantifier::exists ? Quantifier::forall : Quantifier::exists;
      inner.matrix = Formula::negate(std::move(inner.matrix));
      return inner;
    }
    case Connective::logical_and:
    case Connective::logical_or: {
      Pulled left = pull(f->lhs);
      Pulled right = pull(f->rhs);
      for (auto& qv : right.prefix) left.prefix.push_back(std::move(qv));
      left.matrix = f->kind == Connective::logical_and
                        ? Formula::conj(std::move(left.matrix), std::move(right.matrix))
                        : Formula::disj(std::move(left.matrix), std::move(right.matrix));
      return left;
    }
    case Connective::implies:
      return pull(Formula::disj(Formula::negate(f->lhs), f->rhs));
    case Connective::exists:
    case Connective::forall: {
      Pulled inner = pull(f->lhs);
      inner.prefix.insert(inner.prefix.begin(),
                          {f->kind == Connective::exists ? Quantifier::exists
                                                         : Quantifier::forall,
                           f->symbol});
      return inner;
    }
    default:
      fail(Errc::precondition_failed, "unreachable");
  }
}

}  // namespace

FormulaPtr to_prenex(const FormulaPtr& f) {
  if (!f) fail(Errc::precondition_failed, "null formula");
  Rectifier rectifier(*f);
  std::map<std::string, std::string> renaming;
  FormulaPtr rectified = rectifier.run(*f, renaming);
  Pulled pulled = pull(rectified);
  FormulaPtr out = std::move(pulled.matrix);
  for (auto it = pulled.prefix.rbegin(); it != pulled.prefix.rend(); ++it)
    out = it->first == Quantifier::exists ? Formula::exists(it->second, std::move(out))
                                          : Formula::forall(it->second, std::move(out));
  return out;
}

PrefixClass classify_prefix(const Formula& f) {
  if (!is_sentence(f))
    fail(Errc::not_a_sentence, "formula has free variables");
  PrefixClass out;
  const Formula* node = &f;
  while (node->kind == Connective::exists || node->kind == Connective::forall) {
    const Quantifier q =
        node->kind == Connective::exists ? Quantifier::exists : Quantifier::forall;
    if (!out.blocks.empty() && out.blocks.back().first == q)
      ++out.blocks.back().second;
    else
      out.blocks.emplace_back(q, 1);
    node = node->lhs.get();
  }
  out.matrix_quantifier_free = !has_quantifier(*node);
  return out;
}

bool is_exists_k_forall_star(const PrefixClass& c, int k) {
  if (!c.matrix_quantifier_free) return false;
  std::size_t i = 0;
  int leading_exists = 0;
  if (i < c.blocks.size() && c.blocks[i].first == Quantifier::exists)
    leading_exists = c.blocks[i++].second;
  if (leading_exists != k) return false;
  if (i < c.blocks.size() && c.blocks[i].first == Quantifier::forall) ++i;
  return i == c.blocks.size();
}

std::string prefix_class_to_string(const PrefixClass& c) {
  std::ostringstream out;
  if (c.blocks.empty()) out << "quantifier-free";
  for (std::size_t i = 0; i < c.blocks.size(); ++i) {
    if (i) out << ' ';
    out << (c.blocks[i].first == Quantifier::exists ? 'E' : 'A') << c.blocks[i].second;
  }
  if (!c.matrix_quantifier_free) out << " (non-prenex matrix)";
  return out.str();
}

}  // namespace fmtwb
