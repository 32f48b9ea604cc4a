#include "fmtwb/preservation.hpp"

#include <algorithm>
#include <memory>
#include <unordered_map>

#include "fmtwb/errors.hpp"
#include "fmtwb/eval.hpp"

namespace fmtwb {

namespace {

// Satisfaction memoized on structure content; family sweeps revisit the same
// substructures across hosts and crux candidates.
class EvalCache {
 public:
  explicit EvalCache(FormulaPtr f) : f_(std::move(f)) {}

  bool operator()(const Structure& s) {
    const std::uint64_t key = s.content_hash();
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const bool value = evaluate(s, *f_);
    memo_.emplace(key, value);
    return value;
  }

 private:
  FormulaPtr f_;
  std::unordered_map<std::uint64_t, bool> memo_;
};

using ContentIndex = std::unordered_multimap<std::uint64_t, const Structure*>;

ContentIndex index_family(const std::vector<Structure>& family) {
  ContentIndex index;
  index.reserve(family.size());
  for (const Structure& s : family) index.emplace(s.content_hash(), &s);
  return index;
}

bool index_contains(const ContentIndex& index, const Structure& s) {
  auto [lo, hi] = index.equal_range(s.content_hash());
  for (auto it = lo; it != hi; ++it)
    if (*it->second == s) return true;
  return false;
}

// All induced substructures of s containing `required`, passed through
// `models`; false as soon as one fails.  The empty universe is skipped.
bool all_required_substructures_model(const Structure& s, std::vector<Element> required,
                                      const std::function<bool(const Structure&)>& models,
                                      const StructurePredicate& family) {
  for (Element e : s.constant_values()) required.push_back(e);
  std::sort(required.begin(), required.end());
  required.erase(std::unique(required.begin(), required.end()), required.end());
  std::vector<Element> free;
  for (Element e : s.universe())
    if (!std::binary_search(required.begin(), required.end(), e)) free.push_back(e);

  std::vector<Element> chosen;
  std::function<bool(std::size_t)> walk = [&](std::size_t start) {
    if (!required.empty() || !chosen.empty()) {
      std::vector<Element> subset = required;
      subset.insert(subset.end(), chosen.begin(), chosen.end());
      std::sort(subset.begin(), subset.end());
      Structure sub = induced_substructure(s, subset);
      if ((!family || family(sub)) && !models(sub)) return false;
    }
    for (std::size_t i = start; i < free.size(); ++i) {
      chosen.push_back(free[i]);
      if (!walk(i + 1)) return false;
      chosen.pop_back();
    }
    return true;
  };
  return walk(0);
}

void check_subset(const Structure& s, std::span<const Element> c) {
  for (Element e : c)
    if (!s.contains(e))
      fail(Errc::not_a_subset, "element " + std::to_string(e) + " outside the universe");
}

}  // namespace

bool is_crux(const Structure& s, std::span<const Element> c, const FormulaPtr& f, int k,
             const StructurePredicate& family) {
  if (!evaluate(s, *f)) fail(Errc::precondition_failed, "structure does not model f");
  check_subset(s, c);
  if (static_cast<int>(c.size()) > k) return false;
  return all_required_substructures_model(
      s, {c.begin(), c.end()}, [&](const Structure& sub) { return evaluate(sub, *f); },
      family);
}

CruxReport find_k_cruxes(const Structure& s, const FormulaPtr& f, int k,
                         const StructurePredicate& family) {
  if (!evaluate(s, *f)) fail(Errc::precondition_failed, "structure does not model f");
  CruxReport report;
  report.structure_label = s.label();
  report.k = k;
  EvalCache models(f);

  const std::vector<Element>& u = s.universe();
  std::vector<Element> candidate;
  std::function<void(std::size_t)> walk = [&](std::size_t start) {
    if (all_required_substructures_model(s, candidate, std::ref(models), family))
      report.cruxes.push_back(candidate);
    if (static_cast<int>(candidate.size()) == k) return;
    for (std::size_t i = start; i < u.size(); ++i) {
      candidate.push_back(u[i]);
      walk(i + 1);
      candidate.pop_back();
    }
  };
  walk(0);
  return report;
}

PropertyVerdict is_hereditary_over(const FormulaPtr& f, const std::vector<Structure>& family) {
  PropertyVerdict verdict;
  for (const Structure& s : family) {
    if (!evaluate(s, *f)) continue;
    std::optional<Structure> bad;
    for_each_substructure(s, [&](const Structure& sub) {
      if (!evaluate(sub, *f)) {
        bad = sub;
        return false;
      }
      return true;
    });
    if (bad) {
      verdict.holds = false;
      verdict.detail = "substructure fails the sentence";
      verdict.witness = s;
      verdict.witness_substructure = std::move(bad);
      return verdict;
    }
  }
  return verdict;
}

PropertyVerdict is_k_hereditary_over(const FormulaPtr& f, const std::vector<Structure>& family,
                                     int k) {
  PropertyVerdict verdict;
  StructurePredicate member;
  std::shared_ptr<ContentIndex> index;
  if (family_downward_closed(family)) {
    index = std::make_shared<ContentIndex>(index_family(family));
    member = [index](const Structure& s) { return index_contains(*index, s); };
  }
  EvalCache models(f);

  for (const Structure& s : family) {
    if (!models(s)) continue;
    const std::vector<Element>& u = s.universe();
    bool found = false;
    std::vector<Element> candidate;
    std::function<void(std::size_t)> walk = [&](std::size_t start) {
      if (found) return;
      if (all_required_substructures_model(s, candidate, std::ref(models), member)) {
        found = true;
        return;
      }
      if (static_cast<int>(candidate.size()) == k) return;
      for (std::size_t i = start; i < u.size() && !found; ++i) {
        candidate.push_back(u[i]);
        walk(i + 1);
        candidate.pop_back();
      }
    };
    walk(0);
    if (!found) {
      verdict.holds = false;
      verdict.detail = "model without a " + std::to_string(k) + "-crux";
      verdict.witness = s;
      return verdict;
    }
  }
  return verdict;
}

namespace {

bool covers_all_small_subsets(const std::vector<Element>& universe,
                              const std::vector<Structure>& members, int k) {
  std::vector<Element> subset;
  std::function<bool(std::size_t)> walk = [&](std::size_t start) {
    if (!subset.empty()) {
      bool covered = false;
      for (const Structure& m : members) {
        const std::vector<Element>& mu = m.universe();
        if (std::includes(mu.begin(), mu.end(), subset.begin(), subset.end())) {
          covered = true;
          break;
        }
      }
      if (!covered) return false;
    }
    if (static_cast<int>(subset.size()) == k) return true;
    for (std::size_t i = start; i < universe.size(); ++i) {
      subset.push_back(universe[i]);
      if (!walk(i + 1)) return false;
      subset.pop_back();
    }
    return true;
  };
  return walk(0);
}

}  // namespace

bool is_k_ary_cover(const Structure& host, const std::vector<Structure>& members, int k) {
  if (members.empty()) fail(Errc::empty_collection, "cover needs at least one member");
  for (const Structure& m : members)
    if (!is_extension(m, host)) return false;
  return covers_all_small_subsets(host.universe(), members, k);
}

bool is_k_ary_cover_in(const Structure& base, const Structure& ext,
                       const std::vector<Structure>& members, int k) {
  if (!is_extension(base, ext))
    fail(Errc::not_an_extension, "second structure does not extend the first");
  if (members.empty()) fail(Errc::empty_collection, "cover needs at least one member");
  for (const Structure& m : members)
    if (!is_extension(m, ext)) return false;
  return covers_all_small_subsets(base.universe(), members, k);
}

PropertyVerdict is_k_extension_closed_over(const FormulaPtr& f,
                                           const std::vector<Structure>& family, int k) {
  PropertyVerdict verdict;
  EvalCache models(f);
  std::vector<bool> member_models;
  member_models.reserve(family.size());
  for (const Structure& s : family) member_models.push_back(models(s));

  for (const Structure& host : family) {
    std::vector<Structure> cover;
    for (std::size_t i = 0; i < family.size(); ++i)
      if (member_models[i] && is_extension(family[i], host)) cover.push_back(family[i]);
    if (cover.empty()) continue;
    if (!covers_all_small_subsets(host.universe(), cover, k)) continue;
    if (!models(host)) {
      verdict.holds = false;
      verdict.detail = "host covered by models yet fails the sentence";
      verdict.witness = host;
      verdict.witness_cover = std::move(cover);
      return verdict;
    }
  }
  return verdict;
}

PropertyVerdict check_duality(const FormulaPtr& f, const std::vector<Structure>& family,
                              int k) {
  const PropertyVerdict hereditary = is_k_hereditary_over(f, family, k);
  const PropertyVerdict closed = is_k_extension_closed_over(Formula::negate(f), family, k);
  PropertyVerdict verdict;
  verdict.holds = hereditary.holds == closed.holds;
  verdict.detail = std::string("k-hereditary=") + (hereditary.holds ? "yes" : "no") +
                   " negation-k-extension-closed=" + (closed.holds ? "yes" : "no");
  if (!verdict.holds) {
    const PropertyVerdict& failing = hereditary.holds ? closed : hereditary;
    verdict.witness = failing.witness;
    verdict.witness_substructure = failing.witness_substructure;
    verdict.witness_cover = failing.witness_cover;
  }
  return verdict;
}

bool family_downward_closed(const std::vector<Structure>& family) {
  const ContentIndex index = index_family(family);
  for (const Structure& s : family) {
    const std::vector<Element>& consts = s.constant_values();
    for (Element e : s.universe()) {
      if (std::find(consts.begin(), consts.end(), e) != consts.end()) continue;
      if (s.size() == 1) continue;
      std::vector<Element> subset;
      for (Element x : s.universe())
        if (x != e) subset.push_back(x);
      if (!index_contains(index, induced_substructure(s, subset))) return false;
    }
  }
  return true;
}

const VocabularyPtr& graph_vocabulary() {
  static const VocabularyPtr vocab = make_vocabulary({{"E", 2}}, {});
  return vocab;
}

FormulaPtr dominating_set_sentence(int k) {
  if (k < 0) fail(Errc::precondition_failed, "k must be >= 0");
  const Term y = Term::var("y");
  if (k == 0) return Formula::forall("y", Formula::negate(Formula::equals(y, y)));
  std::vector<FormulaPtr> parts;
  for (int i = 1; i <= k; ++i) {
    const Term xi = Term::var("x" + std::to_string(i));
    parts.push_back(Formula::disj(Formula::equals(y, xi), Formula::atom("E", {y, xi})));
  }
  FormulaPtr body = Formula::forall("y", Formula::disj_all(std::move(parts)));
  for (int i = k; i >= 1; --i)
    body = Formula::exists("x" + std::to_string(i), std::move(body));
  return body;
}

std::vector<Structure> enumerate_family(const VocabularyPtr& vocab, int max_size) {
  constexpr std::uint64_t limit = 1000000;
  std::uint64_t total = 0;
  for (int m = 1; m <= max_size; ++m) {
    std::uint64_t bits = 0;
    for (const RelationSymbol& r : vocab->relations()) {
      std::uint64_t cells = 1;
      for (int i = 0; i < r.arity; ++i) cells *= static_cast<std::uint64_t>(m);
      bits += cells;
      if (bits > 60) fail(Errc::size_limit_exceeded, "family too large to enumerate");
    }
    std::uint64_t count = std::uint64_t{1} << bits;
    for (std::size_t i = 0; i < vocab->constants().size(); ++i) {
      if (count > limit) break;
      count *= static_cast<std::uint64_t>(m);
    }
    total += count;
    if (total > limit) fail(Errc::size_limit_exceeded, "family too large to enumerate");
  }

  std::vector<Structure> family;
  family.reserve(total);
  for (int m = 1; m <= max_size; ++m) {
    std::vector<Element> universe;
    for (int e = 1; e <= m; ++e) universe.push_back(e);
    // Lexicographic tuple lists per relation; table subsets follow the bit
    // order of these lists.
    std::vector<std::vector<Tuple>> cells;
    for (const RelationSymbol& r : vocab->relations()) {
      std::vector<Tuple> list;
      Tuple t(static_cast<std::size_t>(r.arity), 1);
      while (true) {
        list.push_back(t);
        int pos = r.arity - 1;
        while (pos >= 0 && t[static_cast<std::size_t>(pos)] == m) {
          t[static_cast<std::size_t>(pos)] = 1;
          --pos;
        }
        if (pos < 0) break;
        ++t[static_cast<std::size_t>(pos)];
      }
      cells.push_back(std::move(list));
    }

    std::vector<std::uint64_t> masks(cells.size(), 0);
    std::vector<Element> consts(vocab->constants().size(), 1);
    std::function<void(std::size_t)> emit_consts = [&](std::size_t ci) {
      if (ci == consts.size()) {
        std::vector<std::vector<Tuple>> tables;
        for (std::size_t r = 0; r < cells.size(); ++r) {
          std::vector<Tuple> table;
          for (std::size_t j = 0; j < cells[r].size(); ++j)
            if ((masks[r] >> j) & 1) table.push_back(cells[r][j]);
          tables.push_back(std::move(table));
        }
        family.emplace_back(vocab, universe, std::move(tables), consts);
        return;
      }
      for (Element e = 1; e <= m; ++e) {
        consts[ci] = e;
        emit_consts(ci + 1);
      }
    };
    std::function<void(std::size_t)> emit_masks = [&](std::size_t r) {
      if (r == cells.size()) {
        emit_consts(0);
        return;
      }
      const std::uint64_t top = std::uint64_t{1} << cells[r].size();
      for (std::uint64_t mask = 0; mask < top; ++mask) {
        masks[r] = mask;
        emit_masks(r + 1);
      }
    };
    emit_masks(0);
  }
  return family;
}

}  // namespace fmtwb
