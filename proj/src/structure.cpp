#include "fmtwb/structure.hpp"

#include <algorithm>
#include <unordered_map>

#include "fmtwb/errors.hpp"

namespace fmtwb {

namespace {

std::uint64_t pack2(Element a, Element b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(b));
}

bool tuple_less(const Tuple& a, std::span<const Element> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool tuple_equal(const Tuple& a, std::span<const Element> b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

Structure::Structure(VocabularyPtr vocab, std::vector<Element> universe,
                     std::vector<std::vector<Tuple>> tables,
                     std::vector<Element> constants, std::string label)
    : vocab_(std::move(vocab)),
      universe_(std::move(universe)),
      tables_(std::move(tables)),
      constants_(std::move(constants)),
      label_(std::move(label)) {
  if (!vocab_) fail(Errc::precondition_failed, "null vocabulary");
  std::sort(universe_.begin(), universe_.end());
  universe_.erase(std::unique(universe_.begin(), universe_.end()), universe_.end());
  if (universe_.empty()) fail(Errc::precondition_failed, "empty universe");

  const auto& rels = vocab_->relations();
  if (tables_.size() != rels.size())
    fail(Errc::precondition_failed, "expected one table per relation symbol");
  for (std::size_t r = 0; r < rels.size(); ++r) {
    const int arity = rels[r].arity;
    for (const Tuple& t : tables_[r]) {
      if (static_cast<int>(t.size()) != arity)
        fail(Errc::wrong_arity, "tuple of arity " + std::to_string(t.size()) +
                                    " in table of " + rels[r].name + "/" +
                                    std::to_string(arity));
      for (Element e : t)
        if (!std::binary_search(universe_.begin(), universe_.end(), e))
          fail(Errc::not_a_subset, "tuple element " + std::to_string(e) +
                                       " outside the universe in table of " + rels[r].name);
    }
    std::sort(tables_[r].begin(), tables_[r].end());
    tables_[r].erase(std::unique(tables_[r].begin(), tables_[r].end()), tables_[r].end());
  }

  if (constants_.size() != vocab_->constants().size())
    fail(Errc::missing_constant, "expected one interpretation per constant symbol");
  for (std::size_t c = 0; c < constants_.size(); ++c)
    if (!std::binary_search(universe_.begin(), universe_.end(), constants_[c]))
      fail(Errc::missing_constant, "constant " + vocab_->constants()[c] +
                                       " interpreted outside the universe");

  packed_.resize(tables_.size());
  for (std::size_t r = 0; r < tables_.size(); ++r) {
    if (rels[r].arity > 2) continue;
    packed_[r].reserve(tables_[r].size() * 2);
    for (const Tuple& t : tables_[r])
      packed_[r].insert(t.size() == 1 ? pack2(0, t[0]) : pack2(t[0], t[1]));
  }
}

bool Structure::contains(Element e) const {
  return std::binary_search(universe_.begin(), universe_.end(), e);
}

bool Structure::has_tuple(int relation, std::span<const Element> tuple) const {
  if (tuple.size() <= 2) {
    const std::uint64_t key =
        tuple.size() == 1 ? pack2(0, tuple[0]) : pack2(tuple[0], tuple[1]);
    return packed_[relation].count(key) != 0;
  }
  const auto& table = tables_[relation];
  auto it = std::lower_bound(table.begin(), table.end(), tuple, tuple_less);
  return it != table.end() && tuple_equal(*it, tuple);
}

bool operator==(const Structure& a, const Structure& b) {
  return (a.vocab_ == b.vocab_ || *a.vocab_ == *b.vocab_) && a.universe_ == b.universe_ &&
         a.constants_ == b.constants_ && a.tables_ == b.tables_;
}

std::uint64_t Structure::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (Element e : universe_) mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(e)));
  mix(0xfeedu);
  for (Element e : constants_) mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(e)));
  for (const auto& table : tables_) {
    mix(0xbeefu);
    for (const Tuple& t : table)
      for (Element e : t) mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(e)));
  }
  return h;
}

Structure induced_substructure(const Structure& s, std::span<const Element> subset) {
  std::vector<Element> universe(subset.begin(), subset.end());
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  if (universe.empty()) fail(Errc::precondition_failed, "empty subset");
  for (Element e : universe)
    if (!s.contains(e))
      fail(Errc::not_a_subset, "element " + std::to_string(e) + " outside the universe");
  for (std::size_t c = 0; c < s.constant_values().size(); ++c)
    if (!std::binary_search(universe.begin(), universe.end(), s.constant_value(c)))
      fail(Errc::missing_constant,
           "subset drops the interpretation of " + s.vocab().constants()[c]);

  std::vector<std::vector<Tuple>> tables(s.tables().size());
  for (std::size_t r = 0; r < s.tables().size(); ++r) {
    for (const Tuple& t : s.table(static_cast<int>(r))) {
      bool inside = true;
      for (Element e : t)
        if (!std::binary_search(universe.begin(), universe.end(), e)) {
          inside = false;
          break;
        }
      if (inside) tables[r].push_back(t);
    }
  }
  return Structure(s.vocab_ptr(), std::move(universe), std::move(tables),
                   s.constant_values());
}

namespace {

// Depth-first enumeration of sorted subsets in lexicographic order.  The
// candidate list is scanned in increasing order, so a branch can be cut as
// soon as it would skip past a constant element that is still missing.
struct SubsetWalker {
  const Structure& s;
  const std::function<bool(const Structure&)>& visit;
  std::optional<int> bound;
  std::vector<Element> pinned;  // sorted distinct constant interpretations
  std::vector<Element> prefix;

  bool walk(std::size_t from, std::size_t pins_used) {
    const auto& u = s.universe();
    for (std::size_t i = from; i < u.size(); ++i) {
      if (pins_used < pinned.size() && u[i] > pinned[pins_used]) return true;
      const bool is_pin = pins_used < pinned.size() && u[i] == pinned[pins_used];
      prefix.push_back(u[i]);
      const std::size_t pins_now = pins_used + (is_pin ? 1 : 0);
      if (pins_now == pinned.size() &&
          (!bound || static_cast<int>(prefix.size()) <= *bound))
        if (!visit(induced_substructure(s, prefix))) return false;
      if (!bound || static_cast<int>(prefix.size()) < *bound)
        if (!walk(i + 1, pins_now)) return false;
      prefix.pop_back();
      if (is_pin) return true;  // every later subset at this level skips the pin
    }
    return true;
  }
};

}  // namespace

bool for_each_substructure(const Structure& s,
                           const std::function<bool(const Structure&)>& visit,
                           std::optional<int> size_bound) {
  std::vector<Element> pinned = s.constant_values();
  std::sort(pinned.begin(), pinned.end());
  pinned.erase(std::unique(pinned.begin(), pinned.end()), pinned.end());
  if (size_bound && static_cast<int>(pinned.size()) > *size_bound) return true;
  SubsetWalker walker{s, visit, size_bound, std::move(pinned), {}};
  walker.prefix.reserve(s.universe().size());
  return walker.walk(0, 0);
}

std::vector<Structure> enumerate_substructures(const Structure& s,
                                               std::optional<int> size_bound) {
  std::vector<Structure> out;
  for_each_substructure(
      s,
      [&out](const Structure& sub) {
        out.push_back(sub);
        return true;
      },
      size_bound);
  return out;
}

bool is_extension(const Structure& base, const Structure& ext) {
  if (!(base.vocab() == ext.vocab()))
    fail(Errc::vocabulary_mismatch, "structures use different vocabularies");
  for (Element e : base.universe())
    if (!ext.contains(e)) return false;
  if (base.constant_values() != ext.constant_values()) return false;
  for (std::size_t r = 0; r < base.tables().size(); ++r) {
    const int rel = static_cast<int>(r);
    for (const Tuple& t : base.table(rel))
      if (!ext.has_tuple(rel, t)) return false;
    // The other inclusion: every ext tuple inside base's universe is in base.
    for (const Tuple& t : ext.table(rel)) {
      bool inside = true;
      for (Element e : t)
        if (!base.contains(e)) {
          inside = false;
          break;
        }
      if (inside && !base.has_tuple(rel, t)) return false;
    }
  }
  return true;
}

PartialMap make_partial_map(const Structure& source, const Structure& target,
                            std::vector<std::pair<Element, Element>> pairs) {
  for (std::size_t c = 0; c < source.constant_values().size(); ++c)
    pairs.emplace_back(source.constant_value(c), target.constant_value(c));
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return PartialMap{&source, &target, std::move(pairs)};
}

bool is_partial_isomorphism(const PartialMap& m) {
  if (!m.source || !m.target) return false;
  const Structure& src = *m.source;
  const Structure& tgt = *m.target;
  if (!(src.vocab() == tgt.vocab())) return false;

  // Constant pairs are part of the map whether or not the caller added them.
  std::vector<std::pair<Element, Element>> pairs = m.pairs;
  for (std::size_t c = 0; c < src.constant_values().size(); ++c)
    pairs.emplace_back(src.constant_value(c), tgt.constant_value(c));
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!src.contains(pairs[i].first) || !tgt.contains(pairs[i].second)) return false;
    if (i > 0 && pairs[i].first == pairs[i - 1].first) return false;  // not functional
  }
  {
    std::vector<Element> images;
    images.reserve(pairs.size());
    for (const auto& p : pairs) images.push_back(p.second);
    std::sort(images.begin(), images.end());
    if (std::adjacent_find(images.begin(), images.end()) != images.end())
      return false;  // not injective
  }

  // Atom preservation over the full domain, both directions.
  const std::size_t n = pairs.size();
  std::vector<Element> dom_tuple, img_tuple;
  const auto& rels = src.vocab().relations();
  for (std::size_t r = 0; r < rels.size(); ++r) {
    const int arity = rels[r].arity;
    if (n == 0) break;
    std::vector<std::size_t> odo(static_cast<std::size_t>(arity), 0);
    dom_tuple.assign(static_cast<std::size_t>(arity), 0);
    img_tuple.assign(static_cast<std::size_t>(arity), 0);
    while (true) {
      for (int i = 0; i < arity; ++i) {
        dom_tuple[i] = pairs[odo[i]].first;
        img_tuple[i] = pairs[odo[i]].second;
      }
      if (src.has_tuple(static_cast<int>(r), dom_tuple) !=
          tgt.has_tuple(static_cast<int>(r), img_tuple))
        return false;
      int pos = arity - 1;
      while (pos >= 0 && ++odo[pos] == n) odo[pos--] = 0;
      if (pos < 0) break;
    }
  }
  return true;
}

namespace {

struct IsoSearch {
  const Structure& a;
  const Structure& b;
  std::vector<std::pair<Element, Element>> assigned;
  std::vector<bool> used;  // indexes into b.universe()

  // Checks every atom of every relation that involves the newly mapped
  // element, over the current partial domain.
  bool consistent_with_last() const {
    const Element fresh = assigned.back().first;
    const std::size_t n = assigned.size();
    const auto& rels = a.vocab().relations();
    std::vector<Element> dom_tuple, img_tuple;
    for (std::size_t r = 0; r < rels.size(); ++r) {
      const int arity = rels[r].arity;
      std::vector<std::size_t> odo(static_cast<std::size_t>(arity), 0);
      dom_tuple.assign(static_cast<std::size_t>(arity), 0);
      img_tuple.assign(static_cast<std::size_t>(arity), 0);
      while (true) {
        bool touches_fresh = false;
        for (int i = 0; i < arity; ++i) {
          dom_tuple[i] = assigned[odo[i]].first;
          img_tuple[i] = assigned[odo[i]].second;
          touches_fresh |= dom_tuple[i] == fresh;
        }
        if (touches_fresh && a.has_tuple(static_cast<int>(r), dom_tuple) !=
                                 b.has_tuple(static_cast<int>(r), img_tuple))
          return false;
        int pos = arity - 1;
        while (pos >= 0 && ++odo[pos] == n) odo[pos--] = 0;
        if (pos < 0) break;
      }
    }
    return true;
  }

  bool extend(std::size_t pos,
              const std::unordered_map<Element, Element>& forced) {
    if (pos == a.universe().size()) return true;
    const Element source = a.universe()[pos];
    auto it = forced.find(source);
    for (std::size_t j = 0; j < b.universe().size(); ++j) {
      if (used[j]) continue;
      const Element image = b.universe()[j];
      if (it != forced.end() && it->second != image) continue;
      assigned.emplace_back(source, image);
      used[j] = true;
      if (consistent_with_last() && extend(pos + 1, forced)) return true;
      used[j] = false;
      assigned.pop_back();
    }
    return false;
  }
};

}  // namespace

std::optional<std::vector<std::pair<Element, Element>>> find_isomorphism(
    const Structure& a, const Structure& b, int size_limit) {
  if (a.size() != b.size()) return std::nullopt;
  if (a.size() > size_limit)
    fail(Errc::size_limit_exceeded,
         "universe size " + std::to_string(a.size()) + " exceeds the limit of " +
             std::to_string(size_limit));
  if (!(a.vocab() == b.vocab())) return std::nullopt;
  for (std::size_t r = 0; r < a.tables().size(); ++r)
    if (a.table(static_cast<int>(r)).size() != b.table(static_cast<int>(r)).size())
      return std::nullopt;

  std::unordered_map<Element, Element> forced;
  for (std::size_t c = 0; c < a.constant_values().size(); ++c) {
    auto [it, inserted] = forced.emplace(a.constant_value(c), b.constant_value(c));
    if (!inserted && it->second != b.constant_value(c)) return std::nullopt;
  }

  IsoSearch search{a, b, {}, std::vector<bool>(b.universe().size(), false)};
  search.assigned.reserve(a.universe().size());
  if (!search.extend(0, forced)) return std::nullopt;
  return search.assigned;  // built over sorted universe(a), so sorted by source
}

}  // namespace fmtwb
