#include "fmtwb/counterexample.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include "fmtwb/errors.hpp"
#include "fmtwb/eval.hpp"
#include "fmtwb/rng.hpp"

namespace fmtwb {

void validate(const CxParams& p) {
  if (p.n < 1)
    fail(Errc::precondition_failed, "n must be >= 1, got " + std::to_string(p.n));
  if (p.k < 0)
    fail(Errc::precondition_failed, "k must be >= 0, got " + std::to_string(p.k));
}

int block_size(const CxParams& p) { return 8 * p.n + 1; }
int universe_size(const CxParams& p) { return block_size(p) * (p.k + 1); }
int block_base(const CxParams& p, int block) { return block_size(p) * block; }
Element marked_element(const CxParams& p, int block) {
  return block_base(p, block) + 4 * p.n + 1;
}
int block_of(const CxParams& p, Element e) { return (e - 1) / block_size(p); }

const VocabularyPtr& tau() {
  static const VocabularyPtr vocab =
      make_vocabulary({{"leq", 2}, {"S", 2}, {"P", 1}}, {"c", "d"});
  return vocab;
}

namespace {

Term tv(const std::string& name) { return Term::var(name); }
Term tc(const std::string& name) { return Term::cons(name); }

FormulaPtr leq(Term a, Term b) {
  return Formula::atom("leq", {std::move(a), std::move(b)});
}

std::string xvar(int i) { return "x" + std::to_string(i); }

FormulaPtr xi1() {
  FormulaPtr refl = leq(tv("x"), tv("x"));
  FormulaPtr antisym = Formula::impl(Formula::conj(leq(tv("x"), tv("y")), leq(tv("y"), tv("x"))),
                                     Formula::equals(tv("x"), tv("y")));
  FormulaPtr trans = Formula::impl(Formula::conj(leq(tv("x"), tv("y")), leq(tv("y"), tv("z"))),
                                   leq(tv("x"), tv("z")));
  FormulaPtr total = Formula::disj(leq(tv("x"), tv("y")), leq(tv("y"), tv("x")));
  return Formula::forall(
      "x", Formula::forall(
               "y", Formula::forall(
                        "z", Formula::conj_all({refl, antisym, trans, total}))));
}

FormulaPtr xi2() {
  return Formula::forall(
      "x", Formula::conj(leq(tc("c"), tv("x")), leq(tv("x"), tc("d"))));
}

FormulaPtr xi3() {
  FormulaPtr nothing_between = Formula::forall(
      "z", Formula::impl(Formula::conj(leq(tv("x"), tv("z")), leq(tv("z"), tv("y"))),
                         Formula::disj(Formula::equals(tv("z"), tv("x")),
                                       Formula::equals(tv("z"), tv("y")))));
  FormulaPtr body = Formula::impl(
      Formula::atom("S", {tv("x"), tv("y")}),
      Formula::conj_all({leq(tv("x"), tv("y")),
                         Formula::negate(Formula::equals(tv("x"), tv("y"))),
                         nothing_between}));
  return Formula::forall("x", Formula::forall("y", body));
}

FormulaPtr xi4() {
  return Formula::forall(
      "x", Formula::impl(Formula::negate(Formula::equals(tv("x"), tc("d"))),
                         Formula::exists("y", Formula::atom("S", {tv("x"), tv("y")}))));
}

FormulaPtr xi5(int k) {
  std::vector<FormulaPtr> marked;
  for (int i = 1; i <= k + 1; ++i)
    marked.push_back(Formula::atom("P", {tv(xvar(i))}));
  FormulaPtr some_equal;
  if (k == 0) {
    // Empty disjunction: the falsum convention over a term in scope.
    some_equal = Formula::negate(Formula::equals(tv(xvar(1)), tv(xvar(1))));
  } else {
    std::vector<FormulaPtr> eqs;
    for (int i = 1; i <= k + 1; ++i)
      for (int j = i + 1; j <= k + 1; ++j)
        eqs.push_back(Formula::equals(tv(xvar(i)), tv(xvar(j))));
    some_equal = Formula::disj_all(std::move(eqs));
  }
  FormulaPtr body = Formula::impl(Formula::conj_all(std::move(marked)),
                                  std::move(some_equal));
  for (int i = k + 1; i >= 1; --i) body = Formula::forall(xvar(i), std::move(body));
  return body;
}

}  // namespace

FormulaPtr xi(int index, int k) {
  if (k < 0) fail(Errc::precondition_failed, "k must be >= 0");
  switch (index) {
    case 1: return xi1();
    case 2: return xi2();
    case 3: return xi3();
    case 4: return xi4();
    case 5: return xi5(k);
  }
  fail(Errc::precondition_failed, "xi index must be in 1..5");
}

FormulaPtr phi(int k) {
  return Formula::conj(Formula::conj_all({xi1(), xi2(), xi3()}),
                       Formula::negate(Formula::conj(xi4(), xi5(k))));
}

FormulaPtr phi_prenex(int k) {
  if (k < 0) fail(Errc::precondition_failed, "k must be >= 0");
  const Term y1 = tv("y1"), y2 = tv("y2"), y3 = tv("y3");
  std::vector<FormulaPtr> order;
  order.push_back(leq(y1, y1));
  order.push_back(Formula::impl(Formula::conj(leq(y1, y2), leq(y2, y1)),
                                Formula::equals(y1, y2)));
  order.push_back(Formula::impl(Formula::conj(leq(y1, y2), leq(y2, y3)), leq(y1, y3)));
  order.push_back(Formula::disj(leq(y1, y2), leq(y2, y1)));
  order.push_back(leq(tc("c"), y1));
  order.push_back(leq(y1, tc("d")));
  order.push_back(Formula::impl(
      Formula::atom("S", {y1, y2}),
      Formula::conj_all(
          {leq(y1, y2), Formula::negate(Formula::equals(y1, y2)),
           Formula::impl(Formula::conj(leq(y1, y3), leq(y3, y2)),
                         Formula::disj(Formula::equals(y3, y1),
                                       Formula::equals(y3, y2)))})));

  // The escape disjunct quantifies over the innermost universal variable so a
  // failing witness tuple is refuted after one inner sweep, not |U|^2 of them.
  FormulaPtr escape =
      Formula::conj(Formula::negate(Formula::equals(tv(xvar(1)), tc("d"))),
                    Formula::negate(Formula::atom("S", {tv(xvar(1)), y3})));

  std::vector<FormulaPtr> witness_parts;
  for (int i = 1; i <= k + 1; ++i)
    witness_parts.push_back(Formula::atom("P", {tv(xvar(i))}));
  for (int i = 1; i <= k + 1; ++i)
    for (int j = i + 1; j <= k + 1; ++j)
      witness_parts.push_back(
          Formula::negate(Formula::equals(tv(xvar(i)), tv(xvar(j)))));

  FormulaPtr matrix =
      Formula::conj(Formula::conj_all(std::move(order)),
                    Formula::disj(std::move(escape),
                                  Formula::conj_all(std::move(witness_parts))));
  FormulaPtr out = Formula::forall(
      "y1", Formula::forall("y2", Formula::forall("y3", std::move(matrix))));
  for (int i = k + 1; i >= 1; --i) out = Formula::exists(xvar(i), std::move(out));
  return out;
}

Structure build_a(const CxParams& p) {
  validate(p);
  const int n = universe_size(p);
  std::vector<Element> universe(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) universe[static_cast<std::size_t>(i)] = i + 1;

  std::vector<Tuple> leq_table;
  leq_table.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) leq_table.push_back({i, j});
  std::vector<Tuple> succ;
  for (int i = 1; i < n; ++i) succ.push_back({i, i + 1});
  std::vector<Tuple> marked;
  for (int b = 0; b <= p.k; ++b) marked.push_back({marked_element(p, b)});

  std::ostringstream label;
  label << "A(n=" << p.n << ",k=" << p.k << ")";
  return Structure(tau(), std::move(universe),
                   {std::move(leq_table), std::move(succ), std::move(marked)}, {1, n},
                   label.str());
}

Structure build_b(const CxParams& p, int istar) {
  validate(p);
  if (istar < 0 || istar > p.k)
    fail(Errc::precondition_failed,
         "istar must be in 0.." + std::to_string(p.k) + ", got " + std::to_string(istar));
  Structure a = build_a(p);
  std::vector<Tuple> marked;
  for (int b = 0; b <= p.k; ++b)
    if (b != istar) marked.push_back({marked_element(p, b)});
  std::ostringstream label;
  label << "B(n=" << p.n << ",k=" << p.k << ",i=" << istar << ")";
  return Structure(a.vocab_ptr(), a.universe(),
                   {a.table(0), a.table(1), std::move(marked)}, a.constant_values(),
                   label.str());
}

int choose_istar(const CxParams& p, std::span<const Element> witnesses) {
  validate(p);
  if (static_cast<int>(witnesses.size()) > p.k)
    fail(Errc::precondition_failed,
         "at most k = " + std::to_string(p.k) + " witnesses allowed, got " +
             std::to_string(witnesses.size()));
  std::vector<bool> used(static_cast<std::size_t>(p.k + 1), false);
  for (Element w : witnesses) {
    if (w < 1 || w > universe_size(p))
      fail(Errc::not_a_subset, "witness " + std::to_string(w) + " outside the universe");
    used[static_cast<std::size_t>(block_of(p, w))] = true;
  }
  for (int b = 0; b <= p.k; ++b)
    if (!used[static_cast<std::size_t>(b)]) return b;
  fail(Errc::precondition_failed, "no free block");  // unreachable by pigeonhole
}

SegmentPlan segment_plan(const CxParams& p, int istar, std::span<const Element> e_tuple) {
  validate(p);
  if (istar < 0 || istar > p.k)
    fail(Errc::precondition_failed, "istar out of range");
  if (static_cast<int>(e_tuple.size()) != p.n)
    fail(Errc::wrong_arity, "expected a tuple of n = " + std::to_string(p.n) +
                                " elements, got " + std::to_string(e_tuple.size()));
  const int bs = block_size(p);
  const int base = block_base(p, istar);
  const int top = base + bs;  // last element of block istar
  for (Element e : e_tuple)
    if (e < 1 || e > universe_size(p))
      fail(Errc::not_a_subset, "element " + std::to_string(e) + " outside the universe");

  SegmentPlan plan;
  plan.istar = istar;

  std::vector<Element> sorted(e_tuple.begin(), e_tuple.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[j] + 1) ++j;
    plan.cs.push_back({sorted[i], sorted[j]});
    i = j + 1;
  }

  // Split by position; pin the boundary-adjacent interior runs so the
  // relocation can never collide with anchors just outside the block.
  std::vector<Segment> moved;
  int q = 0;  // largest identically answered offset left of the image zone
  for (const Segment& s : plan.cs) {
    const bool inside = s.lo > base && s.hi <= top;
    if (!inside) {
      plan.cs1.push_back(s);
      const Element in_lo = std::max<Element>(s.lo, base + 1);
      const Element in_hi = std::min<Element>(s.hi, top);
      for (Element e = in_lo; e <= in_hi; ++e)
        if (e - base <= 4 * p.n) q = std::max(q, e - base);
      continue;
    }
    plan.cs2.push_back(s);
    const int lo_off = s.lo - base;
    const int hi_off = s.hi - base;
    if (lo_off <= 2 || hi_off >= 8 * p.n) {
      plan.cs2_pinned.push_back(s);
      if (lo_off <= 2) q = std::max(q, hi_off);
    } else {
      moved.push_back(s);
    }
  }

  const int sigma = std::max({p.n + 1, 3, q + 2});
  int cursor = base + sigma;
  for (const Segment& s : moved) {
    plan.cs3.push_back({cursor, cursor + s.length() - 1});
    cursor = plan.cs3.back().hi + 2;
  }

  for (const Segment& s : plan.cs1)
    for (Element e = s.lo; e <= s.hi; ++e) plan.response.emplace_back(e, e);
  for (const Segment& s : plan.cs2_pinned)
    for (Element e = s.lo; e <= s.hi; ++e) plan.response.emplace_back(e, e);
  for (std::size_t i = 0; i < moved.size(); ++i)
    for (int t = 0; t < moved[i].length(); ++t)
      plan.response.emplace_back(moved[i].lo + t, plan.cs3[i].lo + t);
  std::sort(plan.response.begin(), plan.response.end());
  return plan;
}

std::vector<std::string> plan_violations(const CxParams& p, const SegmentPlan& plan) {
  std::vector<std::string> out;
  const int bs = block_size(p);
  const int base = block_base(p, plan.istar);
  const int top = base + bs;
  const Element marked = marked_element(p, plan.istar);

  // Structural split: cs1 + cs2 = cs, pinned + moved = cs2, |cs3| = #moved.
  std::vector<Segment> moved;
  for (const Segment& s : plan.cs2)
    if (std::find(plan.cs2_pinned.begin(), plan.cs2_pinned.end(), s) ==
        plan.cs2_pinned.end())
      moved.push_back(s);
  if (plan.cs1.size() + plan.cs2.size() != plan.cs.size() ||
      plan.cs3.size() != moved.size())
    out.push_back("segment-split");
  for (std::size_t i = 0; i + 1 < plan.cs.size(); ++i)
    if (plan.cs[i + 1].lo <= plan.cs[i].hi + 1) out.push_back("segment-split");
  for (std::size_t i = 0; i < plan.cs3.size() && i < moved.size(); ++i)
    if (plan.cs3[i].length() != moved[i].length()) out.push_back("segment-split");

  // relocation-bound: images stay within (8n+1)istar + 3n+1.
  for (const Segment& s : plan.cs3)
    if (s.lo <= base || s.hi > base + 3 * p.n + 1) out.push_back("relocation-bound");

  // marked-avoidance: neither images nor identically answered elements of
  // the block may touch the marked element.
  for (const Segment& s : plan.cs3)
    if (s.lo <= marked && marked <= s.hi) out.push_back("marked-avoidance");
  for (const auto& [e, f] : plan.response)
    if (e == f && e == marked) out.push_back("marked-avoidance");

  // poke-separation: cs1 elements inside the block keep to the first n-1
  // offsets (left) or the last n-1 offsets (right), strictly clear of the
  // image zone.
  const int first_image_off = plan.cs3.empty() ? bs + 1 : plan.cs3.front().lo - base;
  for (const Segment& s : plan.cs1) {
    const Element in_lo = std::max<Element>(s.lo, base + 1);
    const Element in_hi = std::min<Element>(s.hi, top);
    for (Element e = in_lo; e <= in_hi; ++e) {
      const int off = e - base;
      if (off > p.n - 1 && off < 7 * p.n + 2) out.push_back("poke-separation");
      if (off <= 4 * p.n && off >= first_image_off - 1) out.push_back("poke-separation");
    }
  }

  // image-spacing: exactly one free element between consecutive images, and
  // a clear gap above every identically answered element left of the zone.
  for (std::size_t i = 0; i + 1 < plan.cs3.size(); ++i)
    if (plan.cs3[i + 1].lo != plan.cs3[i].hi + 2) out.push_back("image-spacing");
  int q = 0;
  for (const Segment& s : plan.cs1) {
    const Element in_hi = std::min<Element>(s.hi, top);
    for (Element e = std::max<Element>(s.lo, base + 1); e <= in_hi; ++e)
      if (e - base <= 4 * p.n) q = std::max(q, e - base);
  }
  for (const Segment& s : plan.cs2_pinned)
    if (s.lo - base <= 2) q = std::max(q, s.hi - base);
  if (!plan.cs3.empty() && first_image_off < std::max({p.n + 1, 3, q + 2}))
    out.push_back("image-spacing");

  // response-shape: defined exactly on the union of cs, identity outside the
  // relocated runs, strictly increasing, targets in range.
  std::size_t expected = 0;
  for (const Segment& s : plan.cs) expected += static_cast<std::size_t>(s.length());
  if (plan.response.size() != expected) out.push_back("response-shape");
  for (std::size_t i = 0; i < plan.response.size(); ++i) {
    const auto& [e, f] = plan.response[i];
    if (f < 1 || f > universe_size(p)) out.push_back("response-shape");
    if (i > 0 && (e <= plan.response[i - 1].first || f <= plan.response[i - 1].second))
      out.push_back("response-shape");
    bool in_moved = false;
    for (const Segment& s : moved)
      if (s.lo <= e && e <= s.hi) in_moved = true;
    if (!in_moved && e != f) out.push_back("response-shape");
    if (in_moved && (f <= base || f > top)) out.push_back("response-shape");
  }

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

DuplicatorResponse duplicator_response(const CxParams& p,
                                       std::span<const Element> witnesses,
                                       std::span<const Element> e_tuple) {
  DuplicatorResponse r;
  r.istar = choose_istar(p, witnesses);
  r.plan = segment_plan(p, r.istar, e_tuple);
  r.f_tuple.reserve(e_tuple.size());
  for (Element e : e_tuple) {
    auto it = std::lower_bound(
        r.plan.response.begin(), r.plan.response.end(), e,
        [](const std::pair<Element, Element>& pr, Element v) { return pr.first < v; });
    r.f_tuple.push_back(it->second);
  }
  return r;
}

PartialMap response_map(const Structure& b, const Structure& a,
                        std::span<const Element> witnesses,
                        const DuplicatorResponse& r) {
  std::vector<std::pair<Element, Element>> pairs;
  pairs.reserve(witnesses.size() + r.plan.response.size());
  for (Element w : witnesses) pairs.emplace_back(w, w);
  for (const auto& [e, f] : r.plan.response) pairs.emplace_back(e, f);
  return make_partial_map(b, a, std::move(pairs));
}

namespace {

// Power capped at `cap`; used for grid sizing against the budget.
std::uint64_t checked_pow(std::uint64_t base, int exp, std::uint64_t cap) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > cap / (base == 0 ? 1 : base)) return cap;
    out *= base;
  }
  return out;
}

void decode_tuple(std::uint64_t index, int width, std::uint64_t radix,
                  std::vector<Element>& out) {
  for (int j = width - 1; j >= 0; --j) {
    out[static_cast<std::size_t>(j)] = static_cast<Element>(index % radix) + 1;
    index /= radix;
  }
}

struct GridStats {
  std::uint64_t pairs = 0;
  std::uint64_t failures = 0;
  std::uint64_t violations = 0;
  std::uint64_t first_failure = static_cast<std::uint64_t>(-1);
};

}  // namespace

VerifyReport verify_counterexample(const CxParams& p, const VerifyOptions& options) {
  validate(p);
  VerifyReport report;
  report.params = p;
  report.exhaustive = options.exhaustive;
  report.sample_count = options.exhaustive ? 0 : options.sample_count;
  report.seed = options.seed;

  const Structure a = build_a(p);
  std::vector<Structure> bs;
  for (int i = 0; i <= p.k; ++i) bs.push_back(build_b(p, i));
  const FormulaPtr f = phi(p.k);
  const FormulaPtr fp = phi_prenex(p.k);

  if (options.exhaustive) {
    CheckResult models{"models"};
    models.pass = evaluate(a, *f);
    if (!models.pass) models.detail = "a does not satisfy phi";
    for (int i = 0; i <= p.k && models.pass; ++i)
      if (evaluate(bs[static_cast<std::size_t>(i)], *f)) {
        models.pass = false;
        models.detail = "b with istar=" + std::to_string(i) + " satisfies phi";
      }
    models.checked = static_cast<std::uint64_t>(p.k) + 2;
    report.checks.push_back(models);

    CheckResult prenex{"prenex-agreement"};
    prenex.pass = evaluate(a, *fp);
    if (!prenex.pass) prenex.detail = "a does not satisfy phi_prenex";
    for (int i = 0; i <= p.k && prenex.pass; ++i)
      if (evaluate(bs[static_cast<std::size_t>(i)], *fp)) {
        prenex.pass = false;
        prenex.detail = "b with istar=" + std::to_string(i) + " satisfies phi_prenex";
      }
    prenex.checked = static_cast<std::uint64_t>(p.k) + 2;
    report.checks.push_back(prenex);
  } else {
    CheckResult models{"models"};
    models.skipped = true;
    models.pass = true;
    models.detail = "exhaustive-only check";
    report.checks.push_back(models);
    CheckResult prenex{"prenex-agreement"};
    prenex.skipped = true;
    prenex.pass = true;
    prenex.detail = "exhaustive-only check";
    report.checks.push_back(prenex);
  }

  const std::uint64_t radix = static_cast<std::uint64_t>(universe_size(p));
  const std::uint64_t cap = static_cast<std::uint64_t>(1) << 62;
  const std::uint64_t witness_space = checked_pow(radix, p.k, cap);
  const std::uint64_t universal_space = checked_pow(radix, p.n, cap);

  // The strategy grid: (witness tuple, universal tuple) pairs, iterated
  // witness-major; a pair index is a_index * universal_space + e_index.
  std::vector<std::pair<std::vector<Element>, std::vector<Element>>> sample;
  std::uint64_t total_pairs = 0;
  if (options.exhaustive) {
    if (witness_space >= cap / universal_space)
      fail(Errc::budget_exceeded, "pair grid overflows the budget");
    total_pairs = witness_space * universal_space;
    if (total_pairs > options.budget)
      fail(Errc::budget_exceeded,
           "exhaustive grid of " + std::to_string(total_pairs) +
               " pairs exceeds the budget of " + std::to_string(options.budget));
  } else {
    Rng rng(options.seed);
    sample.reserve(options.sample_count);
    for (std::uint64_t i = 0; i < options.sample_count; ++i) {
      std::vector<Element> witnesses(static_cast<std::size_t>(p.k));
      for (auto& w : witnesses) w = static_cast<Element>(rng.below(radix)) + 1;
      std::vector<Element> e_tuple(static_cast<std::size_t>(p.n));
      for (auto& e : e_tuple) e = static_cast<Element>(rng.below(radix)) + 1;
      sample.emplace_back(std::move(witnesses), std::move(e_tuple));
    }
    total_pairs = options.sample_count;
  }

  const int jobs = std::clamp(options.jobs, 1, 64);
  std::vector<GridStats> stats(static_cast<std::size_t>(jobs));

  auto run_pair = [&](GridStats& st, std::uint64_t pair_index,
                      std::span<const Element> witnesses,
                      std::span<const Element> e_tuple) {
    DuplicatorResponse r = duplicator_response(p, witnesses, e_tuple);
    const std::vector<std::string> bad = plan_violations(p, r.plan);
    st.violations += bad.size();
    PartialMap rho =
        response_map(bs[static_cast<std::size_t>(r.istar)], a, witnesses, r);
    const bool ok = is_partial_isomorphism(rho) && bad.empty();
    ++st.pairs;
    if (!ok) {
      ++st.failures;
      st.first_failure = std::min(st.first_failure, pair_index);
    }
  };

  auto worker = [&](int job) {
    GridStats& st = stats[static_cast<std::size_t>(job)];
    if (options.exhaustive) {
      const std::uint64_t a_lo =
          witness_space * static_cast<std::uint64_t>(job) / static_cast<std::uint64_t>(jobs);
      const std::uint64_t a_hi = witness_space * static_cast<std::uint64_t>(job + 1) /
                                 static_cast<std::uint64_t>(jobs);
      std::vector<Element> witnesses(static_cast<std::size_t>(p.k));
      std::vector<Element> e_tuple(static_cast<std::size_t>(p.n));
      for (std::uint64_t ai = a_lo; ai < a_hi; ++ai) {
        decode_tuple(ai, p.k, radix, witnesses);
        for (std::uint64_t ei = 0; ei < universal_space; ++ei) {
          decode_tuple(ei, p.n, radix, e_tuple);
          run_pair(st, ai * universal_space + ei, witnesses, e_tuple);
        }
      }
    } else {
      const std::uint64_t lo =
          total_pairs * static_cast<std::uint64_t>(job) / static_cast<std::uint64_t>(jobs);
      const std::uint64_t hi = total_pairs * static_cast<std::uint64_t>(job + 1) /
                               static_cast<std::uint64_t>(jobs);
      for (std::uint64_t i = lo; i < hi; ++i)
        run_pair(stats[static_cast<std::size_t>(job)], i, sample[i].first,
                 sample[i].second);
    }
  };

  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) threads.emplace_back(worker, j);
    for (auto& t : threads) t.join();
  }

  GridStats merged;
  merged.first_failure = static_cast<std::uint64_t>(-1);
  for (const GridStats& st : stats) {
    merged.pairs += st.pairs;
    merged.failures += st.failures;
    merged.violations += st.violations;
    merged.first_failure = std::min(merged.first_failure, st.first_failure);
  }

  report.pairs_checked = merged.pairs;
  report.strategy_failures = merged.failures;
  report.plan_violations = merged.violations;
  if (merged.failures > 0) {
    std::vector<Element> witnesses(static_cast<std::size_t>(p.k));
    std::vector<Element> e_tuple(static_cast<std::size_t>(p.n));
    if (options.exhaustive) {
      decode_tuple(merged.first_failure / universal_space, p.k, radix, witnesses);
      decode_tuple(merged.first_failure % universal_space, p.n, radix, e_tuple);
    } else {
      witnesses = sample[merged.first_failure].first;
      e_tuple = sample[merged.first_failure].second;
    }
    report.first_failure = {witnesses, e_tuple};
  }

  CheckResult strategy{"strategy"};
  strategy.pass = merged.failures == 0;
  strategy.checked = merged.pairs;
  if (!strategy.pass)
    strategy.detail = std::to_string(merged.failures) + " failing pairs";
  report.checks.push_back(strategy);

  CheckResult calibration{"calibration"};
  calibration.pass = merged.violations == 0;
  calibration.checked = merged.pairs;
  if (!calibration.pass)
    calibration.detail = std::to_string(merged.violations) + " plan violations";
  report.checks.push_back(calibration);

  report.pass = true;
  for (const CheckResult& c : report.checks)
    if (!c.skipped && !c.pass) report.pass = false;
  return report;
}

}  // namespace fmtwb
