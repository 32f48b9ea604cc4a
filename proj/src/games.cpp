#include "fmtwb/games.hpp"

#include <algorithm>
#include <map>

#include "fmtwb/errors.hpp"
#include "fmtwb/eval.hpp"

namespace fmtwb {

namespace {

std::uint64_t sat_pow(std::uint64_t base, int exp, std::uint64_t cap) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && out > cap / base) return cap;
    out *= base;
  }
  return out;
}

void decode(std::uint64_t index, int width, const std::vector<Element>& universe,
            std::vector<Element>& out) {
  const std::uint64_t radix = universe.size();
  out.resize(static_cast<std::size_t>(width));
  for (int j = width - 1; j >= 0; --j) {
    out[static_cast<std::size_t>(j)] = universe[static_cast<std::size_t>(index % radix)];
    index /= radix;
  }
}

using PairList = std::vector<std::pair<Element, Element>>;

PairList canonical_base(const Structure& a, const Structure& b,
                        std::span<const Element> as, std::span<const Element> bs) {
  PairList pairs;
  pairs.reserve(as.size() + a.constant_values().size());
  for (std::size_t i = 0; i < as.size(); ++i) pairs.emplace_back(as[i], bs[i]);
  for (std::size_t c = 0; c < a.constant_values().size(); ++c)
    pairs.emplace_back(a.constant_value(static_cast<int>(c)),
                       b.constant_value(static_cast<int>(c)));
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

struct InnerResult {
  bool win = false;
  bool fs_stored = false;
  std::vector<std::vector<Element>> fs;  // per universal tuple, when stored
  std::vector<Element> bad_e;            // first unanswerable tuple, on loss
};

constexpr std::uint64_t store_limit = 1u << 20;

}  // namespace

GameOutcome solve_prefix_game(const Structure& a, const Structure& b,
                              const GameConfig& cfg) {
  GameOutcome outcome = solve_prefix_game(a, std::span<const Structure>(&b, 1), cfg);
  outcome.certificate.dup_member.clear();  // a single opponent needs no column
  return outcome;
}

GameOutcome solve_prefix_game(const Structure& a, std::span<const Structure> family,
                              const GameConfig& cfg) {
  if (family.empty())
    fail(Errc::precondition_failed, "family game needs at least one opponent");
  if (cfg.k < 0 || cfg.n < 0)
    fail(Errc::precondition_failed, "game round sizes must be >= 0");
  for (const Structure& b : family)
    if (!(a.vocab() == b.vocab()))
      fail(Errc::vocabulary_mismatch, "game structures must share a vocabulary");

  const std::uint64_t cap = std::uint64_t{1} << 62;
  const std::uint64_t na = a.universe().size();
  const std::uint64_t a_k = sat_pow(na, cfg.k, cap);
  const std::uint64_t a_n = sat_pow(na, cfg.n, cap);
  struct Dims {
    std::uint64_t b_k, b_n;
  };
  std::vector<Dims> dims;
  std::uint64_t reply_total = 0, inner_total = 0, max_b_n = 0;
  for (const Structure& b : family) {
    const std::uint64_t nb = b.universe().size();
    const Dims d{sat_pow(nb, cfg.k, cap), sat_pow(nb, cfg.n, cap)};
    dims.push_back(d);
    reply_total = std::min(cap, reply_total + d.b_k);
    const std::uint64_t block = (d.b_k != 0 && d.b_n > cap / d.b_k) ? cap : d.b_k * d.b_n;
    inner_total = std::min(cap, inner_total + block);
    max_b_n = std::max(max_b_n, d.b_n);
  }
  std::uint64_t space = a_k;
  for (std::uint64_t part : {inner_total, a_n})
    space = (part != 0 && space > cap / part) ? cap : space * part;
  if (space > cfg.budget)
    fail(Errc::budget_exceeded, "game space of " + std::to_string(space) +
                                    " positions exceeds the budget of " +
                                    std::to_string(cfg.budget));

  const bool store_dup =
      a_k <= store_limit && max_b_n <= store_limit && a_k * max_b_n <= store_limit;
  const bool store_sp = reply_total <= store_limit;

  GameOutcome outcome;
  std::map<std::pair<std::size_t, PairList>, InnerResult> memo;
  std::vector<Element> as, bs, es, fs;

  for (std::uint64_t ai = 0; ai < a_k; ++ai) {
    decode(ai, cfg.k, a.universe(), as);
    bool answered = false;
    std::vector<std::vector<Element>> defeats;
    if (store_sp) defeats.resize(reply_total);

    std::uint64_t reply_base = 0;
    for (std::size_t m = 0; m < family.size() && !answered; ++m) {
      const Structure& b = family[m];
      const std::uint64_t b_k = dims[m].b_k, b_n = dims[m].b_n;
      for (std::uint64_t bi = 0; bi < b_k && !answered; ++bi) {
        decode(bi, cfg.k, b.universe(), bs);
        const std::pair<std::size_t, PairList> key{m, canonical_base(a, b, as, bs)};
        auto it = memo.find(key);
        if (it == memo.end()) {
          InnerResult res;
          res.win = true;
          res.fs_stored = b_n <= store_limit;
          if (res.fs_stored) res.fs.resize(b_n);
          for (std::uint64_t ei = 0; ei < b_n && res.win; ++ei) {
            decode(ei, cfg.n, b.universe(), es);
            bool found = false;
            for (std::uint64_t fi = 0; fi < a_n && !found; ++fi) {
              decode(fi, cfg.n, a.universe(), fs);
              PairList pairs = key.second;
              for (int j = 0; j < cfg.n; ++j)
                pairs.emplace_back(fs[static_cast<std::size_t>(j)],
                                   es[static_cast<std::size_t>(j)]);
              ++outcome.positions;
              if (is_partial_isomorphism({&a, &b, std::move(pairs)})) {
                found = true;
                if (res.fs_stored) res.fs[ei] = fs;
              }
            }
            if (!found) {
              res.win = false;
              res.bad_e = es;
            }
          }
          it = memo.emplace(key, std::move(res)).first;
        }
        const InnerResult& res = it->second;
        if (res.win) {
          answered = true;
          if (store_dup && res.fs_stored) {
            outcome.certificate.dup_member.push_back(static_cast<int>(m));
            outcome.certificate.dup_b.push_back(bs);
            for (std::uint64_t ei = 0; ei < b_n; ++ei)
              outcome.certificate.dup_f.push_back(res.fs[ei]);
          } else {
            outcome.certificate.elided = true;
          }
        } else if (store_sp) {
          defeats[reply_base + bi] = res.bad_e;
        }
      }
      reply_base += b_k;
    }

    if (!answered) {
      outcome.winner = Winner::spoiler;
      outcome.certificate = GameCertificate{};
      if (store_sp) {
        outcome.certificate.sp_a = as;
        outcome.certificate.sp_e = std::move(defeats);
      } else {
        outcome.certificate.elided = true;
      }
      return outcome;
    }
  }
  outcome.winner = Winner::duplicator;
  if (!store_dup) outcome.certificate.elided = true;
  return outcome;
}

bool check_certificate(const Structure& a, const Structure& b, const GameConfig& cfg,
                       const GameOutcome& outcome) {
  return check_certificate(a, std::span<const Structure>(&b, 1), cfg, outcome);
}

bool check_certificate(const Structure& a, std::span<const Structure> family,
                       const GameConfig& cfg, const GameOutcome& outcome) {
  if (family.empty())
    fail(Errc::precondition_failed, "family game needs at least one opponent");
  if (outcome.certificate.elided)
    fail(Errc::missing_certificate, "certificate was elided; re-solve to check");
  const std::uint64_t cap = std::uint64_t{1} << 62;
  const std::uint64_t a_k = sat_pow(a.universe().size(), cfg.k, cap);
  const std::uint64_t a_n = sat_pow(a.universe().size(), cfg.n, cap);
  const auto& cert = outcome.certificate;
  std::vector<Element> as, es, fs;

  if (outcome.winner == Winner::duplicator) {
    if (cert.dup_member.empty()) {
      if (family.size() != 1) return false;
    } else if (cert.dup_member.size() != a_k) {
      return false;
    }
    if (cert.dup_b.size() != a_k) return false;
    std::size_t cursor = 0;
    for (std::uint64_t ai = 0; ai < a_k; ++ai) {
      const int m = cert.dup_member.empty() ? 0 : cert.dup_member[ai];
      if (m < 0 || static_cast<std::size_t>(m) >= family.size()) return false;
      const Structure& b = family[static_cast<std::size_t>(m)];
      const std::uint64_t b_n = sat_pow(b.universe().size(), cfg.n, cap);
      decode(ai, cfg.k, a.universe(), as);
      const std::vector<Element>& bs = cert.dup_b[ai];
      if (bs.size() != static_cast<std::size_t>(cfg.k)) return false;
      PairList base = canonical_base(a, b, as, bs);
      for (std::uint64_t ei = 0; ei < b_n; ++ei) {
        if (cursor >= cert.dup_f.size()) return false;
        decode(ei, cfg.n, b.universe(), es);
        const std::vector<Element>& answer = cert.dup_f[cursor++];
        if (answer.size() != static_cast<std::size_t>(cfg.n)) return false;
        PairList pairs = base;
        for (int j = 0; j < cfg.n; ++j)
          pairs.emplace_back(answer[static_cast<std::size_t>(j)],
                             es[static_cast<std::size_t>(j)]);
        if (!is_partial_isomorphism({&a, &b, std::move(pairs)})) return false;
      }
    }
    return cursor == cert.dup_f.size();
  }

  std::uint64_t reply_total = 0;
  for (const Structure& b : family)
    reply_total += sat_pow(b.universe().size(), cfg.k, cap);
  if (cert.sp_a.size() != static_cast<std::size_t>(cfg.k) ||
      cert.sp_e.size() != reply_total)
    return false;
  std::vector<Element> bs;
  std::size_t row = 0;
  for (const Structure& b : family) {
    const std::uint64_t b_k = sat_pow(b.universe().size(), cfg.k, cap);
    for (std::uint64_t bi = 0; bi < b_k; ++bi, ++row) {
      decode(bi, cfg.k, b.universe(), bs);
      PairList base = canonical_base(a, b, cert.sp_a, bs);
      const std::vector<Element>& defeat = cert.sp_e[row];
      if (defeat.size() != static_cast<std::size_t>(cfg.n)) return false;
      for (std::uint64_t fi = 0; fi < a_n; ++fi) {
        decode(fi, cfg.n, a.universe(), fs);
        PairList pairs = base;
        for (int j = 0; j < cfg.n; ++j)
          pairs.emplace_back(fs[static_cast<std::size_t>(j)],
                             defeat[static_cast<std::size_t>(j)]);
        if (is_partial_isomorphism({&a, &b, std::move(pairs)})) return false;
      }
    }
  }
  return true;
}

TransferReport transfer_separation_report(const CxParams& p, std::uint64_t budget) {
  validate(p);
  TransferReport rep;
  rep.params = p;
  rep.budget = budget;

  const Structure a = build_a(p);
  const FormulaPtr f = phi(p.k);
  const FormulaPtr fp = phi_prenex(p.k);
  rep.a_models_phi = evaluate(a, *f);
  rep.a_models_prenex = evaluate(a, *fp);
  rep.prenex_class = classify_prefix(*fp);
  rep.prefix_ok = !rep.prenex_class.blocks.empty() &&
                  rep.prenex_class.blocks.front() ==
                      std::pair{Quantifier::exists, p.k + 1} &&
                  is_exists_k_forall_star(rep.prenex_class, p.k + 1);

  bool all_b_refute = true;
  std::vector<Structure> bs;
  for (int i = 0; i <= p.k; ++i) {
    bs.push_back(build_b(p, i));
    const bool bm = evaluate(bs.back(), *f);
    const bool bp = evaluate(bs.back(), *fp);
    rep.b_models_phi.push_back(bm);
    rep.b_models_prenex.push_back(bp);
    all_b_refute = all_b_refute && !bm && !bp;
  }

  const GameConfig cfg{p.k, p.n, budget};
  const std::span<const Structure> weakenings(bs);
  bool games_ok = true;
  try {
    GameOutcome g = solve_prefix_game(a, weakenings, cfg);
    const bool certified =
        !g.certificate.elided && check_certificate(a, weakenings, cfg, g);
    games_ok = g.winner == Winner::duplicator && certified;
    rep.games.push_back(std::move(g));
    rep.games_certified.push_back(certified);
    rep.games_exhaustive = true;
  } catch (const Error& e) {
    if (e.code() != Errc::budget_exceeded) throw;
    rep.games.clear();
    rep.games_certified.clear();
    rep.games_exhaustive = false;
    VerifyOptions options;
    options.exhaustive = true;
    options.budget = budget;
    const VerifyReport fallback = verify_counterexample(p, options);
    rep.strategy_pairs = fallback.pairs_checked;
    rep.strategy_ok = fallback.pass;
  }

  rep.separation = rep.a_models_phi && rep.a_models_prenex && all_b_refute &&
                   rep.prefix_ok &&
                   (rep.games_exhaustive ? games_ok : rep.strategy_ok);
  return rep;
}

}  // namespace fmtwb
