#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fmtwb/counterexample.hpp"
#include "fmtwb/prenex.hpp"
#include "fmtwb/structure.hpp"

namespace fmtwb {

struct GameConfig {
  int k = 0;                         // Spoiler picks in the first structure
  int n = 0;                         // Spoiler picks in the second structure
  std::uint64_t budget = 100000000;  // bound on |A|^k |B|^k |B|^n |A|^n
};

enum class Winner { duplicator, spoiler };

// dup_b[i]: Duplicator's reply to the i-th witness tuple (lexicographic index
// over A^k).  dup_f: each witness tuple's answers stored consecutively, one
// per universal tuple, so for a single opponent dup_f[i * |B|^n + j] answers
// universal tuple j under witness tuple i.  Family games also fill
// dup_member[i], the opponent Duplicator replies in for witness tuple i;
// single-opponent games leave it empty.  sp_a plus sp_e[j]: Spoiler's witness
// tuple and, for the j-th possible reply tuple (member-major across a
// family), a universal tuple no f-tuple answers.  Tables above the storage
// threshold are elided (re-derivable by re-solving).
struct GameCertificate {
  bool elided = false;
  std::vector<int> dup_member;
  std::vector<std::vector<Element>> dup_b;
  std::vector<std::vector<Element>> dup_f;
  std::vector<Element> sp_a;
  std::vector<std::vector<Element>> sp_e;
};

struct GameOutcome {
  Winner winner = Winner::duplicator;
  GameCertificate certificate;
  std::uint64_t positions = 0;  // partial-isomorphism tests performed
};

// Decides whether for every witness tuple in A^k there is a reply in B^k
// such that for every universal tuple in B^n some answer tuple in A^n makes
//   constants u { a_i -> b_i } u { f_j -> e_j }
// a partial isomorphism from A to B.  A Duplicator win transfers every
// prenex sentence with prefix exists^k forall^n and quantifier-free matrix
// from A to B.  Deterministic: all tuples in lexicographic order, inner
// results memoized on the canonical pair set.  Throws VocabularyMismatch on
// differing vocabularies and BudgetExceeded when the tuple-space product
// exceeds the budget.
GameOutcome solve_prefix_game(const Structure& a, const Structure& b,
                              const GameConfig& cfg);

// Family variant: Duplicator additionally picks which opponent structure to
// reply in, independently per witness tuple.  A Duplicator win transfers
// every prenex sentence with prefix exists^k forall^n from a into at least
// one member of bs, where the member may depend on the sentence.  The budget
// bounds |A|^k (sum over members of |B|^k |B|^n) |A|^n.
GameOutcome solve_prefix_game(const Structure& a, std::span<const Structure> bs,
                              const GameConfig& cfg);

// Replays a certificate: every claimed Duplicator win is re-checked by a
// direct partial-isomorphism test, every claimed Spoiler defeat by an
// exhaustive answer search.  Throws MissingCertificate on elided
// certificates.
bool check_certificate(const Structure& a, const Structure& b, const GameConfig& cfg,
                       const GameOutcome& outcome);

// Family form of the replay.  A certificate without a member column is read
// as always answering in the sole member and is rejected for larger families.
bool check_certificate(const Structure& a, std::span<const Structure> bs,
                       const GameConfig& cfg, const GameOutcome& outcome);

// Aggregated evidence that phi(k) separates the block structures from their
// weakenings while no sentence with k leading existentials and n universals
// can: the models differ, the prenex form of phi(k) needs k+1 existentials,
// and Duplicator wins the (k, n) family game against the weakenings, picking
// per witness tuple which weakening to answer in.  Against any single fixed
// weakening Spoiler wins by probing the erased mark, which is exactly why
// the transfer statement quantifies over the family.  When the game space
// exceeds the budget the family game is skipped and the counterexample
// module's answering strategy is exercised over the full (witness,
// universal) grid instead.
struct TransferReport {
  CxParams params;
  std::uint64_t budget = 100000000;
  bool a_models_phi = false;
  bool a_models_prenex = false;
  std::vector<bool> b_models_phi;     // per istar; all expected false
  std::vector<bool> b_models_prenex;  // per istar; all expected false
  PrefixClass prenex_class;
  bool prefix_ok = false;  // exactly k+1 leading existentials, then universals
  bool games_exhaustive = false;
  std::vector<GameOutcome> games;  // the family game, when games_exhaustive
  std::vector<bool> games_certified;
  std::uint64_t strategy_pairs = 0;  // fallback grid size
  bool strategy_ok = false;          // fallback verdict
  bool separation = false;           // all facts line up
};

TransferReport transfer_separation_report(const CxParams& p,
                                          std::uint64_t budget = 100000000);

}  // namespace fmtwb
