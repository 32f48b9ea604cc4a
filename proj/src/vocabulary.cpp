#include "fmtwb/vocabulary.hpp"

#include <set>

#include "fmtwb/errors.hpp"

namespace fmtwb {

Vocabulary::Vocabulary(std::vector<RelationSymbol> relations,
                       std::vector<std::string> constants)
    : relations_(std::move(relations)), constants_(std::move(constants)) {
  std::set<std::string> seen;
  for (const auto& r : relations_) {
    if (r.name.empty()) fail(Errc::precondition_failed, "empty relation name");
    if (r.arity < 1)
      fail(Errc::precondition_failed, "relation " + r.name + " has arity " +
                                          std::to_string(r.arity) + ", expected >= 1");
    if (!seen.insert(r.name).second)
      fail(Errc::precondition_failed, "duplicate symbol " + r.name);
  }
  for (const auto& c : constants_) {
    if (c.empty()) fail(Errc::precondition_failed, "empty constant name");
    if (!seen.insert(c).second) fail(Errc::precondition_failed, "duplicate symbol " + c);
  }
}

std::optional<int> Vocabulary::relation_index(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(relations_.size()); ++i)
    if (relations_[i].name == name) return i;
  return std::nullopt;
}

std::optional<int> Vocabulary::constant_index(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(constants_.size()); ++i)
    if (constants_[i] == name) return i;
  return std::nullopt;
}

VocabularyPtr make_vocabulary(std::vector<RelationSymbol> relations,
                              std::vector<std::string> constants) {
  return std::make_shared<const Vocabulary>(std::move(relations), std::move(constants));
}

}  // namespace fmtwb
