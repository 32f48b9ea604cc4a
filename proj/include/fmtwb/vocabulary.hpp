#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fmtwb {

struct RelationSymbol {
  std::string name;
  int arity = 1;

  friend bool operator==(const RelationSymbol&, const RelationSymbol&) = default;
};

// Purely relational vocabulary: relation symbols with fixed positive arity
// plus constant symbols.  No function symbols.  Names are unique across both
// kinds.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<RelationSymbol> relations, std::vector<std::string> constants);

  const std::vector<RelationSymbol>& relations() const { return relations_; }
  const std::vector<std::string>& constants() const { return constants_; }

  std::optional<int> relation_index(const std::string& name) const;
  std::optional<int> constant_index(const std::string& name) const;
  bool is_constant(const std::string& name) const { return constant_index(name).has_value(); }
  int arity(int relation_index) const { return relations_[relation_index].arity; }

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

 private:
  std::vector<RelationSymbol> relations_;
  std::vector<std::string> constants_;
};

using VocabularyPtr = std::shared_ptr<const Vocabulary>;

VocabularyPtr make_vocabulary(std::vector<RelationSymbol> relations,
                              std::vector<std::string> constants);

}  // namespace fmtwb
