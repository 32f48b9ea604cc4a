#include "fmtwb/parser.hpp"

#include <cctype>
#include <map>

#include "fmtwb/errors.hpp"

namespace fmtwb {

namespace {

enum class Tok { ident, lparen, rparen, comma, dot, amp, pipe, arrow, bang, eq, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) {
      current_ = {Tok::end, "", start};
      return;
    }
    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      current_ = {Tok::ident, text_.substr(pos_, end - pos_), start};
      pos_ = end;
      return;
    }
    switch (c) {
      case '(': current_ = {Tok::lparen, "(", start}; break;
      case ')': current_ = {Tok::rparen, ")", start}; break;
      case ',': current_ = {Tok::comma, ",", start}; break;
      case '.': current_ = {Tok::dot, ".", start}; break;
      case '&': current_ = {Tok::amp, "&", start}; break;
      case '|': current_ = {Tok::pipe, "|", start}; break;
      case '!': current_ = {Tok::bang, "!", start}; break;
      case '=': current_ = {Tok::eq, "=", start}; break;
      case '-':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          current_ = {Tok::arrow, "->", start};
          ++pos_;
          break;
        }
        [[fallthrough]];
      default:
        fail(Errc::syntax_error,
             "unexpected character '" + std::string(1, c) + "' at offset " +
                 std::to_string(start),
             start);
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  Token current_{Tok::end, "", 0};
};

class Parser {
 public:
  Parser(const std::string& text, const Vocabulary* vocab)
      : lexer_(text), vocab_(vocab) {}

  FormulaPtr parse() {
    FormulaPtr f = parse_implies();
    const Token& t = lexer_.peek();
    if (t.kind != Tok::end)
      fail(Errc::syntax_error,
           "unexpected trailing input at offset " + std::to_string(t.pos), t.pos);
    return f;
  }

  Vocabulary inferred_vocab() const {
    std::vector<RelationSymbol> rels;
    for (const auto& [name, arity] : inferred_) rels.push_back({name, arity});
    return Vocabulary(std::move(rels), {});
  }

 private:
  FormulaPtr parse_implies() {
    FormulaPtr lhs = parse_or();
    if (lexer_.peek().kind == Tok::arrow) {
      lexer_.take();
      return Formula::impl(std::move(lhs), parse_implies());
    }
    return lhs;
  }

  FormulaPtr parse_or() {
    std::vector<FormulaPtr> parts{parse_and()};
    while (lexer_.peek().kind == Tok::pipe) {
      lexer_.take();
      parts.push_back(parse_and());
    }
    return Formula::disj_all(std::move(parts));
  }

  FormulaPtr parse_and() {
    std::vector<FormulaPtr> parts{parse_unary()};
    while (lexer_.peek().kind == Tok::amp) {
      lexer_.take();
      parts.push_back(parse_unary());
    }
    return Formula::conj_all(std::move(parts));
  }

  FormulaPtr parse_unary() {
    const Token& t = lexer_.peek();
    if (t.kind == Tok::bang) {
      lexer_.take();
      return Formula::negate(parse_unary());
    }
    if (t.kind == Tok::ident && (t.text == "forall" || t.text == "exists")) {
      const Token quant = lexer_.take();
      const Token var = expect(Tok::ident, "quantified variable");
      expect(Tok::dot, "'.'");
      FormulaPtr body = parse_implies();  // maximal scope to the right
      return quant.text == "forall" ? Formula::forall(var.text, std::move(body))
                                    : Formula::exists(var.text, std::move(body));
    }
    return parse_primary();
  }

  FormulaPtr parse_primary() {
    const Token& t = lexer_.peek();
    if (t.kind == Tok::lparen) {
      lexer_.take();
      FormulaPtr inner = parse_implies();
      expect(Tok::rparen, "')'");
      return inner;
    }
    if (t.kind != Tok::ident)
      fail(Errc::syntax_error,
           "expected a formula at offset " + std::to_string(t.pos), t.pos);
    const Token head = lexer_.take();
    if (lexer_.peek().kind == Tok::lparen) return parse_atom(head);
    // Otherwise this must be the left side of an equality.
    Term lhs = make_term(head);
    const Token& eq = lexer_.peek();
    if (eq.kind != Tok::eq)
      fail(Errc::syntax_error,
           "expected '=' or '(' after '" + head.text + "' at offset " +
               std::to_string(eq.pos),
           eq.pos);
    lexer_.take();
    const Token rhs = expect(Tok::ident, "term");
    return Formula::equals(std::move(lhs), make_term(rhs));
  }

  FormulaPtr parse_atom(const Token& head) {
    expect(Tok::lparen, "'('");
    std::vector<Term> args;
    args.push_back(make_term(expect(Tok::ident, "term")));
    while (lexer_.peek().kind == Tok::comma) {
      lexer_.take();
      args.push_back(make_term(expect(Tok::ident, "term")));
    }
    expect(Tok::rparen, "')'");
    const int arity = static_cast<int>(args.size());
    if (vocab_) {
      auto rel = vocab_->relation_index(head.text);
      if (!rel)
        fail(Errc::unknown_symbol,
             "relation " + head.text + " is not in the vocabulary (offset " +
                 std::to_string(head.pos) + ")",
             head.pos);
      if (vocab_->arity(*rel) != arity)
        fail(Errc::arity_error,
             head.text + " expects " + std::to_string(vocab_->arity(*rel)) +
                 " arguments, got " + std::to_string(arity),
             head.pos);
    } else {
      auto [it, inserted] = inferred_.emplace(head.text, arity);
      if (!inserted && it->second != arity)
        fail(Errc::arity_error,
             head.text + " used with arity " + std::to_string(arity) +
                 " after arity " + std::to_string(it->second),
             head.pos);
    }
    return Formula::atom(head.text, std::move(args));
  }

  Term make_term(const Token& t) {
    if (t.text == "forall" || t.text == "exists")
      fail(Errc::syntax_error,
           "'" + t.text + "' cannot be used as a term (offset " +
               std::to_string(t.pos) + ")",
           t.pos);
    if (vocab_ && vocab_->is_constant(t.text)) return Term::cons(t.text);
    return Term::var(t.text);
  }

  Token expect(Tok kind, const std::string& what) {
    const Token& t = lexer_.peek();
    if (t.kind != kind)
      fail(Errc::syntax_error,
           "expected " + what + " at offset " + std::to_string(t.pos), t.pos);
    return lexer_.take();
  }

  Lexer lexer_;
  const Vocabulary* vocab_;
  std::map<std::string, int> inferred_;
};

}  // namespace

FormulaPtr parse_formula(const std::string& text, const Vocabulary& vocab) {
  Parser parser(text, &vocab);
  return parser.parse();
}

InferredParse parse_formula_inferring(const std::string& text) {
  Parser parser(text, nullptr);
  FormulaPtr f = parser.parse();
  return {std::move(f), parser.inferred_vocab()};
}

}  // namespace fmtwb
