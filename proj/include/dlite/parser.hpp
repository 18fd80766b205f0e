#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dlite/ast.hpp"

namespace dlite {

/// The fourteen rows of the common-syntax-error table, plus Unclassified for
/// malformed input matching no row.
enum class SyntaxErrorClass {
  InvalidInverseOnConcept,
  MisplacedInverse,
  InverseOnQuantifier,
  MisplacedQuantifier,
  QuantifierOnConcept,
  QuantifierMissingRole,
  RedundantQuantifiers,
  MisplacedNegation,
  DanglingNegation,
  IncompleteConjunction,
  ConceptRoleConjunction,
  RoleRoleConjunction,
  MissingConjunctionOperator,
  MisplacedConjunctionOperator,
  Unclassified,
};

constexpr int kSyntaxErrorClassCount = 14;  // excluding Unclassified

std::string error_class_name(SyntaxErrorClass c);

struct ParseError {
  SyntaxErrorClass error_class = SyntaxErrorClass::Unclassified;
  std::size_t position = 0;  // byte offset into the input line
  std::string message;
};

using Statement = std::variant<Axiom, Assertion>;

struct ParseOutcome {
  std::optional<Statement> ok;
  std::optional<ParseError> err;

  bool is_ok() const { return ok.has_value(); }
};

/// Parses a single statement. The optional signature supplies concept/role
/// typing for names the line itself leaves ambiguous; the type-aware error
/// classes (quantifier-on-concept, the conjunction typing rows) and bare
/// role inclusions ("R [= S") can only be recognized with it.
ParseOutcome parse_axiom(const std::string& line, const Signature* context = nullptr);

struct OntologyParseResult {
  Ontology ontology;
  std::vector<std::pair<std::size_t, ParseError>> errors;  // (line number, error)
};

/// Two passes: the first collects role/concept typing evidence (inverse and
/// exists markers, funct declarations, assertion arity), the second parses
/// every line with that context. Blank lines and '#' comments are skipped;
/// the dialect is inferred as the smallest one covering the axioms present.
/// In strict mode the first error throws.
// `seed` pre-types names (merged with evidence gathered from the text itself);
// useful when a name never occurs in a role- or concept-revealing position.
OntologyParseResult parse_ontology(const std::string& text, bool strict = false,
                                   const Signature* seed = nullptr);

std::string serialize(const Statement& s, TextMode mode = TextMode::Unicode);

struct CorruptionResult {
  std::string text;
  SyntaxErrorClass applied;
};

/// Classes applicable to the axiom's shape (e.g. RedundantQuantifiers needs
/// an exists term).
std::vector<SyntaxErrorClass> applicable_corruptions(const Axiom& axiom);

/// Deterministically corrupts the serialized axiom so that it fails to parse
/// under the axiom's own signature. Returns nullopt when the class has no
/// applicable site.
std::optional<CorruptionResult> corrupt(const Axiom& axiom, SyntaxErrorClass cls,
                                        std::uint64_t seed);

/// Uniform over applicable classes.
std::optional<CorruptionResult> corrupt_random(const Axiom& axiom, std::uint64_t seed);

}  // namespace dlite
