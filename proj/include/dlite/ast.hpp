#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace dlite {

/// Basic role: an atomic role name, optionally inverted. Double inversion is
/// unrepresentable by construction.
struct Role {
  std::string name;
  bool inverted = false;

  Role inverse() const { return {name, !inverted}; }
  auto operator<=>(const Role&) const = default;
};

/// Basic concept: atomic name or an existential restriction over a basic role.
struct Concept {
  enum class Kind { Atomic, Exists };
  Kind kind = Kind::Atomic;
  std::string name;  // Atomic
  Role role;         // Exists

  static Concept atomic(std::string n) { return {Kind::Atomic, std::move(n), {}}; }
  static Concept exists(Role r) { return {Kind::Exists, {}, std::move(r)}; }
  bool is_atomic() const { return kind == Kind::Atomic; }
  bool is_exists() const { return kind == Kind::Exists; }
  auto operator<=>(const Concept&) const = default;
};

/// General concept: B | ¬B | C₁ ⊓ C₂. Negation applies only to a basic
/// concept; conjunction is binary and right-nested by the parser.
struct GeneralConcept {
  enum class Kind { Basic, Neg, Conj };
  Kind kind = Kind::Basic;
  Concept basic;  // Basic / Neg
  std::shared_ptr<const GeneralConcept> left, right;  // Conj

  static GeneralConcept pos(Concept b) { return {Kind::Basic, std::move(b), nullptr, nullptr}; }
  static GeneralConcept neg(Concept b) { return {Kind::Neg, std::move(b), nullptr, nullptr}; }
  static GeneralConcept conj(GeneralConcept a, GeneralConcept b) {
    GeneralConcept g;
    g.kind = Kind::Conj;
    g.left = std::make_shared<const GeneralConcept>(std::move(a));
    g.right = std::make_shared<const GeneralConcept>(std::move(b));
    return g;
  }
};

bool operator==(const GeneralConcept& a, const GeneralConcept& b);

/// General role: R | ¬R.
struct GeneralRole {
  Role role;
  bool negated = false;
  auto operator<=>(const GeneralRole&) const = default;
};

struct ConceptIncl {
  Concept lhs;
  GeneralConcept rhs;
};
bool operator==(const ConceptIncl& a, const ConceptIncl& b);

struct RoleIncl {
  Role lhs;
  GeneralRole rhs;
  auto operator<=>(const RoleIncl&) const = default;
};

struct FunctAxiom {
  Role role;
  auto operator<=>(const FunctAxiom&) const = default;
};

using Axiom = std::variant<ConceptIncl, RoleIncl, FunctAxiom>;
bool operator==(const Axiom& a, const Axiom& b);

struct ConceptAssert {
  std::string concept_name;
  std::string individual;
  auto operator<=>(const ConceptAssert&) const = default;
};

struct RoleAssert {
  std::string role_name;
  std::string subject;
  std::string object;
  auto operator<=>(const RoleAssert&) const = default;
};

using Assertion = std::variant<ConceptAssert, RoleAssert>;

enum class Dialect { Core, F, R, FR };

std::string dialect_name(Dialect d);

/// TBox + ABox with set semantics. Iteration order is lexicographic by the
/// serialized (ascii) form of each statement.
class Ontology {
 public:
  Ontology() = default;
  explicit Ontology(Dialect d) : dialect_(d) {}

  /// Inserts unless an equal statement is already present. Returns false on
  /// duplicates. Throws std::invalid_argument when the axiom kind is not
  /// allowed by the dialect.
  bool add(const Axiom& ax);
  bool add(const Assertion& as);
  bool remove_axiom(const Axiom& ax);
  bool remove_assertion(const Assertion& as);

  const std::vector<Axiom>& tbox() const { return tbox_; }
  const std::vector<Assertion>& abox() const { return abox_; }
  Dialect dialect() const { return dialect_; }
  void set_dialect(Dialect d);

  /// Smallest dialect covering the axioms present.
  static Dialect infer_dialect(const std::vector<Axiom>& tbox);

  bool empty() const { return tbox_.empty() && abox_.empty(); }

 private:
  Dialect dialect_ = Dialect::FR;
  std::vector<Axiom> tbox_;        // sorted by serialized form
  std::vector<Assertion> abox_;    // sorted by serialized form
};

struct Signature {
  std::set<std::string> concepts;
  std::set<std::string> roles;
  std::set<std::string> individuals;

  bool operator==(const Signature&) const = default;
  Signature& merge(const Signature& other);
};

enum class TextMode { Unicode, Ascii };

std::string to_text(const Role& r, TextMode mode = TextMode::Unicode);
std::string to_text(const Concept& c, TextMode mode = TextMode::Unicode);
std::string to_text(const GeneralConcept& c, TextMode mode = TextMode::Unicode);
std::string to_text(const Axiom& a, TextMode mode = TextMode::Unicode);
std::string to_text(const Assertion& a, TextMode mode = TextMode::Unicode);

/// Statement ordering key: the ascii serialized form.
std::string text_key(const Axiom& a);
std::string text_key(const Assertion& a);

/// Splits every B ⊑ C₁ ⊓ C₂ into B ⊑ C₁ and B ⊑ C₂ recursively. After
/// normalization every ConceptIncl rhs is Basic or Neg. Idempotent and
/// signature-preserving; non-concept axioms pass through unchanged.
std::vector<Axiom> normalize(const std::vector<Axiom>& tbox);

Signature signature_of(const Axiom& a);
Signature signature_of(const Assertion& a);
Signature signature_of(const Ontology& o);

bool is_valid_identifier(const std::string& s);

/// Probe placeholders live in a reserved namespace (x1, x2, ...) and are
/// exempt from the unique-name assumption.
bool is_placeholder(const std::string& individual);
std::string fresh_placeholder(const Signature& sig);

}  // namespace dlite
