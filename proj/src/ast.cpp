#include "dlite/ast.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace dlite {

namespace {

struct Symbols {
  const char* subsumes;
  const char* conj;
  const char* neg;
  const char* exists;
  const char* inverse;
};

Symbols symbols(TextMode mode) {
  if (mode == TextMode::Unicode)
    return {"⊑", "⊓", "¬", "∃", "⁻"};
  return {"[=", "&", "!", "exists ", "^-"};
}

}  // namespace

bool operator==(const GeneralConcept& a, const GeneralConcept& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case GeneralConcept::Kind::Basic:
    case GeneralConcept::Kind::Neg:
      return a.basic == b.basic;
    case GeneralConcept::Kind::Conj:
      return *a.left == *b.left && *a.right == *b.right;
  }
  return false;
}

bool operator==(const ConceptIncl& a, const ConceptIncl& b) {
  return a.lhs == b.lhs && a.rhs == b.rhs;
}

bool operator==(const Axiom& a, const Axiom& b) {
  if (a.index() != b.index()) return false;
  if (const auto* ca = std::get_if<ConceptIncl>(&a))
    return *ca == std::get<ConceptIncl>(b);
  if (const auto* ra = std::get_if<RoleIncl>(&a))
    return *ra == std::get<RoleIncl>(b);
  return std::get<FunctAxiom>(a) == std::get<FunctAxiom>(b);
}

std::string dialect_name(Dialect d) {
  switch (d) {
    case Dialect::Core: return "core";
    case Dialect::F: return "F";
    case Dialect::R: return "R";
    case Dialect::FR: return "FR";
  }
  return "?";
}

std::string to_text(const Role& r, TextMode mode) {
  std::string out = r.name;
  if (r.inverted) out += symbols(mode).inverse;
  return out;
}

std::string to_text(const Concept& c, TextMode mode) {
  if (c.is_atomic()) return c.name;
  return std::string(symbols(mode).exists) + to_text(c.role, mode);
}

std::string to_text(const GeneralConcept& c, TextMode mode) {
  const Symbols sym = symbols(mode);
  switch (c.kind) {
    case GeneralConcept::Kind::Basic:
      return to_text(c.basic, mode);
    case GeneralConcept::Kind::Neg:
      return std::string(sym.neg) + to_text(c.basic, mode);
    case GeneralConcept::Kind::Conj:
      return to_text(*c.left, mode) + " " + sym.conj + " " + to_text(*c.right, mode);
  }
  return {};
}

std::string to_text(const Axiom& a, TextMode mode) {
  const Symbols sym = symbols(mode);
  if (const auto* ci = std::get_if<ConceptIncl>(&a))
    return to_text(ci->lhs, mode) + " " + sym.subsumes + " " + to_text(ci->rhs, mode);
  if (const auto* ri = std::get_if<RoleIncl>(&a)) {
    std::string rhs = to_text(ri->rhs.role, mode);
    if (ri->rhs.negated) rhs = std::string(sym.neg) + rhs;
    return to_text(ri->lhs, mode) + " " + sym.subsumes + " " + rhs;
  }
  const auto& f = std::get<FunctAxiom>(a);
  return "(funct " + to_text(f.role, mode) + ")";
}

std::string to_text(const Assertion& a, TextMode mode) {
  (void)mode;
  if (const auto* ca = std::get_if<ConceptAssert>(&a))
    return ca->concept_name + "(" + ca->individual + ")";
  const auto& ra = std::get<RoleAssert>(a);
  return ra.role_name + "(" + ra.subject + ", " + ra.object + ")";
}

std::string text_key(const Axiom& a) { return to_text(a, TextMode::Ascii); }
std::string text_key(const Assertion& a) { return to_text(a, TextMode::Ascii); }

void Ontology::set_dialect(Dialect d) {
  for (const Axiom& ax : tbox_) {
    Dialect needed = infer_dialect({ax});
    bool ok = d == Dialect::FR || needed == Dialect::Core || needed == d;
    if (!ok)
      throw std::invalid_argument("axiom '" + to_text(ax) +
                                  "' not allowed in DL-Lite " + dialect_name(d));
  }
  dialect_ = d;
}

Dialect Ontology::infer_dialect(const std::vector<Axiom>& tbox) {
  bool has_funct = false, has_role_incl = false;
  for (const Axiom& ax : tbox) {
    if (std::holds_alternative<FunctAxiom>(ax)) has_funct = true;
    if (std::holds_alternative<RoleIncl>(ax)) has_role_incl = true;
  }
  if (has_funct && has_role_incl) return Dialect::FR;
  if (has_funct) return Dialect::F;
  if (has_role_incl) return Dialect::R;
  return Dialect::Core;
}

bool Ontology::add(const Axiom& ax) {
  if (std::holds_alternative<FunctAxiom>(ax) &&
      (dialect_ == Dialect::Core || dialect_ == Dialect::R))
    throw std::invalid_argument("funct axiom not allowed in DL-Lite " +
                                dialect_name(dialect_));
  if (std::holds_alternative<RoleIncl>(ax) &&
      (dialect_ == Dialect::Core || dialect_ == Dialect::F))
    throw std::invalid_argument("role inclusion not allowed in DL-Lite " +
                                dialect_name(dialect_));
  const std::string key = text_key(ax);
  auto it = std::lower_bound(tbox_.begin(), tbox_.end(), key,
                             [](const Axiom& a, const std::string& k) { return text_key(a) < k; });
  if (it != tbox_.end() && text_key(*it) == key) return false;
  tbox_.insert(it, ax);
  return true;
}

bool Ontology::add(const Assertion& as) {
  const std::string key = text_key(as);
  auto it = std::lower_bound(abox_.begin(), abox_.end(), key,
                             [](const Assertion& a, const std::string& k) { return text_key(a) < k; });
  if (it != abox_.end() && text_key(*it) == key) return false;
  abox_.insert(it, as);
  return true;
}

bool Ontology::remove_axiom(const Axiom& ax) {
  const std::string key = text_key(ax);
  auto it = std::find_if(tbox_.begin(), tbox_.end(),
                         [&](const Axiom& a) { return text_key(a) == key; });
  if (it == tbox_.end()) return false;
  tbox_.erase(it);
  return true;
}

bool Ontology::remove_assertion(const Assertion& as) {
  const std::string key = text_key(as);
  auto it = std::find_if(abox_.begin(), abox_.end(),
                         [&](const Assertion& a) { return text_key(a) == key; });
  if (it == abox_.end()) return false;
  abox_.erase(it);
  return true;
}

Signature& Signature::merge(const Signature& other) {
  concepts.insert(other.concepts.begin(), other.concepts.end());
  roles.insert(other.roles.begin(), other.roles.end());
  individuals.insert(other.individuals.begin(), other.individuals.end());
  return *this;
}

namespace {

void collect(const Concept& c, Signature& sig) {
  if (c.is_atomic())
    sig.concepts.insert(c.name);
  else
    sig.roles.insert(c.role.name);
}

void collect(const GeneralConcept& g, Signature& sig) {
  switch (g.kind) {
    case GeneralConcept::Kind::Basic:
    case GeneralConcept::Kind::Neg:
      collect(g.basic, sig);
      break;
    case GeneralConcept::Kind::Conj:
      collect(*g.left, sig);
      collect(*g.right, sig);
      break;
  }
}

void split_rhs(const Concept& lhs, const GeneralConcept& rhs, std::vector<Axiom>& out) {
  if (rhs.kind == GeneralConcept::Kind::Conj) {
    split_rhs(lhs, *rhs.left, out);
    split_rhs(lhs, *rhs.right, out);
  } else {
    out.push_back(ConceptIncl{lhs, rhs});
  }
}

}  // namespace

Signature signature_of(const Axiom& a) {
  Signature sig;
  if (const auto* ci = std::get_if<ConceptIncl>(&a)) {
    collect(ci->lhs, sig);
    collect(ci->rhs, sig);
  } else if (const auto* ri = std::get_if<RoleIncl>(&a)) {
    sig.roles.insert(ri->lhs.name);
    sig.roles.insert(ri->rhs.role.name);
  } else {
    sig.roles.insert(std::get<FunctAxiom>(a).role.name);
  }
  return sig;
}

Signature signature_of(const Assertion& a) {
  Signature sig;
  if (const auto* ca = std::get_if<ConceptAssert>(&a)) {
    sig.concepts.insert(ca->concept_name);
    sig.individuals.insert(ca->individual);
  } else {
    const auto& ra = std::get<RoleAssert>(a);
    sig.roles.insert(ra.role_name);
    sig.individuals.insert(ra.subject);
    sig.individuals.insert(ra.object);
  }
  return sig;
}

Signature signature_of(const Ontology& o) {
  Signature sig;
  for (const Axiom& ax : o.tbox()) sig.merge(signature_of(ax));
  for (const Assertion& as : o.abox()) sig.merge(signature_of(as));
  return sig;
}

std::vector<Axiom> normalize(const std::vector<Axiom>& tbox) {
  std::vector<Axiom> out;
  for (const Axiom& ax : tbox) {
    if (const auto* ci = std::get_if<ConceptIncl>(&ax))
      split_rhs(ci->lhs, ci->rhs, out);
    else
      out.push_back(ax);
  }
  // set semantics, canonical order
  std::sort(out.begin(), out.end(),
            [](const Axiom& a, const Axiom& b) { return text_key(a) < text_key(b); });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Axiom& a, const Axiom& b) { return text_key(a) == text_key(b); }),
            out.end());
  return out;
}

bool is_valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

bool is_placeholder(const std::string& individual) {
  if (individual.size() < 2 || individual[0] != 'x') return false;
  return std::all_of(individual.begin() + 1, individual.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::string fresh_placeholder(const Signature& sig) {
  for (int i = 1;; ++i) {
    std::string cand = "x" + std::to_string(i);
    if (!sig.individuals.count(cand)) return cand;
  }
}

}  // namespace dlite
