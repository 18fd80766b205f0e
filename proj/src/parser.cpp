#include "dlite/parser.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "dlite/rng.hpp"

namespace dlite {

namespace {

// --------------------------------------------------------------------------
// Tokenizer. Accepts the unicode symbols and their ascii spellings alike.

enum class Tok {
  Ident,
  Subsumes,  // ⊑  [=
  And,       // ⊓  &
  Not,       // ¬  !
  Exists,    // ∃  exists
  Inv,       // ⁻  ^-
  LParen,
  RParen,
  Comma,
  End,
  Bad,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;  // byte offset
};

bool starts_with(const std::string& s, std::size_t i, const char* pat) {
  return s.compare(i, std::char_traits<char>::length(pat), pat) == 0;
}

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (i < n) {
    char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') { ++i; continue; }
    if (c == '#') break;  // comment to end of line
    if (starts_with(line, i, "⊑")) { out.push_back({Tok::Subsumes, "⊑", i}); i += 3; continue; }
    if (starts_with(line, i, "[=")) { out.push_back({Tok::Subsumes, "[=", i}); i += 2; continue; }
    if (starts_with(line, i, "⊓")) { out.push_back({Tok::And, "⊓", i}); i += 3; continue; }
    if (c == '&') { out.push_back({Tok::And, "&", i}); ++i; continue; }
    if (starts_with(line, i, "¬")) { out.push_back({Tok::Not, "¬", i}); i += 2; continue; }
    if (c == '!') { out.push_back({Tok::Not, "!", i}); ++i; continue; }
    if (starts_with(line, i, "∃")) { out.push_back({Tok::Exists, "∃", i}); i += 3; continue; }
    if (starts_with(line, i, "⁻")) { out.push_back({Tok::Inv, "⁻", i}); i += 3; continue; }
    if (starts_with(line, i, "^-")) { out.push_back({Tok::Inv, "^-", i}); i += 2; continue; }
    if (c == '(') { out.push_back({Tok::LParen, "(", i}); ++i; continue; }
    if (c == ')') { out.push_back({Tok::RParen, ")", i}); ++i; continue; }
    if (c == ',') { out.push_back({Tok::Comma, ",", i}); ++i; continue; }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i + 1;
      while (j < n && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
      std::string word = line.substr(i, j - i);
      if (word == "exists")
        out.push_back({Tok::Exists, word, i});
      else
        out.push_back({Tok::Ident, word, i});
      i = j;
      continue;
    }
    out.push_back({Tok::Bad, line.substr(i, 1), i});
    ++i;
  }
  out.push_back({Tok::End, "", n});
  return out;
}

// --------------------------------------------------------------------------
// Statement scanner with first-match error classification. The classifier
// order is documented in docs/error_classification.md.

struct Item {
  enum class Shape { Ambiguous, RoleExpr, ExistsTerm };
  Shape shape = Shape::Ambiguous;
  bool negated = false;
  std::string name;     // atomic name or role name
  bool inverted = false;  // role inversion (RoleExpr / ExistsTerm)
  std::size_t pos = 0;
};

struct Side {
  std::vector<Item> items;  // conjuncts in order
  std::size_t and_pos = 0;  // position of the first ⊓, if any
};

ParseOutcome fail(SyntaxErrorClass cls, std::size_t pos, std::string msg) {
  ParseOutcome o;
  o.err = ParseError{cls, pos, std::move(msg)};
  return o;
}

bool side_end(Tok k) { return k == Tok::Subsumes || k == Tok::End; }

// Scans one side of an inclusion. On success fills `side`; on error returns
// the classified outcome.
std::optional<ParseOutcome> scan_side(const std::vector<Token>& ts, std::size_t& i, Side& side) {
  bool expect_operand = true;
  while (!side_end(ts[i].kind)) {
    const Token& t = ts[i];
    if (expect_operand) {
      if (t.kind == Tok::And) {
        if (side.items.empty())
          return fail(SyntaxErrorClass::MisplacedConjunctionOperator, t.pos,
                      "conjunction operator with no left operand");
        return fail(SyntaxErrorClass::IncompleteConjunction, t.pos,
                    "conjunction operand missing");
      }
      if (t.kind == Tok::Inv)
        return fail(SyntaxErrorClass::MisplacedInverse, t.pos,
                    "inverse operator before its role");
      Item item;
      item.pos = t.pos;
      if (t.kind == Tok::Not) {
        ++i;
        if (side_end(ts[i].kind))
          return fail(SyntaxErrorClass::DanglingNegation, t.pos,
                      "negation without anything following");
        item.negated = true;
      }
      const Token& u = ts[i];
      if (u.kind == Tok::Exists) {
        ++i;
        if (ts[i].kind == Tok::Inv)
          return fail(SyntaxErrorClass::InverseOnQuantifier, ts[i].pos,
                      "inverse operator on a quantifier");
        if (ts[i].kind == Tok::Exists)
          return fail(SyntaxErrorClass::RedundantQuantifiers, ts[i].pos,
                      "redundant multiple quantifiers");
        if (ts[i].kind != Tok::Ident)
          return fail(SyntaxErrorClass::QuantifierMissingRole, u.pos,
                      "quantifier missing a role");
        item.shape = Item::Shape::ExistsTerm;
        item.name = ts[i].text;
        ++i;
        if (ts[i].kind == Tok::Inv) { item.inverted = true; ++i; }
      } else if (u.kind == Tok::Ident) {
        item.name = u.text;
        ++i;
        if (ts[i].kind == Tok::Inv) {
          item.shape = Item::Shape::RoleExpr;
          item.inverted = true;
          ++i;
        }
      } else if (u.kind == Tok::Not) {
        return fail(SyntaxErrorClass::Unclassified, u.pos, "double negation");
      } else {
        return fail(SyntaxErrorClass::Unclassified, u.pos,
                    "unexpected token '" + u.text + "'");
      }
      side.items.push_back(item);
      expect_operand = false;
    } else {
      if (t.kind == Tok::And) {
        if (side.items.size() == 1) side.and_pos = t.pos;
        ++i;
        if (side_end(ts[i].kind))
          return fail(SyntaxErrorClass::IncompleteConjunction, t.pos,
                      "conjoining incomplete concepts");
        expect_operand = true;
        continue;
      }
      if (t.kind == Tok::Not)
        return fail(SyntaxErrorClass::MisplacedNegation, t.pos,
                    "negation after a complete expression");
      if (t.kind == Tok::Exists) {
        if (ts[i + 1].kind == Tok::Ident)
          return fail(SyntaxErrorClass::MissingConjunctionOperator, t.pos,
                      "two expressions without a conjunction operator");
        return fail(SyntaxErrorClass::MisplacedQuantifier, t.pos,
                    "quantifier after its role");
      }
      if (t.kind == Tok::Ident)
        return fail(SyntaxErrorClass::MissingConjunctionOperator, t.pos,
                    "two expressions without a conjunction operator");
      if (t.kind == Tok::Inv)
        return fail(SyntaxErrorClass::MisplacedInverse, t.pos,
                    "stray inverse operator");
      return fail(SyntaxErrorClass::Unclassified, t.pos,
                  "unexpected token '" + t.text + "'");
    }
  }
  if (side.items.empty())
    return fail(SyntaxErrorClass::Unclassified, ts[i].pos, "empty expression");
  return std::nullopt;
}

// Name typing from the optional signature. A name typed both ways (or not at
// all) stays ambiguous.
enum class NameType { Unknown, ConceptName, RoleName };

NameType type_of(const std::string& name, const Signature* ctx) {
  if (!ctx) return NameType::Unknown;
  bool c = ctx->concepts.count(name) > 0;
  bool r = ctx->roles.count(name) > 0;
  if (c && !r) return NameType::ConceptName;
  if (r && !c) return NameType::RoleName;
  return NameType::Unknown;
}

bool item_is_role(const Item& it, const Signature* ctx) {
  if (it.shape == Item::Shape::RoleExpr) return true;
  if (it.shape == Item::Shape::ExistsTerm) return false;
  return type_of(it.name, ctx) == NameType::RoleName;
}

bool item_is_concept(const Item& it, const Signature* ctx) {
  if (it.shape == Item::Shape::ExistsTerm) return true;
  if (it.shape == Item::Shape::RoleExpr) return false;
  return type_of(it.name, ctx) == NameType::ConceptName;
}

Concept item_to_concept(const Item& it) {
  if (it.shape == Item::Shape::ExistsTerm)
    return Concept::exists({it.name, it.inverted});
  return Concept::atomic(it.name);
}

// Typing checks that apply to every item wherever it occurs.
std::optional<ParseOutcome> check_item_types(const Side& side, const Signature* ctx) {
  for (const Item& it : side.items) {
    if (it.shape == Item::Shape::RoleExpr &&
        type_of(it.name, ctx) == NameType::ConceptName)
      return fail(SyntaxErrorClass::InvalidInverseOnConcept, it.pos,
                  "inverse operator on the concept '" + it.name + "'");
    if (it.shape == Item::Shape::ExistsTerm &&
        type_of(it.name, ctx) == NameType::ConceptName)
      return fail(SyntaxErrorClass::QuantifierOnConcept, it.pos,
                  "quantifier applied to the concept '" + it.name + "'");
  }
  return std::nullopt;
}

std::optional<ParseOutcome> check_conjunction(const Side& side, const Signature* ctx) {
  if (side.items.size() < 2) return std::nullopt;
  bool any_role = false, all_role = true;
  for (const Item& it : side.items) {
    bool r = item_is_role(it, ctx);
    any_role |= r;
    all_role &= r;
  }
  if (all_role && any_role)
    return fail(SyntaxErrorClass::RoleRoleConjunction, side.and_pos,
                "conjoining roles directly");
  if (any_role)
    return fail(SyntaxErrorClass::ConceptRoleConjunction, side.and_pos,
                "conjoining a concept with a role");
  return std::nullopt;
}

ParseOutcome resolve_inclusion(const Side& lhs, const Side& rhs, const Signature* ctx) {
  for (const Side* s : {&lhs, &rhs}) {
    if (auto e = check_item_types(*s, ctx)) return *e;
    if (auto e = check_conjunction(*s, ctx)) return *e;
  }
  const bool lhs_role = lhs.items.size() == 1 && item_is_role(lhs.items[0], ctx);
  const bool rhs_role = rhs.items.size() == 1 && item_is_role(rhs.items[0], ctx);
  const bool lhs_concept = lhs.items.size() > 1 || item_is_concept(lhs.items[0], ctx);
  const bool rhs_concept = rhs.items.size() > 1 || item_is_concept(rhs.items[0], ctx);

  if ((lhs_concept && rhs_role) || (lhs_role && rhs_concept))
    return fail(SyntaxErrorClass::Unclassified, rhs.items[0].pos,
                "concept and role mixed across the inclusion");

  if (lhs_role || rhs_role) {
    // role inclusion R ⊑ E
    const Item& l = lhs.items[0];
    const Item& r = rhs.items[0];
    if (lhs.items.size() != 1 || rhs.items.size() != 1)
      return fail(SyntaxErrorClass::RoleRoleConjunction, lhs.and_pos ? lhs.and_pos : rhs.and_pos,
                  "conjoining roles directly");
    if (l.negated)
      return fail(SyntaxErrorClass::Unclassified, l.pos, "negated inclusion lhs");
    if (l.shape == Item::Shape::ExistsTerm || r.shape == Item::Shape::ExistsTerm)
      return fail(SyntaxErrorClass::Unclassified, l.pos,
                  "concept and role mixed across the inclusion");
    RoleIncl ri;
    ri.lhs = {l.name, l.inverted};
    ri.rhs = {{r.name, r.inverted}, r.negated};
    ParseOutcome o;
    o.ok = Statement{Axiom{ri}};
    return o;
  }

  // concept inclusion B ⊑ C
  const Item& l = lhs.items[0];
  if (lhs.items.size() != 1)
    return fail(SyntaxErrorClass::Unclassified, lhs.and_pos,
                "inclusion lhs must be a basic concept");
  if (l.negated)
    return fail(SyntaxErrorClass::Unclassified, l.pos, "negated inclusion lhs");
  ConceptIncl ci;
  ci.lhs = item_to_concept(l);
  // right-nested conjunction
  GeneralConcept acc = rhs.items.back().negated
                           ? GeneralConcept::neg(item_to_concept(rhs.items.back()))
                           : GeneralConcept::pos(item_to_concept(rhs.items.back()));
  for (auto it = rhs.items.rbegin() + 1; it != rhs.items.rend(); ++it) {
    GeneralConcept g = it->negated ? GeneralConcept::neg(item_to_concept(*it))
                                   : GeneralConcept::pos(item_to_concept(*it));
    acc = GeneralConcept::conj(std::move(g), std::move(acc));
  }
  ci.rhs = std::move(acc);
  ParseOutcome o;
  o.ok = Statement{Axiom{ci}};
  return o;
}

ParseOutcome parse_funct(const std::vector<Token>& ts) {
  // ( funct R )
  std::size_t i = 2;
  if (ts[i].kind == Tok::Inv)
    return fail(SyntaxErrorClass::MisplacedInverse, ts[i].pos,
                "inverse operator before its role");
  if (ts[i].kind != Tok::Ident)
    return fail(SyntaxErrorClass::Unclassified, ts[i].pos, "role name expected");
  Role r{ts[i].text, false};
  ++i;
  if (ts[i].kind == Tok::Inv) { r.inverted = true; ++i; }
  if (ts[i].kind != Tok::RParen)
    return fail(SyntaxErrorClass::Unclassified, ts[i].pos, "')' expected");
  ++i;
  if (ts[i].kind != Tok::End)
    return fail(SyntaxErrorClass::Unclassified, ts[i].pos, "trailing input");
  ParseOutcome o;
  o.ok = Statement{Axiom{FunctAxiom{r}}};
  return o;
}

ParseOutcome parse_assertion(const std::vector<Token>& ts, const Signature* ctx) {
  // Name ( ind [, ind] )
  std::string name = ts[0].text;
  std::size_t i = 2;
  std::vector<std::string> args;
  while (true) {
    if (ts[i].kind != Tok::Ident)
      return fail(SyntaxErrorClass::Unclassified, ts[i].pos, "constant expected");
    args.push_back(ts[i].text);
    ++i;
    if (ts[i].kind == Tok::Comma) { ++i; continue; }
    break;
  }
  if (ts[i].kind != Tok::RParen)
    return fail(SyntaxErrorClass::Unclassified, ts[i].pos, "')' expected");
  ++i;
  if (ts[i].kind != Tok::End)
    return fail(SyntaxErrorClass::Unclassified, ts[i].pos, "trailing input");
  if (args.size() == 1) {
    if (type_of(name, ctx) == NameType::RoleName)
      return fail(SyntaxErrorClass::Unclassified, ts[0].pos,
                  "role '" + name + "' asserted with one argument");
    ParseOutcome o;
    o.ok = Statement{Assertion{ConceptAssert{name, args[0]}}};
    return o;
  }
  if (args.size() == 2) {
    if (type_of(name, ctx) == NameType::ConceptName)
      return fail(SyntaxErrorClass::Unclassified, ts[0].pos,
                  "concept '" + name + "' asserted with two arguments");
    ParseOutcome o;
    o.ok = Statement{Assertion{RoleAssert{name, args[0], args[1]}}};
    return o;
  }
  return fail(SyntaxErrorClass::Unclassified, ts[0].pos,
              "assertions take one or two constants");
}

}  // namespace

std::string error_class_name(SyntaxErrorClass c) {
  switch (c) {
    case SyntaxErrorClass::InvalidInverseOnConcept: return "InvalidInverseOnConcept";
    case SyntaxErrorClass::MisplacedInverse: return "MisplacedInverse";
    case SyntaxErrorClass::InverseOnQuantifier: return "InverseOnQuantifier";
    case SyntaxErrorClass::MisplacedQuantifier: return "MisplacedQuantifier";
    case SyntaxErrorClass::QuantifierOnConcept: return "QuantifierOnConcept";
    case SyntaxErrorClass::QuantifierMissingRole: return "QuantifierMissingRole";
    case SyntaxErrorClass::RedundantQuantifiers: return "RedundantQuantifiers";
    case SyntaxErrorClass::MisplacedNegation: return "MisplacedNegation";
    case SyntaxErrorClass::DanglingNegation: return "DanglingNegation";
    case SyntaxErrorClass::IncompleteConjunction: return "IncompleteConjunction";
    case SyntaxErrorClass::ConceptRoleConjunction: return "ConceptRoleConjunction";
    case SyntaxErrorClass::RoleRoleConjunction: return "RoleRoleConjunction";
    case SyntaxErrorClass::MissingConjunctionOperator: return "MissingConjunctionOperator";
    case SyntaxErrorClass::MisplacedConjunctionOperator: return "MisplacedConjunctionOperator";
    case SyntaxErrorClass::Unclassified: return "Unclassified";
  }
  return "?";
}

ParseOutcome parse_axiom(const std::string& line, const Signature* context) {
  std::vector<Token> ts = tokenize(line);
  for (const Token& t : ts)
    if (t.kind == Tok::Bad)
      return fail(SyntaxErrorClass::Unclassified, t.pos,
                  "unrecognized character '" + t.text + "'");
  if (ts[0].kind == Tok::End)
    return fail(SyntaxErrorClass::Unclassified, 0, "empty statement");
  if (ts[0].kind == Tok::LParen) {
    if (ts[1].kind == Tok::Ident && ts[1].text == "funct") return parse_funct(ts);
    return fail(SyntaxErrorClass::Unclassified, ts[0].pos, "expected '(funct R)'");
  }
  if (ts[0].kind == Tok::Ident && ts[1].kind == Tok::LParen)
    return parse_assertion(ts, context);

  std::size_t i = 0;
  Side lhs, rhs;
  if (auto e = scan_side(ts, i, lhs)) return *e;
  if (ts[i].kind != Tok::Subsumes)
    return fail(SyntaxErrorClass::Unclassified, ts[i].pos, "inclusion operator expected");
  ++i;
  if (auto e = scan_side(ts, i, rhs)) return *e;
  if (ts[i].kind != Tok::End)
    return fail(SyntaxErrorClass::Unclassified, ts[i].pos, "trailing input");
  return resolve_inclusion(lhs, rhs, context);
}

OntologyParseResult parse_ontology(const std::string& text, bool strict,
                                   const Signature* seed) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }

  // Pass 1: typing evidence.
  Signature ctx;
  if (seed) ctx.merge(*seed);
  for (const std::string& line : lines) {
    std::vector<Token> ts = tokenize(line);
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      if (ts[i].kind == Tok::Exists && ts[i + 1].kind == Tok::Ident)
        ctx.roles.insert(ts[i + 1].text);
      if (ts[i].kind == Tok::Ident && ts[i + 1].kind == Tok::Inv)
        ctx.roles.insert(ts[i].text);
      if (ts[i].kind == Tok::Ident && ts[i].text == "funct" && ts[i + 1].kind == Tok::Ident)
        ctx.roles.insert(ts[i + 1].text);
    }
    // assertion arity
    if (ts.size() >= 5 && ts[0].kind == Tok::Ident && ts[1].kind == Tok::LParen) {
      std::size_t commas = 0;
      for (const Token& t : ts)
        if (t.kind == Tok::Comma) ++commas;
      if (commas == 1)
        ctx.roles.insert(ts[0].text);
      else if (commas == 0)
        ctx.concepts.insert(ts[0].text);
    }
  }

  OntologyParseResult result;
  std::vector<Axiom> axioms;
  std::vector<Assertion> assertions;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::vector<Token> ts = tokenize(lines[ln]);
    if (ts[0].kind == Tok::End) continue;  // blank or comment
    ParseOutcome out = parse_axiom(lines[ln], &ctx);
    if (out.is_ok()) {
      if (const auto* ax = std::get_if<Axiom>(&*out.ok))
        axioms.push_back(*ax);
      else
        assertions.push_back(std::get<Assertion>(*out.ok));
    } else {
      if (strict)
        throw std::runtime_error("line " + std::to_string(ln + 1) + ": " +
                                 out.err->message + " [" +
                                 error_class_name(out.err->error_class) + "]");
      result.errors.emplace_back(ln + 1, *out.err);
    }
  }
  Ontology o(Ontology::infer_dialect(axioms));
  for (const Axiom& ax : axioms) o.add(ax);
  for (const Assertion& as : assertions) o.add(as);
  result.ontology = std::move(o);
  return result;
}

std::string serialize(const Statement& s, TextMode mode) {
  if (const auto* ax = std::get_if<Axiom>(&s)) return to_text(*ax, mode);
  return to_text(std::get<Assertion>(s), mode);
}

// --------------------------------------------------------------------------
// Corruption.

namespace {

constexpr const char* kExists = "∃";
constexpr const char* kInv = "⁻";
constexpr const char* kNeg = "¬";
constexpr const char* kAnd = "⊓";
constexpr const char* kSub = "⊑";

struct FlatItem {
  bool negated = false;
  Concept cpt;
};

std::vector<FlatItem> flatten(const GeneralConcept& g) {
  switch (g.kind) {
    case GeneralConcept::Kind::Basic: return {{false, g.basic}};
    case GeneralConcept::Kind::Neg: return {{true, g.basic}};
    case GeneralConcept::Kind::Conj: {
      auto l = flatten(*g.left);
      auto r = flatten(*g.right);
      l.insert(l.end(), r.begin(), r.end());
      return l;
    }
  }
  return {};
}

// Concept-inclusion view: item 0 is the lhs, the rest the rhs conjuncts.
struct ConceptView {
  std::vector<FlatItem> items;  // [lhs, rhs...]
  std::size_t lhs_count = 1;
};

std::optional<ConceptView> concept_view(const Axiom& ax) {
  const auto* ci = std::get_if<ConceptIncl>(&ax);
  if (!ci) return std::nullopt;
  ConceptView v;
  v.items.push_back({false, ci->lhs});
  for (FlatItem& it : flatten(ci->rhs)) v.items.push_back(it);
  return v;
}

std::string render_item(const FlatItem& it,
                        const std::function<std::string(const Concept&)>& body) {
  std::string s = body(it.cpt);
  if (it.negated) s = std::string(kNeg) + s;
  return s;
}

std::string plain_concept(const Concept& c) { return to_text(c, TextMode::Unicode); }

// Renders the view with `mutate` applied to the concept at `target`.
std::string render_view(const ConceptView& v, std::size_t target,
                        const std::function<std::string(const Concept&)>& mutate) {
  std::string out;
  for (std::size_t k = 0; k < v.items.size(); ++k) {
    const auto& body = (k == target) ? mutate
                                     : std::function<std::string(const Concept&)>(plain_concept);
    std::string piece = render_item(v.items[k], body);
    if (k == 0)
      out = piece;
    else if (k == 1)
      out += std::string(" ") + kSub + " " + piece;
    else
      out += std::string(" ") + kAnd + " " + piece;
  }
  return out;
}

std::vector<std::size_t> sites(const ConceptView& v,
                               const std::function<bool(const Concept&)>& pred) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < v.items.size(); ++k)
    if (pred(v.items[k].cpt)) out.push_back(k);
  return out;
}

std::optional<std::string> first_atomic_concept(const Axiom& ax) {
  auto v = concept_view(ax);
  if (!v) return std::nullopt;
  for (const FlatItem& it : v->items)
    if (it.cpt.is_atomic()) return it.cpt.name;
  return std::nullopt;
}

std::vector<std::string> role_names(const Axiom& ax) {
  std::vector<std::string> out;
  for (const std::string& r : signature_of(ax).roles) out.push_back(r);
  return out;
}

bool is_inclusion(const Axiom& ax) { return !std::holds_alternative<FunctAxiom>(ax); }

std::optional<std::string> apply_corruption(const Axiom& ax, SyntaxErrorClass cls, Rng& rng) {
  const std::string text = to_text(ax, TextMode::Unicode);
  auto view = concept_view(ax);
  const auto* ri = std::get_if<RoleIncl>(&ax);
  const auto* fu = std::get_if<FunctAxiom>(&ax);

  auto pick_site = [&](const std::vector<std::size_t>& ss) -> std::optional<std::size_t> {
    if (ss.empty()) return std::nullopt;
    return ss[static_cast<std::size_t>(rng.below(ss.size()))];
  };

  switch (cls) {
    case SyntaxErrorClass::InvalidInverseOnConcept: {
      if (!view) return std::nullopt;
      auto s = pick_site(sites(*view, [](const Concept& c) { return c.is_atomic(); }));
      if (!s) return std::nullopt;
      return render_view(*view, *s,
                         [](const Concept& c) { return c.name + kInv; });
    }
    case SyntaxErrorClass::MisplacedInverse: {
      if (fu) return "(funct " + std::string(kInv) + fu->role.name + ")";
      if (ri) {
        // prefix the lhs role
        std::string rhs = to_text(ri->rhs.role, TextMode::Unicode);
        if (ri->rhs.negated) rhs = std::string(kNeg) + rhs;
        return std::string(kInv) + ri->lhs.name + " " + kSub + " " + rhs;
      }
      auto s = pick_site(sites(*view, [](const Concept& c) { return c.is_exists(); }));
      if (!s) return std::nullopt;
      return render_view(*view, *s, [](const Concept& c) {
        return std::string(kInv) + c.role.name;  // drops the ∃ and any ⁻ suffix
      });
    }
    case SyntaxErrorClass::InverseOnQuantifier: {
      if (!view) return std::nullopt;
      auto s = pick_site(sites(*view, [](const Concept& c) { return c.is_exists(); }));
      if (!s) return std::nullopt;
      return render_view(*view, *s, [](const Concept& c) {
        return std::string(kExists) + kInv + to_text(c.role, TextMode::Unicode);
      });
    }
    case SyntaxErrorClass::MisplacedQuantifier: {
      if (!view) return std::nullopt;
      auto s = pick_site(sites(*view, [](const Concept& c) { return c.is_exists(); }));
      if (!s) return std::nullopt;
      return render_view(*view, *s, [](const Concept& c) {
        return to_text(c.role, TextMode::Unicode) + kExists;
      });
    }
    case SyntaxErrorClass::QuantifierOnConcept: {
      if (!view) return std::nullopt;
      auto s = pick_site(sites(*view, [](const Concept& c) { return c.is_atomic(); }));
      if (!s) return std::nullopt;
      return render_view(*view, *s,
                         [](const Concept& c) { return std::string(kExists) + c.name; });
    }
    case SyntaxErrorClass::QuantifierMissingRole: {
      if (!view) return std::nullopt;
      auto s = pick_site(sites(*view, [](const Concept& c) { return c.is_exists(); }));
      if (!s) return std::nullopt;
      return render_view(*view, *s, [](const Concept&) { return std::string(kExists); });
    }
    case SyntaxErrorClass::RedundantQuantifiers: {
      if (!view) return std::nullopt;
      auto s = pick_site(sites(*view, [](const Concept& c) { return c.is_exists(); }));
      if (!s) return std::nullopt;
      return render_view(*view, *s, [](const Concept& c) {
        return std::string(kExists) + kExists + to_text(c.role, TextMode::Unicode);
      });
    }
    case SyntaxErrorClass::MisplacedNegation: {
      if (!is_inclusion(ax)) return std::nullopt;
      if (ri) {
        std::string rhs = to_text(ri->rhs.role, TextMode::Unicode);
        if (ri->rhs.negated) rhs = std::string(kNeg) + rhs;
        return to_text(ri->lhs, TextMode::Unicode) + " " + kSub + " " + rhs + kNeg;
      }
      auto s = pick_site(sites(*view, [](const Concept&) { return true; }));
      return render_view(*view, *s,
                         [](const Concept& c) { return to_text(c, TextMode::Unicode) + kNeg; });
    }
    case SyntaxErrorClass::DanglingNegation: {
      if (!is_inclusion(ax)) return std::nullopt;
      std::size_t cut = text.rfind(kSub);
      if (cut == std::string::npos) return std::nullopt;
      return text.substr(0, cut) + kSub + " " + kNeg;
    }
    case SyntaxErrorClass::IncompleteConjunction: {
      if (!is_inclusion(ax)) return std::nullopt;
      return text + " " + kAnd;
    }
    case SyntaxErrorClass::ConceptRoleConjunction: {
      if (!view) return std::nullopt;
      auto cname = first_atomic_concept(ax);
      auto s = pick_site(sites(*view, [](const Concept& c) { return c.is_exists(); }));
      if (!cname || !s) return std::nullopt;
      return render_view(*view, *s, [&](const Concept& c) {
        return *cname + " " + kAnd + " " + c.role.name;
      });
    }
    case SyntaxErrorClass::RoleRoleConjunction: {
      if (ri) {
        std::string rhs = to_text(ri->rhs.role, TextMode::Unicode);
        if (ri->rhs.negated) rhs = std::string(kNeg) + rhs;
        return to_text(ri->lhs, TextMode::Unicode) + " " + kSub + " " + rhs + " " + kAnd +
               " " + ri->lhs.name;
      }
      if (!view) return std::nullopt;
      std::vector<std::string> roles = role_names(ax);
      if (roles.empty()) return std::nullopt;
      const std::string& r1 = roles[0];
      const std::string& r2 = roles.size() > 1 ? roles[1] : roles[0];
      std::size_t sub = text.find(kSub);
      return text.substr(0, sub) + kSub + " " + r1 + " " + kAnd + " " + r2;
    }
    case SyntaxErrorClass::MissingConjunctionOperator: {
      if (!view) return std::nullopt;
      if (view->items.size() > 2) {
        // drop the first rhs conjunction operator
        std::string withsep = std::string(" ") + kAnd + " ";
        std::size_t p = text.find(withsep, text.find(kSub));
        if (p != std::string::npos)
          return text.substr(0, p) + " " + text.substr(p + withsep.size());
      }
      auto cname = first_atomic_concept(ax);
      auto s = pick_site(sites(*view, [](const Concept& c) { return c.is_exists(); }));
      if (!cname || !s) return std::nullopt;
      return render_view(*view, *s, [&](const Concept& c) {
        return *cname + " " + to_text(c, TextMode::Unicode);
      });
    }
    case SyntaxErrorClass::MisplacedConjunctionOperator: {
      if (!view || view->items.size() < 3) return std::nullopt;
      // move the first ⊓ of the conjunction side to the front of that side
      std::string withsep = std::string(" ") + kAnd + " ";
      std::size_t sub = text.find(kSub);
      std::string lhs = text.substr(0, sub);     // keeps its trailing space
      std::string rhs = text.substr(sub + 4);    // skips "⊑ "
      std::size_t q = rhs.find(withsep);
      if (q == std::string::npos) return std::nullopt;
      rhs = rhs.substr(0, q) + " " + rhs.substr(q + withsep.size());
      return lhs + kSub + " " + kAnd + " " + rhs;
    }
    case SyntaxErrorClass::Unclassified:
      return std::nullopt;
  }
  return std::nullopt;
}

const std::vector<SyntaxErrorClass> kAllClasses = {
    SyntaxErrorClass::InvalidInverseOnConcept,
    SyntaxErrorClass::MisplacedInverse,
    SyntaxErrorClass::InverseOnQuantifier,
    SyntaxErrorClass::MisplacedQuantifier,
    SyntaxErrorClass::QuantifierOnConcept,
    SyntaxErrorClass::QuantifierMissingRole,
    SyntaxErrorClass::RedundantQuantifiers,
    SyntaxErrorClass::MisplacedNegation,
    SyntaxErrorClass::DanglingNegation,
    SyntaxErrorClass::IncompleteConjunction,
    SyntaxErrorClass::ConceptRoleConjunction,
    SyntaxErrorClass::RoleRoleConjunction,
    SyntaxErrorClass::MissingConjunctionOperator,
    SyntaxErrorClass::MisplacedConjunctionOperator,
};

}  // namespace

std::vector<SyntaxErrorClass> applicable_corruptions(const Axiom& axiom) {
  std::vector<SyntaxErrorClass> out;
  for (SyntaxErrorClass cls : kAllClasses) {
    Rng probe(0);
    if (apply_corruption(axiom, cls, probe)) out.push_back(cls);
  }
  return out;
}

std::optional<CorruptionResult> corrupt(const Axiom& axiom, SyntaxErrorClass cls,
                                        std::uint64_t seed) {
  Rng rng(seed);
  auto text = apply_corruption(axiom, cls, rng);
  if (!text) return std::nullopt;
  return CorruptionResult{*text, cls};
}

std::optional<CorruptionResult> corrupt_random(const Axiom& axiom, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SyntaxErrorClass> apps = applicable_corruptions(axiom);
  if (apps.empty()) return std::nullopt;
  SyntaxErrorClass cls = apps[static_cast<std::size_t>(rng.below(apps.size()))];
  Rng sub = rng.split();
  auto text = apply_corruption(axiom, cls, sub);
  if (!text) return std::nullopt;
  return CorruptionResult{*text, cls};
}

}  // namespace dlite
