#include "dlite/reasoner.hpp"

#include <algorithm>
#include <cctype>

namespace dlite {

namespace {

bool same(const Concept& a, const Concept& b) {
  if (a.kind != b.kind) return false;
  if (a.is_atomic()) return a.name == b.name;
  return a.role == b.role;
}

Axiom cpos_ax(const Concept& l, const Concept& r) {
  return ConceptIncl{l, GeneralConcept::pos(r)};
}
Axiom cneg_ax(const Concept& l, const Concept& r) {
  return ConceptIncl{l, GeneralConcept::neg(r)};
}
Axiom rpos_ax(const Role& l, const Role& r) { return RoleIncl{l, {r, false}}; }
Axiom rneg_ax(const Role& l, const Role& r) { return RoleIncl{l, {r, true}}; }

// Typed view of the growing closure; ClosureSet holds the canonical members.
struct Closure {
  ClosureSet set;
  std::vector<std::pair<Concept, Concept>> cpos, cneg;
  std::vector<std::pair<Role, Role>> rpos, rneg;

  // arguments are taken by value: callers pass references into the very
  // vectors these methods grow, and a reallocation would dangle them
  bool add_cpos(Concept l, Concept r, Derivation d) {
    if (!set.insert(cpos_ax(l, r), std::move(d))) return false;
    cpos.emplace_back(std::move(l), std::move(r));
    return true;
  }
  bool add_cneg(Concept l, Concept r, Derivation d) {
    if (!set.insert(cneg_ax(l, r), std::move(d))) return false;
    cneg.emplace_back(std::move(l), std::move(r));
    return true;
  }
  bool add_rpos(Role l, Role r, Derivation d) {
    if (!set.insert(rpos_ax(l, r), std::move(d))) return false;
    rpos.emplace_back(std::move(l), std::move(r));
    return true;
  }
  bool add_rneg(Role l, Role r, Derivation d) {
    if (!set.insert(rneg_ax(l, r), std::move(d))) return false;
    rneg.emplace_back(std::move(l), std::move(r));
    return true;
  }
};

// NI9/NI10/NI11: R⊑¬R, ∃R⊑¬∃R and ∃R⁻⊑¬∃R⁻ are interderivable.
bool emit_equivalence_group(Closure& c, Role witness, const std::string& rule,
                            const Axiom& premise) {
  Role base = witness.inverted ? witness.inverse() : witness;
  Concept er = Concept::exists(base);
  Concept eri = Concept::exists(base.inverse());
  bool ch = false;
  ch |= c.add_rneg(base, base, {rule, {premise}});
  ch |= c.add_cneg(er, er, {rule, {premise}});
  ch |= c.add_cneg(eri, eri, {rule, {premise}});
  return ch;
}

Closure compute_closure(const Ontology& o) {
  Closure c;
  std::vector<Axiom> tbox = normalize(o.tbox());

  // asserted inclusions
  for (const Axiom& ax : tbox) {
    if (const auto* ci = std::get_if<ConceptIncl>(&ax)) {
      const Concept& r = ci->rhs.basic;
      if (ci->rhs.kind == GeneralConcept::Kind::Basic)
        c.add_cpos(ci->lhs, r, {"input", {}});
      else
        c.add_cneg(ci->lhs, r, {"input", {}});
    } else if (const auto* ri = std::get_if<RoleIncl>(&ax)) {
      if (ri->rhs.negated)
        c.add_rneg(ri->lhs, ri->rhs.role, {"input", {}});
      else
        c.add_rpos(ri->lhs, ri->rhs.role, {"input", {}});
    }
  }

  // reflexive seeds over the signature
  Signature sig = signature_of(o);
  for (const std::string& a : sig.concepts) {
    Concept A = Concept::atomic(a);
    c.add_cpos(A, A, {"refl", {}});
  }
  for (const std::string& p : sig.roles) {
    Role P{p, false};
    c.add_rpos(P, P, {"refl", {}});
    c.add_rpos(P.inverse(), P.inverse(), {"refl", {}});
    c.add_cpos(Concept::exists(P), Concept::exists(P), {"refl", {}});
    c.add_cpos(Concept::exists(P.inverse()), Concept::exists(P.inverse()), {"refl", {}});
  }

  bool changed = true;
  while (changed) {
    changed = false;
    // PI1: C₁⊑C₂, C₂⊑C₃ → C₁⊑C₃
    for (std::size_t i = 0; i < c.cpos.size(); ++i)
      for (std::size_t j = 0; j < c.cpos.size(); ++j)
        if (same(c.cpos[i].second, c.cpos[j].first))
          changed |= c.add_cpos(
              c.cpos[i].first, c.cpos[j].second,
              {"PI1", {cpos_ax(c.cpos[i].first, c.cpos[i].second),
                       cpos_ax(c.cpos[j].first, c.cpos[j].second)}});
    // PI2: R₁⊑R₂, R₂⊑R₃ → R₁⊑R₃
    for (std::size_t i = 0; i < c.rpos.size(); ++i)
      for (std::size_t j = 0; j < c.rpos.size(); ++j)
        if (c.rpos[i].second == c.rpos[j].first)
          changed |= c.add_rpos(
              c.rpos[i].first, c.rpos[j].second,
              {"PI2", {rpos_ax(c.rpos[i].first, c.rpos[i].second),
                       rpos_ax(c.rpos[j].first, c.rpos[j].second)}});
    // NI1/NI2 with a non-reflexive concept PI as α
    for (std::size_t i = 0; i < c.cpos.size(); ++i) {
      const auto [a, b] = c.cpos[i];
      if (same(a, b)) continue;
      Axiom alpha = cpos_ax(a, b);
      for (std::size_t j = 0; j < c.cneg.size(); ++j) {
        const auto [x, y] = c.cneg[j];
        Axiom beta = cneg_ax(x, y);
        if (same(x, b)) changed |= c.add_cneg(a, y, {"NI1", {alpha, beta}});
        if (same(y, b)) changed |= c.add_cneg(a, x, {"NI2", {alpha, beta}});
      }
    }
    // NI3..NI8 with a non-reflexive role PI as α
    for (std::size_t i = 0; i < c.rpos.size(); ++i) {
      const auto [r1, r2] = c.rpos[i];
      if (r1 == r2) continue;
      Axiom alpha = rpos_ax(r1, r2);
      for (std::size_t j = 0; j < c.cneg.size(); ++j) {
        const auto [x, y] = c.cneg[j];
        Axiom beta = cneg_ax(x, y);
        if (x.is_exists() && x.role == r2)
          changed |= c.add_cneg(Concept::exists(r1), y, {"NI3", {alpha, beta}});
        if (y.is_exists() && y.role == r2)
          changed |= c.add_cneg(Concept::exists(r1), x, {"NI4", {alpha, beta}});
        if (y.is_exists() && y.role == r2.inverse())
          changed |= c.add_cneg(Concept::exists(r1.inverse()), x, {"NI5", {alpha, beta}});
        if (x.is_exists() && x.role == r2.inverse())
          changed |= c.add_cneg(Concept::exists(r1.inverse()), y, {"NI6", {alpha, beta}});
      }
      for (std::size_t j = 0; j < c.rneg.size(); ++j) {
        const auto [x, y] = c.rneg[j];
        Axiom beta = rneg_ax(x, y);
        if (x == r2) changed |= c.add_rneg(r1, y, {"NI7", {alpha, beta}});
        if (y == r2) changed |= c.add_rneg(r1, x, {"NI8", {alpha, beta}});
      }
    }
    // NI9: R⊑¬R → the equivalence group
    for (std::size_t i = 0; i < c.rneg.size(); ++i)
      if (c.rneg[i].first == c.rneg[i].second)
        changed |= emit_equivalence_group(c, c.rneg[i].first, "NI9",
                                          rneg_ax(c.rneg[i].first, c.rneg[i].second));
    // NI10/NI11: ∃R⊑¬∃R (resp. ∃R⁻⊑¬∃R⁻) → the equivalence group
    for (std::size_t i = 0; i < c.cneg.size(); ++i) {
      const auto [x, y] = c.cneg[i];
      if (x.is_exists() && same(x, y))
        changed |= emit_equivalence_group(c, x.role, x.role.inverted ? "NI11" : "NI10",
                                          cneg_ax(x, y));
    }
  }
  return c;
}

bool is_negative(const Axiom& ax) {
  if (const auto* ci = std::get_if<ConceptIncl>(&ax))
    return ci->rhs.kind == GeneralConcept::Kind::Neg;
  if (const auto* ri = std::get_if<RoleIncl>(&ax)) return ri->rhs.negated;
  return false;
}

}  // namespace

bool ClosureSet::insert(const Axiom& ax, Derivation d) {
  std::string key = text_key(ax);
  if (derivs_.count(key)) return false;
  derivs_.emplace(std::move(key), std::move(d));
  axioms_.push_back(ax);
  return true;
}

bool ClosureSet::contains(const Axiom& ax) const {
  return derivs_.count(text_key(ax)) > 0;
}

const Derivation* ClosureSet::derivation_of(const Axiom& ax) const {
  auto it = derivs_.find(text_key(ax));
  return it == derivs_.end() ? nullptr : &it->second;
}

ClosureSet tbox_closure(const Ontology& o) { return compute_closure(o).set; }

ClosureSet pi_closure(const Ontology& o) {
  Closure c = compute_closure(o);
  ClosureSet out;
  for (const Axiom& ax : c.set.axioms())
    if (!is_negative(ax)) out.insert(ax, *c.set.derivation_of(ax));
  return out;
}

ClosureSet ni_closure(const Ontology& o) {
  Closure c = compute_closure(o);
  ClosureSet out;
  for (const Axiom& ax : c.set.axioms())
    if (is_negative(ax)) out.insert(ax, *c.set.derivation_of(ax));
  return out;
}

nlohmann::json derivation_chain(const ClosureSet& cs, const Axiom& ax) {
  nlohmann::json steps = nlohmann::json::array();
  std::set<std::string> seen;
  // post-order walk: premises before conclusions
  std::function<void(const Axiom&)> walk = [&](const Axiom& a) {
    std::string key = text_key(a);
    if (!seen.insert(key).second) return;
    const Derivation* d = cs.derivation_of(a);
    nlohmann::json step;
    step["conclusion"] = to_text(a, TextMode::Unicode);
    if (d) {
      for (const Axiom& p : d->premises) walk(p);
      step["rule"] = d->rule;
      nlohmann::json prem = nlohmann::json::array();
      if (d)
        for (const Axiom& p : d->premises) prem.push_back(to_text(p, TextMode::Unicode));
      step["premises"] = prem;
    } else {
      step["rule"] = "input";
      step["premises"] = nlohmann::json::array();
    }
    steps.push_back(step);
  };
  walk(ax);
  return steps;
}

nlohmann::json derivations_json(const ClosureSet& cs) {
  nlohmann::json out = nlohmann::json::array();
  for (const Axiom& ax : cs.axioms()) {
    const Derivation* d = cs.derivation_of(ax);
    nlohmann::json e;
    e["conclusion"] = to_text(ax, TextMode::Unicode);
    e["rule"] = d->rule;
    nlohmann::json prem = nlohmann::json::array();
    for (const Axiom& p : d->premises) prem.push_back(to_text(p, TextMode::Unicode));
    e["premises"] = prem;
    out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chase.

bool ChasedAbox::has_concept(const std::string& c, const std::string& e) const {
  return concept_facts.count({c, e}) > 0;
}

bool ChasedAbox::has_edge(const Role& r, const std::string& a, const std::string& b) const {
  if (r.inverted) return role_facts.count({r.name, b, a}) > 0;
  return role_facts.count({r.name, a, b}) > 0;
}

std::vector<std::string> ChasedAbox::successors(const Role& r, const std::string& a) const {
  std::vector<std::string> out;
  for (const auto& [name, s, o] : role_facts) {
    if (name != r.name) continue;
    if (!r.inverted && s == a) out.push_back(o);
    if (r.inverted && o == a) out.push_back(s);
  }
  return out;
}

bool ChasedAbox::holds(const Concept& b, const std::string& e) const {
  if (b.is_atomic()) return has_concept(b.name, e);
  return !successors(b.role, e).empty();
}

std::vector<std::string> ChasedAbox::elements() const {
  std::vector<std::string> out;
  for (const auto& [e, g] : generation) out.push_back(e);
  return out;
}

std::vector<Assertion> ChasedAbox::facts() const {
  std::vector<Assertion> out;
  for (const auto& [c, e] : concept_facts) out.push_back(ConceptAssert{c, e});
  for (const auto& [r, s, o] : role_facts) out.push_back(RoleAssert{r, s, o});
  return out;
}

ChasedAbox chase(const Ontology& o, int max_fresh_depth) {
  ChasedAbox ch;
  ch.depth = max_fresh_depth;
  Signature sig = signature_of(o);
  for (const std::string& ind : sig.individuals) ch.generation[ind] = 0;

  auto fact_key = [](const Assertion& a) { return to_text(a, TextMode::Ascii); };

  auto add_concept = [&](const std::string& c, const std::string& e,
                         FactProvenance prov) -> bool {
    if (!ch.concept_facts.insert({c, e}).second) return false;
    ch.provenance.emplace(fact_key(ConceptAssert{c, e}), std::move(prov));
    return true;
  };
  auto add_edge = [&](const Role& r, const std::string& a, const std::string& b,
                      FactProvenance prov) -> bool {
    std::string s = r.inverted ? b : a, t = r.inverted ? a : b;
    if (!ch.role_facts.insert({r.name, s, t}).second) return false;
    ch.provenance.emplace(fact_key(RoleAssert{r.name, s, t}), std::move(prov));
    return true;
  };

  for (const Assertion& as : o.abox()) {
    if (const auto* ca = std::get_if<ConceptAssert>(&as))
      add_concept(ca->concept_name, ca->individual, {"input", std::nullopt, {}});
    else {
      const auto& ra = std::get<RoleAssert>(as);
      add_edge({ra.role_name, false}, ra.subject, ra.object, {"input", std::nullopt, {}});
    }
  }

  std::vector<Axiom> tbox = normalize(o.tbox());
  std::map<std::pair<std::string, std::string>, std::string> memo;  // (elem, role text)
  int wcount = 0;
  auto fresh_name = [&]() {
    std::string w;
    do {
      w = "_w" + std::to_string(++wcount);
    } while (sig.individuals.count(w));
    return w;
  };

  // witnesses of holds(l, e): the concrete fact keys backing it
  auto support = [&](const Concept& l, const std::string& e) -> std::vector<std::string> {
    if (l.is_atomic()) return {fact_key(ConceptAssert{l.name, e})};
    auto succ = ch.successors(l.role, e);
    std::string s = l.role.inverted ? succ.front() : e;
    std::string t = l.role.inverted ? e : succ.front();
    return {fact_key(RoleAssert{l.role.name, s, t})};
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (const Axiom& ax : tbox) {
      if (const auto* ci = std::get_if<ConceptIncl>(&ax)) {
        if (ci->rhs.kind != GeneralConcept::Kind::Basic) continue;
        const Concept& l = ci->lhs;
        const Concept& r = ci->rhs.basic;
        // snapshot: elements currently satisfying the lhs
        std::vector<std::string> holders;
        for (const auto& [e, g] : ch.generation)
          if (ch.holds(l, e)) holders.push_back(e);
        for (const std::string& e : holders) {
          if (r.is_atomic()) {
            changed |= add_concept(
                r.name, e, {l.is_atomic() ? "ABX1" : "ABX3", ax, support(l, e)});
          } else {
            if (ch.holds(r, e)) continue;  // restricted chase: already satisfied
            if (ch.generation[e] >= max_fresh_depth) continue;
            auto mkey = std::make_pair(e, to_text(r.role, TextMode::Ascii));
            auto it = memo.find(mkey);
            std::string w = (it != memo.end()) ? it->second : fresh_name();
            memo[mkey] = w;
            if (!ch.generation.count(w)) {
              ch.generation[w] = ch.generation[e] + 1;
              ch.fresh.insert(w);
            }
            changed |= add_edge(r.role, e, w,
                                {l.is_atomic() ? "ABX2" : "ABX4", ax, support(l, e)});
          }
        }
      } else if (const auto* ri = std::get_if<RoleIncl>(&ax)) {
        if (ri->rhs.negated) continue;
        std::vector<std::pair<std::string, std::string>> pairs;
        for (const auto& [name, s, t] : ch.role_facts) {
          if (name != ri->lhs.name) continue;
          if (ri->lhs.inverted)
            pairs.emplace_back(t, s);
          else
            pairs.emplace_back(s, t);
        }
        for (const auto& [a, b] : pairs) {
          std::string s = ri->lhs.inverted ? b : a, t = ri->lhs.inverted ? a : b;
          changed |= add_edge(ri->rhs.role, a, b,
                              {"ABX5", ax, {fact_key(RoleAssert{ri->lhs.name, s, t})}});
        }
      }
    }
  }
  return ch;
}

// ---------------------------------------------------------------------------
// Services.

std::string to_text(const Implication& imp, TextMode mode) {
  if (const auto* ax = std::get_if<Axiom>(&imp)) return to_text(*ax, mode);
  if (const auto* as = std::get_if<Assertion>(&imp)) return to_text(*as, mode);
  if (const auto* ef = std::get_if<ExistsFiller>(&imp)) {
    if (ef->role.inverted) return ef->role.name + "(_, " + ef->individual + ")";
    return ef->role.name + "(" + ef->individual + ", _)";
  }
  const auto& pe = std::get<PlaceholderEq>(imp);
  return pe.placeholder + " ≡ " + pe.named;
}

namespace {

// offending facts realizing holds(b, e)
std::vector<Assertion> holds_witness(const ChasedAbox& ch, const Concept& b,
                                     const std::string& e) {
  if (b.is_atomic()) return {ConceptAssert{b.name, e}};
  auto succ = ch.successors(b.role, e);
  std::string s = b.role.inverted ? succ.front() : e;
  std::string t = b.role.inverted ? e : succ.front();
  return {RoleAssert{b.role.name, s, t}};
}

std::set<std::string> functional_roles_keys(const Ontology& o) {
  std::set<std::string> out;
  for (const Axiom& ax : o.tbox())
    if (const auto* f = std::get_if<FunctAxiom>(&ax))
      out.insert(to_text(f->role, TextMode::Ascii));
  return out;
}

}  // namespace

SatResult is_satisfiable(const Ontology& o) {
  // DL-Lite_FR restriction: a functional role may not be specialized.
  std::set<std::string> functs = functional_roles_keys(o);
  if (!functs.empty()) {
    for (const Axiom& ax : o.tbox()) {
      const auto* ri = std::get_if<RoleIncl>(&ax);
      if (!ri || ri->rhs.negated) continue;
      if (functs.count(to_text(ri->rhs.role, TextMode::Ascii)) ||
          functs.count(to_text(ri->rhs.role.inverse(), TextMode::Ascii))) {
        SatResult r;
        r.status = SatResult::Status::DialectRejected;
        r.note = "functional role on the right-hand side of a role inclusion: " +
                 to_text(ax, TextMode::Unicode);
        return r;
      }
    }
  }

  ClosureSet ni = ni_closure(o);
  ChasedAbox ch = chase(o, 1);

  for (const Axiom& ax : ni.axioms()) {
    if (const auto* ci = std::get_if<ConceptIncl>(&ax)) {
      const Concept& l = ci->lhs;
      const Concept& r = ci->rhs.basic;
      for (const auto& [e, g] : ch.generation) {
        if (ch.holds(l, e) && ch.holds(r, e)) {
          SatResult res;
          res.status = SatResult::Status::Unsatisfiable;
          Violation v{ax, holds_witness(ch, l, e)};
          for (Assertion& w : holds_witness(ch, r, e)) v.offending.push_back(w);
          res.violation = std::move(v);
          return res;
        }
      }
    } else if (const auto* ri = std::get_if<RoleIncl>(&ax)) {
      for (const auto& [name, s, t] : ch.role_facts) {
        if (name != ri->lhs.name) continue;
        std::string a = ri->lhs.inverted ? t : s, b = ri->lhs.inverted ? s : t;
        if (ch.has_edge(ri->rhs.role, a, b)) {
          SatResult res;
          res.status = SatResult::Status::Unsatisfiable;
          std::string s2 = ri->rhs.role.inverted ? b : a, t2 = ri->rhs.role.inverted ? a : b;
          res.violation = Violation{
              ax, {RoleAssert{name, s, t}, RoleAssert{ri->rhs.role.name, s2, t2}}};
          return res;
        }
      }
    }
  }

  // functionality under the unique-name assumption for named individuals
  for (const Axiom& ax : o.tbox()) {
    const auto* f = std::get_if<FunctAxiom>(&ax);
    if (!f) continue;
    std::map<std::string, std::vector<std::string>> by_subject;
    for (const std::string& e : ch.elements())
      for (const std::string& s : ch.successors(f->role, e))
        if (ch.is_named(s)) by_subject[e].push_back(s);
    for (auto& [a, objs] : by_subject) {
      std::sort(objs.begin(), objs.end());
      objs.erase(std::unique(objs.begin(), objs.end()), objs.end());
      if (objs.size() >= 2) {
        SatResult res;
        res.status = SatResult::Status::Unsatisfiable;
        auto edge = [&](const std::string& b) -> Assertion {
          if (f->role.inverted) return RoleAssert{f->role.name, b, a};
          return RoleAssert{f->role.name, a, b};
        };
        res.violation = Violation{ax, {edge(objs[0]), edge(objs[1])}};
        return res;
      }
    }
  }
  return {};
}

namespace {

// membership in the closure modulo NI symmetry (B₁⊑¬B₂ ⟺ B₂⊑¬B₁) and role
// inverse congruence (R₁⊑R₂ ⟺ R₁⁻⊑R₂⁻)
std::optional<Axiom> closure_variant(const ClosureSet& cs, const Axiom& target) {
  std::vector<Axiom> variants{target};
  if (const auto* ci = std::get_if<ConceptIncl>(&target)) {
    if (ci->rhs.kind == GeneralConcept::Kind::Neg)
      variants.push_back(cneg_ax(ci->rhs.basic, ci->lhs));
  } else if (const auto* ri = std::get_if<RoleIncl>(&target)) {
    Role l = ri->lhs, r = ri->rhs.role;
    if (ri->rhs.negated) {
      variants.push_back(rneg_ax(r, l));
      variants.push_back(rneg_ax(l.inverse(), r.inverse()));
      variants.push_back(rneg_ax(r.inverse(), l.inverse()));
    } else {
      variants.push_back(rpos_ax(l.inverse(), r.inverse()));
    }
  }
  for (const Axiom& v : variants)
    if (cs.contains(v)) return v;
  return std::nullopt;
}

bool lhs_unsatisfiable(const ClosureSet& cs, const Axiom& target) {
  if (const auto* ci = std::get_if<ConceptIncl>(&target))
    return cs.contains(cneg_ax(ci->lhs, ci->lhs));
  if (const auto* ri = std::get_if<RoleIncl>(&target))
    return cs.contains(rneg_ax(ri->lhs, ri->lhs)) ||
           cs.contains(rneg_ax(ri->lhs.inverse(), ri->lhs.inverse()));
  return false;
}

bool is_reflexive(const Axiom& ax) {
  if (const auto* ci = std::get_if<ConceptIncl>(&ax))
    return ci->rhs.kind == GeneralConcept::Kind::Basic && same(ci->lhs, ci->rhs.basic);
  if (const auto* ri = std::get_if<RoleIncl>(&ax))
    return !ri->rhs.negated && ri->lhs == ri->rhs.role;
  return false;
}

}  // namespace

EntailResult entails_inclusion(const Ontology& o, const Axiom& target) {
  if (std::holds_alternative<FunctAxiom>(target)) {
    EntailResult r;
    r.entailed = entails_functionality(o, std::get<FunctAxiom>(target).role);
    return r;
  }
  std::vector<Axiom> parts = normalize({target});
  ClosureSet cs = tbox_closure(o);
  EntailResult result;
  result.entailed = true;
  result.derivation = nlohmann::json::array();
  for (const Axiom& part : parts) {
    if (is_reflexive(part)) {
      result.derivation.push_back(
          {{"conclusion", to_text(part, TextMode::Unicode)}, {"rule", "refl"},
           {"premises", nlohmann::json::array()}});
      continue;
    }
    if (auto v = closure_variant(cs, part)) {
      for (auto& step : derivation_chain(cs, *v)) result.derivation.push_back(step);
      continue;
    }
    if (lhs_unsatisfiable(cs, part)) {
      result.derivation.push_back(
          {{"conclusion", to_text(part, TextMode::Unicode)},
           {"rule", "empty-lhs"},
           {"premises", nlohmann::json::array()}});
      continue;
    }
    result.entailed = false;
    result.derivation = nlohmann::json::array();
    break;
  }
  return result;
}

bool entails_functionality(const Ontology& o, const Role& r) {
  if (functional_roles_keys(o).count(to_text(r, TextMode::Ascii))) return true;
  ClosureSet cs = tbox_closure(o);
  Role base = r.inverted ? r.inverse() : r;
  return cs.contains(rneg_ax(base, base)) ||
         cs.contains(cneg_ax(Concept::exists(base), Concept::exists(base))) ||
         cs.contains(cneg_ax(Concept::exists(base.inverse()),
                             Concept::exists(base.inverse())));
}

namespace {

nlohmann::json fact_chain(const ChasedAbox& ch, const std::string& key) {
  nlohmann::json steps = nlohmann::json::array();
  std::set<std::string> seen;
  std::function<void(const std::string&)> walk = [&](const std::string& k) {
    if (!seen.insert(k).second) return;
    auto it = ch.provenance.find(k);
    nlohmann::json step;
    step["conclusion"] = k;
    if (it != ch.provenance.end()) {
      for (const std::string& p : it->second.premises) walk(p);
      step["rule"] = it->second.rule;
      if (it->second.axiom)
        step["axiom"] = to_text(*it->second.axiom, TextMode::Unicode);
      step["premises"] = it->second.premises;
    } else {
      step["rule"] = "input";
      step["premises"] = nlohmann::json::array();
    }
    steps.push_back(step);
  };
  walk(key);
  return steps;
}

}  // namespace

EntailResult entails_assertion(const Ontology& o, const Implication& target,
                               int chase_depth) {
  SatResult sat = is_satisfiable(o);
  if (sat.status == SatResult::Status::Unsatisfiable) {
    EntailResult r;
    r.entailed = true;
    r.ontology_unsatisfiable = true;
    return r;
  }
  if (const auto* ax = std::get_if<Axiom>(&target)) return entails_inclusion(o, *ax);

  ChasedAbox ch = chase(o, chase_depth);
  EntailResult r;
  if (const auto* as = std::get_if<Assertion>(&target)) {
    if (const auto* ca = std::get_if<ConceptAssert>(as)) {
      r.entailed = ch.has_concept(ca->concept_name, ca->individual);
    } else {
      const auto& ra = std::get<RoleAssert>(*as);
      r.entailed = ch.has_edge({ra.role_name, false}, ra.subject, ra.object);
    }
    if (r.entailed) r.derivation = fact_chain(ch, to_text(*as, TextMode::Ascii));
    return r;
  }
  if (const auto* ef = std::get_if<ExistsFiller>(&target)) {
    auto succ = ch.successors(ef->role, ef->individual);
    r.entailed = !succ.empty();
    if (r.entailed) {
      std::string s = ef->role.inverted ? succ.front() : ef->individual;
      std::string t = ef->role.inverted ? ef->individual : succ.front();
      r.derivation =
          fact_chain(ch, to_text(Assertion{RoleAssert{ef->role.name, s, t}}, TextMode::Ascii));
    }
    return r;
  }
  const auto& pe = std::get<PlaceholderEq>(target);
  if (!entails_functionality(o, pe.via)) return r;
  for (const std::string& e : ch.elements()) {
    auto succ = ch.successors(pe.via, e);
    bool has_p = std::count(succ.begin(), succ.end(), pe.placeholder) > 0;
    bool has_n = std::count(succ.begin(), succ.end(), pe.named) > 0;
    if (has_p && has_n) {
      r.entailed = true;
      r.derivation = nlohmann::json::array(
          {{{"conclusion", to_text(target)}, {"rule", "funct"},
            {"premises", nlohmann::json::array(
                             {to_text(pe.via, TextMode::Unicode) + " on " + e})}}});
      return r;
    }
  }
  return r;
}

EntailResult entails(const Ontology& o, const Implication& target) {
  if (const auto* ax = std::get_if<Axiom>(&target)) {
    if (!std::holds_alternative<FunctAxiom>(*ax)) {
      SatResult sat = is_satisfiable(o);
      if (sat.status == SatResult::Status::Unsatisfiable) {
        EntailResult r;
        r.entailed = true;
        r.ontology_unsatisfiable = true;
        return r;
      }
      return entails_inclusion(o, *ax);
    }
    EntailResult r;
    r.entailed = entails_functionality(o, std::get<FunctAxiom>(*ax).role);
    return r;
  }
  return entails_assertion(o, target);
}

// ---------------------------------------------------------------------------
// Conjunctive queries.

std::optional<ConjunctiveQuery> parse_query(const std::string& text) {
  std::size_t arrow = text.find("<-");
  std::size_t alen = 2;
  if (arrow == std::string::npos) {
    arrow = text.find("←");  // ←
    alen = 3;
  }
  if (arrow == std::string::npos) return std::nullopt;

  auto parse_atom = [](const std::string& s, std::size_t& i) -> std::optional<QueryAtom> {
    auto skip = [&] { while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i; };
    auto ident = [&]() -> std::string {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      std::string w = s.substr(i, j - i);
      i = j;
      return w;
    };
    skip();
    QueryAtom atom;
    atom.pred = ident();
    if (atom.pred.empty()) return std::nullopt;
    skip();
    if (i >= s.size() || s[i] != '(') return std::nullopt;
    ++i;
    while (true) {
      skip();
      std::string arg = ident();
      if (arg.empty()) return std::nullopt;
      atom.args.push_back(arg);
      skip();
      if (i < s.size() && s[i] == ',') { ++i; continue; }
      break;
    }
    if (i >= s.size() || s[i] != ')') return std::nullopt;
    ++i;
    return atom;
  };

  std::string head = text.substr(0, arrow);
  std::size_t i = 0;
  auto h = parse_atom(head, i);
  if (!h) return std::nullopt;

  ConjunctiveQuery q;
  q.name = h->pred;
  q.head_vars = h->args;
  std::string body = text.substr(arrow + alen);
  i = 0;
  while (true) {
    auto a = parse_atom(body, i);
    if (!a || a->args.size() > 2) return std::nullopt;
    q.body.push_back(*a);
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    if (i < body.size() && body[i] == ',') { ++i; continue; }
    break;
  }
  while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
  if (i != body.size()) return std::nullopt;
  return q;
}

std::string to_text(const ConjunctiveQuery& q) {
  std::string out = q.name + "(";
  for (std::size_t i = 0; i < q.head_vars.size(); ++i)
    out += (i ? ", " : "") + q.head_vars[i];
  out += ") ← ";
  for (std::size_t i = 0; i < q.body.size(); ++i) {
    if (i) out += ", ";
    out += q.body[i].pred + "(";
    for (std::size_t j = 0; j < q.body[i].args.size(); ++j)
      out += (j ? ", " : "") + q.body[i].args[j];
    out += ")";
  }
  return out;
}

std::vector<std::vector<std::string>> answer_query(const Ontology& o,
                                                   const ConjunctiveQuery& q,
                                                   int chase_depth) {
  std::set<std::string> body_terms;
  for (const QueryAtom& a : q.body)
    for (const std::string& t : a.args) body_terms.insert(t);
  for (const std::string& v : q.head_vars)
    if (!body_terms.count(v))
      throw UnsafeQuery("head variable '" + v + "' does not occur in the body");

  Signature sig = signature_of(o);
  auto is_var = [&](const std::string& t) {
    if (sig.individuals.count(t)) return false;
    return !t.empty() && std::islower(static_cast<unsigned char>(t[0]));
  };

  ChasedAbox ch = chase(o, chase_depth);
  std::set<std::vector<std::string>> answers;
  std::map<std::string, std::string> bind;

  std::function<void(std::size_t)> dfs = [&](std::size_t ai) {
    if (ai == q.body.size()) {
      std::vector<std::string> tuple;
      for (const std::string& v : q.head_vars) {
        std::string val = is_var(v) ? bind.at(v) : v;
        if (!ch.is_named(val)) return;  // answers must be named constants
        tuple.push_back(val);
      }
      answers.insert(tuple);
      return;
    }
    const QueryAtom& a = q.body[ai];
    auto match_term = [&](const std::string& t, const std::string& val,
                          std::vector<std::string>& bound) {
      if (!is_var(t)) return t == val;
      auto it = bind.find(t);
      if (it != bind.end()) return it->second == val;
      bind[t] = val;
      bound.push_back(t);
      return true;
    };
    if (a.args.size() == 1) {
      for (const auto& [c, e] : ch.concept_facts) {
        if (c != a.pred) continue;
        std::vector<std::string> bound;
        if (match_term(a.args[0], e, bound)) dfs(ai + 1);
        for (const std::string& b : bound) bind.erase(b);
      }
    } else {
      for (const auto& [name, s, t] : ch.role_facts) {
        if (name != a.pred) continue;
        std::vector<std::string> bound;
        if (match_term(a.args[0], s, bound) && match_term(a.args[1], t, bound))
          dfs(ai + 1);
        for (const std::string& b : bound) bind.erase(b);
      }
    }
  };
  dfs(0);
  return {answers.begin(), answers.end()};
}

}  // namespace dlite
