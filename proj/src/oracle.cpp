#include "dlite/oracle.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace dlite {

namespace {

std::uint32_t ext_of_role(const Interpretation& i, const Role& r) {
  auto it = i.role_ext.find(r.name);
  std::uint32_t m = it == i.role_ext.end() ? 0u : it->second;
  if (!r.inverted) return m;
  std::uint32_t t = 0;
  for (int a = 0; a < i.domain_size; ++a)
    for (int b = 0; b < i.domain_size; ++b)
      if (m & (1u << (a * i.domain_size + b))) t |= 1u << (b * i.domain_size + a);
  return t;
}

std::uint32_t ext_of_basic(const Interpretation& i, const Concept& c) {
  if (c.is_atomic()) {
    auto it = i.concept_ext.find(c.name);
    return it == i.concept_ext.end() ? 0u : it->second;
  }
  std::uint32_t rm = ext_of_role(i, c.role);
  std::uint32_t out = 0;
  for (int a = 0; a < i.domain_size; ++a) {
    std::uint32_t row = (rm >> (a * i.domain_size)) & ((1u << i.domain_size) - 1);
    if (row) out |= 1u << a;
  }
  return out;
}

std::uint32_t ext_of_general(const Interpretation& i, const GeneralConcept& g) {
  std::uint32_t all = (1u << i.domain_size) - 1;
  switch (g.kind) {
    case GeneralConcept::Kind::Basic:
      return ext_of_basic(i, g.basic);
    case GeneralConcept::Kind::Neg:
      return all & ~ext_of_basic(i, g.basic);
    case GeneralConcept::Kind::Conj:
      return ext_of_general(i, *g.left) & ext_of_general(i, *g.right);
  }
  return 0;
}

}  // namespace

bool Interpretation::in_concept(const std::string& name, int e) const {
  auto it = concept_ext.find(name);
  return it != concept_ext.end() && (it->second & (1u << e));
}

bool Interpretation::in_role(const std::string& name, int a, int b) const {
  auto it = role_ext.find(name);
  return it != role_ext.end() && (it->second & (1u << (a * domain_size + b)));
}

nlohmann::json to_json(const Interpretation& i) {
  nlohmann::json j;
  j["domain_size"] = i.domain_size;
  for (const auto& [name, m] : i.concept_ext) {
    auto& arr = j["concepts"][name] = nlohmann::json::array();
    for (int e = 0; e < i.domain_size; ++e)
      if (m & (1u << e)) arr.push_back(e);
  }
  for (const auto& [name, m] : i.role_ext) {
    auto& arr = j["roles"][name] = nlohmann::json::array();
    for (int a = 0; a < i.domain_size; ++a)
      for (int b = 0; b < i.domain_size; ++b)
        if (m & (1u << (a * i.domain_size + b)))
          arr.push_back(nlohmann::json::array({a, b}));
  }
  for (const auto& [c, e] : i.ind_map) j["individuals"][c] = e;
  return j;
}

bool satisfies(const Interpretation& i, const Axiom& ax) {
  if (const auto* ci = std::get_if<ConceptIncl>(&ax)) {
    std::uint32_t lhs = ext_of_basic(i, ci->lhs);
    return (lhs & ~ext_of_general(i, ci->rhs)) == 0;
  }
  if (const auto* ri = std::get_if<RoleIncl>(&ax)) {
    std::uint32_t l = ext_of_role(i, ri->lhs);
    std::uint32_t r = ext_of_role(i, ri->rhs.role);
    return ri->rhs.negated ? (l & r) == 0 : (l & ~r) == 0;
  }
  const auto& f = std::get<FunctAxiom>(ax);
  std::uint32_t m = ext_of_role(i, f.role);
  for (int a = 0; a < i.domain_size; ++a) {
    std::uint32_t row = (m >> (a * i.domain_size)) & ((1u << i.domain_size) - 1);
    if (row & (row - 1)) return false;  // two or more successors
  }
  return true;
}

bool satisfies(const Interpretation& i, const Assertion& as) {
  if (const auto* ca = std::get_if<ConceptAssert>(&as))
    return i.in_concept(ca->concept_name, i.ind_map.at(ca->individual));
  const auto& ra = std::get<RoleAssert>(as);
  return i.in_role(ra.role_name, i.ind_map.at(ra.subject), i.ind_map.at(ra.object));
}

bool satisfies(const Interpretation& i, const Ontology& o) {
  for (const Axiom& ax : o.tbox())
    if (!satisfies(i, ax)) return false;
  for (const Assertion& as : o.abox())
    if (!satisfies(i, as)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Search.

namespace {

// Falsification test for the statement under search. Concept-level statements
// are violated by a single element (elem_viol); role- and individual-level
// statements do not depend on concept masks at all (model_viol). This keeps
// the search linear in the admissible masks instead of their cross product.
struct Target {
  std::function<bool(const Interpretation&, int)> elem_viol;
  std::function<bool(const Interpretation&)> model_viol;
};

// Shared search: enumerate interpretations of `o` in canonical order; when
// `target` is set, return the first model of o falsifying it, otherwise the
// first model of o.
std::optional<Interpretation> search(const Ontology& o, int max_domain,
                                     const Signature& extra_sig,
                                     const Target* target) {
  Signature sig = signature_of(o);
  sig.merge(extra_sig);
  std::vector<std::string> concepts(sig.concepts.begin(), sig.concepts.end());
  std::vector<std::string> roles(sig.roles.begin(), sig.roles.end());
  if (concepts.size() + roles.size() > 8 || max_domain > 3 || max_domain < 1)
    throw BudgetExceeded("oracle guard: signature or domain bound too large");

  std::vector<std::string> named, placeholders;
  for (const std::string& ind : sig.individuals)
    (is_placeholder(ind) ? placeholders : named).push_back(ind);

  std::vector<Axiom> tbox = normalize(o.tbox());
  const std::size_t C = concepts.size();
  std::map<std::string, std::size_t> cidx;
  for (std::size_t k = 0; k < C; ++k) cidx[concepts[k]] = k;

  for (int n = 1; n <= max_domain; ++n) {
    if (static_cast<int>(named.size()) > n) continue;
    const int bits = static_cast<int>(roles.size()) * n * n;
    if (bits > 20) throw BudgetExceeded("oracle guard: role search space too large");

    Interpretation interp;
    interp.domain_size = n;
    for (std::size_t k = 0; k < named.size(); ++k)
      interp.ind_map[named[k]] = static_cast<int>(k);  // canonical, WLOG under UNA

    // placeholder maps, lexicographic
    std::vector<int> pmap(placeholders.size(), 0);
    while (true) {
      for (std::size_t k = 0; k < placeholders.size(); ++k)
        interp.ind_map[placeholders[k]] = pmap[k];

      const std::uint64_t total = 1ull << bits;
      for (std::uint64_t rbits = 0; rbits < total; ++rbits) {
        for (std::size_t k = 0; k < roles.size(); ++k)
          interp.role_ext[roles[k]] =
              static_cast<std::uint32_t>((rbits >> (k * n * n)) & ((1u << (n * n)) - 1));

        // role assertions and role-only axioms first (cheap rejects)
        bool ok = true;
        for (const Assertion& as : o.abox()) {
          if (const auto* ra = std::get_if<RoleAssert>(&as))
            if (!satisfies(interp, as)) { ok = false; break; }
          (void)as;
        }
        if (!ok) continue;
        for (const Axiom& ax : tbox) {
          if (std::holds_alternative<ConceptIncl>(ax)) continue;
          if (!satisfies(interp, ax)) { ok = false; break; }
        }
        if (!ok) continue;

        // per-element admissible concept masks (concept axioms decompose
        // elementwise once the roles are fixed)
        std::vector<std::vector<std::uint16_t>> allowed(n);
        std::vector<std::optional<std::uint16_t>> violating(n);
        auto eval_elem = [&](const Interpretation& iv, int e) {
          for (const Axiom& ax : tbox) {
            const auto* ci = std::get_if<ConceptIncl>(&ax);
            if (!ci) continue;
            if ((ext_of_basic(iv, ci->lhs) & (1u << e)) &&
                !(ext_of_general(iv, ci->rhs) & (1u << e)))
              return false;
          }
          for (const Assertion& as : o.abox()) {
            const auto* ca = std::get_if<ConceptAssert>(&as);
            if (!ca || interp.ind_map.at(ca->individual) != e) continue;
            if (!iv.in_concept(ca->concept_name, e)) return false;
          }
          return true;
        };
        Interpretation trial = interp;
        for (int e = 0; e < n; ++e) {
          for (std::uint32_t m = 0; m < (1u << C); ++m) {
            for (std::size_t k = 0; k < C; ++k)
              trial.concept_ext[concepts[k]] =
                  (trial.concept_ext[concepts[k]] & ~(1u << e)) |
                  ((m >> k) & 1u) << e;
            if (!eval_elem(trial, e)) continue;
            allowed[e].push_back(static_cast<std::uint16_t>(m));
            if (target && target->elem_viol && !violating[e] &&
                target->elem_viol(trial, e))
              violating[e] = static_cast<std::uint16_t>(m);
          }
          if (allowed[e].empty()) { ok = false; break; }
        }
        if (!ok) continue;

        auto assemble = [&](const std::vector<std::uint16_t>& choice) {
          Interpretation out = interp;
          for (std::size_t k = 0; k < C; ++k) {
            std::uint32_t ext = 0;
            for (int e = 0; e < n; ++e) ext |= ((choice[e] >> k) & 1u) << e;
            out.concept_ext[concepts[k]] = ext;
          }
          return out;
        };

        std::vector<std::uint16_t> choice(n);
        for (int e = 0; e < n; ++e) choice[e] = allowed[e][0];
        if (!target) return assemble(choice);
        if (target->elem_viol) {
          for (int e = 0; e < n; ++e) {
            if (!violating[e]) continue;
            choice[e] = *violating[e];
            return assemble(choice);
          }
        } else {
          Interpretation cand = assemble(choice);
          if (target->model_viol(cand)) return cand;
        }
      }

      // next placeholder map
      std::size_t k = 0;
      while (k < pmap.size() && ++pmap[k] == n) pmap[k++] = 0;
      if (k == pmap.size()) break;
    }
  }
  return std::nullopt;
}

Signature signature_of_implication(const Implication& imp) {
  Signature s;
  if (const auto* ax = std::get_if<Axiom>(&imp)) return signature_of(*ax);
  if (const auto* as = std::get_if<Assertion>(&imp)) return signature_of(*as);
  if (const auto* ef = std::get_if<ExistsFiller>(&imp)) {
    s.roles.insert(ef->role.name);
    s.individuals.insert(ef->individual);
    return s;
  }
  const auto& pe = std::get<PlaceholderEq>(imp);
  s.roles.insert(pe.via.name);
  s.individuals.insert(pe.placeholder);
  s.individuals.insert(pe.named);
  return s;
}

}  // namespace

std::optional<Interpretation> find_model(const Ontology& o, int max_domain) {
  return search(o, max_domain, {}, nullptr);
}

OracleResult oracle_entails(const Ontology& o, const Implication& statement,
                            int max_domain) {
  Target t;
  if (const auto* ax = std::get_if<Axiom>(&statement)) {
    if (const auto* ci = std::get_if<ConceptIncl>(ax)) {
      ConceptIncl target = *ci;
      t.elem_viol = [target](const Interpretation& i, int e) {
        return (ext_of_basic(i, target.lhs) & (1u << e)) &&
               !(ext_of_general(i, target.rhs) & (1u << e));
      };
    } else {
      Axiom target = *ax;  // role inclusion or functionality: mask-independent
      t.model_viol = [target](const Interpretation& i) { return !satisfies(i, target); };
    }
  } else if (const auto* as = std::get_if<Assertion>(&statement)) {
    if (const auto* ca = std::get_if<ConceptAssert>(as)) {
      ConceptAssert target = *ca;
      t.elem_viol = [target](const Interpretation& i, int e) {
        return i.ind_map.at(target.individual) == e &&
               !i.in_concept(target.concept_name, e);
      };
    } else {
      Assertion target = *as;
      t.model_viol = [target](const Interpretation& i) { return !satisfies(i, target); };
    }
  } else if (const auto* ef = std::get_if<ExistsFiller>(&statement)) {
    ExistsFiller target = *ef;
    t.model_viol = [target](const Interpretation& i) {
      int a = i.ind_map.at(target.individual);
      std::uint32_t m = ext_of_basic(i, Concept::exists(target.role));
      return !(m & (1u << a));
    };
  } else {
    PlaceholderEq target = std::get<PlaceholderEq>(statement);
    t.model_viol = [target](const Interpretation& i) {
      return i.ind_map.at(target.placeholder) != i.ind_map.at(target.named);
    };
  }
  auto model = search(o, max_domain, signature_of_implication(statement), &t);
  OracleResult r;
  if (model) {
    r.refuted = true;
    r.countermodel = std::move(model);
  }
  return r;
}

}  // namespace dlite
