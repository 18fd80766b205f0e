#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "dlite/ast.hpp"
#include "dlite/reasoner.hpp"  // Implication

namespace dlite {

// A finite interpretation over elements 0..domain_size-1. Concept extensions
// are bitmasks over elements; role extensions are bitmasks over pairs with
// pair (a, b) at bit a*domain_size+b.
struct Interpretation {
  int domain_size = 0;
  std::map<std::string, std::uint32_t> concept_ext;
  std::map<std::string, std::uint32_t> role_ext;
  std::map<std::string, int> ind_map;  // injective on named individuals (UNA)

  bool in_concept(const std::string& name, int e) const;
  bool in_role(const std::string& name, int a, int b) const;
};

nlohmann::json to_json(const Interpretation& i);

bool satisfies(const Interpretation& i, const Axiom& ax);
bool satisfies(const Interpretation& i, const Assertion& as);
bool satisfies(const Interpretation& i, const Ontology& o);

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic: returns the canonically first model found, scanning domain
// sizes 1..max_domain. Guard: concepts+roles ≤ 8, max_domain ≤ 3.
std::optional<Interpretation> find_model(const Ontology& o, int max_domain);

// Bounded countermodel search. `no_countermodel_up_to_bound` is evidence, not
// proof; `refuted` is definitive.
struct OracleResult {
  bool refuted = false;
  std::optional<Interpretation> countermodel;  // present iff refuted
};

OracleResult oracle_entails(const Ontology& o, const Implication& statement,
                            int max_domain);

}  // namespace dlite
