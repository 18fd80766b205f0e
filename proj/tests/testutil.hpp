#pragma once

#include <string>
#include <vector>

#include "dlite/ast.hpp"
#include "dlite/rng.hpp"

namespace dlite::testutil {

// Random generators sized for the brute-force oracle: up to 4 concept names,
// up to `max_roles` role names, individuals drawn from {a, b, c}.

inline Role random_role(Rng& rng, int max_roles) {
  return Role{"R" + std::to_string(1 + rng.below(max_roles)), rng.coin()};
}

inline Concept random_basic(Rng& rng, int max_concepts, int max_roles) {
  if (rng.below(3) == 0) return Concept::exists(random_role(rng, max_roles));
  return Concept::atomic("C" + std::to_string(1 + rng.below(max_concepts)));
}

inline Axiom random_axiom(Rng& rng, int max_concepts, int max_roles,
                          bool allow_funct = true) {
  std::uint64_t k = rng.below(8);
  if (k < 5) {
    Concept lhs = random_basic(rng, max_concepts, max_roles);
    Concept rhs = random_basic(rng, max_concepts, max_roles);
    return ConceptIncl{lhs, rng.coin() ? GeneralConcept::pos(rhs)
                                       : GeneralConcept::neg(rhs)};
  }
  if (k < 7 || !allow_funct)
    return RoleIncl{random_role(rng, max_roles),
                    GeneralRole{random_role(rng, max_roles), rng.coin()}};
  return FunctAxiom{random_role(rng, max_roles)};
}

inline Assertion random_assertion(Rng& rng, int max_concepts, int max_roles) {
  static const char* inds[] = {"a", "b", "c"};
  if (rng.coin())
    return ConceptAssert{"C" + std::to_string(1 + rng.below(max_concepts)),
                         inds[rng.below(3)]};
  return RoleAssert{"R" + std::to_string(1 + rng.below(max_roles)),
                    inds[rng.below(3)], inds[rng.below(3)]};
}

inline Ontology random_ontology(Rng& rng, int max_axioms = 6, int max_concepts = 4,
                                int max_roles = 2, int max_assertions = 3) {
  Ontology o(Dialect::FR);
  std::uint64_t na = 1 + rng.below(max_axioms);
  for (std::uint64_t i = 0; i < na; ++i)
    o.add(random_axiom(rng, max_concepts, max_roles));
  std::uint64_t ns = rng.below(max_assertions + 1);
  for (std::uint64_t i = 0; i < ns; ++i)
    o.add(random_assertion(rng, max_concepts, max_roles));
  return o;
}

// Candidate inclusion over the same name pools, for oracle cross-checks.
inline Axiom random_inclusion(Rng& rng, int max_concepts = 4, int max_roles = 2) {
  if (rng.below(4) < 3) {
    Concept lhs = random_basic(rng, max_concepts, max_roles);
    Concept rhs = random_basic(rng, max_concepts, max_roles);
    return ConceptIncl{lhs, rng.coin() ? GeneralConcept::pos(rhs)
                                       : GeneralConcept::neg(rhs)};
  }
  return RoleIncl{random_role(rng, max_roles),
                  GeneralRole{random_role(rng, max_roles), rng.coin()}};
}

inline std::string read_file(const std::string& path);

}  // namespace dlite::testutil

#include <fstream>
#include <sstream>
#include <stdexcept>

inline std::string dlite::testutil::read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
