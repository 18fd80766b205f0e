#include <doctest.h>

#include <stdexcept>

#include "dlite/ast.hpp"
#include "dlite/rng.hpp"
#include "testutil.hpp"

using namespace dlite;

TEST_CASE("role inversion is an involution and never double-applies") {
  Role r{"WorksIn", false};
  CHECK(r.inverse().inverted);
  CHECK(r.inverse().inverse() == r);
}

TEST_CASE("serialization in both symbol modes") {
  Concept ex = Concept::exists(Role{"TeachesTo", true});
  CHECK(to_text(ex) == "∃TeachesTo⁻");
  CHECK(to_text(ex, TextMode::Ascii) == "exists TeachesTo^-");

  Axiom ax = ConceptIncl{Concept::atomic("Professor"),
                         GeneralConcept::neg(Concept::atomic("Student"))};
  CHECK(to_text(ax) == "Professor ⊑ ¬Student");
  CHECK(to_text(ax, TextMode::Ascii) == "Professor [= !Student");

  Axiom f = FunctAxiom{Role{"WorksAt", false}};
  CHECK(to_text(f) == "(funct WorksAt)");
  CHECK(to_text(f, TextMode::Ascii) == "(funct WorksAt)");

  Axiom ri = RoleIncl{Role{"Employs", false},
                      GeneralRole{Role{"WorksIn", true}, false}};
  CHECK(to_text(ri) == "Employs ⊑ WorksIn⁻");

  Assertion ra = RoleAssert{"WorksIn", "John", "Google"};
  CHECK(to_text(ra) == "WorksIn(John, Google)");
}

TEST_CASE("conjunction serializes with the mode's operator") {
  Axiom ax = ConceptIncl{
      Concept::atomic("A"),
      GeneralConcept::conj(GeneralConcept::pos(Concept::atomic("B")),
                           GeneralConcept::neg(Concept::atomic("C")))};
  CHECK(to_text(ax) == "A ⊑ B ⊓ ¬C");
  CHECK(to_text(ax, TextMode::Ascii) == "A [= B & !C");
}

TEST_CASE("normalize splits conjunction heads recursively") {
  GeneralConcept rhs = GeneralConcept::conj(
      GeneralConcept::pos(Concept::atomic("B")),
      GeneralConcept::conj(GeneralConcept::neg(Concept::atomic("C")),
                           GeneralConcept::pos(Concept::exists(Role{"R", false}))));
  std::vector<Axiom> in{ConceptIncl{Concept::atomic("A"), rhs}};
  std::vector<Axiom> out = normalize(in);
  REQUIRE(out.size() == 3);
  // canonical (ascii text) order: '!' < 'B' < 'e'
  CHECK(to_text(out[0]) == "A ⊑ ¬C");
  CHECK(to_text(out[1]) == "A ⊑ B");
  CHECK(to_text(out[2]) == "A ⊑ ∃R");
}

TEST_CASE("normalize is idempotent and signature-preserving") {
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    std::vector<Axiom> tbox;
    std::uint64_t n = 1 + rng.below(5);
    for (std::uint64_t k = 0; k < n; ++k)
      tbox.push_back(testutil::random_axiom(rng, 4, 3));
    // occasionally a conjunctive head
    if (rng.coin())
      tbox.push_back(ConceptIncl{
          testutil::random_basic(rng, 4, 3),
          GeneralConcept::conj(
              GeneralConcept::pos(testutil::random_basic(rng, 4, 3)),
              GeneralConcept::neg(testutil::random_basic(rng, 4, 3)))});
    std::vector<Axiom> once = normalize(tbox);
    std::vector<Axiom> twice = normalize(once);
    REQUIRE(once.size() == twice.size());
    for (std::size_t k = 0; k < once.size(); ++k)
      CHECK(once[k] == twice[k]);

    Signature before, after;
    for (const Axiom& ax : tbox) before.merge(signature_of(ax));
    for (const Axiom& ax : once) after.merge(signature_of(ax));
    CHECK(before == after);
  }
}

TEST_CASE("ontology has set semantics with canonical order") {
  Ontology o(Dialect::FR);
  Axiom a1 = ConceptIncl{Concept::atomic("B"), GeneralConcept::pos(Concept::atomic("C"))};
  Axiom a2 = ConceptIncl{Concept::atomic("A"), GeneralConcept::pos(Concept::atomic("C"))};
  CHECK(o.add(a1));
  CHECK(o.add(a2));
  CHECK_FALSE(o.add(a1));  // duplicate
  REQUIRE(o.tbox().size() == 2);
  CHECK(to_text(o.tbox()[0]) == "A ⊑ C");  // lexicographic by ascii form
  CHECK(to_text(o.tbox()[1]) == "B ⊑ C");
  CHECK(o.remove_axiom(a1));
  CHECK_FALSE(o.remove_axiom(a1));
  CHECK(o.tbox().size() == 1);
}

TEST_CASE("dialect restrictions are enforced on add") {
  Ontology core(Dialect::Core);
  CHECK_THROWS_AS(core.add(Axiom{FunctAxiom{Role{"R", false}}}), std::invalid_argument);
  CHECK_THROWS_AS(
      core.add(Axiom{RoleIncl{Role{"R", false}, GeneralRole{Role{"S", false}, false}}}),
      std::invalid_argument);
  Ontology f(Dialect::F);
  CHECK(f.add(Axiom{FunctAxiom{Role{"R", false}}}));
  CHECK_THROWS_AS(
      f.add(Axiom{RoleIncl{Role{"R", false}, GeneralRole{Role{"S", false}, false}}}),
      std::invalid_argument);
  Ontology r(Dialect::R);
  CHECK(r.add(Axiom{RoleIncl{Role{"R", false}, GeneralRole{Role{"S", false}, false}}}));
  CHECK_THROWS_AS(r.add(Axiom{FunctAxiom{Role{"R", false}}}), std::invalid_argument);
}

TEST_CASE("infer_dialect picks the smallest covering dialect") {
  Axiom ci = ConceptIncl{Concept::atomic("A"), GeneralConcept::pos(Concept::atomic("B"))};
  Axiom ri = RoleIncl{Role{"R", false}, GeneralRole{Role{"S", false}, false}};
  Axiom fu = FunctAxiom{Role{"R", false}};
  CHECK(Ontology::infer_dialect({ci}) == Dialect::Core);
  CHECK(Ontology::infer_dialect({ci, fu}) == Dialect::F);
  CHECK(Ontology::infer_dialect({ci, ri}) == Dialect::R);
  CHECK(Ontology::infer_dialect({ci, ri, fu}) == Dialect::FR);
}

TEST_CASE("signature_of collects concepts, roles and individuals") {
  Ontology o(Dialect::FR);
  o.add(Axiom{ConceptIncl{Concept::atomic("Student"),
                          GeneralConcept::pos(Concept::exists(Role{"EnrolledIn", false}))}});
  o.add(Assertion{RoleAssert{"WorksIn", "John", "Google"}});
  Signature s = signature_of(o);
  CHECK(s.concepts == std::set<std::string>{"Student"});
  CHECK(s.roles == std::set<std::string>{"EnrolledIn", "WorksIn"});
  CHECK(s.individuals == std::set<std::string>{"Google", "John"});
}

TEST_CASE("identifier and placeholder rules") {
  CHECK(is_valid_identifier("WorksIn"));
  CHECK(is_valid_identifier("_tmp2"));
  CHECK_FALSE(is_valid_identifier(""));
  CHECK_FALSE(is_valid_identifier("2bad"));
  CHECK_FALSE(is_valid_identifier("no-dash"));

  CHECK(is_placeholder("x1"));
  CHECK(is_placeholder("x42"));
  CHECK_FALSE(is_placeholder("x"));
  CHECK_FALSE(is_placeholder("John"));
  CHECK_FALSE(is_placeholder("x1a"));

  Signature sig;
  sig.individuals = {"x1", "x2", "John"};
  CHECK(fresh_placeholder(sig) == "x3");
  CHECK(fresh_placeholder(Signature{}) == "x1");
}

TEST_CASE("rng streams are deterministic and splittable") {
  Rng a(7), b(7);
  for (int i = 0; i < 16; ++i) CHECK(a.next() == b.next());
  Rng parent(9);
  Rng child = parent.split();
  std::uint64_t after_split = parent.next();
  (void)child.next();
  (void)child.next();
  Rng parent2(9);
  (void)parent2.split();
  CHECK(parent2.next() == after_split);  // child advances never perturb parent
  Rng c(11);
  for (int i = 0; i < 100; ++i) CHECK(c.below(10) < 10);
}
