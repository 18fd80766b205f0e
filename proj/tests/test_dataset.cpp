#include <doctest.h>

#include <set>

#include "dlite/dataset.hpp"
#include "dlite/parser.hpp"
#include "testutil.hpp"

using namespace dlite;

namespace {

Ontology parse(const char* text, const Signature* seed = nullptr) {
  return parse_ontology(text, true, seed).ontology;
}

std::set<std::string> texts(const std::vector<Implication>& imps) {
  std::set<std::string> out;
  for (const Implication& imp : imps) out.insert(to_text(imp));
  return out;
}

}  // namespace

TEST_CASE("TBox extraction yields derived inclusions only, in text order") {
  Ontology o = parse(
      "MasterStudent [= Student\n"
      "MasterStudent [= Employee\n"
      "Student [= !Employee\n");
  auto imps = extract_tbox_implications(o);
  std::set<std::string> got = texts(imps);
  // NI propagation through the two positive inclusions
  CHECK(got.count("MasterStudent ⊑ ¬Employee"));
  CHECK(got.count("MasterStudent ⊑ ¬Student"));
  CHECK_FALSE(got.count("Student ⊑ ¬Employee"));  // asserted, not derived
  for (std::size_t i = 1; i < imps.size(); ++i)
    CHECK(to_text(imps[i - 1], TextMode::Ascii) < to_text(imps[i], TextMode::Ascii));
}

TEST_CASE("ABox extraction reports named facts and existential fillers") {
  Ontology o = parse(
      "PhDStudent [= Student\n"
      "Student [= exists EnrolledIn\n"
      "WorksIn^- [= Employs\n"
      "PhDStudent(John)\n"
      "WorksIn(John, Google)\n");
  std::set<std::string> got = texts(extract_abox_implications(o));
  CHECK(got.count("Student(John)"));
  CHECK(got.count("Employs(Google, John)"));
  CHECK(got.count("EnrolledIn(John, _)"));        // anonymous filler
  CHECK_FALSE(got.count("PhDStudent(John)"));     // asserted
}

TEST_CASE("ABox extraction refuses unsatisfiable input") {
  Ontology o = parse("A [= !A\nA(a)\n");
  CHECK_THROWS_AS(extract_abox_implications(o), UnsatisfiableOntology);
}

TEST_CASE("inverse probe reproduces the Employs construction") {
  Ontology o = parse("WorksIn(John, Google)\n");
  auto [aug, imp] = build_inverse_probe(o, "WorksIn", "Employs", 1);
  CHECK(to_text(imp) == "Employs(Google, John)");
  Signature sig = signature_of(aug);
  bool fwd = false, bwd = false;
  for (const Axiom& ax : aug.tbox()) {
    if (to_text(ax) == "Employs ⊑ WorksIn⁻") fwd = true;
    if (to_text(ax) == "WorksIn⁻ ⊑ Employs") bwd = true;
  }
  CHECK(fwd);
  CHECK(bwd);
  CHECK(entails(aug, imp).entailed);
  CHECK_THROWS_AS(build_inverse_probe(o, "Manages", "Led", 1), NoAssertionForRole);
}

TEST_CASE("functional probe forces the placeholder identity") {
  Ontology o = parse("(funct WorksAt)\nWorksAt(DrBrown, RegionalHospital)\n");
  auto [aug, imp] = build_functional_probe(o, "WorksAt", false, 3);
  const auto& eq = std::get<PlaceholderEq>(imp);
  CHECK(eq.named == "RegionalHospital");
  CHECK(is_placeholder(eq.placeholder));
  CHECK(entails(aug, imp).entailed);
  CHECK_THROWS_AS(build_functional_probe(o, "WorksAt", true, 3), RoleNotFunctional);
}

TEST_CASE("MIS is unsatisfiable and minimal; counterpart is satisfiable") {
  Ontology o = parse(
      "Ability [= !Device\n"  // irrelevant to the clash
      "MasterStudent [= Student\n"
      "MasterStudent [= Employee\n"
      "Student [= !Employee\n"
      "MasterStudent(John)\n");
  for (std::uint64_t seed : {1ull, 2ull, 9ull}) {
    MisResult mis = extract_mis(o, seed);
    CHECK(mis.subset.size() == 4);  // the irrelevant axiom is dropped
    Ontology sub = ontology_from_statements(mis.subset, o.dialect());
    CHECK_FALSE(is_satisfiable(sub).ok());
    for (std::size_t k = 0; k < mis.subset.size(); ++k) {
      std::vector<Statement> rest = mis.subset;
      rest.erase(rest.begin() + static_cast<long>(k));
      CHECK(is_satisfiable(ontology_from_statements(rest, o.dialect())).ok());
    }
    CHECK(mis.parent == ontology_digest(o));
    CHECK(is_satisfiable(consistent_counterpart(mis, o.dialect(), seed)).ok());
  }
  CHECK_THROWS_AS(extract_mis(parse("A [= B\n"), 1), OntologySatisfiable);
}

TEST_CASE("sample_subset is seed-deterministic and order-preserving") {
  std::vector<int> pool{10, 20, 30, 40, 50};
  auto a = sample_subset(pool, 3, 7);
  auto b = sample_subset(pool, 3, 7);
  CHECK(a == b);
  CHECK(std::is_sorted(a.begin(), a.end()));  // input order kept
  CHECK_THROWS_AS(sample_subset(pool, 6, 7), SampleTooLarge);
}

TEST_CASE("generated negatives are never entailed") {
  Rng rng(314);
  for (int i = 0; i < 40; ++i) {
    Ontology o = testutil::random_ontology(rng);
    if (!is_satisfiable(o).ok()) continue;
    std::vector<Implication> pos;
    try {
      pos = extract_tbox_implications(o);
    } catch (const std::exception&) {
      continue;
    }
    for (const Implication& neg : generate_negatives(o, pos, 5, rng.next()))
      CHECK_FALSE(entails(o, neg).entailed);
  }
}

TEST_CASE("syntax items mark corrupted statements false, originals true") {
  Ontology o = parse(
      "Professor [= exists TeachesTo\n"
      "Student [= !Employee\n"
      "Employee [= exists WorksIn\n"
      "Professor [= Employee\n");
  TaskItem item = make_syntax_item(o, 2, 11);
  CHECK(item.task == Task::Syntax);
  REQUIRE(item.statements.size() == 4);
  REQUIRE(item.gold.size() == 4);
  CHECK(std::count(item.gold.begin(), item.gold.end(), false) == 2);
  Signature sig = signature_of(o);
  for (std::size_t k = 0; k < item.statements.size(); ++k)
    CHECK(parse_axiom(item.statements[k], &sig).is_ok() == item.gold[k]);
}

TEST_CASE("subsumption and instance items verify their gold bits") {
  Ontology o = parse(
      "PhDStudent [= Student\n"
      "Student [= Person\n"
      "PhDStudent(John)\n");
  for (TaskItem item : {make_subsumption_item(o, 2, 5), make_instance_item(o, 2, 5)}) {
    REQUIRE(item.statements.size() == item.gold.size());
    CHECK(item.statements.size() > 0);
    Signature sig = signature_of(o);
    for (std::size_t k = 0; k < item.statements.size(); ++k) {
      auto parsed = parse_axiom(item.statements[k], &sig);
      if (!parsed.is_ok()) continue;  // filler targets use the R(a, _) form
      Implication imp;
      if (auto* ax = std::get_if<Axiom>(&*parsed.ok)) imp = *ax;
      else imp = std::get<Assertion>(*parsed.ok);
      CHECK(entails(o, imp).entailed == item.gold[k]);
    }
  }
}

TEST_CASE("satisfiability items carry a single verified verdict") {
  TaskItem sat = make_satisfiability_item(parse("A [= B\nA(a)\n"));
  REQUIRE(sat.gold.size() == 1);
  CHECK(sat.gold[0]);
  TaskItem unsat = make_satisfiability_item(parse("A [= !A\nA(a)\n"));
  REQUIRE(unsat.gold.size() == 1);
  CHECK_FALSE(unsat.gold[0]);
}

TEST_CASE("query items store the reasoner's answer set") {
  Ontology o = parse("PhDStudent [= Student\nPhDStudent(John)\nStudent(Mary)\n");
  auto q = parse_query("Q1(x) <- Student(x)");
  REQUIRE(q);
  TaskItem item = make_query_item(o, *q);
  CHECK(item.task == Task::Query);
  std::set<std::vector<std::string>> got(item.gold_answers.begin(), item.gold_answers.end());
  CHECK(got == std::set<std::vector<std::string>>{{"John"}, {"Mary"}});
}

TEST_CASE("JSONL round-trip preserves items exactly") {
  Ontology o = parse("PhDStudent [= Student\nPhDStudent(John)\n");
  std::vector<TaskItem> items{make_instance_item(o, 2, 5), make_satisfiability_item(o)};
  std::vector<TaskItem> back = from_jsonl(to_jsonl(items));
  REQUIRE(back.size() == items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    CHECK(back[i].task == items[i].task);
    CHECK(back[i].statements == items[i].statements);
    CHECK(back[i].gold == items[i].gold);
    CHECK(back[i].gold_answers == items[i].gold_answers);
    CHECK(back[i].seed == items[i].seed);
    CHECK(ontology_digest(back[i].ontology) == ontology_digest(items[i].ontology));
  }
  CHECK(to_jsonl(back) == to_jsonl(items));
}
