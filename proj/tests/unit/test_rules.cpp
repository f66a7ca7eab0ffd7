#include "doctest.h"
#include "fixtures.hpp"
#include "fusion/rules.hpp"

using namespace fusion;
using fixtures::bba;
using fixtures::mass;

namespace {

double cell(const ConjunctiveResult& conj, const char* expr) {
  const auto it = conj.cells().find(parse_expr(expr, conj.free_frame()));
  return it == conj.cells().end() ? 0.0 : it->second.mass;
}

}  // namespace

TEST_SUITE("rules") {

TEST_CASE("conjunctive cells of two sources") {
  const fixtures::TwoSources t;
  const auto pair = t.pair();
  const auto conj = conjunctive(pair);
  CHECK(cell(conj, "A") == doctest::Approx(0.24));
  CHECK(cell(conj, "B") == doctest::Approx(0.42));
  CHECK(cell(conj, "A|B") == doctest::Approx(0.06));
  CHECK(cell(conj, "A&B") == doctest::Approx(0.28));
  CHECK(conj.cells().size() == 4);
  CHECK(conj.source_count() == 2);
  CHECK(conj.total() == doctest::Approx(1.0));

  SUBCASE("each cell keeps the products that formed it") {
    const auto& ab = conj.cells().at(parse_expr("A&B", t.free));
    REQUIRE(ab.terms.size() == 2);
    for (const auto& term : ab.terms) {
      CHECK(term.focals.size() == 2);
      CHECK(term.product == doctest::Approx(term.masses[0] * term.masses[1]));
    }
  }
  SUBCASE("a model marks cells empty without moving them") {
    const auto on_model = conjunctive(pair, t.exclusive);
    CHECK(on_model.is_model_empty(parse_expr("A&B", t.free)));
    CHECK_FALSE(on_model.is_model_empty(parse_expr("A", t.free)));
    CHECK(on_model.flatten() == conj.flatten());
  }
}

TEST_CASE("five-hypothesis conjunctive cells") {
  const fixtures::FiveAtoms f;
  const auto pair = f.pair();
  const auto conj = conjunctive(pair, f.model);
  CHECK(cell(conj, "A") == doctest::Approx(0.10));
  CHECK(cell(conj, "C") == doctest::Approx(0.03));
  CHECK(cell(conj, "E") == doctest::Approx(0.02));
  CHECK(cell(conj, "A&B") == doctest::Approx(0.04));
  CHECK(cell(conj, "A&C") == doctest::Approx(0.17));
  CHECK(cell(conj, "A&D") == doctest::Approx(0.20));
  CHECK(cell(conj, "A&E") == doctest::Approx(0.09));
  CHECK(cell(conj, "B&C") == doctest::Approx(0.06));
  CHECK(cell(conj, "B&D") == doctest::Approx(0.08));
  CHECK(dsm_classic(pair).focal().size() == 13);
}

TEST_CASE("vacuous source is the conjunctive identity and absorbs the disjunctive rule") {
  const fixtures::TwoSources t;
  const std::vector<Bba> with_vacuous{t.s1, vacuous(t.free)};
  CHECK(conjunctive(with_vacuous).flatten() == t.s1);
  CHECK(dsm_classic(with_vacuous) == t.s1);
  CHECK(disjunctive(with_vacuous) == vacuous(t.free));
}

TEST_CASE("conjunctive input errors") {
  const fixtures::TwoSources t;
  const std::vector<Bba> one{t.s1};
  CHECK_THROWS_AS(conjunctive(one), Error);
  const std::vector<Bba> mixed_frames{t.s1, bba(Frame::build({"A", "B"}), {{"A", 1.0}})};
  CHECK_THROWS_AS(conjunctive(mixed_frames), Error);
  CHECK_THROWS_AS(disjunctive(mixed_frames), Error);
}

TEST_CASE("sequential extension matches the batch rule") {
  const fixtures::FiveAtoms f;
  const auto third = bba(f.free, {{"A|B", 0.5}, {"C", 0.25}, {"I", 0.25}});
  const std::vector<Bba> all{f.m1, f.m2, third};
  const auto batch = conjunctive(all, f.model);
  const auto stepped = extend(extend(singleton_result(f.m1, f.model), f.m2), third);
  CHECK(stepped == batch);
  CHECK(stepped.source_count() == 3);
}

TEST_CASE("disjunctive rule") {
  const fixtures::TwoSources t;
  const auto pair = t.pair();
  const auto d = disjunctive(pair);
  CHECK(mass(d, "A") == doctest::Approx(0.08));
  CHECK(mass(d, "B") == doctest::Approx(0.20));
  CHECK(mass(d, "A|B") == doctest::Approx(0.72));
  const auto x = bba(t.free, {{"A&C", 1.0}});
  const std::vector<Bba> same{x, x};
  CHECK(disjunctive(same) == x);
}

TEST_CASE("exclusive disjunctive rule") {
  SUBCASE("disjoint pair goes to the union") {
    const auto f = Frame::build({"A", "B"}, {Constraint::empty("A&B")});
    const std::vector<Bba> pair{bba(f, {{"A", 1.0}}), bba(f, {{"B", 1.0}})};
    CHECK(mass(exclusive_disjunctive(pair), "A|B") == 1.0);
  }
  SUBCASE("identical pair goes to EMPTY") {
    const auto f = Frame::build({"A", "B"});
    const std::vector<Bba> pair{bba(f, {{"A", 1.0}}), bba(f, {{"A", 1.0}})};
    CHECK(mass(exclusive_disjunctive(pair), "EMPTY") == 1.0);
  }
  SUBCASE("three sources (A, A, B) give B\\A") {
    const auto f = Frame::build({"A", "B"});
    const std::vector<Bba> triple{bba(f, {{"A", 1.0}}), bba(f, {{"A", 1.0}}), bba(f, {{"B", 1.0}})};
    const auto out = exclusive_disjunctive(triple);
    CHECK(out.focal().size() == 1);
    CHECK(mass(out, "B\\A") == 1.0);
  }
  SUBCASE("needs complements") {
    const auto f = Frame::build({"A", "B"}, {}, ClosureMode::HyperPowerSet);
    const std::vector<Bba> pair{bba(f, {{"A", 1.0}}), bba(f, {{"B", 1.0}})};
    CHECK_THROWS_AS(exclusive_disjunctive(pair), Error);
  }
}

TEST_CASE("mixed rule") {
  const auto f = Frame::build({"A", "B", "C", "D"});
  SUBCASE("four-source formula") {
    const std::vector<Bba> four{bba(f, {{"A|B", 1.0}}), bba(f, {{"B|C", 1.0}}), bba(f, {{"D", 1.0}}),
                                bba(f, {{"A&C", 1.0}})};
    const auto out = mixed(four, SourceTree::parse("((1&2)|3)|4"));
    CHECK(mass(out, "((A|B)&(B|C)|D)|(A&C)") == 1.0);
  }
  const fixtures::TwoSources t;
  const auto pair = t.pair();
  CHECK(mixed(pair, SourceTree::parse("1&2")) == conjunctive(pair).flatten());
  CHECK(mixed(pair, SourceTree::parse("1|2")) == disjunctive(pair));
  CHECK(mixed(pair, SourceTree::parse("(2|1)")) == disjunctive(pair));
  SUBCASE("tree errors") {
    CHECK_THROWS_AS(SourceTree::parse("1&"), Error);
    CHECK_THROWS_AS(SourceTree::parse("(1&2"), Error);
    CHECK_THROWS_AS(SourceTree::parse("1^2"), Error);
    CHECK_THROWS_AS(mixed(pair, SourceTree::parse("1&1")), Error);
    CHECK_THROWS_AS(mixed(pair, SourceTree::parse("1&3")), Error);
    CHECK_THROWS_AS(mixed(pair, SourceTree::parse("(1&2)|3")), Error);
  }
}

TEST_CASE("conflict transfers") {
  const fixtures::TwoSources t;
  const auto pair = t.pair();
  const auto conj = conjunctive(pair, t.exclusive);
  const auto yager = transfer_conflict(conj, ConflictStrategy::YagerToIgnorance);
  CHECK(mass(yager, "A") == doctest::Approx(0.24));
  CHECK(mass(yager, "B") == doctest::Approx(0.42));
  CHECK(mass(yager, "A|B") == doctest::Approx(0.06));
  CHECK(mass(yager, "I") == doctest::Approx(0.28));
  const auto tbm = transfer_conflict(conj, ConflictStrategy::TbmToEmpty);
  CHECK(mass(tbm, "EMPTY") == doctest::Approx(0.28));
  const auto dp = transfer_conflict(conj, ConflictStrategy::DuboisPradeToUnion);
  CHECK(mass(dp, "A|B") == doctest::Approx(0.34));
  const auto dempster = transfer_conflict(conj, ConflictStrategy::DempsterNormalize);
  CHECK(mass(dempster, "A") == doctest::Approx(0.24 / 0.72));
  CHECK(dempster.total() == doctest::Approx(1.0));

  SUBCASE("Yager and Dubois-Prade coincide when the frame is the two conflicting atoms") {
    const auto f = Frame::build({"A", "B"}, {Constraint::empty("A&B")});
    const std::vector<Bba> two{bba(f, {{"A", 0.2}, {"B", 0.5}, {"A|B", 0.3}}),
                               bba(f, {{"A", 0.4}, {"B", 0.4}, {"A|B", 0.2}})};
    const auto c = conjunctive(two);
    CHECK(max_abs_difference(transfer_conflict(c, ConflictStrategy::YagerToIgnorance),
                             transfer_conflict(c, ConflictStrategy::DuboisPradeToUnion)) < 1e-15);
  }
  SUBCASE("Dempster is undefined under total conflict") {
    const std::vector<Bba> clash{bba(t.free, {{"A", 1.0}}), bba(t.free, {{"B", 1.0}})};
    CHECK_THROWS_AS(transfer_conflict(conjunctive(clash, t.exclusive), ConflictStrategy::DempsterNormalize), Error);
  }
}

TEST_CASE("DSm hybrid rule on the cross-section model") {
  const fixtures::CrossSection cs;
  const auto pair = cs.pair();
  const auto out = dsm_hybrid(conjunctive(pair, cs.model));
  CHECK(mass(out, "A") == doctest::Approx(0.20));
  CHECK(mass(out, "B") == doctest::Approx(0.08));
  CHECK(mass(out, "C") == doctest::Approx(0.06));
  CHECK(mass(out, "A&B") == doctest::Approx(0.28));
  CHECK(mass(out, "A|C") == doctest::Approx(0.22));
  CHECK(mass(out, "B|C") == doctest::Approx(0.16));
  CHECK(out.focal().size() == 6);
}

TEST_CASE("DSm hybrid rule edge cases") {
  SUBCASE("free model: identical to the classic rule") {
    const fixtures::FiveAtoms f;
    const auto pair = f.pair();
    CHECK(max_abs_difference(dsm_hybrid(conjunctive(pair)), dsm_classic(pair)) == 0.0);
  }
  SUBCASE("exclusive frame, disjoint sources: mass on the union, none on I") {
    const auto f = Frame::build({"A", "B", "C"}, {Constraint::empty("A&B"), Constraint::empty("A&C"),
                                                  Constraint::empty("B&C")});
    const std::vector<Bba> pair{bba(f->free_model(), {{"A", 1.0}}), bba(f->free_model(), {{"B", 1.0}})};
    const auto out = dsm_hybrid(conjunctive(pair, f));
    CHECK(mass(out, "A|B") == 1.0);
    CHECK(mass(out, "I") == 0.0);
  }
  SUBCASE("a union that is itself empty falls back to I") {
    const auto f = Frame::build({"A", "B", "C"}, {Constraint::empty("A"), Constraint::empty("B")});
    const std::vector<Bba> pair{bba(f->free_model(), {{"A", 1.0}}), bba(f->free_model(), {{"B", 1.0}})};
    const auto out = dsm_hybrid(conjunctive(pair, f));
    CHECK(mass(out, "I") == 1.0);
  }
}

TEST_CASE("union target") {
  const auto f = Frame::build({"A", "B", "C"});
  auto term = [&](const char* x, const char* y) {
    return ProductTerm{{parse_expr(x, f), parse_expr(y, f)}, {0.5, 0.5}, 0.25};
  };
  auto target = [&](const char* x, const char* y) {
    const auto t = term(x, y);
    return union_target(t, set_intersect(t.focals[0], t.focals[1]));
  };
  CHECK(target("A", "B") == parse_expr("A|B", f));
  CHECK(target("A|B", "C") == parse_expr("A|B|C", f));
  // One focal element inside the other: the atoms it is made of.
  CHECK(target("A&C", "A") == parse_expr("A|C", f));
  CHECK(target("A", "A") == parse_expr("A", f));
}

TEST_CASE("PCR5") {
  SUBCASE("redistribution on a single cell") {
    const fixtures::FiveAtoms f;
    const auto pair = f.pair();
    const auto conj = conjunctive(pair, f.model);
    const auto& ac = conj.cells().at(parse_expr("A&C", f.free));
    double to_a = 0.0, to_c = 0.0;
    for (const auto& term : ac.terms) {
      for (const auto& s : pcr5_shares(term)) (s.element == parse_expr("A", f.free) ? to_a : to_c) += s.mass;
    }
    CHECK(to_a == doctest::Approx(0.107).epsilon(0.005));
    CHECK(to_c == doctest::Approx(0.063).epsilon(0.005));
    CHECK(to_a + to_c == doctest::Approx(0.17));
  }
  SUBCASE("two sources with A&B empty") {
    const fixtures::TwoSources t;
    const auto out = pcr5_pair(t.s1, t.s2, t.exclusive);
    CHECK(mass(out, "A") == doctest::Approx(0.356).epsilon(0.002));
    CHECK(mass(out, "B") == doctest::Approx(0.584).epsilon(0.002));
    CHECK(mass(out, "A|B") == doctest::Approx(0.06));
    CHECK(mass(out, "A&B") == 0.0);
    CHECK(out.total() == doctest::Approx(1.0));
  }
  SUBCASE("nothing to redistribute: the classic rule") {
    const fixtures::TwoSources t;
    const auto pair = t.pair();
    CHECK(max_abs_difference(pcr5_pair(t.s1, t.s2), dsm_classic(pair)) < 1e-15);
  }
  SUBCASE("custom predicate") {
    const fixtures::TwoSources t;
    const auto ab = parse_expr("A&B", t.free);
    const auto out = pcr5_pair(t.s1, t.s2, t.free, [&](const SetElement& c) { return c == ab; });
    CHECK(mass(out, "A") == doctest::Approx(0.356).epsilon(0.002));
  }
  SUBCASE("longer product terms are rejected") {
    const auto f = Frame::build({"A", "B"});
    const ProductTerm three{{f->atom(0), f->atom(1), f->atom(0)}, {1.0, 1.0, 1.0}, 1.0};
    CHECK_THROWS_AS(pcr5_shares(three), Error);
  }
}

TEST_CASE("Murphy's average") {
  const fixtures::TwoSources t;
  const auto pair = t.pair();
  const auto out = murphy_average(pair);
  CHECK(mass(out, "A") == doctest::Approx(0.30));
  CHECK(mass(out, "B") == doctest::Approx(0.45));
  CHECK(mass(out, "A|B") == doctest::Approx(0.25));
  CHECK(classify(out) == MassKind::Normalized);
  const std::vector<Bba> same{t.s1, t.s1};
  CHECK(max_abs_difference(murphy_average(same), t.s1) < 1e-15);
}

}  // TEST_SUITE
