// SCCS terms: operational steps, denotations into the tree domain,
// approximants, and the full-abstraction cross-check.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gen_sccs.hpp"
#include "sccs.hpp"

using namespace dl;

namespace {

ActMonoid freeAB() { return ActMonoid::freeOn({"a", "b"}); }

// reachable transition system of a closed term
Lts explore(const SccsP& t, const ActMonoid& m, int fuel) {
  Lts l;
  std::vector<SccsP> todo = {t};
  std::set<std::string> done;
  while (!todo.empty()) {
    SccsP cur = todo.back();
    todo.pop_back();
    std::string name = cur->print();
    if (!done.insert(name).second) continue;
    l.addState(name);
    Steps s = transitions(cur, m, fuel);
    REQUIRE(s.complete);
    REQUIRE(s.div != Tri::Unknown);
    if (s.div == Tri::Yes) l.divSet.insert(name);
    for (auto& [a, u] : s.steps) {
      l.addTrans(name, a, u->print());
      todo.push_back(u);
    }
  }
  return l;
}

}  // namespace

TEST_CASE("action monoids") {
  ActMonoid f = freeAB();
  CHECK(f.mul("a", "b") == "a.b");
  CHECK(f.mul("b", "a") == "a.b");
  CHECK(f.mul("a.b", "a") == "a.a.b");
  CHECK(f.mul("1", "a") == "a");
  CHECK(f.mul("1", "1") == "1");
  CHECK(f.has("a.a.b"));
  CHECK(!f.has("c"));

  ActMonoid z2 = ActMonoid::parse(
      "monoid table\nelems 1 a\nunit 1\nprod a a 1\n");
  CHECK(z2.mul("a", "a") == "1");
  CHECK(z2.mul("1", "a") == "a");
  CHECK_THROWS_AS(ActMonoid::parse("monoid table\nelems 1 a b\nunit 1\n"
                                   "prod a a 1\nprod a b a\nprod b a b\n"
                                   "prod b b 1\n"),
                  ParseError);
  CHECK_THROWS_AS(ActMonoid::parse("monoid table\nelems 1 a b\nunit 1\n"
                                   "prod a a 1\n"),
                  ParseError);
  ActMonoid g = ActMonoid::parse("monoid free a b c");
  CHECK(g.gens.size() == 3);
}

TEST_CASE("term parsing") {
  ActMonoid m = freeAB();
  SccsP t = parseSccs(
      "(plus (pre a (times O Omega)) (restrict (relabel (rec x (pre b x)) "
      "((a b))) (a a.b)))",
      m);
  CHECK(parseSccs(t->print(), m)->print() == t->print());
  CHECK(sccsClosed(t));
  CHECK(!sccsClosed(parseSccs("(pre a y)", m)));
  CHECK_THROWS_AS(parseSccs("(pre c O)", m), ParseError);
  CHECK_THROWS_AS(parseSccs("(relabel O ((a.b a)))", m), ParseError);
  ActMonoid z2 = ActMonoid::parse("monoid table\nelems 1 a\nunit 1\nprod a a 1\n");
  CHECK_THROWS_AS(parseSccs("(relabel O ((1 a) (a 1)))", z2), ParseError);
  CHECK(parseSccs("(relabel O ((1 1) (a 1)))", z2) != nullptr);
}

TEST_CASE("operational steps") {
  ActMonoid m = freeAB();
  Steps s = transitions(parseSccs("(pre a O)", m), m, 8);
  CHECK(s.div == Tri::No);
  REQUIRE(s.steps.size() == 1);
  CHECK(s.steps[0].first == "a");
  CHECK(s.steps[0].second->print() == "O");

  s = transitions(parseSccs("(times (pre a O) (pre b O))", m), m, 8);
  REQUIRE(s.steps.size() == 1);
  CHECK(s.steps[0].first == "a.b");
  CHECK(s.steps[0].second->print() == "(times O O)");

  s = transitions(sOmega(), m, 8);
  CHECK(s.div == Tri::Yes);
  CHECK(s.steps.empty());

  s = transitions(parseSccs("(restrict (plus (pre a O) (pre b O)) (a))", m), m, 8);
  REQUIRE(s.steps.size() == 1);
  CHECK(s.steps[0].first == "a");

  s = transitions(parseSccs("(relabel (pre a O) ((a b)))", m), m, 8);
  CHECK(s.steps[0].first == "b");

  // duplicate summands collapse
  s = transitions(parseSccs("(plus (pre a O) (pre a O))", m), m, 8);
  CHECK(s.steps.size() == 1);

  SccsP loop = parseSccs("(rec x (pre a x))", m);
  s = transitions(loop, m, 8);
  CHECK(s.div == Tri::No);
  CHECK(s.complete);
  REQUIRE(s.steps.size() == 1);
  CHECK(s.steps[0].second->print() == loop->print());

  s = transitions(parseSccs("(rec x x)", m), m, 8);
  CHECK(s.div == Tri::Yes);

  // unguarded recursion through relabelling never settles
  s = transitions(parseSccs("(rec x (plus (relabel x ((a b))) (pre a O)))", m),
                  m, 8);
  CHECK(!s.complete);
}

TEST_CASE("step characterisations on random terms") {
  ActMonoid m = freeAB();
  gen::Rng rng(7301);
  for (int i = 0; i < 120; i++) {
    SccsP t1 = gen::randSccsTerm(rng, m, 3);
    SccsP t2 = gen::randSccsTerm(rng, m, 3);
    Steps s1 = transitions(t1, m, 8), s2 = transitions(t2, m, 8);

    Steps sp = transitions(sPlus(t1, t2), m, 8);
    CHECK((sp.div == Tri::Yes) == (s1.div == Tri::Yes || s2.div == Tri::Yes));
    CHECK(sp.steps.size() <= s1.steps.size() + s2.steps.size());
    for (auto& [a, u] : s1.steps) {
      bool found = false;
      for (auto& [b, v] : sp.steps)
        found = found || (a == b && u->print() == v->print());
      CHECK(found);
    }

    Steps st = transitions(sTimes(t1, t2), m, 8);
    CHECK((st.div == Tri::Yes) == (s1.div == Tri::Yes || s2.div == Tri::Yes));
    for (auto& [a, u] : s1.steps)
      for (auto& [b, v] : s2.steps) {
        bool found = false;
        for (auto& [c, w] : st.steps)
          found = found || (c == m.mul(a, b) &&
                            w->print() == sTimes(u, v)->print());
        CHECK(found);
      }

    std::set<std::string> A = {"a"};
    Steps sr = transitions(sRestrict(t1, A), m, 8);
    CHECK(sr.div == s1.div);
    size_t kept = 0;
    for (auto& [a, u] : s1.steps)
      if (A.count(a)) kept++;
    CHECK(sr.steps.size() == kept);
  }
}

TEST_CASE("denotation landmarks") {
  ActMonoid m = freeAB();
  CHECK(procElemEq(denoteSccs(sO(), m, 3), peEmpty()));
  CHECK(procElemEq(denoteSccs(sOmega(), m, 3), peBottom()));
  PEP d = denoteSccs(parseSccs("(restrict (plus (pre a O) (pre b O)) (a))", m),
                     m, 3);
  CHECK(!d->divergent);
  REQUIRE(d->caps.size() == 1);
  CHECK(d->caps[0].first == "a");
  CHECK(procElemEq(d->caps[0].second, peEmpty()));
  PEP loop = denoteSccs(parseSccs("(rec x (pre a x))", m), m, 3);
  CHECK(!loop->divergent);
  REQUIRE(loop->caps.size() == 1);
  CHECK(loop->caps[0].first == "a");
}

TEST_CASE("denotation matches the operational tree for finite terms") {
  ActMonoid m = freeAB();
  gen::Rng rng(7302);
  for (int i = 0; i < 150; i++) {
    SccsP t = gen::randSccsTerm(rng, m, 4);
    int h = sccsHeight(t);
    Lts l = explore(t, m, h + 1);
    CHECK(procElemEq(denoteSccs(t, m, h), universalSem(l, t->print(), h)));
    // finite terms are fully resolved at their height
    CHECK(procElemEq(denoteSccs(t, m, h), denoteSccs(t, m, h + 1)));
  }
}

TEST_CASE("syntactic approximants") {
  ActMonoid m = freeAB();
  SccsP loop = parseSccs("(rec x (pre a x))", m);
  std::vector<SccsP> as = approximants(loop, 2);
  REQUIRE(as.size() == 3);
  CHECK(as[0]->print() == "Omega");
  CHECK(as[1]->print() == "(pre a Omega)");
  CHECK(as[2]->print() == "(pre a (pre a Omega))");
  as = approximants(sO(), 5);
  REQUIRE(as.size() == 1);
  CHECK(as[0]->print() == "O");

  gen::Rng rng(7303);
  for (int i = 0; i < 60; i++) {
    SccsP t = gen::randGuardedRec(rng, m);
    int k = 3;
    std::vector<PEP> dens;
    for (auto& ap : approximants(t, k + 1)) dens.push_back(denoteSccs(ap, m, k));
    PEP full = denoteSccs(t, m, k);
    // a chain of approximations from below, exhausted at depth k
    PEP best = peBottom();
    for (auto& d : dens) {
      CHECK(leqProc(d, full));
      CHECK((leqProc(best, d) || leqProc(d, best)));
      if (leqProc(best, d)) best = d;
    }
    CHECK(procElemEq(best, full));
  }
}

TEST_CASE("bisimulation between terms") {
  ActMonoid m = freeAB();
  SccsP aO = parseSccs("(pre a O)", m);
  BisimVerdict v = bisimTerms(parseSccs("(plus (pre a O) (pre a O))", m), aO, m, 8);
  CHECK(v.definite);
  CHECK(v.leq12);
  CHECK(v.leq21);
  v = bisimTerms(sOmega(), sO(), m, 8);
  CHECK(v.definite);
  CHECK(v.leq12);
  CHECK(!v.leq21);
  SccsP loop = parseSccs("(rec x (pre a x))", m);
  v = bisimTerms(loop, parseSccs("(pre a (rec x (pre a x)))", m), m, 8);
  CHECK(v.definite);
  CHECK(v.leq12);
  CHECK(v.leq21);
  v = bisimTerms(parseSccs("(rec x (plus (relabel x ((a b))) (pre a O)))", m),
                 aO, m, 6);
  CHECK(!v.definite);
}

TEST_CASE("operational and denotational preorders agree on finite terms") {
  ActMonoid m = freeAB();
  FaReport r = fullAbstractionReport(parseSccs("(plus (pre a O) (pre b O))", m),
                                     parseSccs("(plus (pre b O) (pre a O))", m), m);
  CHECK(r.agree);
  CHECK(r.opLeq12);
  CHECK(r.opLeq21);
  r = fullAbstractionReport(sOmega(), sO(), m);
  CHECK(r.agree);
  CHECK(r.denLeq12);
  CHECK(!r.denLeq21);

  gen::Rng rng(7304);
  for (int i = 0; i < 200; i++) {
    SccsP t1 = gen::randSccsTerm(rng, m, 4);
    SccsP t2 = gen::randSccsTerm(rng, m, 4);
    FaReport rr = fullAbstractionReport(t1, t2, m);
    CHECK(rr.agree);
  }
}
