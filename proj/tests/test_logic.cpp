#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gen.hpp"
#include "logic.hpp"

using namespace dl;

namespace {

TypeP B() { return tBool(); }

// (*)bot over the left summand: the defined truth values
FormulaP bT() { return parseFormula("(inl (lift tt))"); }
FormulaP bF() { return parseFormula("(inr (lift tt))"); }

}  // namespace

TEST_CASE("parsing and canonical forms") {
  CHECK(parseFormula("tt")->kind == FK::Top);
  CHECK(parseFormula("(and tt tt)")->kind == FK::Top);
  CHECK(parseFormula("(or ff ff)")->kind == FK::Bot);
  // flattening, sorting, dedup
  FormulaP f = parseFormula("(and (lift tt) (and (lift ff) (lift tt)))");
  CHECK(f->kind == FK::And);
  CHECK(f->kids.size() == 2);
  FormulaP g = parseFormula("(and (lift ff) (lift tt))");
  CHECK(formulaEq(f, g));
  CHECK_THROWS_AS(parseFormula("(box)"), ParseError);
  CHECK_THROWS_AS(parseFormula("(frob tt)"), ParseError);
}

TEST_CASE("formation rules by type") {
  CHECK(wellFormed(parseFormula("(pair tt ff)"), tProd(tUnit(), tUnit())));
  CHECK_FALSE(wellFormed(parseFormula("(pair tt ff)"), tUnit()));
  CHECK(wellFormed(bT(), B()));
  CHECK_FALSE(wellFormed(parseFormula("(box tt)"), tLower(tUnit())));
  // formulas at a recursive type are formulas of the unfolding
  TypeP d = parseType("(rec t (lift t))");
  CHECK(wellFormed(parseFormula("(lift (lift tt))"), d));
  CHECK_FALSE(wellFormed(parseFormula("(inl tt)"), d));
}

TEST_CASE("prime shape recognition") {
  CHECK(isPNF(parseFormula("tt")));
  CHECK_FALSE(isPNF(parseFormula("ff")));
  CHECK_FALSE(isPNF(parseFormula("(or (lift tt) (lift ff))")));
  CHECK(isPNF(parseFormula("(box (or (lift tt) tt))")));
  CHECK(isPNF(parseFormula("(dia (or tt tt))")));  // collapses to (dia tt), prime
  CHECK_FALSE(isPNF(parseFormula("(dia (or (lift tt) (lift ff)))")));
  CHECK(isPNF(parseFormula("(arrow (lift tt) (lift tt))")));
  CHECK_FALSE(isPNF(parseFormula("(arrow (or (lift tt) (lift ff)) tt)")));
}

TEST_CASE("consistency and termination tables on landmarks") {
  // true and false are consistent, terminating, and jointly inconsistent
  CHECK(conC(bT(), B()));
  CHECK(termT(bT(), B()));
  CHECK(conC(bF(), B()));
  FormulaP both = fAnd2(bT(), bF());
  CHECK(isPNF(both));
  CHECK_FALSE(conC(both, B()));
  // mixed sum conjunction with a non-terminating side stays consistent
  FormulaP loose = fAnd2(fInL(fTop()), fInR(fTop()));
  CHECK(conC(loose, B()));
  CHECK_FALSE(termT(loose, B()));
  // box of empty disjunction is inconsistent in the upper powerdomain
  CHECK_FALSE(conC(parseFormula("(box ff)"), tUpper(B())));
  CHECK(conC(parseFormula("(dia tt)"), tLower(B())));
  CHECK_FALSE(termT(parseFormula("(dia tt)"), tLower(B())));
  CHECK(termT(parseFormula("(lift tt)"), tLift(tUnit())));
}

TEST_CASE("meta flags match the element-level oracle on random primes") {
  gen::Rng rng(101);
  int done = 0;
  while (done < 300) {
    TypeP t = gen::randType(rng, 2);
    FormulaP f = gen::randPNFAt(rng, t, 2);
    if (!isPNF(f)) continue;
    done++;
    bool c, tm;
    try {
      c = conC(f, t);
      tm = termT(f, t);
    } catch (const BlowupLimit&) {
      continue;
    }
    bool nonempty = false;
    for (auto& u : enumerate(t, formulaRank(f)))
      if (satElem(u, f, t)) {
        nonempty = true;
        break;
      }
    CHECK_MESSAGE(c == nonempty, "C mismatch on ", f->print(), " at ", t->print());
    bool botIn = satElem(bottom(t), f, t);
    CHECK_MESSAGE(tm == !botIn, "T mismatch on ", f->print(), " at ", t->print());
  }
}

TEST_CASE("normal form is semantically equivalent to its source") {
  gen::Rng rng(202);
  int done = 0;
  while (done < 200) {
    TypeP t = gen::randType(rng, 2);
    FormulaP f = gen::randFormulaAt(rng, t, 6);
    std::vector<FormulaP> ds;
    try {
      ds = toCDNF(f, t);
    } catch (const BlowupLimit&) {
      continue;
    }
    done++;
    for (auto& d : ds) {
      CHECK(isPNF(d));
      CHECK(conC(d, t));
    }
    FormulaP back = fOr(ds);
    for (auto& u : enumerate(t, formulaRank(f) + 1))
      CHECK_MESSAGE(satElem(u, f, t) == satElem(u, back, t),
                    "CDNF changed meaning of ", f->print(), " at ", t->print(),
                    " for ", u->print());
  }
}

TEST_CASE("prime-to-element map realizes the denotation") {
  gen::Rng rng(303);
  int done = 0;
  while (done < 200) {
    TypeP t = gen::randType(rng, 2);
    FormulaP f = gen::randPNFAt(rng, t, 2);
    if (!isPNF(f)) continue;
    bool c;
    try {
      c = conC(f, t);
    } catch (const BlowupLimit&) {
      continue;
    }
    if (!c) continue;
    done++;
    ElemP u = squigElem(f, t);
    CHECK_MESSAGE(satElem(u, f, t), "squig of ", f->print(), " fails its formula");
    // principality: everything satisfying f sits above u
    for (auto& v : enumerate(t, formulaRank(f)))
      if (satElem(v, f, t))
        CHECK_MESSAGE(leq(u, v), f->print(), ": ", v->print(), " not above ",
                      u->print());
  }
}

TEST_CASE("entailment agrees with the semantic oracle") {
  gen::Rng rng(404);
  int done = 0;
  while (done < 300) {
    TypeP t = gen::randType(rng, 2);
    FormulaP f = gen::randFormulaAt(rng, t, 6);
    FormulaP g = gen::randFormulaAt(rng, t, 6);
    bool dec;
    try {
      dec = entails(f, g, t);
    } catch (const BlowupLimit&) {
      continue;
    }
    done++;
    CHECK_MESSAGE(dec == gen::semanticEntails(f, g, t), "entails mismatch: ",
                  f->print(), " <= ", g->print(), " at ", t->print());
  }
}

TEST_CASE("lattice and type axioms hold as equivalences") {
  gen::Rng rng(505);
  auto equiv = [&](const FormulaP& x, const FormulaP& y, const TypeP& t) {
    return entails(x, y, t) && entails(y, x, t);
  };
  for (int i = 0; i < 40; i++) {
    TypeP a = gen::randType(rng, 1), b = gen::randType(rng, 1);
    FormulaP p = gen::randFormulaAt(rng, a, 4);
    FormulaP q = gen::randFormulaAt(rng, a, 4);
    FormulaP q2 = gen::randFormulaAt(rng, a, 4);
    FormulaP r = gen::randFormulaAt(rng, b, 4);
    // distribution of meet over join
    CHECK(equiv(fAnd2(p, fOr2(q, q2)), fOr2(fAnd2(p, q), fAnd2(p, q2)), a));
    // product: conjunction slides through pairing
    TypeP prod = tProd(a, b);
    FormulaP s = gen::randFormulaAt(rng, b, 4);
    CHECK(equiv(fAnd2(fPair(p, r), fPair(q, s)), fPair(fAnd2(p, q), fAnd2(r, s)),
                prod));
    // lifting: conjunction slides through lift
    TypeP lf = tLift(a);
    CHECK(equiv(fAnd2(fLift(p), fLift(q)), fLift(fAnd2(p, q)), lf));
    // box: conjunction slides through box; diamond: disjunction through diamond
    CHECK(equiv(fAnd2(fBox(p), fBox(q)), fBox(fAnd2(p, q)), tUpper(a)));
    CHECK(equiv(fOr2(fDia(p), fDia(q)), fDia(fOr2(p, q)), tLower(a)));
    CHECK(equiv(fBox(fBot()), fBot(), tUpper(a)));
    CHECK(equiv(fDia(fTop()), fTop(), tLower(a)));
  }
}

TEST_CASE("minimal satisfiers are correct and minimal") {
  gen::Rng rng(606);
  int done = 0;
  while (done < 150) {
    TypeP t = gen::randType(rng, 2);
    FormulaP f = gen::randFormulaAt(rng, t, 6);
    std::vector<ElemP> ms;
    try {
      ms = minsat(f, t);
    } catch (const BlowupLimit&) {
      continue;
    }
    done++;
    for (auto& u : ms) CHECK(satElem(u, f, t));
    for (size_t i = 0; i < ms.size(); i++)
      for (size_t j = 0; j < ms.size(); j++)
        if (i != j) CHECK_FALSE(leq(ms[i], ms[j]));
    for (auto& v : enumerate(t, formulaRank(f)))
      if (satElem(v, f, t)) {
        bool above = false;
        for (auto& u : ms)
          if (leq(u, v)) {
            above = true;
            break;
          }
        CHECK_MESSAGE(above, "satisfier ", v->print(), " missed by minsat of ",
                      f->print());
      }
  }
}

TEST_CASE("parallel-or assertion at the function type") {
  TypeP por = tFun(tProd(B(), B()), B());
  FormulaP phi = fAnd({fArrow(fPair(bT(), fTop()), bT()),
                       fArrow(fPair(fTop(), bT()), bT()),
                       fArrow(fPair(bF(), bF()), bF())});
  CHECK(isPNF(phi));
  CHECK(conC(phi, por));
  ElemP e = squigElem(phi, por);
  CHECK(satElem(e, phi, por));
  // the strengthened strict variant fails on the canonical element
  FormulaP strict1 = fArrow(fPair(fTop(), fTop()), bT());
  CHECK_FALSE(satElem(e, strict1, por));
}

TEST_CASE("wide arrow conjunctions hit the subset cap") {
  TypeP t = tFun(tProd(B(), tProd(B(), B())), B());
  std::vector<FormulaP> atoms;
  std::vector<FormulaP> vals = {bT(), bF(), fTop()};
  for (int i = 0; i < 27; i++) {
    FormulaP arg = fPair(vals[i % 3], fPair(vals[(i / 3) % 3], vals[(i / 9) % 3]));
    atoms.push_back(fArrow(arg, fTop()));
  }
  FormulaP wide = fAnd(atoms);
  REQUIRE(conjuncts(wide).size() > 16);
  CHECK_THROWS_AS(conC(wide, t), BlowupLimit);
}
