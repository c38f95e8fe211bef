#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gen_terms.hpp"
#include "terms.hpp"

using namespace dl;

namespace {

TypeP B() { return tBool(); }
FormulaP bT() { return parseFormula("(inl (lift tt))"); }
FormulaP bF() { return parseFormula("(inr (lift tt))"); }
ElemP vTrue() { return eSumL(eLiftUp(eUnitBot())); }
ElemP vFalse() { return eSumR(eLiftUp(eUnitBot())); }

ElemP evalClosed(const std::string& text, const TypeP& ty, int k) {
  TermP m = parseTerm(text);
  typeOf(m, {}, ty);
  return evalTerm(m, ty, {}, {}, k);
}

}  // namespace

TEST_CASE("parsing renames binders apart") {
  TermP m = parseTerm("(lam x 1 (lam x 1 x))");
  CHECK(m->var != m->m1->var);
  CHECK(m->m1->m1->var == m->m1->var);  // inner x refers to inner binder
  CHECK_THROWS_AS(parseTerm("(lam x)"), ParseError);
  CHECK_THROWS_AS(parseTerm("(frob x y)"), ParseError);
  // round trip through print
  TermP n = parseTerm(m->print());
  CHECK(typeEq(typeOf(n), typeOf(m)));
}

TEST_CASE("typing: inference and rejection") {
  TypeP s = tLift(tUnit());
  CHECK(typeEq(typeOf(parseTerm("(lam x (lift 1) x)")), tFun(s, s)));
  CHECK(typeEq(typeOf(parseTerm("star")), tUnit()));
  CHECK(typeEq(typeOf(parseTerm("(pair star (up star))")), tProd(tUnit(), s)));
  CHECK(typeEq(typeOf(parseTerm("(app (lam x (lift 1) star) (up star))")), tUnit()));
  // injections need a target from the context
  CHECK_THROWS_AS(typeOf(parseTerm("(inl star)")), TypeError);
  CHECK(typeEq(typeOf(parseTerm("(inl (up star))"), {}, B()), B()));
  CHECK_THROWS_AS(typeOf(parseTerm("(app star star)")), TypeError);
  CHECK_THROWS_AS(typeOf(parseTerm("(app (lam x (lift 1) x) star)")), TypeError);
  // branches of a case must agree
  TypeCtx ctx{{"s", tSum(tUnit(), tUnit())}};
  CHECK_THROWS_AS(typeOf(parseTerm("(cases s x (up star) y star)"), ctx), TypeError);
  CHECK(typeEq(typeOf(parseTerm("(cases s x star y star)"), ctx), tUnit()));
  // recursion binds at its annotation type
  CHECK(typeEq(typeOf(parseTerm("(mu x (lift 1) x)")), s));
}

TEST_CASE("evaluation landmarks") {
  // divergence denotes bottom
  CHECK(isBottom(evalClosed("(mu x (+ (lift 1) (lift 1)) x)", B(), 5)));
  // lifting is observable even at rank 1
  ElemP up = evalClosed("(up star)", tLift(tUnit()), 1);
  CHECK(up->kind == EK::LiftUp);
  // the identity at B tabulates the rank-1 grid
  ElemP idB = evalClosed("(lam x (+ (lift 1) (lift 1)) x)", tFun(B(), B()), 2);
  CHECK(idB->kind == EK::StepFun);
  for (auto& a : enumerate(B(), 1)) {
    ElemP r = applyStep(idB, a);
    if (!r) r = bottom(B());
    CHECK(elemEq(r, a));
  }
  ElemP idB3 = evalClosed("(lam x (+ (lift 1) (lift 1)) x)", tFun(B(), B()), 3);
  for (auto& a : enumerate(B(), 2)) {
    ElemP r = applyStep(idB3, a);
    if (!r) r = bottom(B());
    CHECK(elemEq(r, a));
  }
  // cases is strict: both branches defined, scrutinee bottom
  TypeCtx ctx{{"s", B()}};
  TermP strict = parseTerm("(cases s x (up star) y (up star))");
  typeOf(strict, ctx);
  Env env{{"s", eSumBot()}};
  CHECK(isBottom(evalTerm(strict, tLift(tUnit()), ctx, env, 3)));
  env["s"] = vTrue();
  CHECK(evalTerm(strict, tLift(tUnit()), ctx, env, 3)->kind == EK::LiftUp);
  // liftlet is strict the same way
  TypeCtx ctx2{{"s", tLift(tUnit())}};
  TermP ll = parseTerm("(liftlet s x (up star))");
  typeOf(ll, ctx2);
  Env e2{{"s", eLiftBot()}};
  CHECK(isBottom(evalTerm(ll, tLift(tUnit()), ctx2, e2, 3)));
}

TEST_CASE("powerdomain operations on generator sets") {
  TypeP lb = tLower(B());
  TypeCtx ctx{{"t", B()}, {"f", B()}};
  Env env{{"t", vTrue()}, {"f", vFalse()}};
  auto evalAt = [&](const std::string& text, const TypeP& ty) {
    TermP m = parseTerm(text);
    typeOf(m, ctx, ty);
    return evalTerm(m, ty, ctx, env, 4);
  };
  // singleton, union, extension
  ElemP both = evalAt("(uplL (sglL t) (sglL f))", lb);
  CHECK(both->elems.size() == 2);
  ElemP ext = evalAt("(extL (uplL (sglL t) (sglL f)) x (sglL x))", lb);
  CHECK(elemEq(ext, both));
  // tensor pairs generators elementwise
  TypeP lp = tLower(tProd(B(), B()));
  ElemP ten = evalAt("(tenL (uplL (sglL t) (sglL f)) (sglL t))", lp);
  CHECK(ten->elems.size() == 2);
  for (auto& g : ten->elems) CHECK(elemEq(g->b, vTrue()));
  // upper mirror: union refines toward bottom
  TypeP ub = tUpper(B());
  ElemP uboth = evalAt("(uplU (sglU t) (sglU f))", ub);
  ElemP ut = evalAt("(sglU t)", ub);
  CHECK(leq(uboth, ut));
  CHECK_FALSE(leq(ut, uboth));
  // an injection in inferred position has no unique type
  CHECK_THROWS_AS(typeOf(parseTerm("(tenL (sglL (inl (up star))) (sglL t))"), ctx),
                  TypeError);
}

TEST_CASE("recursive values fold and unfold") {
  TypeP nat = parseType("(rec t (lift t))");
  ElemP two = evalClosed("(fold (up (fold (up (mu x (rec t (lift t)) x)))))", nat, 6);
  CHECK(two->kind == EK::FoldE);
  CHECK(two->a->kind == EK::LiftUp);
  ElemP one = evalClosed(
      "(app (lam n (rec t (lift t)) (unfold n)) (fold (up (mu x (rec t (lift t)) "
      "x))))",
      unfoldRec(nat), 6);
  CHECK(one->kind == EK::LiftUp);
  CHECK(isBottom(one->a));
  // the infinite unwinding stabilizes at the iteration limit, strictly above 0
  TermP omega = parseTerm("(mu x (rec t (lift t)) (fold (up x)))");
  typeOf(omega, {}, nat);
  ElemP w3 = evalTerm(omega, nat, {}, {}, 3);
  CHECK(leq(bottom(nat), w3));
  CHECK_FALSE(isBottom(w3));
}

TEST_CASE("evaluation grows with the rank budget") {
  gen::Rng rng(9001);
  int done = 0;
  while (done < 120) {
    TypeP ty = gen::randType(rng, 2);
    TermP m = gen::randTerm(rng, ty, {}, 2);
    try {
      typeOf(m, {}, ty);
      for (int k = 0; k < 3; k++) {
        ElemP lo = evalTerm(m, ty, {}, {}, k);
        ElemP hi = evalTerm(m, ty, {}, {}, k + 1);
        CHECK_MESSAGE(leq(lo, hi), m->print(), " shrank from rank ", k);
      }
    } catch (const RankExplosion&) {
      continue;
    }
    done++;
  }
}

TEST_CASE("applying an abstraction agrees with substitution") {
  gen::Rng rng(9002);
  int done = 0;
  while (done < 120) {
    TypeP ta = gen::randType(rng, 1);
    TypeP tb = gen::randType(rng, 1);
    std::string x = "arg";
    TypeCtx c2{{x, ta}};
    TermP body = gen::randTerm(rng, tb, c2, 2);
    TermP arg = gen::randTerm(rng, ta, {}, 2);
    TermP app = mApp(mLam(x, ta, body), arg);
    TermP red = substTerm(body, x, arg);
    try {
      typeOf(app, {}, tb);
      typeOf(red, {}, tb);
      ElemP va = evalTerm(app, tb, {}, {}, 3);
      ElemP vr = evalTerm(red, tb, {}, {}, 3);
      // both approximate the same value from below, so they are compatible
      CHECK_MESSAGE(join(va, vr).has_value(), "redex ", app->print(),
                    " clashes with its contractum");
      // and the redex stays below the body run directly on the argument value
      Env env{{x, evalTerm(arg, ta, {}, {}, 6)}};
      CHECK(leq(va, evalTerm(body, tb, c2, env, 6)));
    } catch (const RankExplosion&) {
      continue;
    }
    done++;
  }
}

TEST_CASE("assertion checking: direct cases") {
  Assumptions g;
  g.types["x"] = B();
  g.formulas["x"] = bT();
  CHECK(checkTerm(parseTerm("x"), B(), g, bT(), 3));
  CHECK_FALSE(checkTerm(parseTerm("x"), B(), g, bF(), 3));
  CHECK(checkTerm(parseTerm("x"), B(), g, fTop(), 3));
  // an unconstrained variable only supports tt
  Assumptions h;
  h.types["y"] = B();
  CHECK(checkTerm(parseTerm("y"), B(), h, fTop(), 3));
  CHECK_FALSE(checkTerm(parseTerm("y"), B(), h, bT(), 3));
  // contradictory assumptions validate anything
  Assumptions bad;
  bad.types["z"] = B();
  bad.formulas["z"] = fAnd2(bT(), bF());
  CHECK(checkTerm(parseTerm("z"), B(), bad, bF(), 3));
  // disjunctive assumption forces a case analysis
  Assumptions dis;
  dis.types["w"] = B();
  dis.formulas["w"] = fOr2(bT(), bF());
  CHECK(checkTerm(parseTerm("w"), B(), dis, fOr2(bT(), bF()), 3));
  CHECK_FALSE(checkTerm(parseTerm("w"), B(), dis, bT(), 3));
}

TEST_CASE("assertion checking matches the brute-force oracle") {
  gen::Rng rng(9003);
  int done = 0;
  while (done < 150) {
    TypeP tx = gen::randType(rng, 1);
    TypeP ty = gen::randType(rng, 1);
    FormulaP fx = gen::randFormulaAt(rng, tx, 3);
    TypeCtx ctx{{"x", tx}};
    TermP m = gen::randTerm(rng, ty, ctx, 2);
    FormulaP phi = gen::randFormulaAt(rng, ty, 3);
    Assumptions g;
    g.types = ctx;
    g.formulas["x"] = fx;
    int k = 3;
    bool dec, oracle = true;
    try {
      typeOf(m, ctx, ty);
      dec = checkTerm(m, ty, g, phi, k);
      for (auto& u : enumerate(tx, std::max(formulaRank(fx), 1))) {
        if (!satElem(u, fx, tx)) continue;
        Env env{{"x", u}};
        if (!satElem(evalTerm(m, ty, ctx, env, k), phi, ty)) {
          oracle = false;
          break;
        }
      }
    } catch (const RankExplosion&) {
      continue;
    } catch (const BlowupLimit&) {
      continue;
    }
    done++;
    CHECK_MESSAGE(dec == oracle, "check mismatch on ", m->print(), " |= ",
                  phi->print(), " with x : ", fx->print(), " at ", tx->print());
  }
}

TEST_CASE("checking is monotone in the rank budget") {
  gen::Rng rng(9004);
  int done = 0;
  while (done < 80) {
    TypeP ty = gen::randType(rng, 1);
    TermP m = gen::randTerm(rng, ty, {}, 2);
    FormulaP phi = gen::randFormulaAt(rng, ty, 3);
    try {
      typeOf(m, {}, ty);
      Assumptions none;
      for (int k = 1; k < 4; k++)
        if (checkTerm(m, ty, none, phi, k))
          CHECK_MESSAGE(checkTerm(m, ty, none, phi, k + 1),
                        "verdict for ", m->print(), " |= ", phi->print(),
                        " lost at rank ", k + 1);
    } catch (const RankExplosion&) {
      continue;
    } catch (const BlowupLimit&) {
      continue;
    }
    done++;
  }
}

TEST_CASE("morphism sorts") {
  TypeP s = tLift(tUnit());
  auto sortOf = [](const std::string& t) { return morphSort(parseMorph(t)); };
  auto [a1, b1] = sortOf("(id (lift 1))");
  CHECK(typeEq(a1, s));
  CHECK(typeEq(b1, s));
  auto [a2, b2] = sortOf("(ap (lift 1) 1)");
  CHECK(typeEq(a2, tProd(tFun(s, tUnit()), s)));
  CHECK(typeEq(b2, tUnit()));
  auto [a3, b3] = sortOf("(curry (q (lift 1) 1))");
  CHECK(typeEq(a3, s));
  CHECK(typeEq(b3, tFun(tUnit(), tUnit())));
  auto [a4, b4] = sortOf("(extl (sgll (lift 1)))");
  CHECK(typeEq(a4, tLower(s)));
  CHECK(typeEq(b4, tLower(s)));
  auto [a5, b5] = sortOf("(foldm (rec t (lift t)))");
  CHECK(typeEq(b5, parseType("(rec t (lift t))")));
  CHECK(typeEq(a5, tLift(parseType("(rec t (lift t))"))));
  CHECK_THROWS_AS(morphSort(parseMorph("(seq (one 1) (p 1 1))")), SortError);
  CHECK_THROWS_AS(morphSort(parseMorph("(extl (id 1))")), SortError);
}

TEST_CASE("translated morphisms have the right function type") {
  // the application combinator lands on the product-sorted function type
  TypeP s = B(), t = tLift(tUnit());
  MorphP ap = parseMorph("(ap " + s->print() + " " + t->print() + ")");
  CHECK(typeEq(typeOf(translateMorphism(ap)),
               tFun(tProd(tFun(s, t), s), t)));
  gen::Rng rng(9005);
  for (int i = 0; i < 150; i++) {
    MorphP f = gen::randMorph(rng, 2);
    auto [src, tgt] = morphSort(f);
    CHECK(typeEq(typeOf(translateMorphism(f)), tFun(src, tgt)));
  }
}

TEST_CASE("translations compute the intended functions") {
  auto applyM = [&](const std::string& mtext, const ElemP& u, int k) {
    MorphP f = parseMorph(mtext);
    auto [src, tgt] = morphSort(f);
    TermP t = translateMorphism(f);
    ElemP fn = evalTerm(t, tFun(src, tgt), {}, {}, k);
    ElemP r = applyStep(fn, u);
    return r ? r : bottom(tgt);
  };
  // projections
  CHECK(elemEq(applyM("(p (+ (lift 1) (lift 1)) 1)", ePair(vTrue(), eUnitBot()), 4),
               vTrue()));
  // application
  ElemP notF = eStepFun({{vTrue(), vFalse()}, {vFalse(), vTrue()}});
  CHECK(elemEq(applyM("(ap (+ (lift 1) (lift 1)) (+ (lift 1) (lift 1)))",
                      ePair(notF, vTrue()), 5),
               vFalse()));
  // injections are coalesced
  CHECK(applyM("(l (lift 1) 1)", eLiftUp(eUnitBot()), 4)->kind == EK::SumL);
  CHECK(applyM("(l (lift 1) 1)", eLiftBot(), 4)->kind == EK::SumBot);
  // lifting composes
  CHECK(applyM("(upm 1)", eUnitBot(), 4)->kind == EK::LiftUp);
  // strict cut-off: the composite tests convergence
  std::string conv = "(strictm (seq (one (+ (lift 1) (lift 1))) (upm 1)))";
  for (auto& u : enumerate(B(), 2)) {
    ElemP r = applyM(conv, u, 4);
    CHECK(isBottom(r) == isBottom(u));
  }
  // union of lower sets
  ElemP pr = ePair(eLowerSet({vTrue()}), eLowerSet({vFalse()}));
  ElemP un = applyM("(plusl (+ (lift 1) (lift 1)))", pr, 5);
  CHECK(un->elems.size() == 2);
}

TEST_CASE("precondition reasoning on morphisms") {
  std::string b = B()->print();
  auto H = [&](const std::string& f, const std::string& pre, const std::string& post,
               int k) {
    return hoare(parseMorph(f), parseFormula(pre), parseFormula(post), k);
  };
  CHECK(H("(id " + b + ")", "(inl (lift tt))", "(inl (lift tt))", 3));
  CHECK_FALSE(H("(id " + b + ")", "tt", "(inl (lift tt))", 3));
  CHECK(H("(p " + b + " " + b + ")", "(pair (inl (lift tt)) tt)", "(inl (lift tt))",
          4));
  CHECK(H("(one " + b + ")", "(inr (lift tt))", "tt", 3));
  // strictness: a terminating precondition survives the strict wrapper
  std::string convTest = "(strictm (seq (one " + b + ") (upm 1)))";
  CHECK(H(convTest, "(inl (lift tt))", "(lift tt)", 3));
  CHECK_FALSE(H(convTest, "tt", "(lift tt)", 3));
}

TEST_CASE("modal axioms for the derived operations") {
  // weakest preconditions computed semantically over the rank-3 grid
  auto weakest = [&](const std::string& mtext, const FormulaP& pre,
                     const FormulaP& post) {
    MorphP f = parseMorph(mtext);
    auto [src, tgt] = morphSort(f);
    TermP t = translateMorphism(f);
    ElemP fn = evalTerm(t, tFun(src, tgt), {}, {}, 5);
    for (auto& u : enumerate(src, 4)) {
      ElemP r = applyStep(fn, u);
      if (!r) r = bottom(tgt);
      if (satElem(u, pre, src) != satElem(r, post, tgt)) return false;
    }
    return true;
  };
  std::string b = B()->print();
  FormulaP phi = bT(), psi = bF();
  // union: a lower diamond splits across the components
  CHECK(weakest("(plusl " + b + ")",
                fOr2(fPair(fDia(phi), fTop()), fPair(fTop(), fDia(phi))),
                fDia(phi)));
  // union: an upper box must hold on both components
  CHECK(weakest("(plusu " + b + ")", fPair(fBox(phi), fBox(phi)), fBox(phi)));
  // tensor: diamonds and boxes distribute over the pairing
  CHECK(weakest("(tenl " + b + " " + b + ")", fPair(fDia(phi), fDia(psi)),
                fDia(fPair(phi, psi))));
  CHECK(weakest("(tenu " + b + " " + b + ")", fPair(fBox(phi), fBox(psi)),
                fBox(fPair(phi, psi))));
  // lifting: a terminating postcondition pulls back under the lift
  CHECK(weakest("(liftm (id " + b + "))", fLift(phi), phi));
  CHECK_FALSE(weakest("(liftm (id " + b + "))", fLift(fTop()), fTop()));
}
