#include "terms.hpp"

#include <functional>

namespace dl {

namespace {

TermP mkT(MK k) {
  auto t = std::make_shared<Term>();
  const_cast<Term&>(*t).kind = k;
  return t;
}

Term& mut(const TermP& t) { return const_cast<Term&>(*t); }

}  // namespace

TermP mVar(const std::string& x) {
  auto t = mkT(MK::Var);
  mut(t).var = x;
  return t;
}
TermP mStar() { return mkT(MK::Star); }
TermP mPair(TermP a, TermP b) {
  auto t = mkT(MK::Pair);
  mut(t).m1 = std::move(a);
  mut(t).m2 = std::move(b);
  return t;
}
TermP mLetPair(TermP m, const std::string& x, const std::string& y, TermP body) {
  auto t = mkT(MK::LetPair);
  mut(t).m1 = std::move(m);
  mut(t).var = x;
  mut(t).var2 = y;
  mut(t).m2 = std::move(body);
  return t;
}
TermP mLam(const std::string& x, TypeP ty, TermP body) {
  auto t = mkT(MK::Lam);
  mut(t).var = x;
  mut(t).ann = std::move(ty);
  mut(t).m1 = std::move(body);
  return t;
}
TermP mApp(TermP f, TermP a) {
  auto t = mkT(MK::App);
  mut(t).m1 = std::move(f);
  mut(t).m2 = std::move(a);
  return t;
}
TermP mInjL(TermP m, TypeP sumAnn) {
  auto t = mkT(MK::InjL);
  mut(t).m1 = std::move(m);
  mut(t).ann = std::move(sumAnn);
  return t;
}
TermP mInjR(TermP m, TypeP sumAnn) {
  auto t = mkT(MK::InjR);
  mut(t).m1 = std::move(m);
  mut(t).ann = std::move(sumAnn);
  return t;
}
TermP mCases(TermP s, const std::string& x, TermP l, const std::string& y, TermP r) {
  auto t = mkT(MK::Cases);
  mut(t).m1 = std::move(s);
  mut(t).var = x;
  mut(t).m2 = std::move(l);
  mut(t).var2 = y;
  mut(t).m3 = std::move(r);
  return t;
}
TermP mUp(TermP m) {
  auto t = mkT(MK::Up);
  mut(t).m1 = std::move(m);
  return t;
}
TermP mLiftLet(TermP m, const std::string& x, TermP body) {
  auto t = mkT(MK::LiftLet);
  mut(t).m1 = std::move(m);
  mut(t).var = x;
  mut(t).m2 = std::move(body);
  return t;
}
namespace {
TermP unary(MK k, TermP m) {
  auto t = mkT(k);
  mut(t).m1 = std::move(m);
  return t;
}
TermP binderOp(MK k, TermP m, const std::string& x, TermP body) {
  auto t = mkT(k);
  mut(t).m1 = std::move(m);
  mut(t).var = x;
  mut(t).m2 = std::move(body);
  return t;
}
TermP binOp(MK k, TermP a, TermP b) {
  auto t = mkT(k);
  mut(t).m1 = std::move(a);
  mut(t).m2 = std::move(b);
  return t;
}
}  // namespace
TermP mSglL(TermP m) { return unary(MK::SglL, std::move(m)); }
TermP mSglU(TermP m) { return unary(MK::SglU, std::move(m)); }
TermP mExtL(TermP m, const std::string& x, TermP b) {
  return binderOp(MK::ExtL, std::move(m), x, std::move(b));
}
TermP mExtU(TermP m, const std::string& x, TermP b) {
  return binderOp(MK::ExtU, std::move(m), x, std::move(b));
}
TermP mUplL(TermP a, TermP b) { return binOp(MK::UplL, std::move(a), std::move(b)); }
TermP mUplU(TermP a, TermP b) { return binOp(MK::UplU, std::move(a), std::move(b)); }
TermP mTenL(TermP a, TermP b) { return binOp(MK::TenL, std::move(a), std::move(b)); }
TermP mTenU(TermP a, TermP b) { return binOp(MK::TenU, std::move(a), std::move(b)); }
TermP mFold(TermP m, TypeP recAnn) {
  auto t = unary(MK::Fold, std::move(m));
  mut(t).ann = std::move(recAnn);
  return t;
}
TermP mUnfold(TermP m) { return unary(MK::Unfold, std::move(m)); }
TermP mMu(const std::string& x, TypeP ty, TermP body) {
  auto t = mkT(MK::Mu);
  mut(t).var = x;
  mut(t).ann = std::move(ty);
  mut(t).m1 = std::move(body);
  return t;
}

std::string Term::print() const {
  switch (kind) {
    case MK::Var: return var;
    case MK::Star: return "star";
    case MK::Pair: return "(pair " + m1->print() + " " + m2->print() + ")";
    case MK::LetPair:
      return "(letp " + m1->print() + " " + var + " " + var2 + " " + m2->print() + ")";
    case MK::Lam:
      return "(lam " + var + " " + ann->print() + " " + m1->print() + ")";
    case MK::App: return "(app " + m1->print() + " " + m2->print() + ")";
    case MK::InjL: return "(inl " + m1->print() + ")";
    case MK::InjR: return "(inr " + m1->print() + ")";
    case MK::Cases:
      return "(cases " + m1->print() + " " + var + " " + m2->print() + " " + var2 +
             " " + m3->print() + ")";
    case MK::Up: return "(up " + m1->print() + ")";
    case MK::LiftLet:
      return "(liftlet " + m1->print() + " " + var + " " + m2->print() + ")";
    case MK::SglL: return "(sglL " + m1->print() + ")";
    case MK::SglU: return "(sglU " + m1->print() + ")";
    case MK::ExtL:
      return "(extL " + m1->print() + " " + var + " " + m2->print() + ")";
    case MK::ExtU:
      return "(extU " + m1->print() + " " + var + " " + m2->print() + ")";
    case MK::UplL: return "(uplL " + m1->print() + " " + m2->print() + ")";
    case MK::UplU: return "(uplU " + m1->print() + " " + m2->print() + ")";
    case MK::TenL: return "(tenL " + m1->print() + " " + m2->print() + ")";
    case MK::TenU: return "(tenU " + m1->print() + " " + m2->print() + ")";
    case MK::Fold: return "(fold " + m1->print() + ")";
    case MK::Unfold: return "(unfold " + m1->print() + ")";
    case MK::Mu:
      return "(mu " + var + " " + ann->print() + " " + m1->print() + ")";
  }
  return "?";
}

namespace {

int g_varCounter = 0;

std::string freshVar(const std::string& base) {
  return base + "%" + std::to_string(g_varCounter++);
}

TermP parseTermIn(const Sexpr& e, std::map<std::string, std::string>& ren) {
  if (e.atom) {
    if (e.sym == "star") return mStar();
    auto it = ren.find(e.sym);
    return mVar(it == ren.end() ? e.sym : it->second);
  }
  if (e.items.empty() || !e.items[0].atom) throw ParseError("bad term: " + e.print());
  const std::string& h = e.items[0].sym;
  auto arity = [&](size_t n) {
    if (e.items.size() != n + 1)
      throw ParseError("bad arity for " + h + " in term: " + e.print());
  };
  auto withBinder = [&](const Sexpr& binder, const Sexpr& body,
                        const std::function<TermP(const std::string&, TermP)>& k) {
    if (!binder.atom) throw ParseError("binder must be an atom: " + binder.print());
    std::string fresh = freshVar(binder.sym);
    auto saved = ren;
    ren[binder.sym] = fresh;
    TermP b = parseTermIn(body, ren);
    ren = saved;
    return k(fresh, b);
  };
  if (h == "lam") {
    arity(3);
    TypeP ty = parseType(e[2]);
    return withBinder(e[1], e[3],
                      [&](const std::string& x, TermP b) { return mLam(x, ty, b); });
  }
  if (h == "app") {
    arity(2);
    return mApp(parseTermIn(e[1], ren), parseTermIn(e[2], ren));
  }
  if (h == "pair") {
    arity(2);
    return mPair(parseTermIn(e[1], ren), parseTermIn(e[2], ren));
  }
  if (h == "letp") {
    arity(4);
    TermP m = parseTermIn(e[1], ren);
    if (!e[2].atom || !e[3].atom) throw ParseError("letp binders must be atoms");
    std::string fx = freshVar(e[2].sym), fy = freshVar(e[3].sym);
    auto saved = ren;
    ren[e[2].sym] = fx;
    ren[e[3].sym] = fy;
    TermP body = parseTermIn(e[4], ren);
    ren = saved;
    return mLetPair(m, fx, fy, body);
  }
  if (h == "inl") {
    arity(1);
    return mInjL(parseTermIn(e[1], ren));
  }
  if (h == "inr") {
    arity(1);
    return mInjR(parseTermIn(e[1], ren));
  }
  if (h == "cases") {
    arity(5);
    TermP s = parseTermIn(e[1], ren);
    if (!e[2].atom || !e[4].atom) throw ParseError("cases binders must be atoms");
    std::string fx = freshVar(e[2].sym), fy = freshVar(e[4].sym);
    auto saved = ren;
    ren[e[2].sym] = fx;
    TermP l = parseTermIn(e[3], ren);
    ren = saved;
    ren[e[4].sym] = fy;
    TermP r = parseTermIn(e[5], ren);
    ren = saved;
    return mCases(s, fx, l, fy, r);
  }
  if (h == "up") {
    arity(1);
    return mUp(parseTermIn(e[1], ren));
  }
  if (h == "liftlet" || h == "extL" || h == "extU") {
    arity(3);
    TermP m = parseTermIn(e[1], ren);
    if (!e[2].atom) throw ParseError(h + " binder must be an atom");
    std::string fx = freshVar(e[2].sym);
    auto saved = ren;
    ren[e[2].sym] = fx;
    TermP body = parseTermIn(e[3], ren);
    ren = saved;
    if (h == "liftlet") return mLiftLet(m, fx, body);
    if (h == "extL") return mExtL(m, fx, body);
    return mExtU(m, fx, body);
  }
  if (h == "sglL") {
    arity(1);
    return mSglL(parseTermIn(e[1], ren));
  }
  if (h == "sglU") {
    arity(1);
    return mSglU(parseTermIn(e[1], ren));
  }
  if (h == "uplL" || h == "uplU" || h == "tenL" || h == "tenU") {
    arity(2);
    TermP a = parseTermIn(e[1], ren), b = parseTermIn(e[2], ren);
    if (h == "uplL") return mUplL(a, b);
    if (h == "uplU") return mUplU(a, b);
    if (h == "tenL") return mTenL(a, b);
    return mTenU(a, b);
  }
  if (h == "fold") {
    arity(1);
    return mFold(parseTermIn(e[1], ren));
  }
  if (h == "unfold") {
    arity(1);
    return mUnfold(parseTermIn(e[1], ren));
  }
  if (h == "mu") {
    arity(3);
    TypeP ty = parseType(e[2]);
    return withBinder(e[1], e[3],
                      [&](const std::string& x, TermP b) { return mMu(x, ty, b); });
  }
  throw ParseError("unknown term constructor: " + h);
}

}  // namespace

TermP parseTerm(const Sexpr& e) {
  std::map<std::string, std::string> ren;
  return parseTermIn(e, ren);
}
TermP parseTerm(const std::string& text) { return parseTerm(parseSexpr(text)); }

namespace {

TypeP needKind(const TypeP& t, TK k, const std::string& where) {
  if (t->kind != k) throw TypeError(where + ": unexpected type " + t->print());
  return t;
}

void matchExpected(const TypeP& got, const TypeP& expected, const Term& m) {
  if (expected && !typeEq(got, expected))
    throw TypeError("term " + m.print() + " has type " + got->print() +
                    " but context expects " + expected->print());
}

}  // namespace

TypeP typeOf(const TermP& m, const TypeCtx& ctx, const TypeP& expected) {
  auto ret = [&](const TypeP& t) {
    matchExpected(t, expected, *m);
    return t;
  };
  switch (m->kind) {
    case MK::Var: {
      auto it = ctx.find(m->var);
      if (it == ctx.end()) throw TypeError("unbound variable " + m->var);
      return ret(it->second);
    }
    case MK::Star: return ret(tUnit());
    case MK::Pair: {
      TypeP ea, eb;
      if (expected) {
        needKind(expected, TK::Prod, "pair");
        ea = expected->a;
        eb = expected->b;
      }
      return ret(tProd(typeOf(m->m1, ctx, ea), typeOf(m->m2, ctx, eb)));
    }
    case MK::LetPair: {
      TypeP ts = needKind(typeOf(m->m1, ctx), TK::Prod, "letp");
      TypeCtx c2 = ctx;
      c2[m->var] = ts->a;
      c2[m->var2] = ts->b;
      return ret(typeOf(m->m2, c2, expected));
    }
    case MK::Lam: {
      TypeP eb;
      if (expected) {
        needKind(expected, TK::Fun, "lam");
        if (!typeEq(expected->a, m->ann))
          throw TypeError("lam annotation " + m->ann->print() +
                          " does not match expected argument " + expected->a->print());
        eb = expected->b;
      }
      TypeCtx c2 = ctx;
      c2[m->var] = m->ann;
      return ret(tFun(m->ann, typeOf(m->m1, c2, eb)));
    }
    case MK::App: {
      TypeP tf = needKind(typeOf(m->m1, ctx), TK::Fun, "app");
      typeOf(m->m2, ctx, tf->a);
      return ret(tf->b);
    }
    case MK::InjL:
    case MK::InjR: {
      TypeP sum = m->ann ? m->ann : expected;
      if (!sum) throw TypeError("cannot infer sum type of injection " + m->print());
      needKind(sum, TK::Sum, "inj");
      typeOf(m->m1, ctx, m->kind == MK::InjL ? sum->a : sum->b);
      const_cast<Term&>(*m).ann = sum;  // remember for evaluation-time reinference
      return ret(sum);
    }
    case MK::Cases: {
      TypeP ts = needKind(typeOf(m->m1, ctx), TK::Sum, "cases");
      TypeCtx cl = ctx, cr = ctx;
      cl[m->var] = ts->a;
      cr[m->var2] = ts->b;
      TypeP tl = typeOf(m->m2, cl, expected);
      typeOf(m->m3, cr, tl);
      return ret(tl);
    }
    case MK::Up: {
      TypeP ea;
      if (expected) {
        needKind(expected, TK::Lift, "up");
        ea = expected->a;
      }
      return ret(tLift(typeOf(m->m1, ctx, ea)));
    }
    case MK::LiftLet: {
      TypeP tm = needKind(typeOf(m->m1, ctx), TK::Lift, "liftlet");
      TypeCtx c2 = ctx;
      c2[m->var] = tm->a;
      return ret(typeOf(m->m2, c2, expected));
    }
    case MK::SglL:
    case MK::SglU: {
      TK want = m->kind == MK::SglL ? TK::Lower : TK::Upper;
      TypeP ea;
      if (expected) {
        needKind(expected, want, "singleton");
        ea = expected->a;
      }
      TypeP inner = typeOf(m->m1, ctx, ea);
      return ret(want == TK::Lower ? tLower(inner) : tUpper(inner));
    }
    case MK::ExtL:
    case MK::ExtU: {
      TK want = m->kind == MK::ExtL ? TK::Lower : TK::Upper;
      TypeP tm = needKind(typeOf(m->m1, ctx), want, "extend");
      TypeCtx c2 = ctx;
      c2[m->var] = tm->a;
      TypeP tb = typeOf(m->m2, c2, expected);
      needKind(tb, want, "extend body");
      return ret(tb);
    }
    case MK::UplL:
    case MK::UplU: {
      TK want = m->kind == MK::UplL ? TK::Lower : TK::Upper;
      TypeP ta = typeOf(m->m1, ctx, expected);
      needKind(ta, want, "union");
      typeOf(m->m2, ctx, ta);
      return ret(ta);
    }
    case MK::TenL:
    case MK::TenU: {
      TK want = m->kind == MK::TenL ? TK::Lower : TK::Upper;
      TypeP ta = needKind(typeOf(m->m1, ctx), want, "tensor");
      TypeP tb = needKind(typeOf(m->m2, ctx), want, "tensor");
      TypeP out = tProd(ta->a, tb->a);
      return ret(want == TK::Lower ? tLower(out) : tUpper(out));
    }
    case MK::Fold: {
      TypeP rec = m->ann ? m->ann : expected;
      if (!rec) throw TypeError("cannot infer recursive type of fold " + m->print());
      needKind(rec, TK::Rec, "fold");
      typeOf(m->m1, ctx, unfoldRec(rec));
      const_cast<Term&>(*m).ann = rec;
      return ret(rec);
    }
    case MK::Unfold: {
      TypeP rec = needKind(typeOf(m->m1, ctx), TK::Rec, "unfold");
      return ret(unfoldRec(rec));
    }
    case MK::Mu: {
      TypeCtx c2 = ctx;
      c2[m->var] = m->ann;
      typeOf(m->m1, c2, m->ann);
      return ret(m->ann);
    }
  }
  throw TypeError("typeOf: bad term");
}

ElemP evalTerm(const TermP& m, const TypeP& type, const TypeCtx& ctx, const Env& env,
               int k) {
  if (k < 0) return bottom(type);
  switch (m->kind) {
    case MK::Var: {
      auto it = env.find(m->var);
      if (it != env.end()) return it->second;
      return bottom(ctx.at(m->var));
    }
    case MK::Star: return eUnitBot();
    case MK::Pair:
      return ePair(evalTerm(m->m1, type->a, ctx, env, k),
                   evalTerm(m->m2, type->b, ctx, env, k));
    case MK::LetPair: {
      TypeP ts = typeOf(m->m1, ctx);
      ElemP v = evalTerm(m->m1, ts, ctx, env, k);
      TypeCtx c2 = ctx;
      c2[m->var] = ts->a;
      c2[m->var2] = ts->b;
      Env e2 = env;
      e2[m->var] = v->a;
      e2[m->var2] = v->b;
      return evalTerm(m->m2, type, c2, e2, k);
    }
    case MK::Lam: {
      if (k == 0) return bottom(type);
      TypeCtx c2 = ctx;
      c2[m->var] = m->ann;
      std::vector<std::pair<ElemP, ElemP>> steps;
      for (auto& a : enumerate(m->ann, k - 1)) {
        Env e2 = env;
        e2[m->var] = a;
        steps.emplace_back(a, evalTerm(m->m1, type->b, c2, e2, k - 1));
      }
      return eStepFun(std::move(steps));
    }
    case MK::App: {
      TypeP tf = typeOf(m->m1, ctx);
      ElemP f = evalTerm(m->m1, tf, ctx, env, k);
      ElemP a = evalTerm(m->m2, tf->a, ctx, env, k);
      ElemP v = applyStep(f, a);
      return v ? v : bottom(tf->b);
    }
    case MK::InjL: {
      ElemP v = evalTerm(m->m1, type->a, ctx, env, k);
      return isBottom(v) ? eSumBot() : eSumL(v);
    }
    case MK::InjR: {
      ElemP v = evalTerm(m->m1, type->b, ctx, env, k);
      return isBottom(v) ? eSumBot() : eSumR(v);
    }
    case MK::Cases: {
      TypeP ts = typeOf(m->m1, ctx);
      ElemP v = evalTerm(m->m1, ts, ctx, env, k);
      if (v->kind == EK::SumL) {
        TypeCtx c2 = ctx;
        c2[m->var] = ts->a;
        Env e2 = env;
        e2[m->var] = v->a;
        return evalTerm(m->m2, type, c2, e2, k);
      }
      if (v->kind == EK::SumR) {
        TypeCtx c2 = ctx;
        c2[m->var2] = ts->b;
        Env e2 = env;
        e2[m->var2] = v->a;
        return evalTerm(m->m3, type, c2, e2, k);
      }
      return bottom(type);
    }
    case MK::Up: return eLiftUp(evalTerm(m->m1, type->a, ctx, env, k));
    case MK::LiftLet: {
      TypeP tm = typeOf(m->m1, ctx);
      ElemP v = evalTerm(m->m1, tm, ctx, env, k);
      if (v->kind != EK::LiftUp) return bottom(type);
      TypeCtx c2 = ctx;
      c2[m->var] = tm->a;
      Env e2 = env;
      e2[m->var] = v->a;
      return evalTerm(m->m2, type, c2, e2, k);
    }
    case MK::SglL: return eLowerSet({evalTerm(m->m1, type->a, ctx, env, k)});
    case MK::SglU: return eUpperSet({evalTerm(m->m1, type->a, ctx, env, k)});
    case MK::ExtL:
    case MK::ExtU: {
      TypeP tm = typeOf(m->m1, ctx);
      ElemP v = evalTerm(m->m1, tm, ctx, env, k);
      TypeCtx c2 = ctx;
      c2[m->var] = tm->a;
      std::vector<ElemP> gens;
      for (auto& g : v->elems) {
        Env e2 = env;
        e2[m->var] = g;
        ElemP r = evalTerm(m->m2, type, c2, e2, k);
        for (auto& x : r->elems) gens.push_back(x);
      }
      if (gens.empty()) gens.push_back(bottom(type->a));
      return m->kind == MK::ExtL ? eLowerSet(std::move(gens))
                                 : eUpperSet(std::move(gens));
    }
    case MK::UplL:
    case MK::UplU: {
      ElemP a = evalTerm(m->m1, type, ctx, env, k);
      ElemP b = evalTerm(m->m2, type, ctx, env, k);
      std::vector<ElemP> gens = a->elems;
      for (auto& x : b->elems) gens.push_back(x);
      return m->kind == MK::UplL ? eLowerSet(std::move(gens))
                                 : eUpperSet(std::move(gens));
    }
    case MK::TenL:
    case MK::TenU: {
      TypeP ta = typeOf(m->m1, ctx), tb = typeOf(m->m2, ctx);
      ElemP a = evalTerm(m->m1, ta, ctx, env, k);
      ElemP b = evalTerm(m->m2, tb, ctx, env, k);
      std::vector<ElemP> gens;
      for (auto& x : a->elems)
        for (auto& y : b->elems) gens.push_back(ePair(x, y));
      return m->kind == MK::TenL ? eLowerSet(std::move(gens))
                                 : eUpperSet(std::move(gens));
    }
    case MK::Fold: return eFold(evalTerm(m->m1, unfoldRec(type), ctx, env, k));
    case MK::Unfold: {
      TypeP rec = typeOf(m->m1, ctx);
      ElemP v = evalTerm(m->m1, rec, ctx, env, k);
      return v->a;
    }
    case MK::Mu: {
      TypeCtx c2 = ctx;
      c2[m->var] = m->ann;
      ElemP d = bottom(m->ann);
      for (int i = 0; i < k + 4; i++) {
        Env e2 = env;
        e2[m->var] = d;
        ElemP next = evalTerm(m->m1, m->ann, c2, e2, k);
        if (elemEq(next, d)) break;
        d = next;
      }
      return d;
    }
  }
  throw TypeError("evalTerm: bad term");
}

bool checkTerm(const TermP& m, const TypeP& type, const Assumptions& gamma,
               const FormulaP& phi, int k) {
  std::vector<std::string> vars;
  std::vector<std::vector<ElemP>> rows;
  for (auto& [x, tx] : gamma.types) {
    FormulaP fx = fTop();
    auto it = gamma.formulas.find(x);
    if (it != gamma.formulas.end()) fx = it->second;
    std::vector<ElemP> row;
    for (auto& d : toCDNF(fx, tx)) row.push_back(squigElem(d, tx));
    if (row.empty()) return true;  // inconsistent assumptions: vacuously valid
    vars.push_back(x);
    rows.push_back(std::move(row));
  }
  std::vector<size_t> idx(rows.size(), 0);
  while (true) {
    Env env;
    for (size_t i = 0; i < vars.size(); i++) env[vars[i]] = rows[i][idx[i]];
    ElemP v = evalTerm(m, type, gamma.types, env, k);
    if (!satElem(v, phi, type)) return false;
    size_t i = 0;
    while (i < idx.size()) {
      if (++idx[i] < rows[i].size()) break;
      idx[i] = 0;
      i++;
    }
    if (i == idx.size()) return true;
  }
}

TermP substTerm(const TermP& m, const std::string& x, const TermP& n) {
  switch (m->kind) {
    case MK::Var: return m->var == x ? n : m;
    case MK::Star: return m;
    default: break;
  }
  auto c = std::make_shared<Term>(*m);
  auto& r = const_cast<Term&>(*c);
  auto sub = [&](const TermP& t) { return t ? substTerm(t, x, n) : t; };
  // binders are renamed apart at parse; still guard against shadowing
  bool shadow1 = m->var == x, shadow2 = m->var2 == x;
  switch (m->kind) {
    case MK::Lam:
    case MK::Mu:
      if (!shadow1) r.m1 = sub(m->m1);
      break;
    case MK::LetPair:
    case MK::LiftLet:
    case MK::ExtL:
    case MK::ExtU:
      r.m1 = sub(m->m1);
      if (!shadow1 && !shadow2) r.m2 = sub(m->m2);
      break;
    case MK::Cases:
      r.m1 = sub(m->m1);
      if (!shadow1) r.m2 = sub(m->m2);
      if (!shadow2) r.m3 = sub(m->m3);
      break;
    default:
      r.m1 = sub(m->m1);
      r.m2 = sub(m->m2);
      r.m3 = sub(m->m3);
      break;
  }
  return c;
}

// ---------------------------------------------------------------- morphisms

namespace {

MorphP mkM(MoK k) {
  auto m = std::make_shared<Morph>();
  const_cast<Morph&>(*m).kind = k;
  return m;
}
Morph& mutM(const MorphP& m) { return const_cast<Morph&>(*m); }

}  // namespace

std::string Morph::print() const {
  auto two = [&](const char* n) {
    return std::string("(") + n + " " + f->print() + " " + g->print() + ")";
  };
  auto one = [&](const char* n) {
    return std::string("(") + n + " " + f->print() + ")";
  };
  auto ty1 = [&](const char* n) {
    return std::string("(") + n + " " + t1->print() + ")";
  };
  auto ty2 = [&](const char* n) {
    return std::string("(") + n + " " + t1->print() + " " + t2->print() + ")";
  };
  switch (kind) {
    case MoK::Id: return ty1("id");
    case MoK::Seq: return two("seq");
    case MoK::One: return ty1("one");
    case MoK::PairM: return two("pairm");
    case MoK::P: return ty2("p");
    case MoK::Q: return ty2("q");
    case MoK::Curry: return one("curry");
    case MoK::Ap: return ty2("ap");
    case MoK::L: return ty2("l");
    case MoK::R: return ty2("r");
    case MoK::CaseM: return two("case");
    case MoK::Up: return ty1("upm");
    case MoK::LiftM: return one("liftm");
    case MoK::StrictM: return one("strictm");
    case MoK::SglL: return ty1("sgll");
    case MoK::SglU: return ty1("sglu");
    case MoK::DaggerL: return one("extl");
    case MoK::DaggerU: return one("extu");
    case MoK::PlusL: return ty1("plusl");
    case MoK::PlusU: return ty1("plusu");
    case MoK::TenL: return ty2("tenl");
    case MoK::TenU: return ty2("tenu");
    case MoK::FoldM: return ty1("foldm");
    case MoK::UnfoldM: return ty1("unfoldm");
    case MoK::Y: return ty1("ym");
  }
  return "?";
}

MorphP parseMorph(const Sexpr& e) {
  if (e.atom || e.items.empty() || !e.items[0].atom)
    throw ParseError("bad morphism: " + e.print());
  const std::string& h = e.items[0].sym;
  auto arity = [&](size_t n) {
    if (e.items.size() != n + 1)
      throw ParseError("bad arity for " + h + " in morphism: " + e.print());
  };
  auto ty1 = [&](MoK k) {
    arity(1);
    auto m = mkM(k);
    mutM(m).t1 = parseType(e[1]);
    return m;
  };
  auto ty2 = [&](MoK k) {
    arity(2);
    auto m = mkM(k);
    mutM(m).t1 = parseType(e[1]);
    mutM(m).t2 = parseType(e[2]);
    return m;
  };
  auto one = [&](MoK k) {
    arity(1);
    auto m = mkM(k);
    mutM(m).f = parseMorph(e[1]);
    return m;
  };
  auto two = [&](MoK k) {
    arity(2);
    auto m = mkM(k);
    mutM(m).f = parseMorph(e[1]);
    mutM(m).g = parseMorph(e[2]);
    return m;
  };
  if (h == "id") return ty1(MoK::Id);
  if (h == "seq") return two(MoK::Seq);
  if (h == "one") return ty1(MoK::One);
  if (h == "pairm") return two(MoK::PairM);
  if (h == "p") return ty2(MoK::P);
  if (h == "q") return ty2(MoK::Q);
  if (h == "curry") return one(MoK::Curry);
  if (h == "ap") return ty2(MoK::Ap);
  if (h == "l") return ty2(MoK::L);
  if (h == "r") return ty2(MoK::R);
  if (h == "case") return two(MoK::CaseM);
  if (h == "upm") return ty1(MoK::Up);
  if (h == "liftm") return one(MoK::LiftM);
  if (h == "strictm") return one(MoK::StrictM);
  if (h == "sgll") return ty1(MoK::SglL);
  if (h == "sglu") return ty1(MoK::SglU);
  if (h == "extl") return one(MoK::DaggerL);
  if (h == "extu") return one(MoK::DaggerU);
  if (h == "plusl") return ty1(MoK::PlusL);
  if (h == "plusu") return ty1(MoK::PlusU);
  if (h == "tenl") return ty2(MoK::TenL);
  if (h == "tenu") return ty2(MoK::TenU);
  if (h == "foldm") return ty1(MoK::FoldM);
  if (h == "unfoldm") return ty1(MoK::UnfoldM);
  if (h == "ym") return ty1(MoK::Y);
  throw ParseError("unknown morphism constructor: " + h);
}

MorphP parseMorph(const std::string& text) { return parseMorph(parseSexpr(text)); }

std::pair<TypeP, TypeP> morphSort(const MorphP& m) {
  switch (m->kind) {
    case MoK::Id: return {m->t1, m->t1};
    case MoK::Seq: {
      auto [a, b] = morphSort(m->f);
      auto [c, d] = morphSort(m->g);
      if (!typeEq(b, c))
        throw SortError("composition mismatch: " + b->print() + " vs " + c->print());
      return {a, d};
    }
    case MoK::One: return {m->t1, tUnit()};
    case MoK::PairM: {
      auto [a, b] = morphSort(m->f);
      auto [a2, c] = morphSort(m->g);
      if (!typeEq(a, a2)) throw SortError("pairing sources differ");
      return {a, tProd(b, c)};
    }
    case MoK::P: return {tProd(m->t1, m->t2), m->t1};
    case MoK::Q: return {tProd(m->t1, m->t2), m->t2};
    case MoK::Curry: {
      auto [ab, c] = morphSort(m->f);
      if (ab->kind != TK::Prod) throw SortError("curry needs a product source");
      return {ab->a, tFun(ab->b, c)};
    }
    case MoK::Ap: return {tProd(tFun(m->t1, m->t2), m->t1), m->t2};
    case MoK::L: return {m->t1, tSum(m->t1, m->t2)};
    case MoK::R: return {m->t2, tSum(m->t1, m->t2)};
    case MoK::CaseM: {
      auto [a, c] = morphSort(m->f);
      auto [b, c2] = morphSort(m->g);
      if (!typeEq(c, c2)) throw SortError("case targets differ");
      return {tSum(a, b), c};
    }
    case MoK::Up: return {m->t1, tLift(m->t1)};
    case MoK::LiftM: {
      auto [a, b] = morphSort(m->f);
      return {tLift(a), b};
    }
    case MoK::StrictM: return morphSort(m->f);
    case MoK::SglL: return {m->t1, tLower(m->t1)};
    case MoK::SglU: return {m->t1, tUpper(m->t1)};
    case MoK::DaggerL: {
      auto [a, pb] = morphSort(m->f);
      if (pb->kind != TK::Lower) throw SortError("lower extension needs P_l target");
      return {tLower(a), pb};
    }
    case MoK::DaggerU: {
      auto [a, pb] = morphSort(m->f);
      if (pb->kind != TK::Upper) throw SortError("upper extension needs P_u target");
      return {tUpper(a), pb};
    }
    case MoK::PlusL: return {tProd(tLower(m->t1), tLower(m->t1)), tLower(m->t1)};
    case MoK::PlusU: return {tProd(tUpper(m->t1), tUpper(m->t1)), tUpper(m->t1)};
    case MoK::TenL:
      return {tProd(tLower(m->t1), tLower(m->t2)), tLower(tProd(m->t1, m->t2))};
    case MoK::TenU:
      return {tProd(tUpper(m->t1), tUpper(m->t2)), tUpper(tProd(m->t1, m->t2))};
    case MoK::FoldM:
      if (m->t1->kind != TK::Rec) throw SortError("fold needs a recursive type");
      return {unfoldRec(m->t1), m->t1};
    case MoK::UnfoldM:
      if (m->t1->kind != TK::Rec) throw SortError("unfold needs a recursive type");
      return {m->t1, unfoldRec(m->t1)};
    case MoK::Y: return {tFun(m->t1, m->t1), m->t1};
  }
  throw SortError("morphSort: bad morphism");
}

TermP translateMorphism(const MorphP& m) {
  auto [src, tgt] = morphSort(m);
  switch (m->kind) {
    case MoK::Id: {
      std::string x = freshVar("x");
      return mLam(x, src, mVar(x));
    }
    case MoK::Seq: {
      std::string x = freshVar("x");
      return mLam(x, src,
                  mApp(translateMorphism(m->g), mApp(translateMorphism(m->f), mVar(x))));
    }
    case MoK::One: {
      std::string x = freshVar("x");
      return mLam(x, src, mStar());
    }
    case MoK::PairM: {
      std::string x = freshVar("x");
      return mLam(x, src,
                  mPair(mApp(translateMorphism(m->f), mVar(x)),
                        mApp(translateMorphism(m->g), mVar(x))));
    }
    case MoK::P: {
      std::string z = freshVar("z"), x = freshVar("x"), y = freshVar("y");
      return mLam(z, src, mLetPair(mVar(z), x, y, mVar(x)));
    }
    case MoK::Q: {
      std::string z = freshVar("z"), x = freshVar("x"), y = freshVar("y");
      return mLam(z, src, mLetPair(mVar(z), x, y, mVar(y)));
    }
    case MoK::Curry: {
      std::string x = freshVar("x"), y = freshVar("y");
      auto [ab, c] = morphSort(m->f);
      (void)c;
      return mLam(x, src,
                  mLam(y, ab->b,
                       mApp(translateMorphism(m->f), mPair(mVar(x), mVar(y)))));
    }
    case MoK::Ap: {
      // the table's curried display, adapted to the product source sort
      std::string z = freshVar("z"), f = freshVar("f"), x = freshVar("x");
      return mLam(z, src, mLetPair(mVar(z), f, x, mApp(mVar(f), mVar(x))));
    }
    case MoK::L: {
      std::string x = freshVar("x");
      return mLam(x, src, mInjL(mVar(x), tgt));
    }
    case MoK::R: {
      std::string y = freshVar("y");
      return mLam(y, src, mInjR(mVar(y), tgt));
    }
    case MoK::CaseM: {
      std::string z = freshVar("z"), x = freshVar("x"), y = freshVar("y");
      return mLam(z, src,
                  mCases(mVar(z), x, mApp(translateMorphism(m->f), mVar(x)), y,
                         mApp(translateMorphism(m->g), mVar(y))));
    }
    case MoK::Up: {
      std::string x = freshVar("x");
      return mLam(x, src, mUp(mVar(x)));
    }
    case MoK::LiftM: {
      std::string y = freshVar("y"), x = freshVar("x");
      return mLam(y, src, mLiftLet(mVar(y), x, mApp(translateMorphism(m->f), mVar(x))));
    }
    case MoK::StrictM: {
      // route through the coalesced sum to cut the argument at bottom
      std::string z = freshVar("z"), x = freshVar("x"), y = freshVar("y");
      TypeP sum = tSum(src, tgt);
      return mLam(z, src,
                  mCases(mInjL(mVar(z), sum), x,
                         mApp(translateMorphism(m->f), mVar(x)), y, mVar(y)));
    }
    case MoK::SglL: {
      std::string x = freshVar("x");
      return mLam(x, src, mSglL(mVar(x)));
    }
    case MoK::SglU: {
      std::string x = freshVar("x");
      return mLam(x, src, mSglU(mVar(x)));
    }
    case MoK::DaggerL: {
      std::string z = freshVar("z"), x = freshVar("x");
      return mLam(z, src, mExtL(mVar(z), x, mApp(translateMorphism(m->f), mVar(x))));
    }
    case MoK::DaggerU: {
      std::string z = freshVar("z"), x = freshVar("x");
      return mLam(z, src, mExtU(mVar(z), x, mApp(translateMorphism(m->f), mVar(x))));
    }
    case MoK::PlusL: {
      std::string z = freshVar("z"), x = freshVar("x"), y = freshVar("y");
      return mLam(z, src, mLetPair(mVar(z), x, y, mUplL(mVar(x), mVar(y))));
    }
    case MoK::PlusU: {
      std::string z = freshVar("z"), x = freshVar("x"), y = freshVar("y");
      return mLam(z, src, mLetPair(mVar(z), x, y, mUplU(mVar(x), mVar(y))));
    }
    case MoK::TenL: {
      std::string z = freshVar("z"), x = freshVar("x"), y = freshVar("y");
      return mLam(z, src, mLetPair(mVar(z), x, y, mTenL(mVar(x), mVar(y))));
    }
    case MoK::TenU: {
      std::string z = freshVar("z"), x = freshVar("x"), y = freshVar("y");
      return mLam(z, src, mLetPair(mVar(z), x, y, mTenU(mVar(x), mVar(y))));
    }
    case MoK::FoldM: {
      std::string x = freshVar("x");
      return mLam(x, src, mFold(mVar(x), tgt));
    }
    case MoK::UnfoldM: {
      std::string x = freshVar("x");
      return mLam(x, src, mUnfold(mVar(x)));
    }
    case MoK::Y: {
      std::string f = freshVar("f"), x = freshVar("x");
      return mLam(f, src, mMu(x, tgt, mApp(mVar(f), mVar(x))));
    }
  }
  throw SortError("translateMorphism: bad morphism");
}

bool hoare(const MorphP& f, const FormulaP& phi, const FormulaP& psi, int k) {
  auto [src, tgt] = morphSort(f);
  TermP t = translateMorphism(f);
  TypeP ft = tFun(src, tgt);
  typeOf(t, {}, ft);
  return checkTerm(t, ft, {}, fArrow(phi, psi), k);
}

}  // namespace dl
