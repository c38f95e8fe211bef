#pragma once
// Random typed terms and morphisms for the endogenous-logic suites.
#include "gen.hpp"
#include "terms.hpp"

namespace dl::gen {

inline std::string freshName(Rng& rng) {
  return "v" + std::to_string(rng() % 100000);
}

// Random recursion-free term of the given closed type. Falls back to a
// canonical inhabitant at depth 0.
inline TermP randTerm(Rng& rng, const TypeP& ty, const TypeCtx& ctx, int depth) {
  auto sub = [&](const TypeP& t) { return randTerm(rng, t, ctx, depth - 1); };
  auto construct = [&]() -> TermP {
    switch (ty->kind) {
      case TK::Unit: return mStar();
      case TK::Prod: return mPair(sub(ty->a), sub(ty->b));
      case TK::Fun: {
        std::string x = freshName(rng);
        TypeCtx c2 = ctx;
        c2[x] = ty->a;
        return mLam(x, ty->a, randTerm(rng, ty->b, c2, depth - 1));
      }
      case TK::Sum:
        return coin(rng) ? mInjL(sub(ty->a), ty) : mInjR(sub(ty->b), ty);
      case TK::Lift: return mUp(sub(ty->a));
      case TK::Lower:
        if (depth > 0 && coin(rng)) return mUplL(sub(ty), sub(ty));
        return mSglL(sub(ty->a));
      case TK::Upper:
        if (depth > 0 && coin(rng)) return mUplU(sub(ty), sub(ty));
        return mSglU(sub(ty->a));
      case TK::Rec: return mFold(sub(unfoldRec(ty)), ty);
      default: return mStar();
    }
  };
  // a context variable of the right type, when one exists
  std::vector<std::string> hits;
  for (auto& [x, tx] : ctx)
    if (typeEq(tx, ty)) hits.push_back(x);
  if (!hits.empty() && pick(rng, 3) == 0) return mVar(hits[pick(rng, (int)hits.size())]);
  if (depth <= 0) return construct();
  switch (pick(rng, 6)) {
    case 0: {  // application at a small argument type
      TypeP ta = randType(rng, 1);
      return mApp(randTerm(rng, tFun(ta, ty), ctx, depth - 1),
                  randTerm(rng, ta, ctx, depth - 1));
    }
    case 1: {  // case split on a small sum
      TypeP ts = tSum(randType(rng, 1), randType(rng, 1));
      std::string x = freshName(rng), y = freshName(rng);
      TypeCtx cl = ctx, cr = ctx;
      cl[x] = ts->a;
      cr[y] = ts->b;
      return mCases(randTerm(rng, ts, ctx, depth - 1), x,
                    randTerm(rng, ty, cl, depth - 1), y,
                    randTerm(rng, ty, cr, depth - 1));
    }
    case 2: {  // strict unpacking of a lifted value
      TypeP tl = tLift(randType(rng, 1));
      std::string x = freshName(rng);
      TypeCtx c2 = ctx;
      c2[x] = tl->a;
      return mLiftLet(randTerm(rng, tl, ctx, depth - 1), x,
                      randTerm(rng, ty, c2, depth - 1));
    }
    case 3: {  // pair projection
      TypeP tp = tProd(randType(rng, 1), randType(rng, 1));
      std::string x = freshName(rng), y = freshName(rng);
      TypeCtx c2 = ctx;
      c2[x] = tp->a;
      c2[y] = tp->b;
      return mLetPair(randTerm(rng, tp, ctx, depth - 1), x, y,
                      randTerm(rng, ty, c2, depth - 1));
    }
    default: return construct();
  }
}

// Random well-sorted morphism combinator of bounded depth.
inline MorphP randMorph(Rng& rng, int depth) {
  auto leaf = [&]() -> MorphP {
    TypeP s = randType(rng, 1), t = randType(rng, 1);
    const char* names[] = {"id", "one", "p",    "q",    "ap",   "l",
                           "r",  "upm", "sgll", "sglu", "plusl", "plusu",
                           "tenl", "tenu", "ym"};
    std::string n = names[pick(rng, 15)];
    std::string text = "(" + n + " " + s->print();
    if (n == "p" || n == "q" || n == "ap" || n == "l" || n == "r" || n == "tenl" ||
        n == "tenu")
      text += " " + t->print();
    return parseMorph(text + ")");
  };
  if (depth <= 0) return leaf();
  switch (pick(rng, 6)) {
    case 0: {  // composition with a matching middle sort
      MorphP f = randMorph(rng, depth - 1);
      auto [a, b] = morphSort(f);
      (void)a;
      return parseMorph("(seq " + f->print() + " (id " + b->print() + "))");
    }
    case 1: {
      MorphP f = randMorph(rng, depth - 1);
      auto [a, b] = morphSort(f);
      (void)b;
      return parseMorph("(pairm " + f->print() + " (one " + a->print() + "))");
    }
    case 2: {
      MorphP f = randMorph(rng, depth - 1);
      return parseMorph("(liftm " + f->print() + ")");
    }
    case 3: {
      MorphP f = randMorph(rng, depth - 1);
      return parseMorph("(strictm " + f->print() + ")");
    }
    case 4: {
      MorphP f = randMorph(rng, depth - 1);
      return parseMorph("(case " + f->print() + " " + f->print() + ")");
    }
    default: return leaf();
  }
}

}  // namespace dl::gen
