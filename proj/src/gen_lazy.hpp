#pragma once
// Random lazy lambda terms, formulas and contexts.
#include "gen.hpp"
#include "lazy.hpp"

namespace dl::gen {

inline LamP randLam(Rng& rng, int depth, std::vector<std::string>& scope,
                    Dialect d = Dialect::Pure) {
  bool canVar = !scope.empty();
  if (depth <= 0) {
    if (canVar) return lVar(scope[pick(rng, (int)scope.size())]);
    return lLam("v" + std::to_string(scope.size()), lVar("v0"));
  }
  int r = pick(rng, 10);
  if (r <= 2 && canVar) return lVar(scope[pick(rng, (int)scope.size())]);
  if (r <= 5) {
    std::string x = "v" + std::to_string(scope.size());
    scope.push_back(x);
    LamP b = randLam(rng, depth - 1, scope, d);
    scope.pop_back();
    return lLam(x, b);
  }
  if (r <= 8 || d == Dialect::Pure)
    return lApp(randLam(rng, depth - 1, scope, d),
                randLam(rng, depth - 1, scope, d));
  switch (d) {
    case Dialect::WithC: return lConst(LTK::ConstC);
    case Dialect::WithP: return lConst(LTK::ConstP);
    case Dialect::WithStar:
      return coin(rng) ? lConst(LTK::ConstC) : lConst(LTK::ConstStar);
    default:
      switch (pick(rng, 3)) {
        case 0: return lConst(LTK::ConstC);
        case 1: return lConst(LTK::ConstP);
        default: return lConst(LTK::ConstStar);
      }
  }
}

inline LamP randClosedLam(Rng& rng, int depth, Dialect d = Dialect::Pure) {
  std::vector<std::string> scope;
  std::string x = "v0";
  scope.push_back(x);
  LamP b = randLam(rng, depth - 1, scope, d);
  return lLam(x, b);
}

// A one-hole context as a term with the free variable `hole`; plugging is
// substitution (the plug is closed, so capture cannot occur).
inline LamP randContext(Rng& rng, int depth) {
  std::vector<std::string> scope = {"hole"};
  return randLam(rng, depth, scope);
}

inline int holeDepth(const LamP& c) {
  switch (c->kind) {
    case LTK::Var: return c->var == "hole" ? 0 : -1;
    case LTK::Lam: {
      int d = holeDepth(c->a);
      return d < 0 ? -1 : d + 1;
    }
    case LTK::App: {
      int d1 = holeDepth(c->a), d2 = holeDepth(c->b);
      int d = std::max(d1, d2);
      return d < 0 ? -1 : d + 1;
    }
    default: return -1;
  }
}

inline LFP randLFormula(Rng& rng, int depth) {
  if (depth <= 0) return lfTop();
  switch (pick(rng, 5)) {
    case 0: return lfTop();
    case 1:
    case 2:
      return lfArr(randLFormula(rng, depth - 1), randLFormula(rng, depth - 1));
    default:
      return lfAnd({randLFormula(rng, depth - 1), randLFormula(rng, depth - 1)});
  }
}

}  // namespace dl::gen
