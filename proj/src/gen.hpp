#pragma once
// Deterministic random generators for types, formulas and elements, shared by
// the unit suites and the acceptance harness.
#include <random>
#include <vector>

#include "formula.hpp"
#include "logic.hpp"
#include "types.hpp"

namespace dl::gen {

using Rng = std::mt19937;

inline int pick(Rng& rng, int n) {
  return static_cast<int>(rng() % static_cast<unsigned>(n));
}

inline bool coin(Rng& rng) { return (rng() & 1) != 0; }

// Random closed type of bounded depth. Recursive types show up rarely and
// always guarded.
inline TypeP randType(Rng& rng, int depth) {
  if (depth <= 0) return tUnit();
  switch (pick(rng, 8)) {
    case 0: return tUnit();
    case 1: return tProd(randType(rng, depth - 1), randType(rng, depth - 1));
    case 2: return tFun(randType(rng, depth - 1), randType(rng, depth - 1));
    case 3: return tSum(randType(rng, depth - 1), randType(rng, depth - 1));
    case 4: return tLift(randType(rng, depth - 1));
    case 5: return tUpper(randType(rng, depth - 1));
    case 6: return tLower(randType(rng, depth - 1));
    default: return tLift(randType(rng, depth - 1));
  }
}

// Random well-formed formula at a type, roughly bounded by `size` nodes.
inline FormulaP randFormulaAt(Rng& rng, const TypeP& type, int size) {
  TypeP t = type;
  while (t->kind == TK::Rec) t = unfoldRec(t);
  if (size <= 1) {
    switch (pick(rng, 4)) {
      case 0: return fBot();
      default: return fTop();
    }
  }
  // lattice connectives at any type
  int r = pick(rng, 10);
  if (r == 0) return fTop();
  if (r == 1) return fBot();
  if (r <= 3) {
    return fAnd2(randFormulaAt(rng, type, size / 2),
                 randFormulaAt(rng, type, size / 2));
  }
  if (r <= 5) {
    return fOr2(randFormulaAt(rng, type, size / 2),
                randFormulaAt(rng, type, size / 2));
  }
  switch (t->kind) {
    case TK::Unit: return coin(rng) ? fTop() : fBot();
    case TK::Prod:
      return fPair(randFormulaAt(rng, t->a, size / 2),
                   randFormulaAt(rng, t->b, size / 2));
    case TK::Fun:
      return fArrow(randFormulaAt(rng, t->a, size / 2),
                    randFormulaAt(rng, t->b, size / 2));
    case TK::Sum:
      return coin(rng) ? fInL(randFormulaAt(rng, t->a, size - 1))
                       : fInR(randFormulaAt(rng, t->b, size - 1));
    case TK::Lift: return fLift(randFormulaAt(rng, t->a, size - 1));
    case TK::Upper: return fBox(randFormulaAt(rng, t->a, size - 1));
    case TK::Lower: return fDia(randFormulaAt(rng, t->a, size - 1));
    default: return fTop();
  }
}

// Random PNF at a type: conjunctions of constructor atoms, disjunction only
// immediately under box.
inline FormulaP randPNFAt(Rng& rng, const TypeP& type, int depth) {
  TypeP t = type;
  while (t->kind == TK::Rec) t = unfoldRec(t);
  if (depth <= 0) return fTop();
  auto atom = [&]() -> FormulaP {
    switch (t->kind) {
      case TK::Unit: return fTop();
      case TK::Prod:
        return fPair(randPNFAt(rng, t->a, depth - 1), randPNFAt(rng, t->b, depth - 1));
      case TK::Fun:
        return fArrow(randPNFAt(rng, t->a, depth - 1), randPNFAt(rng, t->b, depth - 1));
      case TK::Sum:
        return coin(rng) ? fInL(randPNFAt(rng, t->a, depth - 1))
                         : fInR(randPNFAt(rng, t->b, depth - 1));
      case TK::Lift: return fLift(randPNFAt(rng, t->a, depth - 1));
      case TK::Upper: {
        std::vector<FormulaP> ds;
        int n = 1 + pick(rng, 2);
        for (int i = 0; i < n; i++) ds.push_back(randPNFAt(rng, t->a, depth - 1));
        return fBox(fOr(std::move(ds)));
      }
      case TK::Lower: return fDia(randPNFAt(rng, t->a, depth - 1));
      default: return fTop();
    }
  };
  int n = 1 + pick(rng, 2);
  std::vector<FormulaP> atoms;
  for (int i = 0; i < n; i++) atoms.push_back(atom());
  FormulaP f = fAnd(std::move(atoms));
  return isPNF(f) ? f : fTop();
}

// Semantic entailment oracle: every rank-bounded element satisfying f also
// satisfies g. Complete because minimal elements of [[f]] have rank <=
// formulaRank(f).
inline bool semanticEntails(const FormulaP& f, const FormulaP& g, const TypeP& t) {
  for (auto& u : enumerate(t, formulaRank(f)))
    if (satElem(u, f, t) && !satElem(u, g, t)) return false;
  return true;
}

}  // namespace dl::gen
