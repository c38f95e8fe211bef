#pragma once
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "types.hpp"

namespace dl {

struct RankExplosion : std::runtime_error {
  explicit RankExplosion(const std::string& m) : std::runtime_error(m) {}
};

// Finite (compact) elements of the domain denoted by a type expression.
//   StepFun: consistent set of step functions [a,b], kept irredundant.
//   LowerSet: Hoare powerdomain element as its maximal generators.
//   UpperSet: Smyth powerdomain element as its minimal generators.
//   FoldE: element of rec t.s wrapping an element of the unfolding.
struct Elem;
using ElemP = std::shared_ptr<const Elem>;

enum class EK {
  UnitBot, PairE, StepFun, SumBot, SumL, SumR, LiftBot, LiftUp,
  LowerSet, UpperSet, FoldE
};

struct Elem {
  EK kind;
  ElemP a, b;                                   // PairE; SumL/SumR/LiftUp/FoldE use a
  std::vector<std::pair<ElemP, ElemP>> steps;   // StepFun
  std::vector<ElemP> elems;                     // LowerSet/UpperSet

  std::string print() const;
};

ElemP eUnitBot();
ElemP ePair(ElemP a, ElemP b);
ElemP eSumBot();
ElemP eSumL(ElemP a);
ElemP eSumR(ElemP a);
ElemP eLiftBot();
ElemP eLiftUp(ElemP a);
ElemP eFold(ElemP a);

// Canonicalizing constructors. eStepFun drops bottom-valued and redundant
// steps; does not itself check consistency. eLowerSet keeps maximal
// generators, eUpperSet keeps minimal ones; both require a nonempty set.
ElemP eStepFun(std::vector<std::pair<ElemP, ElemP>> steps);
ElemP eLowerSet(std::vector<ElemP> xs);
ElemP eUpperSet(std::vector<ElemP> xs);

bool elemEq(const ElemP& u, const ElemP& v);
bool leq(const ElemP& u, const ElemP& v);

// Least function value at argument a: join of all step results whose step
// argument is below a. Returns null when no step applies and the bottom
// result shape cannot be derived (empty function); callers with type context
// should substitute bottom(resultType).
ElemP applyStep(const ElemP& f, const ElemP& a);

// Least upper bound if the two elements are consistent.
std::optional<ElemP> join(const ElemP& u, const ElemP& v);

// Is a set of steps a consistent (function-space) graph? Checked over all
// subsets, capped at 16 steps.
bool stepsConsistent(const std::vector<std::pair<ElemP, ElemP>>& steps);

ElemP bottom(const TypeP& t);
bool isBottom(const ElemP& u);

// All elements of rank <= k. Throws RankExplosion past the cap (50000).
const std::vector<ElemP>& enumerate(const TypeP& t, int k);

}  // namespace dl
