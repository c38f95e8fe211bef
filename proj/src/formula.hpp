#pragma once
#include <memory>
#include <string>
#include <vector>

#include "sexpr.hpp"
#include "types.hpp"

namespace dl {

// Assertions of the finitary domain logic. Conjunction and disjunction are
// kept n-ary, flattened, sorted and deduplicated; the empty conjunction is tt
// and the empty disjunction is ff.
struct Formula;
using FormulaP = std::shared_ptr<const Formula>;

enum class FK { Top, Bot, And, Or, PairF, ArrowF, InL, InR, LiftF, BoxF, DiaF };

struct Formula {
  FK kind;
  std::vector<FormulaP> kids;  // And/Or
  FormulaP a, b;               // PairF/ArrowF use a,b; InL/InR/LiftF/BoxF/DiaF use a

  std::string print() const;
};

FormulaP fTop();
FormulaP fBot();
FormulaP fAnd(std::vector<FormulaP> kids);
FormulaP fOr(std::vector<FormulaP> kids);
FormulaP fAnd2(FormulaP x, FormulaP y);
FormulaP fOr2(FormulaP x, FormulaP y);
FormulaP fPair(FormulaP a, FormulaP b);
FormulaP fArrow(FormulaP a, FormulaP b);
FormulaP fInL(FormulaP a);
FormulaP fInR(FormulaP a);
FormulaP fLift(FormulaP a);
FormulaP fBox(FormulaP a);
FormulaP fDia(FormulaP a);

// Grammar: tt | ff | (and f g) | (or f g) | (pair f g) | (arrow f g)
//        | (inl f) | (inr f) | (lift f) | (box f) | (dia f)
// and/or also accept >2 arguments.
FormulaP parseFormula(const Sexpr& e);
FormulaP parseFormula(const std::string& text);

bool formulaEq(const FormulaP& x, const FormulaP& y);
bool formulaLt(const FormulaP& x, const FormulaP& y);

// List of top-level conjuncts (the formula itself if not an And).
std::vector<FormulaP> conjuncts(const FormulaP& f);
std::vector<FormulaP> disjuncts(const FormulaP& f);

// One unit per type-matching constructor, 0 for the lattice connectives.
// Bounds the rank of any element denoted primally by the formula.
int formulaRank(const FormulaP& f);

// Total node count (used by the normal-form budget).
size_t formulaSize(const FormulaP& f);

// Checks the formula against the formation rules at the given type; throws
// ParseError on mismatch. Unfolds rec types as needed, with the unfolding
// depth bounded by the formula's own depth.
void checkFormulaAt(const FormulaP& f, const TypeP& t);

}  // namespace dl
