#pragma once
#include "elements.hpp"
#include "formula.hpp"

namespace dl {

struct BlowupLimit : std::runtime_error {
  explicit BlowupLimit(const std::string& m) : std::runtime_error(m) {}
};

// Syntactic shape check: disjunctions occur only immediately under box.
bool isPNF(const FormulaP& f);

// Consistency table for PNF formulas at a type (C). The function-space
// clause quantifies over all subsets of the arrow conjuncts, capped at 16.
bool conC(const FormulaP& pnf, const TypeP& t);

// Termination table (T): true iff bottom does not satisfy the formula.
// Defined on PNFs and on And/Or combinations of them.
bool termT(const FormulaP& f, const TypeP& t);

struct MetaFlags {
  bool pnf = false;
  bool con = false;   // consistent, i.e. denotation nonempty
  bool term = false;  // terminating, i.e. bottom excluded
  bool cpnf = false;
  bool refutable = false;  // #: provably equal to ff
};

MetaFlags metaPredicates(const FormulaP& f, const TypeP& t);

bool wellFormed(const FormulaP& f, const TypeP& t);

// Disjunctive normal form: list of consistent prime (CPNF) disjuncts, each a
// conjunction of constructor atoms with normalized payloads. Inconsistent
// disjuncts are dropped; the empty list is ff. Throws BlowupLimit past a
// 10^6 node budget.
std::vector<FormulaP> toCDNF(const FormulaP& f, const TypeP& t);

// Conjunction of two prime formulas (maybe inconsistent; callers filter).
FormulaP pnfMeet(const FormulaP& p, const FormulaP& q);

// The finite element whose principal up-set is the denotation of a CPNF.
ElemP squigElem(const FormulaP& cpnf, const TypeP& t);

// Direct semantic satisfaction u |= f. Independent of toCDNF except that the
// arrow clause probes the argument grid at the formula's rank.
bool satElem(const ElemP& u, const FormulaP& f, const TypeP& t);

// Minimal elements of the denotation (pairwise incomparable).
std::vector<ElemP> minsat(const FormulaP& f, const TypeP& t);

// Decides f <= g at type t via CDNF on both sides and element comparison.
bool entails(const FormulaP& f, const FormulaP& g, const TypeP& t);

}  // namespace dl
