#pragma once
#include <memory>
#include <string>

#include "sexpr.hpp"

namespace dl {

// Type expressions over the domain constructors:
//   1, product, function space, coalesced sum, lifting, upper (Smyth) and
//   lower (Hoare) powerdomains, and recursive types.
struct Type;
using TypeP = std::shared_ptr<const Type>;

enum class TK { Unit, Prod, Fun, Sum, Lift, Upper, Lower, Var, Rec };

struct Type {
  TK kind;
  TypeP a, b;        // Prod/Fun/Sum use a,b; Lift/Upper/Lower/Rec use a
  std::string name;  // Var name or Rec binder

  std::string print() const;
};

TypeP tUnit();
TypeP tProd(TypeP a, TypeP b);
TypeP tFun(TypeP a, TypeP b);
TypeP tSum(TypeP a, TypeP b);
TypeP tLift(TypeP a);
TypeP tUpper(TypeP a);
TypeP tLower(TypeP a);
TypeP tVar(const std::string& n);
TypeP tRec(const std::string& n, TypeP body);

// Parses per the grammar
//   sigma ::= 1 | (x s t) | (-> s t) | (+ s t) | (lift s) | (pu s) | (pl s)
//           | (rec t s) | t
// Rec binders are renamed apart; the result must be closed, and every rec
// binder must occur only under at least one of ->, +, lift within its body
// (so bottom elements stay finite).
TypeP parseType(const Sexpr& e);
TypeP parseType(const std::string& text);

// Canonical key with de Bruijn-style rec binders; use for equality and memo
// tables (parse-time renaming makes raw prints differ across parses).
std::string typeKey(const TypeP& t);

bool typeEq(const TypeP& a, const TypeP& b);

// rec t.s  |->  s[rec t.s / t]
TypeP unfoldRec(const TypeP& t);

// Common sugar: (+ (lift 1) (lift 1)), the flat booleans.
TypeP tBool();

}  // namespace dl
