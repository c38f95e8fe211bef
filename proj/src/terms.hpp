#pragma once
#include <map>
#include <memory>
#include <string>

#include "logic.hpp"

namespace dl {

struct TypeError : std::runtime_error {
  explicit TypeError(const std::string& m) : std::runtime_error(m) {}
};
struct SortError : std::runtime_error {
  explicit SortError(const std::string& m) : std::runtime_error(m) {}
};

// Typed metalanguage over the domain constructors.
struct Term;
using TermP = std::shared_ptr<const Term>;

enum class MK {
  Var, Star, Pair, LetPair, Lam, App, InjL, InjR, Cases, Up, LiftLet,
  SglL, SglU, ExtL, ExtU, UplL, UplU, TenL, TenU, Fold, Unfold, Mu
};

struct Term {
  MK kind;
  std::string var, var2;  // binders / variable name
  TypeP ann;              // Lam/Mu argument type; InjL/InjR/Fold optional target
  TermP m1, m2, m3;

  std::string print() const;
};

TermP mVar(const std::string& x);
TermP mStar();
TermP mPair(TermP a, TermP b);
TermP mLetPair(TermP m, const std::string& x, const std::string& y, TermP body);
TermP mLam(const std::string& x, TypeP t, TermP body);
TermP mApp(TermP f, TermP a);
TermP mInjL(TermP m, TypeP sumAnn = nullptr);
TermP mInjR(TermP m, TypeP sumAnn = nullptr);
TermP mCases(TermP scrut, const std::string& x, TermP l, const std::string& y, TermP r);
TermP mUp(TermP m);
TermP mLiftLet(TermP m, const std::string& x, TermP body);
TermP mSglL(TermP m);
TermP mSglU(TermP m);
TermP mExtL(TermP m, const std::string& x, TermP body);
TermP mExtU(TermP m, const std::string& x, TermP body);
TermP mUplL(TermP a, TermP b);
TermP mUplU(TermP a, TermP b);
TermP mTenL(TermP a, TermP b);
TermP mTenU(TermP a, TermP b);
TermP mFold(TermP m, TypeP recAnn = nullptr);
TermP mUnfold(TermP m);
TermP mMu(const std::string& x, TypeP t, TermP body);

// Grammar: (lam x sigma M) (app M N) (pair M N) (letp M x y N) (inl M)
// (inr M) (cases M x N1 y N2) (up M) (liftlet M x N) (sglL M) (sglU M)
// (extL M x N) (extU M x N) (uplL M N) (uplU M N) (tenL M N) (tenU M N)
// (fold M) (unfold M) (mu x sigma M) star variables. Binders rename apart.
TermP parseTerm(const Sexpr& e);
TermP parseTerm(const std::string& text);

using TypeCtx = std::map<std::string, TypeP>;

// Syntax-directed bidirectional typing. `expected` may be null; constructs
// whose type is not inferable without it (inl/inr/fold without annotation)
// throw TypeError in that case.
TypeP typeOf(const TermP& m, const TypeCtx& ctx = {}, const TypeP& expected = nullptr);

using Env = std::map<std::string, ElemP>;

// Rank-k evaluation of a type-correct term. Abstractions probe the argument
// grid at k-1; recursion unrolls k+4 times from bottom. The result is always
// below the true denotation.
ElemP evalTerm(const TermP& m, const TypeP& type, const TypeCtx& ctx, const Env& env,
               int k);

struct Assumptions {
  TypeCtx types;
  std::map<std::string, FormulaP> formulas;  // missing entries mean tt
};

// Endogenous assertion M, Gamma |= phi, decided by normalizing each
// assumption, running the term on every choice of prime disjuncts, and
// checking the result satisfies phi. Exact for Mu-free terms.
bool checkTerm(const TermP& m, const TypeP& type, const Assumptions& gamma,
               const FormulaP& phi, int k);

// Morphism-level combinator language.
struct Morph;
using MorphP = std::shared_ptr<const Morph>;

enum class MoK {
  Id, Seq, One, PairM, P, Q, Curry, Ap, L, R, CaseM, Up, LiftM, StrictM,
  SglL, SglU, DaggerL, DaggerU, PlusL, PlusU, TenL, TenU, FoldM, UnfoldM, Y
};

struct Morph {
  MoK kind;
  TypeP t1, t2;  // type parameters where the combinator needs them
  MorphP f, g;

  std::string print() const;
};

// Grammar: (id s) (seq f g) (one s) (pairm f g) (p s t) (q s t) (curry f)
// (ap s t) (l s t) (r s t) (case f g) (upm s) (liftm f) (strictm f)
// (sgll s) (sglu s) (extl f) (extu f) (plusl s) (plusu s) (tenl s t)
// (tenu s t) (foldm r) (unfoldm r) (ym s)
MorphP parseMorph(const Sexpr& e);
MorphP parseMorph(const std::string& text);

// Source and target sorts; throws SortError on ill-sorted composites.
std::pair<TypeP, TypeP> morphSort(const MorphP& f);

// The lambda-term of the translation table.
TermP translateMorphism(const MorphP& f);

// phi <= [f] psi via the endogenous logic on the translated term.
bool hoare(const MorphP& f, const FormulaP& phi, const FormulaP& psi, int k);

// capture-avoiding substitution (binders are renamed apart at parse time)
TermP substTerm(const TermP& m, const std::string& x, const TermP& n);

}  // namespace dl
