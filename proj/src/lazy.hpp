#pragma once
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "elements.hpp"
#include "sexpr.hpp"

namespace dl {

struct IllegalConstant : std::runtime_error {
  explicit IllegalConstant(const std::string& m) : std::runtime_error(m) {}
};
struct NotNL : std::runtime_error {
  explicit NotNL(const std::string& m) : std::runtime_error(m) {}
};

// Lazy lambda terms, optionally extended with the constants C (convergence
// test), P (parallel convergence) and star (a single ground atom).
enum class Dialect { Pure, WithC, WithP, WithStar, WithStarP };

enum class LTK { Var, Lam, App, ConstC, ConstP, ConstStar };

struct LambdaTerm;
using LamP = std::shared_ptr<const LambdaTerm>;

struct LambdaTerm {
  LTK kind;
  std::string var;  // Var name / Lam binder
  LamP a, b;        // Lam body in a; App function in a, argument in b

  std::string print() const;
};

LamP lVar(const std::string& x);
LamP lLam(const std::string& x, LamP body);
LamP lApp(LamP f, LamP a);
LamP lConst(LTK c);

// Grammar: x | (lam x M) | (app M N) | C | P | star, with left-associating
// application sugar (M N P ...). The abbreviations I, K, S, Y, Omega, YK
// expand to the usual pure terms. Constants must be legal for the dialect.
LamP parseLambda(const Sexpr& e, Dialect d);
LamP parseLambda(const std::string& text, Dialect d);

bool lamClosed(const LamP& m);
int lamSize(const LamP& m);
LamP substLam(const LamP& m, const std::string& x, const LamP& s);
bool constantsLegal(const LamP& m, Dialect d);

// Big-step evaluation to weak head normal form. Fuel counts beta/delta
// steps; Diverges is reported only when the same configuration recurs on
// the evaluation path (every loop through identical closed terms is a
// genuinely infinite derivation), otherwise exhaustion yields FuelOut.
enum class WhnfStatus { Converges, Diverges, FuelOut };

struct WhnfResult {
  WhnfStatus status;
  LamP whnf;  // set when status == Converges
};

constexpr int kDefaultFuel = 10000;

WhnfResult evalWhnf(const LamP& m, Dialect d, int fuel = kDefaultFuel);

// One-step head reduction classification. Iterates the head reduction
// relation (which never reduces under binders) to normal form and reports
// its shape: an abstraction, the bare constant C, or a stuck application
// spine x N1..Nk wrapped in nestC applications of C and then applied to
// outer args. Supported dialects: Pure and WithC.
enum class ClassifyKind { DivergesOrFuelOut, AbstractionNF, ConstCNF, HeadForm };

struct Classification {
  ClassifyKind kind;
  std::string headVar;  // HeadForm
  int spineLen = 0;     // HeadForm: inner arguments k
  int nestC = 0;        // HeadForm: C nesting depth n
  int outerLen = 0;     // HeadForm: outer arguments m
  int steps = 0;        // head reductions performed
};

Classification classify(const LamP& m, Dialect d, int fuel = kDefaultFuel);

// Finite elements of the domain ladder D_0 = {bot}, D_{k+1} = (D_k -> D_k)
// lifted. An element is bottom or a lifted function kept as an irredundant
// set of step pairs; rank records which D_k the element was built in (the
// representation embeds into every higher rank unchanged).
struct LazyEl;
using LEP = std::shared_ptr<const LazyEl>;

struct LazyEl {
  bool bot = true;
  int rank = 0;
  std::vector<std::pair<LEP, LEP>> steps;

  std::string print() const;
};

LEP lBot();
// Canonicalizes: drops bottom-valued and dominated steps, sorts, dedups.
LEP lFun(int rank, std::vector<std::pair<LEP, LEP>> steps);

bool leqLazy(const LEP& u, const LEP& v);
bool lazyEq(const LEP& u, const LEP& v);
LEP joinLazy(const LEP& u, const LEP& v);
// Least-function application: join of step values whose argument is below a.
LEP applyLazy(const LEP& f, const LEP& a);
LEP truncLazy(const LEP& u, int rank);
LEP topLazy(int rank);

constexpr int kLazyRankCap = 4;

// All elements of D_k (k <= kLazyRankCap - 1; D_3 has 36 elements and D_4
// is too wide to enumerate). Throws RankExplosion past the cap.
const std::vector<LEP>& lazyElems(int rank);

// Rank-k denotation by head reduction: an abstraction in head position is
// tabulated over all of D_{k-1}, applications use least-function
// application, C and P denote their filter elements. Dialects Pure, WithC,
// WithP. Rank capped at kLazyRankCap; reduction is fuel-bounded internally
// with bottom as the honest answer for undetermined subcomputations.
LEP evalElem(const LamP& m, const std::map<std::string, LEP>& env, int k,
             Dialect d = Dialect::WithP);

LEP cElem(int rank);
LEP pElem(int rank);

// Formulas of the lazy domain logic: t | phi /\ psi | (phi -> psi)_bot.
struct LFormula;
using LFP = std::shared_ptr<const LFormula>;

enum class LFK { TopL, AndL, ArrBot };

struct LFormula {
  LFK kind;
  std::vector<LFP> kids;  // AndL, flattened and sorted
  LFP a, b;               // ArrBot

  std::string print() const;
};

LFP lfTop();
LFP lfAnd(std::vector<LFP> kids);
LFP lfArr(LFP a, LFP b);
LFP lfLambda();  // (t -> t)_bot

// Grammar: tt | (and f g ...) | (arr f g); the atom lam abbreviates
// (arr tt tt).
LFP parseLFormula(const Sexpr& e);
LFP parseLFormula(const std::string& text);

int lfDepth(const LFP& f);       // every connective counts one level
int lfArrowRank(const LFP& f);   // arrow nesting only: the rank that hosts f

// Principal element of a formula in D_{lfArrowRank(f)}.
LEP felem(const LFP& f);
bool satLazy(const LEP& e, const LFP& f);

// Entailment, decided on the arrow normal form: conjunctions of
// (phi -> psi)_bot distribute through ((->)_bot-/\) and collapse through
// ((->)_bot-t); /\_i (a_i -> b_i) <= /\_j (c_j -> d_j) iff the left side is
// nonempty and for each j, /\{b_i : c_j <= a_i} <= d_j.
bool entailsLazy(const LFP& phi, const LFP& psi);

// Program logic satisfaction: evaluate m at rank k in the environment of
// principal elements of gamma and test the result against phi. Requires
// k >= lfArrowRank(phi) and of every gamma entry.
bool lcheck(const LamP& m, const std::map<std::string, LFP>& gamma,
            const LFP& phi, int k);

// Characteristic terms of a formula in arrow normal form (conjunction of
// chains (phi_1 -> .. (phi_k -> lam)..)_bot), built over the single
// constant P with C M encoded as P M M: mPhi(phi) is a least term
// satisfying exactly the consequences of phi, tPhi(phi) a convergence
// tester for phi. Throws NotNL when phi is not in that syntactic form.
LamP mPhi(const LFP& phi);
LamP tPhi(const LFP& phi);

// Bounded applicative bisimulation refutation: tries argument tuples drawn
// from the corpus (lengths 0..k-1) and reports the first vector on which
// m's application converges while n's diverges. FuelOut applications are
// skipped, so Consistent makes no bisimilarity claim.
struct BisimCorpusResult {
  bool refuted = false;
  std::vector<LamP> witness;
};

BisimCorpusResult bisimCorpus(const LamP& m, const LamP& n, int k,
                              const std::vector<LamP>& corpus, Dialect d,
                              int fuel = kDefaultFuel);

}  // namespace dl
