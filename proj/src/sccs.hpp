#pragma once
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "elements.hpp"
#include "proc.hpp"
#include "sexpr.hpp"

namespace dl {

// Abelian action monoid: either a finite multiplication table (laws checked
// at load) or the free abelian monoid over declared generators, whose
// elements are finite multisets printed as dot-joined sorted generator lists
// with unit "1".
// File format: `monoid free a b` on one line, or
//   monoid table
//   elems 1 a b
//   unit 1
//   prod a a 1
//   ...
// Unit rows and commutative mirrors are filled in automatically.
struct ActMonoid {
  bool freeAbelian = true;
  std::vector<std::string> gens;   // free case
  std::vector<std::string> elems;  // table case
  std::string unit = "1";
  std::map<std::pair<std::string, std::string>, std::string> table;

  bool has(const std::string& a) const;
  std::string mul(const std::string& a, const std::string& b) const;

  static ActMonoid parse(const std::string& text);
  static ActMonoid freeOn(std::vector<std::string> gens);
};

// SCCS process terms over an action monoid.
struct SccsTerm;
using SccsP = std::shared_ptr<const SccsTerm>;

enum class SK { Nil, OmegaT, Prefix, Plus, Restrict, Relabel, Times, Var, Rec };

struct SccsTerm {
  SK kind;
  std::string act;                         // Prefix action / Var, Rec name
  std::set<std::string> restrictA;         // Restrict
  std::map<std::string, std::string> sub;  // Relabel map
  SccsP a, b;

  std::string print() const;
};

SccsP sO();
SccsP sOmega();
SccsP sPrefix(const std::string& a, SccsP t);
SccsP sPlus(SccsP a, SccsP b);
SccsP sRestrict(SccsP t, std::set<std::string> A);
SccsP sRelabel(SccsP t, std::map<std::string, std::string> S);
SccsP sTimes(SccsP a, SccsP b);
SccsP sVar(const std::string& x);
SccsP sRec(const std::string& x, SccsP t);

// Grammar: O | Omega | x | (pre a t) | (plus t t) | (restrict t (a b)) |
// (relabel t ((a b) (c d))) | (times t t) | (rec x t). Actions are checked
// against the monoid; relabelling maps must be monoid endomorphisms
// (generator maps in the free case, law-checked total maps in the table
// case).
SccsP parseSccs(const Sexpr& e, const ActMonoid& m);
SccsP parseSccs(const std::string& text, const ActMonoid& m);

int sccsHeight(const SccsP& t);
bool sccsClosed(const SccsP& t);
SccsP substSccs(const SccsP& t, const std::string& x, const SccsP& s);

enum class Tri { No, Yes, Unknown };

// One-step behavior, syntax-directed. Rec unfolds up to fuel; on fuel-out
// the divergence verdict degrades to Unknown and steps may be incomplete.
struct Steps {
  Tri div = Tri::No;
  bool complete = true;
  std::vector<std::pair<std::string, SccsP>> steps;
};
Steps transitions(const SccsP& t, const ActMonoid& m, int fuel);

// Compositional denotation into the tree domain, truncated at depth k.
// Recursion is a fixpoint iteration from bottom. Throws RankExplosion when
// the element outgrows the global cap.
PEP denoteSccs(const SccsP& t, const ActMonoid& m, int k);

// Recursion-free unfoldings reachable by at most n outermost-first rec
// unfoldings, with remaining rec subterms cut to Omega.
std::vector<SccsP> approximants(const SccsP& t, int n);

// Explores the reachable transition system of both terms and runs the
// prebisimulation preorder in both directions. definite is false when any
// transition query hit the fuel limit or exploration was cut off.
struct BisimVerdict {
  bool definite = true;
  bool leq12 = false;
  bool leq21 = false;
};
BisimVerdict bisimTerms(const SccsP& t1, const SccsP& t2, const ActMonoid& m,
                        int fuel);

// Operational preorders vs order of denotations at full height, for
// recursion-free terms.
struct FaReport {
  bool opLeq12, opLeq21, denLeq12, denLeq21;
  bool agree;
};
FaReport fullAbstractionReport(const SccsP& t1, const SccsP& t2,
                               const ActMonoid& m);

}  // namespace dl
