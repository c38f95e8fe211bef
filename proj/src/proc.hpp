#pragma once
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "logic.hpp"
#include "sexpr.hpp"

namespace dl {

struct NotPNF : std::runtime_error {
  explicit NotPNF(const std::string& m) : std::runtime_error(m) {}
};
struct SortOverflow : std::runtime_error {
  explicit SortOverflow(const std::string& m) : std::runtime_error(m) {}
};

// Finite labelled transition system with a divergence predicate.
// File format: `acts a b c`, `trans p a q`, `div p`; states are collected
// from the trans/div lines (an optional `states p q` line declares isolated
// ones).
struct Lts {
  std::vector<std::string> states;
  std::vector<std::string> acts;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> trans;
  std::set<std::string> divSet;

  bool diverges(const std::string& p) const { return divSet.count(p) != 0; }
  const std::vector<std::pair<std::string, std::string>>& out(const std::string& p) const;
  std::set<std::string> initials(const std::string& p) const;
  void addState(const std::string& p);
  void addAct(const std::string& a);
  void addTrans(const std::string& p, const std::string& a, const std::string& q);

  static Lts parse(const std::string& text);
  std::string print() const;
};

// Largest prebisimulation, by fixpoint iteration from the full relation.
struct PrebisimResult {
  std::set<std::pair<std::string, std::string>> rel;
  int iterations = 0;  // stabilization index
};
PrebisimResult prebisimAll(const Lts& l);
bool prebisim(const Lts& l, const std::string& p, const std::string& q);

// Finite synchronisation trees: sums of prefixed subtrees, possibly with an
// Omega summand marking divergence.
struct SyncTree;
using SyncTreeP = std::shared_ptr<const SyncTree>;
struct SyncTree {
  std::vector<std::pair<std::string, SyncTreeP>> summands;
  bool omega = false;
  std::string print() const;
};
SyncTreeP stO();
SyncTreeP stOmega();
SyncTreeP stMake(std::vector<std::pair<std::string, SyncTreeP>> summands, bool omega);
// Embeds the tree into l as fresh states; returns the root state name.
std::string embedTree(Lts& l, const SyncTreeP& t, const std::string& prefix);

// The two-sorted process logic: pi-formulas speak about processes, kappa-
// formulas about single capabilities. t/f are the empty And/Or.
struct ProcFormula;
using PFP = std::shared_ptr<const ProcFormula>;

enum class PK { AndP, OrP, Box, Dia, AndK, OrK, ActF };

struct ProcFormula {
  PK kind;
  std::vector<PFP> kids;  // And/Or of either sort
  std::string act;        // ActF
  PFP a;                  // Box/Dia/ActF payload

  std::string print() const;
};

PFP pTop();
PFP pBot();
PFP kTop();
PFP kBot();
PFP pAnd(std::vector<PFP> kids);
PFP pOr(std::vector<PFP> kids);
PFP kAnd(std::vector<PFP> kids);
PFP kOr(std::vector<PFP> kids);
PFP pBox(PFP k);
PFP pDia(PFP k);
PFP kAct(const std::string& a, PFP p);

bool isPiSort(const PFP& f);

// Grammar: tt | ff | (and ...) | (or ...) | (box k) | (dia k) | (act a p).
// The sort of tt/ff and of and/or is fixed by position; top level is pi.
PFP parseProcFormula(const Sexpr& e, bool piSort = true);
PFP parseProcFormula(const std::string& text, bool piSort = true);

bool procFormulaEq(const PFP& x, const PFP& y);
int mdProc(const PFP& f);
size_t procFormulaSize(const PFP& f);

// phi-down: bottom does not satisfy phi.
bool downProc(const PFP& f);

// Satisfaction in a transition system. A capability is bottom (divergence)
// or an (action, state) pair.
struct Cap {
  bool bot = true;
  std::string act, state;
};
bool psat(const Lts& l, const std::string& p, const PFP& phi);
bool psatCap(const Lts& l, const Cap& c, const PFP& kappa);

// Finite elements of the synchronisation-tree domain, as generator sets:
// divergent marks bottom among the generators, caps are the <a,d> pairs.
// {divergent, {}} is bottom; {convergent, {}} is the empty process.
struct ProcElem;
using PEP = std::shared_ptr<const ProcElem>;
struct ProcElem {
  bool divergent = true;
  std::vector<std::pair<std::string, PEP>> caps;
  std::string print() const;
};
PEP peMake(bool divergent, std::vector<std::pair<std::string, PEP>> caps);
PEP peBottom();
PEP peEmpty();

// Egli-Milner order on generator sets, with {bot} below everything.
bool leqProc(const PEP& x, const PEP& y);
bool procElemEq(const PEP& x, const PEP& y);

// Prime normal forms and the strong disjunctive normal form.
bool isPNFProc(const PFP& f);
bool isSDNFProc(const PFP& f);

// The principal element of a PNF.
PEP kElem(const PFP& pnf);

// The defining PNF of a finite element.
PFP defFormula(const PEP& d);

// Normal form: disjunction of PNFs satisfying the convexity conditions.
// Modal depth never increases.
PFP sdnf(const PFP& phi);
std::vector<PFP> sdnfDisjuncts(const PFP& phi);

// The synchronisation tree of a PNF.
SyncTreeP stTree(const PFP& pnf);

// Entailment, via SDNF on both sides and element comparison.
bool entailsProc(const PFP& phi, const PFP& psi);

// Depth-truncated tree unfolding of a state as a finite element.
PEP universalSem(const Lts& l, const std::string& p, int depth);

// Hennessy-Milner logic, with the initial-actions predicate of the extended
// dialect.
struct Hml;
using HmlP = std::shared_ptr<const Hml>;
enum class HK { AndH, OrH, DiamA, BoxA, Init };
struct Hml {
  HK kind;
  std::vector<HmlP> kids;
  std::string act;
  HmlP a;
  std::set<std::string> inits;
  std::string print() const;
};
HmlP hTop();
HmlP hBot();
HmlP hAnd(std::vector<HmlP> kids);
HmlP hOr(std::vector<HmlP> kids);
HmlP hDiam(const std::string& a, HmlP f);
HmlP hBoxA(const std::string& a, HmlP f);
HmlP hInit(std::set<std::string> acts);

// Grammar: tt | ff | (and ...) | (or ...) | (diaa a f) | (boxa a f)
//        | (init a b ...)
HmlP parseHml(const Sexpr& e);
HmlP parseHml(const std::string& text);
int mdHml(const HmlP& f);
size_t hmlSize(const HmlP& f);

bool hmlSat(const Lts& l, const std::string& p, const HmlP& psi);

// HML -> process logic; requires every action of psi to be declared.
PFP star(const HmlP& psi, const std::vector<std::string>& acts);

// Rewrites a pi-formula into the normal form the inverse translation needs:
// box/dia payloads become action-atom disjunctions with distinct actions.
PFP nlNormalize(const PFP& phi);

// Process logic -> HML (extended dialect), on normalized input.
HmlP dagger(const PFP& phi, const std::vector<std::string>& acts);

}  // namespace dl
