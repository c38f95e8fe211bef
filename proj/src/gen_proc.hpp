#pragma once
// Random transition systems and modal process formulas.
#include "gen.hpp"
#include "proc.hpp"

namespace dl::gen {

inline Lts randLts(Rng& rng, int nStates, const std::vector<std::string>& acts,
                   int maxOut = 2, int divPercent = 30) {
  Lts l;
  for (int i = 0; i < nStates; i++) l.addState("s" + std::to_string(i));
  for (auto& a : acts) l.addAct(a);
  for (int i = 0; i < nStates; i++) {
    std::string p = "s" + std::to_string(i);
    int k = pick(rng, maxOut + 1);
    for (int j = 0; j < k; j++)
      l.addTrans(p, acts[pick(rng, (int)acts.size())],
                 "s" + std::to_string(pick(rng, nStates)));
    if (pick(rng, 100) < divPercent) l.divSet.insert(p);
  }
  return l;
}

inline PFP randProcFormula(Rng& rng, const std::vector<std::string>& acts,
                           int depth, bool piSort = true) {
  if (piSort) {
    if (depth <= 0) return coin(rng) ? pTop() : pBot();
    switch (pick(rng, 6)) {
      case 0: return pTop();
      case 1: return pBot();
      case 2:
        return pAnd({randProcFormula(rng, acts, depth - 1, true),
                     randProcFormula(rng, acts, depth - 1, true)});
      case 3:
        return pOr({randProcFormula(rng, acts, depth - 1, true),
                    randProcFormula(rng, acts, depth - 1, true)});
      case 4: return pBox(randProcFormula(rng, acts, depth - 1, false));
      default: return pDia(randProcFormula(rng, acts, depth - 1, false));
    }
  }
  if (depth <= 0) return coin(rng) ? kTop() : kBot();
  switch (pick(rng, 5)) {
    case 0: return kTop();
    case 1: return kBot();
    case 2:
      return kAnd({randProcFormula(rng, acts, depth - 1, false),
                   randProcFormula(rng, acts, depth - 1, false)});
    case 3:
      return kOr({randProcFormula(rng, acts, depth - 1, false),
                  randProcFormula(rng, acts, depth - 1, false)});
    default:
      return kAct(acts[pick(rng, (int)acts.size())],
                  randProcFormula(rng, acts, depth - 1, true));
  }
}

// Random finite element of the tree domain, as a generator set.
inline PEP randProcElem(Rng& rng, const std::vector<std::string>& acts, int depth) {
  if (depth <= 0) return coin(rng) ? peBottom() : peEmpty();
  std::vector<std::pair<std::string, PEP>> caps;
  int k = pick(rng, 3);
  for (int i = 0; i < k; i++)
    caps.emplace_back(acts[pick(rng, (int)acts.size())],
                      randProcElem(rng, acts, depth - 1));
  return peMake(coin(rng), std::move(caps));
}

inline HmlP randHml(Rng& rng, const std::vector<std::string>& acts, int depth,
                    bool withInit = true) {
  if (depth <= 0) return coin(rng) ? hTop() : hBot();
  switch (pick(rng, withInit ? 7 : 6)) {
    case 0: return hTop();
    case 1: return hBot();
    case 2:
      return hAnd({randHml(rng, acts, depth - 1, withInit),
                   randHml(rng, acts, depth - 1, withInit)});
    case 3:
      return hOr({randHml(rng, acts, depth - 1, withInit),
                  randHml(rng, acts, depth - 1, withInit)});
    case 4:
      return hDiam(acts[pick(rng, (int)acts.size())],
                   randHml(rng, acts, depth - 1, withInit));
    case 5:
      return hBoxA(acts[pick(rng, (int)acts.size())],
                   randHml(rng, acts, depth - 1, withInit));
    default: {
      std::set<std::string> s;
      for (auto& a : acts)
        if (coin(rng)) s.insert(a);
      return hInit(std::move(s));
    }
  }
}

}  // namespace dl::gen
