#pragma once
// Random SCCS terms over a small free abelian action monoid.
#include "gen.hpp"
#include "sccs.hpp"

namespace dl::gen {

inline std::string randAct(Rng& rng, const ActMonoid& m) {
  if (m.freeAbelian) return m.gens[pick(rng, (int)m.gens.size())];
  return m.elems[pick(rng, (int)m.elems.size())];
}

inline SccsP randSccsTerm(Rng& rng, const ActMonoid& m, int height) {
  if (height <= 1) return coin(rng) ? sO() : sOmega();
  switch (pick(rng, 8)) {
    case 0: return sO();
    case 1: return sOmega();
    case 2:
    case 3: return sPrefix(randAct(rng, m), randSccsTerm(rng, m, height - 1));
    case 4:
      return sPlus(randSccsTerm(rng, m, height - 1),
                   randSccsTerm(rng, m, height - 1));
    case 5:
      return sTimes(randSccsTerm(rng, m, height - 1),
                    randSccsTerm(rng, m, height - 1));
    case 6: {
      std::set<std::string> A = {randAct(rng, m)};
      if (coin(rng)) A.insert(m.mul(randAct(rng, m), randAct(rng, m)));
      return sRestrict(randSccsTerm(rng, m, height - 1), std::move(A));
    }
    default: {
      std::map<std::string, std::string> S;
      if (m.freeAbelian) {
        for (auto& g : m.gens)
          S[g] = coin(rng) ? randAct(rng, m) : std::string("1");
      }
      return sRelabel(randSccsTerm(rng, m, height - 1), std::move(S));
    }
  }
}

// Guarded single-recursion terms: every recursive call sits under a prefix,
// so n unfoldings push the Omega cut below depth n.
inline SccsP randGuardedRec(Rng& rng, const ActMonoid& m) {
  std::string a = randAct(rng, m), b = randAct(rng, m);
  SccsP x = sVar("x");
  SccsP body;
  switch (pick(rng, 4)) {
    case 0: body = sPrefix(a, x); break;
    case 1: body = sPlus(sPrefix(a, x), sPrefix(b, sO())); break;
    case 2: body = sPlus(sPrefix(a, sPrefix(b, x)), sOmega()); break;
    default: body = sPrefix(a, sPlus(x, sPrefix(b, sO()))); break;
  }
  SccsP r = sRec("x", body);
  switch (pick(rng, 4)) {
    case 0: return r;
    case 1: return sRestrict(r, {a});
    case 2: return sPlus(r, randSccsTerm(rng, m, 2));
    default: return sTimes(r, sPrefix(b, sO()));
  }
}

}  // namespace dl::gen
