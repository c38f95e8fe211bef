#include "sccs.hpp"

#include <algorithm>
#include <sstream>

namespace dl {

// ------------------------------------------------------------- ActMonoid

namespace {

std::vector<std::string> splitAct(const std::string& a) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : a) {
    if (c == '.') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  std::vector<std::string> out;
  for (auto& p : parts)
    if (p != "1") out.push_back(p);
  return out;
}

std::string joinAct(std::vector<std::string> parts) {
  if (parts.empty()) return "1";
  std::sort(parts.begin(), parts.end());
  std::string s = parts[0];
  for (size_t i = 1; i < parts.size(); i++) s += "." + parts[i];
  return s;
}

}  // namespace

bool ActMonoid::has(const std::string& a) const {
  if (!freeAbelian)
    return std::find(elems.begin(), elems.end(), a) != elems.end();
  for (auto& p : splitAct(a))
    if (std::find(gens.begin(), gens.end(), p) == gens.end()) return false;
  return true;
}

std::string ActMonoid::mul(const std::string& a, const std::string& b) const {
  if (freeAbelian) {
    std::vector<std::string> parts = splitAct(a);
    for (auto& p : splitAct(b)) parts.push_back(p);
    return joinAct(std::move(parts));
  }
  auto it = table.find({a, b});
  if (it == table.end()) throw ParseError("product undefined: " + a + " " + b);
  return it->second;
}

ActMonoid ActMonoid::freeOn(std::vector<std::string> gens) {
  ActMonoid m;
  m.freeAbelian = true;
  m.gens = std::move(gens);
  return m;
}

ActMonoid ActMonoid::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string w;
    while (ls >> w) toks.push_back(w);
    if (!toks.empty()) rows.push_back(std::move(toks));
  }
  if (rows.empty() || rows[0][0] != "monoid")
    throw ParseError("monoid file must start with a monoid line");
  if (rows[0].size() >= 2 && rows[0][1] == "free")
    return freeOn({rows[0].begin() + 2, rows[0].end()});
  if (rows[0].size() < 2 || rows[0][1] != "table")
    throw ParseError("unknown monoid kind");
  ActMonoid m;
  m.freeAbelian = false;
  for (size_t i = 1; i < rows.size(); i++) {
    auto& r = rows[i];
    if (r[0] == "elems")
      m.elems.assign(r.begin() + 1, r.end());
    else if (r[0] == "unit" && r.size() == 2)
      m.unit = r[1];
    else if (r[0] == "prod" && r.size() == 4)
      m.table[{r[1], r[2]}] = r[3];
    else
      throw ParseError("bad monoid line: " + r[0]);
  }
  if (!m.has(m.unit)) throw ParseError("unit not among the elements");
  // fill unit rows and commutative mirrors, then check the laws
  for (auto& e : m.elems) {
    m.table[{m.unit, e}] = e;
    m.table[{e, m.unit}] = e;
  }
  for (auto& [ab, c] : std::map<std::pair<std::string, std::string>, std::string>(
           m.table))
    if (!m.table.count({ab.second, ab.first}))
      m.table[{ab.second, ab.first}] = c;
  for (auto& a : m.elems)
    for (auto& b : m.elems) {
      if (!m.table.count({a, b}))
        throw ParseError("product table incomplete: " + a + " " + b);
      if (!m.has(m.mul(a, b)))
        throw ParseError("product leaves the carrier: " + a + " " + b);
      if (m.mul(a, b) != m.mul(b, a))
        throw ParseError("product not commutative: " + a + " " + b);
    }
  for (auto& a : m.elems)
    for (auto& b : m.elems)
      for (auto& c : m.elems)
        if (m.mul(m.mul(a, b), c) != m.mul(a, m.mul(b, c)))
          throw ParseError("product not associative: " + a + " " + b + " " + c);
  return m;
}

namespace {

std::string applyRelabel(const ActMonoid& m,
                         const std::map<std::string, std::string>& S,
                         const std::string& a) {
  if (!m.freeAbelian) {
    auto it = S.find(a);
    if (it == S.end()) throw ParseError("relabelling not total at " + a);
    return it->second;
  }
  std::string out = "1";
  for (auto& g : splitAct(a)) {
    auto it = S.find(g);
    out = m.mul(out, it == S.end() ? g : it->second);
  }
  return out;
}

}  // namespace

// -------------------------------------------------------------- SccsTerm

namespace {
SccsP mkS(SK k) {
  auto t = std::make_shared<SccsTerm>();
  const_cast<SccsTerm&>(*t).kind = k;
  return t;
}
SccsTerm& mutS(const SccsP& t) { return const_cast<SccsTerm&>(*t); }
}  // namespace

SccsP sO() { return mkS(SK::Nil); }
SccsP sOmega() { return mkS(SK::OmegaT); }
SccsP sPrefix(const std::string& a, SccsP t) {
  auto r = mkS(SK::Prefix);
  mutS(r).act = a;
  mutS(r).a = std::move(t);
  return r;
}
SccsP sPlus(SccsP a, SccsP b) {
  auto r = mkS(SK::Plus);
  mutS(r).a = std::move(a);
  mutS(r).b = std::move(b);
  return r;
}
SccsP sRestrict(SccsP t, std::set<std::string> A) {
  auto r = mkS(SK::Restrict);
  mutS(r).a = std::move(t);
  mutS(r).restrictA = std::move(A);
  return r;
}
SccsP sRelabel(SccsP t, std::map<std::string, std::string> S) {
  auto r = mkS(SK::Relabel);
  mutS(r).a = std::move(t);
  mutS(r).sub = std::move(S);
  return r;
}
SccsP sTimes(SccsP a, SccsP b) {
  auto r = mkS(SK::Times);
  mutS(r).a = std::move(a);
  mutS(r).b = std::move(b);
  return r;
}
SccsP sVar(const std::string& x) {
  auto r = mkS(SK::Var);
  mutS(r).act = x;
  return r;
}
SccsP sRec(const std::string& x, SccsP t) {
  auto r = mkS(SK::Rec);
  mutS(r).act = x;
  mutS(r).a = std::move(t);
  return r;
}

std::string SccsTerm::print() const {
  switch (kind) {
    case SK::Nil: return "O";
    case SK::OmegaT: return "Omega";
    case SK::Prefix: return "(pre " + act + " " + a->print() + ")";
    case SK::Plus: return "(plus " + a->print() + " " + b->print() + ")";
    case SK::Restrict: {
      std::string s = "(restrict " + a->print() + " (";
      bool first = true;
      for (auto& x : restrictA) {
        if (!first) s += " ";
        first = false;
        s += x;
      }
      return s + "))";
    }
    case SK::Relabel: {
      std::string s = "(relabel " + a->print() + " (";
      bool first = true;
      for (auto& [x, y] : sub) {
        if (!first) s += " ";
        first = false;
        s += "(" + x + " " + y + ")";
      }
      return s + "))";
    }
    case SK::Times: return "(times " + a->print() + " " + b->print() + ")";
    case SK::Var: return act;
    case SK::Rec: return "(rec " + act + " " + a->print() + ")";
  }
  return "?";
}

SccsP parseSccs(const Sexpr& e, const ActMonoid& m) {
  if (e.atom) {
    if (e.sym == "O") return sO();
    if (e.sym == "Omega") return sOmega();
    return sVar(e.sym);
  }
  if (e.items.empty() || !e.items[0].atom) throw ParseError("bad term: " + e.print());
  const std::string& h = e.items[0].sym;
  if (h == "pre" && e.size() == 3 && e[1].atom) {
    if (!m.has(e[1].sym)) throw ParseError("unknown action: " + e[1].sym);
    return sPrefix(e[1].sym, parseSccs(e[2], m));
  }
  if (h == "plus" && e.size() == 3)
    return sPlus(parseSccs(e[1], m), parseSccs(e[2], m));
  if (h == "times" && e.size() == 3)
    return sTimes(parseSccs(e[1], m), parseSccs(e[2], m));
  if (h == "restrict" && e.size() == 3 && e[2].isList()) {
    std::set<std::string> A;
    for (auto& x : e[2].items) {
      if (!x.atom || !m.has(x.sym)) throw ParseError("bad restriction set");
      A.insert(x.sym);
    }
    return sRestrict(parseSccs(e[1], m), std::move(A));
  }
  if (h == "relabel" && e.size() == 3 && e[2].isList()) {
    std::map<std::string, std::string> S;
    for (auto& p : e[2].items) {
      if (p.atom || p.size() != 2 || !p[0].atom || !p[1].atom)
        throw ParseError("bad relabelling pair");
      if (!m.has(p[0].sym) || !m.has(p[1].sym))
        throw ParseError("relabelling over unknown actions");
      S[p[0].sym] = p[1].sym;
    }
    if (m.freeAbelian) {
      for (auto& [x, y] : S)
        if (std::find(m.gens.begin(), m.gens.end(), x) == m.gens.end())
          throw ParseError("free relabelling must map generators: " + x);
    } else {
      for (auto& x : m.elems)
        if (!S.count(x)) throw ParseError("relabelling not total at " + x);
      if (S.at(m.unit) != m.unit)
        throw ParseError("relabelling does not fix the unit");
      for (auto& x : m.elems)
        for (auto& y : m.elems)
          if (S.at(m.mul(x, y)) != m.mul(S.at(x), S.at(y)))
            throw ParseError("relabelling is not an endomorphism at " + x + " " + y);
    }
    return sRelabel(parseSccs(e[1], m), std::move(S));
  }
  if (h == "rec" && e.size() == 3 && e[1].atom)
    return sRec(e[1].sym, parseSccs(e[2], m));
  throw ParseError("bad term: " + e.print());
}

SccsP parseSccs(const std::string& text, const ActMonoid& m) {
  return parseSccs(parseSexpr(text), m);
}

int sccsHeight(const SccsP& t) {
  int h = 0;
  if (t->a) h = std::max(h, sccsHeight(t->a));
  if (t->b) h = std::max(h, sccsHeight(t->b));
  return h + 1;
}

namespace {
void freeVars(const SccsP& t, std::set<std::string>& bound,
              std::set<std::string>& out) {
  if (t->kind == SK::Var) {
    if (!bound.count(t->act)) out.insert(t->act);
    return;
  }
  if (t->kind == SK::Rec) {
    bool fresh = bound.insert(t->act).second;
    freeVars(t->a, bound, out);
    if (fresh) bound.erase(t->act);
    return;
  }
  if (t->a) freeVars(t->a, bound, out);
  if (t->b) freeVars(t->b, bound, out);
}
}  // namespace

bool sccsClosed(const SccsP& t) {
  std::set<std::string> bound, out;
  freeVars(t, bound, out);
  return out.empty();
}

SccsP substSccs(const SccsP& t, const std::string& x, const SccsP& s) {
  switch (t->kind) {
    case SK::Var: return t->act == x ? s : t;
    case SK::Rec:
      if (t->act == x) return t;
      return sRec(t->act, substSccs(t->a, x, s));
    case SK::Prefix: return sPrefix(t->act, substSccs(t->a, x, s));
    case SK::Plus: return sPlus(substSccs(t->a, x, s), substSccs(t->b, x, s));
    case SK::Times: return sTimes(substSccs(t->a, x, s), substSccs(t->b, x, s));
    case SK::Restrict: return sRestrict(substSccs(t->a, x, s), t->restrictA);
    case SK::Relabel: return sRelabel(substSccs(t->a, x, s), t->sub);
    default: return t;
  }
}

// ------------------------------------------------------------ transitions

namespace {
Tri triOr(Tri a, Tri b) {
  if (a == Tri::Yes || b == Tri::Yes) return Tri::Yes;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::No;
}

void pushStep(Steps& s, const std::string& a, SccsP t) {
  for (auto& [b, u] : s.steps)
    if (b == a && u->print() == t->print()) return;
  s.steps.emplace_back(a, std::move(t));
}
}  // namespace

Steps transitions(const SccsP& t, const ActMonoid& m, int fuel) {
  Steps s;
  switch (t->kind) {
    case SK::Nil: return s;
    case SK::OmegaT: s.div = Tri::Yes; return s;
    case SK::Prefix: s.steps.emplace_back(t->act, t->a); return s;
    case SK::Plus: {
      Steps s1 = transitions(t->a, m, fuel);
      Steps s2 = transitions(t->b, m, fuel);
      s.div = triOr(s1.div, s2.div);
      s.complete = s1.complete && s2.complete;
      for (auto& [a, u] : s1.steps) pushStep(s, a, u);
      for (auto& [a, u] : s2.steps) pushStep(s, a, u);
      return s;
    }
    case SK::Restrict: {
      Steps s1 = transitions(t->a, m, fuel);
      s.div = s1.div;
      s.complete = s1.complete;
      for (auto& [a, u] : s1.steps)
        if (t->restrictA.count(a)) pushStep(s, a, sRestrict(u, t->restrictA));
      return s;
    }
    case SK::Relabel: {
      Steps s1 = transitions(t->a, m, fuel);
      s.div = s1.div;
      s.complete = s1.complete;
      for (auto& [a, u] : s1.steps)
        pushStep(s, applyRelabel(m, t->sub, a), sRelabel(u, t->sub));
      return s;
    }
    case SK::Times: {
      Steps s1 = transitions(t->a, m, fuel);
      Steps s2 = transitions(t->b, m, fuel);
      s.div = triOr(s1.div, s2.div);
      s.complete = s1.complete && s2.complete;
      for (auto& [a, u] : s1.steps)
        for (auto& [b, v] : s2.steps) pushStep(s, m.mul(a, b), sTimes(u, v));
      return s;
    }
    case SK::Var: throw ParseError("transitions of an open term: " + t->act);
    case SK::Rec: {
      if (fuel <= 0) {
        s.div = Tri::Unknown;
        s.complete = false;
        return s;
      }
      // divergence through the Omega-substituted body, steps through one
      // unfolding
      Tri d = transitions(substSccs(t->a, t->act, sOmega()), m, fuel - 1).div;
      Steps inner = transitions(substSccs(t->a, t->act, t), m, fuel - 1);
      s.div = d;
      s.complete = inner.complete;
      s.steps = std::move(inner.steps);
      return s;
    }
  }
  return s;
}

// ----------------------------------------------------------- denotation

namespace {

size_t peSize(const PEP& d) {
  size_t n = 1;
  for (auto& [a, e] : d->caps) n += peSize(e);
  return n;
}

constexpr size_t kDenoteCap = 50000;

// depth truncation: the environment re-injects iterates at full size, so the
// fixpoint loop cuts them back to the requested depth
PEP truncPE(const PEP& d, int k) {
  if (k <= 0) return peBottom();
  std::vector<std::pair<std::string, PEP>> caps;
  for (auto& [a, e] : d->caps) caps.emplace_back(a, truncPE(e, k - 1));
  return peMake(d->divergent, std::move(caps));
}

using SccsEnv = std::map<std::string, PEP>;

PEP restrictElem(const PEP& d, const std::set<std::string>& A) {
  std::vector<std::pair<std::string, PEP>> caps;
  for (auto& [a, e] : d->caps)
    if (A.count(a)) caps.emplace_back(a, restrictElem(e, A));
  return peMake(d->divergent, std::move(caps));
}

PEP relabelElem(const ActMonoid& m, const PEP& d,
                const std::map<std::string, std::string>& S) {
  std::vector<std::pair<std::string, PEP>> caps;
  for (auto& [a, e] : d->caps)
    caps.emplace_back(applyRelabel(m, S, a), relabelElem(m, e, S));
  return peMake(d->divergent, std::move(caps));
}

PEP timesElem(const ActMonoid& m, const PEP& d1, const PEP& d2) {
  std::vector<std::pair<std::string, PEP>> caps;
  for (auto& [a, u] : d1->caps)
    for (auto& [b, v] : d2->caps)
      caps.emplace_back(m.mul(a, b), timesElem(m, u, v));
  PEP r = peMake(d1->divergent || d2->divergent, std::move(caps));
  if (peSize(r) > kDenoteCap) throw RankExplosion("product denotation too large");
  return r;
}

PEP denote1(const SccsP& t, const ActMonoid& m, const SccsEnv& env, int k) {
  if (k <= 0) return peBottom();
  switch (t->kind) {
    case SK::Nil: return peEmpty();
    case SK::OmegaT: return peBottom();
    case SK::Prefix: return peMake(false, {{t->act, denote1(t->a, m, env, k - 1)}});
    case SK::Plus: {
      PEP d1 = denote1(t->a, m, env, k);
      PEP d2 = denote1(t->b, m, env, k);
      std::vector<std::pair<std::string, PEP>> caps = d1->caps;
      for (auto& c : d2->caps) caps.push_back(c);
      return peMake(d1->divergent || d2->divergent, std::move(caps));
    }
    case SK::Restrict:
      return restrictElem(denote1(t->a, m, env, k), t->restrictA);
    case SK::Relabel: return relabelElem(m, denote1(t->a, m, env, k), t->sub);
    case SK::Times:
      return timesElem(m, denote1(t->a, m, env, k), denote1(t->b, m, env, k));
    case SK::Var: {
      auto it = env.find(t->act);
      if (it == env.end()) throw ParseError("denotation of an open term: " + t->act);
      return it->second;
    }
    case SK::Rec: {
      PEP d = peBottom();
      for (int i = 0; i < k + 4; i++) {
        SccsEnv e2 = env;
        e2[t->act] = d;
        PEP nd = truncPE(denote1(t->a, m, e2, k), k);
        if (peSize(nd) > kDenoteCap)
          throw RankExplosion("recursive denotation too large");
        if (procElemEq(nd, d)) break;
        d = nd;
      }
      return d;
    }
  }
  return peBottom();
}

}  // namespace

PEP denoteSccs(const SccsP& t, const ActMonoid& m, int k) {
  return denote1(t, m, {}, k);
}

// ----------------------------------------------------------- approximants

namespace {
void approx1(const SccsP& t, int n, std::vector<SccsP>& out) {
  switch (t->kind) {
    case SK::Nil:
    case SK::OmegaT:
    case SK::Var: out.push_back(t); return;
    case SK::Prefix: {
      std::vector<SccsP> subs;
      approx1(t->a, n, subs);
      for (auto& s : subs) out.push_back(sPrefix(t->act, s));
      return;
    }
    case SK::Restrict: {
      std::vector<SccsP> subs;
      approx1(t->a, n, subs);
      for (auto& s : subs) out.push_back(sRestrict(s, t->restrictA));
      return;
    }
    case SK::Relabel: {
      std::vector<SccsP> subs;
      approx1(t->a, n, subs);
      for (auto& s : subs) out.push_back(sRelabel(s, t->sub));
      return;
    }
    case SK::Plus:
    case SK::Times: {
      std::vector<SccsP> l, r;
      approx1(t->a, n, l);
      approx1(t->b, n, r);
      for (auto& x : l)
        for (auto& y : r)
          out.push_back(t->kind == SK::Plus ? sPlus(x, y) : sTimes(x, y));
      return;
    }
    case SK::Rec: {
      out.push_back(sOmega());
      if (n > 0) approx1(substSccs(t->a, t->act, t), n - 1, out);
      return;
    }
  }
}
}  // namespace

std::vector<SccsP> approximants(const SccsP& t, int n) {
  std::vector<SccsP> raw;
  approx1(t, n, raw);
  std::sort(raw.begin(), raw.end(), [](const SccsP& x, const SccsP& y) {
    auto hx = sccsHeight(x), hy = sccsHeight(y);
    return hx < hy || (hx == hy && x->print() < y->print());
  });
  raw.erase(std::unique(raw.begin(), raw.end(),
                        [](const SccsP& x, const SccsP& y) {
                          return x->print() == y->print();
                        }),
            raw.end());
  return raw;
}

// ---------------------------------------------------------- bisimulation

BisimVerdict bisimTerms(const SccsP& t1, const SccsP& t2, const ActMonoid& m,
                        int fuel) {
  BisimVerdict v;
  Lts l;
  std::map<std::string, SccsP> todo = {{t1->print(), t1}, {t2->print(), t2}};
  std::set<std::string> done;
  while (!todo.empty()) {
    if (done.size() > 3000) {
      v.definite = false;
      break;
    }
    auto [name, term] = *todo.begin();
    todo.erase(todo.begin());
    if (!done.insert(name).second) continue;
    l.addState(name);
    Steps s = transitions(term, m, fuel);
    if (s.div != Tri::No) l.divSet.insert(name);
    if (s.div == Tri::Unknown || !s.complete) v.definite = false;
    for (auto& [a, u] : s.steps) {
      std::string un = u->print();
      l.addTrans(name, a, un);
      if (!done.count(un)) todo[un] = u;
    }
  }
  PrebisimResult r = prebisimAll(l);
  v.leq12 = r.rel.count({t1->print(), t2->print()}) != 0;
  v.leq21 = r.rel.count({t2->print(), t1->print()}) != 0;
  return v;
}

FaReport fullAbstractionReport(const SccsP& t1, const SccsP& t2,
                               const ActMonoid& m) {
  int h = std::max(sccsHeight(t1), sccsHeight(t2));
  BisimVerdict v = bisimTerms(t1, t2, m, h + 1);
  PEP d1 = denoteSccs(t1, m, h);
  PEP d2 = denoteSccs(t2, m, h);
  FaReport r;
  r.opLeq12 = v.leq12;
  r.opLeq21 = v.leq21;
  r.denLeq12 = leqProc(d1, d2);
  r.denLeq21 = leqProc(d2, d1);
  r.agree = v.definite && r.opLeq12 == r.denLeq12 && r.opLeq21 == r.denLeq21;
  return r;
}

}  // namespace dl
