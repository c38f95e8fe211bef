#include "proc.hpp"

#include <algorithm>
#include <sstream>

namespace dl {

// ------------------------------------------------------------------- Lts

const std::vector<std::pair<std::string, std::string>>& Lts::out(
    const std::string& p) const {
  static const std::vector<std::pair<std::string, std::string>> none;
  auto it = trans.find(p);
  return it == trans.end() ? none : it->second;
}

std::set<std::string> Lts::initials(const std::string& p) const {
  std::set<std::string> r;
  for (auto& [a, q] : out(p)) r.insert(a);
  return r;
}

void Lts::addState(const std::string& p) {
  if (std::find(states.begin(), states.end(), p) == states.end()) states.push_back(p);
}

void Lts::addAct(const std::string& a) {
  if (std::find(acts.begin(), acts.end(), a) == acts.end()) acts.push_back(a);
}

void Lts::addTrans(const std::string& p, const std::string& a, const std::string& q) {
  addState(p);
  addState(q);
  addAct(a);
  trans[p].emplace_back(a, q);
}

Lts Lts::parse(const std::string& text) {
  Lts l;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "acts") {
      std::string a;
      while (ls >> a) l.addAct(a);
    } else if (head == "states") {
      std::string p;
      while (ls >> p) l.addState(p);
    } else if (head == "trans") {
      std::string p, a, q;
      if (!(ls >> p >> a >> q)) throw ParseError("bad trans line: " + line);
      l.addTrans(p, a, q);
    } else if (head == "div") {
      std::string p;
      while (ls >> p) {
        l.addState(p);
        l.divSet.insert(p);
      }
    } else {
      throw ParseError("unknown transition-system line: " + line);
    }
  }
  return l;
}

std::string Lts::print() const {
  std::string s = "acts";
  for (auto& a : acts) s += " " + a;
  s += "\n";
  for (auto& st : states) s += "states " + st + "\n";
  for (auto& [p, ts] : trans)
    for (auto& [a, q] : ts) s += "trans " + p + " " + a + " " + q + "\n";
  for (auto& p : divSet) s += "div " + p + "\n";
  return s;
}

// ------------------------------------------------------------ prebisim

PrebisimResult prebisimAll(const Lts& l) {
  using Pair = std::pair<std::string, std::string>;
  std::set<Pair> rel;
  for (auto& p : l.states)
    for (auto& q : l.states) rel.insert({p, q});
  PrebisimResult res;
  bool changed = true;
  while (changed) {
    changed = false;
    std::set<Pair> next;
    for (auto& [p, q] : rel) {
      bool ok = true;
      for (auto& [a, p2] : l.out(p)) {
        bool matched = false;
        for (auto& [b, q2] : l.out(q))
          if (a == b && rel.count({p2, q2})) {
            matched = true;
            break;
          }
        if (!matched) {
          ok = false;
          break;
        }
      }
      if (ok && !l.diverges(p)) {
        if (l.diverges(q)) ok = false;
        for (auto& [b, q2] : l.out(q)) {
          if (!ok) break;
          bool matched = false;
          for (auto& [a, p2] : l.out(p))
            if (a == b && rel.count({p2, q2})) {
              matched = true;
              break;
            }
          if (!matched) ok = false;
        }
      }
      if (ok) next.insert({p, q});
    }
    if (next != rel) {
      changed = true;
      rel = std::move(next);
      res.iterations++;
    }
  }
  res.rel = std::move(rel);
  return res;
}

bool prebisim(const Lts& l, const std::string& p, const std::string& q) {
  return prebisimAll(l).rel.count({p, q}) != 0;
}

// ----------------------------------------------------------- sync trees

namespace {
SyncTreeP stShare(std::vector<std::pair<std::string, SyncTreeP>> s, bool omega) {
  auto t = std::make_shared<SyncTree>();
  const_cast<SyncTree&>(*t).summands = std::move(s);
  const_cast<SyncTree&>(*t).omega = omega;
  return t;
}
}  // namespace

SyncTreeP stO() { return stShare({}, false); }
SyncTreeP stOmega() { return stShare({}, true); }
SyncTreeP stMake(std::vector<std::pair<std::string, SyncTreeP>> summands, bool omega) {
  return stShare(std::move(summands), omega);
}

std::string SyncTree::print() const {
  if (summands.empty()) return omega ? "Omega" : "O";
  std::string s = "(+";
  for (auto& [a, t] : summands) s += " (" + a + " . " + t->print() + ")";
  if (omega) s += " Omega";
  return s + ")";
}

std::string embedTree(Lts& l, const SyncTreeP& t, const std::string& prefix) {
  static thread_local int counter = 0;
  std::string root = prefix + "#" + std::to_string(counter++);
  l.addState(root);
  if (t->omega) l.divSet.insert(root);
  for (auto& [a, sub] : t->summands) l.addTrans(root, a, embedTree(l, sub, prefix));
  return root;
}

// --------------------------------------------------------- ProcFormula

namespace {

PFP mkPF(PK k) {
  auto f = std::make_shared<ProcFormula>();
  const_cast<ProcFormula&>(*f).kind = k;
  return f;
}
ProcFormula& mutPF(const PFP& f) { return const_cast<ProcFormula&>(*f); }

PFP junction(PK kind, std::vector<PFP> kids, PK unitKind) {
  std::vector<PFP> flat;
  for (auto& k : kids) {
    if (k->kind == kind) {
      for (auto& kk : k->kids) flat.push_back(kk);
    } else if (k->kind == unitKind && k->kids.empty()) {
      // tt in a conjunction / ff in a disjunction contributes nothing
    } else {
      flat.push_back(k);
    }
  }
  std::sort(flat.begin(), flat.end(),
            [](const PFP& x, const PFP& y) { return x->print() < y->print(); });
  flat.erase(std::unique(flat.begin(), flat.end(),
                         [](const PFP& x, const PFP& y) {
                           return x->print() == y->print();
                         }),
             flat.end());
  if (flat.size() == 1) return flat[0];
  auto f = mkPF(kind);
  mutPF(f).kids = std::move(flat);
  return f;
}

}  // namespace

PFP pTop() { return pAnd({}); }
PFP pBot() { return pOr({}); }
PFP kTop() { return kAnd({}); }
PFP kBot() { return kOr({}); }
PFP pAnd(std::vector<PFP> kids) { return junction(PK::AndP, std::move(kids), PK::AndP); }
PFP pOr(std::vector<PFP> kids) { return junction(PK::OrP, std::move(kids), PK::OrP); }
PFP kAnd(std::vector<PFP> kids) { return junction(PK::AndK, std::move(kids), PK::AndK); }
PFP kOr(std::vector<PFP> kids) { return junction(PK::OrK, std::move(kids), PK::OrK); }
PFP pBox(PFP k) {
  auto f = mkPF(PK::Box);
  mutPF(f).a = std::move(k);
  return f;
}
PFP pDia(PFP k) {
  auto f = mkPF(PK::Dia);
  mutPF(f).a = std::move(k);
  return f;
}
PFP kAct(const std::string& a, PFP p) {
  auto f = mkPF(PK::ActF);
  mutPF(f).act = a;
  mutPF(f).a = std::move(p);
  return f;
}

bool isPiSort(const PFP& f) {
  switch (f->kind) {
    case PK::AndP:
    case PK::OrP:
    case PK::Box:
    case PK::Dia: return true;
    default: return false;
  }
}

std::string ProcFormula::print() const {
  switch (kind) {
    case PK::AndP:
    case PK::AndK: {
      if (kids.empty()) return "tt";
      std::string s = "(and";
      for (auto& k : kids) s += " " + k->print();
      return s + ")";
    }
    case PK::OrP:
    case PK::OrK: {
      if (kids.empty()) return "ff";
      std::string s = "(or";
      for (auto& k : kids) s += " " + k->print();
      return s + ")";
    }
    case PK::Box: return "(box " + a->print() + ")";
    case PK::Dia: return "(dia " + a->print() + ")";
    case PK::ActF: return "(act " + act + " " + a->print() + ")";
  }
  return "?";
}

PFP parseProcFormula(const Sexpr& e, bool piSort) {
  if (e.atom) {
    if (e.sym == "tt") return piSort ? pTop() : kTop();
    if (e.sym == "ff") return piSort ? pBot() : kBot();
    throw ParseError("bad process formula: " + e.sym);
  }
  if (e.items.empty() || !e.items[0].atom)
    throw ParseError("bad process formula: " + e.print());
  const std::string& h = e.items[0].sym;
  if (h == "and" || h == "or") {
    std::vector<PFP> kids;
    for (size_t i = 1; i < e.items.size(); i++)
      kids.push_back(parseProcFormula(e[i], piSort));
    if (h == "and") return piSort ? pAnd(std::move(kids)) : kAnd(std::move(kids));
    return piSort ? pOr(std::move(kids)) : kOr(std::move(kids));
  }
  if (h == "box" || h == "dia") {
    if (!piSort) throw ParseError("modal operator in capability position");
    if (e.items.size() != 2) throw ParseError("bad arity: " + e.print());
    PFP k = parseProcFormula(e[1], false);
    return h == "box" ? pBox(k) : pDia(k);
  }
  if (h == "act") {
    if (piSort) throw ParseError("action constructor in process position");
    if (e.items.size() != 3 || !e.items[1].atom)
      throw ParseError("bad arity: " + e.print());
    return kAct(e.items[1].sym, parseProcFormula(e[2], true));
  }
  throw ParseError("unknown process-formula constructor: " + h);
}

PFP parseProcFormula(const std::string& text, bool piSort) {
  return parseProcFormula(parseSexpr(text), piSort);
}

bool procFormulaEq(const PFP& x, const PFP& y) { return x->print() == y->print(); }

int mdProc(const PFP& f) {
  switch (f->kind) {
    case PK::AndP:
    case PK::OrP:
    case PK::AndK:
    case PK::OrK: {
      int m = 0;
      for (auto& k : f->kids) m = std::max(m, mdProc(k));
      return m;
    }
    case PK::Box:
    case PK::Dia: return mdProc(f->a);
    case PK::ActF: return 1 + mdProc(f->a);
  }
  return 0;
}

size_t procFormulaSize(const PFP& f) {
  size_t n = 1;
  for (auto& k : f->kids) n += procFormulaSize(k);
  if (f->a) n += procFormulaSize(f->a);
  return n;
}

bool downProc(const PFP& f) {
  switch (f->kind) {
    case PK::AndP:
    case PK::AndK: {
      for (auto& k : f->kids)
        if (downProc(k)) return true;
      return false;
    }
    case PK::OrP:
    case PK::OrK: {
      for (auto& k : f->kids)
        if (!downProc(k)) return false;
      return true;
    }
    case PK::ActF: return true;
    case PK::Box:
    case PK::Dia: return downProc(f->a);
  }
  return false;
}

// ---------------------------------------------------------- satisfaction

bool psatCap(const Lts& l, const Cap& c, const PFP& kappa) {
  switch (kappa->kind) {
    case PK::AndK: {
      for (auto& k : kappa->kids)
        if (!psatCap(l, c, k)) return false;
      return true;
    }
    case PK::OrK: {
      for (auto& k : kappa->kids)
        if (psatCap(l, c, k)) return true;
      return false;
    }
    case PK::ActF:
      return !c.bot && c.act == kappa->act && psat(l, c.state, kappa->a);
    default: throw ParseError("pi formula in capability position");
  }
}

bool psat(const Lts& l, const std::string& p, const PFP& phi) {
  switch (phi->kind) {
    case PK::AndP: {
      for (auto& k : phi->kids)
        if (!psat(l, p, k)) return false;
      return true;
    }
    case PK::OrP: {
      for (auto& k : phi->kids)
        if (psat(l, p, k)) return true;
      return false;
    }
    case PK::Box: {
      if (l.diverges(p) && !psatCap(l, Cap{}, phi->a)) return false;
      for (auto& [a, q] : l.out(p))
        if (!psatCap(l, Cap{false, a, q}, phi->a)) return false;
      return true;
    }
    case PK::Dia: {
      if (psatCap(l, Cap{}, phi->a)) return true;  // the adjoined bottom
      for (auto& [a, q] : l.out(p))
        if (psatCap(l, Cap{false, a, q}, phi->a)) return true;
      return false;
    }
    default: throw ParseError("capability formula in process position");
  }
}

// ------------------------------------------------------------ elements

PEP peMake(bool divergent, std::vector<std::pair<std::string, PEP>> caps) {
  std::sort(caps.begin(), caps.end(),
            [](auto& x, auto& y) {
              return x.first < y.first ||
                     (x.first == y.first && x.second->print() < y.second->print());
            });
  caps.erase(std::unique(caps.begin(), caps.end(),
                         [](auto& x, auto& y) {
                           return x.first == y.first &&
                                  x.second->print() == y.second->print();
                         }),
             caps.end());
  auto d = std::make_shared<ProcElem>();
  const_cast<ProcElem&>(*d).divergent = divergent;
  const_cast<ProcElem&>(*d).caps = std::move(caps);
  return d;
}

PEP peBottom() { return peMake(true, {}); }
PEP peEmpty() { return peMake(false, {}); }

std::string ProcElem::print() const {
  std::string s = "{";
  bool first = true;
  if (divergent) {
    s += "bot";
    first = false;
  }
  for (auto& [a, d] : caps) {
    if (!first) s += ",";
    first = false;
    s += "<" + a + "," + d->print() + ">";
  }
  return s + "}";
}

bool leqProc(const PEP& x, const PEP& y) {
  if (x->divergent && x->caps.empty()) return true;  // {bot} is least
  // Egli-Milner on the generator sets
  for (auto& [a, d] : x->caps) {
    bool ok = false;
    for (auto& [b, e] : y->caps)
      if (a == b && leqProc(d, e)) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  if (x->divergent && !y->divergent && y->caps.empty()) return false;
  if (y->divergent && !x->divergent) return false;
  for (auto& [b, e] : y->caps) {
    if (x->divergent) continue;  // bot lies below every capability
    bool ok = false;
    for (auto& [a, d] : x->caps)
      if (a == b && leqProc(d, e)) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

bool procElemEq(const PEP& x, const PEP& y) { return leqProc(x, y) && leqProc(y, x); }

// ----------------------------------------------------- PNF and elements

namespace {

struct DiaAtom {
  std::string act;
  PFP payload;  // pi sort
};

// is there a proof of b(psi) <= a(phi), for PNF payloads?
bool atomLeq(const DiaAtom& b, const DiaAtom& a) {
  return b.act == a.act && leqProc(kElem(a.payload), kElem(b.payload));
}

struct PnfView {
  bool hasBox = false;
  std::vector<DiaAtom> box;
  std::vector<DiaAtom> dias;
};

bool viewPNF(const PFP& f, PnfView& v, bool requireConvex) {
  if (!isPiSort(f)) return false;
  std::vector<PFP> cs;
  if (f->kind == PK::AndP)
    cs = f->kids;
  else if (f->kind == PK::OrP)
    return false;
  else
    cs = {f};
  for (auto& c : cs) {
    if (c->kind == PK::Dia) {
      if (c->a->kind != PK::ActF) return false;
      if (!isPNFProc(c->a->a)) return false;
      v.dias.push_back({c->a->act, c->a->a});
    } else if (c->kind == PK::Box) {
      if (v.hasBox) return false;
      v.hasBox = true;
      std::vector<PFP> ds;
      if (c->a->kind == PK::OrK)
        ds = c->a->kids;
      else
        ds = {c->a};
      for (auto& d : ds) {
        if (d->kind == PK::ActF) {
          if (!isPNFProc(d->a)) return false;
          v.box.push_back({d->act, d->a});
        } else if (d->kind == PK::OrK && d->kids.empty()) {
          // box ff: empty disjunction
        } else {
          return false;
        }
      }
    } else {
      return false;
    }
  }
  if (v.hasBox && requireConvex) {
    for (auto& a : v.box) {
      bool ok = false;
      for (auto& b : v.dias)
        if (atomLeq(b, a)) {
          ok = true;
          break;
        }
      if (!ok) return false;
    }
    for (auto& b : v.dias) {
      bool ok = false;
      for (auto& a : v.box)
        if (atomLeq(b, a)) {
          ok = true;
          break;
        }
      if (!ok) return false;
    }
  }
  return true;
}

PFP viewToFormula(const PnfView& v) {
  std::vector<PFP> cs;
  if (v.hasBox) {
    std::vector<PFP> atoms;
    for (auto& a : v.box) atoms.push_back(kAct(a.act, a.payload));
    cs.push_back(pBox(kOr(std::move(atoms))));
  }
  for (auto& b : v.dias) cs.push_back(pDia(kAct(b.act, b.payload)));
  return pAnd(std::move(cs));
}

}  // namespace

bool isPNFProc(const PFP& f) {
  PnfView v;
  return viewPNF(f, v, true);
}

bool isSDNFProc(const PFP& f) {
  if (!isPiSort(f)) return false;
  std::vector<PFP> ds = f->kind == PK::OrP ? f->kids : std::vector<PFP>{f};
  if (f->kind == PK::OrP && f->kids.empty()) return true;
  for (auto& d : ds)
    if (!isPNFProc(d)) return false;
  return true;
}

PEP kElem(const PFP& pnf) {
  PnfView v;
  if (!viewPNF(pnf, v, true)) throw NotPNF("not in prime normal form: " + pnf->print());
  std::vector<std::pair<std::string, PEP>> caps;
  for (auto& a : v.box) caps.emplace_back(a.act, kElem(a.payload));
  for (auto& b : v.dias) caps.emplace_back(b.act, kElem(b.payload));
  return peMake(!v.hasBox, std::move(caps));
}

PFP defFormula(const PEP& d) {
  std::vector<PFP> dias;
  for (auto& [a, e] : d->caps) dias.push_back(pDia(kAct(a, defFormula(e))));
  if (d->divergent) return pAnd(std::move(dias));
  std::vector<PFP> atoms;
  for (auto& [a, e] : d->caps) atoms.push_back(kAct(a, defFormula(e)));
  std::vector<PFP> cs = {pBox(kOr(std::move(atoms)))};
  for (auto& f : dias) cs.push_back(f);
  return pAnd(std::move(cs));
}

SyncTreeP stTree(const PFP& pnf) {
  PnfView v;
  if (!viewPNF(pnf, v, true)) throw NotPNF("not in prime normal form: " + pnf->print());
  std::vector<std::pair<std::string, SyncTreeP>> summands;
  for (auto& a : v.box) summands.emplace_back(a.act, stTree(a.payload));
  for (auto& b : v.dias) summands.emplace_back(b.act, stTree(b.payload));
  return stMake(std::move(summands), !v.hasBox);
}

// ----------------------------------------------------------------- sdnf

namespace {

constexpr size_t kSdnfBudget = 200000;

struct Budget {
  size_t ops = 0;
  void tick(size_t n = 1) {
    ops += n;
    if (ops > kSdnfBudget) throw BlowupLimit("normal form too large");
  }
};

// DNF of a kappa formula: each disjunct is a single action atom, or top
// (the empty conjunction).
struct KappaDnf {
  bool hasTop = false;
  std::vector<DiaAtom> atoms;
};

KappaDnf kappaDNF(const PFP& k, Budget& bud) {
  bud.tick();
  KappaDnf r;
  switch (k->kind) {
    case PK::ActF:
      r.atoms.push_back({k->act, k->a});
      return r;
    case PK::OrK: {
      for (auto& kid : k->kids) {
        KappaDnf s = kappaDNF(kid, bud);
        r.hasTop = r.hasTop || s.hasTop;
        for (auto& a : s.atoms) r.atoms.push_back(a);
      }
      return r;
    }
    case PK::AndK: {
      // conjunction of atom-or-top disjuncts: distribute, merging same-action
      // atoms and dropping clashing ones
      std::vector<std::pair<bool, DiaAtom>> acc = {{true, {}}};  // start with top
      for (auto& kid : k->kids) {
        KappaDnf s = kappaDNF(kid, bud);
        std::vector<std::pair<bool, DiaAtom>> next;
        for (auto& [isTop, atom] : acc) {
          if (s.hasTop) next.emplace_back(isTop, atom);
          for (auto& b : s.atoms) {
            bud.tick();
            if (isTop)
              next.emplace_back(false, b);
            else if (atom.act == b.act)
              next.emplace_back(false,
                                DiaAtom{atom.act, pAnd({atom.payload, b.payload})});
            // different actions clash: a(phi) and b(psi) is ff
          }
        }
        acc = std::move(next);
      }
      for (auto& [isTop, atom] : acc) {
        if (isTop)
          r.hasTop = true;
        else
          r.atoms.push_back(atom);
      }
      return r;
    }
    default: throw ParseError("pi formula in capability position");
  }
}

struct Disj {
  bool hasBox = false;
  std::vector<DiaAtom> box;
  std::vector<DiaAtom> dias;
};

// lattice-level DNF of a pi formula into conjunctions of modal literals
void piDNF(const PFP& f, std::vector<std::vector<PFP>>& out, Budget& bud) {
  bud.tick();
  switch (f->kind) {
    case PK::OrP: {
      for (auto& k : f->kids) piDNF(k, out, bud);
      return;
    }
    case PK::AndP: {
      std::vector<std::vector<PFP>> acc = {{}};
      for (auto& k : f->kids) {
        std::vector<std::vector<PFP>> kd;
        piDNF(k, kd, bud);
        std::vector<std::vector<PFP>> next;
        for (auto& c1 : acc)
          for (auto& c2 : kd) {
            bud.tick();
            std::vector<PFP> c = c1;
            for (auto& x : c2) c.push_back(x);
            next.push_back(std::move(c));
          }
        acc = std::move(next);
      }
      for (auto& c : acc) out.push_back(std::move(c));
      return;
    }
    case PK::Box:
    case PK::Dia: out.push_back({f}); return;
    default: throw ParseError("capability formula in process position");
  }
}

std::vector<PFP> sdnfInner(const PFP& phi, Budget& bud);

// normalize the payloads of a raw disjunct and emit all resulting candidate
// disjuncts (payloads in PNF, convexity not yet repaired)
void expandPayloads(const Disj& d, std::vector<Disj>& out, Budget& bud) {
  Disj base;
  base.hasBox = d.hasBox;
  for (auto& a : d.box) {
    for (auto& th : sdnfInner(a.payload, bud)) {
      bud.tick();
      base.box.push_back({a.act, th});
    }
    // an atom whose payload normalizes to ff disappears from the disjunction
  }
  std::vector<Disj> acc = {base};
  for (auto& b : d.dias) {
    std::vector<PFP> ds = sdnfInner(b.payload, bud);
    if (ds.empty()) return;  // dia of ff kills the whole disjunct
    std::vector<Disj> next;
    for (auto& cur : acc)
      for (auto& th : ds) {
        bud.tick();
        Disj c = cur;
        c.dias.push_back({b.act, th});
        next.push_back(std::move(c));
      }
    acc = std::move(next);
  }
  for (auto& c : acc) out.push_back(std::move(c));
}

// remove failures of convexity condition (2): every box atom needs a dia
// below it
void repairBox(Disj d, std::vector<Disj>& out, Budget& bud) {
  bud.tick();
  if (!d.hasBox) {
    out.push_back(std::move(d));
    return;
  }
  for (size_t i = 0; i < d.box.size(); i++) {
    bool witnessed = false;
    for (auto& b : d.dias)
      if (atomLeq(b, d.box[i])) {
        witnessed = true;
        break;
      }
    if (witnessed) continue;
    // (D1): split into the disjunct without this atom and the one where the
    // atom is also possible
    Disj d1 = d;
    d1.box.erase(d1.box.begin() + i);
    Disj d2 = d;
    d2.dias.push_back(d.box[i]);
    repairBox(std::move(d1), out, bud);
    repairBox(std::move(d2), out, bud);
    return;
  }
  out.push_back(std::move(d));
}

// remove failures of convexity condition (3): every dia atom needs a box
// atom above it
void repairDia(Disj d, std::vector<Disj>& out, Budget& bud) {
  bud.tick();
  if (!d.hasBox) {
    out.push_back(std::move(d));
    return;
  }
  for (size_t j = 0; j < d.dias.size(); j++) {
    bool witnessed = false;
    for (auto& a : d.box)
      if (atomLeq(d.dias[j], a)) {
        witnessed = true;
        break;
      }
    if (witnessed) continue;
    // (D2): meet the dia payload with the matching box payloads; no match
    // means the disjunct is inconsistent
    for (auto& a : d.box) {
      if (a.act != d.dias[j].act) continue;
      for (auto& th : sdnfInner(pAnd({d.dias[j].payload, a.payload}), bud)) {
        bud.tick();
        Disj d2 = d;
        d2.dias[j] = {d.dias[j].act, th};
        repairDia(std::move(d2), out, bud);
      }
    }
    return;
  }
  out.push_back(std::move(d));
}

std::vector<PFP> sdnfInner(const PFP& phi, Budget& bud) {
  std::vector<std::vector<PFP>> raw;
  piDNF(phi, raw, bud);
  std::vector<Disj> candidates;
  for (auto& lits : raw) {
    Disj d;
    std::vector<PFP> boxPayloads;
    std::vector<PFP> diaLits;
    for (auto& lit : lits) {
      if (lit->kind == PK::Box) {
        d.hasBox = true;
        boxPayloads.push_back(lit->a);
      } else {
        diaLits.push_back(lit->a);
      }
    }
    if (d.hasBox) {
      KappaDnf kd = kappaDNF(kAnd(std::move(boxPayloads)), bud);
      if (kd.hasTop) d.hasBox = false;  // box of a disjunction containing top
      else
        d.box = std::move(kd.atoms);
    }
    // each dia payload contributes a choice of atom; a top disjunct lets the
    // dia conjunct vanish
    std::vector<Disj> acc = {d};
    d.box.clear();
    bool dead = false;
    for (auto& kp : diaLits) {
      KappaDnf kd = kappaDNF(kp, bud);
      std::vector<Disj> next;
      for (auto& cur : acc) {
        if (kd.hasTop) next.push_back(cur);
        for (auto& atom : kd.atoms) {
          bud.tick();
          Disj c = cur;
          c.dias.push_back(atom);
          next.push_back(std::move(c));
        }
      }
      acc = std::move(next);
      if (acc.empty()) {
        dead = true;
        break;
      }
    }
    if (dead) continue;
    for (auto& c : acc) {
      std::vector<Disj> expanded;
      expandPayloads(c, expanded, bud);
      for (auto& e : expanded) candidates.push_back(std::move(e));
    }
  }
  std::vector<Disj> stage2;
  for (auto& d : candidates) repairBox(std::move(d), stage2, bud);
  std::vector<Disj> stage3;
  for (auto& d : stage2) repairDia(std::move(d), stage3, bud);
  std::vector<PFP> out;
  std::set<std::string> seen;
  for (auto& d : stage3) {
    PnfView v;
    v.hasBox = d.hasBox;
    v.box = d.box;
    v.dias = d.dias;
    PFP f = viewToFormula(v);
    if (seen.insert(f->print()).second) out.push_back(f);
  }
  return out;
}

}  // namespace

std::vector<PFP> sdnfDisjuncts(const PFP& phi) {
  Budget bud;
  return sdnfInner(phi, bud);
}

PFP sdnf(const PFP& phi) { return pOr(sdnfDisjuncts(phi)); }

bool entailsProc(const PFP& phi, const PFP& psi) {
  auto dp = sdnfDisjuncts(phi);
  auto dq = sdnfDisjuncts(psi);
  std::vector<PEP> eq;
  for (auto& q : dq) eq.push_back(kElem(q));
  for (auto& p : dp) {
    PEP ep = kElem(p);
    bool ok = false;
    for (auto& e : eq)
      if (leqProc(e, ep)) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

PEP universalSem(const Lts& l, const std::string& p, int depth) {
  if (depth <= 0) return peBottom();
  std::vector<std::pair<std::string, PEP>> caps;
  for (auto& [a, q] : l.out(p)) caps.emplace_back(a, universalSem(l, q, depth - 1));
  return peMake(l.diverges(p), std::move(caps));
}

// ------------------------------------------------------------------ HML

namespace {
HmlP mkH(HK k) {
  auto f = std::make_shared<Hml>();
  const_cast<Hml&>(*f).kind = k;
  return f;
}
Hml& mutH(const HmlP& f) { return const_cast<Hml&>(*f); }
}  // namespace

HmlP hTop() { return hAnd({}); }
HmlP hBot() { return hOr({}); }
HmlP hAnd(std::vector<HmlP> kids) {
  std::vector<HmlP> flat;
  for (auto& k : kids) {
    if (k->kind == HK::AndH) {
      for (auto& kk : k->kids) flat.push_back(kk);
    } else {
      flat.push_back(k);
    }
  }
  std::sort(flat.begin(), flat.end(),
            [](const HmlP& x, const HmlP& y) { return x->print() < y->print(); });
  flat.erase(std::unique(flat.begin(), flat.end(),
                         [](const HmlP& x, const HmlP& y) {
                           return x->print() == y->print();
                         }),
             flat.end());
  if (flat.size() == 1) return flat[0];
  auto f = mkH(HK::AndH);
  mutH(f).kids = std::move(flat);
  return f;
}
HmlP hOr(std::vector<HmlP> kids) {
  std::vector<HmlP> flat;
  for (auto& k : kids) {
    if (k->kind == HK::OrH) {
      for (auto& kk : k->kids) flat.push_back(kk);
    } else {
      flat.push_back(k);
    }
  }
  if (flat.size() == 1) return flat[0];
  auto f = mkH(HK::OrH);
  mutH(f).kids = std::move(flat);
  return f;
}
HmlP hDiam(const std::string& a, HmlP x) {
  auto f = mkH(HK::DiamA);
  mutH(f).act = a;
  mutH(f).a = std::move(x);
  return f;
}
HmlP hBoxA(const std::string& a, HmlP x) {
  auto f = mkH(HK::BoxA);
  mutH(f).act = a;
  mutH(f).a = std::move(x);
  return f;
}
HmlP hInit(std::set<std::string> acts) {
  auto f = mkH(HK::Init);
  mutH(f).inits = std::move(acts);
  return f;
}

std::string Hml::print() const {
  switch (kind) {
    case HK::AndH: {
      if (kids.empty()) return "tt";
      std::string s = "(and";
      for (auto& k : kids) s += " " + k->print();
      return s + ")";
    }
    case HK::OrH: {
      if (kids.empty()) return "ff";
      std::string s = "(or";
      for (auto& k : kids) s += " " + k->print();
      return s + ")";
    }
    case HK::DiamA: return "(diaa " + act + " " + a->print() + ")";
    case HK::BoxA: return "(boxa " + act + " " + a->print() + ")";
    case HK::Init: {
      std::string s = "(init";
      for (auto& x : inits) s += " " + x;
      return s + ")";
    }
  }
  return "?";
}

HmlP parseHml(const Sexpr& e) {
  if (e.atom) {
    if (e.sym == "tt") return hTop();
    if (e.sym == "ff") return hBot();
    throw ParseError("bad HML formula: " + e.sym);
  }
  if (e.items.empty() || !e.items[0].atom)
    throw ParseError("bad HML formula: " + e.print());
  const std::string& h = e.items[0].sym;
  if (h == "and" || h == "or") {
    std::vector<HmlP> kids;
    for (size_t i = 1; i < e.items.size(); i++) kids.push_back(parseHml(e[i]));
    return h == "and" ? hAnd(std::move(kids)) : hOr(std::move(kids));
  }
  if (h == "diaa" || h == "boxa") {
    if (e.items.size() != 3 || !e.items[1].atom)
      throw ParseError("bad arity: " + e.print());
    HmlP x = parseHml(e[2]);
    return h == "diaa" ? hDiam(e.items[1].sym, x) : hBoxA(e.items[1].sym, x);
  }
  if (h == "init") {
    std::set<std::string> acts;
    for (size_t i = 1; i < e.items.size(); i++) {
      if (!e.items[i].atom) throw ParseError("bad init action: " + e.print());
      acts.insert(e.items[i].sym);
    }
    return hInit(std::move(acts));
  }
  throw ParseError("unknown HML constructor: " + h);
}

HmlP parseHml(const std::string& text) { return parseHml(parseSexpr(text)); }

int mdHml(const HmlP& f) {
  switch (f->kind) {
    case HK::AndH:
    case HK::OrH: {
      int m = 0;
      for (auto& k : f->kids) m = std::max(m, mdHml(k));
      return m;
    }
    case HK::DiamA:
    case HK::BoxA: return 1 + mdHml(f->a);
    case HK::Init: return 1;
  }
  return 0;
}

size_t hmlSize(const HmlP& f) {
  switch (f->kind) {
    case HK::AndH:
    case HK::OrH: {
      size_t n = 1;
      for (auto& k : f->kids) n += hmlSize(k);
      return n;
    }
    case HK::DiamA:
    case HK::BoxA: return 2 + hmlSize(f->a);
    case HK::Init: return 2;
  }
  return 1;
}

bool hmlSat(const Lts& l, const std::string& p, const HmlP& psi) {
  switch (psi->kind) {
    case HK::AndH: {
      for (auto& k : psi->kids)
        if (!hmlSat(l, p, k)) return false;
      return true;
    }
    case HK::OrH: {
      for (auto& k : psi->kids)
        if (hmlSat(l, p, k)) return true;
      return false;
    }
    case HK::DiamA: {
      for (auto& [a, q] : l.out(p))
        if (a == psi->act && hmlSat(l, q, psi->a)) return true;
      return false;
    }
    case HK::BoxA: {
      // box requires convergence, so that the translations into and out of
      // the modal process logic agree on divergent states
      if (l.diverges(p)) return false;
      for (auto& [a, q] : l.out(p))
        if (a == psi->act && !hmlSat(l, q, psi->a)) return false;
      return true;
    }
    case HK::Init: {
      if (l.diverges(p)) return false;
      for (auto& a : l.initials(p))
        if (!psi->inits.count(a)) return false;
      return true;
    }
  }
  return false;
}

namespace {
void requireAct(const std::string& a, const std::vector<std::string>& acts) {
  if (std::find(acts.begin(), acts.end(), a) == acts.end())
    throw SortOverflow("action " + a + " is not among the declared actions");
}
}  // namespace

PFP star(const HmlP& psi, const std::vector<std::string>& acts) {
  switch (psi->kind) {
    case HK::AndH: {
      std::vector<PFP> kids;
      for (auto& k : psi->kids) kids.push_back(star(k, acts));
      return pAnd(std::move(kids));
    }
    case HK::OrH: {
      std::vector<PFP> kids;
      for (auto& k : psi->kids) kids.push_back(star(k, acts));
      return pOr(std::move(kids));
    }
    case HK::DiamA:
      requireAct(psi->act, acts);
      return pDia(kAct(psi->act, star(psi->a, acts)));
    case HK::BoxA: {
      requireAct(psi->act, acts);
      std::vector<PFP> atoms = {kAct(psi->act, star(psi->a, acts))};
      for (auto& b : acts)
        if (b != psi->act) atoms.push_back(kAct(b, pTop()));
      return pBox(kOr(std::move(atoms)));
    }
    case HK::Init: {
      std::vector<PFP> atoms;
      for (auto& a : psi->inits) {
        requireAct(a, acts);
        atoms.push_back(kAct(a, pTop()));
      }
      return pBox(kOr(std::move(atoms)));
    }
  }
  throw ParseError("star: bad HML formula");
}

PFP nlNormalize(const PFP& phi) {
  Budget bud;
  switch (phi->kind) {
    case PK::AndP: {
      std::vector<PFP> kids;
      for (auto& k : phi->kids) kids.push_back(nlNormalize(k));
      return pAnd(std::move(kids));
    }
    case PK::OrP: {
      std::vector<PFP> kids;
      for (auto& k : phi->kids) kids.push_back(nlNormalize(k));
      return pOr(std::move(kids));
    }
    case PK::Dia: {
      KappaDnf kd = kappaDNF(phi->a, bud);
      std::vector<PFP> ds;
      if (kd.hasTop) return pTop();  // dia of top is top
      for (auto& atom : kd.atoms)
        ds.push_back(pDia(kAct(atom.act, nlNormalize(atom.payload))));
      return pOr(std::move(ds));
    }
    case PK::Box: {
      KappaDnf kd = kappaDNF(phi->a, bud);
      if (kd.hasTop) return pTop();
      // merge same-action atoms into one disjunct per action
      std::map<std::string, std::vector<PFP>> byAct;
      for (auto& atom : kd.atoms) byAct[atom.act].push_back(atom.payload);
      std::vector<PFP> atoms;
      for (auto& [a, ps] : byAct) atoms.push_back(kAct(a, nlNormalize(pOr(ps))));
      return pBox(kOr(std::move(atoms)));
    }
    default: throw ParseError("capability formula in process position");
  }
}

HmlP dagger(const PFP& phi, const std::vector<std::string>& acts) {
  switch (phi->kind) {
    case PK::AndP: {
      std::vector<HmlP> kids;
      for (auto& k : phi->kids) kids.push_back(dagger(k, acts));
      return hAnd(std::move(kids));
    }
    case PK::OrP: {
      std::vector<HmlP> kids;
      for (auto& k : phi->kids) kids.push_back(dagger(k, acts));
      return hOr(std::move(kids));
    }
    case PK::Dia: {
      if (phi->a->kind != PK::ActF)
        throw ParseError("dagger input not normalized: " + phi->print());
      requireAct(phi->a->act, acts);
      return hDiam(phi->a->act, dagger(phi->a->a, acts));
    }
    case PK::Box: {
      std::vector<PFP> ds;
      if (phi->a->kind == PK::OrK)
        ds = phi->a->kids;
      else
        ds = {phi->a};
      std::set<std::string> seen;
      std::vector<HmlP> kids;
      std::set<std::string> initActs;
      for (auto& d : ds) {
        if (d->kind == PK::OrK && d->kids.empty()) continue;
        if (d->kind != PK::ActF)
          throw ParseError("dagger input not normalized: " + phi->print());
        requireAct(d->act, acts);
        if (!seen.insert(d->act).second)
          throw ParseError("dagger input has repeated actions: " + phi->print());
        initActs.insert(d->act);
        kids.push_back(hBoxA(d->act, dagger(d->a, acts)));
      }
      kids.push_back(hInit(std::move(initActs)));
      return hAnd(std::move(kids));
    }
    default: throw ParseError("capability formula in process position");
  }
}

}  // namespace dl
