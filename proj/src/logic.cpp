#include "logic.hpp"

#include <algorithm>
#include <functional>

namespace dl {

namespace {

constexpr size_t kNodeBudget = 1000000;
constexpr size_t kArrowSubsetCap = 16;

// peel outermost rec layers; count how many fold wrappers elements carry
std::pair<TypeP, int> expose(TypeP t) {
  int n = 0;
  while (t->kind == TK::Rec) {
    t = unfoldRec(t);
    n++;
  }
  return {t, n};
}

struct AtomGroups {
  std::vector<FormulaP> pairL, pairR;     // PairF components
  std::vector<FormulaP> arrA, arrB;       // ArrowF components, aligned
  std::vector<FormulaP> inls, inrs;       // payloads
  std::vector<FormulaP> lifts;            // payloads
  std::vector<FormulaP> boxes;            // payloads (possibly Or)
  std::vector<FormulaP> dias;             // payloads
  size_t total = 0;
};

AtomGroups groupAtoms(const FormulaP& f) {
  AtomGroups g;
  for (auto& a : conjuncts(f)) {
    g.total++;
    switch (a->kind) {
      case FK::PairF:
        g.pairL.push_back(a->a);
        g.pairR.push_back(a->b);
        break;
      case FK::ArrowF:
        g.arrA.push_back(a->a);
        g.arrB.push_back(a->b);
        break;
      case FK::InL: g.inls.push_back(a->a); break;
      case FK::InR: g.inrs.push_back(a->a); break;
      case FK::LiftF: g.lifts.push_back(a->a); break;
      case FK::BoxF: g.boxes.push_back(a->a); break;
      case FK::DiaF: g.dias.push_back(a->a); break;
      default:
        throw std::logic_error("non-prime conjunct in prime-table computation: " +
                               a->print());
    }
  }
  return g;
}

// all index choices from the given list sizes, with early-exit callback
bool anyChoice(const std::vector<size_t>& sizes,
               const std::function<bool(const std::vector<size_t>&)>& fn) {
  std::vector<size_t> idx(sizes.size(), 0);
  for (auto s : sizes)
    if (s == 0) return false;
  while (true) {
    if (fn(idx)) return true;
    size_t i = 0;
    while (i < idx.size()) {
      if (++idx[i] < sizes[i]) break;
      idx[i] = 0;
      i++;
    }
    if (i == idx.size() || idx.empty()) return false;
  }
}

void forEachChoice(const std::vector<size_t>& sizes,
                   const std::function<void(const std::vector<size_t>&)>& fn) {
  for (auto s : sizes)
    if (s == 0) return;
  std::vector<size_t> idx(sizes.size(), 0);
  while (true) {
    fn(idx);
    size_t i = 0;
    while (i < idx.size()) {
      if (++idx[i] < sizes[i]) break;
      idx[i] = 0;
      i++;
    }
    if (i == idx.size() || idx.empty()) return;
  }
}

}  // namespace

bool isPNF(const FormulaP& f) {
  switch (f->kind) {
    case FK::Top: return true;
    case FK::Bot:
    case FK::Or: return false;
    case FK::And:
      return std::all_of(f->kids.begin(), f->kids.end(),
                         [](const FormulaP& k) { return isPNF(k); });
    case FK::PairF:
    case FK::ArrowF: return isPNF(f->a) && isPNF(f->b);
    case FK::InL:
    case FK::InR:
    case FK::LiftF:
    case FK::DiaF: return isPNF(f->a);
    case FK::BoxF: {
      // a disjunction is allowed immediately under box
      for (auto& d : disjuncts(f->a))
        if (!isPNF(d)) return false;
      return true;
    }
  }
  return false;
}

bool conC(const FormulaP& f, const TypeP& type) {
  if (f->kind == FK::Top) return true;
  if (f->kind == FK::Bot) return false;
  auto [t, nrec] = expose(type);
  (void)nrec;
  AtomGroups g = groupAtoms(f);
  if (g.total == 0) return true;
  switch (t->kind) {
    case TK::Unit: return true;
    case TK::Prod:
      return conC(fAnd(g.pairL), t->a) && conC(fAnd(g.pairR), t->b);
    case TK::Fun: {
      size_t n = g.arrA.size();
      if (n > kArrowSubsetCap)
        throw BlowupLimit("arrow conjunction too wide for consistency table");
      for (size_t mask = 1; mask < (size_t(1) << n); mask++) {
        std::vector<FormulaP> as, bs;
        for (size_t i = 0; i < n; i++)
          if (mask & (size_t(1) << i)) {
            as.push_back(g.arrA[i]);
            bs.push_back(g.arrB[i]);
          }
        if (conC(fAnd(as), t->a) && !conC(fAnd(bs), t->b)) return false;
      }
      return true;
    }
    case TK::Sum: {
      FormulaP l = fAnd(g.inls), r = fAnd(g.inrs);
      if (!conC(l, t->a) || !conC(r, t->b)) return false;
      return !(termT(l, t->a) && termT(r, t->b));
    }
    case TK::Lift: return conC(fAnd(g.lifts), t->a);
    case TK::Lower:
      return std::all_of(g.dias.begin(), g.dias.end(),
                         [&](const FormulaP& p) { return conC(p, t->a); });
    case TK::Upper: {
      std::vector<std::vector<FormulaP>> rows;
      std::vector<size_t> sizes;
      for (auto& p : g.boxes) {
        rows.push_back(disjuncts(p));
        sizes.push_back(rows.back().size());
      }
      return anyChoice(sizes, [&](const std::vector<size_t>& idx) {
        std::vector<FormulaP> picks;
        for (size_t i = 0; i < idx.size(); i++) picks.push_back(rows[i][idx[i]]);
        return conC(fAnd(picks), t->a);
      });
    }
    default:
      throw std::logic_error("conC: atoms at type " + t->print());
  }
}

bool termT(const FormulaP& f, const TypeP& type) {
  switch (f->kind) {
    case FK::Top: return false;
    case FK::Bot: return true;
    case FK::And:
      return std::any_of(f->kids.begin(), f->kids.end(),
                         [&](const FormulaP& k) { return termT(k, type); });
    case FK::Or:
      return std::all_of(f->kids.begin(), f->kids.end(),
                         [&](const FormulaP& k) { return termT(k, type); });
    default: break;
  }
  auto [t, nrec] = expose(type);
  (void)nrec;
  switch (f->kind) {
    case FK::PairF: return termT(f->a, t->a) || termT(f->b, t->b);
    case FK::ArrowF: return conC(f->a, t->a) && termT(f->b, t->b);
    case FK::InL: return termT(f->a, t->a);
    case FK::InR: return termT(f->a, t->b);
    case FK::LiftF: return true;
    case FK::BoxF: return termT(f->a, t->a);
    case FK::DiaF: return termT(f->a, t->a);
    default: throw std::logic_error("termT: unexpected formula");
  }
}

FormulaP pnfMeet(const FormulaP& p, const FormulaP& q) { return fAnd2(p, q); }

namespace {

struct Budget {
  size_t used = 0;
  void charge(size_t n, const char* what) {
    used += n;
    if (used > kNodeBudget)
      throw BlowupLimit(std::string("normal-form budget exceeded in ") + what);
  }
};

std::vector<FormulaP> dedupForms(std::vector<FormulaP> ds) {
  std::sort(ds.begin(), ds.end(), formulaLt);
  ds.erase(std::unique(ds.begin(), ds.end(), formulaEq), ds.end());
  return ds;
}

std::vector<FormulaP> cdnfIn(const FormulaP& f, const TypeP& type, Budget& bud) {
  if (type->kind == TK::Rec) return cdnfIn(f, unfoldRec(type), bud);
  switch (f->kind) {
    case FK::Top: return {fTop()};
    case FK::Bot: return {};
    case FK::Or: {
      std::vector<FormulaP> out;
      for (auto& k : f->kids) {
        auto ds = cdnfIn(k, type, bud);
        out.insert(out.end(), ds.begin(), ds.end());
      }
      return dedupForms(std::move(out));
    }
    case FK::And: {
      std::vector<FormulaP> acc{fTop()};
      for (auto& k : f->kids) {
        auto ds = cdnfIn(k, type, bud);
        std::vector<FormulaP> next;
        bud.charge(acc.size() * ds.size(), "conjunction");
        for (auto& x : acc)
          for (auto& y : ds) {
            FormulaP m = pnfMeet(x, y);
            bud.charge(formulaSize(m), "conjunction");
            if (conC(m, type)) next.push_back(m);
          }
        acc = dedupForms(std::move(next));
        if (acc.empty()) break;
      }
      return acc;
    }
    case FK::PairF: {
      auto as = cdnfIn(f->a, type->a, bud);
      auto bs = cdnfIn(f->b, type->b, bud);
      bud.charge(as.size() * bs.size(), "pair");
      std::vector<FormulaP> out;
      for (auto& a : as)
        for (auto& b : bs) out.push_back(fPair(a, b));
      return dedupForms(std::move(out));
    }
    case FK::ArrowF: {
      auto as = cdnfIn(f->a, type->a, bud);
      if (as.empty()) return {fTop()};
      auto bs = cdnfIn(f->b, type->b, bud);
      if (bs.empty()) return {};
      double combos = 1;
      for (size_t i = 0; i < as.size(); i++) {
        combos *= static_cast<double>(bs.size());
        if (combos > static_cast<double>(kNodeBudget))
          throw BlowupLimit("normal-form budget exceeded in arrow");
      }
      std::vector<FormulaP> out;
      std::vector<size_t> sizes(as.size(), bs.size());
      forEachChoice(sizes, [&](const std::vector<size_t>& idx) {
        std::vector<FormulaP> atoms;
        for (size_t i = 0; i < as.size(); i++)
          atoms.push_back(fArrow(as[i], bs[idx[i]]));
        FormulaP cand = fAnd(std::move(atoms));
        bud.charge(formulaSize(cand), "arrow");
        if (conC(cand, type)) out.push_back(cand);
      });
      return dedupForms(std::move(out));
    }
    case FK::InL: {
      std::vector<FormulaP> out;
      for (auto& d : cdnfIn(f->a, type->a, bud)) out.push_back(fInL(d));
      return out;
    }
    case FK::InR: {
      std::vector<FormulaP> out;
      for (auto& d : cdnfIn(f->a, type->b, bud)) out.push_back(fInR(d));
      return out;
    }
    case FK::LiftF: {
      std::vector<FormulaP> out;
      for (auto& d : cdnfIn(f->a, type->a, bud)) out.push_back(fLift(d));
      return out;
    }
    case FK::BoxF: {
      auto ds = cdnfIn(f->a, type->a, bud);
      if (ds.empty()) return {};
      return {fBox(fOr(std::move(ds)))};
    }
    case FK::DiaF: {
      std::vector<FormulaP> out;
      for (auto& d : cdnfIn(f->a, type->a, bud)) out.push_back(fDia(d));
      return out;
    }
  }
  return {};
}

}  // namespace

std::vector<FormulaP> toCDNF(const FormulaP& f, const TypeP& t) {
  Budget bud;
  return cdnfIn(f, t, bud);
}

ElemP squigElem(const FormulaP& cpnf, const TypeP& type) {
  auto [t, nrec] = expose(type);
  ElemP u;
  if (cpnf->kind == FK::Top) {
    u = bottom(t);
  } else {
    AtomGroups g = groupAtoms(cpnf);
    switch (t->kind) {
      case TK::Unit: u = eUnitBot(); break;
      case TK::Prod:
        u = ePair(squigElem(fAnd(g.pairL), t->a), squigElem(fAnd(g.pairR), t->b));
        break;
      case TK::Fun: {
        std::vector<std::pair<ElemP, ElemP>> steps;
        for (size_t i = 0; i < g.arrA.size(); i++)
          steps.emplace_back(squigElem(g.arrA[i], t->a), squigElem(g.arrB[i], t->b));
        u = eStepFun(std::move(steps));
        break;
      }
      case TK::Sum: {
        FormulaP l = fAnd(g.inls), r = fAnd(g.inrs);
        if (!g.inls.empty() && termT(l, t->a))
          u = eSumL(squigElem(l, t->a));
        else if (!g.inrs.empty() && termT(r, t->b))
          u = eSumR(squigElem(r, t->b));
        else
          u = eSumBot();
        break;
      }
      case TK::Lift:
        if (g.lifts.empty())
          u = eLiftBot();
        else
          u = eLiftUp(squigElem(fAnd(g.lifts), t->a));
        break;
      case TK::Upper: {
        std::vector<std::vector<FormulaP>> rows;
        std::vector<size_t> sizes;
        for (auto& p : g.boxes) {
          rows.push_back(disjuncts(p));
          sizes.push_back(rows.back().size());
        }
        std::vector<ElemP> gens;
        forEachChoice(sizes, [&](const std::vector<size_t>& idx) {
          std::vector<FormulaP> picks;
          for (size_t i = 0; i < idx.size(); i++) picks.push_back(rows[i][idx[i]]);
          FormulaP m = fAnd(std::move(picks));
          if (conC(m, t->a)) gens.push_back(squigElem(m, t->a));
        });
        if (gens.empty())
          throw std::logic_error("squigElem: inconsistent box conjunction");
        u = eUpperSet(std::move(gens));
        break;
      }
      case TK::Lower: {
        std::vector<ElemP> gens;
        for (auto& p : g.dias) gens.push_back(squigElem(p, t->a));
        if (gens.empty()) gens.push_back(bottom(t->a));
        u = eLowerSet(std::move(gens));
        break;
      }
      default:
        throw std::logic_error("squigElem: atoms at type " + t->print());
    }
  }
  for (int i = 0; i < nrec; i++) u = eFold(u);
  return u;
}

bool satElem(const ElemP& uIn, const FormulaP& f, const TypeP& type) {
  ElemP u = uIn;
  TypeP t = type;
  while (t->kind == TK::Rec) {
    if (u->kind != EK::FoldE) throw std::logic_error("satElem: missing fold");
    u = u->a;
    t = unfoldRec(t);
  }
  switch (f->kind) {
    case FK::Top: return true;
    case FK::Bot: return false;
    case FK::And:
      return std::all_of(f->kids.begin(), f->kids.end(),
                         [&](const FormulaP& k) { return satElem(u, k, t); });
    case FK::Or:
      return std::any_of(f->kids.begin(), f->kids.end(),
                         [&](const FormulaP& k) { return satElem(u, k, t); });
    case FK::PairF:
      return satElem(u->a, f->a, t->a) && satElem(u->b, f->b, t->b);
    case FK::ArrowF: {
      for (auto& a : enumerate(t->a, formulaRank(f->a))) {
        if (!satElem(a, f->a, t->a)) continue;
        ElemP val = applyStep(u, a);
        if (!val) val = bottom(t->b);
        if (!satElem(val, f->b, t->b)) return false;
      }
      return true;
    }
    case FK::InL:
      if (u->kind == EK::SumL) return satElem(u->a, f->a, t->a);
      return satElem(bottom(t->a), f->a, t->a);
    case FK::InR:
      if (u->kind == EK::SumR) return satElem(u->a, f->a, t->b);
      return satElem(bottom(t->b), f->a, t->b);
    case FK::LiftF:
      return u->kind == EK::LiftUp && satElem(u->a, f->a, t->a);
    case FK::BoxF:
      return std::all_of(u->elems.begin(), u->elems.end(),
                         [&](const ElemP& x) { return satElem(x, f->a, t->a); });
    case FK::DiaF:
      return std::any_of(u->elems.begin(), u->elems.end(),
                         [&](const ElemP& x) { return satElem(x, f->a, t->a); });
  }
  return false;
}

std::vector<ElemP> minsat(const FormulaP& f, const TypeP& t) {
  std::vector<ElemP> us;
  for (auto& d : toCDNF(f, t)) us.push_back(squigElem(d, t));
  // keep the minimal ones, pairwise incomparable
  std::vector<ElemP> out;
  for (auto& u : us) {
    bool covered = false;
    for (auto& v : out)
      if (leq(v, u)) {
        covered = true;
        break;
      }
    if (covered) continue;
    std::vector<ElemP> keep;
    for (auto& v : out)
      if (!leq(u, v)) keep.push_back(v);
    keep.push_back(u);
    out = std::move(keep);
  }
  std::sort(out.begin(), out.end(),
            [](const ElemP& a, const ElemP& b) { return a->print() < b->print(); });
  return out;
}

bool entails(const FormulaP& f, const FormulaP& g, const TypeP& t) {
  auto ls = toCDNF(f, t);
  std::vector<ElemP> rs;
  for (auto& d : toCDNF(g, t)) rs.push_back(squigElem(d, t));
  for (auto& d : ls) {
    ElemP u = squigElem(d, t);
    bool ok = false;
    for (auto& v : rs)
      if (leq(v, u)) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

MetaFlags metaPredicates(const FormulaP& f, const TypeP& t) {
  MetaFlags m;
  m.pnf = isPNF(f);
  if (m.pnf) {
    m.con = conC(f, t);
    m.term = termT(f, t);
    m.refutable = !m.con;
  } else {
    auto ds = toCDNF(f, t);
    m.con = !ds.empty();
    m.term = std::all_of(ds.begin(), ds.end(),
                         [&](const FormulaP& d) { return termT(d, t); });
    m.refutable = ds.empty();
  }
  m.cpnf = m.pnf && m.con;
  return m;
}

bool wellFormed(const FormulaP& f, const TypeP& t) {
  try {
    checkFormulaAt(f, t);
    return true;
  } catch (const ParseError&) {
    return false;
  }
}

}  // namespace dl
