#include "elements.hpp"

#include <algorithm>
#include <map>

namespace dl {

namespace {

constexpr size_t kEnumCap = 50000;
constexpr size_t kStepCap = 16;

ElemP mk(EK k) {
  auto e = std::make_shared<Elem>();
  const_cast<Elem&>(*e).kind = k;
  return e;
}

bool elemLt(const ElemP& u, const ElemP& v) { return u->print() < v->print(); }

}  // namespace

std::string Elem::print() const {
  switch (kind) {
    case EK::UnitBot: return "*";
    case EK::PairE: return "<" + a->print() + "," + b->print() + ">";
    case EK::StepFun: {
      std::string out = "{";
      for (size_t i = 0; i < steps.size(); i++) {
        if (i) out += ",";
        out += "[" + steps[i].first->print() + "=>" + steps[i].second->print() + "]";
      }
      return out + "}";
    }
    case EK::SumBot: return "sbot";
    case EK::SumL: return "l(" + a->print() + ")";
    case EK::SumR: return "r(" + a->print() + ")";
    case EK::LiftBot: return "lbot";
    case EK::LiftUp: return "up(" + a->print() + ")";
    case EK::LowerSet:
    case EK::UpperSet: {
      std::string out = kind == EK::LowerSet ? "lo{" : "hi{";
      for (size_t i = 0; i < elems.size(); i++) {
        if (i) out += ",";
        out += elems[i]->print();
      }
      return out + "}";
    }
    case EK::FoldE: return "fold(" + a->print() + ")";
  }
  return "?";
}

ElemP eUnitBot() {
  static ElemP u = mk(EK::UnitBot);
  return u;
}
ElemP ePair(ElemP a, ElemP b) {
  auto e = mk(EK::PairE);
  const_cast<Elem&>(*e).a = std::move(a);
  const_cast<Elem&>(*e).b = std::move(b);
  return e;
}
ElemP eSumBot() {
  static ElemP u = mk(EK::SumBot);
  return u;
}
ElemP eSumL(ElemP a) {
  auto e = mk(EK::SumL);
  const_cast<Elem&>(*e).a = std::move(a);
  return e;
}
ElemP eSumR(ElemP a) {
  auto e = mk(EK::SumR);
  const_cast<Elem&>(*e).a = std::move(a);
  return e;
}
ElemP eLiftBot() {
  static ElemP u = mk(EK::LiftBot);
  return u;
}
ElemP eLiftUp(ElemP a) {
  auto e = mk(EK::LiftUp);
  const_cast<Elem&>(*e).a = std::move(a);
  return e;
}
ElemP eFold(ElemP a) {
  auto e = mk(EK::FoldE);
  const_cast<Elem&>(*e).a = std::move(a);
  return e;
}

bool isBottom(const ElemP& u) {
  switch (u->kind) {
    case EK::UnitBot:
    case EK::SumBot:
    case EK::LiftBot: return true;
    case EK::PairE: return isBottom(u->a) && isBottom(u->b);
    case EK::StepFun: return u->steps.empty();
    case EK::SumL:
    case EK::SumR: return false;
    case EK::LiftUp: return false;
    case EK::LowerSet:
    case EK::UpperSet:
      return u->elems.size() == 1 && isBottom(u->elems[0]);
    case EK::FoldE: return isBottom(u->a);
  }
  return false;
}

bool leq(const ElemP& u, const ElemP& v) {
  if (u.get() == v.get()) return true;
  // bottoms of sum/lift mix kinds within one type
  switch (u->kind) {
    case EK::UnitBot: return true;
    case EK::PairE: return leq(u->a, v->a) && leq(u->b, v->b);
    case EK::StepFun: {
      for (auto& [a, b] : u->steps) {
        ElemP val = applyStep(v, a);
        if (!val || !leq(b, val)) return false;
      }
      return true;
    }
    case EK::SumBot: return true;
    case EK::SumL: return v->kind == EK::SumL && leq(u->a, v->a);
    case EK::SumR: return v->kind == EK::SumR && leq(u->a, v->a);
    case EK::LiftBot: return true;
    case EK::LiftUp: return v->kind == EK::LiftUp && leq(u->a, v->a);
    case EK::LowerSet:
      for (auto& x : u->elems) {
        bool ok = false;
        for (auto& y : v->elems)
          if (leq(x, y)) {
            ok = true;
            break;
          }
        if (!ok) return false;
      }
      return true;
    case EK::UpperSet:
      for (auto& y : v->elems) {
        bool ok = false;
        for (auto& x : u->elems)
          if (leq(x, y)) {
            ok = true;
            break;
          }
        if (!ok) return false;
      }
      return true;
    case EK::FoldE: return leq(u->a, v->a);
  }
  return false;
}

bool elemEq(const ElemP& u, const ElemP& v) {
  if (u.get() == v.get()) return true;
  return leq(u, v) && leq(v, u);
}

ElemP applyStep(const ElemP& f, const ElemP& a) {
  ElemP acc;
  for (auto& [c, d] : f->steps) {
    if (!leq(c, a)) continue;
    if (!acc) {
      acc = d;
    } else {
      auto j = join(acc, d);
      if (!j) throw std::logic_error("inconsistent step function applied");
      acc = *j;
    }
  }
  if (acc) return acc;
  // least value: bottom of the result component; reconstruct from any step,
  // or the function is empty and callers use type-aware bottoms instead.
  if (!f->steps.empty()) {
    // bottom shape of a result is derivable from any step value
    struct Bot {
      static ElemP of(const ElemP& e) {
        switch (e->kind) {
          case EK::UnitBot:
          case EK::SumBot:
          case EK::LiftBot: return e;
          case EK::PairE: return ePair(of(e->a), of(e->b));
          case EK::StepFun: return eStepFun({});
          case EK::SumL:
          case EK::SumR: return eSumBot();
          case EK::LiftUp: return eLiftBot();
          case EK::LowerSet: {
            auto b = mk(EK::LowerSet);
            const_cast<Elem&>(*b).elems = {of(e->elems[0])};
            return b;
          }
          case EK::UpperSet: {
            auto b = mk(EK::UpperSet);
            const_cast<Elem&>(*b).elems = {of(e->elems[0])};
            return b;
          }
          case EK::FoldE: return eFold(of(e->a));
        }
        return e;
      }
    };
    return Bot::of(f->steps[0].second);
  }
  return nullptr;
}

ElemP eStepFun(std::vector<std::pair<ElemP, ElemP>> steps) {
  // merge equal-argument steps, drop bottom-valued ones
  std::vector<std::pair<ElemP, ElemP>> merged;
  for (auto& s : steps) {
    if (isBottom(s.second)) continue;
    bool found = false;
    for (auto& m : merged) {
      if (elemEq(m.first, s.first)) {
        auto j = join(m.second, s.second);
        if (!j) throw std::logic_error("eStepFun: inconsistent equal-arg steps");
        m.second = *j;
        found = true;
        break;
      }
    }
    if (!found) merged.push_back(s);
  }
  std::sort(merged.begin(), merged.end(), [](auto& x, auto& y) {
    return x.first->print() + "|" + x.second->print() <
           y.first->print() + "|" + y.second->print();
  });
  // drop steps already implied by the rest
  for (size_t i = 0; i < merged.size();) {
    std::vector<std::pair<ElemP, ElemP>> rest;
    for (size_t j = 0; j < merged.size(); j++)
      if (j != i) rest.push_back(merged[j]);
    bool redundant = false;
    ElemP val;
    bool any = false;
    for (auto& [c, d] : rest)
      if (leq(c, merged[i].first)) {
        if (!any) {
          val = d;
          any = true;
        } else {
          auto j2 = join(val, d);
          if (!j2) { any = false; break; }
          val = *j2;
        }
      }
    if (any && val && leq(merged[i].second, val)) redundant = true;
    if (redundant)
      merged.erase(merged.begin() + i);
    else
      i++;
  }
  auto e = mk(EK::StepFun);
  const_cast<Elem&>(*e).steps = std::move(merged);
  return e;
}

namespace {

std::vector<ElemP> antichain(std::vector<ElemP> xs, bool keepMaximal) {
  std::vector<ElemP> out;
  for (auto& x : xs) {
    bool dominated = false;
    for (auto& y : out) {
      if (keepMaximal ? leq(x, y) : leq(y, x)) {
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    std::vector<ElemP> keep;
    for (auto& y : out)
      if (!(keepMaximal ? leq(y, x) : leq(x, y))) keep.push_back(y);
    keep.push_back(x);
    out = std::move(keep);
  }
  std::sort(out.begin(), out.end(), elemLt);
  return out;
}

}  // namespace

ElemP eLowerSet(std::vector<ElemP> xs) {
  if (xs.empty()) throw std::logic_error("eLowerSet: empty generator set");
  auto e = mk(EK::LowerSet);
  const_cast<Elem&>(*e).elems = antichain(std::move(xs), true);
  return e;
}

ElemP eUpperSet(std::vector<ElemP> xs) {
  if (xs.empty()) throw std::logic_error("eUpperSet: empty generator set");
  auto e = mk(EK::UpperSet);
  const_cast<Elem&>(*e).elems = antichain(std::move(xs), false);
  return e;
}

bool stepsConsistent(const std::vector<std::pair<ElemP, ElemP>>& steps) {
  size_t n = steps.size();
  if (n > kStepCap) throw RankExplosion("step set too large for consistency check");
  for (size_t mask = 3; mask < (size_t(1) << n); mask++) {
    if (__builtin_popcountll(mask) < 2) continue;
    std::optional<ElemP> dj, rj;
    bool ok = true;
    for (size_t i = 0; i < n && ok; i++) {
      if (!(mask & (size_t(1) << i))) continue;
      dj = dj ? join(*dj, steps[i].first) : std::optional<ElemP>(steps[i].first);
      if (!dj) ok = false;
    }
    if (!ok) continue;  // arguments inconsistent, no constraint
    for (size_t i = 0; i < n; i++) {
      if (!(mask & (size_t(1) << i))) continue;
      rj = rj ? join(*rj, steps[i].second) : std::optional<ElemP>(steps[i].second);
      if (!rj) return false;
    }
  }
  return true;
}

std::optional<ElemP> join(const ElemP& u, const ElemP& v) {
  if (u.get() == v.get()) return u;
  if (u->kind == EK::SumBot || u->kind == EK::LiftBot) return v;
  if (v->kind == EK::SumBot || v->kind == EK::LiftBot) return u;
  switch (u->kind) {
    case EK::UnitBot: return u;
    case EK::PairE: {
      auto l = join(u->a, v->a);
      if (!l) return std::nullopt;
      auto r = join(u->b, v->b);
      if (!r) return std::nullopt;
      return ePair(*l, *r);
    }
    case EK::StepFun: {
      auto all = u->steps;
      for (auto& s : v->steps) all.push_back(s);
      if (!stepsConsistent(all)) return std::nullopt;
      return eStepFun(all);
    }
    case EK::SumL:
      if (v->kind != EK::SumL) return std::nullopt;
      if (auto j = join(u->a, v->a)) return eSumL(*j);
      return std::nullopt;
    case EK::SumR:
      if (v->kind != EK::SumR) return std::nullopt;
      if (auto j = join(u->a, v->a)) return eSumR(*j);
      return std::nullopt;
    case EK::LiftUp:
      if (v->kind != EK::LiftUp) return std::nullopt;
      if (auto j = join(u->a, v->a)) return eLiftUp(*j);
      return std::nullopt;
    case EK::LowerSet: {
      auto all = u->elems;
      for (auto& x : v->elems) all.push_back(x);
      return eLowerSet(std::move(all));
    }
    case EK::UpperSet: {
      std::vector<ElemP> meets;
      for (auto& x : u->elems)
        for (auto& y : v->elems)
          if (auto j = join(x, y)) meets.push_back(*j);
      if (meets.empty()) return std::nullopt;
      return eUpperSet(std::move(meets));
    }
    case EK::FoldE: {
      if (auto j = join(u->a, v->a)) return eFold(*j);
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

ElemP bottom(const TypeP& t) {
  switch (t->kind) {
    case TK::Unit: return eUnitBot();
    case TK::Prod: return ePair(bottom(t->a), bottom(t->b));
    case TK::Fun: return eStepFun({});
    case TK::Sum: return eSumBot();
    case TK::Lift: return eLiftBot();
    case TK::Upper: {
      auto e = mk(EK::UpperSet);
      const_cast<Elem&>(*e).elems = {bottom(t->a)};
      return e;
    }
    case TK::Lower: {
      auto e = mk(EK::LowerSet);
      const_cast<Elem&>(*e).elems = {bottom(t->a)};
      return e;
    }
    case TK::Var: throw std::logic_error("bottom of open type");
    case TK::Rec: return eFold(bottom(unfoldRec(t)));
  }
  throw std::logic_error("bottom: bad type");
}

namespace {

std::map<std::pair<std::string, int>, std::vector<ElemP>> g_enumMemo;

void capCheck(size_t n, const TypeP& t) {
  if (n > kEnumCap)
    throw RankExplosion("enumeration exceeds cap at type " + t->print());
}

std::vector<ElemP> dedupByPrint(std::vector<ElemP> xs) {
  std::sort(xs.begin(), xs.end(), elemLt);
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](const ElemP& a, const ElemP& b) {
                         return a->print() == b->print();
                       }),
           xs.end());
  return xs;
}

// all monotone maps dom -> cod as canonical step functions
void monotoneMaps(const std::vector<ElemP>& dom, const std::vector<ElemP>& cod,
                  size_t i, std::vector<ElemP>& picked,
                  std::vector<ElemP>& out, const TypeP& t) {
  if (i == dom.size()) {
    std::vector<std::pair<ElemP, ElemP>> steps;
    for (size_t j = 0; j < dom.size(); j++) steps.emplace_back(dom[j], picked[j]);
    out.push_back(eStepFun(std::move(steps)));
    capCheck(out.size(), t);
    return;
  }
  for (auto& c : cod) {
    bool ok = true;
    for (size_t j = 0; j < i && ok; j++) {
      if (leq(dom[j], dom[i]) && !leq(picked[j], c)) ok = false;
      if (leq(dom[i], dom[j]) && !leq(c, picked[j])) ok = false;
    }
    if (!ok) continue;
    picked.push_back(c);
    monotoneMaps(dom, cod, i + 1, picked, out, t);
    picked.pop_back();
  }
}

// nonempty antichain subsets of xs
void antichains(const std::vector<ElemP>& xs, size_t i, std::vector<ElemP>& cur,
                std::vector<std::vector<ElemP>>& out, const TypeP& t) {
  if (i == xs.size()) {
    if (!cur.empty()) {
      out.push_back(cur);
      capCheck(out.size(), t);
    }
    return;
  }
  antichains(xs, i + 1, cur, out, t);
  bool ok = true;
  for (auto& y : cur)
    if (leq(xs[i], y) || leq(y, xs[i])) {
      ok = false;
      break;
    }
  if (ok) {
    cur.push_back(xs[i]);
    antichains(xs, i + 1, cur, out, t);
    cur.pop_back();
  }
}

}  // namespace

const std::vector<ElemP>& enumerate(const TypeP& t, int k) {
  if (k < 0) k = 0;
  auto key = std::make_pair(typeKey(t), k);
  auto it = g_enumMemo.find(key);
  if (it != g_enumMemo.end()) return it->second;

  std::vector<ElemP> out;
  if (k == 0 || t->kind == TK::Unit) {
    out.push_back(bottom(t));
  } else {
    switch (t->kind) {
      case TK::Prod: {
        auto& as = enumerate(t->a, k - 1);
        auto& bs = enumerate(t->b, k - 1);
        capCheck(as.size() * bs.size(), t);
        for (auto& a : as)
          for (auto& b : bs) out.push_back(ePair(a, b));
        break;
      }
      case TK::Fun: {
        auto& dom = enumerate(t->a, k - 1);
        auto& cod = enumerate(t->b, k - 1);
        std::vector<ElemP> picked;
        monotoneMaps(dom, cod, 0, picked, out, t);
        break;
      }
      case TK::Sum: {
        out.push_back(eSumBot());
        for (auto& a : enumerate(t->a, k - 1))
          if (!isBottom(a)) out.push_back(eSumL(a));
        for (auto& b : enumerate(t->b, k - 1))
          if (!isBottom(b)) out.push_back(eSumR(b));
        capCheck(out.size(), t);
        break;
      }
      case TK::Lift: {
        out.push_back(eLiftBot());
        for (auto& a : enumerate(t->a, k - 1)) out.push_back(eLiftUp(a));
        capCheck(out.size(), t);
        break;
      }
      case TK::Upper:
      case TK::Lower: {
        auto& xs = enumerate(t->a, k - 1);
        std::vector<std::vector<ElemP>> chains;
        std::vector<ElemP> cur;
        antichains(xs, 0, cur, chains, t);
        for (auto& c : chains) {
          if (t->kind == TK::Upper)
            out.push_back(eUpperSet(c));
          else
            out.push_back(eLowerSet(c));
        }
        break;
      }
      case TK::Rec: {
        for (auto& a : enumerate(unfoldRec(t), k - 1)) out.push_back(eFold(a));
        break;
      }
      default: throw std::logic_error("enumerate: bad type");
    }
  }
  out = dedupByPrint(std::move(out));
  capCheck(out.size(), t);
  auto [pos, _] = g_enumMemo.emplace(std::move(key), std::move(out));
  return pos->second;
}

}  // namespace dl
