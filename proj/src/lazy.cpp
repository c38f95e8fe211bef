#include "lazy.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace dl {

namespace {

LamP mk(LambdaTerm t) {
  return std::make_shared<const LambdaTerm>(std::move(t));
}

}  // namespace

std::string LambdaTerm::print() const {
  switch (kind) {
    case LTK::Var: return var;
    case LTK::ConstC: return "C";
    case LTK::ConstP: return "P";
    case LTK::ConstStar: return "star";
    case LTK::Lam: return "(lam " + var + " " + a->print() + ")";
    case LTK::App: return "(app " + a->print() + " " + b->print() + ")";
  }
  return "?";
}

LamP lVar(const std::string& x) {
  LambdaTerm t;
  t.kind = LTK::Var;
  t.var = x;
  return mk(std::move(t));
}

LamP lLam(const std::string& x, LamP body) {
  LambdaTerm t;
  t.kind = LTK::Lam;
  t.var = x;
  t.a = std::move(body);
  return mk(std::move(t));
}

LamP lApp(LamP f, LamP a) {
  LambdaTerm t;
  t.kind = LTK::App;
  t.a = std::move(f);
  t.b = std::move(a);
  return mk(std::move(t));
}

LamP lConst(LTK c) {
  LambdaTerm t;
  t.kind = c;
  return mk(std::move(t));
}

namespace {

void freeVars(const LamP& m, std::set<std::string>& bound,
              std::set<std::string>& out) {
  switch (m->kind) {
    case LTK::Var:
      if (!bound.count(m->var)) out.insert(m->var);
      return;
    case LTK::Lam: {
      bool fresh = bound.insert(m->var).second;
      freeVars(m->a, bound, out);
      if (fresh) bound.erase(m->var);
      return;
    }
    case LTK::App:
      freeVars(m->a, bound, out);
      freeVars(m->b, bound, out);
      return;
    default: return;
  }
}

std::set<std::string> freeVars(const LamP& m) {
  std::set<std::string> bound, out;
  freeVars(m, bound, out);
  return out;
}

int freshCounter = 0;

std::string freshVar() { return "_" + std::to_string(++freshCounter); }

}  // namespace

bool lamClosed(const LamP& m) { return freeVars(m).empty(); }

int lamSize(const LamP& m) {
  switch (m->kind) {
    case LTK::Var:
    case LTK::ConstC:
    case LTK::ConstP:
    case LTK::ConstStar: return 1;
    case LTK::Lam: return 1 + lamSize(m->a);
    case LTK::App: return 1 + lamSize(m->a) + lamSize(m->b);
  }
  return 1;
}

LamP substLam(const LamP& m, const std::string& x, const LamP& s) {
  switch (m->kind) {
    case LTK::Var: return m->var == x ? s : m;
    case LTK::Lam: {
      if (m->var == x) return m;
      if (freeVars(s).count(m->var)) {
        std::string y = freshVar();
        LamP body = substLam(m->a, m->var, lVar(y));
        return lLam(y, substLam(body, x, s));
      }
      return lLam(m->var, substLam(m->a, x, s));
    }
    case LTK::App: return lApp(substLam(m->a, x, s), substLam(m->b, x, s));
    default: return m;
  }
}

bool constantsLegal(const LamP& m, Dialect d) {
  switch (m->kind) {
    case LTK::ConstC:
      return d == Dialect::WithC || d == Dialect::WithStar ||
             d == Dialect::WithStarP;
    case LTK::ConstP:
      return d == Dialect::WithP || d == Dialect::WithStarP;
    case LTK::ConstStar:
      return d == Dialect::WithStar || d == Dialect::WithStarP;
    case LTK::Lam: return constantsLegal(m->a, d);
    case LTK::App: return constantsLegal(m->a, d) && constantsLegal(m->b, d);
    default: return true;
  }
}

namespace {

LamP abbrev(const std::string& name) {
  auto lam = [](const std::string& x, LamP b) { return lLam(x, std::move(b)); };
  if (name == "I") return lam("x", lVar("x"));
  if (name == "K") return lam("x", lLam("y", lVar("x")));
  if (name == "S")
    return lam("x", lLam("y", lLam("z", lApp(lApp(lVar("x"), lVar("z")),
                                             lApp(lVar("y"), lVar("z"))))));
  if (name == "Y") {
    LamP half = lam("x", lApp(lVar("f"), lApp(lVar("x"), lVar("x"))));
    return lam("f", lApp(half, half));
  }
  if (name == "Omega") {
    LamP half = lam("x", lApp(lVar("x"), lVar("x")));
    return lApp(half, half);
  }
  if (name == "YK") return lApp(abbrev("Y"), abbrev("K"));
  return nullptr;
}

LamP parseLam1(const Sexpr& e) {
  if (e.atom) {
    if (e.sym == "C") return lConst(LTK::ConstC);
    if (e.sym == "P") return lConst(LTK::ConstP);
    if (e.sym == "star") return lConst(LTK::ConstStar);
    if (LamP a = abbrev(e.sym)) return a;
    return lVar(e.sym);
  }
  if (e.size() == 0) throw ParseError("empty term");
  if (e.headIs("lam")) {
    if (e.size() != 3 || !e[1].atom)
      throw ParseError("lam expects (lam x M): " + e.print());
    return lLam(e[1].sym, parseLam1(e[2]));
  }
  if (e.headIs("app")) {
    if (e.size() != 3) throw ParseError("app expects (app M N): " + e.print());
    return lApp(parseLam1(e[1]), parseLam1(e[2]));
  }
  // application sugar, left associating
  if (e.size() < 2) throw ParseError("application needs arguments: " + e.print());
  LamP t = parseLam1(e[0]);
  for (size_t i = 1; i < e.size(); i++) t = lApp(t, parseLam1(e[i]));
  return t;
}

}  // namespace

LamP parseLambda(const Sexpr& e, Dialect d) {
  LamP t = parseLam1(e);
  if (!constantsLegal(t, d))
    throw IllegalConstant("constant not permitted by dialect in " + t->print());
  return t;
}

LamP parseLambda(const std::string& text, Dialect d) {
  return parseLambda(parseSexpr(text), d);
}

// --- weak head evaluation ---

namespace {

struct PathGuard {
  std::set<std::string>& path;
  std::string key;
  bool inserted;
  PathGuard(std::set<std::string>& p, std::string k)
      : path(p), key(std::move(k)) {
    inserted = path.insert(key).second;
  }
  ~PathGuard() {
    if (inserted) path.erase(key);
  }
};

WhnfResult whConv(LamP w) { return {WhnfStatus::Converges, std::move(w)}; }

bool isStarDialect(Dialect d) {
  return d == Dialect::WithStar || d == Dialect::WithStarP;
}

WhnfResult evalWh(const LamP& m, Dialect d, int& fuel,
                  std::set<std::string>& path) {
  std::string key = m->print();
  if (path.count(key)) return {WhnfStatus::Diverges, nullptr};
  PathGuard guard(path, key);
  switch (m->kind) {
    case LTK::Lam:
    case LTK::ConstC:
    case LTK::ConstP:
    case LTK::ConstStar: return whConv(m);
    case LTK::Var: throw ParseError("unbound variable " + m->var);
    case LTK::App: break;
  }
  WhnfResult rf = evalWh(m->a, d, fuel, path);
  if (rf.status != WhnfStatus::Converges) return rf;
  const LamP& w = rf.whnf;
  if (w->kind == LTK::Lam) {
    if (fuel-- <= 0) return {WhnfStatus::FuelOut, nullptr};
    return evalWh(substLam(w->a, w->var, m->b), d, fuel, path);
  }
  if (w->kind == LTK::ConstC) {
    WhnfResult ra = evalWh(m->b, d, fuel, path);
    if (ra.status != WhnfStatus::Converges) return ra;
    if (!isStarDialect(d)) return whConv(abbrev("I"));
    if (ra.whnf->kind == LTK::ConstStar)
      return whConv(lLam("x", lLam("y", lVar("y"))));
    bool ctor = ra.whnf->kind == LTK::Lam || ra.whnf->kind == LTK::ConstC ||
                (ra.whnf->kind == LTK::ConstP && d == Dialect::WithStarP);
    if (ctor) return whConv(lLam("x", lLam("y", lVar("x"))));
    return {WhnfStatus::Diverges, nullptr};
  }
  if (w->kind == LTK::ConstP) return whConv(lApp(w, m->b));
  if (w->kind == LTK::App && w->a->kind == LTK::ConstP) {
    WhnfResult r1 = evalWh(w->b, d, fuel, path);
    if (r1.status == WhnfStatus::Converges) return whConv(abbrev("I"));
    WhnfResult r2 = evalWh(m->b, d, fuel, path);
    if (r2.status == WhnfStatus::Converges) return whConv(abbrev("I"));
    if (r1.status == WhnfStatus::FuelOut || r2.status == WhnfStatus::FuelOut)
      return {WhnfStatus::FuelOut, nullptr};
    return {WhnfStatus::Diverges, nullptr};
  }
  // applying the atom (or an otherwise stuck value) has no rule
  return {WhnfStatus::Diverges, nullptr};
}

}  // namespace

WhnfResult evalWhnf(const LamP& m, Dialect d, int fuel) {
  if (!constantsLegal(m, d))
    throw IllegalConstant("constant not permitted by dialect in " + m->print());
  std::set<std::string> path;
  return evalWh(m, d, fuel, path);
}

// --- one-step reduction and classification ---

namespace {

std::optional<LamP> stepOnce(const LamP& m, Dialect d) {
  if (m->kind != LTK::App) return std::nullopt;
  const LamP& f = m->a;
  if (f->kind == LTK::Lam) return substLam(f->a, f->var, m->b);
  if (f->kind == LTK::ConstC && d == Dialect::WithC) {
    if (m->b->kind == LTK::Lam || m->b->kind == LTK::ConstC)
      return abbrev("I");
    if (auto s = stepOnce(m->b, d)) return lApp(f, *s);
    return std::nullopt;
  }
  if (auto s = stepOnce(f, d)) return lApp(*s, m->b);
  return std::nullopt;
}

void spineOf(const LamP& m, LamP& head, std::vector<LamP>& args) {
  if (m->kind == LTK::App) {
    spineOf(m->a, head, args);
    args.push_back(m->b);
  } else {
    head = m;
  }
}

}  // namespace

Classification classify(const LamP& m, Dialect d, int fuel) {
  if (d != Dialect::Pure && d != Dialect::WithC)
    throw IllegalConstant("classification covers the pure and C dialects only");
  if (!constantsLegal(m, d))
    throw IllegalConstant("constant not permitted by dialect in " + m->print());
  Classification res;
  LamP cur = m;
  std::set<std::string> seen;
  while (true) {
    auto s = stepOnce(cur, d);
    if (!s) break;
    if (res.steps++ >= fuel || !seen.insert(cur->print()).second) {
      res.kind = ClassifyKind::DivergesOrFuelOut;
      return res;
    }
    cur = *s;
  }
  if (cur->kind == LTK::Lam) {
    res.kind = ClassifyKind::AbstractionNF;
    return res;
  }
  if (cur->kind == LTK::ConstC) {
    res.kind = ClassifyKind::ConstCNF;
    return res;
  }
  res.kind = ClassifyKind::HeadForm;
  while (true) {
    LamP head;
    std::vector<LamP> args;
    spineOf(cur, head, args);
    if (head->kind == LTK::Var) {
      res.headVar = head->var;
      res.spineLen = (int)args.size();
      return res;
    }
    // a stuck C application: peel one nesting level
    res.nestC++;
    res.outerLen += (int)args.size() - 1;
    cur = args[0];
  }
}

// --- the finite-rank domain ladder ---

namespace {

LEP mkEl(LazyEl e) { return std::make_shared<const LazyEl>(std::move(e)); }

LEP applySteps(const std::vector<std::pair<LEP, LEP>>& steps, const LEP& a) {
  LEP acc = lBot();
  for (auto& [u, v] : steps)
    if (leqLazy(u, a)) acc = joinLazy(acc, v);
  return acc;
}

}  // namespace

std::string LazyEl::print() const {
  if (bot) return "bot";
  std::string s = "{";
  for (size_t i = 0; i < steps.size(); i++) {
    if (i) s += ",";
    s += "[" + steps[i].first->print() + "->" + steps[i].second->print() + "]";
  }
  return s + "}";
}

LEP lBot() {
  static LEP b = mkEl(LazyEl{});
  return b;
}

LEP lFun(int rank, std::vector<std::pair<LEP, LEP>> steps) {
  std::vector<std::pair<LEP, LEP>> kept;
  for (auto& st : steps)
    if (!st.second->bot) kept.push_back(st);
  std::sort(kept.begin(), kept.end(), [](auto& x, auto& y) {
    return x.first->print() + "|" + x.second->print() <
           y.first->print() + "|" + y.second->print();
  });
  kept.erase(std::unique(kept.begin(), kept.end(),
                         [](auto& x, auto& y) {
                           return x.first->print() == y.first->print() &&
                                  x.second->print() == y.second->print();
                         }),
             kept.end());
  // drop steps dominated by the rest
  std::vector<std::pair<LEP, LEP>> out;
  for (size_t i = 0; i < kept.size(); i++) {
    std::vector<std::pair<LEP, LEP>> rest = out;
    rest.insert(rest.end(), kept.begin() + i + 1, kept.end());
    if (!leqLazy(kept[i].second, applySteps(rest, kept[i].first)))
      out.push_back(kept[i]);
  }
  LazyEl e;
  e.bot = false;
  e.rank = rank;
  e.steps = std::move(out);
  return mkEl(std::move(e));
}

bool leqLazy(const LEP& u, const LEP& v) {
  if (u->bot) return true;
  if (v->bot) return false;
  for (auto& [a, b] : u->steps)
    if (!leqLazy(b, applySteps(v->steps, a))) return false;
  return true;
}

bool lazyEq(const LEP& u, const LEP& v) {
  return leqLazy(u, v) && leqLazy(v, u);
}

LEP joinLazy(const LEP& u, const LEP& v) {
  if (u->bot) return v;
  if (v->bot) return u;
  std::vector<std::pair<LEP, LEP>> steps = u->steps;
  steps.insert(steps.end(), v->steps.begin(), v->steps.end());
  return lFun(std::max(u->rank, v->rank), std::move(steps));
}

LEP applyLazy(const LEP& f, const LEP& a) {
  if (f->bot) return lBot();
  return applySteps(f->steps, a);
}

LEP truncLazy(const LEP& u, int rank) {
  if (u->bot || rank <= 0) return lBot();
  if (u->rank <= rank) return u;
  std::vector<std::pair<LEP, LEP>> steps;
  for (auto& [a, b] : u->steps)
    steps.emplace_back(truncLazy(a, rank - 1), truncLazy(b, rank - 1));
  return lFun(rank, std::move(steps));
}

LEP topLazy(int rank) {
  if (rank <= 0) return lBot();
  return lFun(rank, {{lBot(), topLazy(rank - 1)}});
}

const std::vector<LEP>& lazyElems(int rank) {
  static std::vector<std::vector<LEP>> memo;
  if (rank < 0) rank = 0;
  if (rank >= kLazyRankCap)
    throw RankExplosion("element enumeration capped at rank " +
                        std::to_string(kLazyRankCap - 1));
  while ((int)memo.size() <= rank) {
    int r = (int)memo.size();
    std::vector<LEP> out = {lBot()};
    if (r > 0) {
      const std::vector<LEP>& prev = lazyElems(r - 1);
      size_t n = prev.size();
      std::vector<size_t> pick(n, 0);
      std::vector<LEP> table(n);
      // all monotone tables over the previous rank
      std::function<void(size_t)> go = [&](size_t i) {
        if (i == n) {
          std::vector<std::pair<LEP, LEP>> steps;
          for (size_t j = 0; j < n; j++) steps.emplace_back(prev[j], table[j]);
          out.push_back(lFun(r, std::move(steps)));
          return;
        }
        for (size_t c = 0; c < n; c++) {
          bool ok = true;
          for (size_t j = 0; j < i && ok; j++) {
            if (leqLazy(prev[j], prev[i]) && !leqLazy(table[j], prev[c]))
              ok = false;
            if (leqLazy(prev[i], prev[j]) && !leqLazy(prev[c], table[j]))
              ok = false;
          }
          if (!ok) continue;
          table[i] = prev[c];
          go(i + 1);
        }
      };
      go(0);
      std::sort(out.begin(), out.end(),
                [](const LEP& x, const LEP& y) { return x->print() < y->print(); });
      out.erase(std::unique(out.begin(), out.end(),
                            [](const LEP& x, const LEP& y) {
                              return x->print() == y->print();
                            }),
                out.end());
    }
    memo.push_back(std::move(out));
  }
  return memo[rank];
}

namespace {

LEP idElem(int rank) {
  if (rank <= 0) return lBot();
  static std::map<int, LEP> memo;
  auto it = memo.find(rank);
  if (it != memo.end()) return it->second;
  std::vector<std::pair<LEP, LEP>> steps;
  for (auto& w : lazyElems(rank - 1)) steps.emplace_back(w, w);
  LEP e = lFun(rank, std::move(steps));
  memo[rank] = e;
  return e;
}

LEP constElem(int rank, const LEP& v) {
  if (rank <= 0) return lBot();
  return lFun(rank, {{lBot(), v}});
}

}  // namespace

LEP cElem(int rank) {
  if (rank <= 0) return lBot();
  static std::map<int, LEP> memo;
  auto it = memo.find(rank);
  if (it != memo.end()) return it->second;
  // the least non-bottom element is below every convergent argument
  LEP e = lFun(rank, {{lFun(1, {}), idElem(rank - 1)}});
  memo[rank] = e;
  return e;
}

LEP pElem(int rank) {
  if (rank <= 0) return lBot();
  static std::map<int, LEP> memo;
  auto it = memo.find(rank);
  if (it != memo.end()) return it->second;
  LEP e = lFun(rank, {{lBot(), cElem(rank - 1)},
                      {lFun(1, {}), constElem(rank - 1, idElem(rank - 2))}});
  memo[rank] = e;
  return e;
}

// --- rank-bounded evaluation ---

namespace {

constexpr int kElemFuel = 200000;
// reductions that inflate the term past this are treated as undetermined
constexpr int kElemTermCap = 2000;

LamP rebuildSpine(LamP head, const std::vector<LamP>& args, size_t from) {
  for (size_t i = from; i < args.size(); i++) head = lApp(head, args[i]);
  return head;
}

LEP evalEl(const LamP& m, const std::map<std::string, LEP>& env, int k,
           int& fuel) {
  if (k <= 0) return lBot();
  LamP cur = m;
  std::set<std::string> path;
  LamP head;
  std::vector<LamP> args;
  while (true) {
    head = nullptr;
    args.clear();
    spineOf(cur, head, args);
    if (head->kind != LTK::Lam || args.empty()) break;
    if (fuel-- <= 0) return lBot();
    if (!path.insert(cur->print()).second) return lBot();
    cur = rebuildSpine(substLam(head->a, head->var, args[0]), args, 1);
    if (lamSize(cur) > kElemTermCap) return lBot();
  }
  LEP d;
  size_t firstArg = 0;
  switch (head->kind) {
    case LTK::Lam: {
      std::vector<std::pair<LEP, LEP>> steps;
      for (auto& u : lazyElems(k - 1)) {
        std::map<std::string, LEP> env2 = env;
        env2[head->var] = u;
        steps.emplace_back(u, evalEl(head->a, env2, k - 1, fuel));
      }
      return lFun(k, std::move(steps));
    }
    case LTK::Var: {
      auto it = env.find(head->var);
      if (it == env.end()) throw ParseError("unbound variable " + head->var);
      d = it->second;
      break;
    }
    // constants are taken at full precision; the result is truncated below
    case LTK::ConstC: d = cElem(kLazyRankCap + 1); break;
    case LTK::ConstP: d = pElem(kLazyRankCap + 1); break;
    case LTK::ConstStar:
      throw IllegalConstant("the atom has no rank semantics");
    default: d = lBot();
  }
  // arguments keep the full budget: step keys live one rank down, so the
  // needed precision survives the final truncation
  for (size_t i = firstArg; i < args.size(); i++)
    d = applyLazy(d, evalEl(args[i], env, k, fuel));
  return truncLazy(d, k);
}

}  // namespace

LEP evalElem(const LamP& m, const std::map<std::string, LEP>& env, int k,
             Dialect d) {
  if (k > kLazyRankCap)
    throw RankExplosion("evaluation rank capped at " +
                        std::to_string(kLazyRankCap));
  if (d == Dialect::WithStar || d == Dialect::WithStarP)
    throw IllegalConstant("the atom dialects have no rank semantics");
  int fuel = kElemFuel;
  return evalEl(m, env, k, fuel);
}

// --- the lazy domain logic ---

namespace {

LFP mkF(LFormula f) { return std::make_shared<const LFormula>(std::move(f)); }

}  // namespace

std::string LFormula::print() const {
  switch (kind) {
    case LFK::TopL: return "tt";
    case LFK::ArrBot: return "(arr " + a->print() + " " + b->print() + ")";
    case LFK::AndL: {
      std::string s = "(and";
      for (auto& k : kids) s += " " + k->print();
      return s + ")";
    }
  }
  return "?";
}

LFP lfTop() {
  static LFP t = mkF([] {
    LFormula f;
    f.kind = LFK::TopL;
    return f;
  }());
  return t;
}

LFP lfAnd(std::vector<LFP> kids) {
  std::vector<LFP> flat;
  for (auto& k : kids) {
    if (k->kind == LFK::TopL) continue;
    if (k->kind == LFK::AndL)
      flat.insert(flat.end(), k->kids.begin(), k->kids.end());
    else
      flat.push_back(k);
  }
  std::sort(flat.begin(), flat.end(),
            [](const LFP& x, const LFP& y) { return x->print() < y->print(); });
  flat.erase(std::unique(flat.begin(), flat.end(),
                         [](const LFP& x, const LFP& y) {
                           return x->print() == y->print();
                         }),
             flat.end());
  if (flat.empty()) return lfTop();
  if (flat.size() == 1) return flat[0];
  LFormula f;
  f.kind = LFK::AndL;
  f.kids = std::move(flat);
  return mkF(std::move(f));
}

LFP lfArr(LFP a, LFP b) {
  LFormula f;
  f.kind = LFK::ArrBot;
  f.a = std::move(a);
  f.b = std::move(b);
  return mkF(std::move(f));
}

LFP lfLambda() { return lfArr(lfTop(), lfTop()); }

LFP parseLFormula(const Sexpr& e) {
  if (e.atom) {
    if (e.sym == "tt") return lfTop();
    if (e.sym == "lam") return lfLambda();
    throw ParseError("unknown formula atom " + e.sym);
  }
  if (e.headIs("and")) {
    std::vector<LFP> kids;
    for (size_t i = 1; i < e.size(); i++) kids.push_back(parseLFormula(e[i]));
    return lfAnd(std::move(kids));
  }
  if (e.headIs("arr")) {
    if (e.size() != 3) throw ParseError("arr expects two parts: " + e.print());
    return lfArr(parseLFormula(e[1]), parseLFormula(e[2]));
  }
  throw ParseError("unknown formula form " + e.print());
}

LFP parseLFormula(const std::string& text) {
  return parseLFormula(parseSexpr(text));
}

int lfDepth(const LFP& f) {
  switch (f->kind) {
    case LFK::TopL: return 0;
    case LFK::ArrBot: return 1 + std::max(lfDepth(f->a), lfDepth(f->b));
    case LFK::AndL: {
      int d = 0;
      for (auto& k : f->kids) d = std::max(d, lfDepth(k));
      return 1 + d;
    }
  }
  return 0;
}

int lfArrowRank(const LFP& f) {
  switch (f->kind) {
    case LFK::TopL: return 0;
    case LFK::ArrBot: return 1 + std::max(lfArrowRank(f->a), lfArrowRank(f->b));
    case LFK::AndL: {
      int d = 0;
      for (auto& k : f->kids) d = std::max(d, lfArrowRank(k));
      return d;
    }
  }
  return 0;
}

LEP felem(const LFP& f) {
  switch (f->kind) {
    case LFK::TopL: return lBot();
    case LFK::ArrBot:
      return lFun(lfArrowRank(f), {{felem(f->a), felem(f->b)}});
    case LFK::AndL: {
      LEP e = lBot();
      for (auto& k : f->kids) e = joinLazy(e, felem(k));
      return e;
    }
  }
  return lBot();
}

bool satLazy(const LEP& e, const LFP& f) { return leqLazy(felem(f), e); }

namespace {

using NlPairs = std::vector<std::pair<LFP, LFP>>;

NlPairs nlPairsOf(const LFP& f) {
  switch (f->kind) {
    case LFK::TopL: return {};
    case LFK::AndL: {
      NlPairs out;
      for (auto& k : f->kids) {
        NlPairs p = nlPairsOf(k);
        out.insert(out.end(), p.begin(), p.end());
      }
      return out;
    }
    case LFK::ArrBot: {
      NlPairs lhs = nlPairsOf(f->a);
      std::vector<LFP> conj;
      for (auto& [x, y] : lhs) conj.push_back(lfArr(x, y));
      LFP a = lfAnd(std::move(conj));
      NlPairs rhs = nlPairsOf(f->b);
      if (rhs.empty()) return {{lfTop(), lfTop()}};
      NlPairs out;
      for (auto& [x, y] : rhs) out.emplace_back(a, lfArr(x, y));
      return out;
    }
  }
  return {};
}

bool entailsNl(const NlPairs& p, const NlPairs& q) {
  if (q.empty()) return true;
  if (p.empty()) return false;
  for (auto& [c, dd] : q) {
    NlPairs cp = nlPairsOf(c);
    NlPairs sel;
    for (auto& [a, b] : p)
      if (entailsNl(cp, nlPairsOf(a))) {
        NlPairs bp = nlPairsOf(b);
        sel.insert(sel.end(), bp.begin(), bp.end());
      }
    if (!entailsNl(sel, nlPairsOf(dd))) return false;
  }
  return true;
}

}  // namespace

bool entailsLazy(const LFP& phi, const LFP& psi) {
  return entailsNl(nlPairsOf(phi), nlPairsOf(psi));
}

bool lcheck(const LamP& m, const std::map<std::string, LFP>& gamma,
            const LFP& phi, int k) {
  int need = lfArrowRank(phi);
  for (auto& [x, g] : gamma) need = std::max(need, lfArrowRank(g));
  if (k < need)
    throw RankExplosion("rank " + std::to_string(k) +
                        " below formula rank " + std::to_string(need));
  std::map<std::string, LEP> env;
  for (auto& [x, g] : gamma) env[x] = felem(g);
  return satLazy(evalElem(m, env, k), phi);
}

// --- characteristic terms ---

namespace {

bool isLambdaF(const LFP& f) {
  return f->kind == LFK::ArrBot && f->a->kind == LFK::TopL &&
         f->b->kind == LFK::TopL;
}

std::vector<LFP> spineOfConjunct(const LFP& f) {
  if (isLambdaF(f)) return {};
  if (f->kind != LFK::ArrBot)
    throw NotNL("conjunct is not an arrow chain: " + f->print());
  std::vector<LFP> rest = spineOfConjunct(f->b);
  rest.insert(rest.begin(), f->a);
  return rest;
}

std::vector<std::vector<LFP>> nlSpines(const LFP& f) {
  std::vector<std::vector<LFP>> out;
  if (f->kind == LFK::TopL) return out;
  std::vector<LFP> conjuncts =
      f->kind == LFK::AndL ? f->kids : std::vector<LFP>{f};
  for (auto& c : conjuncts) out.push_back(spineOfConjunct(c));
  return out;
}

// C M as P M M over the single primitive P
LamP encC1(const LamP& m) {
  return lApp(lApp(lConst(LTK::ConstP), m), m);
}
LamP encC2(const LamP& a, const LamP& b) { return lApp(encC1(a), b); }

LamP sumP(const std::vector<LamP>& ns) {
  if (ns.empty()) return abbrev("Omega");
  LamP acc = ns.back();
  for (size_t i = ns.size() - 1; i-- > 0;)
    acc = lApp(lApp(lConst(LTK::ConstP), ns[i]), acc);
  return acc;
}

LamP prodC(const std::vector<LamP>& ns) {
  LamP acc = lApp(abbrev("K"), abbrev("Omega"));
  for (size_t i = ns.size(); i-- > 0;) acc = encC2(ns[i], acc);
  return acc;
}

}  // namespace

LamP mPhi(const LFP& phi) {
  std::vector<std::vector<LFP>> spines = nlSpines(phi);
  if (spines.empty()) return abbrev("Omega");
  size_t k = 0;
  for (auto& s : spines) k = std::max(k, s.size());
  LamP m = lApp(abbrev("K"), abbrev("Omega"));
  for (size_t i = 0; i < k; i++) {
    size_t j = k - i;  // binder position, innermost first
    std::vector<LamP> ns;
    for (auto& s : spines) {
      if (s.size() < j) continue;
      LamP acc = encC1(lApp(tPhi(s[j - 1]), lVar("x" + std::to_string(j))));
      for (size_t l = j - 1; l-- > 0;)
        acc = encC2(lApp(tPhi(s[l]), lVar("x" + std::to_string(l + 1))), acc);
      ns.push_back(acc);
    }
    m = lLam("x" + std::to_string(j), encC2(sumP(ns), m));
  }
  return m;
}

LamP tPhi(const LFP& phi) {
  std::vector<std::vector<LFP>> spines = nlSpines(phi);
  std::vector<LamP> ns;
  for (auto& s : spines) {
    LamP n = lVar("x");
    for (auto& c : s) n = lApp(n, mPhi(c));
    ns.push_back(n);
  }
  return lLam("x", prodC(ns));
}

// --- bounded applicative bisimulation ---

BisimCorpusResult bisimCorpus(const LamP& m, const LamP& n, int k,
                              const std::vector<LamP>& corpus, Dialect d,
                              int fuel) {
  constexpr size_t kTupleCap = 5000;
  std::vector<std::vector<LamP>> tuples = {{}};
  size_t tried = 0;
  for (size_t len = 0; len < (size_t)k && tried < kTupleCap; len++) {
    std::vector<std::vector<LamP>> next;
    for (auto& t : tuples) {
      if (tried >= kTupleCap) break;
      tried++;
      LamP lm = m, ln = n;
      for (auto& a : t) {
        lm = lApp(lm, a);
        ln = lApp(ln, a);
      }
      WhnfResult rm = evalWhnf(lm, d, fuel);
      if (rm.status == WhnfStatus::Converges) {
        WhnfResult rn = evalWhnf(ln, d, fuel);
        if (rn.status == WhnfStatus::Diverges) return {true, t};
      }
      if (len + 1 < (size_t)k)
        for (auto& c : corpus) {
          std::vector<LamP> t2 = t;
          t2.push_back(c);
          next.push_back(std::move(t2));
        }
    }
    tuples = std::move(next);
  }
  return {false, {}};
}

}  // namespace dl
