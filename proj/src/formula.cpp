#include "formula.hpp"

#include <algorithm>

namespace dl {

namespace {

FormulaP mk(FK k, FormulaP a = nullptr, FormulaP b = nullptr,
            std::vector<FormulaP> kids = {}) {
  auto f = std::make_shared<Formula>();
  const_cast<Formula&>(*f).kind = k;
  const_cast<Formula&>(*f).a = std::move(a);
  const_cast<Formula&>(*f).b = std::move(b);
  const_cast<Formula&>(*f).kids = std::move(kids);
  return f;
}

}  // namespace

std::string Formula::print() const {
  switch (kind) {
    case FK::Top: return "tt";
    case FK::Bot: return "ff";
    case FK::And:
    case FK::Or: {
      std::string out = kind == FK::And ? "(and" : "(or";
      for (auto& k : kids) out += " " + k->print();
      return out + ")";
    }
    case FK::PairF: return "(pair " + a->print() + " " + b->print() + ")";
    case FK::ArrowF: return "(arrow " + a->print() + " " + b->print() + ")";
    case FK::InL: return "(inl " + a->print() + ")";
    case FK::InR: return "(inr " + a->print() + ")";
    case FK::LiftF: return "(lift " + a->print() + ")";
    case FK::BoxF: return "(box " + a->print() + ")";
    case FK::DiaF: return "(dia " + a->print() + ")";
  }
  return "?";
}

FormulaP fTop() {
  static FormulaP t = mk(FK::Top);
  return t;
}
FormulaP fBot() {
  static FormulaP f = mk(FK::Bot);
  return f;
}

bool formulaEq(const FormulaP& x, const FormulaP& y) {
  return x.get() == y.get() || x->print() == y->print();
}
bool formulaLt(const FormulaP& x, const FormulaP& y) { return x->print() < y->print(); }

namespace {

std::vector<FormulaP> canonKids(std::vector<FormulaP> kids, FK self, FK unit) {
  std::vector<FormulaP> flat;
  for (auto& k : kids) {
    if (k->kind == self) {
      for (auto& g : k->kids) flat.push_back(g);
    } else if (k->kind != unit) {
      flat.push_back(k);
    }
  }
  std::sort(flat.begin(), flat.end(), formulaLt);
  flat.erase(std::unique(flat.begin(), flat.end(), formulaEq), flat.end());
  return flat;
}

}  // namespace

FormulaP fAnd(std::vector<FormulaP> kids) {
  auto flat = canonKids(std::move(kids), FK::And, FK::Top);
  if (flat.empty()) return fTop();
  if (flat.size() == 1) return flat[0];
  return mk(FK::And, nullptr, nullptr, std::move(flat));
}

FormulaP fOr(std::vector<FormulaP> kids) {
  auto flat = canonKids(std::move(kids), FK::Or, FK::Bot);
  if (flat.empty()) return fBot();
  if (flat.size() == 1) return flat[0];
  return mk(FK::Or, nullptr, nullptr, std::move(flat));
}

FormulaP fAnd2(FormulaP x, FormulaP y) { return fAnd({std::move(x), std::move(y)}); }
FormulaP fOr2(FormulaP x, FormulaP y) { return fOr({std::move(x), std::move(y)}); }
FormulaP fPair(FormulaP a, FormulaP b) { return mk(FK::PairF, std::move(a), std::move(b)); }
FormulaP fArrow(FormulaP a, FormulaP b) { return mk(FK::ArrowF, std::move(a), std::move(b)); }
FormulaP fInL(FormulaP a) { return mk(FK::InL, std::move(a)); }
FormulaP fInR(FormulaP a) { return mk(FK::InR, std::move(a)); }
FormulaP fLift(FormulaP a) { return mk(FK::LiftF, std::move(a)); }
FormulaP fBox(FormulaP a) { return mk(FK::BoxF, std::move(a)); }
FormulaP fDia(FormulaP a) { return mk(FK::DiaF, std::move(a)); }

FormulaP parseFormula(const Sexpr& e) {
  if (e.atom) {
    if (e.sym == "tt") return fTop();
    if (e.sym == "ff") return fBot();
    throw ParseError("unknown formula atom: " + e.sym);
  }
  if (e.items.empty() || !e.items[0].atom)
    throw ParseError("bad formula: " + e.print());
  const std::string& h = e.items[0].sym;
  auto arity = [&](size_t n) {
    if (e.items.size() != n + 1)
      throw ParseError("bad arity for " + h + " in formula: " + e.print());
  };
  if (h == "and" || h == "or") {
    if (e.items.size() < 3)
      throw ParseError(h + " needs at least two arguments: " + e.print());
    std::vector<FormulaP> kids;
    for (size_t i = 1; i < e.items.size(); i++) kids.push_back(parseFormula(e[i]));
    return h == "and" ? fAnd(std::move(kids)) : fOr(std::move(kids));
  }
  if (h == "pair") {
    arity(2);
    return fPair(parseFormula(e[1]), parseFormula(e[2]));
  }
  if (h == "arrow") {
    arity(2);
    return fArrow(parseFormula(e[1]), parseFormula(e[2]));
  }
  if (h == "inl") {
    arity(1);
    return fInL(parseFormula(e[1]));
  }
  if (h == "inr") {
    arity(1);
    return fInR(parseFormula(e[1]));
  }
  if (h == "lift") {
    arity(1);
    return fLift(parseFormula(e[1]));
  }
  if (h == "box") {
    arity(1);
    return fBox(parseFormula(e[1]));
  }
  if (h == "dia") {
    arity(1);
    return fDia(parseFormula(e[1]));
  }
  throw ParseError("unknown formula constructor: " + h);
}

FormulaP parseFormula(const std::string& text) { return parseFormula(parseSexpr(text)); }

std::vector<FormulaP> conjuncts(const FormulaP& f) {
  if (f->kind == FK::And) return f->kids;
  if (f->kind == FK::Top) return {};
  return {f};
}

std::vector<FormulaP> disjuncts(const FormulaP& f) {
  if (f->kind == FK::Or) return f->kids;
  if (f->kind == FK::Bot) return {};
  return {f};
}

int formulaRank(const FormulaP& f) {
  switch (f->kind) {
    case FK::Top:
    case FK::Bot: return 0;
    case FK::And:
    case FK::Or: {
      int r = 0;
      for (auto& k : f->kids) r = std::max(r, formulaRank(k));
      return r;
    }
    case FK::PairF:
    case FK::ArrowF:
      return 1 + std::max(formulaRank(f->a), formulaRank(f->b));
    case FK::InL:
    case FK::InR:
    case FK::LiftF:
    case FK::BoxF:
    case FK::DiaF:
      return 1 + formulaRank(f->a);
  }
  return 0;
}

size_t formulaSize(const FormulaP& f) {
  size_t n = 1;
  for (auto& k : f->kids) n += formulaSize(k);
  if (f->a) n += formulaSize(f->a);
  if (f->b) n += formulaSize(f->b);
  return n;
}

void checkFormulaAt(const FormulaP& f, const TypeP& t) {
  if (f->kind == FK::Top || f->kind == FK::Bot) return;
  if (f->kind == FK::And || f->kind == FK::Or) {
    for (auto& k : f->kids) checkFormulaAt(k, t);
    return;
  }
  if (t->kind == TK::Rec) {
    checkFormulaAt(f, unfoldRec(t));
    return;
  }
  auto bad = [&]() -> ParseError {
    return ParseError("formula " + f->print() + " not well-formed at type " + t->print());
  };
  switch (f->kind) {
    case FK::PairF:
      if (t->kind != TK::Prod) throw bad();
      checkFormulaAt(f->a, t->a);
      checkFormulaAt(f->b, t->b);
      return;
    case FK::ArrowF:
      if (t->kind != TK::Fun) throw bad();
      checkFormulaAt(f->a, t->a);
      checkFormulaAt(f->b, t->b);
      return;
    case FK::InL:
      if (t->kind != TK::Sum) throw bad();
      checkFormulaAt(f->a, t->a);
      return;
    case FK::InR:
      if (t->kind != TK::Sum) throw bad();
      checkFormulaAt(f->a, t->b);
      return;
    case FK::LiftF:
      if (t->kind != TK::Lift) throw bad();
      checkFormulaAt(f->a, t->a);
      return;
    case FK::BoxF:
      if (t->kind != TK::Upper) throw bad();
      checkFormulaAt(f->a, t->a);
      return;
    case FK::DiaF:
      if (t->kind != TK::Lower) throw bad();
      checkFormulaAt(f->a, t->a);
      return;
    default: throw bad();
  }
}

}  // namespace dl
