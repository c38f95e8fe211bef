#include "types.hpp"

#include <map>
#include <set>

namespace dl {

namespace {

TypeP mk(TK k, TypeP a = nullptr, TypeP b = nullptr, std::string n = "") {
  auto t = std::make_shared<Type>();
  const_cast<Type&>(*t).kind = k;
  const_cast<Type&>(*t).a = std::move(a);
  const_cast<Type&>(*t).b = std::move(b);
  const_cast<Type&>(*t).name = std::move(n);
  return t;
}

}  // namespace

TypeP tUnit() {
  static TypeP u = mk(TK::Unit);
  return u;
}
TypeP tProd(TypeP a, TypeP b) { return mk(TK::Prod, std::move(a), std::move(b)); }
TypeP tFun(TypeP a, TypeP b) { return mk(TK::Fun, std::move(a), std::move(b)); }
TypeP tSum(TypeP a, TypeP b) { return mk(TK::Sum, std::move(a), std::move(b)); }
TypeP tLift(TypeP a) { return mk(TK::Lift, std::move(a)); }
TypeP tUpper(TypeP a) { return mk(TK::Upper, std::move(a)); }
TypeP tLower(TypeP a) { return mk(TK::Lower, std::move(a)); }
TypeP tVar(const std::string& n) { return mk(TK::Var, nullptr, nullptr, n); }
TypeP tRec(const std::string& n, TypeP body) {
  return mk(TK::Rec, std::move(body), nullptr, n);
}

std::string Type::print() const {
  switch (kind) {
    case TK::Unit: return "1";
    case TK::Prod: return "(x " + a->print() + " " + b->print() + ")";
    case TK::Fun: return "(-> " + a->print() + " " + b->print() + ")";
    case TK::Sum: return "(+ " + a->print() + " " + b->print() + ")";
    case TK::Lift: return "(lift " + a->print() + ")";
    case TK::Upper: return "(pu " + a->print() + ")";
    case TK::Lower: return "(pl " + a->print() + ")";
    case TK::Var: return name;
    case TK::Rec: return "(rec " + name + " " + a->print() + ")";
  }
  return "?";
}

namespace {

int g_recCounter = 0;

TypeP parseTypeIn(const Sexpr& e, std::map<std::string, std::string>& ren) {
  if (e.atom) {
    if (e.sym == "1") return tUnit();
    auto it = ren.find(e.sym);
    if (it == ren.end()) throw ParseError("unbound type variable: " + e.sym);
    return tVar(it->second);
  }
  if (e.items.empty() || !e.items[0].atom) throw ParseError("bad type: " + e.print());
  const std::string& h = e.items[0].sym;
  auto arity = [&](size_t n) {
    if (e.items.size() != n + 1)
      throw ParseError("bad arity for " + h + " in type: " + e.print());
  };
  if (h == "x") {
    arity(2);
    return tProd(parseTypeIn(e[1], ren), parseTypeIn(e[2], ren));
  }
  if (h == "->") {
    arity(2);
    return tFun(parseTypeIn(e[1], ren), parseTypeIn(e[2], ren));
  }
  if (h == "+") {
    arity(2);
    return tSum(parseTypeIn(e[1], ren), parseTypeIn(e[2], ren));
  }
  if (h == "lift") {
    arity(1);
    return tLift(parseTypeIn(e[1], ren));
  }
  if (h == "pu") {
    arity(1);
    return tUpper(parseTypeIn(e[1], ren));
  }
  if (h == "pl") {
    arity(1);
    return tLower(parseTypeIn(e[1], ren));
  }
  if (h == "rec") {
    arity(2);
    if (!e[1].atom) throw ParseError("rec binder must be an atom");
    std::string fresh = "t" + std::to_string(g_recCounter++);
    auto saved = ren;
    ren[e[1].sym] = fresh;
    TypeP body = parseTypeIn(e[2], ren);
    ren = saved;
    return tRec(fresh, body);
  }
  throw ParseError("unknown type constructor: " + h);
}

// Every free occurrence of `var` must sit under ->, + or lift, so that the
// bottom element of the recursive type is finitely representable.
bool guardedOcc(const TypeP& t, const std::string& var, bool guarded) {
  switch (t->kind) {
    case TK::Unit: return true;
    case TK::Var: return t->name != var || guarded;
    case TK::Prod: return guardedOcc(t->a, var, guarded) && guardedOcc(t->b, var, guarded);
    case TK::Fun: return guardedOcc(t->a, var, true) && guardedOcc(t->b, var, true);
    case TK::Sum: return guardedOcc(t->a, var, true) && guardedOcc(t->b, var, true);
    case TK::Lift: return guardedOcc(t->a, var, true);
    case TK::Upper: return guardedOcc(t->a, var, guarded);
    case TK::Lower: return guardedOcc(t->a, var, guarded);
    case TK::Rec: return guardedOcc(t->a, var, guarded);
  }
  return true;
}

void checkGuards(const TypeP& t) {
  switch (t->kind) {
    case TK::Unit:
    case TK::Var: return;
    case TK::Prod:
    case TK::Fun:
    case TK::Sum:
      checkGuards(t->a);
      checkGuards(t->b);
      return;
    case TK::Lift:
    case TK::Upper:
    case TK::Lower: checkGuards(t->a); return;
    case TK::Rec:
      if (!guardedOcc(t->a, t->name, false))
        throw ParseError("unguarded recursive type: " + t->print());
      checkGuards(t->a);
      return;
  }
}

TypeP subst(const TypeP& t, const std::string& var, const TypeP& repl) {
  switch (t->kind) {
    case TK::Unit: return t;
    case TK::Var: return t->name == var ? repl : t;
    case TK::Prod: return tProd(subst(t->a, var, repl), subst(t->b, var, repl));
    case TK::Fun: return tFun(subst(t->a, var, repl), subst(t->b, var, repl));
    case TK::Sum: return tSum(subst(t->a, var, repl), subst(t->b, var, repl));
    case TK::Lift: return tLift(subst(t->a, var, repl));
    case TK::Upper: return tUpper(subst(t->a, var, repl));
    case TK::Lower: return tLower(subst(t->a, var, repl));
    case TK::Rec:
      // binders are renamed apart at parse time, no capture possible
      return tRec(t->name, subst(t->a, var, repl));
  }
  return t;
}

}  // namespace

TypeP parseType(const Sexpr& e) {
  std::map<std::string, std::string> ren;
  TypeP t = parseTypeIn(e, ren);
  checkGuards(t);
  return t;
}

TypeP parseType(const std::string& text) { return parseType(parseSexpr(text)); }

namespace {

void keyIn(const TypeP& t, std::vector<std::string>& binders, std::string& out) {
  switch (t->kind) {
    case TK::Unit: out += '1'; return;
    case TK::Prod: out += "(x ";
      keyIn(t->a, binders, out); out += ' '; keyIn(t->b, binders, out); out += ')';
      return;
    case TK::Fun: out += "(-> ";
      keyIn(t->a, binders, out); out += ' '; keyIn(t->b, binders, out); out += ')';
      return;
    case TK::Sum: out += "(+ ";
      keyIn(t->a, binders, out); out += ' '; keyIn(t->b, binders, out); out += ')';
      return;
    case TK::Lift: out += "(lift "; keyIn(t->a, binders, out); out += ')'; return;
    case TK::Upper: out += "(pu "; keyIn(t->a, binders, out); out += ')'; return;
    case TK::Lower: out += "(pl "; keyIn(t->a, binders, out); out += ')'; return;
    case TK::Var: {
      for (size_t i = binders.size(); i-- > 0;) {
        if (binders[i] == t->name) {
          out += '#';
          out += std::to_string(binders.size() - 1 - i);
          return;
        }
      }
      out += t->name;
      return;
    }
    case TK::Rec:
      out += "(rec ";
      binders.push_back(t->name);
      keyIn(t->a, binders, out);
      binders.pop_back();
      out += ')';
      return;
  }
}

}  // namespace

std::string typeKey(const TypeP& t) {
  std::vector<std::string> binders;
  std::string out;
  keyIn(t, binders, out);
  return out;
}

bool typeEq(const TypeP& a, const TypeP& b) {
  if (a.get() == b.get()) return true;
  return typeKey(a) == typeKey(b);
}

TypeP unfoldRec(const TypeP& t) {
  if (t->kind != TK::Rec) throw std::logic_error("unfoldRec on non-rec type");
  return subst(t->a, t->name, t);
}

TypeP tBool() {
  static TypeP b = tSum(tLift(tUnit()), tLift(tUnit()));
  return b;
}

}  // namespace dl
