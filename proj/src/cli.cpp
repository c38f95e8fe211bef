#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <sstream>

#include "gen.hpp"
#include "gen_lazy.hpp"
#include "gen_proc.hpp"
#include "gen_sccs.hpp"
#include "gen_terms.hpp"
#include "lazy.hpp"
#include "logic.hpp"
#include "proc.hpp"
#include "sccs.hpp"
#include "terms.hpp"

namespace dl {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// An .sccs file: action-monoid lines, then a `term <expr>` block.
struct SccsFile {
  ActMonoid m;
  SccsP t;
};

SccsFile loadSccs(const std::string& path) {
  std::istringstream in(slurp(path));
  std::string line, monoidText, termText;
  bool inTerm = false;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (!inTerm && t.rfind("term", 0) == 0) {
      inTerm = true;
      termText += t.substr(4);
      termText += "\n";
    } else if (inTerm) {
      termText += line + "\n";
    } else {
      monoidText += line + "\n";
    }
  }
  if (trim(termText).empty())
    throw ParseError("no `term` line in " + path);
  SccsFile f{ActMonoid::parse(monoidText), nullptr};
  f.t = parseSccs(termText, f.m);
  return f;
}

Dialect dialectOf(const std::string& name) {
  if (name == "pure") return Dialect::Pure;
  if (name == "c") return Dialect::WithC;
  if (name == "p") return Dialect::WithP;
  if (name == "star") return Dialect::WithStar;
  if (name == "starp") return Dialect::WithStarP;
  throw ParseError("unknown dialect: " + name +
                   " (expected pure|c|p|star|starp)");
}

std::string whnfWord(WhnfStatus s) {
  switch (s) {
    case WhnfStatus::Converges: return "converges";
    case WhnfStatus::Diverges: return "diverges";
    default: return "fuel-out";
  }
}

std::string triWord(Tri t) {
  switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    default: return "unknown";
  }
}

bool hasMu(const TermP& m) {
  if (!m) return false;
  if (m->kind == MK::Mu) return true;
  return hasMu(m->m1) || hasMu(m->m2) || hasMu(m->m3);
}

void lazyActs(const HmlP& f, std::set<std::string>& acts) {
  if (!f) return;
  if (!f->act.empty()) acts.insert(f->act);
  acts.insert(f->inits.begin(), f->inits.end());
  lazyActs(f->a, acts);
  for (auto& k : f->kids) lazyActs(k, acts);
}

void procActs(const PFP& f, std::set<std::string>& acts) {
  if (!f) return;
  if (f->kind == PK::ActF) acts.insert(f->act);
  procActs(f->a, acts);
  for (auto& k : f->kids) procActs(k, acts);
}

// element-level satisfaction of a process formula
bool peSat(const PEP& e, const PFP& phi) {
  for (auto& d : sdnfDisjuncts(phi))
    if (leqProc(kElem(d), e)) return true;
  return false;
}

std::string caseId(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "CASE %04d", i);
  return buf;
}

struct SuiteTally {
  int mismatches = 0;
  int skipped = 0;
};

template <typename Body>
void suiteCase(std::ostream& out, SuiteTally& tally, int i, Body body) {
  try {
    std::string detail = body();
    if (detail.empty()) {
      out << caseId(i) << ": ok\n";
    } else {
      out << caseId(i) << ": MISMATCH " << detail << "\n";
      tally.mismatches++;
    }
  } catch (const RankExplosion& e) {
    out << caseId(i) << ": skip (" << e.what() << ")\n";
    tally.skipped++;
  } catch (const BlowupLimit& e) {
    out << caseId(i) << ": skip (" << e.what() << ")\n";
    tally.skipped++;
  }
}

void suiteLogic(gen::Rng& rng, int cases, int size, std::ostream& out,
                SuiteTally& tally) {
  for (int i = 0; i < cases; i++) {
    TypeP t = gen::randType(rng, 3);
    FormulaP f = gen::randFormulaAt(rng, t, size);
    FormulaP g = gen::randFormulaAt(rng, t, size);
    suiteCase(out, tally, i, [&]() -> std::string {
      bool proved = entails(f, g, t);
      bool sem = gen::semanticEntails(f, g, t);
      if (proved == sem) return "";
      return "entails=" + std::string(proved ? "yes" : "no") +
             " oracle=" + (sem ? "yes" : "no") + " type=" + t->print() +
             " phi=" + f->print() + " psi=" + g->print();
    });
  }
}

void suiteTerms(gen::Rng& rng, int cases, int size, std::ostream& out,
                SuiteTally& tally) {
  for (int i = 0; i < cases; i++) {
    TypeP t = gen::randType(rng, 2);
    TermP m = gen::randTerm(rng, t, {}, 2);
    FormulaP f = gen::randFormulaAt(rng, t, size);
    suiteCase(out, tally, i, [&]() -> std::string {
      typeOf(m, {}, t);
      bool checked = checkTerm(m, t, {}, f, 3);
      bool sem = satElem(evalTerm(m, t, {}, {}, 3), f, t);
      if (checked == sem) return "";
      return "check=" + std::string(checked ? "yes" : "no") +
             " oracle=" + (sem ? "yes" : "no") + " term=" + m->print() +
             " phi=" + f->print();
    });
  }
}

void suiteProc(gen::Rng& rng, int cases, int size, std::ostream& out,
               SuiteTally& tally) {
  std::vector<std::string> acts = {"a", "b"};
  for (int i = 0; i < cases; i++) {
    PFP f = gen::randProcFormula(rng, acts, std::min(size, 4));
    Lts l = gen::randLts(rng, 5, acts);
    suiteCase(out, tally, i, [&]() -> std::string {
      PFP s = sdnf(f);
      if (!isSDNFProc(s)) return "not in normal form: " + s->print();
      if (mdProc(s) > mdProc(f))
        return "modal depth grew: " + f->print() + " -> " + s->print();
      for (auto& p : l.states)
        if (psat(l, p, f) != psat(l, p, s))
          return "satisfaction differs at " + p + ": " + f->print() + " vs " +
                 s->print();
      return "";
    });
  }
}

void suiteSccs(gen::Rng& rng, int cases, int size, std::ostream& out,
               SuiteTally& tally) {
  ActMonoid m = ActMonoid::freeOn({"a", "b"});
  for (int i = 0; i < cases; i++) {
    SccsP t1 = gen::randSccsTerm(rng, m, std::min(size, 4));
    SccsP t2 = gen::randSccsTerm(rng, m, std::min(size, 4));
    suiteCase(out, tally, i, [&]() -> std::string {
      FaReport r = fullAbstractionReport(t1, t2, m);
      if (r.agree) return "";
      return "operational/denotational disagree: " + t1->print() + " vs " +
             t2->print();
    });
  }
}

void suiteLazy(gen::Rng& rng, int cases, int size, std::ostream& out,
               SuiteTally& tally) {
  (void)size;
  for (int i = 0; i < cases; i++) {
    LFP f = gen::randLFormula(rng, 3);
    LFP g = gen::randLFormula(rng, 3);
    suiteCase(out, tally, i, [&]() -> std::string {
      bool proved = entailsLazy(f, g);
      bool sem = leqLazy(felem(g), felem(f));
      if (proved == sem) return "";
      return "entails=" + std::string(proved ? "yes" : "no") +
             " oracle=" + (sem ? "yes" : "no") + " phi=" + f->print() +
             " psi=" + g->print();
    });
  }
}

}  // namespace

int runCli(std::vector<std::string> args, std::ostream& out) {
  CLI::App app{"workbench for finitary domain logics"};
  app.require_subcommand(1);

  std::string typeStr, dialect = "pure", moduleName;
  std::string arg1, arg2, arg3;
  int rank = 3, elemRank = 0, fuel = kDefaultFuel, cap = 50000, seed = 0;
  int cases = 100, size = 6;

  auto* cEntail = app.add_subcommand("entail", "formula entailment at a type");
  cEntail->add_option("--type", typeStr, "type expression")->required();
  cEntail->add_option("--cap", cap, "witness search cap");
  cEntail->add_option("phi", arg1)->required();
  cEntail->add_option("psi", arg2)->required();

  auto* cCdnf = app.add_subcommand("cdnf", "disjunctive normal form");
  cCdnf->add_option("--type", typeStr)->required();
  cCdnf->add_option("phi", arg1)->required();

  auto* cCheck = app.add_subcommand("check", "assertion about a typed term");
  cCheck->add_option("--type", typeStr)->required();
  cCheck->add_option("--rank", rank);
  cCheck->add_option("term", arg1)->required();
  cCheck->add_option("phi", arg2)->required();

  auto* cEval = app.add_subcommand("eval", "rank-bounded term denotation");
  cEval->add_option("--type", typeStr)->required();
  cEval->add_option("--rank", rank);
  cEval->add_option("term", arg1)->required();

  auto* cHoare = app.add_subcommand("hoare", "morphism pre/post assertion");
  cHoare->add_option("--rank", rank);
  cHoare->add_option("morph", arg1)->required();
  cHoare->add_option("phi", arg2)->required();
  cHoare->add_option("psi", arg3)->required();

  auto* cPBisim = app.add_subcommand("proc-bisim", "prebisimulation preorder");
  cPBisim->add_option("file", arg1)->required();
  cPBisim->add_option("p", arg2)->required();
  cPBisim->add_option("q", arg3)->required();

  auto* cPSat = app.add_subcommand("proc-sat", "process formula satisfaction");
  cPSat->add_option("file", arg1)->required();
  cPSat->add_option("p", arg2)->required();
  cPSat->add_option("phi", arg3)->required();

  auto* cPSdnf = app.add_subcommand("proc-sdnf", "strong disjunctive normal form");
  cPSdnf->add_option("phi", arg1)->required();

  auto* cPEnt = app.add_subcommand("proc-entail", "process formula entailment");
  cPEnt->add_option("phi", arg1)->required();
  cPEnt->add_option("psi", arg2)->required();

  auto* cPTr = app.add_subcommand("proc-translate",
                                  "between modal logic and the process logic");
  cPTr->add_option("--dialect", dialect, "star (modal -> process) or dagger");
  cPTr->add_option("--file", arg2, "transition system supplying the alphabet");
  cPTr->add_option("phi", arg1)->required();

  auto* cSStep = app.add_subcommand("sccs-step", "one-step transitions");
  cSStep->add_option("--fuel", fuel);
  cSStep->add_option("file", arg1)->required();

  auto* cSDen = app.add_subcommand("sccs-denote", "tree-domain denotation");
  cSDen->add_option("--rank", rank);
  cSDen->add_option("file", arg1)->required();

  auto* cSFa = app.add_subcommand("sccs-fa", "operational vs denotational order");
  cSFa->add_option("file1", arg1)->required();
  cSFa->add_option("file2", arg2)->required();

  auto* cLEval = app.add_subcommand("lazy-eval", "weak head evaluation");
  cLEval->add_option("--dialect", dialect);
  cLEval->add_option("--fuel", fuel);
  cLEval->add_option("--rank", elemRank, "also print the rank-bounded element");
  cLEval->add_option("term", arg1)->required();

  auto* cLEnt = app.add_subcommand("lazy-entail", "lazy logic entailment");
  cLEnt->add_option("phi", arg1)->required();
  cLEnt->add_option("psi", arg2)->required();

  auto* cLChk = app.add_subcommand("lazy-check", "lazy program logic assertion");
  cLChk->add_option("--rank", rank);
  cLChk->add_option("--dialect", dialect)->default_str("p");
  cLChk->add_option("term", arg1)->required();
  cLChk->add_option("phi", arg2)->required();

  auto* cLCls = app.add_subcommand("lazy-classify", "head reduction shape");
  cLCls->add_option("--dialect", dialect);
  cLCls->add_option("--fuel", fuel);
  cLCls->add_option("term", arg1)->required();

  auto* cSuite = app.add_subcommand("oracle-suite",
                                    "randomized decision-procedure audits");
  cSuite->add_option("--module", moduleName, "logic|terms|proc|sccs|lazy")
      ->required();
  cSuite->add_option("--cases", cases);
  cSuite->add_option("--size", size);
  cSuite->add_option("--seed", seed);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);

    if (cEntail->parsed()) {
      TypeP t = parseType(typeStr);
      FormulaP f = parseFormula(arg1), g = parseFormula(arg2);
      checkFormulaAt(f, t);
      checkFormulaAt(g, t);
      if (entails(f, g, t)) {
        out << "RESULT: entailed\n";
        return 0;
      }
      int looked = 0;
      for (auto& u : minsat(f, t)) {
        if (++looked > cap) break;
        if (!satElem(u, g, t)) {
          out << "WITNESS: " << u->print() << "\n";
          break;
        }
      }
      out << "RESULT: not-entailed\n";
      return 1;
    }

    if (cCdnf->parsed()) {
      TypeP t = parseType(typeStr);
      FormulaP f = parseFormula(arg1);
      checkFormulaAt(f, t);
      std::vector<FormulaP> ds = toCDNF(f, t);
      for (auto& d : ds) out << "PRIME: " << d->print() << "\n";
      out << "RESULT: " << fOr(ds)->print() << "\n";
      return 0;
    }

    if (cCheck->parsed()) {
      TypeP t = parseType(typeStr);
      TermP m = parseTerm(arg1);
      FormulaP f = parseFormula(arg2);
      checkFormulaAt(f, t);
      typeOf(m, {}, t);
      if (hasMu(m))
        out << "NOTE: recursive term; the verdict is a lower bound\n";
      if (checkTerm(m, t, {}, f, rank)) {
        out << "RESULT: holds\n";
        return 0;
      }
      out << "WITNESS: " << evalTerm(m, t, {}, {}, rank)->print() << "\n";
      out << "RESULT: fails\n";
      return 1;
    }

    if (cEval->parsed()) {
      TypeP t = parseType(typeStr);
      TermP m = parseTerm(arg1);
      typeOf(m, {}, t);
      if (hasMu(m))
        out << "NOTE: recursive term; the element is a lower bound\n";
      out << "RESULT: " << evalTerm(m, t, {}, {}, rank)->print() << "\n";
      return 0;
    }

    if (cHoare->parsed()) {
      MorphP f = parseMorph(arg1);
      FormulaP pre = parseFormula(arg2), post = parseFormula(arg3);
      if (hoare(f, pre, post, rank)) {
        out << "RESULT: holds\n";
        return 0;
      }
      out << "WITNESS: term " << translateMorphism(f)->print() << "\n";
      out << "RESULT: fails\n";
      return 1;
    }

    if (cPBisim->parsed()) {
      Lts l = Lts::parse(slurp(arg1));
      for (auto& s : {arg2, arg3})
        if (std::find(l.states.begin(), l.states.end(), s) == l.states.end())
          throw ParseError("unknown state: " + s);
      PrebisimResult r = prebisimAll(l);
      bool fwd = r.rel.count({arg2, arg3}) != 0;
      bool bwd = r.rel.count({arg3, arg2}) != 0;
      out << "FORWARD: " << (fwd ? "yes" : "no") << "\n";
      out << "BACKWARD: " << (bwd ? "yes" : "no") << "\n";
      if (fwd) {
        out << "RESULT: below\n";
        return 0;
      }
      for (int d = 0; d <= r.iterations; d++)
        if (!leqProc(universalSem(l, arg2, d), universalSem(l, arg3, d))) {
          out << "WITNESS: " << defFormula(universalSem(l, arg2, d))->print()
              << "\n";
          break;
        }
      out << "RESULT: not-below\n";
      return 1;
    }

    if (cPSat->parsed()) {
      Lts l = Lts::parse(slurp(arg1));
      if (std::find(l.states.begin(), l.states.end(), arg2) == l.states.end())
        throw ParseError("unknown state: " + arg2);
      PFP f = parseProcFormula(arg3);
      if (psat(l, arg2, f)) {
        out << "RESULT: satisfied\n";
        return 0;
      }
      out << "WITNESS: " << defFormula(universalSem(l, arg2, mdProc(f)))->print()
          << "\n";
      out << "RESULT: not-satisfied\n";
      return 1;
    }

    if (cPSdnf->parsed()) {
      PFP f = parseProcFormula(arg1);
      out << "RESULT: " << sdnf(f)->print() << "\n";
      return 0;
    }

    if (cPEnt->parsed()) {
      PFP f = parseProcFormula(arg1), g = parseProcFormula(arg2);
      if (entailsProc(f, g)) {
        out << "RESULT: entailed\n";
        return 0;
      }
      for (auto& d : sdnfDisjuncts(f))
        if (!peSat(kElem(d), g)) {
          out << "WITNESS: " << kElem(d)->print() << "\n";
          break;
        }
      out << "RESULT: not-entailed\n";
      return 1;
    }

    if (cPTr->parsed()) {
      std::set<std::string> acts;
      if (!arg2.empty()) {
        Lts l = Lts::parse(slurp(arg2));
        acts.insert(l.acts.begin(), l.acts.end());
      }
      if (dialect == "dagger") {
        PFP f = parseProcFormula(arg1);
        if (arg2.empty()) procActs(f, acts);
        std::vector<std::string> av(acts.begin(), acts.end());
        out << "RESULT: " << dagger(nlNormalize(f), av)->print() << "\n";
        return 0;
      }
      if (dialect != "pure" && dialect != "star")
        throw ParseError("unknown translation: " + dialect +
                         " (expected star|dagger)");
      HmlP f = parseHml(arg1);
      if (arg2.empty()) lazyActs(f, acts);
      std::vector<std::string> av(acts.begin(), acts.end());
      out << "RESULT: " << star(f, av)->print() << "\n";
      return 0;
    }

    if (cSStep->parsed()) {
      SccsFile f = loadSccs(arg1);
      Steps s = transitions(f.t, f.m, fuel == kDefaultFuel ? 8 : fuel);
      std::vector<std::pair<std::string, std::string>> lines;
      for (auto& [a, t] : s.steps) lines.emplace_back(a, t->print());
      std::sort(lines.begin(), lines.end());
      lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
      for (auto& [a, t] : lines) out << "STEP: " << a << " " << t << "\n";
      out << "DIVERGES: " << triWord(s.div) << "\n";
      out << "COMPLETE: " << (s.complete ? "yes" : "no") << "\n";
      out << "RESULT: " << lines.size() << " steps\n";
      return 0;
    }

    if (cSDen->parsed()) {
      SccsFile f = loadSccs(arg1);
      if (!sccsClosed(f.t)) throw ParseError("term has free variables");
      out << "RESULT: " << denoteSccs(f.t, f.m, rank)->print() << "\n";
      return 0;
    }

    if (cSFa->parsed()) {
      SccsFile f1 = loadSccs(arg1);
      SccsP t2 = loadSccs(arg2).t;
      FaReport r = fullAbstractionReport(f1.t, t2, f1.m);
      out << "OPERATIONAL: " << (r.opLeq12 ? "<=" : "!<=") << " "
          << (r.opLeq21 ? "=>" : "!=>") << "\n";
      out << "DENOTATIONAL: " << (r.denLeq12 ? "<=" : "!<=") << " "
          << (r.denLeq21 ? "=>" : "!=>") << "\n";
      std::string rel = r.opLeq12 && r.opLeq21 ? "equivalent"
                        : r.opLeq12            ? "⊑ only left-to-right"
                        : r.opLeq21            ? "⊑ only right-to-left"
                                               : "incomparable";
      if (!r.agree) {
        out << "WITNESS: " << denoteSccs(f1.t, f1.m, sccsHeight(f1.t))->print()
            << " vs " << denoteSccs(t2, f1.m, sccsHeight(t2))->print() << "\n";
        out << "RESULT: disagreement, " << rel << "\n";
        return 1;
      }
      out << "RESULT: " << rel << "\n";
      return 0;
    }

    if (cLEval->parsed()) {
      Dialect d = dialectOf(dialect);
      LamP m = parseLambda(arg1, d);
      WhnfResult r = evalWhnf(m, d, fuel);
      out << "STATUS: " << whnfWord(r.status) << "\n";
      if (r.status == WhnfStatus::Converges)
        out << "WHNF: " << r.whnf->print() << "\n";
      if (elemRank > 0) {
        std::map<std::string, LEP> env;
        out << "ELEM: " << evalElem(m, env, elemRank, d)->print() << "\n";
      }
      if (r.status == WhnfStatus::FuelOut) {
        out << "ERROR: fuel cap " << fuel << " exhausted\n";
        out << "RESULT: error\n";
        return 2;
      }
      out << "RESULT: " << whnfWord(r.status) << "\n";
      return r.status == WhnfStatus::Converges ? 0 : 1;
    }

    if (cLEnt->parsed()) {
      LFP f = parseLFormula(arg1), g = parseLFormula(arg2);
      if (entailsLazy(f, g)) {
        out << "RESULT: entailed\n";
        return 0;
      }
      out << "WITNESS: " << felem(f)->print() << "\n";
      out << "RESULT: not-entailed\n";
      return 1;
    }

    if (cLChk->parsed()) {
      Dialect d = dialectOf(dialect == "pure" ? "p" : dialect);
      LamP m = parseLambda(arg1, d);
      LFP f = parseLFormula(arg2);
      if (lcheck(m, {}, f, rank)) {
        out << "RESULT: holds\n";
        return 0;
      }
      std::map<std::string, LEP> env;
      out << "WITNESS: " << evalElem(m, env, rank, d)->print() << "\n";
      out << "RESULT: fails\n";
      return 1;
    }

    if (cLCls->parsed()) {
      Dialect d = dialectOf(dialect);
      Classification c = classify(parseLambda(arg1, d), d, fuel);
      switch (c.kind) {
        case ClassifyKind::DivergesOrFuelOut:
          out << "RESULT: no-normal-form\n";
          break;
        case ClassifyKind::AbstractionNF:
          out << "RESULT: abstraction\n";
          break;
        case ClassifyKind::ConstCNF:
          out << "RESULT: constant\n";
          break;
        case ClassifyKind::HeadForm:
          out << "HEAD: " << c.headVar << "\n";
          out << "SPINE: " << c.spineLen << "\n";
          out << "NESTED: " << c.nestC << "\n";
          out << "OUTER: " << c.outerLen << "\n";
          out << "STEPS: " << c.steps << "\n";
          out << "RESULT: head-form\n";
          break;
      }
      return 0;
    }

    if (cSuite->parsed()) {
      gen::Rng rng(static_cast<unsigned>(seed));
      SuiteTally tally;
      if (moduleName == "logic")
        suiteLogic(rng, cases, size, out, tally);
      else if (moduleName == "terms")
        suiteTerms(rng, cases, size, out, tally);
      else if (moduleName == "proc")
        suiteProc(rng, cases, size, out, tally);
      else if (moduleName == "sccs")
        suiteSccs(rng, cases, size, out, tally);
      else if (moduleName == "lazy")
        suiteLazy(rng, cases, size, out, tally);
      else
        throw ParseError("unknown module: " + moduleName +
                         " (expected logic|terms|proc|sccs|lazy)");
      out << "RESULT: " << cases << " cases, " << tally.mismatches
          << " mismatches, " << tally.skipped << " skipped\n";
      return tally.mismatches == 0 ? 0 : 1;
    }

    out << "RESULT: error\n";
    return 2;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    out << "RESULT: help\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    out << "ERROR: " << e.what() << "\n";
    out << "RESULT: error\n";
    return 2;
  } catch (const std::exception& e) {
    out << "ERROR: " << e.what() << "\n";
    out << "RESULT: error\n";
    return 2;
  }
}

}  // namespace dl
