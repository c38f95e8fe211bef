#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace {

struct Run {
  int code;
  std::string text;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out;
  int code = dl::runCli(std::move(args), out);
  return {code, out.str()};
}

std::string lastLine(const std::string& s) {
  size_t end = s.find_last_not_of('\n');
  if (end == std::string::npos) return "";
  size_t start = s.rfind('\n', end);
  return s.substr(start == std::string::npos ? 0 : start + 1,
                  end - (start == std::string::npos ? 0 : start + 1) + 1);
}

std::string writeTemp(const std::string& name, const std::string& body) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream f(p);
  f << body;
  return p.string();
}

}  // namespace

TEST_CASE("entailment queries") {
  Run r = cli({"entail", "--type",
               "(-> (+ (lift 1) (lift 1)) (+ (lift 1) (lift 1)))", "tt", "tt"});
  CHECK(r.code == 0);
  CHECK(lastLine(r.text) == "RESULT: entailed");

  // (lift tt) does not entail ff; the witness is an element
  r = cli({"entail", "--type", "(lift 1)", "(lift tt)", "ff"});
  CHECK(r.code == 1);
  CHECK(r.text.find("WITNESS: ") != std::string::npos);
  CHECK(lastLine(r.text) == "RESULT: not-entailed");
}

TEST_CASE("normal forms print primes") {
  Run r = cli({"cdnf", "--type", "(lift 1)", "(or (lift tt) ff)"});
  CHECK(r.code == 0);
  CHECK(r.text.find("PRIME: ") != std::string::npos);
  CHECK(r.text.rfind("RESULT: ", 0) != 0);  // PRIME lines come first
  CHECK(lastLine(r.text).rfind("RESULT: ", 0) == 0);
}

TEST_CASE("term checking and evaluation") {
  Run r = cli({"check", "--type", "(-> (lift 1) (lift 1))",
               "(lam x (lift 1) x)", "(arrow (lift tt) (lift tt))"});
  CHECK(r.code == 0);
  CHECK(lastLine(r.text) == "RESULT: holds");

  r = cli({"check", "--type", "(-> (lift 1) (lift 1))", "(lam x (lift 1) x)",
           "(arrow tt (lift tt))"});
  CHECK(r.code == 1);
  CHECK(r.text.find("WITNESS: ") != std::string::npos);

  r = cli({"eval", "--type", "(lift 1)", "(up star)"});
  CHECK(r.code == 0);
  CHECK(lastLine(r.text).rfind("RESULT: ", 0) == 0);

  // recursion gets the lower-bound caveat
  r = cli({"eval", "--type", "(lift 1)", "(mu x (lift 1) x)"});
  CHECK(r.code == 0);
  CHECK(r.text.find("lower bound") != std::string::npos);
}

TEST_CASE("pre/post assertions over morphisms") {
  Run r = cli({"hoare", "(id (lift 1))", "(lift tt)", "(lift tt)"});
  CHECK(r.code == 0);
  CHECK(lastLine(r.text) == "RESULT: holds");

  r = cli({"hoare", "(id (lift 1))", "tt", "(lift tt)"});
  CHECK(r.code == 1);
  CHECK(r.text.find("WITNESS: term ") != std::string::npos);
  CHECK(lastLine(r.text) == "RESULT: fails");
}

TEST_CASE("process commands follow the file format") {
  std::string lts =
      "acts a\n"
      "trans p a o\n"
      "div p\n"
      "trans q2 a w\n"
      "div q2\n"
      "div w\n";
  std::string f = writeTemp("cli_lts.txt", lts);

  Run r = cli({"proc-sat", f, "p", "(dia (act a (box ff)))"});
  CHECK(r.code == 0);
  CHECK(lastLine(r.text) == "RESULT: satisfied");

  r = cli({"proc-sat", f, "q2", "(dia (act a (box ff)))"});
  CHECK(r.code == 1);
  CHECK(r.text.find("WITNESS: ") != std::string::npos);
  CHECK(lastLine(r.text) == "RESULT: not-satisfied");

  r = cli({"proc-bisim", f, "o", "w"});
  CHECK(r.code == 1);  // o converges, w diverges: o is not below w...
  r = cli({"proc-bisim", f, "w", "o"});
  CHECK(r.code == 0);
  CHECK(lastLine(r.text) == "RESULT: below");

  r = cli({"proc-sdnf", "(and (box (act a tt)) (dia (act a tt)))"});
  CHECK(r.code == 0);

  r = cli({"proc-entail", "(box ff)", "(box ff)"});
  CHECK(r.code == 0);
  r = cli({"proc-entail", "tt", "(dia (act a tt))"});
  CHECK(r.code == 1);
  CHECK(r.text.find("WITNESS: ") != std::string::npos);

  r = cli({"proc-translate", "--file", f, "(boxa a tt)"});
  CHECK(r.code == 0);
  r = cli({"proc-translate", "--dialect", "dagger", "--file", f,
           "(box (act a tt))"});
  CHECK(r.code == 0);
}

TEST_CASE("synchronous calculus commands") {
  std::string omega = "monoid free a b\nterm Omega\n";
  std::string big = "monoid free a b\nterm O\n";
  std::string f1 = writeTemp("cli_omega.sccs", omega);
  std::string f2 = writeTemp("cli_o.sccs", big);

  Run r = cli({"sccs-fa", f1, f2});
  CHECK(r.code == 0);
  CHECK(r.text.find("⊑ only left-to-right") != std::string::npos);

  r = cli({"sccs-fa", f1, f1});
  CHECK(r.code == 0);
  CHECK(r.text.find("RESULT: equivalent") != std::string::npos);

  std::string pre = "monoid free a b\nterm (plus (pre a O) (pre b Omega))\n";
  std::string f3 = writeTemp("cli_pre.sccs", pre);
  r = cli({"sccs-step", f3});
  CHECK(r.code == 0);
  CHECK(r.text.find("STEP: a O") != std::string::npos);
  CHECK(lastLine(r.text) == "RESULT: 2 steps");

  r = cli({"sccs-denote", "--rank", "2", f3});
  CHECK(r.code == 0);
  CHECK(lastLine(r.text).rfind("RESULT: ", 0) == 0);
}

TEST_CASE("lazy lambda commands") {
  Run r = cli({"lazy-eval", "(app (lam x (app x x)) (lam x (app x x)))"});
  CHECK(r.code == 1);
  CHECK(r.text.find("STATUS: diverges") != std::string::npos);

  r = cli({"lazy-eval", "--rank", "2", "(lam x x)"});
  CHECK(r.code == 0);
  CHECK(r.text.find("WHNF: ") != std::string::npos);
  CHECK(r.text.find("ELEM: ") != std::string::npos);

  // strictly growing self-application: fuel exhaustion is a resource error
  r = cli({"lazy-eval", "--fuel", "100",
           "(app (lam x (app x (app (lam y y) x))) "
           "(lam x (app x (app (lam y y) x))))"});
  CHECK(r.code == 2);
  CHECK(r.text.find("fuel cap 100") != std::string::npos);

  r = cli({"lazy-entail", "(arr tt lam)", "lam"});
  CHECK(r.code == 0);
  r = cli({"lazy-entail", "lam", "(arr tt lam)"});
  CHECK(r.code == 1);
  CHECK(r.text.find("WITNESS: ") != std::string::npos);

  r = cli({"lazy-check", "(lam x x)", "(arr lam lam)"});
  CHECK(r.code == 0);
  r = cli({"lazy-check", "(lam x x)", "(arr tt lam)"});
  CHECK(r.code == 1);

  r = cli({"lazy-classify", "--dialect", "c",
           "(app (lam x (app C (app x x))) (lam y y))"});
  CHECK(r.code == 0);
}

TEST_CASE("errors name the offending input") {
  Run r = cli({"entail", "--type", "(lift", "tt", "tt"});
  CHECK(r.code == 2);
  CHECK(r.text.find("ERROR: ") != std::string::npos);
  CHECK(lastLine(r.text) == "RESULT: error");

  // formula at the wrong type
  r = cli({"entail", "--type", "(lift 1)", "(and tt (arrow tt tt))", "tt"});
  CHECK(r.code == 2);

  r = cli({"proc-sat", "/nonexistent/file.txt", "p", "tt"});
  CHECK(r.code == 2);

  r = cli({"no-such-command"});
  CHECK(r.code == 2);

  r = cli({"lazy-eval", "--dialect", "pure", "(app C C)"});
  CHECK(r.code == 2);  // constant outside its dialect
}

TEST_CASE("oracle suite is deterministic and clean") {
  for (std::string mod : {"logic", "terms", "proc", "sccs", "lazy"}) {
    Run a = cli({"oracle-suite", "--module", mod, "--cases", "25", "--seed",
                 "7"});
    Run b = cli({"oracle-suite", "--module", mod, "--cases", "25", "--seed",
                 "7"});
    CAPTURE(mod);
    CHECK(a.code == 0);
    CHECK(a.text == b.text);  // byte-identical for a fixed seed
    CHECK(a.text.find("MISMATCH") == std::string::npos);
    CHECK(lastLine(a.text).rfind("RESULT: 25 cases, 0 mismatches", 0) == 0);
  }
}
