#pragma once
#include <stdexcept>
#include <string>
#include <vector>

namespace dl {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& m) : std::runtime_error(m) {}
};

// Minimal s-expression reader: atoms and parenthesized lists.
struct Sexpr {
  bool atom = false;
  std::string sym;
  std::vector<Sexpr> items;

  bool isList() const { return !atom; }
  size_t size() const { return items.size(); }
  const Sexpr& operator[](size_t i) const { return items[i]; }
  bool headIs(const std::string& s) const {
    return !atom && !items.empty() && items[0].atom && items[0].sym == s;
  }
  std::string print() const;
};

Sexpr parseSexpr(const std::string& text);
std::vector<Sexpr> parseSexprs(const std::string& text);

}  // namespace dl
