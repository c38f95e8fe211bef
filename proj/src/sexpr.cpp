#include "sexpr.hpp"

#include <cctype>

namespace dl {

namespace {

struct Reader {
  const std::string& s;
  size_t pos = 0;

  void skipWs() {
    while (pos < s.size()) {
      if (std::isspace(static_cast<unsigned char>(s[pos]))) {
        pos++;
      } else if (s[pos] == ';') {
        while (pos < s.size() && s[pos] != '\n') pos++;
      } else {
        break;
      }
    }
  }

  bool atEnd() {
    skipWs();
    return pos >= s.size();
  }

  Sexpr read() {
    skipWs();
    if (pos >= s.size()) throw ParseError("unexpected end of input");
    char c = s[pos];
    if (c == '(') {
      pos++;
      Sexpr e;
      e.atom = false;
      while (true) {
        skipWs();
        if (pos >= s.size()) throw ParseError("unbalanced '('");
        if (s[pos] == ')') {
          pos++;
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (c == ')') throw ParseError("unexpected ')'");
    size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
           s[pos] != '(' && s[pos] != ')' && s[pos] != ';')
      pos++;
    Sexpr e;
    e.atom = true;
    e.sym = s.substr(start, pos - start);
    return e;
  }
};

}  // namespace

std::string Sexpr::print() const {
  if (atom) return sym;
  std::string out = "(";
  for (size_t i = 0; i < items.size(); i++) {
    if (i) out += ' ';
    out += items[i].print();
  }
  out += ')';
  return out;
}

Sexpr parseSexpr(const std::string& text) {
  Reader r{text};
  Sexpr e = r.read();
  if (!r.atEnd()) throw ParseError("trailing input after expression");
  return e;
}

std::vector<Sexpr> parseSexprs(const std::string& text) {
  Reader r{text};
  std::vector<Sexpr> out;
  while (!r.atEnd()) out.push_back(r.read());
  return out;
}

}  // namespace dl
