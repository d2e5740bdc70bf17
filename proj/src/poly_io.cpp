#include <cctype>
#include <sstream>

#include "cmcircuits/errors.hpp"
#include "cmcircuits/poly.hpp"

namespace cmc {

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  const auto& vars = p.vars();
  bool first = true;
  for (const Term& t : p.terms()) {
    Int a = t.coeff;
    if (a < 0) {
      out << "-";
      a = -a;
    } else if (!first) {
      out << "+";
    } else {
      out << "+";
    }
    first = false;
    out << a.get_str();
    for (size_t i = 0; i < vars.size(); ++i) {
      int e = t.mon.e[i];
      if (!e) continue;
      out << "*x" << vars[i].u << "_" << vars[i].v;
      if (e > 1) out << "^" << e;
    }
  }
  return out.str();
}

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;
  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return s[i];
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw precondition_error("polynomial parse error at offset " + std::to_string(i) + ": " + why);
  }
  long read_int() {
    skip_ws();
    size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) fail("expected an integer");
    return std::stol(s.substr(start, i - start));
  }
  Int read_bigint() {
    skip_ws();
    size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) fail("expected an integer");
    return Int(s.substr(start, i - start));
  }
};

}  // namespace

Poly parse_poly(const std::string& text) {
  Cursor c{text};
  if (c.done()) throw precondition_error("empty polynomial text");
  if (c.peek() == '0') {
    size_t save = c.i;
    ++c.i;
    if (c.done()) return Poly();
    c.i = save;
  }
  Poly sum;
  while (!c.done()) {
    int sign = 1;
    char ch = c.peek();
    if (ch == '+') {
      ++c.i;
    } else if (ch == '-') {
      sign = -1;
      ++c.i;
    } else if (!sum.is_zero() || c.i > 0) {
      // leading term may omit its sign
      if (!std::isdigit(static_cast<unsigned char>(ch)) && ch != 'x') c.fail("expected sign or term");
    }
    c.skip_ws();
    Int coeff(1);
    bool saw_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
      coeff = c.read_bigint();
      saw_coeff = true;
    }
    coeff *= sign;
    std::map<Edge, int> exps;
    while (!c.done()) {
      char n = c.peek();
      if (n == '*') {
        ++c.i;
        c.skip_ws();
        n = c.peek();
      } else if (n != 'x') {
        break;
      }
      if (n != 'x') {
        if (saw_coeff || !exps.empty()) c.fail("expected a variable after '*'");
        break;
      }
      ++c.i;
      long u = c.read_int();
      if (c.done() || c.peek() != '_') c.fail("expected '_' in variable name");
      ++c.i;
      long v = c.read_int();
      int e = 1;
      if (!c.done() && c.peek() == '^') {
        ++c.i;
        e = static_cast<int>(c.read_int());
        if (e <= 0) c.fail("exponent must be positive");
      }
      Edge x(static_cast<int>(u), static_cast<int>(v));
      exps[x] += e;
      saw_coeff = true;
    }
    if (!saw_coeff) c.fail("empty term");
    Poly term = Poly::constant(coeff);
    for (const auto& [x, e] : exps) term *= Poly::variable(x).pow(e);
    sum += term;
  }
  return sum;
}

}  // namespace cmc
