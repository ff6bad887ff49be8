#include "riemobs/polynomial.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace riemobs {

Polynomial::Polynomial(int nvars, std::vector<Term> terms) : nvars_(nvars), terms_(std::move(terms)) {
  for (const Term& t : terms_) {
    if (static_cast<int>(t.exponents.size()) != nvars_) {
      throw Error(ErrorCode::DimensionMismatch, "polynomial term has wrong number of exponents");
    }
    for (int e : t.exponents)
      if (e < 0) throw Error(ErrorCode::PreconditionViolation, "negative polynomial exponent");
  }
  normalize();
}

Polynomial Polynomial::constant(int nvars, double c) {
  return Polynomial(nvars, {Term{c, std::vector<int>(nvars, 0)}});
}

Polynomial Polynomial::variable(int nvars, int i) {
  std::vector<int> e(nvars, 0);
  e.at(i) = 1;
  return Polynomial(nvars, {Term{1.0, e}});
}

void Polynomial::normalize() {
  std::map<std::vector<int>, double> merged;
  for (const Term& t : terms_) merged[t.exponents] += t.coeff;
  terms_.clear();
  for (const auto& [e, c] : merged)
    if (c != 0.0) terms_.push_back(Term{c, e});
}

Polynomial Polynomial::derivative(int var) const {
  std::vector<Term> out;
  for (const Term& t : terms_) {
    if (t.exponents[var] == 0) continue;
    Term d = t;
    d.coeff *= t.exponents[var];
    d.exponents[var] -= 1;
    out.push_back(d);
  }
  return Polynomial(nvars_, out);
}

Polynomial Polynomial::antiderivative(int var) const {
  std::vector<Term> out;
  for (const Term& t : terms_) {
    Term d = t;
    d.exponents[var] += 1;
    d.coeff /= d.exponents[var];
    out.push_back(d);
  }
  return Polynomial(nvars_, out);
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Term> out = terms_;
  out.insert(out.end(), o.terms_.begin(), o.terms_.end());
  return Polynomial(std::max(nvars_, o.nvars_), out);
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  std::vector<Term> out;
  for (const Term& a : terms_) {
    for (const Term& b : o.terms_) {
      Term t{a.coeff * b.coeff, a.exponents};
      for (int i = 0; i < nvars_; ++i) t.exponents[i] += b.exponents[i];
      out.push_back(t);
    }
  }
  return Polynomial(nvars_, out);
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<Term> out = terms_;
  for (Term& t : out) t.coeff *= s;
  return Polynomial(nvars_, out);
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Term& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << t.coeff;
    for (int i = 0; i < nvars_; ++i) {
      if (t.exponents[i] == 0) continue;
      os << "*x" << (i + 1);
      if (t.exponents[i] > 1) os << '^' << t.exponents[i];
    }
  }
  return os.str();
}

}  // namespace riemobs
