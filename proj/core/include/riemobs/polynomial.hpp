#pragma once

#include <string>
#include <vector>

#include "riemobs/linalg.hpp"

namespace riemobs {

/// Sparse multivariate polynomial sum_k c_k prod_i x_i^{e_ki}. Evaluation is
/// generic in the scalar type so polynomials can feed dual-number maps.
class Polynomial {
 public:
  struct Term {
    double coeff = 0.0;
    std::vector<int> exponents;
  };

  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}
  Polynomial(int nvars, std::vector<Term> terms);

  static Polynomial constant(int nvars, double c);
  /// The coordinate x_i.
  static Polynomial variable(int nvars, int i);

  int nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Polynomial derivative(int var) const;
  /// Antiderivative in `var` vanishing at x_var = 0.
  Polynomial antiderivative(int var) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;

  template <class T>
  T eval(const VecX<T>& x) const {
    T acc(0.0);
    for (const Term& t : terms_) {
      T mono(t.coeff);
      for (int i = 0; i < nvars_; ++i)
        for (int e = 0; e < t.exponents[i]; ++e) mono = mono * x(i);
      acc += mono;
    }
    return acc;
  }

  std::string to_string() const;

 private:
  void normalize();

  int nvars_ = 0;
  std::vector<Term> terms_;
};

}  // namespace riemobs
