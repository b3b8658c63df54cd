#pragma once
#include <array>
#include <cstdint>
#include <vector>

namespace shrinklab {

// Truncated multivariate Taylor arithmetic in up to 4 variables, total order
// up to 4. A Jet carries the Taylor coefficients of a smooth expression, so
// chart maps written once as templates yield machine-exact derivatives of
// every order we need. This is the "closed-form" derivative oracle.
class JetSpace {
 public:
  static constexpr int kMaxVars = 4;
  static constexpr int kMaxOrder = 4;
  static constexpr int kMaxSize = 70;  // C(4+4,4)

  static const JetSpace& get(int nvars, int order);

  int nvars = 0;
  int order = 0;
  int size = 0;
  std::vector<std::array<std::uint8_t, kMaxVars>> mono;  // exponent tuples
  std::vector<double> factorial;                         // m! per monomial
  std::vector<std::int16_t> prod;  // size*size -> product index or -1

  int index_of(const std::array<std::uint8_t, kMaxVars>& m) const;

 private:
  JetSpace(int nv, int ord);
};

class Jet {
 public:
  Jet() = default;
  explicit Jet(const JetSpace& sp) : sp_(&sp) { c_.fill(0.0); }
  Jet(const JetSpace& sp, double value) : Jet(sp) { c_[0] = value; }

  // Seed an independent variable: value + du_var.
  static Jet variable(const JetSpace& sp, int var, double value);

  const JetSpace& space() const { return *sp_; }
  double value() const { return c_[0]; }
  double coeff(int i) const { return c_[i]; }
  double& coeff(int i) { return c_[i]; }

  // Partial derivative for a raw exponent tuple (order = sum of exponents).
  double deriv(const std::array<std::uint8_t, JetSpace::kMaxVars>& m) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double s) { c_[0] += s; return *this; }
  Jet& operator-=(double s) { c_[0] -= s; return *this; }
  Jet& operator*=(double s);

  friend Jet operator+(Jet a, const Jet& b) { a += b; return a; }
  friend Jet operator-(Jet a, const Jet& b) { a -= b; return a; }
  friend Jet operator+(Jet a, double s) { a += s; return a; }
  friend Jet operator+(double s, Jet a) { a += s; return a; }
  friend Jet operator-(Jet a, double s) { a -= s; return a; }
  friend Jet operator-(double s, const Jet& a);
  friend Jet operator-(const Jet& a);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, double s) { a *= s; return a; }
  friend Jet operator*(double s, Jet a) { a *= s; return a; }
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator/(Jet a, double s) { a *= 1.0 / s; return a; }
  friend Jet operator/(double s, const Jet& b);

 private:
  const JetSpace* sp_ = nullptr;
  std::array<double, JetSpace::kMaxSize> c_{};
};

// Composition with a univariate Taylor series around a.value():
// result = sum_k taylor[k] * (a - a0)^k, truncated at the jet order.
Jet compose_series(const Jet& a, const std::array<double, 5>& taylor);

Jet sqrt(const Jet& a);
Jet exp(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet pow_int(const Jet& a, int k);

}  // namespace shrinklab
