#include "shrinklab/jet.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace shrinklab {

namespace {

void enumerate(int nvars, int order,
               std::vector<std::array<std::uint8_t, JetSpace::kMaxVars>>& out) {
  // Graded enumeration: total degree 0..order, lexicographic within a grade.
  std::array<std::uint8_t, JetSpace::kMaxVars> m{};
  for (int deg = 0; deg <= order; ++deg) {
    // Iterate all tuples with sum == deg over nvars slots.
    m.fill(0);
    if (nvars == 0) {
      if (deg == 0) out.push_back(m);
      continue;
    }
    // Odometer over compositions of deg into nvars parts.
    std::vector<int> comp(nvars, 0);
    comp[0] = deg;
    while (true) {
      for (int i = 0; i < nvars; ++i) m[i] = static_cast<std::uint8_t>(comp[i]);
      out.push_back(m);
      // next composition in colex order
      int i = 0;
      while (i < nvars - 1 && comp[i] == 0) ++i;
      if (i == nvars - 1) break;
      int v = comp[i];
      comp[i] = 0;
      comp[0] = v - 1;
      comp[i + 1] += 1;
    }
  }
}

}  // namespace

JetSpace::JetSpace(int nv, int ord) : nvars(nv), order(ord) {
  enumerate(nv, ord, mono);
  size = static_cast<int>(mono.size());
  factorial.resize(size);
  for (int i = 0; i < size; ++i) {
    double f = 1.0;
    for (int v = 0; v < nv; ++v)
      for (int k = 2; k <= mono[i][v]; ++k) f *= k;
    factorial[i] = f;
  }
  prod.assign(static_cast<size_t>(size) * size, -1);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      std::array<std::uint8_t, kMaxVars> s{};
      int deg = 0;
      for (int v = 0; v < nv; ++v) {
        s[v] = static_cast<std::uint8_t>(mono[i][v] + mono[j][v]);
        deg += s[v];
      }
      if (deg <= order) prod[static_cast<size_t>(i) * size + j] =
          static_cast<std::int16_t>(index_of(s));
    }
  }
}

int JetSpace::index_of(const std::array<std::uint8_t, kMaxVars>& m) const {
  for (int i = 0; i < size; ++i)
    if (mono[i] == m) return i;
  throw std::logic_error("JetSpace: monomial not in table");
}

const JetSpace& JetSpace::get(int nvars, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, const JetSpace*> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(nvars, order);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  if (nvars < 1 || nvars > kMaxVars || order < 0 || order > kMaxOrder)
    throw std::invalid_argument("JetSpace: unsupported nvars/order");
  const JetSpace* sp = new JetSpace(nvars, order);
  cache.emplace(key, sp);
  return *sp;
}

Jet Jet::variable(const JetSpace& sp, int var, double value) {
  Jet j(sp, value);
  if (sp.order >= 1) {
    std::array<std::uint8_t, JetSpace::kMaxVars> m{};
    m[var] = 1;
    j.c_[sp.index_of(m)] = 1.0;
  }
  return j;
}

double Jet::deriv(const std::array<std::uint8_t, JetSpace::kMaxVars>& m) const {
  int i = sp_->index_of(m);
  return c_[i] * sp_->factorial[i];
}

Jet& Jet::operator+=(const Jet& o) {
  for (int i = 0; i < sp_->size; ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  for (int i = 0; i < sp_->size; ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (int i = 0; i < sp_->size; ++i) c_[i] *= s;
  return *this;
}

Jet operator-(double s, const Jet& a) {
  Jet r = a;
  r *= -1.0;
  r.c_[0] += s;
  return r;
}

Jet operator-(const Jet& a) {
  Jet r = a;
  r *= -1.0;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  const JetSpace& sp = *a.sp_;
  Jet r(sp);
  const int n = sp.size;
  for (int i = 0; i < n; ++i) {
    const double ai = a.c_[i];
    if (ai == 0.0) continue;
    const std::int16_t* row = &sp.prod[static_cast<size_t>(i) * n];
    for (int j = 0; j < n; ++j) {
      const std::int16_t k = row[j];
      if (k >= 0) r.c_[k] += ai * b.c_[j];
    }
  }
  return r;
}

Jet compose_series(const Jet& a, const std::array<double, 5>& taylor) {
  const JetSpace& sp = a.space();
  Jet delta = a;
  delta.coeff(0) = 0.0;
  Jet r(sp, taylor[0]);
  Jet p = delta;
  for (int k = 1; k <= sp.order; ++k) {
    if (taylor[k] != 0.0) {
      Jet t = p;
      t *= taylor[k];
      r += t;
    }
    if (k < sp.order) p = p * delta;
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  const double b0 = b.value();
  const double i1 = 1.0 / b0;
  std::array<double, 5> t{i1, -i1 * i1, i1 * i1 * i1, -i1 * i1 * i1 * i1,
                          i1 * i1 * i1 * i1 * i1};
  return a * compose_series(b, t);
}

Jet operator/(double s, const Jet& b) {
  const double b0 = b.value();
  const double i1 = 1.0 / b0;
  std::array<double, 5> t{i1, -i1 * i1, i1 * i1 * i1, -i1 * i1 * i1 * i1,
                          i1 * i1 * i1 * i1 * i1};
  Jet r = compose_series(b, t);
  r *= s;
  return r;
}

Jet sqrt(const Jet& a) {
  const double w = std::sqrt(a.value());
  const double w3 = w * w * w;
  const double w5 = w3 * w * w;
  const double w7 = w5 * w * w;
  std::array<double, 5> t{w, 0.5 / w, -1.0 / (8.0 * w3), 1.0 / (16.0 * w5),
                          -5.0 / (128.0 * w7)};
  return compose_series(a, t);
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  std::array<double, 5> t{e, e, e / 2.0, e / 6.0, e / 24.0};
  return compose_series(a, t);
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  std::array<double, 5> t{s, c, -s / 2.0, -c / 6.0, s / 24.0};
  return compose_series(a, t);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  std::array<double, 5> t{c, -s, -c / 2.0, s / 6.0, c / 24.0};
  return compose_series(a, t);
}

Jet pow_int(const Jet& a, int k) {
  Jet r(a.space(), 1.0);
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}

}  // namespace shrinklab
