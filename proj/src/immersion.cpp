#include "shrinklab/immersion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "shrinklab/errors.hpp"

namespace shrinklab {

namespace {

constexpr double kEps = 2.220446049250313e-16;

// Step sizes per derivative order; first two follow optimal central-difference
// scaling, orders 3-4 trade truncation against noise from the nested levels.
double fd_step(const Chart& chart, int order, double coord) {
  const double scale = chart.fd_coordinate_scale > 0.0
                           ? chart.fd_coordinate_scale
                           : std::max(1.0, std::fabs(coord));
  switch (order) {
    case 1: return std::cbrt(kEps) * scale;           // ~6.1e-6
    case 2: return std::pow(kEps, 0.25) * scale;      // ~1.2e-4
    case 3: return 7.0e-3 * scale;
    default: return 1.5e-2 * scale;
  }
}

Vec eval_d(const Chart& chart, int ambient, const Vec& u) {
  Vec x(ambient, 0.0);
  chart.map_d(u.data(), x.data());
  return x;
}

// first derivative in direction a of a vector-valued functor, 4th order
Vec stencil_d1_o4(const std::function<Vec(const Vec&)>& f, const Vec& u, int a,
                  double h) {
  Vec up2 = u, up1 = u, um1 = u, um2 = u;
  up2[a] += 2 * h;
  up1[a] += h;
  um1[a] -= h;
  um2[a] -= 2 * h;
  Vec r = f(up1);
  const Vec f2 = f(up2), fm1 = f(um1), fm2 = f(um2);
  for (size_t i = 0; i < r.size(); ++i)
    r[i] = (-f2[i] + 8.0 * r[i] - 8.0 * fm1[i] + fm2[i]) / (12.0 * h);
  return r;
}

Vec fd_d1(const Chart& chart, int ambient, const Vec& u, int a) {
  const double h = fd_step(chart, 1, u[a]);
  Vec up = u, um = u;
  up[a] += h;
  um[a] -= h;
  Vec xp = eval_d(chart, ambient, up);
  Vec xm = eval_d(chart, ambient, um);
  for (int i = 0; i < ambient; ++i) xp[i] = (xp[i] - xm[i]) / (2.0 * h);
  return xp;
}

Vec fd_d2(const Chart& chart, int ambient, const Vec& u, int a, int b) {
  if (a == b) {
    const double h = fd_step(chart, 2, u[a]);
    Vec up = u, um = u;
    up[a] += h;
    um[a] -= h;
    Vec xp = eval_d(chart, ambient, up);
    Vec x0 = eval_d(chart, ambient, u);
    Vec xm = eval_d(chart, ambient, um);
    for (int i = 0; i < ambient; ++i)
      xp[i] = (xp[i] - 2.0 * x0[i] + xm[i]) / (h * h);
    return xp;
  }
  const double ha = fd_step(chart, 2, u[a]);
  const double hb = fd_step(chart, 2, u[b]);
  Vec upp = u, upm = u, ump = u, umm = u;
  upp[a] += ha; upp[b] += hb;
  upm[a] += ha; upm[b] -= hb;
  ump[a] -= ha; ump[b] += hb;
  umm[a] -= ha; umm[b] -= hb;
  Vec r = eval_d(chart, ambient, upp);
  const Vec f2 = eval_d(chart, ambient, upm);
  const Vec f3 = eval_d(chart, ambient, ump);
  const Vec f4 = eval_d(chart, ambient, umm);
  for (int i = 0; i < ambient; ++i)
    r[i] = (r[i] - f2[i] - f3[i] + f4[i]) / (4.0 * ha * hb);
  return r;
}

}  // namespace

Vec chart_point(const Chart& chart, int ambient, const Vec& u) {
  return eval_d(chart, ambient, u);
}

bool point_in_chart(const Chart& chart, const Vec& u) {
  for (int a = 0; a < chart.dim(); ++a) {
    const ChartAxis& ax = chart.axes[a];
    if (ax.unbounded) continue;
    if (u[a] < ax.lo + ax.band_lo || u[a] > ax.hi - ax.band_hi) return false;
  }
  return true;
}

static DerivTables jet_tables(const Chart& chart, int ambient, const Vec& u,
                              int order) {
  const int n = chart.dim();
  const JetSpace& sp = JetSpace::get(n, order);
  std::vector<Jet> in(n), out(ambient, Jet(sp));
  for (int a = 0; a < n; ++a) in[a] = Jet::variable(sp, a, u[a]);
  chart.map_j(in.data(), out.data());

  DerivTables t;
  t.n = n;
  t.amb = ambient;
  t.order = order;
  t.x.resize(ambient);
  for (int i = 0; i < ambient; ++i) t.x[i] = out[i].value();

  auto dvec = [&](std::array<std::uint8_t, JetSpace::kMaxVars> m) {
    Vec v(ambient);
    for (int i = 0; i < ambient; ++i) v[i] = out[i].deriv(m);
    return v;
  };

  if (order >= 1) {
    t.d1.resize(n);
    for (int a = 0; a < n; ++a) {
      std::array<std::uint8_t, JetSpace::kMaxVars> m{};
      m[a] = 1;
      t.d1[a] = dvec(m);
    }
  }
  if (order >= 2) {
    t.d2.assign(n, std::vector<Vec>(n));
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        std::array<std::uint8_t, JetSpace::kMaxVars> m{};
        m[a]++; m[b]++;
        t.d2[a][b] = dvec(m);
        if (b != a) t.d2[b][a] = t.d2[a][b];
      }
  }
  if (order >= 3) {
    t.d3.assign(n, std::vector<std::vector<Vec>>(n, std::vector<Vec>(n)));
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        for (int c = b; c < n; ++c) {
          std::array<std::uint8_t, JetSpace::kMaxVars> m{};
          m[a]++; m[b]++; m[c]++;
          Vec v = dvec(m);
          int idx[3] = {a, b, c};
          std::sort(idx, idx + 3);
          do {
            t.d3[idx[0]][idx[1]][idx[2]] = v;
          } while (std::next_permutation(idx, idx + 3));
        }
  }
  if (order >= 4) {
    t.d4.assign(n, std::vector<std::vector<std::vector<Vec>>>(
                       n, std::vector<std::vector<Vec>>(n, std::vector<Vec>(n))));
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        for (int c = b; c < n; ++c)
          for (int d = c; d < n; ++d) {
            std::array<std::uint8_t, JetSpace::kMaxVars> m{};
            m[a]++; m[b]++; m[c]++; m[d]++;
            Vec v = dvec(m);
            int idx[4] = {a, b, c, d};
            std::sort(idx, idx + 4);
            do {
              t.d4[idx[0]][idx[1]][idx[2]][idx[3]] = v;
            } while (std::next_permutation(idx, idx + 4));
          }
  }
  return t;
}

static DerivTables fd_tables(const Chart& chart, int ambient, const Vec& u,
                             int order) {
  const int n = chart.dim();
  DerivTables t;
  t.n = n;
  t.amb = ambient;
  t.order = order;
  t.x = eval_d(chart, ambient, u);

  if (order >= 1) {
    t.d1.resize(n);
    for (int a = 0; a < n; ++a) t.d1[a] = fd_d1(chart, ambient, u, a);
  }
  if (order >= 2) {
    t.d2.assign(n, std::vector<Vec>(n));
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        t.d2[a][b] = fd_d2(chart, ambient, u, a, b);
        if (b != a) t.d2[b][a] = t.d2[a][b];
      }
  }
  // Orders 3-4: composed 4th-order first-derivative stencils at a moderate
  // step; noise amplification is (C/h)^order, far below what nesting the
  // small-step second-derivative stencil would give.
  std::function<Vec(const Vec&, const std::vector<int>&, double)> composed =
      [&](const Vec& w, const std::vector<int>& dirs, double h) -> Vec {
    if (dirs.size() == 1) {
      auto raw = [&](const Vec& w2) { return eval_d(chart, ambient, w2); };
      return stencil_d1_o4(raw, w, dirs[0], h);
    }
    std::vector<int> tail(dirs.begin() + 1, dirs.end());
    auto inner = [&](const Vec& w2) { return composed(w2, tail, h); };
    return stencil_d1_o4(inner, w, dirs[0], h);
  };

  if (order >= 3) {
    t.d3.assign(n, std::vector<std::vector<Vec>>(n, std::vector<Vec>(n)));
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        for (int c = b; c < n; ++c) {
          Vec v = composed(u, {a, b, c}, fd_step(chart, 3, u[a]));
          int idx[3] = {a, b, c};
          do {
            t.d3[idx[0]][idx[1]][idx[2]] = v;
          } while (std::next_permutation(idx, idx + 3));
        }
  }
  if (order >= 4) {
    t.d4.assign(n, std::vector<std::vector<std::vector<Vec>>>(
                       n, std::vector<std::vector<Vec>>(n, std::vector<Vec>(n))));
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        for (int c = b; c < n; ++c)
          for (int d = c; d < n; ++d) {
            Vec v = composed(u, {a, b, c, d}, fd_step(chart, 4, u[a]));
            int idx[4] = {a, b, c, d};
            do {
              t.d4[idx[0]][idx[1]][idx[2]][idx[3]] = v;
            } while (std::next_permutation(idx, idx + 4));
          }
  }
  return t;
}

DerivTables oracle_tables(const Chart& chart, int ambient, const Vec& u,
                          int order) {
  if (order > chart.max_order)
    throw OracleOrderUnavailable("chart '" + chart.name +
                                 "' provides derivatives up to order " +
                                 std::to_string(chart.max_order) +
                                 ", requested " + std::to_string(order));
  if (chart.oracle == OracleKind::closed_form && chart.map_j)
    return jet_tables(chart, ambient, u, order);
  return fd_tables(chart, ambient, u, order);
}

}  // namespace shrinklab
