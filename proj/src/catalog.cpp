#include "shrinklab/catalog.hpp"

#include <cmath>
#include <numeric>

#include "shrinklab/errors.hpp"

namespace shrinklab {

void CatalogSpec::validate() const {
  switch (kind) {
    case CatalogKind::plane:
      if (euclid_dim < 1) throw InvalidSpec("plane needs n >= 1");
      if (!sphere_dims.empty()) throw InvalidSpec("plane takes no sphere factors");
      return;
    case CatalogKind::sphere:
      if (sphere_dims.size() != 1 || sphere_dims[0] < 1)
        throw InvalidSpec("sphere needs a single dimension n >= 1");
      return;
    case CatalogKind::sphere_product:
      if (sphere_dims.empty()) throw InvalidSpec("product needs sphere factors");
      for (int m : sphere_dims)
        if (m < 1) throw InvalidSpec("sphere factors need m >= 1");
      if (euclid_dim != 0) throw InvalidSpec("product takes no Euclidean factor");
      return;
    case CatalogKind::cylinder_product:
      if (sphere_dims.empty() || euclid_dim < 1)
        throw InvalidSpec("cylinder needs sphere factors and q >= 1");
      for (int m : sphere_dims)
        if (m < 1) throw InvalidSpec("sphere factors need m >= 1");
      return;
    case CatalogKind::veronese:
      if (!sphere_dims.empty() || euclid_dim != 0)
        throw InvalidSpec("veronese takes no parameters");
      return;
  }
  throw InvalidSpec("unknown catalog kind");
}

namespace {

// ---- templated factor maps -------------------------------------------------

// Stereographic chart of S^m(r); u = 0 maps to the pole sign * r * e_{m+1}.
template <class T>
void stereo_eval(int m, double r, double sign, const T* u, T* x) {
  T t = u[0] * u[0];
  for (int i = 1; i < m; ++i) t += u[i] * u[i];
  T denom = 1.0 + t;
  for (int i = 0; i < m; ++i) x[i] = u[i] * (2.0 * r) / denom;
  x[m] = (1.0 - t) * (sign * r) / denom;
}

// Gnomonic (central projection) face of S^m(r) for a fixed axis and sign;
// the 2(m+1) faces partition the sphere up to a measure-zero set.
template <class T>
void gnomonic_eval(int m, double r, int axis, double sign, const T* u, T* x) {
  using std::sqrt;
  T t = u[0] * u[0];
  for (int i = 1; i < m; ++i) t += u[i] * u[i];
  T scale = r / sqrt(1.0 + t);
  int j = 0;
  for (int i = 0; i <= m; ++i) {
    if (i == axis)
      x[i] = scale * sign;
    else
      x[i] = u[j++] * scale;
  }
}

// Degree-2 harmonic map carrying the unit sphere onto the Veronese surface,
// ambient-scaled so the image lies on S^4(sqrt(2)).
template <class T>
void veronese_eval(const T* w, T* x) {
  const double s6 = std::sqrt(3.0) * std::sqrt(2.0);
  const double q = 0.5 * std::sqrt(2.0);
  x[0] = w[1] * w[2] * s6;
  x[1] = w[2] * w[0] * s6;
  x[2] = w[0] * w[1] * s6;
  x[3] = (w[0] * w[0] - w[1] * w[1]) * (std::sqrt(3.0) * q);
  x[4] = (w[0] * w[0] + w[1] * w[1] - (w[2] * w[2]) * 2.0) * q;
}

struct FactorChart {
  std::string name;
  std::vector<ChartAxis> axes;
  std::function<void(const double*, double*)> map_d;
  std::function<void(const Jet*, Jet*)> map_j;
  int out_dim = 0;
};

template <typename F>
FactorChart make_factor(std::string name, std::vector<ChartAxis> axes,
                        int out_dim, F f) {
  FactorChart fc;
  fc.name = std::move(name);
  fc.axes = std::move(axes);
  fc.out_dim = out_dim;
  fc.map_d = [f](const double* u, double* x) { f(u, x); };
  fc.map_j = [f](const Jet* u, Jet* x) { f(u, x); };
  return fc;
}

std::vector<ChartAxis> box_axes(int m, double half) {
  std::vector<ChartAxis> axes(m);
  for (auto& ax : axes) {
    ax.lo = -half;
    ax.hi = half;
  }
  return axes;
}

struct Factor {
  bool euclid = false;
  int m = 0;        // sphere dimension (or q for euclid)
  double radius = 0.0;
  std::vector<FactorChart> sampling;
  std::vector<FactorChart> integration;
  int out_dim = 0;
};

Factor sphere_factor(int m, double r) {
  Factor f;
  f.m = m;
  f.radius = r;
  f.out_dim = m + 1;
  for (double sign : {1.0, -1.0}) {
    std::string nm = sign > 0 ? "stereoN" : "stereoS";
    f.sampling.push_back(make_factor(
        nm, box_axes(m, 1.2), m + 1, [m, r, sign](const auto* u, auto* x) {
          stereo_eval(m, r, sign, u, x);
        }));
  }
  for (int axis = 0; axis <= m; ++axis)
    for (double sign : {1.0, -1.0}) {
      std::string nm = "gnom" + std::to_string(axis) + (sign > 0 ? "+" : "-");
      f.integration.push_back(make_factor(
          nm, box_axes(m, 1.0), m + 1,
          [m, r, axis, sign](const auto* u, auto* x) {
            gnomonic_eval(m, r, axis, sign, u, x);
          }));
    }
  return f;
}

Factor euclid_factor(int q) {
  Factor f;
  f.euclid = true;
  f.m = q;
  f.out_dim = q;
  std::vector<ChartAxis> axes(q);
  for (auto& ax : axes) ax.unbounded = true;
  FactorChart fc = make_factor("R" + std::to_string(q), axes, q,
                               [q](const auto* u, auto* x) {
                                 for (int i = 0; i < q; ++i) x[i] = u[i];
                               });
  f.sampling.push_back(fc);
  f.integration.push_back(fc);
  return f;
}

Chart product_chart(const std::vector<FactorChart>& parts, bool integrate) {
  Chart ch;
  std::vector<int> in_off, out_off;
  int io = 0, oo = 0;
  for (const FactorChart& fc : parts) {
    if (!ch.name.empty()) ch.name += "*";
    ch.name += fc.name;
    in_off.push_back(io);
    out_off.push_back(oo);
    for (const ChartAxis& ax : fc.axes) ch.axes.push_back(ax);
    io += static_cast<int>(fc.axes.size());
    oo += fc.out_dim;
  }
  auto parts_copy = parts;
  ch.map_d = [parts_copy, in_off, out_off](const double* u, double* x) {
    for (size_t k = 0; k < parts_copy.size(); ++k)
      parts_copy[k].map_d(u + in_off[k], x + out_off[k]);
  };
  ch.map_j = [parts_copy, in_off, out_off](const Jet* u, Jet* x) {
    for (size_t k = 0; k < parts_copy.size(); ++k)
      parts_copy[k].map_j(u + in_off[k], x + out_off[k]);
  };
  ch.use_for_sampling = !integrate;
  ch.use_for_integration = integrate;
  return ch;
}

// Cartesian product of per-factor chart lists, last factor fastest.
void append_products(const std::vector<Factor>& factors, bool integrate,
                     std::vector<Chart>& out) {
  std::vector<const std::vector<FactorChart>*> lists;
  for (const Factor& f : factors)
    lists.push_back(integrate ? &f.integration : &f.sampling);
  std::vector<size_t> idx(lists.size(), 0);
  while (true) {
    std::vector<FactorChart> parts;
    for (size_t k = 0; k < lists.size(); ++k)
      parts.push_back((*lists[k])[idx[k]]);
    out.push_back(product_chart(parts, integrate));
    int k = static_cast<int>(lists.size()) - 1;
    while (k >= 0 && ++idx[k] == lists[k]->size()) {
      idx[k] = 0;
      --k;
    }
    if (k < 0) break;
  }
}

Vec stereo_preimage(const Vec& dir, double sign) {
  const double c = sign * dir.back();
  const double t = (1.0 - c) / (1.0 + c);
  Vec u(dir.size() - 1);
  for (size_t i = 0; i + 1 < dir.size(); ++i) u[i] = dir[i] * 0.5 * (1.0 + t);
  return u;
}

Vec overlap_direction(int m, int variant) {
  Vec d;
  if (m == 1) d = variant == 0 ? Vec{1.0, 0.17} : Vec{-0.8, -0.2};
  else if (m == 2)
    d = variant == 0 ? Vec{0.9, 0.6, 0.15} : Vec{-0.5, 0.8, -0.18};
  else
    d = variant == 0 ? Vec{0.8, 0.55, -0.45, 0.12} : Vec{-0.6, 0.7, 0.3, -0.15};
  const double nn = norm(d);
  for (auto& v : d) v /= nn;
  return d;
}

// Overlap pairs: flip one sphere factor from its north to its south
// stereographic chart while every other factor stays on chart 0.
void add_overlap_points(const std::vector<Factor>& factors, Immersion& imm) {
  std::vector<size_t> stride(factors.size(), 1);
  for (int k = static_cast<int>(factors.size()) - 2; k >= 0; --k)
    stride[k] = stride[k + 1] * factors[k + 1].sampling.size();

  auto base_coords = [&](int except_factor, int variant, double sign) {
    Vec u;
    for (size_t k = 0; k < factors.size(); ++k) {
      const Factor& f = factors[k];
      if (f.euclid) {
        for (int i = 0; i < f.m; ++i) u.push_back(0.4 + 0.17 * i);
      } else {
        Vec d = overlap_direction(f.m, static_cast<int>(k) == except_factor
                                           ? variant
                                           : 0);
        Vec uf = stereo_preimage(d, static_cast<int>(k) == except_factor
                                        ? sign
                                        : 1.0);
        for (double v : uf) u.push_back(v);
      }
    }
    return u;
  };

  for (size_t k = 0; k < factors.size(); ++k) {
    if (factors[k].euclid) continue;
    for (int variant = 0; variant < 2; ++variant) {
      OverlapPoint op;
      op.chart_a = 0;
      op.ua = base_coords(static_cast<int>(k), variant, 1.0);
      op.chart_b = static_cast<int>(stride[k]);
      op.ub = base_coords(static_cast<int>(k), variant, -1.0);
      imm.meta.overlap_points.push_back(op);
    }
  }
}

Immersion assemble(const std::vector<Factor>& factors, const std::string& name) {
  Immersion imm;
  imm.meta.name = name;
  int n = 0, amb = 0, p = 0;
  bool compact = true;
  for (const Factor& f : factors) {
    n += f.m;
    amb += f.out_dim;
    if (f.euclid)
      compact = false;
    else
      ++p;
  }
  imm.dim = n;
  imm.codim = amb - n;
  imm.ambient = amb;
  imm.meta.compact = compact;
  imm.meta.polynomial_volume_growth = true;
  append_products(factors, /*integrate=*/false, imm.charts);
  append_products(factors, /*integrate=*/true, imm.charts);
  add_overlap_points(factors, imm);
  return imm;
}

}  // namespace

Immersion build_example(const CatalogSpec& spec) {
  spec.validate();

  if (spec.kind == CatalogKind::plane) {
    const int n = spec.euclid_dim;
    Immersion imm;
    imm.dim = n;
    imm.codim = 1;
    imm.ambient = n + 1;
    imm.meta.name = "plane:n=" + std::to_string(n);
    imm.meta.compact = false;
    imm.meta.polynomial_volume_growth = true;
    imm.meta.expected.norm_H_sq = 0.0;
    imm.meta.expected.norm_A_sq = 0.0;
    Chart ch;
    ch.name = "affine";
    ch.axes.assign(n, ChartAxis{});
    for (auto& ax : ch.axes) ax.unbounded = true;
    set_chart_map(ch, [n](const auto* u, auto* x) {
      for (int i = 0; i < n; ++i) x[i] = u[i];
      x[n] = u[0] * 0.0;
    });
    ch.use_for_sampling = true;
    ch.use_for_integration = true;
    imm.charts.push_back(ch);
    return imm;
  }

  if (spec.kind == CatalogKind::veronese) {
    // Unit-sphere charts composed with the quadratic map; the induced metric
    // is that of S^2(sqrt(6)) and the image sits on S^4(sqrt(2)).
    Factor unit = sphere_factor(2, 1.0);
    auto compose = [](FactorChart fc) {
      FactorChart out = fc;
      out.out_dim = 5;
      auto inner_d = fc.map_d;
      auto inner_j = fc.map_j;
      out.map_d = [inner_d](const double* u, double* x) {
        double w[3];
        inner_d(u, w);
        veronese_eval(w, x);
      };
      out.map_j = [inner_j](const Jet* u, Jet* x) {
        Jet w[3];
        inner_j(u, w);
        veronese_eval(w, x);
      };
      return out;
    };
    Factor f;
    f.m = 2;
    f.radius = 1.0;
    f.out_dim = 5;
    for (const FactorChart& fc : unit.sampling) f.sampling.push_back(compose(fc));
    for (const FactorChart& fc : unit.integration)
      f.integration.push_back(compose(fc));
    Immersion imm = assemble({f}, "veronese");
    imm.meta.expected.norm_H_sq = 2.0;
    imm.meta.expected.norm_A_sq = 5.0 / 3.0;
    imm.meta.expected.norm_x_sq = 2.0;
    return imm;
  }

  std::vector<Factor> factors;
  int n = 0;
  for (int m : spec.sphere_dims) {
    factors.push_back(sphere_factor(m, std::sqrt(static_cast<double>(m))));
    n += m;
  }
  double sum_m = n;
  if (spec.euclid_dim > 0) {
    factors.push_back(euclid_factor(spec.euclid_dim));
    n += spec.euclid_dim;
  }

  std::string name;
  if (spec.kind == CatalogKind::sphere) {
    name = "sphere:n=" + std::to_string(spec.sphere_dims[0]);
  } else if (spec.kind == CatalogKind::sphere_product) {
    name = "product:";
    for (size_t i = 0; i < spec.sphere_dims.size(); ++i)
      name += (i ? "," : "") + std::to_string(spec.sphere_dims[i]);
  } else {
    name = "cylinder:";
    for (size_t i = 0; i < spec.sphere_dims.size(); ++i)
      name += (i ? "," : "") + std::to_string(spec.sphere_dims[i]);
    name += "x" + std::to_string(spec.euclid_dim);
  }

  Immersion imm = assemble(factors, name);
  imm.meta.expected.norm_H_sq = sum_m;
  imm.meta.expected.norm_A_sq = static_cast<double>(spec.sphere_dims.size());
  if (imm.meta.compact) imm.meta.expected.norm_x_sq = sum_m;
  return imm;
}

CatalogSpec parse_catalog_name(const std::string& name) {
  auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  const std::string rest =
      colon == std::string::npos ? std::string{} : name.substr(colon + 1);

  auto parse_int = [&](const std::string& s) {
    try {
      size_t pos = 0;
      int v = std::stoi(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (...) {
      throw UnknownTarget("cannot parse '" + name + "'");
    }
  };
  auto parse_list = [&](const std::string& s) {
    std::vector<int> out;
    size_t start = 0;
    while (start <= s.size()) {
      size_t comma = s.find(',', start);
      if (comma == std::string::npos) {
        out.push_back(parse_int(s.substr(start)));
        break;
      }
      out.push_back(parse_int(s.substr(start, comma - start)));
      start = comma + 1;
    }
    return out;
  };

  CatalogSpec spec;
  if (head == "plane") {
    spec.kind = CatalogKind::plane;
    if (rest.rfind("n=", 0) != 0) throw UnknownTarget("expected plane:n=<k>");
    spec.euclid_dim = parse_int(rest.substr(2));
  } else if (head == "sphere") {
    spec.kind = CatalogKind::sphere;
    if (rest.rfind("n=", 0) != 0) throw UnknownTarget("expected sphere:n=<k>");
    spec.sphere_dims = {parse_int(rest.substr(2))};
  } else if (head == "product") {
    spec.kind = CatalogKind::sphere_product;
    spec.sphere_dims = parse_list(rest);
  } else if (head == "cylinder") {
    spec.kind = CatalogKind::cylinder_product;
    auto x = rest.find('x');
    if (x == std::string::npos)
      throw UnknownTarget("expected cylinder:<m,...>x<q>");
    spec.sphere_dims = parse_list(rest.substr(0, x));
    spec.euclid_dim = parse_int(rest.substr(x + 1));
  } else if (head == "veronese") {
    spec.kind = CatalogKind::veronese;
  } else {
    throw UnknownTarget("unknown catalog entry '" + name + "'");
  }
  spec.validate();
  return spec;
}

Immersion build_by_name(const std::string& name) {
  return build_example(parse_catalog_name(name));
}

std::vector<std::string> catalog_names() {
  return {"plane:n=2",     "sphere:n=1",   "sphere:n=2",  "sphere:n=3",
          "cylinder:1x1",  "cylinder:1x2", "cylinder:2x1", "cylinder:1,2x1",
          "product:1,2",   "product:2,2",  "veronese"};
}

}  // namespace shrinklab
