#pragma once
#include <string>
#include <vector>

#include "shrinklab/immersion.hpp"

namespace shrinklab {

enum class CatalogKind {
  plane,
  sphere,
  cylinder_product,
  sphere_product,
  veronese,
};

// A buildable catalog entry: products of round spheres S^{m_i}(sqrt(m_i)),
// an optional Euclidean factor, the plane, and the Veronese surface.
struct CatalogSpec {
  CatalogKind kind = CatalogKind::sphere;
  std::vector<int> sphere_dims;  // m_1, ..., m_p
  int euclid_dim = 0;            // q
  void validate() const;
};

// Builds the entry with closed-form derivative oracles to order 4, a
// stereographic sampling atlas (two charts per sphere factor), gnomonic
// face charts that partition each sphere factor exactly for quadrature,
// and metadata carrying the known invariants and overlap test points.
Immersion build_example(const CatalogSpec& spec);

// Name grammar used by the CLI and the suite:
//   plane:n=2 | sphere:n=3 | product:1,2 | cylinder:2x1 | cylinder:1,2x1 |
//   veronese
CatalogSpec parse_catalog_name(const std::string& name);
Immersion build_by_name(const std::string& name);

std::vector<std::string> catalog_names();

}  // namespace shrinklab
