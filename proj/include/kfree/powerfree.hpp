#pragma once

#include <utility>
#include <vector>

#include "kfree/poly.hpp"

namespace kfree {

struct FactorizationProfile {
  Elem unit;                                      // leading coefficient
  std::vector<std::pair<Poly, unsigned>> factors;  // monic irreducible, multiplicity

  unsigned max_multiplicity() const;
  /// unit * prod P^e
  Poly product(const Field& field) const;
};

/// Squarefree decomposition valid in characteristic p: pairwise coprime
/// monic squarefree parts, each with its multiplicity, product equal to
/// monic(f). Empty for constants. Throws DomainError on zero.
std::vector<std::pair<Poly, unsigned>> squarefree_decomposition(const Poly& f);

/// Distinct-degree split of a monic squarefree polynomial: pairs (g, e) with
/// g the product of all irreducible factors of degree e.
std::vector<std::pair<Poly, int>> distinct_degree_split(const Poly& f);

/// Factors of a monic squarefree g whose irreducible factors all have degree e.
/// Splitting elements are swept in numeric order, so the result is
/// deterministic.
std::vector<Poly> equal_degree_split(const Poly& g, int e);

/// Complete factorization, factors sorted by (degree, numeric order).
FactorizationProfile factorize(const Poly& f);

/// Largest multiplicity of an irreducible factor; 0 for nonzero constants.
unsigned max_multiplicity(const Poly& f);

/// True iff no irreducible factor has multiplicity >= k. Throws DomainError
/// on the zero polynomial and on k < 2.
bool is_k_free(const Poly& f, unsigned k);

}  // namespace kfree
