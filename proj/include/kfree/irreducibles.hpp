#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "kfree/poly.hpp"

namespace kfree {

/// pi_q(d), the number of monic irreducibles of degree d, by Moebius inversion
/// of sum_{e | d} e pi_q(e) = q^d. Throws std::overflow_error if q^d does not
/// fit in 63 bits.
std::uint64_t count_irreducibles(const Field& field, int d);

/// Deterministic test: f has positive degree and gcd(f, x^{q^i} - x) = 1 for
/// every i <= deg f / 2.
bool is_irreducible(const Poly& f);

/// All monic irreducibles of degree d in increasing numeric order, by an
/// exhaustive scan of M_q(d).
std::vector<Poly> enumerate_irreducibles(const Field& field, int d);

/// Ordered lists P_q(d), built lazily and optionally persisted on disk as
/// <cache_root>/q<q>/irred_d<d>.tbl.
///
/// The global order used by nth() sorts by degree, then numerically within
/// a degree. Safe to share across threads.
class IrreducibleTable {
 public:
  explicit IrreducibleTable(const Field& field,
                            std::optional<std::filesystem::path> cache_root = std::nullopt);

  const Field& field() const { return *field_; }
  const std::optional<std::filesystem::path>& cache_root() const { return cache_root_; }

  const std::vector<Poly>& of_degree(int d);
  std::uint64_t count(int d) { return of_degree(d).size(); }

  /// j-th irreducible (1-based) in (degree, numeric) order.
  const Poly& nth(std::uint64_t j);

  std::filesystem::path cache_file(int d) const;

 private:
  std::optional<std::vector<Poly>> load(int d) const;
  void store(int d, const std::vector<Poly>& list) const;

  const Field* field_;
  std::optional<std::filesystem::path> cache_root_;
  std::mutex mu_;
  std::map<int, std::vector<Poly>> by_degree_;
};

/// Shared table for a field. It uses the disk cache root set by
/// set_shared_cache_root at the time of its creation (none by default).
IrreducibleTable& irreducible_table(const Field& field);
void set_shared_cache_root(std::optional<std::filesystem::path> root);

Poly nth_irreducible(const Field& field, std::uint64_t j);

/// Cache root from the KFREE_CACHE_DIR environment variable, if set.
std::optional<std::filesystem::path> cache_root_from_env();

struct DegreeSlackRow {
  std::uint64_t j;
  int degree;
  double estimate;  // log_q j + log_q log_q j + log_q(q - 1)
  double slack;     // degree - estimate
};

struct DegreeSlackReport {
  std::vector<DegreeSlackRow> rows;
  double max_slack;
  std::uint64_t argmax_j;
};

/// Empirical report on deg P_j against its asymptotic size for 3 <= j <= j_max.
/// Informational only; throws DomainError when j_max < 3.
DegreeSlackReport degree_of_nth_bound_check(const Field& field, std::uint64_t j_max);

}  // namespace kfree
