#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "kfree/poly.hpp"

namespace kfree {

/// I_q(F, h) = { Q : deg(F - Q) <= h } for monic F of degree n > h >= 0.
///
/// Members are indexed by t in [0, q^{h+1}): member(t) is the centre with its
/// coefficients of x^0..x^h replaced by the base-q digits of t, so member
/// indices follow the numeric order of the members themselves.
class Interval {
 public:
  Interval(Poly center, int length);

  const Poly& center() const { return center_; }
  /// Centre with the low h+1 coefficients cleared; equal for equal intervals.
  const Poly& base() const { return base_; }
  int length() const { return h_; }
  int degree() const { return center_.degree(); }
  const Field& field() const { return center_.field(); }

  std::uint64_t size() const;
  Poly member(std::uint64_t t) const;
  bool contains(const Poly& g) const;

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.h_ == b.h_ && a.base_ == b.base_;
  }

 private:
  Poly center_;
  Poly base_;
  int h_;
};

/// q^e with an overflow check.
std::uint64_t checked_pow(std::uint64_t q, int e);

/// Number of multiples of monic g (degree d, 1 <= d <= n) in the interval:
/// 0, or q^{h-d+1} when d <= h, or 1 when d > h.
std::uint64_t count_multiples(const Interval& iv, const Poly& g);

struct KFreeCount {
  std::uint64_t non_k_free;  // N_q(F, h)
  std::uint64_t k_free;      // Q_q(F, h)
};

/// Exhaustive count over all q^{h+1} members.
KFreeCount count_non_k_free(const Interval& iv, unsigned k);

/// Smallest k-free member in numeric order.
std::optional<Poly> find_k_free(const Interval& iv, unsigned k);

/// G^k for every G in M_q(d), indexed like Poly::monic_from_index. Computed
/// once per (field, k, d) and kept for the life of the program.
const std::vector<Poly>& kth_powers_of_degree(const Field& field, unsigned k, int d);

struct KthPowerDivisorSet {
  Interval interval;
  unsigned k;
  int d;
  std::vector<Poly> members;  // sorted
};

/// S_q(d): monic G of degree d with G^k dividing some member, tested as
/// deg(F mod G^k) <= h. Requires k >= 2 and 1 <= d <= n/k.
KthPowerDivisorSet kth_power_divisors(const Interval& iv, unsigned k, int d);

struct CertifyReport {
  std::uint32_t q, p, f;
  unsigned k;
  int n, h;
  bool pass = true;
  std::optional<Poly> counterexample_center;
  std::uint64_t intervals = 0;
  double elapsed_ms = 0;
};

/// Checks every interval of length h in M_q(n) for a k-free member, using
/// the q^{n-h-1} representatives with vanishing x^0..x^h coefficients. The
/// scan is sharded over `workers` threads; the smallest failing
/// representative is reported regardless of scheduling. Requires 1 <= h <= n-2.
CertifyReport certify_all_intervals(const Field& field, int n, int h, unsigned k, unsigned workers = 1);

/// Record {q, p, f, k, n, h, pass, counterexample_center, elapsed_ms}.
nlohmann::json to_json(const CertifyReport& report);

struct PackingCheck {
  bool hypothesis;  // each G has <= kappa elements H of S with deg(G - H) < delta
  bool conclusion;  // |S| <= kappa q^{d - delta}
  bool holds() const { return hypothesis && conclusion; }
};

/// Pairwise verification of the packing lemma on a set of monic degree-d
/// polynomials. Throws DomainError if S is not of that shape.
PackingCheck packing_bound_check(std::span<const Poly> set, std::uint64_t kappa, double delta);

}  // namespace kfree
