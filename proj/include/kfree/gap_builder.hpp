#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kfree/intervals.hpp"
#include "kfree/poly.hpp"

namespace kfree {

/// One congruence of a covering system: offsets R with R = residue mod prime^k
/// are covered, and the centre satisfies F = -residue mod prime^k.
struct Assignment {
  Poly prime;
  Poly residue;
};

/// A CRT system whose solution F yields an interval I_q(F~, h) without k-free
/// members (F~ a monic lift of F, see lifted_center).
struct GapCertificate {
  const Field* field;
  unsigned k;
  int h;
  std::vector<Assignment> assignments;
  Poly F;  // least-degree CRT solution
  Poly M;  // product of prime^k

  /// F itself when it is monic of degree > h, otherwise F + x^s M with the
  /// least s >= 0 giving degree > h. Stays in the class of F mod M.
  Poly lifted_center() const;
  Interval interval() const { return Interval(lifted_center(), h); }
};

struct GapCostEstimate {
  int ell;                // small-prime degree cutoff
  std::uint64_t m0;       // congruences mod small primes
  std::uint64_t covered;  // offsets covered by them
  std::uint64_t m1;       // survivors, one congruence each
  std::uint64_t m;        // m0 + m1
  double delta_m;         // k m (log_q m + log_q log_q m + log_q((q-1)/e)); estimate only

  bool fits(int n) const { return delta_m <= n; }
};

/// Degree cutoff for the small-prime sieve: floor(log_q(h/k)) - 1 when
/// h >= kq, else 0.
int small_prime_cutoff(const Field& field, unsigned k, int h);

/// Exact number of offsets R (deg R <= h) meeting at least one congruence
/// R = Q_P mod P^k, given one residue per irreducible P of degree <= ell:
/// q^{h+1} (1 - prod (1 - q^{-k deg P})), independent of the residues.
/// Throws DomainError if ell > log_q(h/k) - 1 (ell = 0 is always allowed) or
/// the residues do not match P_q(1..ell).
std::uint64_t sieve_cover_count(const Field& field, unsigned k, int h, int ell,
                                std::span<const Assignment> residues);

/// Solution of x = residue_i mod modulus_i of least degree; the moduli must be
/// pairwise coprime. Returns (solution, product of moduli).
std::pair<Poly, Poly> crt_solve(std::span<const std::pair<Poly, Poly>> congruences);

/// Greedy covering construction: zero residues modulo P^k for every
/// irreducible P of degree <= ell, then one fresh irreducible (in global
/// order) per uncovered offset, then a CRT solve.
GapCertificate build_gap_interval(const Field& field, unsigned k, int h);

struct GapVerification {
  bool ok = true;
  std::vector<std::string> failures;
  explicit operator bool() const { return ok; }
};

/// Re-checks every certificate invariant and scans the lifted interval with
/// is_k_free. Failures are collected rather than thrown. F only needs to lie
/// in the right class mod M, so deg F >= deg M is accepted here.
GapVerification verify_gap_certificate(const GapCertificate& cert);

/// Requires h large enough that m >= 3.
GapCostEstimate gap_cost(const Field& field, unsigned k, int h);

/// q^{h+1} <= c n / log_q n; requires k c < zeta_q(k).
bool gap_length_condition(const Field& field, unsigned k, int h, int n, double c);

nlohmann::json to_json(const GapCertificate& cert);
GapCertificate certificate_from_json(const nlohmann::json& j);

}  // namespace kfree
