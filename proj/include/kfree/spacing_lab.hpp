#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "kfree/poly.hpp"

namespace kfree {

/// Seeded generator whose draws do not depend on the standard library's
/// distribution implementations.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : gen_(seed) {}
  /// Uniform in [0, bound), by rejection.
  std::uint64_t below(std::uint64_t bound);
  std::uint64_t next() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

Poly random_monic(const Field& field, int degree, PortableRng& rng);
/// Uniform over polynomials of degree <= max_degree (zero included).
Poly random_poly(const Field& field, int max_degree, PortableRng& rng);

/// deg(F mod G^k) for every monic G with 1 <= deg G <= n/k, from which
/// S_q(d) = { G : deg(F mod G^k) <= h } follows for any h.
class DivisorProfile {
 public:
  static constexpr std::uint64_t kMaxEnumeration = 1u << 16;

  /// Throws BudgetExceeded if q^{floor(n/k)} > kMaxEnumeration.
  DivisorProfile(const Poly& F, unsigned k);

  const Poly& center() const { return F_; }
  unsigned k() const { return k_; }
  int max_d() const { return static_cast<int>(degrees_.size()); }
  /// S_q(d) for the interval of length h, sorted.
  std::vector<Poly> set(int d, int h) const;

 private:
  Poly F_;
  unsigned k_;
  std::vector<std::vector<int>> degrees_;  // [d-1][index]
};

/// Whether every d <= n/k can be enumerated.
bool spacing_enumerable(const Field& field, unsigned k, int n);

enum class TripleMode { not_applicable, vacuous, exhaustive, sampled };
std::string to_string(TripleMode m);

struct SpacingViolation {
  std::string check;
  int d;
  std::vector<Poly> witnesses;
  std::string detail;
};

struct SpacingRow {
  int d = 0;
  std::uint64_t set_size = 0;
  std::optional<int> min_pair_gap;        // min deg(G - H) over pairs
  std::optional<int> min_triple_spread;   // min over triples of max deg(G_i - G_j)
  TripleMode triples = TripleMode::not_applicable;
  std::uint64_t pairs_far = 0;    // pairs meeting deg(G-H) >= ((k+r)d-n)/r
  std::uint64_t pairs_close = 0;  // remaining pairs meeting deg(G-H) <= (h+kd-n)/k
  bool lemma_checked = false;
  bool hr_checked = false;
};

struct SpacingReport {
  std::string check;  // "pair", "triple" or "hr"
  const Field* field = nullptr;
  unsigned k = 0;
  int n = 0;
  int h = 0;
  Poly F;
  std::uint64_t seed = 0;
  unsigned r = 0;
  std::vector<SpacingRow> rows;
  std::vector<SpacingViolation> violations;

  explicit SpacingReport(const Poly& center) : F(center) {}
  bool clean() const { return violations.empty(); }
};

/// For h < d <= n/k: every pair of S_q(d) satisfies deg(G-H) >= ((k+r)d-n)/r,
/// or, when r = k, deg(G-H) <= (h+kd-n)/k.
SpacingReport verify_prop_pair_spacing(const Poly& F, unsigned k, int h, std::uint64_t seed = 0);
SpacingReport verify_prop_pair_spacing(const DivisorProfile& profile, int h, std::uint64_t seed = 0);

/// Triples satisfy max deg(G_i - G_j) >= ((k+2)d-n)/3 when p does not divide
/// k(k+1); sets above 64 elements are checked on 10^4 sampled triples. When
/// r = k and n-h <= kd <= n, also |S_q(d)| <= q^{h/k+1}.
SpacingReport verify_prop_triple_spacing(const Poly& F, unsigned k, int h, std::uint64_t seed = 0);
SpacingReport verify_prop_triple_spacing(const DivisorProfile& profile, int h, std::uint64_t seed = 0);

/// Requires k >= 3, p not dividing k C(2k-1,k-1) and n/(2k) <= h < n/k
/// (DomainError otherwise). Checks |S_q(d)| <= 2k q^{(n-d)/(2k-1)} and that
/// every class of S_q(d) agreeing above degree ceil(Delta_k) - 1 has at most
/// 2k elements, Delta_k = (2kd-n)/(2k-1).
SpacingReport verify_hr_bound(const Poly& F, unsigned k, int h, std::uint64_t seed = 0);
SpacingReport verify_hr_bound(const DivisorProfile& profile, int h, std::uint64_t seed = 0);

bool hr_applicable(const Field& field, unsigned k, int n, int h);
bool triple_applicable(const Field& field, unsigned k);

struct HRForms {
  unsigned k;
  std::vector<boost::multiprecision::cpp_int> P0;  // degree k-1, low to high
  std::vector<boost::multiprecision::cpp_int> Q0;  // degree k-1

  Poly P0_poly(const Field& field) const;
  Poly Q0_poly(const Field& field) const;
};

/// (1-x)^{2k-1} = P0(x) - x^k Q0(x). Requires k >= 3.
HRForms hr_forms(unsigned k);
bool hr_identity_over_integers(const HRForms& forms);
/// The same identity in GF(p)[x].
bool hr_identity_mod(const HRForms& forms, unsigned p);

/// P(x,y) = x^{k-1} P0(y/x) evaluated at (G1, G2); likewise Q.
Poly hr_P(const HRForms& forms, const Poly& G1, const Poly& G2);
Poly hr_Q(const HRForms& forms, const Poly& G1, const Poly& G2);
/// (G1-G2)^{2k-1} == G1^k P(G1,G2) - G2^k Q(G1,G2).
bool verify_hr_identity(const HRForms& forms, const Poly& G1, const Poly& G2);

/// F[(G3-G2)G2^kG3^k + (G1-G3)G1^kG3^k + (G2-G1)G1^kG2^k]
///   == F (G2-G1)(G3-G1)(G3-G2) sum_{a+b+c=2k-2, a,b,c<k} G1^a G2^b G3^c.
/// Throws DomainError unless the G_i are distinct.
bool verify_divided_difference_identity(unsigned k, const Poly& G1, const Poly& G2, const Poly& G3,
                                        const Poly& F);
/// Number of (a,b,c) in the symmetric sum.
std::uint64_t divided_difference_term_count(unsigned k);

/// deg(G^k - H^k) == r deg(G-H) + (k-r) d for G != H monic of degree d with
/// deg(G-H) < d. Throws DomainError outside that shape.
bool power_difference_degree_holds(const Poly& G, const Poly& H, unsigned k);

struct SpacingGridConfig {
  std::vector<std::uint32_t> qs{2, 3, 4, 5, 7, 9};
  std::vector<unsigned> ks{2, 3, 4};
  int n_max = 14;
  unsigned samples = 200;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

struct SpacingGridSummary {
  std::uint64_t seed = 0;
  std::uint64_t cells = 0;          // (q, k, n) triples run
  std::uint64_t skipped_cells = 0;  // too large to enumerate
  std::map<std::string, std::uint64_t> reports;     // per check
  std::map<std::string, std::uint64_t> violations;  // per check
  std::uint64_t sampled_triple_rows = 0;
  std::uint64_t pairs_far = 0;
  std::uint64_t pairs_close = 0;
  std::vector<SpacingViolation> examples;  // first few
  double elapsed_ms = 0;

  std::uint64_t total_violations() const;
};

/// For every (q, k, n) with k < n <= n_max whose divisor sets can be
/// enumerated, draws `samples` monic F of degree n and runs every check whose
/// hypotheses hold for each 0 <= h < n/k.
SpacingGridSummary run_spacing_grid(const SpacingGridConfig& config);

nlohmann::json to_json(const SpacingReport& report);
nlohmann::json to_json(const SpacingGridSummary& summary);

}  // namespace kfree
