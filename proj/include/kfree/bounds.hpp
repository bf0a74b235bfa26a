#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "kfree/field.hpp"

namespace kfree {

using BigRational = boost::rational<boost::multiprecision::cpp_int>;

/// Upper-bound coefficients of q^{h+1} for the count of non-k-free members of
/// an interval. below_one decides the strict comparison; values within 1e-9 of
/// 1 are re-evaluated at 50 significant digits (precise = true).
struct BoundBreakdown {
  std::string formula;
  std::uint32_t q = 0, p = 0;
  unsigned k = 0;
  long n = 0;
  int h = 0;
  double ell = 0;
  double sigma1 = 0;
  double sigma2 = 0;
  double sigma3 = 0;
  double total_coefficient = 0;
  bool sigma1_empty = false;  // k > h
  bool below_one = false;
  bool precise = false;
};

struct PAdicShape {
  unsigned k = 0;
  unsigned p = 0;
  std::vector<unsigned> digits;  // d_0 .. d_a
  unsigned a = 0;
  unsigned d = 0;                  // leading digit
  boost::rational<long long> theta;  // 1 - (p - d + 1) p^{-a-1}
  unsigned r = 0;                  // least r >= 1 with p not dividing C(k, r)
};

/// (1 - q^{1-k})^{-1}, exact.
BigRational zeta_q(const Field& field, unsigned k);
double ln_zeta_q(const Field& field, unsigned k);

/// Throws DomainError unless k >= 2 and p is prime.
PAdicShape p_adic_shape(unsigned k, unsigned p);

/// Least r >= 1 with p not dividing C(k, r), by scanning a Pascal row mod p.
unsigned binomial_scan_r(unsigned k, unsigned p);

/// sigma1 = ln zeta_q(k) (0 and flagged when k > h);
/// sigma2 = (q + min(k,h) - 1) q^{ell-h-1} / ((q-1) h). Requires h >= 1, ell >= h.
BoundBreakdown sigma_bounds(const Field& field, unsigned k, long n, int h, double ell);

/// k = 2:  ln(q/(q-1)) + (q+1)/((q-1)qh) + n q^{-(h+1)/p}/(h+1) + q^{h(1/p-1)},
/// with the n-term halved in characteristic 2.
BoundBreakdown squarefree_coefficient(const Field& field, long n, int h);

/// General k, with l = h. The large-degree term is
///   k < p:   [n/(h+1) q^{(h+1)(1-(k-1)/p)} + q^{(k-1)(h/p+1)}] / q^{h+1}
///   k >= p:  kfree_sigma3_iterated
BoundBreakdown kfree_coefficient(const Field& field, unsigned k, long n, int h);

/// [n/(p^a(h+1)) q^{(h+1)p^{-a}(1-(d-1)/p)} + q^{(h+1)theta + d + 1}] / q^{h+1},
/// valid for every k (for k < p it is weaker by q^{2+(k-1)/p} in the last term).
double kfree_sigma3_iterated(const Field& field, unsigned k, long n, int h);

/// ln zeta_q(k) + (q + 4k^2 - k)(qh)^{-1/(2k)}/(q-1), ell = h + (2k-1)/(2k) log_q(qh).
/// Requires k >= 3, p not dividing k C(2k-1, k-1), and 2kh >= n.
BoundBreakdown theorem_k_coefficient(const Field& field, unsigned k, long n, int h);

enum class N0Method { none, plain, star, dagger };

/// "", "*", "†" (dagger).
std::string marker(N0Method m);

struct N0Cell {
  std::uint32_t q = 0;
  int h = 0;
  unsigned k = 2;
  std::optional<long> n0;
  N0Method method = N0Method::none;
  std::optional<long> plain;  // largest n with coefficient < 1, if it exceeds h
  std::optional<BoundBreakdown> breakdown;

  std::string text() const;  // "57", "3*", "16†" or "-"
};

/// Largest n with the applicable coefficient (squarefree for k = 2) below 1.
std::optional<long> largest_n_below_one(const Field& field, unsigned k, int h);

N0Cell n0_cell(const Field& field, unsigned k, int h);
std::vector<N0Cell> n0_table(std::span<const std::uint32_t> qs, unsigned k, int h_lo, int h_hi);

/// The column set of the printed table: 2 3 4 5 7 8 9 11 19 25 27.
std::vector<std::uint32_t> table1_columns();

struct GoldenCell {
  std::uint32_t q;
  int h;
  std::string text;
};

/// Parsed from the embedded golden CSV.
std::vector<GoldenCell> golden_table1();
const std::string& golden_table1_csv();

/// Rows h, columns q, header "h,q1,q2,...".
std::string n0_table_csv(const std::vector<N0Cell>& cells);
nlohmann::json to_json(const BoundBreakdown& b);
nlohmann::json to_json(const N0Cell& cell);

}  // namespace kfree
