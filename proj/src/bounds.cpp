#include "kfree/bounds.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <map>
#include <sstream>

#include "kfree/error.hpp"
#include "kfree/table1_golden.hpp"

namespace kfree {

using boost::multiprecision::cpp_bin_float_50;
using boost::multiprecision::cpp_int;

namespace {

constexpr double kCloseToOne = 1e-9;

template <class T>
struct Terms {
  T s1, s2, s3;
  T total() const { return s1 + s2 + s3; }
};

template <class T>
T ln_zeta(T q, unsigned k) {
  using std::log;
  using std::pow;
  return -log(1 - pow(q, T(1) - T(k)));
}

template <class T>
T sigma2_term(T q, unsigned k, int h, T ell) {
  using std::pow;
  const T kh = std::min<long>(k, h);
  return (q + kh - 1) * pow(q, ell - h - 1) / ((q - 1) * h);
}

template <class T>
Terms<T> squarefree_terms(T q, unsigned p, T n, int h) {
  using std::log;
  using std::pow;
  T s3 = n * pow(q, -T(h + 1) / p) / (h + 1);
  if (p == 2) s3 /= 2;
  s3 += pow(q, T(h) * (T(1) / p - 1));
  return {log(q / (q - 1)), (q + 1) / ((q - 1) * q * h), s3};
}

template <class T>
T sigma3_small_k(T q, unsigned p, unsigned k, T n, int h) {
  using std::pow;
  const T hp = h + 1;
  return n / hp * pow(q, hp * (T(1) - T(k - 1) / p) - hp) + pow(q, T(k - 1) * (T(h) / p + 1) - hp);
}

template <class T>
T sigma3_iterated(T q, const PAdicShape& s, T n, int h) {
  using std::pow;
  const T hp = h + 1;
  T pa = 1;
  for (unsigned i = 0; i < s.a; ++i) pa *= s.p;
  const T theta = T(s.theta.numerator()) / T(s.theta.denominator());
  return n / (pa * hp) * pow(q, hp / pa * (T(1) - T(s.d - 1) / s.p) - hp) +
         pow(q, hp * (theta - 1) + s.d + 1);
}

template <class T>
Terms<T> kfree_terms(T q, const PAdicShape& s, T n, int h) {
  const T s1 = s.k <= static_cast<unsigned>(h) ? ln_zeta(q, s.k) : T(0);
  const T s2 = sigma2_term(q, s.k, h, T(h));
  const T s3 = s.a == 0 ? sigma3_small_k(q, s.p, s.k, n, h) : sigma3_iterated(q, s, n, h);
  return {s1, s2, s3};
}

template <class T>
Terms<T> theorem_k_terms(T q, unsigned k, int h) {
  using std::pow;
  const T qh = q * h;
  const T scale = pow(qh, -T(1) / (2 * k)) / (q - 1);
  return {ln_zeta(q, k), (q + k) * scale, T(k) * (4 * k - 2) * scale};
}

template <class Eval>
void fill(BoundBreakdown& b, Eval eval) {
  const Terms<double> t = eval(double{});
  b.sigma1 = t.s1;
  b.sigma2 = t.s2;
  b.sigma3 = t.s3;
  b.total_coefficient = t.total();
  if (std::abs(b.total_coefficient - 1) < kCloseToOne) {
    b.precise = true;
    b.below_one = eval(cpp_bin_float_50{}).total() < 1;
  } else {
    b.below_one = b.total_coefficient < 1;
  }
}

BoundBreakdown base(std::string formula, const Field& field, unsigned k, long n, int h) {
  BoundBreakdown b;
  b.formula = std::move(formula);
  b.q = field.q();
  b.p = field.p();
  b.k = k;
  b.n = n;
  b.h = h;
  b.ell = h;
  b.sigma1_empty = k > static_cast<unsigned>(h);
  return b;
}

cpp_int binomial(unsigned n, unsigned r) {
  cpp_int c = 1;
  for (unsigned i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

}  // namespace

BigRational zeta_q(const Field& field, unsigned k) {
  if (k < 2) throw DomainError("zeta_q: k must be at least 2");
  cpp_int qk = 1;
  for (unsigned i = 1; i < k; ++i) qk *= field.q();
  return BigRational(qk, qk - 1);
}

double ln_zeta_q(const Field& field, unsigned k) {
  if (k < 2) throw DomainError("zeta_q: k must be at least 2");
  return ln_zeta<double>(field.q(), k);
}

unsigned binomial_scan_r(unsigned k, unsigned p) {
  std::vector<unsigned> row{1};
  for (unsigned i = 1; i <= k; ++i) {
    std::vector<unsigned> next(i + 1, 1);
    for (unsigned j = 1; j < i; ++j) next[j] = (row[j - 1] + row[j]) % p;
    row = std::move(next);
  }
  for (unsigned r = 1; r <= k; ++r) {
    if (row[r] % p != 0) return r;
  }
  return k;  // C(k,k) = 1
}

PAdicShape p_adic_shape(unsigned k, unsigned p) {
  if (k < 2) throw DomainError("p_adic_shape: k must be at least 2");
  if (!is_prime(p)) throw DomainError("p_adic_shape: p must be prime");
  PAdicShape s;
  s.k = k;
  s.p = p;
  for (unsigned v = k; v; v /= p) s.digits.push_back(v % p);
  s.a = static_cast<unsigned>(s.digits.size()) - 1;
  s.d = s.digits.back();
  long long pa1 = 1;
  for (unsigned i = 0; i <= s.a; ++i) pa1 *= p;
  s.theta = 1 - boost::rational<long long>(p - s.d + 1, pa1);
  s.r = binomial_scan_r(k, p);
  return s;
}

BoundBreakdown sigma_bounds(const Field& field, unsigned k, long n, int h, double ell) {
  if (k < 2) throw DomainError("sigma_bounds: k must be at least 2");
  if (h < 1) throw DomainError("sigma_bounds: h must be at least 1");
  if (ell < h) throw DomainError("sigma_bounds: ell must be at least h");
  BoundBreakdown b = base("sigma", field, k, n, h);
  b.ell = ell;
  fill(b, [&](auto zero) {
    using T = decltype(zero);
    const T q = field.q();
    return Terms<T>{b.sigma1_empty ? T(0) : ln_zeta(q, k), sigma2_term(q, k, h, T(ell)), T(0)};
  });
  return b;
}

BoundBreakdown squarefree_coefficient(const Field& field, long n, int h) {
  if (h < 1) throw DomainError("squarefree_coefficient: h must be at least 1");
  if (n < 0) throw DomainError("squarefree_coefficient: n must be nonnegative");
  BoundBreakdown b = base("squarefree", field, 2, n, h);
  b.sigma1_empty = false;
  fill(b, [&](auto zero) {
    using T = decltype(zero);
    return squarefree_terms<T>(field.q(), field.p(), T(n), h);
  });
  return b;
}

BoundBreakdown kfree_coefficient(const Field& field, unsigned k, long n, int h) {
  if (h < 1) throw DomainError("kfree_coefficient: h must be at least 1");
  if (n < 0) throw DomainError("kfree_coefficient: n must be nonnegative");
  const PAdicShape s = p_adic_shape(k, field.p());
  BoundBreakdown b = base("kfree", field, k, n, h);
  fill(b, [&](auto zero) {
    using T = decltype(zero);
    return kfree_terms<T>(field.q(), s, T(n), h);
  });
  return b;
}

double kfree_sigma3_iterated(const Field& field, unsigned k, long n, int h) {
  if (h < 1) throw DomainError("kfree_sigma3_iterated: h must be at least 1");
  return sigma3_iterated<double>(field.q(), p_adic_shape(k, field.p()), n, h);
}

BoundBreakdown theorem_k_coefficient(const Field& field, unsigned k, long n, int h) {
  if (k < 3) throw DomainError("theorem_k_coefficient: k must be at least 3");
  if (h < 1) throw DomainError("theorem_k_coefficient: h must be at least 1");
  if (binomial(2 * k - 1, k - 1) * k % field.p() == 0) {
    throw DomainError("theorem_k_coefficient: characteristic divides k C(2k-1, k-1)");
  }
  if (2L * k * h < n) throw DomainError("theorem_k_coefficient: need h >= n/(2k)");
  BoundBreakdown b = base("theorem_k", field, k, n, h);
  b.sigma1_empty = false;
  b.ell = h + (2.0 * k - 1) / (2.0 * k) * std::log(static_cast<double>(field.q()) * h) /
                  std::log(static_cast<double>(field.q()));
  fill(b, [&](auto zero) {
    using T = decltype(zero);
    return theorem_k_terms<T>(field.q(), k, h);
  });
  return b;
}

std::string marker(N0Method m) {
  switch (m) {
    case N0Method::star:
      return "*";
    case N0Method::dagger:
      return "†";
    default:
      return "";
  }
}

std::string N0Cell::text() const { return n0 ? std::to_string(*n0) + marker(method) : "-"; }

namespace {

BoundBreakdown applicable(const Field& field, unsigned k, long n, int h) {
  return k == 2 ? squarefree_coefficient(field, n, h) : kfree_coefficient(field, k, n, h);
}

}  // namespace

std::optional<long> largest_n_below_one(const Field& field, unsigned k, int h) {
  const BoundBreakdown at0 = applicable(field, k, 0, h);
  if (!at0.below_one) return std::nullopt;
  // The coefficient is affine in n with positive slope.
  const double slope = applicable(field, k, 1, h).total_coefficient - at0.total_coefficient;
  double guess = std::floor((1 - at0.total_coefficient) / slope);
  if (!(guess < 1e15)) throw std::overflow_error("n0 exceeds the supported range");
  long n = static_cast<long>(guess);
  while (applicable(field, k, n + 1, h).below_one) ++n;
  while (n > 0 && !applicable(field, k, n, h).below_one) --n;
  return n;
}

N0Cell n0_cell(const Field& field, unsigned k, int h) {
  if (k < 2) throw DomainError("n0: k must be at least 2");
  if (h < 1) throw DomainError("n0: h must be at least 1");
  N0Cell cell;
  cell.q = field.q();
  cell.h = h;
  cell.k = k;
  if (auto n = largest_n_below_one(field, k, h); n && *n > h) {
    cell.plain = n;
    cell.breakdown = applicable(field, k, *n, h);
    cell.n0 = n;
    cell.method = N0Method::plain;
  }
  auto offer = [&cell](long n, N0Method m) {
    if (!cell.n0 || n > *cell.n0) {
      cell.n0 = n;
      cell.method = m;
    }
  };
  const std::uint32_t q = field.q();
  if (q >= 3) offer(static_cast<long>(k + 1) * h, N0Method::star);
  if ((q >= 7 && (k + 1) % field.p() != 0) || (k >= 3 && q >= 5)) offer(static_cast<long>(k + 2) * h, N0Method::dagger);
  return cell;
}

std::vector<N0Cell> n0_table(std::span<const std::uint32_t> qs, unsigned k, int h_lo, int h_hi) {
  std::vector<N0Cell> out;
  for (int h = h_lo; h <= h_hi; ++h) {
    for (std::uint32_t q : qs) out.push_back(n0_cell(make_field_of_order(q), k, h));
  }
  return out;
}

std::vector<std::uint32_t> table1_columns() { return {2, 3, 4, 5, 7, 8, 9, 11, 19, 25, 27}; }

const std::string& golden_table1_csv() {
  static const std::string csv(kTable1GoldenCsv);
  return csv;
}

std::vector<GoldenCell> golden_table1() {
  std::istringstream in(golden_table1_csv());
  std::string line;
  std::vector<std::uint32_t> qs;
  std::vector<GoldenCell> out;
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, ',')) parts.push_back(cur);
    return parts;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto parts = split(line);
    if (parts.front() == "h") {
      for (std::size_t i = 1; i < parts.size(); ++i) qs.push_back(std::stoul(parts[i]));
      continue;
    }
    const int h = std::stoi(parts.front());
    if (parts.size() != qs.size() + 1) throw std::runtime_error("golden table: ragged row");
    for (std::size_t i = 1; i < parts.size(); ++i) out.push_back({qs[i - 1], h, parts[i]});
  }
  return out;
}

std::string n0_table_csv(const std::vector<N0Cell>& cells) {
  std::vector<std::uint32_t> qs;
  std::map<int, std::map<std::uint32_t, std::string>> rows;
  for (const auto& c : cells) {
    if (std::find(qs.begin(), qs.end(), c.q) == qs.end()) qs.push_back(c.q);
    rows[c.h][c.q] = c.text();
  }
  std::ostringstream os;
  os << "h";
  for (auto q : qs) os << ',' << q;
  os << '\n';
  for (const auto& [h, row] : rows) {
    os << h;
    for (auto q : qs) {
      auto it = row.find(q);
      os << ',' << (it == row.end() ? "" : it->second);
    }
    os << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const BoundBreakdown& b) {
  return {{"formula", b.formula},
          {"q", b.q},
          {"p", b.p},
          {"k", b.k},
          {"n", b.n},
          {"h", b.h},
          {"ell", b.ell},
          {"sigma1", b.sigma1},
          {"sigma2", b.sigma2},
          {"sigma3", b.sigma3},
          {"total_coefficient", b.total_coefficient},
          {"sigma1_empty", b.sigma1_empty},
          {"below_one", b.below_one},
          {"precise", b.precise}};
}

nlohmann::json to_json(const N0Cell& cell) {
  nlohmann::json j{{"q", cell.q}, {"h", cell.h}, {"k", cell.k}, {"text", cell.text()}};
  j["n0"] = cell.n0 ? nlohmann::json(*cell.n0) : nlohmann::json();
  j["plain"] = cell.plain ? nlohmann::json(*cell.plain) : nlohmann::json();
  j["breakdown"] = cell.breakdown ? to_json(*cell.breakdown) : nlohmann::json();
  return j;
}

}  // namespace kfree
