#include "kfree/intervals.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "kfree/error.hpp"
#include "kfree/poly_text.hpp"
#include "kfree/powerfree.hpp"

namespace kfree {

std::uint64_t checked_pow(std::uint64_t q, int e) {
  if (e < 0) throw DomainError("negative exponent");
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / q) throw std::overflow_error("q^e exceeds 64 bits");
    r *= q;
  }
  return r;
}

Interval::Interval(Poly center, int length)
    : center_(std::move(center)), base_(clear_low(center_, length)), h_(length) {
  if (!center_.is_monic()) throw DomainError("interval centre must be monic");
  if (h_ < 0 || h_ >= center_.degree()) {
    throw DomainError("interval length must satisfy 0 <= h < deg F");
  }
}

std::uint64_t Interval::size() const { return checked_pow(field().q(), h_ + 1); }

Poly Interval::member(std::uint64_t t) const {
  std::vector<Elem> c(base_.coeffs().begin(), base_.coeffs().end());
  const std::uint64_t q = field().q();
  for (int i = 0; i <= h_; ++i, t /= q) c[i] = static_cast<Elem>(t % q);
  if (t != 0) throw std::out_of_range("member index exceeds interval size");
  return Poly(field(), std::move(c));
}

bool Interval::contains(const Poly& g) const { return (center_ - g).degree() <= h_; }

std::uint64_t count_multiples(const Interval& iv, const Poly& g) {
  require_same_field(iv.center(), g);
  if (!g.is_monic()) throw DomainError("count_multiples: divisor must be monic");
  const int d = g.degree();
  if (d < 1 || d > iv.degree()) throw DomainError("count_multiples: need 1 <= deg g <= n");
  const int h = iv.length();
  if (d <= h) return checked_pow(iv.field().q(), h - d + 1);
  // F + R is divisible by g for R = -(F mod g), which lies in range iff deg <= h.
  return (iv.center() % g).degree() <= h ? 1 : 0;
}

KFreeCount count_non_k_free(const Interval& iv, unsigned k) {
  if (k < 2) throw DomainError("k must be at least 2");
  const std::uint64_t total = iv.size();
  KFreeCount out{0, 0};
  for (std::uint64_t t = 0; t < total; ++t) {
    if (is_k_free(iv.member(t), k)) {
      ++out.k_free;
    } else {
      ++out.non_k_free;
    }
  }
  return out;
}

std::optional<Poly> find_k_free(const Interval& iv, unsigned k) {
  if (k < 2) throw DomainError("k must be at least 2");
  const std::uint64_t total = iv.size();
  for (std::uint64_t t = 0; t < total; ++t) {
    Poly m = iv.member(t);
    if (is_k_free(m, k)) return m;
  }
  return std::nullopt;
}

const std::vector<Poly>& kth_powers_of_degree(const Field& field, unsigned k, int d) {
  static std::mutex mu;
  static std::map<std::tuple<const Field*, unsigned, int>, std::unique_ptr<std::vector<Poly>>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{&field, k, d}];
  if (!slot) {
    const std::uint64_t count = checked_pow(field.q(), d);
    slot = std::make_unique<std::vector<Poly>>();
    slot->reserve(count);
    for (std::uint64_t t = 0; t < count; ++t) slot->push_back(pow(Poly::monic_from_index(field, d, t), k));
  }
  return *slot;
}

KthPowerDivisorSet kth_power_divisors(const Interval& iv, unsigned k, int d) {
  if (k < 2) throw DomainError("k must be at least 2");
  if (d < 1 || static_cast<long>(k) * d > iv.degree()) {
    throw DomainError("kth_power_divisors: need 1 <= d <= n/k");
  }
  const Field& field = iv.field();
  const auto& powers = kth_powers_of_degree(field, k, d);
  KthPowerDivisorSet out{iv, k, d, {}};
  for (std::uint64_t t = 0; t < powers.size(); ++t) {
    if ((iv.center() % powers[t]).degree() <= iv.length()) {
      out.members.push_back(Poly::monic_from_index(field, d, t));
    }
  }
  return out;
}

CertifyReport certify_all_intervals(const Field& field, int n, int h, unsigned k, unsigned workers) {
  if (h < 1 || h > n - 2) throw DomainError("certify_all_intervals: need 1 <= h <= n - 2");
  if (k < 2) throw DomainError("k must be at least 2");
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t reps = checked_pow(field.q(), n - h - 1);
  const std::uint64_t members = checked_pow(field.q(), h + 1);
  const std::uint64_t q = field.q();

  constexpr std::uint64_t kBlock = 256;
  const std::uint64_t blocks = (reps + kBlock - 1) / kBlock;
  std::atomic<std::uint64_t> next_block{0};
  std::atomic<std::uint64_t> first_failure{reps};

  auto worker = [&] {
    std::vector<Elem> c(static_cast<std::size_t>(n) + 1, 0);
    for (;;) {
      const std::uint64_t b = next_block.fetch_add(1);
      if (b >= blocks) return;
      const std::uint64_t lo = b * kBlock;
      const std::uint64_t hi = std::min(reps, lo + kBlock);
      for (std::uint64_t r = lo; r < hi && r < first_failure.load(); ++r) {
        std::fill(c.begin(), c.end(), 0);
        c[n] = 1;
        std::uint64_t v = r;
        for (int i = h + 1; i < n; ++i, v /= q) c[i] = static_cast<Elem>(v % q);
        bool found = false;
        for (std::uint64_t t = 0; t < members && !found; ++t) {
          std::uint64_t u = t;
          for (int i = 0; i <= h; ++i, u /= q) c[i] = static_cast<Elem>(u % q);
          found = is_k_free(Poly(field, c), k);
        }
        if (!found) {
          std::uint64_t cur = first_failure.load();
          while (r < cur && !first_failure.compare_exchange_weak(cur, r)) {
          }
          break;
        }
      }
    }
  };

  workers = std::max(1u, workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }

  CertifyReport report;
  report.q = field.q();
  report.p = field.p();
  report.f = field.f();
  report.k = k;
  report.n = n;
  report.h = h;
  report.intervals = reps;
  if (const std::uint64_t fail = first_failure.load(); fail < reps) {
    report.pass = false;
    std::vector<Elem> c(static_cast<std::size_t>(n) + 1, 0);
    c[n] = 1;
    std::uint64_t v = fail;
    for (int i = h + 1; i < n; ++i, v /= q) c[i] = static_cast<Elem>(v % q);
    report.counterexample_center = Poly(field, std::move(c));
  }
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

nlohmann::json to_json(const CertifyReport& report) {
  nlohmann::json j;
  j["q"] = report.q;
  j["p"] = report.p;
  j["f"] = report.f;
  j["k"] = report.k;
  j["n"] = report.n;
  j["h"] = report.h;
  j["pass"] = report.pass;
  j["counterexample_center"] =
      report.counterexample_center ? nlohmann::json(to_text(*report.counterexample_center)) : nlohmann::json();
  j["elapsed_ms"] = report.elapsed_ms;
  return j;
}

PackingCheck packing_bound_check(std::span<const Poly> set, std::uint64_t kappa, double delta) {
  if (set.empty()) return {true, true};
  const int d = set.front().degree();
  for (const auto& g : set) {
    if (!g.is_monic() || g.degree() != d) throw DomainError("packing_bound_check: elements must be monic of one degree");
  }
  if (delta > d) throw DomainError("packing_bound_check: delta must not exceed d");
  bool hypothesis = true;
  for (const auto& g : set) {
    std::uint64_t close = 0;
    for (const auto& h : set) {
      const int dd = (g - h).degree();
      if (dd == kZeroDegree || dd < delta) ++close;
    }
    if (close > kappa) {
      hypothesis = false;
      break;
    }
  }
  const long double bound = static_cast<long double>(kappa) *
                            std::pow(static_cast<long double>(set.front().field().q()), d - delta);
  return {hypothesis, static_cast<long double>(set.size()) <= bound};
}

}  // namespace kfree
