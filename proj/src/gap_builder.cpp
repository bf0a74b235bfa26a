#include "kfree/gap_builder.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <set>

#include "kfree/error.hpp"
#include "kfree/irreducibles.hpp"
#include "kfree/poly_text.hpp"
#include "kfree/powerfree.hpp"

namespace kfree {

using boost::multiprecision::cpp_int;

namespace {

cpp_int big_pow(std::uint64_t q, long e) {
  cpp_int r = 1;
  for (long i = 0; i < e; ++i) r *= q;
  return r;
}

std::uint64_t to_u64(const cpp_int& v) {
  if (v > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("count exceeds 64 bits");
  return v.convert_to<std::uint64_t>();
}

// Irreducibles of degree <= ell, in global order.
std::vector<Poly> small_primes(const Field& field, int ell) {
  std::vector<Poly> out;
  auto& table = irreducible_table(field);
  for (int d = 1; d <= ell; ++d) {
    const auto& list = table.of_degree(d);
    out.insert(out.end(), list.begin(), list.end());
  }
  return out;
}

}  // namespace

Poly GapCertificate::lifted_center() const {
  if (F.is_monic() && F.degree() > h) return F;
  const int deg_m = M.degree();
  const int shift = std::max(0, h + 1 - deg_m);
  return F + Poly::monomial(*field, 1, static_cast<std::size_t>(shift)) * M;
}

int small_prime_cutoff(const Field& field, unsigned k, int h) {
  const std::uint64_t q = field.q();
  if (h < 0 || static_cast<std::uint64_t>(h) < k * q) return 0;
  // largest e with k q^e <= h
  int e = 0;
  for (std::uint64_t v = k; v * q <= static_cast<std::uint64_t>(h); v *= q) ++e;
  return e - 1;
}

std::uint64_t sieve_cover_count(const Field& field, unsigned k, int h, int ell,
                                std::span<const Assignment> residues) {
  if (k < 2) throw DomainError("k must be at least 2");
  if (h < 0) throw DomainError("h must be nonnegative");
  if (ell < 0) throw DomainError("ell must be nonnegative");
  if (ell > 0 && big_pow(field.q(), ell + 1) * k > h) {
    throw DomainError("sieve_cover_count: ell exceeds log_q(h/k) - 1");
  }
  const auto primes = small_primes(field, ell);
  if (residues.size() != primes.size()) {
    throw DomainError("sieve_cover_count: need exactly one residue per irreducible of degree <= ell");
  }
  std::set<Poly> expected(primes.begin(), primes.end());
  for (const auto& a : residues) {
    if (!expected.erase(a.prime)) throw DomainError("sieve_cover_count: unexpected or repeated modulus");
    if (a.residue.degree() >= static_cast<int>(k) * a.prime.degree()) {
      throw DomainError("sieve_cover_count: residue not reduced");
    }
  }
  // Uncovered = q^{h+1} prod (1 - q^{-k deg P}) = q^{h+1-deg M} prod (q^{k deg P} - 1).
  long deg_m = 0;
  cpp_int uncovered = 1;
  for (const auto& p : primes) {
    deg_m += static_cast<long>(k) * p.degree();
    uncovered *= big_pow(field.q(), static_cast<long>(k) * p.degree()) - 1;
  }
  uncovered *= big_pow(field.q(), h + 1 - deg_m);
  return to_u64(big_pow(field.q(), h + 1) - uncovered);
}

std::pair<Poly, Poly> crt_solve(std::span<const std::pair<Poly, Poly>> congruences) {
  if (congruences.empty()) throw DomainError("crt_solve: no congruences");
  const Field& field = congruences.front().second.field();
  Poly x = Poly(field);
  Poly modulus = Poly::constant(field, 1);
  for (const auto& [residue, m] : congruences) {
    // x' = x + modulus * t with t = (residue - x) * modulus^{-1} mod m
    const auto eg = extended_gcd(modulus % m, m);
    if (!eg.g.is_one()) throw DomainError("crt_solve: moduli are not coprime");
    const Poly t = (residue - x) % m * eg.s % m;
    x = x + modulus * t;
    modulus = modulus * m;
  }
  return {x % modulus, modulus};
}

GapCertificate build_gap_interval(const Field& field, unsigned k, int h) {
  if (k < 2) throw DomainError("k must be at least 2");
  if (h < 0) throw DomainError("h must be nonnegative");
  const int ell = small_prime_cutoff(field, k, h);
  const auto primes = small_primes(field, ell);

  GapCertificate cert{&field, k, h, {}, Poly(field), Poly(field)};
  std::vector<Poly> small_powers;
  for (const auto& p : primes) {
    cert.assignments.push_back({p, Poly(field)});
    small_powers.push_back(pow(p, k));
  }

  auto& table = irreducible_table(field);
  std::uint64_t next = primes.size() + 1;
  const std::uint64_t offsets = checked_pow(field.q(), h + 1);
  for (std::uint64_t t = 0; t < offsets; ++t) {
    const Poly r = Poly::from_index(field, t);
    bool covered = false;
    for (const auto& pk : small_powers) {
      if ((r % pk).is_zero()) {
        covered = true;
        break;
      }
    }
    if (covered) continue;
    const Poly& p = table.nth(next++);
    cert.assignments.push_back({p, r % pow(p, k)});
  }

  std::vector<std::pair<Poly, Poly>> system;
  system.reserve(cert.assignments.size());
  for (const auto& a : cert.assignments) system.emplace_back(-a.residue, pow(a.prime, k));
  auto [f, m] = crt_solve(system);
  cert.F = std::move(f);
  cert.M = std::move(m);
  return cert;
}

GapVerification verify_gap_certificate(const GapCertificate& cert) {
  GapVerification v;
  auto fail = [&v](std::string msg) {
    v.ok = false;
    v.failures.push_back(std::move(msg));
  };
  if (cert.field == nullptr) {
    fail("certificate has no field");
    return v;
  }
  const Field& field = *cert.field;
  if (cert.k < 2) fail("k < 2");
  if (cert.h < 0) fail("h < 0");
  if (cert.assignments.empty()) fail("no congruences");
  if (!v.ok) return v;

  std::set<Poly> seen;
  Poly product = Poly::constant(field, 1);
  std::vector<Poly> powers;
  for (std::size_t j = 0; j < cert.assignments.size(); ++j) {
    const auto& a = cert.assignments[j];
    const std::string tag = "assignment " + std::to_string(j) + " (" + to_text(a.prime) + ")";
    if (&a.prime.field() != &field || &a.residue.field() != &field) {
      fail(tag + ": wrong field");
      return v;
    }
    if (!a.prime.is_monic() || !is_irreducible(a.prime)) fail(tag + ": modulus is not monic irreducible");
    if (!seen.insert(a.prime).second) fail(tag + ": repeated modulus");
    if (a.residue.degree() >= static_cast<int>(cert.k) * a.prime.degree()) fail(tag + ": residue not reduced");
    powers.push_back(pow(a.prime, cert.k));
    product = product * powers.back();
    if (!((cert.F + a.residue) % powers.back()).is_zero()) fail(tag + ": F is not -Q mod P^k");
  }
  if (&cert.M.field() != &field || cert.M != product) fail("M is not the product of the P_j^k");
  if (!v.ok) return v;

  const std::uint64_t offsets = checked_pow(field.q(), cert.h + 1);
  for (std::uint64_t t = 0; t < offsets; ++t) {
    const Poly r = Poly::from_index(field, t);
    bool covered = false;
    for (std::size_t j = 0; j < powers.size() && !covered; ++j) {
      covered = ((r - cert.assignments[j].residue) % powers[j]).is_zero();
    }
    if (!covered) {
      fail("offset " + to_text(r) + " is not covered");
      return v;
    }
  }

  const Interval iv = cert.interval();
  if (auto found = find_k_free(iv, cert.k)) fail("interval contains the k-free member " + to_text(*found));
  return v;
}

GapCostEstimate gap_cost(const Field& field, unsigned k, int h) {
  if (k < 2) throw DomainError("k must be at least 2");
  if (h < 0) throw DomainError("h must be nonnegative");
  GapCostEstimate est{};
  est.ell = small_prime_cutoff(field, k, h);
  std::vector<Assignment> zeros;
  for (const auto& p : small_primes(field, est.ell)) zeros.push_back({p, Poly(field)});
  est.m0 = zeros.size();
  est.covered = sieve_cover_count(field, k, h, est.ell, zeros);
  est.m1 = checked_pow(field.q(), h + 1) - est.covered;
  est.m = est.m0 + est.m1;
  if (est.m < 3) throw DomainError("gap_cost: needs at least 3 congruences");
  const double lq = std::log(static_cast<double>(field.q()));
  const double m = static_cast<double>(est.m);
  const double log_m = std::log(m) / lq;
  est.delta_m = k * m * (log_m + std::log(log_m) / lq + std::log((field.q() - 1.0) / std::exp(1.0)) / lq);
  return est;
}

bool gap_length_condition(const Field& field, unsigned k, int h, int n, double c) {
  const double q = field.q();
  const double zeta = 1.0 / (1.0 - std::pow(q, 1.0 - k));
  if (!(k * c < zeta)) throw DomainError("gap_length_condition: need k c < zeta_q(k)");
  if (n < 2) throw DomainError("gap_length_condition: need n >= 2");
  const double log_n = std::log(static_cast<double>(n)) / std::log(q);
  return std::pow(q, h + 1) <= c * n / log_n;
}

nlohmann::json to_json(const GapCertificate& cert) {
  nlohmann::json j;
  j["format"] = "kfree-gap-certificate";
  j["version"] = 1;
  j["p"] = cert.field->p();
  j["f"] = cert.field->f();
  j["modulus"] = cert.field->modulus();
  j["k"] = cert.k;
  j["h"] = cert.h;
  auto& list = j["assignments"] = nlohmann::json::array();
  for (const auto& a : cert.assignments) list.push_back({{"P", to_text(a.prime)}, {"Q", to_text(a.residue)}});
  j["F"] = to_text(cert.F);
  j["M"] = to_text(cert.M);
  return j;
}

GapCertificate certificate_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "kfree-gap-certificate" || j.value("version", 0) != 1) {
    throw DomainError("not a version-1 gap certificate");
  }
  const Field& field = make_field(j.at("p").get<std::uint32_t>(), j.at("f").get<std::uint32_t>());
  if (j.at("modulus").get<std::vector<std::uint32_t>>() != field.modulus()) {
    throw DomainError("certificate field modulus differs from " + field.name());
  }
  GapCertificate cert{&field, j.at("k").get<unsigned>(), j.at("h").get<int>(), {}, Poly(field), Poly(field)};
  for (const auto& a : j.at("assignments")) {
    cert.assignments.push_back({parse_poly(field, a.at("P").get<std::string>()),
                                parse_poly(field, a.at("Q").get<std::string>())});
  }
  cert.F = parse_poly(field, j.at("F").get<std::string>());
  cert.M = parse_poly(field, j.at("M").get<std::string>());
  return cert;
}

}  // namespace kfree
