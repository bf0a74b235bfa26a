#include "kfree/spacing_lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "kfree/bounds.hpp"
#include "kfree/error.hpp"
#include "kfree/intervals.hpp"
#include "kfree/poly_text.hpp"

namespace kfree {

using boost::multiprecision::cpp_int;

std::uint64_t PortableRng::below(std::uint64_t bound) {
  if (bound == 0) throw DomainError("PortableRng::below: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t v = gen_();
    if (v < limit) return v % bound;
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

cpp_int big_pow(cpp_int base, unsigned e) {
  cpp_int r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

cpp_int binomial(unsigned n, unsigned r) {
  cpp_int c = 1;
  for (unsigned i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

Elem reduce(const Field& field, const cpp_int& v) {
  cpp_int m = v % field.p();
  if (m < 0) m += field.p();
  return field.from_int(m.convert_to<std::int64_t>());
}

Poly from_integers(const Field& field, const std::vector<cpp_int>& c) {
  std::vector<Elem> out;
  for (const auto& v : c) out.push_back(reduce(field, v));
  return Poly(field, std::move(out));
}

SpacingReport start_report(std::string check, const DivisorProfile& profile, int h, std::uint64_t seed) {
  SpacingReport rep(profile.center());
  rep.check = std::move(check);
  rep.field = &profile.center().field();
  rep.k = profile.k();
  rep.n = profile.center().degree();
  rep.h = h;
  rep.seed = seed;
  rep.r = binomial_scan_r(rep.k, rep.field->p());
  if (h < 0) throw DomainError("spacing: h must be nonnegative");
  return rep;
}

int diff_degree(const Poly& a, const Poly& b) { return (a - b).degree(); }

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) { return splitmix64(seed ^ splitmix64(salt)); }

Poly random_monic(const Field& field, int degree, PortableRng& rng) {
  if (degree < 0) throw DomainError("random_monic: negative degree");
  std::vector<Elem> c(static_cast<std::size_t>(degree) + 1);
  for (int i = 0; i < degree; ++i) c[i] = static_cast<Elem>(rng.below(field.q()));
  c[degree] = 1;
  return Poly(field, std::move(c));
}

Poly random_poly(const Field& field, int max_degree, PortableRng& rng) {
  if (max_degree < 0) return Poly(field);
  std::vector<Elem> c(static_cast<std::size_t>(max_degree) + 1);
  for (auto& v : c) v = static_cast<Elem>(rng.below(field.q()));
  return Poly(field, std::move(c));
}

bool spacing_enumerable(const Field& field, unsigned k, int n) {
  if (k < 1 || n < 0) return false;
  const int max_d = n / static_cast<int>(k);
  std::uint64_t size = 1;
  for (int i = 0; i < max_d; ++i) {
    size *= field.q();
    if (size > DivisorProfile::kMaxEnumeration) return false;
  }
  return true;
}

DivisorProfile::DivisorProfile(const Poly& F, unsigned k) : F_(F), k_(k) {
  if (k < 2) throw DomainError("k must be at least 2");
  if (!F.is_monic()) throw DomainError("spacing: centre must be monic");
  const Field& field = F.field();
  if (!spacing_enumerable(field, k, F.degree())) {
    throw BudgetExceeded("spacing: q^(n/k) = " + std::to_string(field.q()) + "^" +
                         std::to_string(F.degree() / static_cast<int>(k)) + " exceeds 2^16");
  }
  const int max_d = F.degree() / static_cast<int>(k);
  for (int d = 1; d <= max_d; ++d) {
    const auto& powers = kth_powers_of_degree(field, k, d);
    std::vector<int> deg(powers.size());
    for (std::size_t t = 0; t < powers.size(); ++t) deg[t] = (F_ % powers[t]).degree();
    degrees_.push_back(std::move(deg));
  }
}

std::vector<Poly> DivisorProfile::set(int d, int h) const {
  if (d < 1 || d > max_d()) throw DomainError("DivisorProfile::set: d out of range");
  std::vector<Poly> out;
  const auto& deg = degrees_[d - 1];
  for (std::size_t t = 0; t < deg.size(); ++t) {
    if (deg[t] <= h) out.push_back(Poly::monic_from_index(F_.field(), d, t));
  }
  return out;
}

std::string to_string(TripleMode m) {
  switch (m) {
    case TripleMode::vacuous:
      return "vacuous";
    case TripleMode::exhaustive:
      return "exhaustive";
    case TripleMode::sampled:
      return "sampled";
    default:
      return "not_applicable";
  }
}

SpacingReport verify_prop_pair_spacing(const DivisorProfile& profile, int h, std::uint64_t seed) {
  SpacingReport rep = start_report("pair", profile, h, seed);
  const long k = rep.k, n = rep.n, r = rep.r;
  for (int d = h + 1; d <= profile.max_d(); ++d) {
    const auto S = profile.set(d, h);
    SpacingRow row;
    row.d = d;
    row.set_size = S.size();
    for (std::size_t i = 0; i < S.size(); ++i) {
      for (std::size_t j = i + 1; j < S.size(); ++j) {
        const long g = diff_degree(S[i], S[j]);
        row.min_pair_gap = std::min<int>(row.min_pair_gap.value_or(g), g);
        if (r * g >= (k + r) * d - n) {
          ++row.pairs_far;
        } else if (r == k && k * g <= h + k * d - n) {
          ++row.pairs_close;
        } else {
          rep.violations.push_back({"pair", d, {S[i], S[j]},
                                    "deg(G-H) = " + std::to_string(g) + " with r = " + std::to_string(r)});
        }
      }
    }
    rep.rows.push_back(row);
  }
  return rep;
}

bool triple_applicable(const Field& field, unsigned k) {
  return (static_cast<std::uint64_t>(k) * (k + 1)) % field.p() != 0;
}

SpacingReport verify_prop_triple_spacing(const DivisorProfile& profile, int h, std::uint64_t seed) {
  SpacingReport rep = start_report("triple", profile, h, seed);
  const Field& field = *rep.field;
  const bool triples = triple_applicable(field, rep.k);
  const bool lemma = rep.r == rep.k;
  if (!triples && !lemma) {
    throw DomainError("triple spacing: characteristic divides k(k+1) and r < k");
  }
  const long k = rep.k, n = rep.n;
  for (int d = h + 1; d <= profile.max_d(); ++d) {
    const auto S = profile.set(d, h);
    SpacingRow row;
    row.d = d;
    row.set_size = S.size();
    if (triples) {
      auto check = [&](std::size_t a, std::size_t b, std::size_t c) {
        const long spread = std::max({diff_degree(S[a], S[b]), diff_degree(S[a], S[c]), diff_degree(S[b], S[c])});
        row.min_triple_spread = std::min<int>(row.min_triple_spread.value_or(spread), spread);
        if (3 * spread < (k + 2) * d - n) {
          rep.violations.push_back({"triple", d, {S[a], S[b], S[c]}, "spread " + std::to_string(spread)});
        }
      };
      if (S.size() < 3) {
        row.triples = TripleMode::vacuous;
      } else if (S.size() <= 64) {
        row.triples = TripleMode::exhaustive;
        for (std::size_t a = 0; a < S.size(); ++a)
          for (std::size_t b = a + 1; b < S.size(); ++b)
            for (std::size_t c = b + 1; c < S.size(); ++c) check(a, b, c);
      } else {
        row.triples = TripleMode::sampled;
        PortableRng rng(mix_seed(seed, static_cast<std::uint64_t>(d)));
        for (int s = 0; s < 10000; ++s) {
          std::size_t a = rng.below(S.size()), b, c;
          do b = rng.below(S.size()); while (b == a);
          do c = rng.below(S.size()); while (c == a || c == b);
          check(a, b, c);
        }
      }
    }
    if (lemma && n - h <= k * d) {
      row.lemma_checked = true;
      // |S| <= q^{h/k + 1}  <=>  |S|^k <= q^{h+k}
      if (big_pow(cpp_int(S.size()), rep.k) > big_pow(cpp_int(field.q()), h + rep.k)) {
        rep.violations.push_back({"lemma", d, {}, "|S| = " + std::to_string(S.size())});
      }
    }
    rep.rows.push_back(row);
  }
  return rep;
}

bool hr_applicable(const Field& field, unsigned k, int n, int h) {
  if (k < 3) return false;
  if (binomial(2 * k - 1, k - 1) * k % field.p() == 0) return false;
  return 2L * k * h >= n && static_cast<long>(k) * h < n;
}

SpacingReport verify_hr_bound(const DivisorProfile& profile, int h, std::uint64_t seed) {
  SpacingReport rep = start_report("hr", profile, h, seed);
  const Field& field = *rep.field;
  if (!hr_applicable(field, rep.k, rep.n, h)) {
    throw DomainError("hr bound: needs k >= 3, p not dividing k C(2k-1,k-1) and n/(2k) <= h < n/k");
  }
  const long k = rep.k, n = rep.n;
  for (int d = h + 1; d <= profile.max_d(); ++d) {
    const auto S = profile.set(d, h);
    SpacingRow row;
    row.d = d;
    row.set_size = S.size();
    row.hr_checked = true;
    // |S| <= 2k q^{(n-d)/(2k-1)}  <=>  |S|^{2k-1} <= (2k)^{2k-1} q^{n-d}
    const unsigned e = 2 * rep.k - 1;
    if (big_pow(cpp_int(S.size()), e) > big_pow(cpp_int(2 * k), e) * big_pow(cpp_int(field.q()), n - d)) {
      rep.violations.push_back({"hr", d, {}, "|S| = " + std::to_string(S.size())});
    }
    const long num = 2 * k * d - n;
    const long m = (num + 2 * k - 2) / (2 * k - 1);  // ceil(Delta_k)
    std::map<Poly, std::vector<Poly>> classes;
    for (const auto& G : S) classes[m >= 1 ? clear_low(G, static_cast<int>(m) - 1) : G].push_back(G);
    for (auto& [key, members] : classes) {
      if (members.size() > static_cast<std::size_t>(2 * k)) {
        rep.violations.push_back({"hr_subinterval", d, members, "class of size " + std::to_string(members.size())});
      }
    }
    rep.rows.push_back(row);
  }
  return rep;
}

SpacingReport verify_prop_pair_spacing(const Poly& F, unsigned k, int h, std::uint64_t seed) {
  return verify_prop_pair_spacing(DivisorProfile(F, k), h, seed);
}
SpacingReport verify_prop_triple_spacing(const Poly& F, unsigned k, int h, std::uint64_t seed) {
  return verify_prop_triple_spacing(DivisorProfile(F, k), h, seed);
}
SpacingReport verify_hr_bound(const Poly& F, unsigned k, int h, std::uint64_t seed) {
  if (!hr_applicable(F.field(), k, F.degree(), h)) {
    throw DomainError("hr bound: needs k >= 3, p not dividing k C(2k-1,k-1) and n/(2k) <= h < n/k");
  }
  return verify_hr_bound(DivisorProfile(F, k), h, seed);
}

HRForms hr_forms(unsigned k) {
  if (k < 3) throw DomainError("hr_forms: k must be at least 3");
  HRForms forms{k, {}, {}};
  const unsigned m = 2 * k - 1;
  for (unsigned j = 0; j < k; ++j) forms.P0.push_back((j % 2 ? -1 : 1) * binomial(m, j));
  // -x^k Q0(x) = sum_{j >= k} (-1)^j C(m, j) x^j
  for (unsigned j = k; j <= m; ++j) forms.Q0.push_back((j % 2 ? 1 : -1) * binomial(m, j));
  return forms;
}

bool hr_identity_over_integers(const HRForms& forms) {
  const unsigned m = 2 * forms.k - 1;
  std::vector<cpp_int> lhs(m + 1, 0), rhs(m + 1, 0);
  // (1-x)^m by repeated multiplication
  lhs[0] = 1;
  for (unsigned i = 0; i < m; ++i) {
    for (unsigned j = i + 1; j > 0; --j) lhs[j] -= lhs[j - 1];
  }
  for (std::size_t j = 0; j < forms.P0.size(); ++j) rhs[j] += forms.P0[j];
  for (std::size_t j = 0; j < forms.Q0.size(); ++j) rhs[j + forms.k] -= forms.Q0[j];
  return lhs == rhs;
}

Poly HRForms::P0_poly(const Field& field) const { return from_integers(field, P0); }
Poly HRForms::Q0_poly(const Field& field) const { return from_integers(field, Q0); }

bool hr_identity_mod(const HRForms& forms, unsigned p) {
  const Field& field = make_field(p, 1);
  const Poly one_minus_x = Poly::constant(field, 1) - Poly::x(field);
  const Poly lhs = pow(one_minus_x, 2 * forms.k - 1);
  const Poly rhs = forms.P0_poly(field) - Poly::monomial(field, 1, forms.k) * forms.Q0_poly(field);
  return lhs == rhs;
}

namespace {

Poly eval_form(const std::vector<cpp_int>& c, unsigned k, const Poly& G1, const Poly& G2) {
  require_same_field(G1, G2);
  const Field& field = G1.field();
  Poly sum(field);
  for (unsigned j = 0; j < k; ++j) {
    sum += pow(G1, k - 1 - j) * pow(G2, j) * Poly::constant(field, reduce(field, c[j]));
  }
  return sum;
}

}  // namespace

Poly hr_P(const HRForms& forms, const Poly& G1, const Poly& G2) { return eval_form(forms.P0, forms.k, G1, G2); }
Poly hr_Q(const HRForms& forms, const Poly& G1, const Poly& G2) { return eval_form(forms.Q0, forms.k, G1, G2); }

bool verify_hr_identity(const HRForms& forms, const Poly& G1, const Poly& G2) {
  const unsigned k = forms.k;
  const Poly lhs = pow(G1 - G2, 2 * k - 1);
  const Poly rhs = pow(G1, k) * hr_P(forms, G1, G2) - pow(G2, k) * hr_Q(forms, G1, G2);
  return lhs == rhs;
}

std::uint64_t divided_difference_term_count(unsigned k) {
  std::uint64_t count = 0;
  for (unsigned a = 0; a < k; ++a)
    for (unsigned b = 0; b < k; ++b)
      if (a + b <= 2 * k - 2 && 2 * k - 2 - a - b < k) ++count;
  return count;
}

bool verify_divided_difference_identity(unsigned k, const Poly& G1, const Poly& G2, const Poly& G3,
                                        const Poly& F) {
  if (k < 2) throw DomainError("k must be at least 2");
  require_same_field(G1, G2);
  require_same_field(G1, G3);
  require_same_field(G1, F);
  if (G1 == G2 || G1 == G3 || G2 == G3) throw DomainError("divided difference: G_i must be distinct");
  const Poly p1 = pow(G1, k), p2 = pow(G2, k), p3 = pow(G3, k);
  const Poly lhs = F * ((G3 - G2) * p2 * p3 + (G1 - G3) * p1 * p3 + (G2 - G1) * p1 * p2);

  std::vector<Poly> pw1{Poly::constant(G1.field(), 1)}, pw2 = pw1, pw3 = pw1;
  for (unsigned i = 1; i < k; ++i) {
    pw1.push_back(pw1.back() * G1);
    pw2.push_back(pw2.back() * G2);
    pw3.push_back(pw3.back() * G3);
  }
  Poly sym(G1.field());
  for (unsigned a = 0; a < k; ++a) {
    for (unsigned b = 0; b < k; ++b) {
      if (a + b > 2 * k - 2) continue;
      const unsigned c = 2 * k - 2 - a - b;
      if (c >= k) continue;
      sym += pw1[a] * pw2[b] * pw3[c];
    }
  }
  const Poly rhs = F * (G2 - G1) * (G3 - G1) * (G3 - G2) * sym;
  return lhs == rhs;
}

bool power_difference_degree_holds(const Poly& G, const Poly& H, unsigned k) {
  require_same_field(G, H);
  const int d = G.degree();
  if (k < 2 || G == H || H.degree() != d || (G - H).degree() >= d) {
    throw DomainError("power difference: need G != H of equal degree d with deg(G-H) < d");
  }
  const unsigned r = binomial_scan_r(k, G.field().p());
  return (pow(G, k) - pow(H, k)).degree() ==
         static_cast<int>(r) * (G - H).degree() + static_cast<int>(k - r) * d;
}

std::uint64_t SpacingGridSummary::total_violations() const {
  std::uint64_t t = 0;
  for (const auto& [name, count] : violations) t += count;
  return t;
}

namespace {

struct GridCell {
  std::uint32_t q;
  unsigned k;
  int n;
};

void absorb(SpacingGridSummary& into, const SpacingReport& rep) {
  ++into.reports[rep.check];
  auto& v = into.violations[rep.check];
  v += rep.violations.size();
  for (const auto& row : rep.rows) {
    if (row.triples == TripleMode::sampled) ++into.sampled_triple_rows;
    into.pairs_far += row.pairs_far;
    into.pairs_close += row.pairs_close;
  }
  for (const auto& viol : rep.violations) {
    if (into.examples.size() < 16) into.examples.push_back(viol);
  }
}

SpacingGridSummary run_cell(const GridCell& cell, const SpacingGridConfig& config) {
  SpacingGridSummary out;
  const Field& field = make_field_of_order(cell.q);
  const std::uint64_t cell_seed =
      mix_seed(config.seed, (static_cast<std::uint64_t>(cell.q) << 32) | (cell.k << 16) | cell.n);
  for (unsigned s = 0; s < config.samples; ++s) {
    const std::uint64_t seed = mix_seed(cell_seed, s);
    PortableRng rng(seed);
    const DivisorProfile profile(random_monic(field, cell.n, rng), cell.k);
    const unsigned r = binomial_scan_r(cell.k, field.p());
    for (int h = 0; static_cast<long>(cell.k) * h < cell.n; ++h) {
      absorb(out, verify_prop_pair_spacing(profile, h, seed));
      if (triple_applicable(field, cell.k) || r == cell.k) absorb(out, verify_prop_triple_spacing(profile, h, seed));
      if (hr_applicable(field, cell.k, cell.n, h)) absorb(out, verify_hr_bound(profile, h, seed));
    }
  }
  return out;
}

}  // namespace

SpacingGridSummary run_spacing_grid(const SpacingGridConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  SpacingGridSummary summary;
  summary.seed = config.seed;
  std::vector<GridCell> cells;
  for (auto q : config.qs) {
    const Field& field = make_field_of_order(q);
    for (auto k : config.ks) {
      if (k < 2) throw DomainError("spacing grid: k must be at least 2");
      for (int n = static_cast<int>(k) + 1; n <= config.n_max; ++n) {
        if (spacing_enumerable(field, k, n)) {
          cells.push_back({q, k, n});
        } else {
          ++summary.skipped_cells;
        }
      }
    }
  }
  std::vector<SpacingGridSummary> parts(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) parts[i] = run_cell(cells[i], config);
  };
  const unsigned workers = std::max(1u, config.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  summary.cells = cells.size();
  for (const auto& part : parts) {
    for (const auto& [name, c] : part.reports) summary.reports[name] += c;
    for (const auto& [name, c] : part.violations) summary.violations[name] += c;
    summary.sampled_triple_rows += part.sampled_triple_rows;
    summary.pairs_far += part.pairs_far;
    summary.pairs_close += part.pairs_close;
    for (const auto& v : part.examples) {
      if (summary.examples.size() < 16) summary.examples.push_back(v);
    }
  }
  summary.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

nlohmann::json to_json(const SpacingReport& report) {
  nlohmann::json j;
  j["check"] = report.check;
  j["q"] = report.field->q();
  j["k"] = report.k;
  j["n"] = report.n;
  j["h"] = report.h;
  j["F"] = to_text(report.F);
  j["seed"] = report.seed;
  j["r"] = report.r;
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"d", row.d},
                    {"set_size", row.set_size},
                    {"min_pair_gap", row.min_pair_gap ? nlohmann::json(*row.min_pair_gap) : nlohmann::json()},
                    {"min_triple_spread",
                     row.min_triple_spread ? nlohmann::json(*row.min_triple_spread) : nlohmann::json()},
                    {"triples", to_string(row.triples)},
                    {"pairs_far", row.pairs_far},
                    {"pairs_close", row.pairs_close},
                    {"lemma_checked", row.lemma_checked},
                    {"hr_checked", row.hr_checked}});
  }
  auto& viol = j["violations"] = nlohmann::json::array();
  for (const auto& v : report.violations) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& g : v.witnesses) w.push_back(to_text(g));
    viol.push_back({{"check", v.check}, {"d", v.d}, {"witnesses", w}, {"detail", v.detail}});
  }
  j["clean"] = report.clean();
  return j;
}

nlohmann::json to_json(const SpacingGridSummary& s) {
  nlohmann::json j;
  j["seed"] = s.seed;
  j["cells"] = s.cells;
  j["skipped_cells"] = s.skipped_cells;
  j["reports"] = s.reports;
  j["violations"] = s.violations;
  j["total_violations"] = s.total_violations();
  j["sampled_triple_rows"] = s.sampled_triple_rows;
  j["pairs_far"] = s.pairs_far;
  j["pairs_close"] = s.pairs_close;
  auto& ex = j["examples"] = nlohmann::json::array();
  for (const auto& v : s.examples) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& g : v.witnesses) w.push_back(to_text(g));
    ex.push_back({{"check", v.check}, {"d", v.d}, {"witnesses", w}, {"detail", v.detail}});
  }
  j["elapsed_ms"] = s.elapsed_ms;
  return j;
}

}  // namespace kfree
