#include "kfree/irreducibles.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "kfree/error.hpp"

namespace kfree {
namespace {

int moebius(int n) {
  int result = 1;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      n /= d;
      if (n % d == 0) return 0;
      result = -result;
    }
  }
  if (n > 1) result = -result;
  return result;
}

__int128 checked_power(std::uint64_t q, int e) {
  __int128 r = 1;
  for (int i = 0; i < e; ++i) {
    r *= q;
    if (r > (static_cast<__int128>(1) << 63)) throw std::overflow_error("q^d exceeds 63 bits");
  }
  return r;
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

int decimal_width(std::uint32_t v) {
  int w = 1;
  while (v >= 10) {
    v /= 10;
    ++w;
  }
  return w;
}

std::string modulus_text(const Field& k) {
  std::string s;
  for (std::size_t i = 0; i < k.modulus().size(); ++i) {
    if (i) s.push_back(',');
    s += std::to_string(k.modulus()[i]);
  }
  return s;
}

std::string record(const Poly& g, int width) {
  std::ostringstream os;
  for (Elem c : g.coeffs()) os << std::setw(width) << std::setfill('0') << c;
  return os.str();
}

constexpr const char* kMagic = "kfree-irreducibles";
constexpr int kFormatVersion = 1;

}  // namespace

std::uint64_t count_irreducibles(const Field& field, int d) {
  if (d < 1) throw DomainError("count_irreducibles: degree must be positive");
  __int128 sum = 0;
  for (int e = 1; e <= d; ++e) {
    if (d % e) continue;
    const int mu = moebius(e);
    if (mu) sum += mu * checked_power(field.q(), d / e);
  }
  return static_cast<std::uint64_t>(sum / d);
}

bool is_irreducible(const Poly& f) {
  const int n = f.degree();
  if (n < 1) return false;
  if (n == 1) return true;
  const Field& k = f.field();
  const Poly x = Poly::x(k);
  Poly xq = x % f;
  for (int i = 1; i <= n / 2; ++i) {
    xq = pow_mod(xq, k.q(), f);
    if (!gcd(f, xq - x).is_one()) return false;
  }
  return true;
}

std::vector<Poly> enumerate_irreducibles(const Field& field, int d) {
  if (d < 1) throw DomainError("enumerate_irreducibles: degree must be positive");
  const std::uint64_t total = static_cast<std::uint64_t>(checked_power(field.q(), d));
  std::vector<Poly> out;
  out.reserve(count_irreducibles(field, d));
  for (std::uint64_t t = 0; t < total; ++t) {
    // Nonzero constant term is necessary past degree 1.
    if (d > 1 && t % field.q() == 0) continue;
    Poly g = Poly::monic_from_index(field, d, t);
    if (is_irreducible(g)) out.push_back(std::move(g));
  }
  return out;
}

IrreducibleTable::IrreducibleTable(const Field& field, std::optional<std::filesystem::path> cache_root)
    : field_(&field), cache_root_(std::move(cache_root)) {}

std::filesystem::path IrreducibleTable::cache_file(int d) const {
  if (!cache_root_) throw std::logic_error("table has no cache root");
  return *cache_root_ / ("q" + std::to_string(field_->q())) / ("irred_d" + std::to_string(d) + ".tbl");
}

const std::vector<Poly>& IrreducibleTable::of_degree(int d) {
  if (d < 1) throw DomainError("irreducible table: degree must be positive");
  std::lock_guard lock(mu_);
  if (auto it = by_degree_.find(d); it != by_degree_.end()) return it->second;
  std::optional<std::vector<Poly>> list;
  if (cache_root_) list = load(d);
  if (!list) {
    list = enumerate_irreducibles(*field_, d);
    if (cache_root_) store(d, *list);
  }
  return by_degree_.emplace(d, std::move(*list)).first->second;
}

const Poly& IrreducibleTable::nth(std::uint64_t j) {
  if (j < 1) throw DomainError("nth_irreducible: index is 1-based");
  std::uint64_t before = 0;
  for (int d = 1;; ++d) {
    const std::uint64_t c = count_irreducibles(*field_, d);
    if (j <= before + c) return of_degree(d)[j - before - 1];
    before += c;
  }
}

std::optional<std::vector<Poly>> IrreducibleTable::load(int d) const {
  std::ifstream in(cache_file(d));
  if (!in) return std::nullopt;
  std::string magic, key;
  int version = 0;
  std::uint32_t p = 0, f = 0;
  std::string modulus;
  int deg = 0, width = 0;
  std::uint64_t count = 0;
  std::string checksum;
  in >> magic >> version;
  in >> key >> p >> key >> f >> key >> modulus;
  in >> key >> deg >> key >> count >> key >> width >> key >> checksum;
  if (!in || magic != kMagic || version != kFormatVersion || p != field_->p() || f != field_->f() ||
      modulus != modulus_text(*field_) || deg != d || width != decimal_width(field_->q() - 1) ||
      count != count_irreducibles(*field_, d)) {
    return std::nullopt;
  }
  std::vector<Poly> list;
  std::string body, line;
  while (in >> line) {
    if (line.size() != static_cast<std::size_t>(width) * (d + 1)) return std::nullopt;
    body += line;
    body.push_back('\n');
    std::vector<Elem> coeffs(d + 1);
    for (int i = 0; i <= d; ++i) {
      const std::uint32_t v = std::stoul(line.substr(static_cast<std::size_t>(i) * width, width));
      if (v >= field_->q()) return std::nullopt;
      coeffs[i] = v;
    }
    list.emplace_back(*field_, std::move(coeffs));
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a(body);
  if (hex.str() != checksum || list.size() != count) return std::nullopt;
  return list;
}

void IrreducibleTable::store(int d, const std::vector<Poly>& list) const {
  const auto path = cache_file(d);
  std::filesystem::create_directories(path.parent_path());
  const int width = decimal_width(field_->q() - 1);
  std::string body;
  for (const auto& g : list) {
    body += record(g, width);
    body.push_back('\n');
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a(body);

  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << kMagic << ' ' << kFormatVersion << '\n'
        << "p " << field_->p() << " f " << field_->f() << " modulus " << modulus_text(*field_) << '\n'
        << "d " << d << " count " << list.size() << " width " << width << " checksum " << hex.str()
        << '\n'
        << body;
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

std::mutex shared_mu;
std::optional<std::filesystem::path> shared_root;

}  // namespace

void set_shared_cache_root(std::optional<std::filesystem::path> root) {
  std::lock_guard lock(shared_mu);
  shared_root = std::move(root);
}

IrreducibleTable& irreducible_table(const Field& field) {
  static std::map<const Field*, std::unique_ptr<IrreducibleTable>> tables;
  std::lock_guard lock(shared_mu);
  auto& slot = tables[&field];
  if (!slot) slot = std::make_unique<IrreducibleTable>(field, shared_root);
  return *slot;
}

Poly nth_irreducible(const Field& field, std::uint64_t j) { return irreducible_table(field).nth(j); }

std::optional<std::filesystem::path> cache_root_from_env() {
  if (const char* env = std::getenv("KFREE_CACHE_DIR"); env && *env) return std::filesystem::path(env);
  return std::nullopt;
}

DegreeSlackReport degree_of_nth_bound_check(const Field& field, std::uint64_t j_max) {
  if (j_max < 3) throw DomainError("degree_of_nth_bound_check: j_max must be at least 3");
  const double lq = std::log(static_cast<double>(field.q()));
  auto logq = [lq](double v) { return std::log(v) / lq; };
  DegreeSlackReport report{{}, -INFINITY, 0};
  auto& table = irreducible_table(field);
  for (std::uint64_t j = 3; j <= j_max; ++j) {
    const int deg = table.nth(j).degree();
    const double lj = logq(static_cast<double>(j));
    const double estimate = lj + logq(lj) + logq(field.q() - 1.0);
    const double slack = deg - estimate;
    report.rows.push_back({j, deg, estimate, slack});
    if (slack > report.max_slack) {
      report.max_slack = slack;
      report.argmax_j = j;
    }
  }
  return report;
}

}  // namespace kfree
