#include "kfree/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "kfree/bounds.hpp"
#include "kfree/error.hpp"
#include "kfree/gap_builder.hpp"
#include "kfree/intervals.hpp"
#include "kfree/irreducibles.hpp"
#include "kfree/poly_text.hpp"
#include "kfree/spacing_lab.hpp"

#ifndef KFREE_VERSION
#define KFREE_VERSION "unknown"
#endif

namespace kfree::cli {
namespace {

using nlohmann::json;

struct Config {
  std::string command;
  std::string format = "text";
  std::string cache;
  unsigned workers = 1;
  std::uint64_t seed = 1;
  std::uint64_t budget = std::uint64_t{1} << 26;

  std::vector<std::uint32_t> qs;
  std::vector<unsigned> ks;
  std::vector<int> hs;
  std::uint32_t q = 0;
  unsigned k = 2;
  int h = -1;
  int n = -1;
  int n_max = 14;
  unsigned samples = 200;
  int d_max = 8;
  double ell = -1;
  bool golden = false;
  std::string formula = "auto";
  std::string out_path;
  std::string file;
  std::string center;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json config_json(const Config& c) {
  json j{{"format", c.format}, {"workers", c.workers}, {"seed", c.seed}, {"budget", c.budget}};
  if (!c.cache.empty()) j["cache"] = c.cache;
  const std::string& cmd = c.command;
  if (cmd == "table1") {
    j["q"] = c.qs;
    j["h"] = c.hs;
    j["k"] = c.k;
    j["golden"] = c.golden;
  } else if (cmd == "spacing") {
    j["q"] = c.qs;
    j["k"] = c.ks;
    j["n_max"] = c.n_max;
    j["samples"] = c.samples;
  } else if (cmd == "verify-gap") {
    j["file"] = c.file;
  } else {
    j["q"] = c.q;
    j["k"] = c.k;
    if (c.h >= 0) j["h"] = c.h;
    if (c.n >= 0) j["n"] = c.n;
    if (cmd == "count") j["center"] = c.center;
    if (cmd == "bounds") {
      j["formula"] = c.formula;
      if (c.ell >= 0) j["ell"] = c.ell;
    }
    if (cmd == "gap" && !c.out_path.empty()) j["out"] = c.out_path;
    if (cmd == "irred-cache") j["d_max"] = c.d_max;
  }
  return j;
}

json header_json(const Config& c) {
  return {{"version", KFREE_VERSION}, {"command", c.command}, {"config", config_json(c)}};
}

// Text and CSV output start with a comment line carrying the same header.
void text_header(const Config& c, std::ostream& out) {
  out << "# kfree " << KFREE_VERSION << ' ' << c.command << ' ' << config_json(c).dump() << '\n';
}

void emit_json(const Config& c, json result, std::ostream& out) {
  json doc{{"kfree", header_json(c)}, {"result", std::move(result)}};
  out << doc.dump(2) << '\n';
}

const Field& field_of(std::uint32_t q) {
  const auto [p, f] = prime_power_split(q);
  if (p == 0) throw UsageError(std::to_string(q) + " is not a prime power");
  if (q > Field::kMaxOrder) throw UsageError("q = " + std::to_string(q) + " exceeds 2^16");
  return make_field(p, f);
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw UsageError(msg);
}

int cmd_table1(const Config& c, std::ostream& out, std::ostream& err) {
  require(c.k >= 2, "--k must be at least 2");
  if (c.golden) {
    require(c.k == 2, "--golden compares the k = 2 table");
    const auto golden = golden_table1();
    std::vector<json> mismatches;
    std::size_t matched = 0, nondash = 0;
    std::vector<N0Cell> cells;
    for (const auto& g : golden) {
      const N0Cell cell = n0_cell(field_of(g.q), 2, g.h);
      cells.push_back(cell);
      if (g.text != "-") ++nondash;
      if (cell.text() == g.text) {
        ++matched;
      } else {
        mismatches.push_back({{"q", g.q}, {"h", g.h}, {"expected", g.text}, {"got", cell.text()}});
      }
    }
    const bool ok = mismatches.empty();
    if (c.format == "json") {
      emit_json(c, {{"cells", golden.size()}, {"matched", matched}, {"entries", nondash}, {"mismatches", mismatches},
                    {"pass", ok}},
                out);
    } else {
      text_header(c, out);
      out << n0_table_csv(cells);
      out << "# golden: " << matched << '/' << golden.size() << " cells match (" << nondash << " entries, "
          << golden.size() - nondash << " dashes)\n";
      for (const auto& m : mismatches) {
        err << "mismatch q=" << m["q"] << " h=" << m["h"] << ": expected " << m["expected"].get<std::string>()
            << ", got " << m["got"].get<std::string>() << '\n';
      }
    }
    return ok ? kOk : kFailure;
  }

  std::vector<std::uint32_t> qs = c.qs.empty() ? table1_columns() : c.qs;
  std::vector<int> hs = c.hs;
  if (hs.empty()) {
    for (int h = 1; h <= 8; ++h) hs.push_back(h);
  }
  for (auto q : qs) field_of(q);
  for (int h : hs) require(h >= 1, "--h must be at least 1");
  std::vector<N0Cell> cells;
  for (int h : hs)
    for (auto q : qs) cells.push_back(n0_cell(field_of(q), c.k, h));

  if (c.format == "json") {
    json arr = json::array();
    for (const auto& cell : cells) arr.push_back(to_json(cell));
    emit_json(c, arr, out);
  } else if (c.format == "text" && cells.size() == 1) {
    text_header(c, out);
    out << cells.front().text() << '\n';
  } else {
    text_header(c, out);
    out << n0_table_csv(cells);
  }
  return kOk;
}

// Work is counted as q^n factorizations weighted by the degree n.
std::optional<std::uint64_t> scan_work(std::uint32_t q, int n) {
  try {
    const std::uint64_t members = checked_pow(q, n);
    if (members > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(n)) return std::nullopt;
    return members * static_cast<std::uint64_t>(n);
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

int refuse(const Config& c, const std::string& what, std::optional<std::uint64_t> work, std::ostream& out,
           std::ostream& err) {
  const std::string estimate = work ? std::to_string(*work) : std::string("more than 2^64");
  err << "refused: " << what << " needs an estimated " << estimate << " work units, budget is " << c.budget
      << " (raise with --budget)\n";
  if (c.format == "json") {
    emit_json(c, {{"refused", true}, {"estimated_work", work ? json(*work) : json("overflow")}, {"budget", c.budget}},
              out);
  }
  return kBudget;
}

int report_gap(const Config& c, const GapCertificate& cert, const GapVerification& v, std::ostream& out,
               std::ostream& err) {
  if (c.format == "json") {
    emit_json(c, {{"certificate", to_json(cert)}, {"verified", v.ok}, {"failures", v.failures}}, out);
  } else {
    text_header(c, out);
    out << "field " << cert.field->name() << " k=" << cert.k << " h=" << cert.h << '\n'
        << "congruences " << cert.assignments.size() << '\n'
        << "deg M " << cert.M.degree() << '\n'
        << "F " << to_text(cert.F) << '\n'
        << "centre " << to_text(cert.lifted_center()) << '\n'
        << (v.ok ? "verified" : "REJECTED") << '\n';
  }
  for (const auto& f : v.failures) err << "verify: " << f << '\n';
  return v.ok ? kOk : kFailure;
}

int cmd_gap(const Config& c, std::ostream& out, std::ostream& err) {
  require(c.k >= 2, "--k must be at least 2");
  require(c.h >= 0, "--h must be nonnegative");
  const Field& field = field_of(c.q);
  const auto work = scan_work(field.q(), c.h + 1);
  if (!work || *work > c.budget) return refuse(c, "gap", work, out, err);
  const GapCertificate built = build_gap_interval(field, c.k, c.h);
  const std::string text = to_json(built).dump(2) + "\n";
  if (!c.out_path.empty()) {
    std::ofstream f(c.out_path, std::ios::trunc);
    f << text;
    if (!f) {
      err << "cannot write " << c.out_path << '\n';
      return kFailure;
    }
  }
  // Verify what was saved, not the in-memory object.
  const GapCertificate loaded = certificate_from_json(json::parse(text));
  GapVerification v = verify_gap_certificate(loaded);
  if (to_json(loaded).dump(2) + "\n" != text) {
    v.ok = false;
    v.failures.push_back("certificate does not round-trip through JSON");
  }
  return report_gap(c, loaded, v, out, err);
}

int cmd_verify_gap(const Config& c, std::ostream& out, std::ostream& err) {
  std::ifstream in(c.file);
  if (!in) {
    err << "cannot read " << c.file << '\n';
    return kFailure;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  std::optional<GapCertificate> cert;
  try {
    cert = certificate_from_json(json::parse(buf.str()));
  } catch (const std::exception& e) {
    err << "invalid certificate: " << e.what() << '\n';
    return kFailure;
  }
  return report_gap(c, *cert, verify_gap_certificate(*cert), out, err);
}

int cmd_scan(const Config& c, std::ostream& out, std::ostream& err) {
  require(c.k >= 2, "--k must be at least 2");
  require(c.n >= 3, "--n must be at least 3");
  require(c.h >= 1 && c.h <= c.n - 2, "need 1 <= h <= n - 2");
  const Field& field = field_of(c.q);
  const auto work = scan_work(field.q(), c.n);
  if (!work || *work > c.budget) return refuse(c, "scan", work, out, err);
  const CertifyReport report = certify_all_intervals(field, c.n, c.h, c.k, c.workers);
  if (c.format == "json") {
    emit_json(c, to_json(report), out);
  } else {
    text_header(c, out);
    if (c.format == "csv") {
      out << "q,p,f,k,n,h,pass,counterexample_center,elapsed_ms\n"
          << report.q << ',' << report.p << ',' << report.f << ',' << report.k << ',' << report.n << ','
          << report.h << ',' << (report.pass ? "true" : "false") << ','
          << (report.counterexample_center ? to_text(*report.counterexample_center) : "") << ','
          << report.elapsed_ms << '\n';
    } else {
      out << "scan " << field.name() << " k=" << c.k << " n=" << c.n << " h=" << c.h << ": "
          << (report.pass ? "pass" : "FAIL") << " (" << report.intervals << " intervals)\n";
      if (report.counterexample_center) {
        out << "counterexample centre " << to_text(*report.counterexample_center) << " ("
            << to_pretty(*report.counterexample_center) << ")\n";
      }
    }
  }
  return report.pass ? kOk : kFailure;
}

int cmd_count(const Config& c, std::ostream& out, std::ostream& err) {
  require(c.k >= 2, "--k must be at least 2");
  const Field& field = field_of(c.q);
  Poly center(field);
  try {
    center = parse_poly(field, c.center);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--center: ") + e.what());
  }
  require(center.is_monic(), "--center must be monic");
  require(c.h >= 0 && c.h < center.degree(), "need 0 <= h < deg centre");
  const auto work = scan_work(field.q(), c.h + 1);
  if (!work || *work > c.budget) return refuse(c, "count", work, out, err);
  const Interval iv(center, c.h);
  const KFreeCount count = count_non_k_free(iv, c.k);
  if (c.format == "json") {
    emit_json(c, {{"center", to_text(center)}, {"h", c.h}, {"k", c.k}, {"non_k_free", count.non_k_free},
                  {"k_free", count.k_free}},
              out);
  } else {
    text_header(c, out);
    if (c.format == "csv") {
      out << "center,h,k,non_k_free,k_free\n"
          << to_text(center) << ',' << c.h << ',' << c.k << ',' << count.non_k_free << ',' << count.k_free << '\n';
    } else {
      out << "non-k-free " << count.non_k_free << "\nk-free " << count.k_free << '\n';
    }
  }
  return kOk;
}

int cmd_spacing(const Config& c, std::ostream& out, std::ostream&) {
  SpacingGridConfig grid;
  if (!c.qs.empty()) grid.qs = c.qs;
  if (!c.ks.empty()) grid.ks = c.ks;
  for (auto q : grid.qs) field_of(q);
  for (auto k : grid.ks) require(k >= 2, "--k must be at least 2");
  grid.n_max = c.n_max;
  grid.samples = c.samples;
  grid.seed = c.seed;
  grid.workers = c.workers;
  const SpacingGridSummary s = run_spacing_grid(grid);
  if (c.format == "json") {
    emit_json(c, to_json(s), out);
  } else {
    text_header(c, out);
    if (c.format == "csv") {
      out << "check,reports,violations\n";
      for (const auto& [name, count] : s.reports) out << name << ',' << count << ',' << s.violations.at(name) << '\n';
    } else {
      out << "cells " << s.cells << " (skipped " << s.skipped_cells << " too large to enumerate)\n";
      for (const auto& [name, count] : s.reports) {
        out << name << ": " << count << " reports, " << s.violations.at(name) << " violations\n";
      }
      out << "pair branches: " << s.pairs_far << " far, " << s.pairs_close << " close\n";
      for (const auto& v : s.examples) {
        out << "violation " << v.check << " d=" << v.d << ' ' << v.detail;
        for (const auto& w : v.witnesses) out << ' ' << to_text(w);
        out << '\n';
      }
    }
  }
  return s.total_violations() == 0 ? kOk : kFailure;
}

int cmd_bounds(const Config& c, std::ostream& out, std::ostream&) {
  const Field& field = field_of(c.q);
  require(c.h >= 1, "--h must be at least 1");
  require(c.n >= 0, "--n is required");
  BoundBreakdown b;
  const std::string& f = c.formula;
  if (f == "squarefree" || (f == "auto" && c.k == 2)) {
    require(c.k == 2, "the squarefree coefficient needs k = 2");
    b = squarefree_coefficient(field, c.n, c.h);
  } else if (f == "kfree" || f == "auto") {
    b = kfree_coefficient(field, c.k, c.n, c.h);
  } else if (f == "theorem-k") {
    b = theorem_k_coefficient(field, c.k, c.n, c.h);
  } else {
    b = sigma_bounds(field, c.k, c.n, c.h, c.ell < 0 ? c.h : c.ell);
  }
  if (c.format == "json") {
    emit_json(c, to_json(b), out);
  } else {
    text_header(c, out);
    if (c.format == "csv") {
      out << "formula,q,p,k,n,h,ell,sigma1,sigma2,sigma3,total_coefficient,below_one\n"
          << b.formula << ',' << b.q << ',' << b.p << ',' << b.k << ',' << b.n << ',' << b.h << ',' << b.ell << ','
          << b.sigma1 << ',' << b.sigma2 << ',' << b.sigma3 << ',' << b.total_coefficient << ','
          << (b.below_one ? "true" : "false") << '\n';
    } else {
      out << b.formula << " coefficient " << b.total_coefficient << (b.below_one ? " < 1" : " >= 1") << '\n'
          << "sigma1 " << b.sigma1 << (b.sigma1_empty ? " (empty)" : "") << "\nsigma2 " << b.sigma2 << "\nsigma3 "
          << b.sigma3 << '\n';
    }
  }
  return kOk;
}

int cmd_irred_cache(const Config& c, const std::optional<std::filesystem::path>& root, std::ostream& out,
                    std::ostream&) {
  require(root.has_value(), "irred-cache needs --cache or KFREE_CACHE_DIR");
  require(c.d_max >= 1, "--d-max must be at least 1");
  const Field& field = field_of(c.q);
  IrreducibleTable table(field, root);
  json rows = json::array();
  bool ok = true;
  for (int d = 1; d <= c.d_max; ++d) {
    const std::uint64_t count = table.count(d);
    const bool match = count == count_irreducibles(field, d);
    ok = ok && match;
    rows.push_back({{"d", d}, {"count", count}, {"file", table.cache_file(d).string()}, {"count_matches", match}});
  }
  if (c.format == "json") {
    emit_json(c, rows, out);
  } else {
    text_header(c, out);
    if (c.format == "csv") out << "d,count,file\n";
    for (const auto& r : rows) {
      if (c.format == "csv") {
        out << r["d"] << ',' << r["count"] << ',' << r["file"].get<std::string>() << '\n';
      } else {
        out << "d=" << r["d"] << " count=" << r["count"] << ' ' << r["file"].get<std::string>() << '\n';
      }
    }
  }
  return ok ? kOk : kFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"k-free polynomials in short intervals over finite fields", "kfree"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", KFREE_VERSION);
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
  app.add_option("--cache", c.cache, "Irreducible table cache root (default: $KFREE_CACHE_DIR)");
  app.add_option("--workers", c.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--seed", c.seed, "Random seed");
  app.add_option("--budget", c.budget, "Work budget for exhaustive scans");

  auto* table1 = app.add_subcommand("table1", "n0(q,h) table");
  table1->add_option("--q", c.qs, "Field orders")->delimiter(',');
  table1->add_option("--h", c.hs, "Interval lengths")->delimiter(',');
  table1->add_option("--k", c.k, "Power");
  table1->add_flag("--golden", c.golden, "Compare with the embedded golden table");

  auto* gap = app.add_subcommand("gap", "Build, save and verify a gap certificate");
  gap->add_option("--q", c.q, "Field order")->required();
  gap->add_option("--k", c.k, "Power");
  gap->add_option("--h", c.h, "Interval length")->required();
  gap->add_option("--out", c.out_path, "Certificate file");

  auto* verify = app.add_subcommand("verify-gap", "Verify a saved gap certificate");
  verify->add_option("file", c.file, "Certificate file")->required();

  auto* scan = app.add_subcommand("scan", "Check every interval of length h in degree n");
  scan->add_option("--q", c.q, "Field order")->required();
  scan->add_option("--k", c.k, "Power");
  scan->add_option("--h", c.h, "Interval length")->required();
  scan->add_option("--n", c.n, "Degree")->required();

  auto* count = app.add_subcommand("count", "Count non-k-free members of one interval");
  count->add_option("--q", c.q, "Field order")->required();
  count->add_option("--k", c.k, "Power");
  count->add_option("--h", c.h, "Interval length")->required();
  count->add_option("--center", c.center, "Centre in text encoding")->required();

  auto* spacing = app.add_subcommand("spacing", "Randomized spacing grid");
  spacing->add_option("--q", c.qs, "Field orders")->delimiter(',');
  spacing->add_option("--k", c.ks, "Powers")->delimiter(',');
  spacing->add_option("--n-max", c.n_max, "Largest degree");
  spacing->add_option("--samples", c.samples, "Random centres per cell");

  auto* bounds = app.add_subcommand("bounds", "Evaluate an explicit coefficient");
  bounds->add_option("--q", c.q, "Field order")->required();
  bounds->add_option("--k", c.k, "Power");
  bounds->add_option("--n", c.n, "Degree")->required();
  bounds->add_option("--h", c.h, "Interval length")->required();
  bounds->add_option("--formula", c.formula, "auto, squarefree, kfree, theorem-k or sigma")
      ->check(CLI::IsMember({"auto", "squarefree", "kfree", "theorem-k", "sigma"}));
  bounds->add_option("--ell", c.ell, "Degree cutoff for --formula sigma");

  auto* irred = app.add_subcommand("irred-cache", "Fill the irreducible table cache");
  irred->add_option("--q", c.q, "Field order")->required();
  irred->add_option("--d-max", c.d_max, "Largest degree");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  c.command = app.get_subcommands().front()->get_name();

  std::optional<std::filesystem::path> root;
  if (!c.cache.empty()) {
    root = c.cache;
  } else {
    root = cache_root_from_env();
  }
  set_shared_cache_root(root);

  try {
    if (c.command == "table1") return cmd_table1(c, out, err);
    if (c.command == "gap") return cmd_gap(c, out, err);
    if (c.command == "verify-gap") return cmd_verify_gap(c, out, err);
    if (c.command == "scan") return cmd_scan(c, out, err);
    if (c.command == "count") return cmd_count(c, out, err);
    if (c.command == "spacing") return cmd_spacing(c, out, err);
    if (c.command == "bounds") return cmd_bounds(c, out, err);
    return cmd_irred_cache(c, root, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const BudgetExceeded& e) {
    err << "refused: " << e.what() << '\n';
    return kBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace kfree::cli
