// Command-line surface for the extremal-function, isoperimetry and witness
// machinery. Exit codes: 0 success, 1 usage error, 2 honest search failure,
// 3 budget exceeded, 4 counterexample found.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bes/compression.hpp"
#include "bes/extremal.hpp"
#include "bes/lattice.hpp"
#include "bes/serialize.hpp"
#include "bes/svg.hpp"
#include "bes/triple_system.hpp"
#include "bes/witness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotFound = 2;
constexpr int kExitBudget = 3;
constexpr int kExitCounterexample = 4;

struct RunConfig {
  std::uint64_t node_budget = 2'000'000'000ull;
  int worker_count = 1;
  std::int64_t window_radius = 3;
  std::uint64_t seed = 1;
  std::string output_format = "json";
  std::string out_path;
};

void emit(const RunConfig& cfg, const std::string& body) {
  if (cfg.out_path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(cfg.out_path);
  if (!f) throw std::runtime_error("cannot open output file: " + cfg.out_path);
  f << body;
}

// zn:<n>, zqm:<q>:<m>, or table:<path to a JSON Cayley table>
bes::GroupSpec parse_group(const std::string& s) {
  if (s.rfind("zn:", 0) == 0)
    return bes::GroupSpec::cyclic(std::stoll(s.substr(3)));
  if (s.rfind("zqm:", 0) == 0) {
    const auto rest = s.substr(4);
    const auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("group spec: expected zqm:<q>:<m>");
    return bes::GroupSpec::power(std::stoll(rest.substr(0, colon)),
                                 std::stoll(rest.substr(colon + 1)));
  }
  if (s.rfind("table:", 0) == 0) {
    std::ifstream f(s.substr(6));
    if (!f) throw std::invalid_argument("group spec: cannot read table file");
    bes::json j;
    f >> j;
    return bes::GroupSpec::table(j.get<std::vector<std::vector<bes::Elem>>>());
  }
  throw std::invalid_argument("group spec: expected zn:, zqm: or table:");
}

// "a..b" or a single integer
std::pair<std::int64_t, std::int64_t> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const std::int64_t v = std::stoll(s);
    return {v, v};
  }
  return {std::stoll(s.substr(0, dots)), std::stoll(s.substr(dots + 2))};
}

int cmd_g(const RunConfig& cfg, const std::string& range) {
  const auto [lo, hi] = parse_range(range);
  if (lo < 1 || hi < lo) {
    std::cerr << "g: invalid k range\n";
    return kExitUsage;
  }
  std::ostringstream out;
  if (cfg.output_format == "csv") {
    out << "k,g,ratio\n";
    for (std::int64_t k = lo; k <= hi; ++k)
      out << k << "," << bes::g_exact(k) << "," << bes::g_asymptotic_ratio(k)
          << "\n";
  } else {
    bes::json rows = bes::json::array();
    for (std::int64_t k = lo; k <= hi; ++k)
      rows.push_back({{"k", k},
                      {"g", bes::g_exact(k)},
                      {"ratio", bes::g_asymptotic_ratio(k)}});
    out << rows.dump(2) << "\n";
  }
  emit(cfg, out.str());
  return kExitOk;
}

int cmd_h(const RunConfig& cfg, std::int64_t a, std::int64_t b,
          std::int64_t ell, std::optional<std::int64_t> m) {
  std::ostringstream out;
  if (m) {
    const auto rec = bes::h_max(*m);
    bes::json j{{"m", *m},
                {"h_max", rec.h_value},
                {"argmax", {rec.argmax.a, rec.argmax.b, rec.argmax.ell}}};
    out << j.dump(2) << "\n";
  } else {
    if (a < 1 || b < 1 || ell < 0) {
      std::cerr << "h: need a, b >= 1 and ell >= 0 (or --m)\n";
      return kExitUsage;
    }
    bes::json j{{"a", a}, {"b", b}, {"ell", ell}, {"h", bes::h_interval(a, b, ell)}};
    out << j.dump(2) << "\n";
  }
  emit(cfg, out.str());
  return kExitOk;
}

int cmd_witness(const RunConfig& cfg, const std::string& group, std::int64_t k,
                const std::string& variant, const std::string& system_path,
                std::optional<bes::Elem> generator, bool reverify) {
  const bes::GroupSpec spec = parse_group(group);
  bes::TripleSystem S = [&] {
    if (system_path.empty()) return bes::full_system(spec);
    std::ifstream f(system_path);
    if (!f) throw std::invalid_argument("witness: cannot read system file");
    bes::json j;
    f >> j;
    return bes::triple_system_from_json(j);
  }();

  bes::PipelineConfig pcfg;
  pcfg.node_budget = cfg.node_budget;
  pcfg.workers = cfg.worker_count;
  pcfg.subgroup_generator = generator;
  const auto res = bes::witness_pipeline(S, k, variant, pcfg);
  if (res.status == bes::PipelineStatus::kPatternNotFound) {
    std::cerr << "witness: " << res.message << "\n";
    return kExitNotFound;
  }
  if (res.status == bes::PipelineStatus::kBudgetExceeded) {
    std::cerr << "witness: " << res.message << "\n";
    return kExitBudget;
  }
  const bes::json j = bes::to_json(S.spec(), res);
  if (reverify && !bes::reverify_witness(S, j, k)) {
    std::cerr << "witness: emitted certificate failed re-verification\n";
    return kExitCounterexample;
  }
  emit(cfg, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_isoperimetry(const RunConfig& cfg, std::int64_t k,
                     const std::string& mode) {
  std::ostringstream out;
  if (mode == "spiral") {
    const auto seq = bes::spiral_family(k);
    bes::json rows = bes::json::array();
    std::vector<bes::Point> acc;
    for (const auto& p : seq) {
      acc.push_back(p);
      const bes::PointSet ps(acc);
      rows.push_back({{"k", static_cast<std::int64_t>(acc.size())},
                      {"boundary", bes::edge_boundary(ps)},
                      {"g", bes::g_of_set(ps)}});
    }
    if (cfg.output_format == "svg") {
      emit(cfg, bes::point_set_svg(bes::PointSet(seq)));
      return kExitOk;
    }
    out << rows.dump(2) << "\n";
  } else if (mode == "brute" || mode == "uniqueness") {
    const std::int64_t cells =
        3 * cfg.window_radius * cfg.window_radius + 3 * cfg.window_radius + 1;
    std::cerr << "search space: subsets of size " << k << " from " << cells
              << " cells\n";
    const auto res =
        bes::min_boundary_brute(k, cfg.window_radius, bes::BoundaryMode::kDegreeSum,
                                cfg.node_budget, cfg.worker_count);
    if (mode == "brute") {
      bes::json j{{"k", k},
                  {"minimum", res.minimum},
                  {"witness_count",
                   static_cast<std::int64_t>(res.witnesses.size())}};
      out << j.dump(2) << "\n";
      if (cfg.output_format == "svg" && !res.witnesses.empty()) {
        emit(cfg, bes::point_set_svg(*res.witnesses.begin()));
        return kExitOk;
      }
    } else {
      bes::json sets = bes::json::array();
      for (const auto& w : res.witnesses) sets.push_back(bes::to_json(w));
      bes::json j{{"k", k}, {"minimum", res.minimum}, {"extremal_sets", sets}};
      out << j.dump(2) << "\n";
    }
  } else {
    std::cerr << "isoperimetry: mode must be spiral, brute or uniqueness\n";
    return kExitUsage;
  }
  emit(cfg, out.str());
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite) {
  std::ostringstream out;
  if (suite == "compression") {
    std::cerr << "search space: anchored subset pairs of [7] up to size 4, "
                 "ell <= 6\n";
    const auto rep = bes::verify_compression(7, 4, 6, cfg.worker_count);
    out << bes::to_json(rep).dump(2) << "\n";
    emit(cfg, out.str());
    return rep.ok() ? kExitOk : kExitCounterexample;
  }
  if (suite == "lowerbound") {
    const bool ok = bes::verify_lower_bound(64, 3);
    out << bes::json{{"suite", "lowerbound"}, {"n", 64}, {"k", 3}, {"pass", ok}}
               .dump(2)
        << "\n";
    emit(cfg, out.str());
    return ok ? kExitOk : kExitCounterexample;
  }
  if (suite == "claims") {
    bool ok = true;
    for (std::int64_t m = 3; m <= 300 && ok; ++m) {
      const auto rec = bes::h_max(m);
      for (std::int64_t c : {rec.argmax.a, rec.argmax.b, rec.argmax.ell})
        if (c < m / 3 || c > (m + 2) / 3) ok = false;
    }
    out << bes::json{{"suite", "claims"}, {"m_max", 300}, {"pass", ok}}.dump(2)
        << "\n";
    emit(cfg, out.str());
    return ok ? kExitOk : kExitCounterexample;
  }
  std::cerr << "verify: unknown suite (compression, lowerbound, claims)\n";
  return kExitUsage;
}

int cmd_lowerbound(const RunConfig& cfg, std::int64_t n, std::int64_t k) {
  const bool ok = bes::verify_lower_bound(n, k, cfg.node_budget);
  emit(cfg, bes::json{{"n", n}, {"k", k}, {"pass", ok}}.dump(2) + "\n");
  return ok ? kExitOk : kExitCounterexample;
}

int cmd_pattern(const RunConfig& cfg, const std::string& in_path,
                std::int64_t n, std::int64_t h) {
  bes::BitGrid C(n);
  std::ifstream f(in_path);
  if (!f) {
    std::cerr << "pattern: cannot read input file\n";
    return kExitUsage;
  }
  bes::json j;
  f >> j;
  for (const auto& e : j) {
    const std::int64_t x = e.at(0).get<std::int64_t>();
    const std::int64_t y = e.at(1).get<std::int64_t>();
    if (x < 0 || x >= n || y < 0 || y >= n) {
      std::cerr << "pattern: point outside [0, n)^2\n";
      return kExitUsage;
    }
    C.set(x, y);
  }
  const auto pat = bes::grid_pattern_search(C, h, cfg.node_budget);
  if (!pat) {
    std::cerr << "pattern: no homothetic " << h << "x" << h << " grid found\n";
    return kExitNotFound;
  }
  emit(cfg, bes::json{{"s", {pat->s1, pat->s2}}, {"t", pat->t}, {"h", pat->h}}
                    .dump(2) +
                "\n");
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extremal functions, lattice isoperimetry and witness "
               "constructions for additive triple systems"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help"); // keep -h free for the h command

  RunConfig cfg;
  app.add_option("--budget", cfg.node_budget, "node/probe budget")
      ->envname("BES_BUDGET");
  app.add_option("--workers", cfg.worker_count, "worker thread count");
  app.add_option("--window", cfg.window_radius, "hexagon window radius");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--format", cfg.output_format, "json, csv or svg")
      ->check(CLI::IsMember({"json", "csv", "svg"}));
  app.add_option("--out", cfg.out_path, "output file (default stdout)");

  std::string k_range = "1..10";
  auto* g = app.add_subcommand("g", "exact minimum line-count table");
  g->add_option("--k", k_range, "k value or a..b range");

  std::int64_t ha = 0, hb = 0, hell = 0;
  std::optional<std::int64_t> hm;
  auto* h = app.add_subcommand("h", "diagonal-count function");
  h->add_option("--a", ha, "interval length a");
  h->add_option("--b", hb, "interval length b");
  h->add_option("--ell", hell, "number of diagonals");
  std::int64_t hm_raw = 0;
  auto* hm_opt = h->add_option("--m", hm_raw, "maximize over a+b+ell = m");

  std::string group, variant = "k3", system_path;
  std::int64_t wk = 3;
  std::optional<bes::Elem> generator;
  bes::Elem gen_raw = 0;
  bool reverify = false;
  auto* w = app.add_subcommand("witness", "construct a spanning witness");
  w->add_option("--group", group, "zn:<n>, zqm:<q>:<m> or table:<path>")
      ->required();
  w->add_option("--k", wk, "required span")->required();
  w->add_option("--variant", variant, "k3 or sqrt")
      ->check(CLI::IsMember({"k3", "sqrt"}));
  w->add_option("--system", system_path, "triple system JSON (default full)");
  auto* gen_opt =
      w->add_option("--generator", gen_raw, "subgroup generator (table specs)");
  w->add_flag("--reverify", reverify, "re-check the certificate before emitting");

  std::int64_t ik = 7;
  std::string imode = "brute";
  auto* iso = app.add_subcommand("isoperimetry", "edge-boundary minimization");
  iso->add_option("--k", ik, "set size")->required();
  iso->add_option("--mode", imode, "spiral, brute or uniqueness");

  std::string suite;
  auto* v = app.add_subcommand("verify", "run a named verification suite");
  v->add_option("--suite", suite, "compression, lowerbound or claims")
      ->required();

  std::int64_t ln = 64, lk = 3;
  auto* lb = app.add_subcommand("lowerbound", "lower-bound system tightness");
  lb->add_option("--n", ln, "group order (multiple of 8)");
  lb->add_option("--k", lk, "triple count");

  std::string pat_in;
  std::int64_t pat_n = 0, pat_h = 2;
  auto* pat = app.add_subcommand("pattern", "homothetic grid search");
  pat->set_help_flag("--help", "print help");
  pat->add_option("--in", pat_in, "JSON array of [x, y] points")->required();
  pat->add_option("--n", pat_n, "universe side length")->required();
  pat->add_option("--h", pat_h, "pattern side length");

  // allow the global flags to appear after the subcommand name
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (hm_opt->count() > 0) hm = hm_raw;
  if (gen_opt->count() > 0) generator = gen_raw;

  try {
    if (g->parsed()) return cmd_g(cfg, k_range);
    if (h->parsed()) return cmd_h(cfg, ha, hb, hell, hm);
    if (w->parsed())
      return cmd_witness(cfg, group, wk, variant, system_path, generator,
                         reverify);
    if (iso->parsed()) return cmd_isoperimetry(cfg, ik, imode);
    if (v->parsed()) return cmd_verify(cfg, suite);
    if (lb->parsed()) return cmd_lowerbound(cfg, ln, lk);
    if (pat->parsed()) return cmd_pattern(cfg, pat_in, pat_n, pat_h);
  } catch (const bes::budget_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
