// grr: command-line front end for ranks, Betti numbers, sweeps and level sets.

#include <cctype>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "grr/grr.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitMismatch = 2;
constexpr int kExitUsage = 64;
constexpr int kExitBudget = 65;
constexpr int kExitInapplicable = 66;

/// `--d -1,3` -> `--d=-1,3`, so negative values are never read as flags.
std::vector<std::string> join_negative_values(int argc, char** argv) {
  std::vector<std::string> out;
  for (int i = 0; i < argc; ++i) {
    std::string a = argv[i];
    bool takes_value = a.rfind("--", 0) == 0 && a.find('=') == std::string::npos;
    if (takes_value && i + 1 < argc) {
      std::string next = argv[i + 1];
      if (next.size() > 1 && next[0] == '-' && std::isdigit(static_cast<unsigned char>(next[1]))) {
        out.push_back(a + "=" + next);
        ++i;
        continue;
      }
    }
    out.push_back(a);
  }
  return out;
}

struct GrrrOpts {
  std::int64_t r = 1;
  std::string d = "0,0";
  std::string method = "closed";
  bool all = false;
  bool json = false;
  std::int64_t budget = grr::kDefaultBruteforceBudget;
};

int cmd_grrr(const GrrrOpts& o) {
  grr::EdgeCount r(o.r);
  grr::Divisor d = grr::parse_divisor(o.d);
  auto by = [&](const std::string& m) -> std::int64_t {
    if (m == "closed") return grr::grrr_closed(r, d);
    if (m == "bruteforce") return grr::grrr_bruteforce(r, d, o.budget);
    if (m == "latcount") return grr::lat_count(r, d) - 1;
    if (m == "recursive") return grr::grrr_recursive(r, d);
    throw grr::InvalidArgument("unknown method '" + m + "'");
  };
  if (!o.all) {
    std::int64_t v = by(o.method);
    if (o.json)
      std::cout << grr::Json{{"r", o.r}, {"d", {d.d1, d.d2}}, {"method", o.method}, {"rank", v}}.dump() << "\n";
    else
      std::cout << v << "\n";
    return 0;
  }
  grr::Json ranks;
  bool agree = true;
  std::int64_t first = by("closed");
  for (const char* m : {"closed", "bruteforce", "latcount"}) {
    std::int64_t v = by(m);
    ranks[m] = v;
    agree = agree && v == first;
  }
  if (o.json) {
    std::cout << grr::Json{{"r", o.r}, {"d", {d.d1, d.d2}}, {"ranks", ranks}, {"agree", agree}}.dump() << "\n";
  } else {
    std::cout << "closed=" << ranks["closed"] << " bruteforce=" << ranks["bruteforce"]
              << " latcount=" << ranks["latcount"] << (agree ? " agree" : " MISMATCH") << "\n";
  }
  return agree ? 0 : kExitMismatch;
}

struct BettiOpts {
  std::string sheaf = "M";
  std::int64_t r = 1;
  std::string d = "0,0";
  std::string vertex = "B1";
  std::int64_t n = 1;
  std::string engine = "auto";
  std::string field = "q";
  std::int64_t window = 32;
};

grr::Sheaf2V build_sheaf(const BettiOpts& o) {
  grr::EdgeCount r(o.r);
  if (o.sheaf == "M") return grr::make_M(r, grr::parse_divisor(o.d));
  if (o.sheaf == "O") return grr::make_structure_sheaf(r);
  if (o.sheaf == "L") return grr::make_line_bundle(r, grr::parse_divisor(o.d));
  if (o.sheaf == "omega") return grr::make_omega(r);
  if (o.n < 1) throw grr::InvalidArgument("--n must be >= 1");
  if (o.sheaf == "sky")
    return grr::make_skyscraper(grr::parse_obj(o.vertex), grr::GradedSpace::truncated(static_cast<std::size_t>(o.n)),
                                o.r);
  if (o.sheaf == "constant") return grr::make_constant(static_cast<std::size_t>(o.n));
  throw grr::InvalidArgument("unknown sheaf '" + o.sheaf + "' (M, O, L, omega, sky, constant)");
}

int cmd_betti(const BettiOpts& o) {
  grr::Sheaf2V f = build_sheaf(o);
  auto spec = grr::FieldSpec::parse(o.field);
  grr::BettiPair p = grr::with_field(spec, [&](const auto& field) {
    if (o.engine == "auto") return grr::betti_auto(f, field, o.window);
    if (o.engine == "closed") {
      auto rep = grr::betti_closed_form_plb(f, field);
      return grr::BettiPair{rep.b0, rep.b1, "closed_form_plb", {}};
    }
    if (o.engine == "walker") {
      auto rep = grr::betti_walker(f, field);
      return grr::BettiPair{rep.b0, rep.b1, "walker", {}};
    }
    if (o.engine == "window") return grr::betti_window(f, o.window, field);
    throw grr::InvalidArgument("unknown engine '" + o.engine + "'");
  });
  grr::Json j = grr::to_json(p);
  j["sheaf"] = o.sheaf;
  j["field"] = spec.name();
  std::cout << j.dump() << "\n";
  return 0;
}

struct VerifyOpts {
  std::string checks = "rr";
  std::string r_range = "1..6";
  std::string d_box = "-10..10";
  std::string field = "q";
  std::int64_t window = 32;
  std::int64_t degree_bound = 12;
  bool timing = false;
};

int cmd_verify(const VerifyOpts& o) {
  grr::SweepConfig c;
  c.r_range = grr::parse_range(o.r_range);
  c.d_box = grr::parse_box(o.d_box);
  c.field = grr::FieldSpec::parse(o.field);
  c.window = o.window;
  c.degree_bound = o.degree_bound;
  c.checks.clear();
  for (const auto& name : grr::detail::split(o.checks, ',')) {
    const auto& known = grr::known_checks();
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw grr::InvalidArgument("unknown check '" + name + "'");
    c.checks.push_back(name);
  }
  grr::Json env = grr::run_sweep(c, o.timing);
  std::cout << env.dump(2) << "\n";
  return env["pass"].get<bool>() ? 0 : kExitFail;
}

struct LevelOpts {
  std::int64_t r = 4;
  std::int64_t imax = 2;
  std::string box = "-5..10";
  std::string format = "csv";
};

int cmd_levelsets(const LevelOpts& o) {
  grr::EdgeCount r(o.r);
  grr::DivisorBox box = grr::parse_box(o.box);
  if (o.imax < 0) throw grr::InvalidArgument("--imax must be >= 0");
  if (o.format == "csv") {
    std::cout << "d1,d2,i\n";
    for (std::int64_t i = 0; i <= o.imax; ++i)
      for (auto d : grr::level_set_points(r, i, box)) std::cout << d.d1 << "," << d.d2 << "," << i << "\n";
    return 0;
  }
  if (o.format != "json") throw grr::InvalidArgument("unknown format '" + o.format + "'");
  grr::Json levels = grr::Json::array();
  for (std::int64_t i = 0; i <= o.imax; ++i) {
    grr::Json pts = grr::Json::array();
    for (auto d : grr::level_set_points(r, i, box)) pts.push_back({d.d1, d.d2});
    levels.push_back({{"i", i}, {"points", pts}});
  }
  std::cout << grr::Json{{"r", o.r}, {"box", {{box.d1_lo, box.d1_hi}, {box.d2_lo, box.d2_hi}}}, {"levels", levels}}.dump()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemann-Roch ranks and sheaf cohomology on the two-vertex graph"};
  app.require_subcommand(1);
  app.set_version_flag("--version", grr::kToolVersion);

  GrrrOpts go;
  auto* g = app.add_subcommand("grrr", "rank of a divisor");
  g->add_option("--r", go.r, "number of edges")->required();
  g->add_option("--d", go.d, "divisor d1,d2")->required();
  g->add_option("--method", go.method)->check(CLI::IsMember({"closed", "bruteforce", "latcount", "recursive"}));
  g->add_flag("--all-methods", go.all, "run closed, bruteforce and latcount and compare");
  g->add_flag("--json", go.json);
  g->add_option("--budget", go.budget, "brute-force bound on |d1|+|d2|");

  BettiOpts bo;
  auto* b = app.add_subcommand("betti", "Betti numbers of a sheaf");
  b->add_option("--sheaf", bo.sheaf)->check(CLI::IsMember({"M", "O", "L", "omega", "sky", "constant"}));
  b->add_option("--r", bo.r);
  b->add_option("--d", bo.d);
  b->add_option("--vertex", bo.vertex);
  b->add_option("--n", bo.n, "torsion length (sky) or dimension (constant)");
  b->add_option("--engine", bo.engine)->check(CLI::IsMember({"auto", "closed", "walker", "window"}));
  b->add_option("--field", bo.field, "q or fp:<prime>");
  b->add_option("--window", bo.window);

  VerifyOpts vo;
  auto* v = app.add_subcommand("verify", "run verification sweeps");
  v->add_option("--checks", vo.checks, "comma list of rr,b1,euler,duality,hom,sky,tensor,resolution,les");
  v->add_option("--r-range", vo.r_range);
  v->add_option("--d-box", vo.d_box, "lo..hi or lo..hi,lo..hi");
  v->add_option("--field", vo.field);
  v->add_option("--window", vo.window);
  v->add_option("--degree-bound", vo.degree_bound);
  v->add_flag("--timing", vo.timing, "add wall time to the report");

  LevelOpts lo;
  auto* l = app.add_subcommand("levelsets", "level sets of the rank function");
  l->add_option("--r", lo.r);
  l->add_option("--imax", lo.imax);
  l->add_option("--box", lo.box, "lo..hi or lo..hi,lo..hi");
  l->add_option("--format", lo.format)->check(CLI::IsMember({"csv", "json"}));

  auto args = join_negative_values(argc, argv);
  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (g->parsed()) return cmd_grrr(go);
    if (b->parsed()) return cmd_betti(bo);
    if (v->parsed()) return cmd_verify(vo);
    if (l->parsed()) return cmd_levelsets(lo);
  } catch (const grr::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const grr::EngineInapplicable& e) {
    std::cerr << "engine inapplicable: " << e.what() << "\n";
    return kExitInapplicable;
  } catch (const grr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
