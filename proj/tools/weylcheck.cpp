// weylcheck: runs the verification suites and writes CSV or JSON reports.
// Exit status: 0 all gated checks pass, 1 a check failed, 2 usage or configuration error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "weylcheck/cli.hpp"

using namespace weylcheck;
using cli::ConfigError;
using cli::RunConfig;

namespace {

struct ParamDef {
  std::string key, fallback, help;
};

struct CommandDef {
  std::string name, help;
  std::vector<ParamDef> params;
};

const std::vector<CommandDef>& commands() {
  static const std::vector<CommandDef> defs = {
      {"charsum", "closed-form character sums, twisted factorization and the odd-character average",
       {{"c-max", "40", "largest modulus for the grid sum"},
        {"congruence-max", "12", "largest modulus pair for the congruence indicator"},
        {"q-max", "13", "largest prime for the character suites"},
        {"twist-c-max", "20", "largest c in the twisted factorization"}}},
      {"kloosterman", "Weil bound, CRT factorization and symmetry of S(m,n;c)",
       {{"c-max", "60", "largest modulus"}, {"mn-max", "10", "m and n range over 1..mn-max"}}},
      {"petersson", "Petersson formula on an m, n grid",
       {{"k", "10", "even weight >= 4"}, {"grid", "5", "m, n in 1..grid"}, {"tol", "1e-8", "gate"}}},
      {"besselsum", "weighted Bessel k-sum: direct vs kernel, and sub-threshold suppression",
       {{"K", "8,16,32", "comma-separated K values"},
        {"x", "10,100,1000,10000", "comma-separated x values"},
        {"tol", "1e-8", "direct/kernel gate"},
        {"suppression", "1e6", "required |S1(4K^2)|/|S1(K^2/16)|"}}},
      {"oscint", "stationary phase on the phase corpus and the randomized second-derivative corpus",
       {{"count", "200", "randomized cases"}, {"tol", "0.02", "order-0 relative gate"}}},
      {"afe", "central values L(1/2+it) at several balances",
       {{"form", "delta", "delta or maass"},
        {"maass-file", "", "coefficient file for form = maass"},
        {"t", "0,10,100", "comma-separated heights"},
        {"balance", "0.7071067811865476,1,1.4142135623730951", "comma-separated balance factors"},
        {"tol", "1e-6", "relative balance-spread gate"}}},
      {"scan", "|L(1/2+it)| over a t grid with the exponent fit",
       {{"form", "delta", "delta or maass"},
        {"maass-file", "", "coefficient file for form = maass"},
        {"t-min", "10", "first height"},
        {"t-max", "50", "last height"},
        {"step", "0.25", "grid step"},
        {"plotdata", "", "optional path for plot data"}}},
      {"pipeline", "Poisson identity, I bound, J decay and the off-diagonal assembly",
       {{"check", "all", "poisson, i, j, assembly or all"},
        {"N", "1e4", "main length"},
        {"t", "1e3", "height"},
        {"K", "", "weight scale (default round(t^(1/3)))"},
        {"Q", "", "modulus scale (default N/K^2)"},
        {"ntilde", "", "claimed dual length, checked against Q^2 K^4 / N"},
        {"m", "1", "m for the I bound"},
        {"n", "1", "n for the I bound"},
        {"c", "10", "c for the I bound"},
        {"m-max", "3", "Poisson sweep: m in 1..m-max"},
        {"c-max", "10", "Poisson sweep: c in 1..c-max"},
        {"tol", "1e-6", "Poisson gate"},
        {"c-count", "12", "assembly: sampled moduli"},
        {"n-count", "20", "assembly: dual indices"},
        {"m-count", "30", "assembly: m values"}}},
      {"all", "the ten acceptance criteria", {}},
  };
  return defs;
}

const std::vector<std::string> kGlobals = {"output", "format", "parallelism", "seed"};

LFunctionSpec load_form(const RunConfig& cfg, double t_top) {
  const auto& form = cfg.get("form");
  if (form == "delta") return delta_spec(required_length(delta_spec(16), t_top, kBalanceHigh) + 64);
  if (form == "maass") {
    if (cfg.get("maass-file").empty()) throw ConfigError("form = maass needs maass-file");
    MaassFileCheck check;
    auto spec = load_maass(cfg.get("maass-file"), &check);
    if (check.bound_violations > 0)
      std::cerr << "warning: " << check.bound_violations << " coefficients exceed 2 n^{7/64}\n";
    return spec;
  }
  throw ConfigError("form must be delta or maass, got '" + form + "'");
}

std::vector<std::int64_t> primes_between(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = lo; p <= hi; ++p)
    if (is_prime(p)) out.push_back(p);
  return out;
}

std::vector<SuiteResult> run_pipeline(const RunConfig& cfg) {
  auto opt = [&](const std::string& k) -> std::optional<double> {
    if (cfg.get(k).empty()) return std::nullopt;
    return cfg.number(k);
  };
  const auto p = PipelineParams::make(cfg.number("N"), cfg.number("t"), opt("K"), opt("Q"), opt("ntilde"));
  const auto& check = cfg.get("check");
  if (check != "all" && check != "poisson" && check != "i" && check != "j" && check != "assembly")
    throw ConfigError("check must be poisson, i, j, assembly or all");
  std::vector<SuiteResult> out;
  if (check == "all" || check == "poisson") {
    PoissonGrid g;
    g.ms.clear();
    for (std::int64_t m = 1; m <= cfg.integer("m-max"); ++m) g.ms.push_back(m);
    g.c_max = cfg.integer("c-max");
    g.Ns = {p.N};
    g.ts = {p.t};
    out.push_back(poisson_suite(g, cfg.number("tol")));
  }
  if (check == "all" || check == "i") {
    out.push_back(detail::timed("i-bound", 0.0, [&](SuiteResult& r) {
      const auto rep = i_integral(cfg.integer("m"), cfg.integer("n"), cfg.integer("c"), p);
      r.columns = {"re", "im", "abs_error", "r", "bound", "ratio", "verdict"};
      r.rows.push_back({rep.estimate.value.real(), rep.estimate.value.imag(), rep.estimate.abs_error, rep.r, rep.bound, rep.ratio,
                        std::string(to_string(rep.verdict))});
      r.count(rep.verdict);
      r.verdict = rep.verdict == Verdict::fail ? Verdict::fail : Verdict::pass;
      r.notes.push_back("|I| / (8 max|W| / sqrt(r)) = " + detail::sci(rep.ratio) + " (" + std::string(to_string(rep.verdict)) + ")");
    }));
  }
  if (check == "all" || check == "j") out.push_back(j_decay_suite(p));
  if (check == "all" || check == "assembly")
    out.push_back(assembly_suite(p, {static_cast<int>(cfg.integer("c-count")), static_cast<int>(cfg.integer("n-count")),
                                     static_cast<int>(cfg.integer("m-count"))}));
  return out;
}

std::vector<SuiteResult> dispatch(const RunConfig& cfg) {
  const auto& c = cfg.command;
  if (c == "charsum") {
    const auto q_max = cfg.integer("q-max");
    const auto primes = primes_between(3, q_max);
    if (primes.empty()) throw ConfigError("q-max must be >= 3");
    return {charsum_suite(cfg.integer("c-max"), cfg.integer("congruence-max")),
            twisted_factorization_suite(primes, cfg.integer("twist-c-max")), average_convention_suite(primes)};
  }
  if (c == "kloosterman") return {kloosterman_suite(cfg.integer("c-max"), cfg.integer("mn-max"))};
  if (c == "petersson")
    return {petersson_grid_suite(static_cast<int>(cfg.integer("k")), static_cast<int>(cfg.integer("grid")), cfg.number("tol"))};
  if (c == "besselsum") {
    std::vector<int> Ks;
    for (double k : cfg.numbers("K")) Ks.push_back(static_cast<int>(k));
    return {besselsum_suite(Ks, cfg.numbers("x"), cfg.number("tol"), cfg.number("suppression"))};
  }
  if (c == "oscint")
    return {stationary_phase_suite(static_cast<std::uint64_t>(cfg.seed), static_cast<int>(cfg.integer("count")), cfg.number("tol"))};
  if (c == "afe") {
    const auto ts = cfg.numbers("t");
    double top = 0;
    for (double t : ts) top = std::max(top, std::abs(t));
    const auto bs = cfg.numbers("balance");
    double widest = 1.0;
    for (double b : bs) widest = std::max({widest, b, 1.0 / b});
    const auto spec = cfg.get("form") == "delta" ? delta_spec(required_length(delta_spec(16), top, widest) + 64) : load_form(cfg, top);
    return {afe_suite(spec, ts, bs, cfg.number("tol"))};
  }
  if (c == "scan") {
    const double t_max = cfg.number("t-max");
    const auto spec = load_form(cfg, t_max);
    const auto t0 = std::chrono::steady_clock::now();
    const auto recs = exponent_scan(spec, cfg.number("t-min"), t_max, cfg.number("step"), cfg.parallelism);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!cfg.get("plotdata").empty()) {
      const auto fit = cli::emit_plotdata(recs, cfg.get("plotdata"));
      if (!fit.c_third) std::cerr << "plotdata: fit skipped (fewer than 2 accepted records)\n";
    }
    auto r = scan_suite(recs);
    r.seconds += elapsed;
    return {r};
  }
  if (c == "pipeline") return run_pipeline(cfg);
  if (c == "all") {
    std::vector<SuiteResult> out;
    for (int id = 1; id <= kCriteria; ++id) {
      out.push_back(run_criterion(id, cfg.parallelism));
      std::cerr << criterion_line(id, out.back()) << "\n";
    }
    return out;
  }
  throw ConfigError("unknown command '" + c + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weylcheck: numerical verification toolkit for a GL(2) subconvexity argument"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, output, format, parallelism, seed;
  app.add_option("--config", config_path, "key = value file; flags override it");
  app.add_option("-o,--output", output, "output path (default stdout)");
  app.add_option("--format", format, "csv or json (default csv)");
  app.add_option("-j,--parallelism", parallelism, "worker threads (default 1)");
  app.add_option("--seed", seed, "seed for randomized corpora (default 20240601)");

  std::map<std::string, std::map<std::string, std::string>> flag_values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& def : commands()) {
    auto* sub = app.add_subcommand(def.name, def.help);
    subs[def.name] = sub;
    for (const auto& p : def.params) sub->add_option("--" + p.key, flag_values[def.name][p.key], p.help + " [" + p.fallback + "]");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunConfig cfg;
  std::vector<SuiteResult> suites;
  try {
    const CommandDef* def = nullptr;
    for (const auto& d : commands())
      if (subs[d.name]->parsed()) def = &d;
    if (!def) throw ConfigError("no command given");
    cfg.command = def->name;

    std::set<std::string> allowed(kGlobals.begin(), kGlobals.end());
    allowed.insert("command");
    for (const auto& p : def->params) allowed.insert(p.key);
    std::map<std::string, std::string> file;
    if (!config_path.empty()) file = cli::load_config(config_path, allowed);
    if (file.count("command") && file["command"] != cfg.command)
      throw ConfigError(config_path + ": command '" + file["command"] + "' does not match '" + cfg.command + "'");

    auto* sub = subs[def->name];
    for (const auto& p : def->params) {
      std::string v = p.fallback;
      if (file.count(p.key)) v = file[p.key];
      if (sub->get_option("--" + p.key)->count() > 0) v = flag_values[def->name][p.key];
      cfg.params[p.key] = v;
    }
    auto global = [&](const std::string& key, const std::string& flag, const std::string& fallback) {
      if (!flag.empty()) return flag;
      if (file.count(key)) return file[key];
      return fallback;
    };
    cfg.output_path = global("output", output, "");
    const auto fmt = global("format", format, "csv");
    if (fmt != "csv" && fmt != "json") throw ConfigError("format must be csv or json, got '" + fmt + "'");
    cfg.format = fmt == "csv" ? cli::Format::csv : cli::Format::json;
    const auto par = global("parallelism", parallelism, "1");
    try {
      const long v = std::stol(par);
      if (v < 1 || v > 256) throw std::out_of_range(par);
      cfg.parallelism = static_cast<unsigned>(v);
    } catch (const std::logic_error&) {
      throw ConfigError("parallelism must be an integer in 1..256, got '" + par + "'");
    }
    const auto sd = global("seed", seed, "20240601");
    try {
      cfg.seed = std::stoll(sd);
    } catch (const std::logic_error&) {
      throw ConfigError("seed must be an integer, got '" + sd + "'");
    }

    suites = dispatch(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::ofstream file_out;
  if (!cfg.output_path.empty()) {
    file_out.open(cfg.output_path);
    if (!file_out) {
      std::cerr << "cannot write '" << cfg.output_path << "'\n";
      return 2;
    }
  }
  std::ostream& os = cfg.output_path.empty() ? std::cout : file_out;
  if (cfg.format == cli::Format::csv)
    cli::write_csv(os, cfg, suites);
  else
    cli::write_json(os, cfg, suites);

  std::vector<std::string> failing;
  std::size_t inconclusive = 0;
  for (const auto& s : suites) {
    std::cerr << s.name << ": " << to_string(s.verdict) << " (passed " << s.passed << ", failed " << s.failed << ", inconclusive "
              << s.inconclusive << ", " << s.seconds << " s)\n";
    inconclusive += s.inconclusive;
    if (s.verdict == Verdict::fail) failing.push_back(s.name);
  }
  if (inconclusive) std::cerr << inconclusive << " inconclusive checks (not failures)\n";
  if (!failing.empty()) {
    std::cerr << "FAILED:";
    for (const auto& f : failing) std::cerr << " " << f;
    std::cerr << "\n";
    return 1;
  }
  return 0;
}
