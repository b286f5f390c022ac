#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "treecross/crossings.hpp"
#include "treecross/errors.hpp"
#include "treecross/exact_stats.hpp"
#include "treecross/normal_approx.hpp"
#include "treecross/parallel.hpp"
#include "treecross/size_bias.hpp"
#include "treecross/tree.hpp"

namespace treecross::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string subcommand;
  int n = 0;
  std::vector<int> n_list;
  std::uint64_t samples = 1;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string format = "csv";
  std::string mode = "construct";
  std::string out_path;
  bool enumerate_check = false;
};

json config_json(const RunConfig& c) {
  json j = {{"tool", "treecross"},
            {"version", kVersion},
            {"format_version", kFormatVersion},
            {"subcommand", c.subcommand},
            {"seed", c.seed},
            {"threads", c.threads},
            {"samples", c.samples},
            {"format", c.format}};
  if (c.n != 0) j["n"] = c.n;
  if (!c.n_list.empty()) j["n_list"] = c.n_list;
  if (c.subcommand == "coupling-check") j["mode"] = c.mode;
  if (!c.out_path.empty()) j["out"] = c.out_path;
  return j;
}

std::string fixed(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

void csv_provenance(std::ostream& out, const RunConfig& c) { out << "# " << config_json(c).dump() << '\n'; }

std::string join_code(const PruferCode& code) {
  std::string s;
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(code[i]);
  }
  return s;
}

json edges_json(const LabeledTree& t) {
  json e = json::array();
  for (const Edge& edge : t.edges()) e.push_back({edge.u, edge.v});
  return e;
}

std::vector<int> requested_ns(const RunConfig& c) {
  if (!c.n_list.empty()) return c.n_list;
  if (c.n == 0) throw std::invalid_argument("one of --n or --n-list is required");
  return {c.n};
}

void run_sample(const RunConfig& c, std::ostream& out) {
  if (c.n < 2) throw GuardError("sample: n must be at least 2");
  Rng rng = Rng::for_worker(c.seed, 0);
  if (c.format == "csv") {
    csv_provenance(out, c);
    out << "index,n,crossings,prufer\n";
  }
  for (std::uint64_t i = 0; i < c.samples; ++i) {
    const PruferCode code = sample_prufer(c.n, rng);
    const LabeledTree tree = prufer_to_tree(code);
    const auto x = count_crossings_fast(tree);
    if (c.format == "csv") {
      out << i << ',' << c.n << ',' << x << ',' << join_code(code) << '\n';
    } else if (c.format == "json") {
      json row = {{"index", i}, {"n", c.n}, {"crossings", x}, {"prufer", code}, {"edges", edges_json(tree)}};
      if (i == 0) row["config"] = config_json(c);
      out << row.dump() << '\n';
    } else {
      write_tree_text(out, tree);
    }
  }
}

void run_enumerate(const RunConfig& c, std::ostream& out) {
  const TreeRange trees(c.n);
  if (c.format == "csv") {
    csv_provenance(out, c);
    out << "index,prufer,crossings\n";
  }
  std::uint64_t index = 0;
  for (auto it = trees.begin(); it != trees.end(); ++it, ++index) {
    const LabeledTree tree = *it;
    const auto x = count_crossings_fast(tree);
    if (c.format == "csv") {
      out << index << ',' << join_code(it.code()) << ',' << x << '\n';
    } else if (c.format == "json") {
      json row = {{"index", index}, {"prufer", it.code()}, {"crossings", x}, {"edges", edges_json(tree)}};
      if (index == 0) row["config"] = config_json(c);
      out << row.dump() << '\n';
    } else {
      write_tree_text(out, tree);
    }
  }
}

void run_stats(const RunConfig& c, std::ostream& out) {
  const auto ns = requested_ns(c);
  if (c.format == "csv") {
    csv_provenance(out, c);
    out << "n,mean_num,mean_den,var_num,var_den,mean_float,var_float\n";
  }
  bool first = true;
  for (int n : ns) {
    const Rational mean = exact_mean(n);
    const Rational var = exact_variance(n);
    std::optional<bool> agrees;
    if (c.enumerate_check) {
      const auto m = enumeration_moments(n);
      agrees = (m.mean == mean && m.variance == var);
    }
    if (c.format == "csv") {
      out << n << ',' << mean.get_num().get_str() << ',' << mean.get_den().get_str() << ','
          << var.get_num().get_str() << ',' << var.get_den().get_str() << ',' << fixed(to_double(mean)) << ','
          << fixed(to_double(var)) << '\n';
    } else {
      json row = {{"n", n},
                  {"mean", to_string(mean)},
                  {"variance", to_string(var)},
                  {"mean_float", to_double(mean)},
                  {"var_float", to_double(var)}};
      if (agrees) row["enumeration_agrees"] = *agrees;
      if (first) row["config"] = config_json(c);
      out << row.dump() << '\n';
    }
    first = false;
  }
}

struct CouplingTally {
  std::uint64_t count = 0;
  std::uint64_t attempts = 0;
  std::uint64_t violations = 0;
  std::int64_t max_abs_diff = 0;
  std::map<std::int64_t, std::uint64_t> x_s_hist;
};

void run_coupling_check(const RunConfig& c, std::ostream& out) {
  const int n = c.n;
  json report = {{"n", n}, {"mode", c.mode}, {"bound_4n_minus_3", coupling_bound(n)}};

  if (c.mode == "exact") {
    const auto e = enumerate_coupling(n);
    const auto oracle = size_bias_law_oracle(n);
    const Rational tv = total_variation(e.marginal, oracle);
    report["tv_distance_to_oracle"] = to_double(tv);
    report["tv_distance_exact"] = to_string(tv);
    report["max_abs_diff"] = e.max_abs_diff;
    report["psi_squared"] = to_string(e.psi_squared);
    report["psi_squared_float"] = to_double(e.psi_squared);
    report["psi_squared_given_tree"] = to_string(e.psi_squared_given_tree);
    report["psi_squared_bound_2112n"] = kConditionalVarianceConstant * n;
  } else if (c.mode == "construct" || c.mode == "reject") {
    if (n < 4) throw GuardError("coupling-check: n must be at least 4");
    if (c.samples < 1) throw GuardError("coupling-check: need at least one sample");
    const bool reject = c.mode == "reject";
    const auto shares = run_workers<CouplingTally>(c.threads, c.seed, c.samples, [&](Rng& rng, std::uint64_t count, unsigned) {
      CouplingTally t;
      for (std::uint64_t i = 0; i < count; ++i) {
        std::uint64_t attempts = 1;
        const CouplingOutcome o = reject ? rejection_size_bias_sample(n, rng, &attempts) : sample_coupling(n, rng);
        const auto diff = std::llabs(o.x_s - o.x);
        t.max_abs_diff = std::max<std::int64_t>(t.max_abs_diff, diff);
        if (diff > coupling_bound(n)) ++t.violations;
        ++t.x_s_hist[o.x_s];
        t.attempts += attempts;
        ++t.count;
      }
      return t;
    });
    CouplingTally total;
    for (const auto& s : shares) {
      total.count += s.count;
      total.attempts += s.attempts;
      total.violations += s.violations;
      total.max_abs_diff = std::max(total.max_abs_diff, s.max_abs_diff);
      for (const auto& [k, v] : s.x_s_hist) total.x_s_hist[k] += v;
    }
    report["samples"] = total.count;
    report["max_abs_diff"] = total.max_abs_diff;
    report["violations"] = total.violations;
    if (reject) report["acceptance_rate"] = static_cast<double>(total.count) / static_cast<double>(total.attempts);
    if (n <= 7) {
      const auto oracle = size_bias_law_oracle(n);
      std::map<std::int64_t, double> diff;
      for (const auto& [k, p] : oracle.pmf) diff[k] += to_double(p);
      for (const auto& [k, v] : total.x_s_hist) diff[k] -= static_cast<double>(v) / static_cast<double>(total.count);
      double tv = 0;
      for (const auto& [k, d] : diff) tv += std::fabs(d);
      report["tv_distance_to_oracle"] = tv / 2;
    }
  } else {
    throw std::invalid_argument("unknown --mode '" + c.mode + "'");
  }
  report["config"] = config_json(c);
  out << report.dump() << '\n';
}

void run_kolmogorov(const RunConfig& c, std::ostream& out) {
  const auto ns = requested_ns(c);
  if (c.samples < 1) throw GuardError("kolmogorov: need at least one sample");
  csv_provenance(out, c);
  out << "n,N,ks_distance,ks_stderr_proxy,bound_total,slope_running\n";
  std::vector<std::pair<double, double>> points;
  for (int n : ns) {
    const auto summary = simulate_standardized(n, c.samples, derive_seed(c.seed, static_cast<std::uint64_t>(n)), c.threads);
    const double ks = empirical_kolmogorov(summary);
    // Mean of the KS statistic under an exact null, sqrt(pi/2) ln 2 / sqrt(N).
    const double proxy = 0.8687311606361592 / std::sqrt(static_cast<double>(c.samples));
    points.emplace_back(n, ks);
    out << n << ',' << c.samples << ',' << fixed(ks) << ',' << fixed(proxy) << ',' << fixed(theoretical_bound(n).total)
        << ',';
    if (points.size() >= 3) out << fixed(rate_fit(points).slope);
    out << '\n';
  }
}

void run_bound(const RunConfig& c, std::ostream& out) {
  for (int n : requested_ns(c)) {
    const BoundReport r = theoretical_bound(n);
    json row = {{"n", r.n},         {"mu", r.mu},       {"sigma", r.sigma}, {"a_bound", r.a_bound},
                {"psi_bound", r.psi_bound}, {"term1", r.term1}, {"term2", r.term2}, {"total", r.total},
                {"config", config_json(c)}};
    out << row.dump() << '\n';
  }
}

void emit_error(std::ostream& err, int code, const std::string& kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Crossings of uniform random labelled trees in convex position", "treecross"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "Print library and output-format versions");

  auto add_common = [&](CLI::App* sub, bool with_samples, bool with_threads) {
    sub->add_option("--seed", config.seed, "Master seed (64-bit)");
    if (with_samples) sub->add_option("--samples", config.samples, "Number of samples")->check(CLI::PositiveNumber);
    if (with_threads) sub->add_option("--threads", config.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", config.out_path, "Write the report to this file instead of stdout");
  };

  auto* sample = app.add_subcommand("sample", "Draw uniform random trees");
  sample->add_option("--n", config.n, "Vertex count")->required();
  sample->add_option("--format", config.format)->check(CLI::IsMember({"csv", "json", "text"}));
  add_common(sample, true, false);

  auto* enumerate = app.add_subcommand("enumerate", "List every labelled tree on n <= 8 vertices");
  enumerate->add_option("--n", config.n, "Vertex count")->required();
  enumerate->add_option("--format", config.format)->check(CLI::IsMember({"csv", "json", "text"}));
  enumerate->add_option("--out", config.out_path);

  auto* stats = app.add_subcommand("stats", "Exact mean and variance of the crossing count");
  auto* stats_n = stats->add_option("--n", config.n, "Vertex count");
  stats->add_option("--n-list", config.n_list, "Comma-separated vertex counts")->delimiter(',')->excludes(stats_n);
  stats->add_option("--format", config.format)->check(CLI::IsMember({"csv", "json"}));
  stats->add_flag("--enumerate-check", config.enumerate_check, "Also compare against full enumeration (n <= 7)");
  stats->add_option("--out", config.out_path);

  auto* coupling = app.add_subcommand("coupling-check", "Check the size-bias coupling");
  coupling->add_option("--n", config.n, "Vertex count")->required();
  coupling->add_option("--mode", config.mode)->check(CLI::IsMember({"construct", "reject", "exact"}));
  add_common(coupling, true, true);

  auto* kolmogorov = app.add_subcommand("kolmogorov", "Empirical Kolmogorov distance of the standardized count");
  kolmogorov->add_option("--n-list", config.n_list, "Comma-separated vertex counts")->delimiter(',')->required();
  add_common(kolmogorov, true, true);

  auto* bound = app.add_subcommand("bound", "Evaluate the bounded-coupling Kolmogorov bound");
  auto* bound_n = bound->add_option("--n", config.n, "Vertex count");
  bound->add_option("--n-list", config.n_list, "Comma-separated vertex counts")->delimiter(',')->excludes(bound_n);

  std::vector<std::string> argv_storage{"treecross"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    emit_error(err, kBadConfig, "bad_config", e.what());
    return kBadConfig;
  }

  if (show_version) {
    out << "treecross " << kVersion << " (output format " << kFormatVersion << ")\n";
    return kOk;
  }
  if (app.get_subcommands().empty()) {
    emit_error(err, kBadConfig, "bad_config", "a subcommand is required");
    return kBadConfig;
  }
  config.subcommand = app.get_subcommands().front()->get_name();

  std::unique_ptr<std::ofstream> file;
  if (!config.out_path.empty()) {
    file = std::make_unique<std::ofstream>(config.out_path, std::ios::binary);
    if (!*file) {
      emit_error(err, kBadConfig, "bad_config", "cannot write output file '" + config.out_path + "'");
      return kBadConfig;
    }
  }
  std::ostream& sink = file ? *file : out;

  try {
    if (config.subcommand == "sample") run_sample(config, sink);
    else if (config.subcommand == "enumerate") run_enumerate(config, sink);
    else if (config.subcommand == "stats") run_stats(config, sink);
    else if (config.subcommand == "coupling-check") run_coupling_check(config, sink);
    else if (config.subcommand == "kolmogorov") run_kolmogorov(config, sink);
    else if (config.subcommand == "bound") run_bound(config, sink);
  } catch (const GuardError& e) {
    emit_error(err, kGuardViolation, "guard_violation", e.what());
    return kGuardViolation;
  } catch (const InvariantError& e) {
    emit_error(err, kInternalError, "internal_assertion", e.what());
    return kInternalError;
  } catch (const std::invalid_argument& e) {
    emit_error(err, kBadConfig, "bad_config", e.what());
    return kBadConfig;
  } catch (const std::exception& e) {
    emit_error(err, kInternalError, "internal_error", e.what());
    return kInternalError;
  }
  sink.flush();
  if (!sink) {
    emit_error(err, kBadConfig, "bad_config", "failed writing output");
    return kBadConfig;
  }
  return kOk;
}

}  // namespace treecross::cli
