#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gnet/data.hpp"
#include "gnet/errors.hpp"
#include "gnet/experiments.hpp"
#include "gnet/fmtutil.hpp"
#include "gnet/json_io.hpp"
#include "gnet/rng.hpp"
#include "gnet/scoring.hpp"
#include "gnet/search.hpp"
#include "gnet/sim.hpp"

namespace {

using nlohmann::json;

constexpr std::uint64_t kSimulateStreamId = 3;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

const std::vector<std::string> kMetricNames = {"rnml", "rnml-stirling", "mdl3", "bic", "aic"};

std::vector<gnet::MetricId> parse_metric_list(const std::vector<std::string>& names) {
  std::vector<gnet::MetricId> metrics;
  metrics.reserve(names.size());
  for (const std::string& name : names) metrics.push_back(gnet::parse_metric(name));
  return metrics;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw gnet::ParseError("cannot open for writing: " + path);
  out << content;
  if (!out) throw gnet::ParseError("write failed: " + path);
}

int cmd_score(const std::string& data_path, const std::string& dag_path,
              const std::string& metric_name_arg, const std::string& json_path) {
  const gnet::DataMatrix data = gnet::read_data_csv_file(data_path);
  const gnet::Dag dag = gnet::load_dag_file(dag_path);
  if (dag.m != data.m()) {
    throw gnet::DimensionMismatch("graph has " + std::to_string(dag.m) +
                                  " nodes but data has " + std::to_string(data.m()) +
                                  " variables");
  }
  const gnet::MetricId metric = gnet::parse_metric(metric_name_arg);
  json per_node = json::array();
  double total = 0.0;
  std::cout << "metric " << gnet::metric_name(metric) << '\n';
  for (gnet::NodeId v = 0; v < dag.m; ++v) {
    const gnet::ParentSet parents = dag.parents[static_cast<std::size_t>(v)];
    const gnet::LocalFit fit = gnet::fit_local(data, v, parents);
    const double score = gnet::local_score(metric, fit, dag.m);
    total += score;
    std::cout << "node " << v << " parents [";
    const std::vector<gnet::NodeId> members = parents.members();
    for (std::size_t t = 0; t < members.size(); ++t) {
      if (t) std::cout << ',';
      std::cout << members[t];
    }
    std::cout << "] k " << fit.k << " score_nats " << gnet::g17(score) << '\n';
    per_node.push_back(json{{"node", v},
                            {"parents", members},
                            {"k", fit.k},
                            {"score_nats", score}});
  }
  std::cout << "total score_nats " << gnet::g17(total) << '\n';
  if (!json_path.empty()) {
    gnet::save_json_file(json{{"metric", std::string(gnet::metric_name(metric))},
                              {"per_node", std::move(per_node)},
                              {"total_nats", total}},
                         json_path);
  }
  return 0;
}

int cmd_learn(const std::string& data_path, const std::string& metric_name_arg, int max_parents,
              const std::string& algorithm, const std::string& out_path) {
  const gnet::DataMatrix data = gnet::read_data_csv_file(data_path);
  const gnet::MetricId metric = gnet::parse_metric(metric_name_arg);
  const int effective_max = max_parents < 0 ? data.m() - 1 : max_parents;
  if (algorithm == "exhaustive" && data.m() > 6) {
    throw gnet::TooLarge("exhaustive search supports m <= 6");
  }
  const gnet::LocalScoreTable table = gnet::build_table(metric, data, effective_max);
  const gnet::SearchResult result =
      algorithm == "exhaustive" ? gnet::learn_exhaustive(table) : gnet::learn_dp(table);
  const std::string text = gnet::search_result_to_json(result).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
  return 0;
}

int cmd_simulate(int m, bool uniform, double nn, long n, std::uint64_t seed,
                 const std::string& prefix, bool signed_coefficients, bool tau_is_precision) {
  gnet::Rng rng(gnet::derive_seed(seed, {kSimulateStreamId}));
  const gnet::Dag dag = uniform ? gnet::sample_uniform_dag(m, rng)
                                : gnet::sample_sparse_dag(m, nn, rng);
  const gnet::GaussianParams params = gnet::sample_params(
      dag, rng, signed_coefficients ? gnet::CoefSign::Random : gnet::CoefSign::Positive);
  const gnet::DataMatrix data =
      gnet::sample_data(dag, params, n, rng,
                        tau_is_precision ? gnet::NoiseConvention::PrecisionTau
                                         : gnet::NoiseConvention::VarianceTau);
  gnet::write_data_csv_file(data, prefix + ".data.csv");
  gnet::save_json_file(gnet::dag_to_json(dag), prefix + ".dag.json");
  gnet::save_json_file(gnet::params_to_json(params), prefix + ".params.json");
  return 0;
}

void apply_common_config(const json& j, std::vector<long>& sample_sizes, int& iterations,
                         std::vector<gnet::MetricId>& metrics, std::uint64_t& seed) {
  if (j.contains("sample_sizes")) sample_sizes = j["sample_sizes"].get<std::vector<long>>();
  if (j.contains("iterations")) iterations = j["iterations"].get<int>();
  if (j.contains("metrics")) {
    metrics = parse_metric_list(j["metrics"].get<std::vector<std::string>>());
  }
  if (j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
}

void check_config_keys(const json& j, const std::vector<std::string>& allowed,
                       const std::string& path) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw gnet::ParseError(path + ": unknown config key '" + key + "'");
    }
  }
}

void write_experiment_csvs(const gnet::ExperimentResult& result, const std::string& prefix) {
  {
    std::ofstream out(prefix + ".rows.csv");
    if (!out) throw gnet::ParseError("cannot open for writing: " + prefix + ".rows.csv");
    result.write_rows_csv(out);
  }
  std::ofstream out(prefix + ".summary.csv");
  if (!out) throw gnet::ParseError("cannot open for writing: " + prefix + ".summary.csv");
  result.write_summary_csv(out);
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Score-based structure learning for Gaussian networks"};
  app.require_subcommand(1);

  // score
  auto* score = app.add_subcommand("score", "Score a fixed structure against data");
  std::string score_data, score_dag, score_json;
  std::string score_metric = "rnml";
  score->add_option("--data", score_data, "Data CSV (header x1,...,xm)")->required();
  score->add_option("--dag", score_dag, "Graph JSON")->required();
  score->add_option("--metric", score_metric, "Scoring metric")
      ->check(CLI::IsMember(kMetricNames));
  score->add_option("--json", score_json, "Also write a JSON report here");

  // learn
  auto* learn = app.add_subcommand("learn", "Search for the best-scoring structure");
  std::string learn_data, learn_out;
  std::string learn_metric = "rnml";
  std::string learn_algorithm = "dp";
  int learn_max_parents = -1;
  learn->add_option("--data", learn_data, "Data CSV (header x1,...,xm)")->required();
  learn->add_option("--metric", learn_metric, "Scoring metric")
      ->check(CLI::IsMember(kMetricNames));
  learn->add_option("--max-parents", learn_max_parents,
                    "Parent set size cap (default: m-1)");
  learn->add_option("--algorithm", learn_algorithm, "Search algorithm")
      ->check(CLI::IsMember({"dp", "exhaustive"}));
  learn->add_option("--out", learn_out, "Result JSON path (default: stdout)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Draw a network, parameters and data");
  int sim_m = 0;
  bool sim_uniform = false;
  double sim_nn = 0.0;
  long sim_n = 0;
  std::uint64_t sim_seed = 0;
  std::string sim_prefix;
  bool sim_signed = false;
  bool sim_precision = false;
  simulate->add_option("--m", sim_m, "Node count")->required();
  simulate->add_flag("--uniform", sim_uniform, "Draw the structure uniformly (m <= 5)");
  auto* nn_opt = simulate->add_option("--nn", sim_nn, "Expected neighbor count per node");
  simulate->add_option("--n", sim_n, "Sample count")->required();
  simulate->add_option("--seed", sim_seed, "Root seed");
  simulate->add_option("--out-prefix", sim_prefix,
                       "Writes <prefix>.data.csv, <prefix>.dag.json, <prefix>.params.json")
      ->required();
  simulate->add_flag("--signed-coefficients", sim_signed,
                     "Give each coefficient a random sign");
  simulate->add_flag("--tau-as-precision", sim_precision,
                     "Treat tau as the noise precision instead of its variance");

  // experiment rank | shd
  auto* experiment = app.add_subcommand("experiment", "Reproduce the simulation studies");
  experiment->require_subcommand(1);

  auto* rank = experiment->add_subcommand(
      "rank", "True structure's score rank among all DAGs as n grows");
  gnet::RankConfig rank_defaults;
  int rank_m = rank_defaults.m;
  std::vector<long> rank_grid = rank_defaults.sample_sizes;
  int rank_iterations = rank_defaults.iterations;
  std::vector<std::string> rank_metrics = {"rnml", "mdl3", "bic", "aic"};
  std::uint64_t rank_seed = 0;
  int rank_threads = 1;
  std::string rank_out, rank_config;
  auto* rank_m_opt = rank->add_option("--m", rank_m, "Node count (<= 5)");
  auto* rank_grid_opt =
      rank->add_option("--n-grid", rank_grid, "Sample sizes")->delimiter(',');
  auto* rank_iter_opt = rank->add_option("--iterations", rank_iterations, "Iteration count");
  auto* rank_metrics_opt = rank->add_option("--metrics", rank_metrics, "Metrics to compare")
                               ->delimiter(',')
                               ->check(CLI::IsMember(kMetricNames));
  auto* rank_seed_opt = rank->add_option("--seed", rank_seed, "Root seed");
  rank->add_option("--threads", rank_threads, "Worker thread cap");
  rank->add_option("--out", rank_out, "Output prefix for .rows.csv and .summary.csv")
      ->required();
  rank->add_option("--config", rank_config, "JSON config file (flags override it)");

  auto* shd_cmd = experiment->add_subcommand(
      "shd", "Structural Hamming distance of learned structures to the truth");
  gnet::ShdConfig shd_defaults;
  std::vector<int> shd_m_list = shd_defaults.node_counts;
  std::vector<double> shd_nn_list = shd_defaults.neighbor_counts;
  std::vector<long> shd_grid = shd_defaults.sample_sizes;
  int shd_iterations = shd_defaults.iterations;
  std::vector<std::string> shd_metrics = {"rnml", "mdl3", "bic", "aic"};
  std::uint64_t shd_seed = 0;
  int shd_threads = 1;
  std::string shd_out, shd_config;
  auto* shd_m_opt = shd_cmd->add_option("--m-list", shd_m_list, "Node counts")->delimiter(',');
  auto* shd_nn_opt =
      shd_cmd->add_option("--nn-list", shd_nn_list, "Expected neighbor counts")->delimiter(',');
  auto* shd_grid_opt = shd_cmd->add_option("--n-grid", shd_grid, "Sample sizes")->delimiter(',');
  auto* shd_iter_opt = shd_cmd->add_option("--iterations", shd_iterations, "Iteration count");
  auto* shd_metrics_opt = shd_cmd->add_option("--metrics", shd_metrics, "Metrics to compare")
                              ->delimiter(',')
                              ->check(CLI::IsMember(kMetricNames));
  auto* shd_seed_opt = shd_cmd->add_option("--seed", shd_seed, "Root seed");
  shd_cmd->add_option("--threads", shd_threads, "Worker thread cap");
  shd_cmd->add_option("--out", shd_out, "Output prefix for .rows.csv and .summary.csv")
      ->required();
  shd_cmd->add_option("--config", shd_config, "JSON config file (flags override it)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;  // pin usage failures to exit 2
  }

  if (score->parsed()) {
    return cmd_score(score_data, score_dag, score_metric, score_json);
  }
  if (learn->parsed()) {
    return cmd_learn(learn_data, learn_metric, learn_max_parents, learn_algorithm, learn_out);
  }
  if (simulate->parsed()) {
    if (sim_uniform == (nn_opt->count() > 0)) {
      std::cerr << "simulate: pass exactly one of --uniform and --nn\n";
      return kExitUsage;
    }
    return cmd_simulate(sim_m, sim_uniform, sim_nn, sim_n, sim_seed, sim_prefix, sim_signed,
                        sim_precision);
  }
  if (rank->parsed()) {
    gnet::RankConfig config;
    config.metrics = parse_metric_list(rank_metrics);
    if (!rank_config.empty()) {
      const json j = gnet::load_json_file(rank_config);
      check_config_keys(j, {"m", "sample_sizes", "iterations", "metrics", "seed"}, rank_config);
      if (j.contains("m")) config.m = j["m"].get<int>();
      apply_common_config(j, config.sample_sizes, config.iterations, config.metrics,
                          config.seed);
    }
    if (rank_m_opt->count()) config.m = rank_m;
    if (rank_grid_opt->count()) config.sample_sizes = rank_grid;
    if (rank_iter_opt->count()) config.iterations = rank_iterations;
    if (rank_metrics_opt->count()) config.metrics = parse_metric_list(rank_metrics);
    if (rank_seed_opt->count()) config.seed = rank_seed;
    write_experiment_csvs(gnet::run_rank(config, rank_threads), rank_out);
    return 0;
  }
  if (shd_cmd->parsed()) {
    gnet::ShdConfig config;
    config.metrics = parse_metric_list(shd_metrics);
    if (!shd_config.empty()) {
      const json j = gnet::load_json_file(shd_config);
      check_config_keys(
          j, {"node_counts", "neighbor_counts", "sample_sizes", "iterations", "metrics", "seed"},
          shd_config);
      if (j.contains("node_counts")) {
        config.node_counts = j["node_counts"].get<std::vector<int>>();
      }
      if (j.contains("neighbor_counts")) {
        config.neighbor_counts = j["neighbor_counts"].get<std::vector<double>>();
      }
      apply_common_config(j, config.sample_sizes, config.iterations, config.metrics,
                          config.seed);
    }
    if (shd_m_opt->count()) config.node_counts = shd_m_list;
    if (shd_nn_opt->count()) config.neighbor_counts = shd_nn_list;
    if (shd_grid_opt->count()) config.sample_sizes = shd_grid;
    if (shd_iter_opt->count()) config.iterations = shd_iterations;
    if (shd_metrics_opt->count()) config.metrics = parse_metric_list(shd_metrics);
    if (shd_seed_opt->count()) config.seed = shd_seed;
    write_experiment_csvs(gnet::run_shd(config, shd_threads), shd_out);
    return 0;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const gnet::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const gnet::DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const gnet::CycleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const gnet::SingularDesign& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const gnet::DegenerateFit& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const gnet::InsufficientSamples& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const gnet::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
