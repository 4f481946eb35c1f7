#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ppc/ppc.hpp"

namespace ppc::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kFailure = 1, kInvalidArgument = 2, kPrecondition = 3 };

// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Config files may be JSON objects or TOML/INI; JSON keys are option names.
class JsonOrTomlConfig : public CLI::ConfigBase {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    const std::string text((std::istreambuf_iterator<char>(input)), std::istreambuf_iterator<char>());
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
      std::istringstream again(text);
      return CLI::ConfigBase::from_config(again);
    }
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    flatten(doc, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

  static void flatten(const nlohmann::json& node, std::vector<std::string> parents, std::vector<CLI::ConfigItem>& out) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      if (it->is_object()) {
        auto nested = parents;
        nested.push_back(it.key());
        flatten(*it, nested, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (it->is_array()) {
        for (const auto& v : *it) item.inputs.push_back(scalar(v));
      } else if (it->is_boolean()) {
        item.inputs = {it->get<bool>() ? "true" : "false"};
      } else {
        item.inputs = {scalar(*it)};
      }
      out.push_back(std::move(item));
    }
  }
};

// What a command produced: a JSON document and the equivalent CSV rows.
struct CommandOutput {
  Json document;
  std::vector<Json> rows;
  std::string default_format = "json";
};

inline std::string csv_cell(const Json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  }
  if (v.is_array()) {
    std::string joined;
    for (std::size_t i = 0; i < v.size(); ++i) joined += (i ? ";" : "") + csv_cell(v[i]);
    return joined;
  }
  return v.dump();
}

inline std::string render_csv(const std::vector<Json>& rows) {
  std::string text;
  if (rows.empty()) return text;
  bool first = true;
  for (auto it = rows.front().begin(); it != rows.front().end(); ++it) {
    text += (first ? "" : ",") + it.key();
    first = false;
  }
  text += '\n';
  for (const auto& row : rows) {
    first = true;
    for (auto it = row.begin(); it != row.end(); ++it) {
      text += (first ? "" : ",") + csv_cell(*it);
      first = false;
    }
    text += '\n';
  }
  return text;
}

inline std::string render(const CommandOutput& output, const std::string& format) {
  const std::string& f = format.empty() ? output.default_format : format;
  if (f == "csv") return render_csv(output.rows);
  return output.document.dump(2) + "\n";
}

// Writes next to the destination and renames into place, so a failed run
// never leaves a partial file behind.
inline void write_atomically(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open output file " + tmp.string());
    f << text;
    f.flush();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("failed writing output file " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

struct CommonOptions {
  std::uint64_t seed = 1;
  std::string out;
  std::string format;
  unsigned threads = 0;
  std::string config;
};

struct ChannelOptions {
  double epsilon = 0.05;
  std::optional<double> p;
  std::optional<double> q;

  BinaryAsymmetricChannel channel() const {
    if (p.has_value() != q.has_value()) throw std::invalid_argument("--p and --q must be given together");
    if (p) return {*p, *q};
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("--epsilon must lie in [0, 1]");
    return BinaryAsymmetricChannel::symmetric(epsilon);
  }

  std::string label() const {
    if (p) return "p=" + format_double(*p) + ";q=" + format_double(*q);
    return format_double(epsilon);
  }
};

struct CompareCodesOptions {
  std::size_t k = 10;
  std::size_t max_count = 6;
  std::uint64_t trials = 100000;
  ChannelOptions channel;
};

// Successive addition: for model counts 1..max_count, a repetition code with
// that many primitive blocks against the pairwise-parity code truncated to
// the same number of outputs (capped at its full length).
inline CommandOutput compare_codes(const CompareCodesOptions& o, const CommonOptions& common) {
  if (o.k < 2 || o.k > kMaxAttributes) throw std::invalid_argument("--k must lie in [2, 24]");
  if (o.max_count < 1) throw std::invalid_argument("--max-count must be >= 1");
  if (o.trials < 1) throw std::invalid_argument("--trials must be >= 1");
  const auto channel = o.channel.channel();
  const auto parity = make_pairwise_parity_code(o.k);

  struct Row {
    std::size_t count;
    OutputCode code;
  };
  std::vector<Row> plan;
  for (std::size_t c = 1; c <= o.max_count; ++c) {
    plan.push_back({c, make_repetition_code(o.k, c)});
    plan.push_back({c, parity.prefix(std::min(c * o.k, parity.n()))});
  }

  CommandOutput out;
  out.default_format = "csv";
  out.document = Json::array();
  SimConfig config;
  config.trials = o.trials;
  config.seed = common.seed;
  config.threads = common.threads;
  for (const auto& [count, code] : plan) {
    const auto stats = simulate(code, ChannelEnsemble::uniform(code.n(), channel), config);
    const auto block = stats.block_error();
    const auto acc = stats.bit_accuracy();
    double mean_acc = 0.0;
    for (double a : acc) mean_acc += a;
    mean_acc /= static_cast<double>(acc.size());
    Json row;
    row["count"] = count;
    row["code_name"] = code.name();
    row["K"] = code.k();
    row["N"] = code.n();
    row["epsilon_or_pq"] = o.channel.label();
    row["trials"] = o.trials;
    row["seed"] = common.seed;
    row["block_error"] = block.estimate;
    row["std_error"] = block.std_error;
    row["mean_hamming"] = stats.mean_hamming_distance();
    row["mean_bit_accuracy"] = mean_acc;
    row["bit_accuracies"] = acc;
    out.rows.push_back(row);
    out.document.push_back(row);
  }
  return out;
}

struct SimulateOptions {
  std::string code = "hamming74";
  std::string code_file;
  std::size_t k = 4;
  std::size_t copies = 3;
  std::uint64_t trials = 100000;
  std::string method = "mc";
  double shared_flip = 0.0;
  ChannelOptions channel;
};

inline OutputCode build_code(const SimulateOptions& o) {
  if (!o.code_file.empty()) {
    std::ifstream f(o.code_file);
    if (!f) throw std::invalid_argument("cannot read code file " + o.code_file);
    nlohmann::json doc;
    try {
      f >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("code file is not valid JSON: ") + e.what());
    }
    return code_from_json(doc);
  }
  if (o.code == "identity") return make_identity_code(o.k);
  if (o.code == "repetition") return make_repetition_code(o.k, o.copies);
  if (o.code == "pairwise") return make_pairwise_parity_code(o.k);
  if (o.code == "hamming74") return make_hamming_7_4();
  throw std::invalid_argument("unknown code family " + o.code);
}

inline CommandOutput simulate_code(const SimulateOptions& o, const CommonOptions& common) {
  const auto code = build_code(o);
  const auto ensemble = ChannelEnsemble::uniform(code.n(), o.channel.channel());
  Json row;
  row["code_name"] = code.name();
  row["K"] = code.k();
  row["N"] = code.n();
  row["epsilon_or_pq"] = o.channel.label();
  if (o.method == "exact") {
    if (o.shared_flip != 0.0) throw std::invalid_argument("exact evaluation assumes independent channels");
    row["trials"] = 0;
    row["seed"] = common.seed;
    row["block_error"] = block_error_exact(code, ensemble);
    row["std_error"] = 0.0;
  } else {
    SimConfig config;
    config.trials = o.trials;
    config.seed = common.seed;
    config.shared_flip_probability = o.shared_flip;
    config.threads = common.threads;
    const auto est = block_error_monte_carlo(code, ensemble, config);
    row["trials"] = o.trials;
    row["seed"] = common.seed;
    row["block_error"] = est.estimate;
    row["std_error"] = est.std_error;
  }
  CommandOutput out;
  out.default_format = "csv";
  out.rows = {row};
  out.document = row;
  return out;
}

struct EstimatorOptions {
  double alpha = 0.5;
  double eps1 = 0.19;
  double eps2 = 0.19;
  std::int64_t n = 100;
  std::int64_t m = 20;
  double grid_step = 1e-4;
  std::string oracle_spec;
  std::vector<double> accuracies;
  std::vector<double> probabilities;

  EstimatorParams params() const {
    EstimatorParams p{alpha, n, m, eps1, eps2};
    p.validate();
    return p;
  }
};

inline CommandOutput confidence(const EstimatorOptions& o) {
  const auto params = o.params();
  const auto bound = confidence_bound(params, o.grid_step);
  Json row;
  row["confidence"] = bound.confidence;
  row["minimizing_theta"] = bound.sweep.minimizing_theta;
  row["false_accept_prob"] = false_accept_prob(params);
  row["grid_step"] = bound.sweep.grid_step;
  row["refined"] = bound.sweep.refined;
  return {row, {row}, "json"};
}

// Oracle spec: {"accuracies": [...], "probabilities": [...]} (probabilities optional).
inline TableOracle load_oracle(const EstimatorOptions& o) {
  if (!o.oracle_spec.empty()) {
    std::ifstream f(o.oracle_spec);
    if (!f) throw std::invalid_argument("cannot read oracle spec " + o.oracle_spec);
    nlohmann::json doc;
    try {
      f >> doc;
      auto acc = doc.at("accuracies").get<std::vector<double>>();
      auto prob = doc.value("probabilities", std::vector<double>{});
      return TableOracle(std::move(acc), std::move(prob));
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("malformed oracle spec: ") + e.what());
    }
  }
  if (o.accuracies.empty()) throw std::invalid_argument("estimate needs --oracle-spec or --accuracies");
  return TableOracle(o.accuracies, o.probabilities);
}

inline CommandOutput estimate(const EstimatorOptions& o, const CommonOptions& common) {
  const auto params = o.params();
  const auto oracle = load_oracle(o);
  const auto r = run_estimation(oracle, params, common.seed);
  Json row;
  row["q_hat"] = r.q_hat;
  row["lower_bound"] = r.lower_bound;
  row["confidence"] = r.confidence;
  row["minimizing_theta"] = r.minimizing_theta;
  row["empirical_accuracies"] = r.empirical_accuracies;
  return {row, {row}, "json"};
}

struct XorDemoOptions {
  std::size_t k = 2;
  std::vector<std::size_t> support{0, 1};
  double noise = 0.0;
  std::size_t samples = 200;
  std::size_t max_epochs = 1000;
};

inline CommandOutput xor_demo(const XorDemoOptions& o, const CommonOptions& common) {
  if (o.k < 2) throw std::invalid_argument("--k must be >= 2 for the quadratic transform");
  const auto raw = parity_dataset(o.k, o.support, o.noise, o.samples, common.seed);
  const auto raw_fit = train_perceptron(raw, o.max_epochs, common.seed);
  const auto quad_fit = train_perceptron(quad_transform(raw), o.max_epochs, common.seed);
  Json row;
  row["raw_converged"] = raw_fit.converged;
  row["transformed_converged"] = quad_fit.converged;
  row["epochs_raw"] = raw_fit.epochs_used;
  row["epochs_transformed"] = quad_fit.epochs_used;
  return {row, {row}, "json"};
}

struct BagPlanOptions {
  std::size_t items = 10;
  std::size_t targets = 2;
};

inline CommandOutput bag_plan(const BagPlanOptions& o) {
  const auto plan = plan_targeted_bagging(o.items, o.targets);
  CommandOutput out;
  out.document["n_items"] = plan.n_items;
  out.document["n_targets"] = plan.assignments.size();
  out.document["assignments"] = plan.assignments;
  for (std::size_t t = 0; t < plan.assignments.size(); ++t) {
    const auto& fold = plan.assignments[t];
    Json row;
    row["target"] = t;
    row["begin"] = fold.front();
    row["end"] = fold.back() + 1;
    row["size"] = fold.size();
    out.rows.push_back(row);
  }
  return out;
}

inline void add_common(CLI::App* sub, CommonOptions& common) {
  sub->add_option("--seed", common.seed, "Master RNG seed")->capture_default_str();
  sub->add_option("--out", common.out, "Write output to this file instead of stdout");
  sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--threads", common.threads, "Worker threads (0 = all cores)")->capture_default_str();
  sub->add_option("--config", common.config, "JSON or TOML file mirroring the flags");
}

// CLI11 only reads config files attached to the top-level app, so a
// subcommand's --config is expanded here into ordinary flags placed right
// after the subcommand name. Keys also given on the command line are
// skipped, which lets explicit flags override the file. Keys may sit at the
// top level or in a section named after the subcommand.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
  if (args.size() < 2) return args;
  std::string path;
  std::vector<std::string> explicit_keys;
  for (std::size_t i = 2; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a.rfind("--", 0) != 0) continue;
    const auto eq = a.find('=');
    const auto key = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    explicit_keys.push_back(key);
    if (key == "config") path = eq != std::string::npos ? a.substr(eq + 1) : (i + 1 < args.size() ? args[i + 1] : "");
  }
  if (path.empty()) return args;

  std::ifstream f(path, std::ios::binary);
  if (!f) throw CLI::FileError::Missing(path);
  const auto items = JsonOrTomlConfig().from_config(f);
  const auto& command = args[1];
  std::vector<std::string> injected;
  for (const auto& item : items) {
    if (!(item.parents.empty() || (item.parents.size() == 1 && item.parents.front() == command))) {
      throw CLI::ConfigError("config section " + item.fullname() + " does not belong to " + command);
    }
    if (item.name == "config" || item.name == "++" || item.name == "--") continue;
    if (std::find(explicit_keys.begin(), explicit_keys.end(), item.name) != explicit_keys.end()) continue;
    std::string joined;
    for (std::size_t i = 0; i < item.inputs.size(); ++i) joined += (i ? "," : "") + item.inputs[i];
    injected.push_back("--" + item.name + "=" + joined);
  }
  args.insert(args.begin() + 2, injected.begin(), injected.end());
  return args;
}

inline void add_channel(CLI::App* sub, ChannelOptions& ch) {
  sub->add_option("--epsilon", ch.epsilon, "BSC crossover probability")->capture_default_str();
  sub->add_option("--p", ch.p, "P(0 -> 0) for an asymmetric channel");
  sub->add_option("--q", ch.q, "P(1 -> 1) for an asymmetric channel");
}

inline void add_estimator(CLI::App* sub, EstimatorOptions& e) {
  sub->add_option("--alpha", e.alpha, "Accuracy threshold")->capture_default_str();
  sub->add_option("--eps1", e.eps1, "Accuracy deviation threshold")->capture_default_str();
  sub->add_option("--eps2", e.eps2, "Fraction deviation threshold")->capture_default_str();
  sub->add_option("--n", e.n, "Categories sampled (N)")->capture_default_str();
  sub->add_option("--m", e.m, "Instances per category (M)")->capture_default_str();
}

// Parses argv and runs one subcommand. Errors go to `err`; the exit code
// follows ExitCode.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parity partition coding experiments", "ppc"};
  app.require_subcommand(1);

  CommonOptions common;
  CompareCodesOptions compare;
  SimulateOptions sim;
  EstimatorOptions est;
  XorDemoOptions xo;
  BagPlanOptions bag;

  auto* compare_cmd = app.add_subcommand("compare-codes", "Repetition vs pairwise-parity at matched model counts");
  add_common(compare_cmd, common);
  add_channel(compare_cmd, compare.channel);
  compare_cmd->add_option("--k", compare.k, "Attributes")->capture_default_str();
  compare_cmd->add_option("--max-count", compare.max_count, "Largest model count")->capture_default_str();
  compare_cmd->add_option("--trials", compare.trials, "Monte Carlo trials per row")->capture_default_str();

  auto* sim_cmd = app.add_subcommand("simulate", "Block error of one code over a uniform channel ensemble");
  add_common(sim_cmd, common);
  add_channel(sim_cmd, sim.channel);
  sim_cmd->add_option("--code", sim.code, "Code family")
      ->check(CLI::IsMember({"identity", "repetition", "pairwise", "hamming74"}))
      ->capture_default_str();
  sim_cmd->add_option("--code-file", sim.code_file, "JSON code description")->check(CLI::ExistingFile);
  sim_cmd->add_option("--k", sim.k, "Attributes")->capture_default_str();
  sim_cmd->add_option("--nr", sim.copies, "Repetition copies")->capture_default_str();
  sim_cmd->add_option("--trials", sim.trials, "Monte Carlo trials")->capture_default_str();
  sim_cmd->add_option("--method", sim.method, "mc or exact")->check(CLI::IsMember({"mc", "exact"}))->capture_default_str();
  sim_cmd->add_option("--shared-flip", sim.shared_flip, "Probability of a fully correlated trial")->capture_default_str();

  auto* conf_cmd = app.add_subcommand("confidence", "Confidence bound of a fraction-accurate estimator");
  add_common(conf_cmd, common);
  add_estimator(conf_cmd, est);
  conf_cmd->add_option("--grid-step", est.grid_step, "Initial theta grid step")->capture_default_str();

  auto* est_cmd = app.add_subcommand("estimate", "Run the fraction-accurate estimator against an oracle");
  add_common(est_cmd, common);
  add_estimator(est_cmd, est);
  est_cmd->add_option("--oracle-spec", est.oracle_spec, "JSON {accuracies, probabilities}")->check(CLI::ExistingFile);
  est_cmd->add_option("--accuracies", est.accuracies, "Per-category accuracies")->delimiter(',');
  est_cmd->add_option("--probabilities", est.probabilities, "Per-category draw probabilities")->delimiter(',');

  auto* xor_cmd = app.add_subcommand("xor-demo", "Perceptron separability of parity before/after the quadratic map");
  add_common(xor_cmd, common);
  xor_cmd->add_option("--k", xo.k, "Feature bits")->capture_default_str();
  xor_cmd->add_option("--support", xo.support, "Parity support indices")->delimiter(',');
  xor_cmd->add_option("--noise", xo.noise, "Label flip probability")->capture_default_str();
  xor_cmd->add_option("--samples", xo.samples, "Dataset size")->capture_default_str();
  xor_cmd->add_option("--max-epochs", xo.max_epochs, "Perceptron epoch budget")->capture_default_str();

  auto* bag_cmd = app.add_subcommand("bag-plan", "Targeted-bagging split plan");
  add_common(bag_cmd, common);
  bag_cmd->add_option("--items", bag.items, "Dataset size")->capture_default_str();
  bag_cmd->add_option("--targets", bag.targets, "Number of targets")->capture_default_str();

  try {
    const auto expanded = expand_config(std::vector<std::string>(argv, argv + argc));
    std::vector<const char*> expanded_argv;
    for (const auto& a : expanded) expanded_argv.push_back(a.c_str());
    app.parse(static_cast<int>(expanded_argv.size()), expanded_argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help(app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name());
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidArgument;
  }

  try {
    CommandOutput result;
    if (*compare_cmd) {
      result = compare_codes(compare, common);
    } else if (*sim_cmd) {
      result = simulate_code(sim, common);
    } else if (*conf_cmd) {
      result = confidence(est);
    } else if (*est_cmd) {
      result = estimate(est, common);
    } else if (*xor_cmd) {
      result = xor_demo(xo, common);
    } else {
      result = bag_plan(bag);
    }
    const auto text = render(result, common.format);
    if (common.out.empty()) {
      out << text;
    } else {
      write_atomically(common.out, text);
    }
    return kOk;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidArgument;
  } catch (const capacity_error& e) {
    err << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const insufficient_samples_error& e) {
    err << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace ppc::cli
