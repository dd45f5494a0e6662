#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "spca/algorithms.hpp"
#include "spca/data_driven.hpp"
#include "spca/error.hpp"
#include "spca/experiments.hpp"
#include "spca/io/config.hpp"
#include "spca/io/dataset_io.hpp"
#include "spca/io/svg.hpp"
#include "spca/metrics.hpp"
#include "spca/model.hpp"

namespace spca::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using io::Config;
using io::ConfigError;

const std::map<std::string, std::set<std::string>> kAllowedKeys = {
    {"model", {"p", "n", "r", "k", "beta", "theta", "seed"}},
    {"run", {"methods", "tau", "rho", "r", "k", "beta", "theta", "k0", "nu_prime"}},
    {"sweep",
     {"method", "ps", "ratios", "beta", "theta", "tau", "rho", "trials", "seed", "k0_factor", "nu_prime",
      "threads"}},
    {"demo", {"p", "ns", "beta", "nu_prime", "blocks", "seed"}},
};

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;  // 0: take [sweep] threads from the config
};

Config load_config(const std::string& path) {
  Config cfg = Config::load(path);
  cfg.check_keys(kAllowedKeys);
  return cfg;
}

// Broadcasts a single value to `count` entries.
template <typename T>
std::vector<T> per_spike(std::vector<T> values, std::size_t count, const std::string& key) {
  if (values.size() == 1 && count > 1) values.assign(count, values.front());
  if (values.size() != count) {
    throw ConfigError("'" + key + "' needs 1 or " + std::to_string(count) + " values", 0);
  }
  return values;
}

double parse_rho(const std::string& text) {
  if (text == "auto") return std::numeric_limits<double>::quiet_NaN();
  const auto v = io::parse_double(text);
  if (!v || *v < 0.0) throw ConfigError("rho must be 'auto', 'inf' or a number >= 0, got '" + text + "'", 0);
  return *v;
}

// ---- generate --------------------------------------------------------------

Dataset synthesize(const Config& cfg, std::optional<std::uint64_t> seed_override) {
  const std::size_t p = cfg.get_size("model", "p");
  const std::size_t n = cfg.get_size("model", "n");
  const std::size_t r = cfg.get_size("model", "r", 1);
  const double theta = cfg.get_double("model", "theta", 1.0);
  const std::uint64_t seed = seed_override.value_or(cfg.get_u64("model", "seed", 1));
  if (p == 0 || n == 0) throw ConfigError("model.p and model.n must be positive", 0);

  std::vector<std::size_t> ks;
  std::vector<double> betas;
  if (r > 0) {
    ks = per_spike(cfg.get_sizes("model", "k"), r, "model.k");
    betas = per_spike(cfg.get_doubles("model", "beta"), r, "model.beta");
  }

  Rng rng(seed);
  const auto supports = random_disjoint_supports(p, ks, rng);
  std::vector<SpikeSpec> specs;
  for (const auto& support : supports) {
    SpikeSpec spec;
    spec.p = p;
    spec.support = support;
    spec.theta = theta;
    spec.kind = theta >= 1.0 ? SpikeKind::kUniformMagnitude : SpikeKind::kSignedUniform;
    specs.push_back(std::move(spec));
  }
  const ModelParams model = make_model(p, betas, specs, rng);
  Dataset data = sample_dataset(model, n, rng);
  data.seed = seed;
  return data;
}

int cmd_generate(const Common& c, std::ostream& err) {
  const Config cfg = load_config(c.config);
  const Dataset data = synthesize(cfg, c.seed);
  const fs::path out = c.out;
  io::save_matrix(out, data.x);
  std::ofstream truth(io::truth_path_for(out));
  if (!truth) throw IoError("cannot write " + io::truth_path_for(out).string());
  io::write_truth(truth, *data.truth);
  err << "wrote " << data.rows() << " x " << data.p() << " to " << out.string() << "\n";
  return kOk;
}

// ---- run -------------------------------------------------------------------

json one_based(const std::vector<std::size_t>& indices) {
  json arr = json::array();
  for (const auto i : indices) arr.push_back(i + 1);
  return arr;
}

std::vector<std::size_t> nonzeros(const Eigen::VectorXd& v) {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0.0) out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

void add_truth_metrics(json& rec, const Dataset& data, const std::vector<std::size_t>* support,
                       const std::vector<Eigen::VectorXd>& vectors) {
  if (!data.truth) return;
  const ModelParams& truth = *data.truth;
  if (support != nullptr) {
    const auto m = support_metrics(*support, truth.union_support(), data.p());
    rec["exact"] = m.exact;
    rec["fraction"] = m.fraction;
    rec["false_pos"] = m.false_pos;
    rec["false_neg"] = m.false_neg;
  }
  json losses = json::array();
  for (std::size_t q = 0; q < std::min(vectors.size(), truth.r()); ++q) {
    losses.push_back(vector_loss(vectors[q], truth.spikes[q]));
  }
  rec["loss"] = losses;
}

std::vector<std::size_t> run_ks(const Config& cfg, const Dataset& data, std::size_t r) {
  if (cfg.has("run", "k")) return per_spike(cfg.get_sizes("run", "k"), r, "run.k");
  if (data.truth && data.truth->r() >= r) {
    std::vector<std::size_t> ks;
    for (std::size_t q = 0; q < r; ++q) ks.push_back(data.truth->support(q).size());
    return ks;
  }
  throw ConfigError("run.k is required when the dataset has no truth sidecar", 0);
}

std::vector<double> run_betas(const Config& cfg, const Dataset& data, std::size_t r) {
  if (cfg.has("run", "beta")) return per_spike(cfg.get_doubles("run", "beta"), r, "run.beta");
  if (data.truth && data.truth->r() >= r) {
    return {data.truth->betas.begin(), data.truth->betas.begin() + static_cast<std::ptrdiff_t>(r)};
  }
  throw ConfigError("rho = auto needs run.beta when the dataset has no truth sidecar", 0);
}

json run_method(Method method, const Config& cfg, const Dataset& data,
                const std::shared_ptr<BulkEdgeCache>& cache) {
  const double tau = cfg.get_double("run", "tau", 4.0);
  const double theta = cfg.get_double("run", "theta", 1.0);
  const std::size_t r = cfg.get_size("run", "r", data.truth ? std::max<std::size_t>(1, data.truth->r()) : 1);
  const double nu_prime = cfg.get_double("run", "nu_prime", 4.0);
  const std::string rho_text = cfg.get_string("run", "rho", "auto");

  json rec;
  rec["method"] = std::string(to_string(method));
  json params;
  const auto start = std::chrono::steady_clock::now();

  try {
    switch (method) {
      case Method::kCT:
      case Method::kCTK0: {
        const auto ks = run_ks(cfg, data, r);
        double rho = parse_rho(rho_text);
        if (std::isnan(rho)) rho = default_rho(run_betas(cfg, data, r), theta, ks);
        params = {{"tau", tau}, {"rho", std::isinf(rho) ? json("inf") : json(rho)}, {"r", r}, {"theta", theta}};
        CTResult res;
        if (method == Method::kCT) {
          CTConfig ct;
          ct.tau = tau;
          ct.rho = rho;
          ct.r = r;
          ct.ks = ks;
          ct.theta = theta;
          params["k"] = ks;
          res = covariance_thresholding(data, ct);
        } else {
          std::size_t k0 = 0;
          if (cfg.has("run", "k0")) {
            k0 = cfg.get_size("run", "k0");
          } else {
            for (const auto k : ks) k0 += 10 * k;
          }
          params["k0"] = k0;
          res = covariance_thresholding_k0(data, k0, theta, tau, rho, r);
        }
        rec["support"] = one_based(res.support_hat);
        rec["eigvals"] = res.eigvals;
        const auto& d = res.diagnostics;
        rec["diagnostics"] = {{"nnz", d.nnz}, {"residuals", d.residuals}};
        if (d.k0_in_guarantee_regime) rec["diagnostics"]["k0_in_guarantee_regime"] = *d.k0_in_guarantee_regime;
        rec["timing_ms"] = {{"gram", d.gram_ms}, {"threshold", d.threshold_ms}, {"eigen", d.eigen_ms}};
        add_truth_metrics(rec, data, &res.support_hat, res.eigvecs);
        break;
      }
      case Method::kDT: {
        const std::size_t k = cfg.has("run", "k") ? cfg.get_sizes("run", "k").front() : [&] {
          std::size_t total = 0;
          for (const auto kq : run_ks(cfg, data, r)) total += kq;
          return total;
        }();
        params = {{"k", k}};
        const auto res = diagonal_thresholding(data, k);
        rec["support"] = one_based(res.selected);
        rec["eigvals"] = json::array({res.value});
        add_truth_metrics(rec, data, &res.selected, {res.vector});
        break;
      }
      case Method::kDataDriven: {
        params = {{"nu_prime", nu_prime}};
        DataDrivenOptions opts;
        opts.nu_prime = nu_prime;
        opts.edge_cache = cache;
        const auto res = data_driven_ct(data.x, opts);
        std::set<std::size_t> merged;
        for (const auto& v : res.components) {
          for (const auto i : nonzeros(v)) merged.insert(i);
        }
        const std::vector<std::size_t> support(merged.begin(), merged.end());
        rec["support"] = one_based(support);
        rec["eigvals"] = res.eigvals;
        rec["diagnostics"] = {
            {"r_hat", res.r_hat}, {"sigma_hat", res.sigma_hat}, {"bulk_edge", res.bulk_edge}, {"nnz", res.nnz}};
        add_truth_metrics(rec, data, &support, res.components);
        break;
      }
      case Method::kPCA: {
        params = {{"r", r}};
        const auto pairs = vanilla_pca(data, r);
        std::vector<Eigen::VectorXd> vectors;
        json values = json::array();
        for (const auto& pair : pairs) {
          values.push_back(pair.value);
          vectors.push_back(pair.vector);
        }
        rec["eigvals"] = values;
        add_truth_metrics(rec, data, nullptr, vectors);
        break;
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidConfig&) {
    throw;
  } catch (const Error& e) {
    rec["params"] = params;
    rec["error"] = e.what();
    return rec;
  }
  rec["params"] = params;
  const auto stop = std::chrono::steady_clock::now();
  rec["wall_ms"] = std::chrono::duration<double, std::milli>(stop - start).count();
  return rec;
}

int cmd_run(const Common& c, const std::string& data_path, std::ostream& out, std::ostream& err) {
  const Config cfg = load_config(c.config);

  std::vector<Method> methods;
  for (const auto& name : cfg.get_strings("run", "methods")) methods.push_back(parse_method(name));

  Dataset data;
  if (!data_path.empty()) {
    const fs::path path = data_path;
    if (!fs::exists(path)) throw IoError("dataset not found: " + path.string());
    data = dataset_from_matrix(io::load_matrix(path));
    const fs::path truth_path = io::truth_path_for(path);
    if (fs::exists(truth_path)) {
      std::ifstream in(truth_path);
      ModelParams truth = io::read_truth(in);
      if (truth.p != data.p()) throw IoError("truth sidecar dimension differs from the dataset");
      data.truth = std::move(truth);
    }
  } else {
    data = synthesize(cfg, c.seed);
  }

  // Records are buffered so a configuration error in a later method leaves no
  // partial output behind.
  auto cache = std::make_shared<BulkEdgeCache>();
  std::vector<json> records;
  bool failed = false;
  for (const auto method : methods) {
    records.push_back(run_method(method, cfg, data, cache));
    failed = failed || records.back().contains("error");
  }
  for (const auto& rec : records) out << rec.dump() << "\n";
  if (failed) err << "one or more estimators failed\n";
  return failed ? kEstimatorFailure : kOk;
}

// ---- sweep -----------------------------------------------------------------

SweepConfig sweep_config(const Config& cfg, const Common& c) {
  SweepConfig s;
  s.method = parse_method(cfg.get_string("sweep", "method"));
  s.ps = cfg.get_sizes("sweep", "ps");
  s.k_over_sqrt_n = cfg.get_doubles("sweep", "ratios");
  s.beta = cfg.get_double("sweep", "beta");
  s.theta = cfg.get_double("sweep", "theta", 1.0);
  s.tau = cfg.get_double("sweep", "tau", 4.0);
  const double rho = parse_rho(cfg.get_string("sweep", "rho", "auto"));
  s.rho_mode = std::isnan(rho) ? RhoMode::kAuto : RhoMode::kExplicit;
  s.rho = std::isnan(rho) ? 0.0 : rho;
  s.trials = cfg.get_size("sweep", "trials", 100);
  s.base_seed = c.seed.value_or(cfg.get_u64("sweep", "seed", 1));
  s.k0_factor = cfg.get_double("sweep", "k0_factor", 10.0);
  s.nu_prime = cfg.get_double("sweep", "nu_prime", 4.0);
  s.threads = c.threads > 0 ? c.threads : cfg.get_size("sweep", "threads", 1);
  s.validate();
  return s;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

int cmd_sweep(const Common& c, const std::string& svg_path, std::ostream& err) {
  const Config cfg = load_config(c.config);
  const SweepConfig s = sweep_config(cfg, c);
  const std::size_t total = s.ps.size() * s.k_over_sqrt_n.size();
  std::size_t done = 0;
  const auto rows = sweep_phase_transition(s, [&](const SweepRow& row) {
    err << "cell " << ++done << "/" << total << " p=" << row.cell.p << " k=" << row.cell.k
        << " success=" << format_g6(row.success_rate) << "\n";
  });

  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  write_text(c.out, csv.str());

  if (!svg_path.empty()) {
    std::vector<io::Series> series;
    for (const auto p : s.ps) {
      io::Series ser;
      ser.label = "p=" + std::to_string(p);
      for (const auto& row : rows) {
        if (row.cell.p != p) continue;
        ser.x.push_back(row.cell.ratio);
        ser.y.push_back(row.success_rate);
      }
      series.push_back(std::move(ser));
    }
    io::PlotSpec spec;
    spec.title = std::string(to_string(s.method)) + " success rate";
    spec.x_label = "k/sqrt(n)";
    spec.y_label = "success rate";
    spec.y_min = 0.0;
    spec.y_max = 1.0;
    write_text(svg_path, io::line_chart_svg(spec, series));
  }
  return kOk;
}

// ---- demo-wavelet ----------------------------------------------------------

int cmd_demo(const Common& c, std::ostream& err) {
  const Config cfg = load_config(c.config);
  WaveletDemoConfig d;
  d.p = cfg.get_size("demo", "p", d.p);
  if (cfg.has("demo", "ns")) d.ns = cfg.get_sizes("demo", "ns");
  d.beta = cfg.get_double("demo", "beta", d.beta);
  d.nu_prime = cfg.get_double("demo", "nu_prime", d.nu_prime);
  d.blocks = cfg.get_size("demo", "blocks", d.blocks);
  d.seed = c.seed.value_or(cfg.get_u64("demo", "seed", d.seed));
  if (d.ns.empty()) throw ConfigError("demo.ns must list at least one sample size", 0);

  const fs::path dir = c.out;
  fs::create_directories(dir);

  auto ctx = TrialContext{};
  std::vector<WaveletTrial> trials;
  for (const auto n : d.ns) trials.push_back(wavelet_demo(d.p, n, d.beta, d.nu_prime, d.blocks, d.seed, ctx));

  const std::vector<std::pair<Method, std::string>> files = {
      {Method::kPCA, "pca"}, {Method::kDT, "dt"}, {Method::kDataDriven, "ct"}};
  const Eigen::VectorXd& clean = trials.front().clean;

  std::ostringstream corr;
  corr << "method,n,correlation,selected\n";
  for (const auto& [method, stem] : files) {
    std::ostringstream csv;
    csv << "index,clean";
    for (const auto n : d.ns) csv << ",n_" << n;
    csv << "\n";
    std::vector<const ReconstructionRecord*> recs;
    for (const auto& t : trials) {
      for (const auto& r : t.records) {
        if (r.method == method) recs.push_back(&r);
      }
    }
    for (std::size_t i = 0; i < d.p; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      csv << (i + 1) << "," << format_g6(clean(ii));
      for (const auto* r : recs) csv << "," << format_g6(r->reconstruction(ii));
      csv << "\n";
    }
    write_text(dir / (stem + ".csv"), csv.str());

    std::vector<io::Series> series;
    io::Series truth{"clean", {}, {}, true};
    for (std::size_t i = 0; i < d.p; ++i) {
      truth.x.push_back(static_cast<double>(i + 1));
      truth.y.push_back(clean(static_cast<Eigen::Index>(i)));
    }
    series.push_back(std::move(truth));
    for (const auto* r : recs) {
      io::Series ser{"n=" + std::to_string(r->n), {}, {}, false};
      for (std::size_t i = 0; i < d.p; ++i) {
        ser.x.push_back(static_cast<double>(i + 1));
        ser.y.push_back(r->reconstruction(static_cast<Eigen::Index>(i)));
      }
      series.push_back(std::move(ser));
      corr << stem << "," << r->n << "," << format_g6(r->correlation) << "," << r->selected << "\n";
      err << stem << " n=" << r->n << " correlation=" << format_g6(r->correlation) << "\n";
    }
    io::PlotSpec spec;
    spec.title = stem + " reconstruction";
    spec.x_label = "index";
    spec.y_label = "value";
    spec.width = 900;
    write_text(dir / (stem + ".svg"), io::line_chart_svg(spec, series));
  }
  write_text(dir / "correlations.csv", corr.str());
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse PCA by covariance thresholding"};
  app.require_subcommand(1);

  Common c;
  std::uint64_t seed = 0;
  std::string data_path;
  std::string svg_path;

  auto add_common = [&](CLI::App* sub, bool needs_out) {
    sub->add_option("--config", c.config, "Configuration file")->required()->check(CLI::ExistingFile);
    auto* o = sub->add_option("--out", c.out, "Output path");
    if (needs_out) o->required();
    sub->add_option("--seed", seed, "Override the configured seed");
  };

  auto* gen = app.add_subcommand("generate", "Sample a synthetic dataset and its truth sidecar");
  add_common(gen, true);
  auto* runc = app.add_subcommand("run", "Run estimators and print one JSON record per method");
  add_common(runc, false);
  runc->add_option("--data", data_path, "Dataset (CSV or .bin); synthesized from [model] when absent");
  auto* sweep = app.add_subcommand("sweep", "Phase-transition sweep to CSV");
  add_common(sweep, true);
  sweep->add_option("--svg", svg_path, "Also write a success-rate chart");
  sweep->add_option("--threads", c.threads, "Worker threads (speed only)")->check(CLI::PositiveNumber);
  auto* demo = app.add_subcommand("demo-wavelet", "Haar-domain reconstruction demo");
  add_common(demo, true);

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("spca");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  for (auto* sub : {gen, runc, sweep, demo}) {
    if (sub->count("--seed") > 0) c.seed = seed;
  }

  try {
    if (*gen) return cmd_generate(c, err);
    if (*runc) return cmd_run(c, data_path, out, err);
    if (*sweep) return cmd_sweep(c, svg_path, err);
    if (*demo) return cmd_demo(c, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidConfig& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kUsage;
  } catch (const InfeasibleSpec& e) {
    err << "infeasible model: " << e.what() << "\n";
    return kUsage;
  } catch (const LengthNotPowerOfTwo& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "estimator failure: " << e.what() << "\n";
    return kEstimatorFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kEstimatorFailure;
  }
  return kUsage;
}

}  // namespace spca::cli
