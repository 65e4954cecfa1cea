#include "discflow/harness/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "discflow/diagnostics/ess.hpp"
#include "discflow/diagnostics/logprob.hpp"
#include "discflow/harness/experiment.hpp"
#include "discflow/harness/metadata.hpp"
#include "discflow/harness/pgm.hpp"
#include "discflow/harness/presets.hpp"
#include "discflow/harness/samples_io.hpp"
#include "discflow/samplers/hmc.hpp"
#include "discflow/samplers/push.hpp"
#include "discflow/targets/gmm.hpp"

namespace discflow::harness {

namespace fs = std::filesystem;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string target_label(const Experiment& ex) {
  const std::string kind = ex.target_kind();
  if (kind == "gmm2d") return "gmm2d-" + std::to_string(ex.cfg.geti("target", "bits", 6)) + "bit";
  if (kind == "ising") {
    return "ising-" + std::to_string(ex.ising_height) + "x" + std::to_string(ex.ising_width);
  }
  if (kind == "bvs") return "bvs-" + std::to_string(ex.cfg.geti("target", "features", 100));
  if (kind == "qlogreg") return "qlogreg-" + std::to_string(ex.target->dim());
  return kind + "-" + std::to_string(ex.target->dim()) + "d" +
         std::to_string(ex.target->levels());
}

void ensure_out_dir(const std::string& out_dir) {
  if (out_dir.empty()) throw ConfigError("an output directory is required (--out)");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir);
}

void append_results_row(const std::string& path, const std::string& sampler,
                        const std::string& target, const diagnostics::EssReport& rep,
                        double wall_clock_s) {
  const bool fresh = !fs::exists(path);
  std::ofstream os(path, std::ios::app);
  if (!os) throw IoError("cannot open results table " + path);
  if (fresh) {
    os << "sampler,target,ess_mean,ess_stderr,ess_per_min,logpi_mean,logpi_stderr,wall_clock_s\n";
  }
  os << sampler << "," << target << "," << fmt17(rep.ess_mean) << "," << fmt17(rep.ess_stderr)
     << "," << fmt17(rep.ess_per_min) << "," << fmt17(rep.logpi_mean) << ","
     << fmt17(rep.logpi_stderr) << "," << fmt17(wall_clock_s) << "\n";
}

void write_ess_report_json(const std::string& path, const std::string& sampler,
                           const std::string& target, const diagnostics::EssReport& rep,
                           double sampling_s, double training_s) {
  nlohmann::json j;
  j["sampler"] = sampler;
  j["target"] = target;
  j["ess_per_1e4_mean"] = rep.ess_mean;
  j["ess_per_1e4_stderr"] = rep.ess_stderr;
  j["n_groups"] = rep.n_groups;
  j["ess_per_min"] = rep.ess_per_min;
  j["logpi_mean"] = rep.logpi_mean;
  j["logpi_stderr"] = rep.logpi_stderr;
  j["total_kept"] = rep.total_kept;
  j["sampling_seconds"] = sampling_s;
  j["training_seconds"] = training_s;
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path);
  os << j.dump(2) << "\n";
}

// ESS + log-pi report over a discrete sample tensor.
diagnostics::EssReport report_for_samples(const Experiment& ex, const SampleSet& s,
                                          const double* z_buffer) {
  diagnostics::EssReport rep;
  if (ex.ess_space() == "z" && z_buffer != nullptr) {
    rep = diagnostics::grouped_ess_buffered(s.n_chains, s.n_kept, s.dim, z_buffer,
                                            ex.group_size());
  } else {
    rep = diagnostics::grouped_ess(
        s.n_chains, s.n_kept, s.dim,
        [&](int c, long t, int j) { return static_cast<double>(s.sample(c, t)[j]); },
        ex.group_size());
  }
  const auto [lp_mean, lp_se] =
      diagnostics::mean_logprob(s.theta.data(), s.total(), s.dim, *ex.target);
  rep.logpi_mean = lp_mean;
  rep.logpi_stderr = lp_se;
  return rep;
}

}  // namespace

Config resolve_config(const CommandArgs& args) {
  if (args.preset.empty() && args.config_path.empty()) {
    throw ConfigError("either --preset or --config is required");
  }
  Config cfg;
  if (!args.preset.empty()) cfg = preset_config(args.preset);
  if (!args.config_path.empty()) cfg.merge(Config::from_file(args.config_path));
  return cfg;
}

void cmd_train(const CommandArgs& args) {
  ensure_out_dir(args.out_dir);
  Experiment ex = Experiment::build(resolve_config(args), args.seed, args.desk_scale);
  flows::FlowModel model = ex.make_flows();

  const auto t0 = std::chrono::steady_clock::now();
  const train::TrainTrace trace =
      train::fit(model.tphi, model.tlambda, *ex.target, ex.train_config());
  const double train_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const fs::path out(args.out_dir);
  flows::save_checkpoint((out / "checkpoint.bin").string(), model);

  std::ofstream tr(out / "trace.csv");
  if (!tr) throw IoError("cannot open trace.csv");
  tr << "iteration,objective,ood_rate,grad_norm\n";
  for (long i = 0; i < trace.iterations_run; ++i) {
    tr << (i + 1) << "," << fmt17(trace.objective[i]) << "," << fmt17(trace.ood_rate[i]) << ","
       << fmt17(trace.grad_norm[i]) << "\n";
  }
  tr.close();

  nlohmann::json extra;
  extra["diverged"] = trace.diverged;
  extra["iterations_run"] = trace.iterations_run;
  extra["target"] = target_label(ex);
  RunTimings timings;
  timings.train_seconds = train_s;
  write_metadata((out / "train_meta.json").string(), "train", ex.cfg, args.seed, args.desk_scale,
                 timings, extra.dump());
  if (trace.diverged) {
    throw NumericError("training diverged; checkpoint rolled back to the last snapshot");
  }
}

void cmd_sample(const CommandArgs& args, const std::string& checkpoint_path) {
  ensure_out_dir(args.out_dir);
  Experiment ex = Experiment::build(resolve_config(args), args.seed, args.desk_scale);
  const flows::FlowModel model = flows::load_checkpoint(checkpoint_path);
  if (model.tphi.dim != ex.target->dim() || model.tlambda.levels != ex.target->levels()) {
    throw ConfigError("checkpoint dimensions do not match the configured target");
  }

  const double train_s =
      read_train_seconds((fs::path(checkpoint_path).parent_path() / "train_meta.json").string());

  const std::string kind = ex.sampler_kind();
  SampleSet samples;
  std::vector<double> z_buffer;
  double sampling_s = 0.0;
  std::string sampler_name;

  if (kind == "mh" || kind == "hmc") {
    train::LatentDensity density(model.tphi, model.tlambda, *ex.target);
    samplers::LatentRunResult run;
    if (kind == "mh") {
      run = samplers::run_latent_mh(density, ex.mh_options());
      sampler_name = "flow+mh";
    } else {
      samplers::HmcRunOptions ho;
      const auto mh = ex.mh_options();
      ho.n_chains = mh.n_chains;
      ho.n_steps = mh.n_steps;
      ho.thin = mh.thin;
      ho.seed = mh.seed;
      ho.threads = mh.threads;
      ho.step_size = ex.cfg.getd("sampler", "hmc_step", 0.05);
      ho.n_leapfrog = static_cast<int>(ex.cfg.geti("sampler", "hmc_leapfrog", 8));
      run = samplers::run_latent_hmc(density, ho);
      sampler_name = "flow+hmc";
    }
    sampling_s = run.wall_seconds;
    long ood = 0;
    samples.theta = samplers::push_samples(model.tphi, run, ex.target->levels(), &ood);
    samples.n_chains = run.n_chains;
    samples.n_kept = run.n_kept;
    samples.dim = run.dim;
    z_buffer = std::move(run.z);
  } else if (kind == "direct") {
    const auto opts = ex.mh_options();
    const long kept = opts.n_steps / opts.thin;
    const auto t0 = std::chrono::steady_clock::now();
    samples.theta = samplers::flow_direct_samples(
        model.tphi, ex.target->levels(), static_cast<long>(opts.n_chains) * kept, opts.seed);
    sampling_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    samples.n_chains = opts.n_chains;
    samples.n_kept = kept;
    samples.dim = ex.target->dim();
    sampler_name = "flow-direct";
  } else {
    throw ConfigError("sampler kind must be mh, hmc or direct (got '" + kind + "')");
  }

  diagnostics::EssReport rep =
      report_for_samples(ex, samples, z_buffer.empty() ? nullptr : z_buffer.data());
  rep.ess_per_min = diagnostics::ess_per_minute(rep, sampling_s, train_s);

  const fs::path out(args.out_dir);
  write_samples_csv((out / "samples.csv").string(), samples,
                    static_cast<int>(ex.cfg.geti("sampler", "thin", 10)));
  write_samples_bin((out / "samples.bin").string(), samples);
  write_ess_report_json((out / "ess_report.json").string(), sampler_name, target_label(ex), rep,
                        sampling_s, train_s);
  append_results_row((out / "results.csv").string(), sampler_name, target_label(ex), rep,
                     sampling_s + train_s);
  RunTimings timings;
  timings.train_seconds = train_s;
  timings.sample_seconds = sampling_s;
  nlohmann::json extra;
  extra["sampler"] = sampler_name;
  extra["target"] = target_label(ex);
  write_metadata((out / "sample_meta.json").string(), "sample", ex.cfg, args.seed,
                 args.desk_scale, timings, extra.dump());
}

void cmd_baseline(const CommandArgs& args, const std::string& kind) {
  ensure_out_dir(args.out_dir);
  Experiment ex = Experiment::build(resolve_config(args), args.seed, args.desk_scale);

  samplers::BaselineKind bk;
  std::string sampler_name;
  if (kind == "gibbs") {
    bk = samplers::BaselineKind::kGibbs;
    sampler_name = "gibbs";
  } else if (kind == "discrete-mh") {
    bk = samplers::BaselineKind::kDiscreteMh;
    sampler_name = "discrete-mh";
  } else {
    throw ConfigError("baseline kind must be 'gibbs' or 'discrete-mh' (got '" + kind + "')");
  }

  const auto run = samplers::run_discrete_baseline(*ex.target, ex.baseline_options(bk));
  SampleSet samples;
  samples.theta = run.theta;
  samples.n_chains = run.n_chains;
  samples.n_kept = run.n_kept;
  samples.dim = run.dim;

  diagnostics::EssReport rep = report_for_samples(ex, samples, nullptr);
  rep.ess_per_min = diagnostics::ess_per_minute(rep, run.wall_seconds, 0.0);

  const fs::path out(args.out_dir);
  write_samples_csv((out / "samples.csv").string(), samples,
                    static_cast<int>(ex.cfg.geti("sampler", "thin", 10)));
  write_samples_bin((out / "samples.bin").string(), samples);
  write_ess_report_json((out / "ess_report.json").string(), sampler_name, target_label(ex), rep,
                        run.wall_seconds, 0.0);
  append_results_row((out / "results.csv").string(), sampler_name, target_label(ex), rep,
                     run.wall_seconds);
  RunTimings timings;
  timings.sample_seconds = run.wall_seconds;
  nlohmann::json extra;
  extra["sampler"] = sampler_name;
  extra["target"] = target_label(ex);
  write_metadata((out / "baseline_meta.json").string(), "baseline", ex.cfg, args.seed,
                 args.desk_scale, timings, extra.dump());
}

void cmd_compare(const std::string& results_dir) {
  if (!fs::exists(results_dir)) throw IoError("results directory does not exist: " + results_dir);
  struct Row {
    std::string sampler, target;
    std::vector<std::string> cells;
  };
  std::vector<Row> rows;
  std::string header;
  for (const auto& entry : fs::recursive_directory_iterator(results_dir)) {
    if (!entry.is_regular_file() || entry.path().filename() != "results.csv") continue;
    std::ifstream is(entry.path());
    std::string line;
    if (!std::getline(is, line)) continue;
    header = line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      Row row;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) row.cells.push_back(cell);
      if (row.cells.size() < 2) continue;
      row.sampler = row.cells[0];
      row.target = row.cells[1];
      rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) throw IoError("no results rows found under " + results_dir);
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.target != b.target ? a.target < b.target : a.sampler < b.sampler;
  });

  const fs::path out(results_dir);
  std::ofstream os(out / "compare.csv");
  if (!os) throw IoError("cannot open compare.csv");
  os << header << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.cells.size(); ++i) os << (i ? "," : "") << r.cells[i];
    os << "\n";
  }
  os.close();

  std::vector<std::string> cols;
  {
    std::stringstream ss(header);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
  }
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json item;
    for (std::size_t i = 0; i < r.cells.size() && i < cols.size(); ++i) {
      if (i < 2) {
        item[cols[i]] = r.cells[i];
      } else {
        item[cols[i]] = std::stod(r.cells[i]);
      }
    }
    j.push_back(std::move(item));
  }
  std::ofstream js(out / "compare.json");
  if (!js) throw IoError("cannot open compare.json");
  js << j.dump(2) << "\n";
}

namespace {

std::vector<std::uint8_t> binary_to_pixels(const std::vector<int>& grid) {
  std::vector<std::uint8_t> px(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) px[i] = grid[i] ? 255 : 0;
  return px;
}

}  // namespace

void cmd_render_ising(const CommandArgs& args, const std::string& samples_path) {
  ensure_out_dir(args.out_dir);
  Experiment ex = Experiment::build(resolve_config(args), args.seed, args.desk_scale);
  if (ex.target_kind() != "ising") {
    throw ConfigError("render-ising requires an ising target");
  }
  const SampleSet samples = read_samples_bin(samples_path);
  const int h = ex.ising_height, w = ex.ising_width;
  if (samples.dim != h * w) {
    throw DimensionError("render-ising: sample dimension does not match the lattice");
  }
  const fs::path out(args.out_dir);
  write_pgm((out / "truth.pgm").string(), w, h, binary_to_pixels(ex.ising_truth));
  write_pgm((out / "corrupted.pgm").string(), w, h, binary_to_pixels(ex.ising_corrupted));
  const int max_chains =
      static_cast<int>(ex.cfg.geti("render", "max_chains", std::min(samples.n_chains, 16)));
  for (int c = 0; c < std::min(samples.n_chains, max_chains); ++c) {
    const int* last = samples.sample(c, samples.n_kept - 1);
    std::vector<int> grid(last, last + samples.dim);
    char name[32];
    std::snprintf(name, sizeof(name), "chain_%03d.pgm", c);
    write_pgm((out / name).string(), w, h, binary_to_pixels(grid));
  }
}

double cmd_eval_gmm(const CommandArgs& args, const std::string& samples_path) {
  ensure_out_dir(args.out_dir);
  Experiment ex = Experiment::build(resolve_config(args), args.seed, args.desk_scale);
  const auto* gmm = dynamic_cast<const targets::DiscretizedGmm*>(ex.target.get());
  if (gmm == nullptr || gmm->dim() != 2) {
    throw ConfigError("eval-gmm requires a 2-d discretized GMM target");
  }
  const SampleSet samples = read_samples_bin(samples_path);
  if (samples.dim != 2) throw DimensionError("eval-gmm: samples are not 2-d");
  if (samples.total() == 0) throw DomainError("eval-gmm: empty sample set");

  const int k = gmm->levels();
  // Exact normalized target by enumeration.
  std::vector<double> logp(static_cast<std::size_t>(k) * k);
  double m = -1e300;
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const int th[2] = {a, b};
      logp[static_cast<std::size_t>(a) * k + b] = gmm->log_prob_unnorm(th);
      m = std::max(m, logp[static_cast<std::size_t>(a) * k + b]);
    }
  }
  double z = 0.0;
  for (double lp : logp) z += std::exp(lp - m);

  std::vector<double> hist(static_cast<std::size_t>(k) * k, 0.0);
  for (long i = 0; i < samples.total(); ++i) {
    const int* th = samples.theta.data() + static_cast<std::size_t>(i) * 2;
    hist[static_cast<std::size_t>(th[0]) * k + th[1]] += 1.0;
  }
  const double n = static_cast<double>(samples.total());
  double tv = 0.0;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    tv += std::fabs(hist[i] / n - std::exp(logp[i] - m) / z);
  }
  tv *= 0.5;

  nlohmann::json j;
  j["tv_distance"] = tv;
  j["n_samples"] = samples.total();
  j["grid"] = k;
  std::ofstream os(fs::path(args.out_dir) / "eval_gmm.json");
  if (!os) throw IoError("cannot open eval_gmm.json");
  os << j.dump(2) << "\n";
  return tv;
}

int map_exit_code(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const NumericError*>(&e)) return 3;
  if (dynamic_cast<const DimensionError*>(&e)) return 3;
  if (dynamic_cast<const DomainError*>(&e)) return 3;
  if (dynamic_cast<const IoError*>(&e)) return 4;
  if (dynamic_cast<const FormatError*>(&e)) return 4;
  return 1;
}

}  // namespace discflow::harness
