#include "discflow/harness/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "discflow/numcore/parallel.hpp"
#include "discflow/targets/bvs.hpp"
#include "discflow/targets/csv.hpp"
#include "discflow/targets/gmm.hpp"
#include "discflow/targets/ising.hpp"
#include "discflow/targets/mnist.hpp"
#include "discflow/targets/qlogreg.hpp"

namespace discflow::harness {

namespace {

std::vector<targets::GmmComponent> parse_components(const std::string& text, int dim) {
  // "w m1 .. md s1 .. sd; w m1 ..." — whitespace separated, components split by ';'
  std::vector<targets::GmmComponent> comps;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    std::istringstream gs(group);
    std::vector<double> vals;
    double v;
    while (gs >> v) vals.push_back(v);
    if (vals.empty()) continue;
    if (static_cast<int>(vals.size()) != 1 + 2 * dim) {
      throw ConfigError("gmm components: each entry needs weight, " + std::to_string(dim) +
                        " means and " + std::to_string(dim) + " sigmas");
    }
    targets::GmmComponent c;
    c.weight = vals[0];
    c.mean.assign(vals.begin() + 1, vals.begin() + 1 + dim);
    c.sigma.assign(vals.begin() + 1 + dim, vals.end());
    comps.push_back(std::move(c));
  }
  if (comps.empty()) throw ConfigError("gmm components: none given");
  return comps;
}

std::vector<int> disk_image(int h, int w) {
  std::vector<int> img(static_cast<std::size_t>(h) * w, 0);
  const double cy = (h - 1) / 2.0, cx = (w - 1) / 2.0;
  const double r = 0.3 * std::min(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dy = y - cy, dx = x - cx;
      if (dy * dy + dx * dx <= r * r) img[static_cast<std::size_t>(y) * w + x] = 1;
    }
  }
  return img;
}

void require_path(const Config& cfg, const std::string& section, const std::string& key) {
  const std::string path = cfg.gets(section, key, "");
  if (path.empty()) {
    throw ConfigError("config [" + section + "] " + key + " is required for this target");
  }
  if (!std::filesystem::exists(path)) {
    throw ConfigError("config [" + section + "] " + key + ": path does not exist: " + path);
  }
}

}  // namespace

std::unique_ptr<targets::DiscreteTarget> make_target(const Config& cfg,
                                                     std::vector<int>* ising_truth,
                                                     std::vector<int>* ising_corrupted) {
  const std::string kind = cfg.gets("target", "kind", "");
  if (kind == "gmm2d") {
    const int bits = static_cast<int>(cfg.geti("target", "bits", 6));
    const std::string comp_text = cfg.gets(
        "target", "components",
        "0.2 0 0 1 1; 0.2 3.2 3.2 1 1; 0.2 -3.2 3.2 1 1; 0.2 3.2 -3.2 1 1; 0.2 -3.2 -3.2 1 1");
    return std::make_unique<targets::DiscretizedGmm>(parse_components(comp_text, 2), bits);
  }
  if (kind == "ising") {
    const int h = static_cast<int>(cfg.geti("target", "height", 16));
    const int w = static_cast<int>(cfg.geti("target", "width", 16));
    const double beta = cfg.getd("target", "beta", 1.0);
    const double eta = cfg.getd("target", "eta", 1.0);
    const double p = cfg.getd("target", "corrupt_p", 0.1);
    const auto corrupt_seed = static_cast<std::uint64_t>(cfg.geti("target", "corrupt_seed", 7));
    std::vector<int> truth;
    const std::string image = cfg.gets("target", "image", "disk");
    if (image == "disk") {
      truth = disk_image(h, w);
    } else if (image == "idx") {
      require_path(cfg, "target", "idx_path");
      const auto imgs = targets::load_mnist_idx(cfg.gets("target", "idx_path", ""));
      const int index = static_cast<int>(cfg.geti("target", "idx_index", 0));
      if (index < 0 || index >= imgs.count) throw ConfigError("ising idx_index out of range");
      if (imgs.rows != h || imgs.cols != w) {
        throw ConfigError("ising lattice shape does not match the IDX image shape");
      }
      truth = targets::binarize(imgs.image(index), h * w,
                                cfg.getd("target", "binarize_tau", 0.5));
    } else {
      throw ConfigError("ising image must be 'disk' or 'idx'");
    }
    numcore::Rng rng(corrupt_seed);
    std::vector<int> corrupted = targets::corrupt_binary(truth, p, rng);
    if (ising_truth) *ising_truth = truth;
    if (ising_corrupted) *ising_corrupted = corrupted;
    std::vector<int> pm1(corrupted.size());
    for (std::size_t i = 0; i < corrupted.size(); ++i) pm1[i] = 2 * corrupted[i] - 1;
    return std::make_unique<targets::IsingDenoise>(h, w, beta, eta, std::move(pm1));
  }
  if (kind == "qlogreg") {
    require_path(cfg, "target", "csv_path");
    auto table = targets::load_labeled_csv(cfg.gets("target", "csv_path", ""));
    const int bits = static_cast<int>(cfg.geti("target", "bits", 4));
    return std::make_unique<targets::QuantizedLogReg>(
        std::move(table.x), std::move(table.labels), table.n_classes, bits,
        cfg.getd("target", "grid_lo", -2.0), cfg.getd("target", "grid_hi", 2.0));
  }
  if (kind == "bvs") {
    const int d = static_cast<int>(cfg.geti("target", "features", 100));
    const int k = static_cast<int>(cfg.geti("target", "informative", 10));
    const int n = static_cast<int>(cfg.geti("target", "examples", d));
    auto synth = targets::make_synthetic_bvs(
        d, k, n, cfg.getd("target", "noise_sigma", 1.0),
        static_cast<std::uint64_t>(cfg.geti("target", "data_seed", 11)));
    return std::make_unique<targets::BayesVarSelect>(
        std::move(synth.x), std::move(synth.y), cfg.getd("target", "nu", 10.0),
        cfg.getd("target", "w", 1.0), cfg.getd("target", "alpha", 1.0));
  }
  if (kind == "uniform") {
    return std::make_unique<targets::UniformTarget>(
        static_cast<int>(cfg.geti("target", "dim", 1)),
        static_cast<int>(cfg.geti("target", "levels", 8)));
  }
  throw ConfigError("unknown target kind '" + kind + "'");
}

Experiment Experiment::build(Config cfg, std::uint64_t seed, double desk_scale) {
  if (!(desk_scale > 0.0)) throw ConfigError("desk scale must be positive");
  Experiment ex;
  ex.cfg = std::move(cfg);
  ex.seed = seed;
  ex.desk_scale = desk_scale;
  ex.threads = static_cast<int>(ex.cfg.geti("run", "threads", 0));
  if (ex.threads <= 0) ex.threads = numcore::default_threads();
  ex.target = make_target(ex.cfg, &ex.ising_truth, &ex.ising_corrupted);
  if (ex.target_kind() == "ising") {
    ex.ising_height = static_cast<int>(ex.cfg.geti("target", "height", 16));
    ex.ising_width = static_cast<int>(ex.cfg.geti("target", "width", 16));
  }
  return ex;
}

long Experiment::scaled(long steps) const {
  if (desk_scale == 1.0) return steps;
  const double s = std::round(static_cast<double>(steps) * desk_scale);
  return std::max(1L, static_cast<long>(s));
}

flows::FlowModel Experiment::make_flows() const {
  const int d = target->dim();
  const int k = target->levels();
  const int hidden_w = static_cast<int>(cfg.geti("flow", "hidden_width", 64));
  const int hidden_l = static_cast<int>(cfg.geti("flow", "hidden_layers", 2));
  const double clamp = cfg.getd("flow", "scale_clamp", 5.0);
  const auto init_seed = static_cast<std::uint64_t>(
      cfg.geti("flow", "init_seed", static_cast<long>(seed ^ 0x5ca1ab1eull)));
  numcore::Rng rng(init_seed);

  std::optional<flows::RangeMap> range;
  if (cfg.getb("flow", "range_layer", true)) {
    flows::RangeMap rm;
    rm.lo.assign(d, 0.0);
    rm.hi.assign(d, static_cast<double>(k));
    rm.extent = cfg.getd("flow", "range_extent", 3.0);
    range = std::move(rm);
  }

  flows::FlowModel model;
  model.tphi = flows::make_flow_stack(d, static_cast<int>(cfg.geti("flow", "phi_layers", 8)),
                                      hidden_w, hidden_l, clamp, rng, range);
  model.tlambda = flows::make_dequant_flow(
      d, k, static_cast<int>(cfg.geti("flow", "lambda_layers", 4)), hidden_w, hidden_l, clamp,
      rng);
  return model;
}

train::TrainConfig Experiment::train_config() const {
  train::TrainConfig tc;
  tc.iterations = scaled(cfg.geti("train", "iterations", 10000));
  tc.batch_size = static_cast<int>(cfg.geti("train", "batch", 128));
  tc.learning_rate = cfg.getd("train", "lr", 1e-3);
  tc.seed = seed;
  tc.checkpoint_every = cfg.geti("train", "checkpoint_every", 1000);
  tc.straight_through = cfg.getb("train", "straight_through", false);
  tc.threads = threads;
  return tc;
}

samplers::LatentRunOptions Experiment::mh_options() const {
  samplers::LatentRunOptions o;
  o.n_chains = static_cast<int>(cfg.geti("sampler", "chains", 128));
  o.n_steps = scaled(cfg.geti("sampler", "steps", 100000));
  o.thin = static_cast<int>(cfg.geti("sampler", "thin", 10));
  o.sigma_prop = cfg.getd("sampler", "sigma_prop", 0.25);
  o.seed = seed ^ 0xA5A5A5A5ull;
  o.threads = threads;
  o.adapt = cfg.getb("sampler", "adapt", false);
  o.adapt_steps = cfg.geti("sampler", "adapt_steps", 500);
  o.adapt_target = cfg.getd("sampler", "adapt_target", 0.30);
  return o;
}

samplers::DiscreteRunOptions Experiment::baseline_options(samplers::BaselineKind kind) const {
  samplers::DiscreteRunOptions o;
  o.kind = kind;
  o.n_chains = static_cast<int>(cfg.geti("sampler", "chains", 128));
  o.n_steps = scaled(cfg.geti("sampler", "steps", 100000));
  o.thin = static_cast<int>(cfg.geti("sampler", "thin", 10));
  o.burn_in = scaled(cfg.geti("sampler", "burn_in", 100000));
  o.seed = seed ^ 0x5A5A5A5Aull;
  o.threads = threads;
  return o;
}

}  // namespace discflow::harness
