#include "discflow/harness/presets.hpp"

namespace discflow::harness {

namespace {

const char* kCommonDefaults = R"(
[flow]
phi_layers = 8
lambda_layers = 4
hidden_width = 64
hidden_layers = 2
scale_clamp = 5
range_layer = true
range_extent = 3

[train]
iterations = 10000
batch = 128
lr = 0.001
checkpoint_every = 1000
straight_through = false

[sampler]
kind = mh
chains = 128
steps = 100000
thin = 10
sigma_prop = 0.25
adapt = false
burn_in = 100000
group_size = 16
ess_space = theta
)";

const char* kGmm2d = R"(
[target]
kind = gmm2d
bits = 6
components = 0.2 0 0 0.15 0.15; 0.2 3 3 0.15 0.15; 0.2 -3 3 0.15 0.15; 0.2 3 -3 0.15 0.15; 0.2 -3 -3 0.15 0.15

[train]
straight_through = true

[sampler]
sigma_prop = 0.6
)";

const char* kIsingMnist = R"(
[target]
kind = ising
height = 28
width = 28
beta = 1.0
eta = 1.0
corrupt_p = 0.1
corrupt_seed = 7
image = idx
idx_index = 0
binarize_tau = 0.5

[sampler]
sigma_prop = 0.03
)";

const char* kIsingSmall = R"(
[target]
kind = ising
height = 16
width = 16
beta = 1.0
eta = 1.0
corrupt_p = 0.1
corrupt_seed = 7
image = disk

[sampler]
sigma_prop = 0.05
)";

const char* kQlogregCsv = R"(
[target]
kind = qlogreg
bits = 4
grid_lo = -2
grid_hi = 2

[sampler]
sigma_prop = 0.1
)";

std::string bvs_preset(int features, int informative) {
  std::string s = R"(
[target]
kind = bvs
noise_sigma = 1.0
data_seed = 11
nu = 10
w = 1
alpha = 1

[sampler]
sigma_prop = 0.05
)";
  s += "\n[target]\nfeatures = " + std::to_string(features) +
       "\ninformative = " + std::to_string(informative) +
       "\nexamples = " + std::to_string(features) + "\n";
  return s;
}

}  // namespace

Config preset_config(const std::string& name) {
  Config cfg = Config::from_text(kCommonDefaults);
  Config specific;
  if (name == "gmm2d") {
    specific = Config::from_text(kGmm2d);
  } else if (name == "ising-mnist") {
    specific = Config::from_text(kIsingMnist);
  } else if (name == "ising-small") {
    specific = Config::from_text(kIsingSmall);
  } else if (name == "qlogreg-csv") {
    specific = Config::from_text(kQlogregCsv);
  } else if (name == "bvs-synth-100") {
    specific = Config::from_text(bvs_preset(100, 10));
  } else if (name == "bvs-synth-200") {
    specific = Config::from_text(bvs_preset(200, 20));
  } else if (name == "bvs-synth-400") {
    specific = Config::from_text(bvs_preset(400, 40));
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  cfg.merge(specific);
  return cfg;
}

std::vector<std::string> preset_names() {
  return {"gmm2d",         "ising-mnist",   "ising-small",  "qlogreg-csv",
          "bvs-synth-100", "bvs-synth-200", "bvs-synth-400"};
}

}  // namespace discflow::harness
