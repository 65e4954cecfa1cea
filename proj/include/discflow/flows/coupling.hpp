#pragma once

#include <cstdint>
#include <vector>

#include "discflow/numcore/mlp.hpp"
#include "discflow/numcore/rng.hpp"
#include "discflow/numcore/vec.hpp"

namespace discflow::flows {

using numcore::Mlp;
using numcore::MlpCache;
using numcore::Rng;
using numcore::Vec;

// Affine coupling layer. Coordinates with mask[i] != 0 pass through and feed
// the conditioner; the rest are scaled and shifted:
//   x_B = z_B * exp(s) + t,  [s ; t] = conditioner([z_A ; ctx]),
// with the scale logits clamped smoothly to |s| <= clamp via
// s = clamp * tanh(s_raw / clamp). The log-det is sum(s).
class CouplingLayer {
 public:
  // mask: 1 = passthrough, 0 = transformed. ctx_dim extra conditioner inputs
  // (the encoded theta for dequantization layers, 0 for the main flow).
  CouplingLayer(std::vector<std::uint8_t> mask, int ctx_dim, int hidden_width,
                int hidden_layers, double clamp, Rng& rng);

  // Construction from explicit parts (deserialization).
  CouplingLayer(std::vector<std::uint8_t> mask, int ctx_dim, double clamp, Mlp conditioner);

  int dim() const { return static_cast<int>(mask_.size()); }
  int ctx_dim() const { return ctx_dim_; }
  double clamp() const { return clamp_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  const std::vector<int>& pass_idx() const { return pass_; }
  const std::vector<int>& trans_idx() const { return trans_; }
  Mlp& conditioner() { return cond_; }
  const Mlp& conditioner() const { return cond_; }

  // In-place transforms; return the log-det contribution. ctx must have
  // ctx_dim() entries (empty when ctx_dim() == 0).
  double forward(Vec& v, const Vec& ctx) const;
  double inverse(Vec& v, const Vec& ctx) const;

  struct Cache {
    MlpCache mlp;
    Vec trans_in;   // transformed half of the *input* (forward) or output (inverse)
    Vec tanh_su;    // tanh(s_raw / clamp)
    Vec exp_s;      // exp(s) for forward, exp(-s) for inverse
  };

  double forward_cached(Vec& v, const Vec& ctx, Cache& cache) const;
  double inverse_cached(Vec& v, const Vec& ctx, Cache& cache) const;

  // Reverse accumulation through forward/inverse. g holds the gradient with
  // respect to the transform output on entry and the gradient with respect to
  // the input on exit; g_logdet is the upstream on the returned log-det.
  // Parameter gradients accumulate into grad.
  void forward_backward(const Cache& cache, Vec& g, double g_logdet, Mlp& grad) const;
  void inverse_backward(const Cache& cache, Vec& g, double g_logdet, Mlp& grad) const;

 private:
  void scales_and_shifts(const Vec& v, const Vec& ctx, Cache& cache, Vec& s, Vec& t) const;

  std::vector<std::uint8_t> mask_;
  std::vector<int> pass_;
  std::vector<int> trans_;
  int ctx_dim_ = 0;
  double clamp_ = 5.0;
  Mlp cond_;
};

}  // namespace discflow::flows
