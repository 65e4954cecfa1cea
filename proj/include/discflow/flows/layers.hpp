#pragma once

#include "discflow/numcore/vec.hpp"

namespace discflow::flows {

using numcore::Vec;

// Interior clamp for the unit box; keeps u strictly inside (0, 1).
inline constexpr double kBoxDelta = 1e-6;

// Elementwise sigmoid squashing. u = sigmoid(v) clamped to [delta, 1-delta];
// logdet = sum_i log sigmoid'(v_i), computed from v (stable for large |v|).
double sigmoid_layer(const Vec& v, Vec& u, double delta = kBoxDelta);

// Inverse (logit). Throws DomainError unless every u_i lies in (0, 1).
// logdet is the log-det of the logit map (the negative of the forward's).
double logit_layer(const Vec& u, Vec& v);

// Gradients of the *unclamped* maps; the delta clamp is a numerical guard and
// is not differentiated.
// Forward: given du (grad wrt u) and gl (grad wrt logdet), returns grad wrt v.
void sigmoid_backward(const Vec& v, const Vec& gu, double gl, Vec& gv);
// Inverse: given gv and gl_inv, returns grad wrt u.
void logit_backward(const Vec& u, const Vec& gv, double gl_inv, Vec& gu);

}  // namespace discflow::flows
