#pragma once

#include <memory>
#include <span>
#include <vector>

#include "discflow/errors.hpp"

namespace discflow::targets {

// Unnormalized log p.m.f. over the grid {0, ..., levels-1}^dim. Evaluation is
// pure and must be finite everywhere on the grid; instances are immutable
// after construction and safe for concurrent evaluation.
class DiscreteTarget {
 public:
  virtual ~DiscreteTarget() = default;

  int dim() const { return dim_; }
  int levels() const { return levels_; }

  virtual double log_prob_unnorm(std::span<const int> theta) const = 0;

  // log pi(theta with coordinate `coord` set to new_value) - log pi(theta).
  // Default recomputes both sides; targets with local structure override.
  virtual double log_prob_delta(std::span<const int> theta, int coord, int new_value) const;

 protected:
  DiscreteTarget(int dim, int levels) : dim_(dim), levels_(levels) {
    if (dim <= 0 || levels <= 0) throw DomainError("DiscreteTarget: bad grid shape");
  }

  void check_theta(std::span<const int> theta) const;

 private:
  int dim_;
  int levels_;
};

// log pi = 0 everywhere; useful as a reference target.
class UniformTarget final : public DiscreteTarget {
 public:
  UniformTarget(int dim, int levels) : DiscreteTarget(dim, levels) {}
  double log_prob_unnorm(std::span<const int>) const override { return 0.0; }
  double log_prob_delta(std::span<const int>, int, int) const override { return 0.0; }
};

// Explicit mass table over a small grid (row-major over coordinates).
class TableTarget final : public DiscreteTarget {
 public:
  TableTarget(int dim, int levels, std::vector<double> log_mass);
  double log_prob_unnorm(std::span<const int> theta) const override;

  std::size_t flat_index(std::span<const int> theta) const;
  const std::vector<double>& log_mass() const { return log_mass_; }

 private:
  std::vector<double> log_mass_;
};

}  // namespace discflow::targets
