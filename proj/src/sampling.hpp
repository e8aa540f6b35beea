#pragma once

#include "matrix.hpp"
#include "rng.hpp"

namespace klab {

// Discrete distribution over indices with probability weight[i] / total,
// sampled by inverse CDF with binary search. Weights are squared row or
// column norms, so total equals ||A||_F^2. Zero-weight indices are never
// returned.
class DiscreteSampler {
 public:
  static DiscreteSampler from_weights(Vec weights);

  index_t sample(RngStream& rng) const;

  index_t size() const { return static_cast<index_t>(weights_.size()); }
  double weight(index_t i) const { return weights_[static_cast<std::size_t>(i)]; }
  double probability(index_t i) const { return weights_[static_cast<std::size_t>(i)] / total_; }
  double total() const { return total_; }

 private:
  DiscreteSampler() = default;
  Vec weights_;
  Vec cum_;  // normalized cumulative weights, cum_.back() == 1
  double total_ = 0.0;
};

DiscreteSampler build_row_sampler(const Matrix& a);
DiscreteSampler build_col_sampler(const Matrix& a);

}  // namespace klab
