#include "sampling.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace klab {

DiscreteSampler DiscreteSampler::from_weights(Vec weights) {
  if (weights.empty()) fail(Errc::invalid_argument, "sampler: no weights");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) fail(Errc::invalid_argument, "sampler: negative or NaN weight");
    total += w;
  }
  if (total <= 0.0) fail(Errc::degenerate, "degenerate system: all weights are zero");

  DiscreteSampler s;
  s.weights_ = std::move(weights);
  s.total_ = total;
  s.cum_.resize(s.weights_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < s.weights_.size(); ++i) {
    acc += s.weights_[i];
    s.cum_[i] = std::min(acc / total, 1.0);  // keep monotone under rounding
  }
  s.cum_.back() = 1.0;  // guard against rounding in the last bucket
  return s;
}

index_t DiscreteSampler::sample(RngStream& rng) const {
  const double u = rng.next_unit();
  // smallest i with cum[i] > u; ties on equal cum values skip zero-weight indices
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  return static_cast<index_t>(it - cum_.begin());
}

DiscreteSampler build_row_sampler(const Matrix& a) {
  Vec w(static_cast<std::size_t>(a.rows()));
  for (index_t i = 0; i < a.rows(); ++i) w[static_cast<std::size_t>(i)] = row_sq_norm(a, i);
  return DiscreteSampler::from_weights(std::move(w));
}

DiscreteSampler build_col_sampler(const Matrix& a) {
  Vec w(static_cast<std::size_t>(a.cols()));
  for (index_t j = 0; j < a.cols(); ++j) w[static_cast<std::size_t>(j)] = col_sq_norm(a, j);
  return DiscreteSampler::from_weights(std::move(w));
}

}  // namespace klab
