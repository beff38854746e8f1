#include "mstcov/depth.hpp"

#include "mstcov/error.hpp"
#include "mstcov/parallel.hpp"

#include <algorithm>
#include <numeric>

namespace mstcov {

namespace {

constexpr std::uint64_t pairs(std::uint64_t k) { return k * (k - (k > 0 ? 1 : 0)) / 2; }

void check_curves(const CurveMatrix& curves) {
  if (curves.num_curves < 2) throw ValidationError("band depth needs at least 2 curves");
  if (curves.num_points < 1) throw ValidationError("band depth needs curves with at least 1 point");
}

} // namespace

std::vector<std::uint64_t> band_depth_counts(const CurveMatrix& curves) {
  check_curves(curves);
  const std::size_t N = curves.num_curves;
  const std::size_t T = curves.num_points;
  const std::uint64_t all = pairs(N);
  std::vector<std::uint64_t> counts(N, 0);
  std::vector<double> column(N);
  std::vector<double> sorted(N);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t k = 0; k < N; ++k) column[k] = curves.curve(k)[t];
    sorted = column;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < N; ++k) {
      const auto range = std::equal_range(sorted.begin(), sorted.end(), column[k]);
      const auto below = static_cast<std::uint64_t>(range.first - sorted.begin());
      const auto above = static_cast<std::uint64_t>(sorted.end() - range.second);
      counts[k] += all - pairs(below) - pairs(above);
    }
  }
  return counts;
}

std::vector<double> modified_band_depth(const CurveMatrix& curves) {
  const auto counts = band_depth_counts(curves);
  const double scale = static_cast<double>(curves.num_points) *
                       static_cast<double>(pairs(curves.num_curves));
  std::vector<double> depths(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) depths[k] = static_cast<double>(counts[k]) / scale;
  return depths;
}

DepthRanking rank_by_depth(const CurveMatrix& curves, const std::vector<CurveLabel>* tie_keys) {
  if (tie_keys && tie_keys->size() != curves.num_curves) {
    throw ValidationError("tie-break labels do not match the curve count");
  }
  const auto counts = band_depth_counts(curves);
  DepthRanking out;
  out.depths = modified_band_depth(curves);
  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (counts[x] != counts[y]) return counts[x] < counts[y];
    if (tie_keys && (*tie_keys)[x] != (*tie_keys)[y]) return (*tie_keys)[x] < (*tie_keys)[y];
    return x < y;
  });
  out.ranks.resize(counts.size());
  for (std::size_t r = 0; r < order.size(); ++r) out.ranks[order[r]] = r + 1;
  return out;
}

ReferenceRanker::ReferenceRanker(const CurveMatrix& reference, std::vector<CurveLabel> labels)
    : n_(reference.num_curves), t_(reference.num_points), labels_(std::move(labels)) {
  if (n_ < 1 || t_ < 1) throw ValidationError("reference set is empty");
  if (labels_.size() != n_) throw ValidationError("reference labels do not match the curve count");
  values_.resize(n_ * t_);
  sorted_.resize(n_ * t_);
  below_.resize(n_ * t_);
  above_.resize(n_ * t_);
  base_.assign(n_, 0);
  const std::uint64_t all = pairs(n_ + 1);
  for (std::size_t t = 0; t < t_; ++t) {
    double* col = values_.data() + t * n_;
    double* sorted = sorted_.data() + t * n_;
    for (std::size_t k = 0; k < n_; ++k) col[k] = reference.curve(k)[t];
    std::copy(col, col + n_, sorted);
    std::sort(sorted, sorted + n_);
    for (std::size_t k = 0; k < n_; ++k) {
      const auto range = std::equal_range(sorted, sorted + n_, col[k]);
      const auto below = static_cast<std::uint64_t>(range.first - sorted);
      const auto above = static_cast<std::uint64_t>(sorted + n_ - range.second);
      below_[t * n_ + k] = below;
      above_[t * n_ + k] = above;
      base_[k] += all - pairs(below) - pairs(above);
    }
  }
}

std::size_t ReferenceRanker::rank(const double* candidate, const CurveLabel& label) const {
  const std::uint64_t all = pairs(n_ + 1);
  std::vector<std::uint64_t> counts(base_);
  std::uint64_t own = 0;
  for (std::size_t t = 0; t < t_; ++t) {
    const double x = candidate[t];
    const double* col = values_.data() + t * n_;
    const double* sorted = sorted_.data() + t * n_;
    const auto range = std::equal_range(sorted, sorted + n_, x);
    own += all - pairs(static_cast<std::uint64_t>(range.first - sorted)) -
           pairs(static_cast<std::uint64_t>(sorted + n_ - range.second));
    // A reference curve above the candidate gains the candidate below it:
    // every pair (candidate, lower curve) now excludes it.
    const std::uint64_t* below = below_.data() + t * n_;
    const std::uint64_t* above = above_.data() + t * n_;
    std::uint64_t* count = counts.data();
    for (std::size_t k = 0; k < n_; ++k) {
      const std::uint64_t lo = x < col[k] ? below[k] : 0;
      const std::uint64_t hi = x > col[k] ? above[k] : 0;
      count[k] -= lo + hi;
    }
  }
  std::size_t rank = 1;
  for (std::size_t k = 0; k < n_; ++k) {
    if (counts[k] < own || (counts[k] == own && labels_[k] < label)) ++rank;
  }
  return rank;
}

std::vector<std::size_t> ReferenceRanker::rank_all(const CurveMatrix& candidates,
                                                   const std::vector<CurveLabel>& labels) const {
  if (candidates.num_points != t_) throw ValidationError("candidate curves have a different lag grid");
  if (labels.size() != candidates.num_curves) throw ValidationError("candidate labels do not match");
  std::vector<std::size_t> ranks(candidates.num_curves);
  parallel_for(candidates.num_curves,
               [&](std::size_t k) { ranks[k] = rank(candidates.curve(k), labels[k]); });
  return ranks;
}

} // namespace mstcov
