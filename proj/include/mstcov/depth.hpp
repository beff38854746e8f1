#pragma once

#include "mstcov/test_functions.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mstcov {

/// Curves as a row-major N x T block.
struct CurveMatrix {
  std::size_t num_curves = 0;
  std::size_t num_points = 0;
  const double* data = nullptr;

  const double* curve(std::size_t k) const { return data + k * num_points; }
};

inline CurveMatrix as_curves(const TestFunctionSet& set) {
  return {set.num_curves(), set.num_lags(), set.values.data()};
}

/// Modified band depth: for each curve, the average over all unordered pairs
/// of curves (pairs containing the curve included) of the fraction of points
/// where the curve lies inside the pair's band, boundaries inclusive.
/// Throws ValidationError for fewer than 2 curves or no points.
std::vector<double> modified_band_depth(const CurveMatrix& curves);

/// Integer form of the depth: summed over points, the number of pairs whose
/// band contains the curve. depth = count / (T * N(N-1)/2).
std::vector<std::uint64_t> band_depth_counts(const CurveMatrix& curves);

struct DepthRanking {
  std::vector<double> depths;
  std::vector<std::size_t> ranks; // 1 = least deep; a permutation of 1..N
};

/// Ranks curves by increasing depth; ties are broken by the order of
/// `tie_keys` (e.g. curve labels), then by index.
DepthRanking rank_by_depth(const CurveMatrix& curves, const std::vector<CurveLabel>* tie_keys = nullptr);

/// Ranks each candidate curve within {candidate} union reference, by
/// increasing depth computed in that N + 1 curve set. Ties are broken by
/// label, and the candidate goes first when its label equals a reference
/// label. Returns ranks in 1..N+1. Runs in O(N T) per candidate.
class ReferenceRanker {
public:
  ReferenceRanker(const CurveMatrix& reference, std::vector<CurveLabel> labels);

  std::size_t rank(const double* candidate, const CurveLabel& label) const;
  std::vector<std::size_t> rank_all(const CurveMatrix& candidates,
                                    const std::vector<CurveLabel>& labels) const;

  std::size_t num_reference() const { return n_; }

private:
  std::size_t n_;
  std::size_t t_;
  std::vector<double> values_;          // point-major copy: values_[t * n + k]
  std::vector<double> sorted_;          // per point, sorted reference values
  std::vector<std::uint64_t> below_;    // per (t, k): reference values strictly below
  std::vector<std::uint64_t> above_;    // per (t, k): reference values strictly above
  std::vector<std::uint64_t> base_;     // per k: augmented count before the candidate's effect
  std::vector<CurveLabel> labels_;
};

} // namespace mstcov
