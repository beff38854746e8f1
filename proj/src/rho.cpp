#include "mstcov/rho.hpp"

#include "mstcov/error.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace mstcov {

std::string_view to_string(EstimatorMode mode) {
  return mode == EstimatorMode::least_squares ? "least-squares" : "mean-ratio";
}

EstimatorMode parse_estimator_mode(std::string_view text) {
  std::string key(text);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::replace(key.begin(), key.end(), '_', '-');
  if (key == "least-squares" || key == "ls") return EstimatorMode::least_squares;
  if (key == "mean-ratio" || key == "mr") return EstimatorMode::mean_ratio;
  throw ValidationError("unknown estimator mode '" + std::string(text) +
                        "' (expected least-squares or mean-ratio)");
}

std::vector<Rho> rhos_needed(PropertyType property) {
  switch (property) {
  case PropertyType::VST: return {Rho::rho1};
  case PropertyType::SVT: return {Rho::rho2};
  case PropertyType::TVS: return {Rho::rho3};
  case PropertyType::VS: return {Rho::rho4};
  case PropertyType::VT: return {Rho::rho5};
  case PropertyType::ST: return {Rho::rho6};
  default: return {};
  }
}

namespace {

[[noreturn]] void degenerate(const char* name, std::size_t a, std::size_t b, int u) {
  throw NumericalError(std::string("degenerate input: zero denominator in ") + name +
                       " at (a=" + std::to_string(a + 1) + ", b=" + std::to_string(b + 1) +
                       ", u=" + std::to_string(u) + ")");
}

// Ratio accumulator shared by both modes: least squares sums numerator and
// denominator terms; mean-ratio averages per-term ratios.
class RatioAccumulator {
public:
  explicit RatioAccumulator(EstimatorMode mode) : mode_(mode) {}

  // Adds the term num / den (mean-ratio) or num, den into the two sums.
  bool add(double num, double den) {
    if (mode_ == EstimatorMode::least_squares) {
      num_ += num;
      den_ += den;
      return true;
    }
    if (den == 0.0) return false;
    num_ += num / den;
    den_ += 1.0;
    return true;
  }

  bool valid() const { return den_ != 0.0; }
  double value() const { return num_ / den_; }

private:
  EstimatorMode mode_;
  double num_ = 0.0;
  double den_ = 0.0;
};

} // namespace

RhoEstimates estimate_rhos(const EmpiricalCov& cov, EstimatorMode mode,
                           const std::vector<Rho>& which) {
  const std::size_t p = cov.num_variables();
  const std::size_t n = cov.num_locations();
  const std::size_t U = cov.max_lag();
  const std::size_t width = 2 * U + 1;
  const int Ui = static_cast<int>(U);
  const bool ls = mode == EstimatorMode::least_squares;

  RhoEstimates r;
  r.p_ = p;
  r.n_ = n;
  r.max_lag_ = U;
  r.mode_ = mode;
  for (int k = 0; k < 6; ++k) {
    r.present_[k] = which.empty() ||
                    std::find(which.begin(), which.end(), static_cast<Rho>(k)) != which.end();
  }

  auto slot = [&](std::size_t a, std::size_t b, int u) {
    return (a * n + b) * width + static_cast<std::size_t>(u + Ui);
  };
  // S^x_{ij} for the (a, b) pair.
  auto pooled_diag = [&](std::size_t i, std::size_t j, std::size_t a, std::size_t b, int u) {
    return cov(i, j, a, a, u) + cov(i, j, b, b, u);
  };
  // Non-negative lags for every ordered pair, then mirror.
  auto fill_lagged = [&](std::vector<double>& out, const char* name, auto&& term, auto&& natural) {
    out.assign(n * n * width, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        for (int u = 0; u <= Ui; ++u) {
          RatioAccumulator acc(mode);
          for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
              const auto [num, den] = term(i, j, a, b, u);
              if (!acc.add(num, den)) degenerate(name, a, b, u);
            }
          }
          if (!acc.valid()) degenerate(name, a, b, u);
          out[slot(a, b, u)] = natural(a, b, u) ? 1.0 : acc.value();
        }
      }
    }
    // Lag 0 is symmetric in (a, b); keep the a <= b value for both orders.
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < a; ++b) out[slot(a, b, 0)] = out[slot(b, a, 0)];
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        for (int u = 1; u <= Ui; ++u) out[slot(a, b, -u)] = out[slot(b, a, u)];
      }
    }
  };

  if (r.has(Rho::rho1)) {
    fill_lagged(
        r.rho1_, "rho1",
        [&](std::size_t i, std::size_t j, std::size_t a, std::size_t b, int u) {
          const double s0 = pooled_diag(i, j, a, b, 0);
          return ls ? std::pair{2.0 * cov(i, j, a, b, u) * s0, s0 * s0}
                    : std::pair{2.0 * cov(i, j, a, b, u), s0};
        },
        [](std::size_t a, std::size_t b, int u) { return a == b && u == 0; });
  }
  if (r.has(Rho::rho3)) {
    fill_lagged(
        r.rho3_, "rho3",
        [&](std::size_t i, std::size_t j, std::size_t a, std::size_t b, int u) {
          const double s0 = pooled_diag(i, j, a, b, 0);
          const double su = pooled_diag(i, j, a, b, u);
          return ls ? std::pair{su * s0, s0 * s0} : std::pair{su, s0};
        },
        [](std::size_t, std::size_t, int u) { return u == 0; });
  }
  if (r.has(Rho::rho4)) {
    fill_lagged(
        r.rho4_, "rho4",
        [&](std::size_t i, std::size_t j, std::size_t a, std::size_t b, int u) {
          const double su = pooled_diag(i, j, a, b, u);
          return ls ? std::pair{2.0 * cov(i, j, a, b, u) * su, su * su}
                    : std::pair{2.0 * cov(i, j, a, b, u), su};
        },
        [](std::size_t a, std::size_t b, int) { return a == b; });
  }
  if (r.has(Rho::rho5)) {
    fill_lagged(
        r.rho5_, "rho5",
        [&](std::size_t i, std::size_t j, std::size_t a, std::size_t b, int u) {
          const double c0 = cov(i, j, a, b, 0);
          return ls ? std::pair{cov(i, j, a, b, u) * c0, c0 * c0}
                    : std::pair{cov(i, j, a, b, u), c0};
        },
        [](std::size_t, std::size_t, int u) { return u == 0; });
  }
  if (r.has(Rho::rho2)) {
    r.rho2_.assign(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a; b < n; ++b) {
        RatioAccumulator acc(mode);
        for (std::size_t i = 0; i < p; ++i) {
          for (std::size_t j = 0; j < p; ++j) {
            const double s0 = pooled_diag(i, j, a, b, 0);
            const bool ok = ls ? acc.add(2.0 * cov(i, j, a, b, 0) * s0, s0 * s0)
                               : acc.add(2.0 * cov(i, j, a, b, 0), s0);
            if (!ok) degenerate("rho2", a, b, 0);
          }
        }
        if (!acc.valid()) degenerate("rho2", a, b, 0);
        // rho2(b,a) equals rho2(a,b) algebraically (C(0) is symmetric under
        // swapping both variables and locations); store one value for both.
        const double v = a == b ? 1.0 : acc.value();
        r.rho2_[a * n + b] = v;
        r.rho2_[b * n + a] = v;
      }
    }
  }
  if (r.has(Rho::rho6)) {
    r.rho6_.assign(p * p * n * n, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = 0; b < n; ++b) {
            const double s0 = pooled_diag(i, j, a, b, 0);
            if (s0 == 0.0) degenerate("rho6", a, b, 0);
            r.rho6_[((i * p + j) * n + a) * n + b] = a == b ? 1.0 : 2.0 * cov(i, j, a, b, 0) / s0;
          }
        }
      }
    }
  }
  return r;
}

} // namespace mstcov
