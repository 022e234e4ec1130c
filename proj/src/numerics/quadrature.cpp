#include <algorithm>
#include <cmath>
#include <limits>

#include "combo/numerics.hpp"

namespace combo {

std::vector<double> midpoints(double lo, double hi, int count) {
  require(count >= 1 && std::isfinite(lo) && std::isfinite(hi) && hi > lo,
          ErrorCode::invalid_argument, "midpoints: need finite lo < hi and count >= 1");
  std::vector<double> out(static_cast<std::size_t>(count));
  const double h = (hi - lo) / count;
  for (int i = 0; i < count; ++i) out[std::size_t(i)] = lo + (i + 0.5) * h;
  return out;
}

double GridPosterior::expect(const std::function<double(std::span<const double>)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (weights[i] > 0.0) s += weights[i] * f(node(i));
  }
  return s;
}

GridPosterior grid_posterior(const ParamFunction& loglik, const ParamFunction& prior_density,
                             const Box& bounds, std::span<const int> resolution) {
  const auto dim = bounds.lo.size();
  require(dim >= 1 && dim <= 3, ErrorCode::invalid_argument,
          "grid_posterior: dimension must be 1..3");
  require(bounds.hi.size() == dim && resolution.size() == dim, ErrorCode::invalid_argument,
          "grid_posterior: bounds and resolution must match in dimension");
  std::vector<std::vector<double>> axes;
  std::size_t total = 1;
  for (std::size_t d = 0; d < dim; ++d) {
    axes.push_back(midpoints(bounds.lo[d], bounds.hi[d], resolution[d]));
    total *= static_cast<std::size_t>(resolution[d]);
  }

  GridPosterior out;
  out.dim = static_cast<int>(dim);
  out.nodes.resize(total * dim);
  out.weights.resize(total);
  std::vector<std::size_t> idx(dim, 0);
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < total; ++n) {
    double* node = out.nodes.data() + n * dim;
    for (std::size_t d = 0; d < dim; ++d) node[d] = axes[d][idx[d]];
    std::span<const double> theta(node, dim);
    const double prior = prior_density(theta);
    double lw = -std::numeric_limits<double>::infinity();
    if (prior > 0.0) {
      const double ll = loglik(theta);
      if (!std::isnan(ll)) lw = ll + std::log(prior);
    }
    out.weights[n] = lw;
    max_log = std::max(max_log, lw);
    // odometer, last axis fastest
    for (std::size_t d = dim; d-- > 0;) {
      if (++idx[d] < axes[d].size()) break;
      idx[d] = 0;
    }
  }
  require(std::isfinite(max_log), ErrorCode::no_posterior_mass,
          "grid_posterior: zero posterior mass on every node");
  double sum = 0.0;
  for (double& w : out.weights) {
    w = std::isfinite(w) ? std::exp(w - max_log) : 0.0;
    sum += w;
  }
  for (double& w : out.weights) w /= sum;
  return out;
}

std::vector<double> ChainResult::mean() const {
  std::vector<double> m(static_cast<std::size_t>(dim), 0.0);
  const auto rows = kept();
  for (std::size_t i = 0; i < rows; ++i) {
    const auto r = row(i);
    for (std::size_t d = 0; d < m.size(); ++d) m[d] += r[d];
  }
  for (double& v : m) v /= static_cast<double>(rows);
  return m;
}

void SkeletonSpec::validate() const {
  require(n_levels >= 1, ErrorCode::invalid_argument, "skeleton needs at least one level");
  require(mtd_position >= 1 && mtd_position <= n_levels, ErrorCode::invalid_argument,
          "skeleton mtd_position must lie in 1..n_levels");
  require(phi > 0.0 && phi < 1.0, ErrorCode::invalid_argument, "skeleton phi must lie in (0,1)");
  require(half_width > 0.0 && half_width < phi && phi + half_width < 1.0,
          ErrorCode::invalid_argument, "skeleton half_width must lie in (0, min(phi, 1-phi))");
}

std::vector<double> crm_skeleton(const SkeletonSpec& spec) {
  spec.validate();
  const double lo = std::log(spec.phi - spec.half_width);
  const double hi = std::log(spec.phi + spec.half_width);
  std::vector<double> s(static_cast<std::size_t>(spec.n_levels));
  const auto mtd = static_cast<std::size_t>(spec.mtd_position - 1);
  s[mtd] = spec.phi;
  // Adjacent levels meet at the working-model parameter where the upper
  // level sits at phi+delta and the lower at phi-delta.
  for (std::size_t i = mtd; i > 0; --i) s[i - 1] = std::exp(lo * std::log(s[i]) / hi);
  for (std::size_t i = mtd; i + 1 < s.size(); ++i) s[i + 1] = std::exp(hi * std::log(s[i]) / lo);
  for (double v : s) {
    require(v > 0.0 && v < 1.0, ErrorCode::invalid_argument,
            "skeleton spec drives an entry outside (0,1)");
  }
  return s;
}

}  // namespace combo
