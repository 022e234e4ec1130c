#include "combo/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "combo/kernels.hpp"

namespace combo {

namespace {
// Finite stand-in for log(0) so that 0 * log(0) stays 0 in the kernels.
constexpr double kLogFloor = -1e300;
}  // namespace

TabulatedSurface::TabulatedSurface(DoseGrid grid, std::size_t nodes, const Filler& fill,
                                   std::vector<double> log_prior)
    : grid_(grid), nodes_(nodes), log_prior_(std::move(log_prior)) {
  require(nodes_ > 0, ErrorCode::invalid_argument, "tabulated surface needs nodes");
  require(log_prior_.empty() || log_prior_.size() == nodes_, ErrorCode::invalid_argument,
          "tabulated surface: prior length mismatch");
  const auto cells = static_cast<std::size_t>(grid_.size());
  prob_.resize(cells * nodes_);
  log_p_.resize(cells * nodes_);
  log_q_.resize(cells * nodes_);
  std::vector<double> buf(cells);
  for (std::size_t node = 0; node < nodes_; ++node) {
    fill(node, buf);
    for (std::size_t c = 0; c < cells; ++c) {
      const double lq = std::min(buf[c], 0.0);
      const double p = -std::expm1(lq);
      const std::size_t at = c * nodes_ + node;
      prob_[at] = p;
      log_q_[at] = std::max(lq, kLogFloor);
      log_p_[at] = p > 0.0 ? std::log(p) : kLogFloor;
    }
  }
}

std::vector<double> TabulatedSurface::weights(const TrialState& state) const {
  require(state.grid == grid_, ErrorCode::invalid_argument, "tabulated surface: grid mismatch");
  const auto& k = kernels::active();
  std::vector<double> acc = log_prior_.empty() ? std::vector<double>(nodes_, 0.0) : log_prior_;
  for (int c = 0; c < grid_.size(); ++c) {
    const Dose d = grid_.dose(c);
    const int n = state.n(d);
    if (n == 0) continue;
    const int y = state.y(d);
    k.accumulate_binomial(acc.data(), log_p_.data() + offset(d), log_q_.data() + offset(d),
                          double(y), double(n - y), nodes_);
  }
  const double shift = k.max_value(acc.data(), nodes_);
  require(std::isfinite(shift) && shift > kLogFloor / 2, ErrorCode::no_posterior_mass,
          "tabulated surface: zero posterior mass on every node");
  std::vector<double> w(nodes_);
  const double total = k.exp_shift(w.data(), acc.data(), shift, nodes_);
  const double inv = 1.0 / total;
  for (double& v : w) v *= inv;
  return w;
}

double TabulatedSurface::mean(std::span<const double> w, Dose d) const {
  return kernels::active().dot(w.data(), prob_.data() + offset(d), nodes_);
}

double TabulatedSurface::mass(std::span<const double> w, Dose d, double lo, double hi) const {
  return kernels::active().interval_mass(w.data(), prob_.data() + offset(d), lo, hi, nodes_);
}

TabulatedSurface::Split TabulatedSurface::split(std::span<const double> w, Dose d, double cut) const {
  double out[3];
  kernels::active().split_moments(w.data(), prob_.data() + offset(d), cut, nodes_, out);
  return {out[0], out[1], out[2]};
}

std::span<const double> TabulatedSurface::probabilities(Dose d) const {
  return {prob_.data() + offset(d), nodes_};
}

}  // namespace combo
