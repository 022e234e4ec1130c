#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "combo/numerics.hpp"

namespace combo {

namespace {

struct Block {
  double sum_w;
  double sum_wy;
  std::size_t count;
};

/// Weighted PAVA into out; blocks is scratch.
void pava_into(std::span<const double> values, std::span<const double> weights, std::span<double> out,
               std::vector<Block>& blocks) {
  blocks.clear();
  for (std::size_t i = 0; i < values.size(); ++i) {
    blocks.push_back({weights[i], weights[i] * values[i], 1});
    while (blocks.size() >= 2) {
      const Block& hi = blocks.back();
      const Block& lo = blocks[blocks.size() - 2];
      if (lo.sum_wy * hi.sum_w <= hi.sum_wy * lo.sum_w) break;
      Block merged{lo.sum_w + hi.sum_w, lo.sum_wy + hi.sum_wy, lo.count + hi.count};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::size_t i = 0;
  for (const Block& b : blocks) {
    const double m = b.sum_wy / b.sum_w;
    for (std::size_t c = 0; c < b.count; ++c) out[i++] = m;
  }
}

}  // namespace

std::vector<double> pava(std::span<const double> values, std::span<const double> weights) {
  require(values.size() == weights.size(), ErrorCode::invalid_argument,
          "pava: values and weights differ in length");
  for (double w : weights) require(w > 0.0, ErrorCode::invalid_argument, "pava: weights must be positive");
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  std::vector<double> out(values.size());
  pava_into(values, weights, out, blocks);
  return out;
}

namespace {

struct LineScratch {
  std::vector<double> v, w, fit;
  std::vector<Block> blocks;
};

// rows run along j (stride 1 in the flattened index), columns along k
void project_lines(const DoseGrid& g, bool rows, const std::vector<double>& in,
                   const std::vector<double>& w, std::vector<double>& out, LineScratch& s) {
  const int len = rows ? g.J : g.K, lines = rows ? g.K : g.J;
  s.v.resize(std::size_t(len));
  s.w.resize(std::size_t(len));
  s.fit.resize(std::size_t(len));
  for (int l = 1; l <= lines; ++l) {
    for (int t = 1; t <= len; ++t) {
      const auto i = std::size_t(g.index(rows ? Dose{t, l} : Dose{l, t}));
      s.v[std::size_t(t - 1)] = in[i];
      s.w[std::size_t(t - 1)] = w[i];
    }
    pava_into(s.v, s.w, s.fit, s.blocks);
    for (int t = 1; t <= len; ++t) out[std::size_t(g.index(rows ? Dose{t, l} : Dose{l, t}))] = s.fit[std::size_t(t - 1)];
  }
}

bool is_isotonic(const DoseGrid& g, const std::vector<double>& x, double tol) {
  for (int k = 1; k <= g.K; ++k) {
    for (int j = 1; j <= g.J; ++j) {
      const double v = x[std::size_t(g.index({j, k}))];
      if (j < g.J && x[std::size_t(g.index({j + 1, k}))] < v - tol) return false;
      if (k < g.K && x[std::size_t(g.index({j, k + 1}))] < v - tol) return false;
    }
  }
  return true;
}

double weighted_sse(const std::vector<double>& x, const std::vector<double>& v,
                    const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * (x[i] - v[i]) * (x[i] - v[i]);
  return s;
}

/// Snap an approximate solution to the exact weighted means of its level
/// blocks (adjacent cells with numerically equal fitted values).
std::vector<double> polish_blocks(const DoseGrid& g, const std::vector<double>& approx,
                                  const std::vector<double>& v, const std::vector<double>& w) {
  const auto n = approx.size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[std::size_t(a)] != a) a = parent[std::size_t(a)] = parent[std::size_t(parent[std::size_t(a)])];
    return a;
  };
  auto unite = [&](int a, int b) { parent[std::size_t(find(a))] = find(b); };
  for (int k = 1; k <= g.K; ++k) {
    for (int j = 1; j <= g.J; ++j) {
      const int i = g.index({j, k});
      if (j < g.J) {
        const int r = g.index({j + 1, k});
        if (std::abs(approx[std::size_t(i)] - approx[std::size_t(r)]) < 1e-9) unite(i, r);
      }
      if (k < g.K) {
        const int u = g.index({j, k + 1});
        if (std::abs(approx[std::size_t(i)] - approx[std::size_t(u)]) < 1e-9) unite(i, u);
      }
    }
  }
  std::vector<double> sw(n, 0.0), swy(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = std::size_t(find(int(i)));
    sw[r] += w[i];
    swy[r] += w[i] * v[i];
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = std::size_t(find(int(i)));
    out[i] = swy[r] / sw[r];
  }
  return out;
}

}  // namespace

Matrix pava_2d(const Matrix& values, const Matrix& weights) {
  const DoseGrid& g = values.shape();
  require(weights.shape() == g, ErrorCode::invalid_argument, "pava_2d: shape mismatch");
  for (double w : weights.data()) {
    require(w > 0.0 && std::isfinite(w), ErrorCode::invalid_argument,
            "pava_2d: weights must be positive");
  }
  const auto& v = values.data();
  const auto& w = weights.data();
  if (is_isotonic(g, v, 0.0)) return values;

  // Dykstra's cyclic projection: row cone then column cone, with the
  // correction terms that make the limit the projection onto the
  // intersection rather than just a feasible point.
  const auto n = v.size();
  std::vector<double> x = v, p(n, 0.0), q(n, 0.0), tmp(n), row_fit(n), col_fit(n);
  LineScratch scratch;
  int iter = 0;
  for (const double tol : {1e-10, 1e-13}) {
    for (; iter < 100000; ++iter) {
      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + p[i];
      project_lines(g, true, tmp, w, row_fit, scratch);
      for (std::size_t i = 0; i < n; ++i) p[i] = tmp[i] - row_fit[i];
      for (std::size_t i = 0; i < n; ++i) tmp[i] = row_fit[i] + q[i];
      project_lines(g, false, tmp, w, col_fit, scratch);
      for (std::size_t i = 0; i < n; ++i) q[i] = tmp[i] - col_fit[i];
      double change = 0.0;
      for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(col_fit[i] - x[i]));
      x.swap(col_fit);
      if (change < tol && is_isotonic(g, x, 1e-12)) break;
    }
    auto polished = polish_blocks(g, x, v, w);
    if (is_isotonic(g, polished, 0.0) && weighted_sse(polished, v, w) <= weighted_sse(x, v, w) + 1e-12) {
      x = std::move(polished);
      break;
    }
  }
  Matrix out(g);
  out.data() = std::move(x);
  return out;
}

namespace {

using Mask = std::uint32_t;

/// All down-closed subsets of `remaining` under the predecessor masks.
std::vector<Mask> lower_sets(Mask remaining, const std::vector<Mask>& preds) {
  std::vector<Mask> out{0};
  std::unordered_set<Mask> seen{0};
  for (std::size_t head = 0; head < out.size(); ++head) {
    const Mask set = out[head];
    for (std::size_t c = 0; c < preds.size(); ++c) {
      const Mask bit = Mask{1} << c;
      if (!(remaining & bit) || (set & bit)) continue;
      if ((preds[c] & remaining & ~set) != 0) continue;
      const Mask next = set | bit;
      if (seen.insert(next).second) out.push_back(next);
    }
  }
  return out;
}

}  // namespace

Matrix isotonic_subset(const Matrix& values, const Matrix& weights, const Grid<char>& mask) {
  const DoseGrid& g = values.shape();
  require(weights.shape() == g && mask.shape() == g, ErrorCode::invalid_argument,
          "isotonic_subset: shape mismatch");
  require(g.size() <= 30, ErrorCode::invalid_argument, "isotonic_subset: grid too large");
  std::vector<int> cells;
  for (int i = 0; i < g.size(); ++i) {
    if (mask.data()[std::size_t(i)]) {
      require(weights.data()[std::size_t(i)] > 0.0, ErrorCode::invalid_argument,
              "isotonic_subset: weights must be positive");
      cells.push_back(i);
    }
  }
  Matrix out(g, std::numeric_limits<double>::quiet_NaN());
  if (cells.empty()) return out;

  const auto m = cells.size();
  std::vector<Mask> preds(m, 0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const Dose da = g.dose(cells[a]), db = g.dose(cells[b]);
      if (a != b && precedes_or_equal(db, da)) preds[a] |= Mask{1} << b;
    }
  }
  // Minimum lower sets: the lowest level of the fit is the largest lower
  // set with the smallest weighted mean; peel it off and repeat.
  Mask remaining = (m == 32) ? ~Mask{0} : ((Mask{1} << m) - 1);
  while (remaining) {
    double best_mean = std::numeric_limits<double>::infinity();
    Mask best = 0;
    for (Mask set : lower_sets(remaining, preds)) {
      if (!set) continue;
      double sw = 0.0, swy = 0.0;
      for (std::size_t c = 0; c < m; ++c) {
        if (set & (Mask{1} << c)) {
          const auto i = std::size_t(cells[c]);
          sw += weights.data()[i];
          swy += weights.data()[i] * values.data()[i];
        }
      }
      const double mean = swy / sw;
      if (mean < best_mean - 1e-14 ||
          (std::abs(mean - best_mean) <= 1e-14 && std::popcount(set) > std::popcount(best))) {
        best_mean = mean;
        best = set;
      }
    }
    for (std::size_t c = 0; c < m; ++c) {
      if (best & (Mask{1} << c)) out.data()[std::size_t(cells[c])] = best_mean;
    }
    remaining &= ~best;
  }
  return out;
}

}  // namespace combo
