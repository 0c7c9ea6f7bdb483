#include "nrh/volume.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <thread>

#include "nrh/sampling.hpp"

namespace nrh {

namespace {

constexpr long kChunk = 256;

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

struct Accumulated {
  std::vector<double> sum;
  std::vector<double> sumsq;
  double max_tail = 0.0;
};

// Runs fn(index, rng, out, tail) for every sample. Samples are grouped in
// fixed chunks summed in index order, and chunk totals are reduced pairwise
// in chunk order, so the result does not depend on the thread count.
template <class Fn>
Accumulated accumulate(long count, int width, const QuadratureConfig& quad, Fn fn) {
  if (count < 1) throw std::invalid_argument("sample_count must be at least 1");
  const long chunks = (count + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> chunk_sum(static_cast<std::size_t>(chunks));
  std::vector<std::vector<double>> chunk_sq(static_cast<std::size_t>(chunks));
  std::vector<double> chunk_tail(static_cast<std::size_t>(chunks), 0.0);
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};

  auto worker = [&] {
    std::vector<double> out(static_cast<std::size_t>(width));
    while (!failed) {
      const long c = next.fetch_add(1);
      if (c >= chunks) break;
      auto& s = chunk_sum[static_cast<std::size_t>(c)];
      auto& q = chunk_sq[static_cast<std::size_t>(c)];
      s.assign(static_cast<std::size_t>(width), 0.0);
      q.assign(static_cast<std::size_t>(width), 0.0);
      double tail = 0.0;
      try {
        for (long i = c * kChunk; i < std::min(count, (c + 1) * kChunk); ++i) {
          std::mt19937_64 rng = sample_rng(quad.seed, static_cast<std::uint64_t>(i));
          double sample_tail = 0.0;
          fn(i, rng, out, sample_tail);
          tail = std::max(tail, sample_tail);
          for (int k = 0; k < width; ++k) {
            s[k] += out[k];
            q[k] += out[k] * out[k];
          }
        }
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
      chunk_tail[static_cast<std::size_t>(c)] = tail;
    }
  };

  int threads = quad.threads > 0 ? quad.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = static_cast<int>(std::clamp<long>(threads, 1, chunks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  Accumulated acc;
  acc.sum.resize(static_cast<std::size_t>(width));
  acc.sumsq.resize(static_cast<std::size_t>(width));
  std::vector<double> column(static_cast<std::size_t>(chunks));
  for (int k = 0; k < width; ++k) {
    for (long c = 0; c < chunks; ++c) column[static_cast<std::size_t>(c)] = chunk_sum[static_cast<std::size_t>(c)][k];
    acc.sum[k] = pairwise_sum(column);
    for (long c = 0; c < chunks; ++c) column[static_cast<std::size_t>(c)] = chunk_sq[static_cast<std::size_t>(c)][k];
    acc.sumsq[k] = pairwise_sum(column);
  }
  acc.max_tail = *std::max_element(chunk_tail.begin(), chunk_tail.end());
  return acc;
}

Moment moment(const Accumulated& acc, int k, long n, double shift = 0.0) {
  const double mean = acc.sum[k] / n;
  double var = n > 1 ? (acc.sumsq[k] - acc.sum[k] * mean) / (n - 1) : 0.0;
  var = std::max(var, 0.0);
  return {mean + shift, std::sqrt(var / n)};
}

// Pattern check once per run; the sample loop then uses bare jets.
void require_rank_two(const AlgebraSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng = sample_rng(seed ^ 0x5bd1e995ULL, 0);
  for (int i = 0; i < 2; ++i) {
    (void)closed_form_jacobi(spec, from_m<double>(spec, random_unit_vector(rng, spec.dim_m())));
  }
}

TaylorTensor sample_series(const AlgebraSpec& spec, std::mt19937_64& rng, int order) {
  const AlgVec<double> v = from_m<double>(spec, random_unit_vector(rng, spec.dim_m()));
  return taylor_series(curvature_jet(spec, v), order);
}

PiecewiseTaylor sample_pieces(const AlgebraSpec& spec, std::mt19937_64& rng, const QuadratureConfig& quad,
                              double t_max) {
  const AlgVec<double> v = from_m<double>(spec, random_unit_vector(rng, spec.dim_m()));
  return taylor_pieces(closed_form_from_jet(curvature_jet(spec, v)), t_max, quad.series_order, quad.tolerance);
}

double abs_det_over_power(const Eigen::MatrixXd& a, double t) {
  const double det = a.partialPivLu().determinant();
  return std::abs(det) / std::pow(t, static_cast<double>(a.rows()));
}

}  // namespace

double unit_sphere_area(int dim) {
  return 2.0 * std::pow(std::numbers::pi, dim / 2.0) / std::tgamma(dim / 2.0);
}

double theta(const TaylorTensor& series, double t, double tol) {
  if (t < 0.0) throw std::invalid_argument("theta requires t >= 0");
  if (t == 0.0) return 1.0;
  return abs_det_over_power(evaluate_A(series, t, tol).a, t);
}

double theta(const AlgebraSpec& spec, const AlgVec<double>& v, double t, int order, double tol) {
  if (t < 0.0) throw std::invalid_argument("theta requires t >= 0");
  if (t == 0.0) return 1.0;
  return abs_det_over_power(taylor_pieces(closed_form_jacobi(spec, v), t, order, tol).evaluate_A(t), t);
}

std::vector<double> det_series(const TaylorTensor& series, int n_max) {
  const int d = static_cast<int>(series.coeffs[1].rows());
  std::vector<double> out(static_cast<std::size_t>(std::max(n_max, 0)) + 1, 0.0);
  if (n_max < d) return out;
  const int len = n_max - d + 1;  // degrees 0..n_max-d of det(A/t)
  if (len > series.order) {
    throw std::invalid_argument("det_series: series order " + std::to_string(series.order) +
                                " too small for coefficient " + std::to_string(n_max));
  }
  using Series = std::vector<double>;
  auto mul = [len](const Series& a, const Series& b) {
    Series c(static_cast<std::size_t>(len), 0.0);
    for (int i = 0; i < len; ++i) {
      if (a[i] == 0.0) continue;
      for (int j = 0; i + j < len; ++j) c[i + j] += a[i] * b[j];
    }
    return c;
  };
  auto inverse = [len](const Series& a) {
    if (a[0] == 0.0) throw std::domain_error("det_series: singular pivot");
    Series inv(static_cast<std::size_t>(len), 0.0);
    inv[0] = 1.0 / a[0];
    for (int n = 1; n < len; ++n) {
      double s = 0.0;
      for (int k = 1; k <= n; ++k) s += a[k] * inv[n - k];
      inv[n] = -s / a[0];
    }
    return inv;
  };

  // B(t) = A(t)/t = sum_k C_{k+1} t^k; each pivot has constant term 1 after
  // elimination because B(0) = I.
  std::vector<std::vector<Series>> b(static_cast<std::size_t>(d), std::vector<Series>(static_cast<std::size_t>(d)));
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      Series& s = b[r][c];
      s.resize(static_cast<std::size_t>(len));
      for (int k = 0; k < len; ++k) s[k] = series.coeffs[k + 1](r, c);
    }
  }
  Series det(static_cast<std::size_t>(len), 0.0);
  det[0] = 1.0;
  for (int p = 0; p < d; ++p) {
    det = mul(det, b[p][p]);
    const Series pivot_inv = inverse(b[p][p]);
    for (int r = p + 1; r < d; ++r) {
      const Series factor = mul(b[r][p], pivot_inv);
      if (std::all_of(factor.begin(), factor.end(), [](double x) { return x == 0.0; })) continue;
      for (int c = p + 1; c < d; ++c) {
        const Series update = mul(factor, b[p][c]);
        for (int k = 0; k < len; ++k) b[r][c][k] -= update[k];
      }
    }
  }
  for (int k = 0; k < len; ++k) out[static_cast<std::size_t>(d + k)] = det[k];
  return out;
}

double det_series_coeff(const TaylorTensor& series, int n) {
  if (n < 0) return 0.0;
  return det_series(series, n)[static_cast<std::size_t>(n)];
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

std::vector<VolumeRow> volume_table(const AlgebraSpec& spec, const std::vector<double>& radii,
                                    const QuadratureConfig& quad) {
  if (radii.empty()) return {};
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && radii[i] <= radii[i - 1])) {
      throw std::invalid_argument("radii must be positive and strictly increasing");
    }
  }
  const int d = spec.dim_m();
  const double r_max = radii.back();

  // Node layout: integration nodes per segment [radii[i-1], radii[i]] plus
  // every grid radius (weight 0 where the rule does not include it).
  std::vector<double> node_t;
  std::vector<std::vector<std::pair<int, double>>> segment_weights(radii.size());
  std::vector<int> row_node(radii.size());
  auto add_node = [&](double t) {
    node_t.push_back(t);
    return static_cast<int>(node_t.size()) - 1;
  };
  int prev_node = add_node(0.0);
  double prev_t = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double len = radii[i] - prev_t;
    if (quad.t_integrator == TIntegrator::simpson) {
      const int total = std::max(2, quad.t_nodes - 1);
      int m = static_cast<int>(std::lround(total * len / r_max / 2.0)) * 2;
      m = std::max(m, 2);
      const double h = len / m;
      std::vector<int> ids{prev_node};
      for (int j = 1; j <= m; ++j) ids.push_back(add_node(prev_t + j * h));
      for (int j = 0; j <= m; ++j) {
        const double w = (j == 0 || j == m) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        segment_weights[i].emplace_back(ids[static_cast<std::size_t>(j)], w * h / 3.0);
      }
      row_node[i] = ids.back();
    } else {
      std::vector<double> x;
      std::vector<double> w;
      gauss_legendre(std::max(1, quad.t_nodes), x, w);
      for (std::size_t j = 0; j < x.size(); ++j) {
        const int id = add_node(prev_t + 0.5 * len * (x[j] + 1.0));
        segment_weights[i].emplace_back(id, 0.5 * len * w[j]);
      }
      row_node[i] = add_node(radii[i]);
    }
    prev_node = row_node[i];
    prev_t = radii[i];
  }

  const int width = static_cast<int>(node_t.size());
  require_rank_two(spec, quad.seed);
  const Accumulated acc = accumulate(
      quad.sample_count, width, quad, [&](long, std::mt19937_64& rng, std::vector<double>& out, double& tail) {
        const PiecewiseTaylor series = sample_pieces(spec, rng, quad, r_max);
        tail = series.tail_bound;
        for (int k = 0; k < width; ++k) {
          const double t = node_t[static_cast<std::size_t>(k)];
          out[k] = t == 0.0 ? 0.0 : abs_det_over_power(series.evaluate_A(t), t) - 1.0;
        }
      });
  if (!(acc.max_tail <= quad.tolerance)) {
    throw TruncationError("Taylor tail bound " + std::to_string(acc.max_tail) + " at t = " + std::to_string(r_max) +
                              " exceeds tolerance; raise the series order",
                          acc.max_tail);
  }

  const double sphere = unit_sphere_area(d);
  std::vector<double> area_at(static_cast<std::size_t>(width));
  std::vector<Moment> theta_at(static_cast<std::size_t>(width));
  for (int k = 0; k < width; ++k) {
    theta_at[k] = moment(acc, k, quad.sample_count, 1.0);
    area_at[k] = sphere * std::pow(node_t[k], d - 1) * theta_at[k].mean;
  }

  std::vector<VolumeRow> rows;
  double volume = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    for (const auto& [id, w] : segment_weights[i]) volume += w * area_at[static_cast<std::size_t>(id)];
    const int id = row_node[i];
    rows.push_back({radii[i], theta_at[id].mean, theta_at[id].std_error, area_at[id], volume});
  }
  return rows;
}

AreaEstimate sphere_area(const AlgebraSpec& spec, double t, const QuadratureConfig& quad) {
  if (!(t > 0.0)) throw std::invalid_argument("sphere_area requires t > 0");
  require_rank_two(spec, quad.seed);
  const Accumulated acc =
      accumulate(quad.sample_count, 1, quad, [&](long, std::mt19937_64& rng, std::vector<double>& out, double& tail) {
        const PiecewiseTaylor series = sample_pieces(spec, rng, quad, t);
        tail = series.tail_bound;
        out[0] = abs_det_over_power(series.evaluate_A(t), t) - 1.0;
      });
  if (!(acc.max_tail <= quad.tolerance)) {
    throw TruncationError("Taylor tail bound " + std::to_string(acc.max_tail) + " at t = " + std::to_string(t) +
                              " exceeds tolerance; raise the series order",
                          acc.max_tail);
  }
  const Moment th = moment(acc, 0, quad.sample_count, 1.0);
  const double scale = unit_sphere_area(spec.dim_m()) * std::pow(t, spec.dim_m() - 1);
  return {scale * th.mean, scale * th.std_error, th.mean, th.std_error};
}

double ball_volume(const AlgebraSpec& spec, double r, const QuadratureConfig& quad) {
  return volume_table(spec, {r}, quad).back().volume;
}

std::vector<Moment> det_moments(const AlgebraSpec& spec, int k_max, const QuadratureConfig& quad) {
  if (k_max < 0) throw std::invalid_argument("k_max must be non-negative");
  require_rank_two(spec, quad.seed);
  const int width = k_max + 1;
  const Accumulated acc =
      accumulate(quad.sample_count, width, quad, [&](long, std::mt19937_64& rng, std::vector<double>& out, double&) {
        const TaylorTensor series = sample_series(spec, rng, quad.series_order);
        const std::vector<double> a = det_series(series, k_max);
        std::copy(a.begin(), a.end(), out.begin());
      });
  std::vector<Moment> out;
  for (int k = 0; k < width; ++k) out.push_back(moment(acc, k, quad.sample_count));
  return out;
}

double area_series_from_moments(const std::vector<Moment>& moments, int dim, double t, int n_max,
                                double normalization) {
  double sum = 0.0;
  for (int k = dim; k <= 2 * n_max + 1; k += 2) {
    if (k >= static_cast<int>(moments.size())) {
      throw std::invalid_argument("area_series: moments only up to k = " + std::to_string(moments.size() - 1));
    }
    sum += moments[static_cast<std::size_t>(k)].mean * std::pow(t, k - 1);
  }
  return normalization * sum;
}

double area_series(const AlgebraSpec& spec, double t, int n_max, const QuadratureConfig& quad) {
  const int k_max = 2 * n_max + 1;
  if (k_max - spec.dim_m() + 1 > quad.series_order) {
    throw std::invalid_argument("area_series: series order too small for n_max = " + std::to_string(n_max));
  }
  const std::vector<Moment> moments = det_moments(spec, k_max, quad);
  return area_series_from_moments(moments, spec.dim_m(), t, n_max, unit_sphere_area(spec.dim_m()));
}

}  // namespace nrh
