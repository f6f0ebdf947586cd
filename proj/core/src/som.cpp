#include "tba/som.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <cmath>
#include <numbers>
#include <numeric>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Dense>

#if defined(__x86_64__) && defined(__GNUC__)
#include <immintrin.h>
#endif

#include "tba/errors.hpp"

namespace tba {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

// Hot loops, specialized for the usual embedding dimensions. Dim == 0 means
// "runtime m". Every variant accumulates a neuron's squared distance over
// coordinates 0..m-1 with separate multiply and add, so all of them return
// the same winner bit for bit.
template <std::size_t Dim>
std::size_t nearest(const double* coords, std::size_t count, std::size_t m, const double* goal,
                    const char* inhibited) {
  const std::size_t dims = Dim == 0 ? m : Dim;
  std::size_t best = count;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < count; ++j) {
    if (inhibited[j]) continue;
    double d = 0.0;
    for (std::size_t k = 0; k < dims; ++k) {
      const double t = coords[k * count + j] - goal[k];
      d += t * t;
    }
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

#if defined(__x86_64__) && defined(__GNUC__)
#define TBA_HAVE_AVX2_KERNELS 1

// Four neurons per step; each lane keeps its own best, lanes are merged by
// (distance, index) at the end.
template <std::size_t Dim>
__attribute__((target("avx2"))) std::size_t nearest_avx2(const double* coords, std::size_t count, std::size_t m,
                                                         const double* goal, const char* inhibited) {
  const std::size_t dims = Dim == 0 ? m : Dim;
  const double inf = std::numeric_limits<double>::infinity();
  const __m256d vinf = _mm256_set1_pd(inf);
  __m256d best = vinf;
  __m256i best_idx = _mm256_set1_epi64x(-1);
  __m256i idx = _mm256_setr_epi64x(0, 1, 2, 3);
  const __m256i step = _mm256_set1_epi64x(4);
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    __m256d t = _mm256_sub_pd(_mm256_loadu_pd(coords + j), _mm256_set1_pd(goal[0]));
    __m256d d = _mm256_mul_pd(t, t);
    for (std::size_t k = 1; k < dims; ++k) {
      t = _mm256_sub_pd(_mm256_loadu_pd(coords + k * count + j), _mm256_set1_pd(goal[k]));
      d = _mm256_add_pd(d, _mm256_mul_pd(t, t));
    }
    std::int32_t flags;
    std::memcpy(&flags, inhibited + j, sizeof(flags));
    const __m256i wide = _mm256_cvtepi8_epi64(_mm_cvtsi32_si128(flags));
    const __m256d free = _mm256_castsi256_pd(_mm256_cmpeq_epi64(wide, _mm256_setzero_si256()));
    d = _mm256_blendv_pd(vinf, d, free);
    const __m256d closer = _mm256_cmp_pd(d, best, _CMP_LT_OQ);
    best = _mm256_blendv_pd(best, d, closer);
    best_idx = _mm256_castpd_si256(
        _mm256_blendv_pd(_mm256_castsi256_pd(best_idx), _mm256_castsi256_pd(idx), closer));
    idx = _mm256_add_epi64(idx, step);
  }
  alignas(32) double lane_d[4];
  alignas(32) std::int64_t lane_i[4];
  _mm256_store_pd(lane_d, best);
  _mm256_store_si256(reinterpret_cast<__m256i*>(lane_i), best_idx);
  double best_d = inf;
  std::size_t winner = count;
  for (int l = 0; l < 4; ++l) {
    if (lane_i[l] < 0) continue;
    const auto i = static_cast<std::size_t>(lane_i[l]);
    if (lane_d[l] < best_d || (lane_d[l] == best_d && i < winner)) {
      best_d = lane_d[l];
      winner = i;
    }
  }
  for (; j < count; ++j) {
    if (inhibited[j]) continue;
    double d = 0.0;
    for (std::size_t k = 0; k < dims; ++k) {
      const double t = coords[k * count + j] - goal[k];
      d += t * t;
    }
    if (d < best_d) {
      best_d = d;
      winner = j;
    }
  }
  return winner;
}

bool cpu_has_avx2() {
  static const bool has = __builtin_cpu_supports("avx2");
  return has;
}
#endif

using NearestFn = std::size_t (*)(const double*, std::size_t, std::size_t, const double*, const char*);

NearestFn nearest_for(std::size_t m) {
#ifdef TBA_HAVE_AVX2_KERNELS
  if (cpu_has_avx2()) {
    switch (m) {
      case 2: return nearest_avx2<2>;
      case 3: return nearest_avx2<3>;
      case 5: return nearest_avx2<5>;
      case 10: return nearest_avx2<10>;
      default: return nearest_avx2<0>;
    }
  }
#endif
  switch (m) {
    case 2: return nearest<2>;
    case 3: return nearest<3>;
    case 5: return nearest<5>;
    case 10: return nearest<10>;
    default: return nearest<0>;
  }
}

// Moves neurons first..last toward `goal`; neuron first + i uses gain[i].
template <std::size_t Dim>
void pull_range(double* coords, std::size_t count, std::size_t m, std::size_t first, std::size_t last,
                const double* goal, const double* gain) {
  const std::size_t dims = Dim == 0 ? m : Dim;
  for (std::size_t k = 0; k < dims; ++k) {
    double* row = coords + k * count;
    const double g = goal[k];
    for (std::size_t j = first; j <= last; ++j) row[j] += gain[j - first] * (g - row[j]);
  }
}

#ifdef TBA_HAVE_AVX2_KERNELS
// Same arithmetic, wider vectors; no fused multiply-add.
template <std::size_t Dim>
__attribute__((target("avx2"))) void pull_range_avx2(double* coords, std::size_t count, std::size_t m,
                                                     std::size_t first, std::size_t last, const double* goal,
                                                     const double* gain) {
  const std::size_t dims = Dim == 0 ? m : Dim;
  for (std::size_t k = 0; k < dims; ++k) {
    double* row = coords + k * count;
    const double g = goal[k];
    for (std::size_t j = first; j <= last; ++j) row[j] += gain[j - first] * (g - row[j]);
  }
}
#endif

using PullFn = void (*)(double*, std::size_t, std::size_t, std::size_t, std::size_t, const double*, const double*);

PullFn pull_for(std::size_t m) {
#ifdef TBA_HAVE_AVX2_KERNELS
  if (cpu_has_avx2()) {
    switch (m) {
      case 2: return pull_range_avx2<2>;
      case 3: return pull_range_avx2<3>;
      case 5: return pull_range_avx2<5>;
      case 10: return pull_range_avx2<10>;
      default: return pull_range_avx2<0>;
    }
  }
#endif
  switch (m) {
    case 2: return pull_range<2>;
    case 3: return pull_range<3>;
    case 5: return pull_range<5>;
    case 10: return pull_range<10>;
    default: return pull_range<0>;
  }
}

double cloud_diameter(const std::vector<LiftedGoal>& lifted) {
  double best = 0.0;
  for (std::size_t i = 0; i < lifted.size(); ++i) {
    for (std::size_t j = i + 1; j < lifted.size(); ++j) {
      best = std::max(best, sq_dist(lifted[i].point, lifted[j].point));
    }
  }
  return std::sqrt(best);
}

}  // namespace

bool is_permutation_of(const Ordering& ordering, std::size_t n) {
  if (ordering.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (std::size_t v : ordering) {
    if (v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

Ordering canonicalize_cycle(Ordering ordering) {
  if (ordering.size() < 2) return ordering;
  const auto zero = std::find(ordering.begin(), ordering.end(), std::size_t{0});
  if (zero != ordering.end()) std::rotate(ordering.begin(), zero, ordering.end());
  if (ordering.size() > 2 && ordering[1] > ordering.back()) std::reverse(ordering.begin() + 1, ordering.end());
  return ordering;
}

void SomParams::validate() const {
  if (!(mu > 0.0 && mu <= 1.0)) throw ValidationError("som: mu must be in (0, 1]");
  if (!(sigma_decay > 0.0 && sigma_decay < 1.0)) throw ValidationError("som: sigma_decay must be in (0, 1)");
  if (!(neuron_factor >= 1.0)) throw ValidationError("som: neuron_factor must be >= 1");
  if (max_epochs < 1) throw ValidationError("som: max_epochs must be >= 1");
  if (!(sigma0_factor > 0.0)) throw ValidationError("som: sigma0_factor must be > 0");
  if (!(neighborhood_radius_factor >= 0.0)) throw ValidationError("som: neighborhood radius must be >= 0");
  if (!(win_tolerance >= 0.0)) throw ValidationError("som: win_tolerance must be >= 0");
}

Ring Ring::from_rows(std::size_t m, const std::vector<std::vector<double>>& rows) {
  Ring ring;
  ring.m = m;
  ring.count = rows.size();
  ring.coords.resize(m * rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].size() != m) throw ValidationError("Ring::from_rows: row " + std::to_string(j) + " has wrong dimension");
    for (std::size_t k = 0; k < m; ++k) ring.coord(j, k) = rows[j][k];
  }
  return ring;
}

std::vector<double> Ring::neuron(std::size_t j) const {
  std::vector<double> out(m);
  for (std::size_t k = 0; k < m; ++k) out[k] = coord(j, k);
  return out;
}

std::size_t neuron_count(std::size_t goals, const SomParams& params) {
  const auto n = static_cast<std::size_t>(std::ceil(params.neuron_factor * static_cast<double>(goals)));
  return std::max(n, goals);
}

Ring init_ring(const std::vector<LiftedGoal>& lifted, const SomParams& params, std::uint64_t seed) {
  params.validate();
  if (lifted.empty()) throw ValidationError("init_ring: at least one goal is required");
  const std::size_t m = lifted.front().point.size();
  const auto mi = static_cast<Eigen::Index>(m);

  Eigen::MatrixXd cloud(static_cast<Eigen::Index>(lifted.size()), mi);
  for (std::size_t g = 0; g < lifted.size(); ++g) {
    for (std::size_t k = 0; k < m; ++k) cloud(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(k)) = lifted[g].point[k];
  }
  const Eigen::RowVectorXd centroid = cloud.colwise().mean();
  const Eigen::RowVectorXd extent = cloud.colwise().maxCoeff() - cloud.colwise().minCoeff();
  const double radius = 0.1 * extent.norm();

  // Principal directions; zero-extent directions fall back to coordinate axes.
  const Eigen::MatrixXd centred = cloud.rowwise() - centroid;
  const Eigen::MatrixXd cov = centred.transpose() * centred;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const double top = mi > 0 ? eig.eigenvalues()(mi - 1) : 0.0;
  std::vector<Eigen::VectorXd> axes;
  for (Eigen::Index k = 0; k < std::min<Eigen::Index>(2, mi); ++k) {
    const double lambda = eig.eigenvalues()(mi - 1 - k);
    if (lambda > 1e-12 * std::max(top, 1e-300) && lambda > 0.0) {
      Eigen::VectorXd v = eig.eigenvectors().col(mi - 1 - k);
      Eigen::Index arg = 0;
      v.cwiseAbs().maxCoeff(&arg);
      if (v(arg) < 0.0) v = -v;
      axes.push_back(v);
    }
  }
  for (Eigen::Index k = 0; k < mi && axes.size() < 2 && static_cast<Eigen::Index>(axes.size()) < mi; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(mi, k);
    for (const auto& a : axes) e -= a.dot(e) * a;
    if (e.norm() > 1e-6) axes.push_back(e.normalized());
  }
  while (axes.size() < 2) axes.push_back(Eigen::VectorXd::Zero(mi));

  std::mt19937_64 rng(seed);
  const double phase = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);

  Ring ring;
  ring.m = m;
  const std::size_t count = neuron_count(lifted.size(), params);
  ring.count = count;
  ring.coords.resize(count * m);
  ring.sigma = params.sigma0_factor * static_cast<double>(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double theta = phase + 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(count);
    const Eigen::VectorXd p =
        centroid.transpose() + radius * (std::cos(theta) * axes[0] + std::sin(theta) * axes[1]);
    for (std::size_t k = 0; k < m; ++k) ring.coord(j, k) = p(static_cast<Eigen::Index>(k));
  }
  return ring;
}

std::size_t select_winner(const Ring& ring, std::span<const double> goal, const std::vector<char>& inhibited) {
  const std::size_t count = ring.size();
  thread_local std::vector<char> padded;
  const char* mask = inhibited.data();
  if (inhibited.size() < count) {
    padded.assign(inhibited.begin(), inhibited.end());
    padded.resize(count, 0);
    mask = padded.data();
  }
  const std::size_t best = nearest_for(ring.m)(ring.coords.data(), count, ring.m, goal.data(), mask);
  if (best == count) throw Error("select_winner: every neuron is inhibited");
  return best;
}

void adapt(Ring& ring, std::size_t winner, std::span<const double> goal, const SomParams& params) {
  const std::size_t count = ring.size();
  const auto radius = std::min(
      static_cast<std::size_t>(std::ceil(params.neighborhood_radius_factor * static_cast<double>(count))), count / 2);
  if (ring.gain_sigma != ring.sigma || ring.gain_mu != params.mu || ring.gain_table.size() != radius + 1) {
    const double inv_sigma2 = 1.0 / (ring.sigma * ring.sigma);
    ring.gain_table.resize(radius + 1);
    ring.gain_table[0] = 1.0;
    for (std::size_t d = 1; d <= radius; ++d) {
      ring.gain_table[d] = std::exp(-static_cast<double>(d * d) * inv_sigma2);
    }
    ring.gain_sigma = ring.sigma;
    ring.gain_mu = params.mu;
    ring.scaled_gain.resize(radius + 1);
    for (std::size_t d = 0; d <= radius; ++d) ring.scaled_gain[d] = params.mu * ring.gain_table[d];
    ring.scaled_span.resize(2 * radius + 1);
    for (std::size_t o = 0; o <= 2 * radius; ++o) ring.scaled_span[o] = ring.scaled_gain[o > radius ? o - radius : radius - o];
  }

  const PullFn pull = pull_for(ring.m);
  if (2 * radius + 1 >= count) {
    // The neighbourhood covers the whole ring; gains follow cyclic distance.
    thread_local std::vector<double> gains;
    gains.resize(count);
    for (std::size_t j = 0; j < count; ++j) {
      const std::size_t raw = j > winner ? j - winner : winner - j;
      gains[j] = ring.scaled_gain[std::min(raw, count - raw)];
    }
    pull(ring.coords.data(), count, ring.m, 0, count - 1, goal.data(), gains.data());
    return;
  }
  // Offsets -radius .. radius around the winner, split at the wrap.
  const std::size_t span = 2 * radius + 1;
  const std::size_t start = (winner + count - radius) % count;
  const double* gain = ring.scaled_span.data();
  if (start + span <= count) {
    pull(ring.coords.data(), count, ring.m, start, start + span - 1, goal.data(), gain);
  } else {
    const std::size_t head = count - start;
    pull(ring.coords.data(), count, ring.m, start, count - 1, goal.data(), gain);
    pull(ring.coords.data(), count, ring.m, 0, span - head - 1, goal.data(), gain + head);
  }
}

SolveResult solve(const std::vector<LiftedGoal>& lifted, const SomParams& params, std::uint64_t seed) {
  params.validate();
  SolveResult result;
  const std::size_t n = lifted.size();
  if (n == 0) return result;

  Ring ring = init_ring(lifted, params, seed);
  // Separate stream for presentation order so ring init stays independent.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const double threshold = params.win_tolerance * cloud_diameter(lifted);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<char> inhibited(ring.size(), 0);
  result.winners.assign(n, 0);

  for (std::size_t epoch = 0; epoch < params.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    std::fill(inhibited.begin(), inhibited.end(), 0);
    for (std::size_t g : order) {
      const std::size_t w = select_winner(ring, lifted[g].point, inhibited);
      inhibited[w] = 1;
      result.winners[g] = w;
      adapt(ring, w, lifted[g].point, params);
    }
    ring.sigma *= params.sigma_decay;
    ring.epoch = epoch + 1;
    result.epochs_run = epoch + 1;

    bool close = true;
    for (std::size_t g = 0; g < n && close; ++g) {
      double sq = 0.0;
      for (std::size_t k = 0; k < ring.m; ++k) {
        const double t = ring.coord(result.winners[g], k) - lifted[g].point[k];
        sq += t * t;
      }
      close = std::sqrt(sq) <= threshold;
    }
    if (close) {
      result.converged = true;
      break;
    }
  }

  result.final_sigma = ring.sigma;
  Ordering ordering(n);
  std::iota(ordering.begin(), ordering.end(), 0);
  std::stable_sort(ordering.begin(), ordering.end(),
                   [&](std::size_t a, std::size_t b) { return result.winners[a] < result.winners[b]; });
  result.ordering = canonicalize_cycle(std::move(ordering));
  return result;
}

}  // namespace tba
