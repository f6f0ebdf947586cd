#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tba/tour.hpp"
#include "tba/triangulation.hpp"

namespace tba {

/// Ring self-organizing map parameters.
struct SomParams {
  double neuron_factor = 2.5;               // neurons per goal
  double mu = 0.6;                          // learning rate
  double sigma0_factor = 0.2;               // initial gain as a fraction of the neuron count
  double sigma_decay = 0.98;                // per-epoch gain multiplier
  double neighborhood_radius_factor = 0.2;  // fraction of the ring adapted around the winner
  std::size_t max_epochs = 120;
  double win_tolerance = 1e-4;              // relative to the goal-cloud diameter

  void validate() const;
};

/// Cyclic chain of neurons in R^m. Coordinates are stored coordinate-major
/// (all first coordinates, then all second ones, ...) so the per-goal scans
/// run over contiguous memory.
struct Ring {
  std::size_t m = 0;
  std::size_t count = 0;
  std::vector<double> coords;  // coords[k * count + j] is coordinate k of neuron j
  double sigma = 0.0;
  std::size_t epoch = 0;

  // gain_table[d] = exp(-d^2 / sigma^2) for the sigma it was built with.
  // scaled_gain[d] = mu * gain_table[d]; scaled_span holds the same values
  // laid out over offsets -radius .. radius.
  std::vector<double> gain_table;
  std::vector<double> scaled_gain;
  std::vector<double> scaled_span;
  double gain_sigma = 0.0;
  double gain_mu = 0.0;

  /// Ring of `rows.size()` neurons with the given coordinates.
  static Ring from_rows(std::size_t m, const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return count; }
  double coord(std::size_t j, std::size_t k) const { return coords[k * count + j]; }
  double& coord(std::size_t j, std::size_t k) { return coords[k * count + j]; }
  std::vector<double> neuron(std::size_t j) const;
};

struct SolveResult {
  Ordering ordering;
  std::vector<std::size_t> winners;  // goal -> neuron index in the final epoch
  std::size_t epochs_run = 0;
  bool converged = false;
  double final_sigma = 0.0;  // gain after the last epoch's decay
};

std::size_t neuron_count(std::size_t goals, const SomParams& params);

/// Neurons on a small circle (radius 10% of the goal bounding-box diagonal)
/// around the goal centroid, spanned by the two principal directions of the
/// goal cloud. The seed picks the starting phase.
Ring init_ring(const std::vector<LiftedGoal>& lifted, const SomParams& params, std::uint64_t seed);

/// Nearest non-inhibited neuron; ties go to the smaller index.
std::size_t select_winner(const Ring& ring, std::span<const double> goal, const std::vector<char>& inhibited);

/// Moves neurons within the ring neighbourhood of `winner` toward `goal`
/// with Gaussian gain exp(-d^2 / sigma^2) scaled by mu.
void adapt(Ring& ring, std::size_t winner, std::span<const double> goal, const SomParams& params);

/// Trains a ring with winner inhibition; the tour is the goals sorted by the
/// ring index of their final-epoch winner. Purely Euclidean in R^m.
SolveResult solve(const std::vector<LiftedGoal>& lifted, const SomParams& params, std::uint64_t seed);

}  // namespace tba
