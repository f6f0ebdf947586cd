#pragma once

#include <cstddef>
#include <vector>

namespace tba {

using Ordering = std::vector<std::size_t>;

/// True iff `ordering` is a permutation of 0..n-1.
bool is_permutation_of(const Ordering& ordering, std::size_t n);

/// Canonical representative of a cyclic tour: rotated so goal 0 comes first,
/// then reflected if needed so the second element is smaller than the last.
Ordering canonicalize_cycle(Ordering ordering);

}  // namespace tba
