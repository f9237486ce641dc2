#pragma once

#include <cstddef>

namespace parafusion {

/// Size caps shared by every operation. Exceeding one raises CapExceeded.
struct Limits {
  std::size_t enumeration = 1'000'000;  // elements of a permutation group
  std::size_t lattice = 10'000;         // group order for full subgroup lattices
  std::size_t isomorphism = 10'000;     // group order for isomorphism search
  std::size_t chambers = 100'000;       // chambers of a coset chamber system
  std::size_t fusion = 64;              // order of the p-group under a fusion system
  std::size_t injections = 200'000;     // |Inj(P, B)| for Rep chamber systems
  std::size_t alperin_states = 100'000; // BFS frontier for Alperin factorization
};

inline Limits const& default_limits() {
  static Limits const limits{};
  return limits;
}

}  // namespace parafusion
