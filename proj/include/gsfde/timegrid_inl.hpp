#pragma once

#include <algorithm>
#include <random>

namespace gsfde {

template <class Engine>
double JumpLaw::sample(Engine& engine) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (uniform_) {
    for (;;) {
      const double z = a_ + (b_ - a_) * unit(engine);
      if (z != 0.0) return z;
    }
  }
  const double u = unit(engine);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                         atoms_.size() - 1);
  return atoms_[idx].size;
}

}  // namespace gsfde
