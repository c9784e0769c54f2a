#pragma once

#include <cstddef>
#include <vector>

namespace coact {

using StateIndex = std::size_t;
using ActionIndex = std::size_t;

struct Transition {
  StateIndex s = 0;
  ActionIndex a = 0;
  double r = 0.0;
  StateIndex s_next = 0;

  friend bool operator==(const Transition&, const Transition&) = default;
};

using Batch = std::vector<Transition>;

}  // namespace coact
