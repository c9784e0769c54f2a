#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "coact/random.hpp"
#include "coact/transition.hpp"

namespace coact {

class EmptyBufferError : public std::runtime_error {
 public:
  EmptyBufferError() : std::runtime_error("replay buffer is empty") {}
};

/// Bounded FIFO of transitions with uniform sampling (with replacement).
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(const Transition& t);
  /// k indices drawn uniformly with replacement.
  Batch sample(std::size_t k, Rng& rng) const;

  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return storage_.size(); }
  bool empty() const noexcept { return size_ == 0; }
  /// 0 is the oldest stored transition.
  const Transition& operator[](std::size_t i) const;

 private:
  std::vector<Transition> storage_;
  std::size_t head_ = 0;  // slot of the oldest element
  std::size_t size_ = 0;
};

}  // namespace coact
