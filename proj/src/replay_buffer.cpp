#include "coact/replay_buffer.hpp"

namespace coact {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : storage_(capacity) {
  if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
}

void ReplayBuffer::push(const Transition& t) {
  if (size_ < storage_.size()) {
    storage_[(head_ + size_) % storage_.size()] = t;
    ++size_;
  } else {
    storage_[head_] = t;
    head_ = (head_ + 1) % storage_.size();
  }
}

const Transition& ReplayBuffer::operator[](std::size_t i) const {
  if (i >= size_) throw std::out_of_range("ReplayBuffer: index out of range");
  return storage_[(head_ + i) % storage_.size()];
}

Batch ReplayBuffer::sample(std::size_t k, Rng& rng) const {
  if (size_ == 0) throw EmptyBufferError();
  Batch batch;
  batch.reserve(k);
  for (std::size_t i = 0; i < k; ++i) batch.push_back((*this)[uniform_index(rng, size_)]);
  return batch;
}

}  // namespace coact
