#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <vector>

namespace levels::detail {

// Read-only view over a vector of node ids that yields typed handles.
template <class T>
class IdRange {
 public:
  class iterator {
   public:
    using iterator_category = std::random_access_iterator_tag;
    using value_type = T;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = T;

    iterator() = default;
    explicit iterator(const std::uint32_t* p) : p_(p) {}
    T operator*() const { return T::from_id(*p_); }
    T operator[](difference_type n) const { return T::from_id(p_[n]); }
    iterator& operator++() { ++p_; return *this; }
    iterator operator++(int) { auto t = *this; ++p_; return t; }
    iterator& operator--() { --p_; return *this; }
    iterator operator--(int) { auto t = *this; --p_; return t; }
    iterator& operator+=(difference_type n) { p_ += n; return *this; }
    iterator& operator-=(difference_type n) { p_ -= n; return *this; }
    friend iterator operator+(iterator it, difference_type n) { return it += n; }
    friend iterator operator+(difference_type n, iterator it) { return it += n; }
    friend iterator operator-(iterator it, difference_type n) { return it -= n; }
    friend difference_type operator-(iterator a, iterator b) { return a.p_ - b.p_; }
    friend bool operator==(iterator a, iterator b) { return a.p_ == b.p_; }
    friend auto operator<=>(iterator a, iterator b) { return a.p_ <=> b.p_; }

   private:
    const std::uint32_t* p_ = nullptr;
  };

  explicit IdRange(const std::vector<std::uint32_t>& v) : v_(&v) {}
  iterator begin() const { return iterator(v_->data()); }
  iterator end() const { return iterator(v_->data() + v_->size()); }
  std::size_t size() const { return v_->size(); }
  bool empty() const { return v_->empty(); }
  T operator[](std::size_t i) const { return T::from_id((*v_)[i]); }
  std::vector<T> to_vector() const { return std::vector<T>(begin(), end()); }

 private:
  const std::vector<std::uint32_t>* v_;
};

}  // namespace levels::detail
