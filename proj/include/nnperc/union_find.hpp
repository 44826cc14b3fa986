#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace nnperc {

// Disjoint sets with path compression and union by size.
class UnionFind {
  public:
    explicit UnionFind(size_t n) : parent_(n), size_(n, 1), count_(n) {
        std::iota(parent_.begin(), parent_.end(), uint32_t(0));
    }

    uint32_t find(uint32_t p) {
        uint32_t root = p;
        while (root != parent_[root]) root = parent_[root];
        while (p != root) {
            uint32_t next = parent_[p];
            parent_[p] = root;
            p = next;
        }
        return root;
    }

    void merge(uint32_t x, uint32_t y) {
        uint32_t i = find(x), j = find(y);
        if (i == j) return;
        if (size_[i] < size_[j]) std::swap(i, j);
        parent_[j] = i;
        size_[i] += size_[j];
        --count_;
    }

    bool connected(uint32_t x, uint32_t y) { return find(x) == find(y); }
    size_t count() const { return count_; }
    size_t size_of(uint32_t x) { return size_[find(x)]; }

  private:
    std::vector<uint32_t> parent_;
    std::vector<uint32_t> size_;
    size_t count_;
};

}  // namespace nnperc
