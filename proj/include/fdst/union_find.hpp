#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace fdst {

/// Disjoint sets with union by size. Path halving only when rollback is off,
/// so the undo log stays valid for branch-and-bound searches.
class UnionFind {
public:
    explicit UnionFind(std::size_t n, bool rollback = false)
        : parent_(n), size_(n, 1), components_(n), rollback_(rollback) {
        std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            if (!rollback_) parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns false if a and b were already joined.
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        --components_;
        if (rollback_) history_.push_back(b);
        return true;
    }

    std::size_t components() const { return components_; }

    /// Number of successful unions recorded so far (rollback mode).
    std::size_t checkpoint() const { return history_.size(); }

    void rollback(std::size_t mark) {
        while (history_.size() > mark) {
            const std::uint32_t b = history_.back();
            history_.pop_back();
            const std::uint32_t a = parent_[b];
            size_[a] -= size_[b];
            parent_[b] = b;
            ++components_;
        }
    }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
    std::size_t components_;
    bool rollback_;
    std::vector<std::uint32_t> history_;
};

}  // namespace fdst
