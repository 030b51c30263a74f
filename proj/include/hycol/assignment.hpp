#ifndef HYCOL_ASSIGNMENT_HPP
#define HYCOL_ASSIGNMENT_HPP

#include <cstdint>
#include <vector>

namespace hycol {

/// Partial assignment of integer values to vertices 0..n-1. Instantiated as
/// ProjectedConfig (bucket values in [1..s]) and Colouring (colours in [1..q]);
/// the tag keeps the two from mixing at compile time.
template <typename Tag>
class PartialAssignment {
public:
    PartialAssignment() = default;

    explicit PartialAssignment(int n) : value_(n, 0), in_domain_(n, 0) {}

    /// Assignment defined on every vertex, initialised to `fill`.
    static PartialAssignment full(int n, int fill = 0) {
        PartialAssignment a(n);
        a.in_domain_.assign(static_cast<std::size_t>(n), 1);
        a.value_.assign(static_cast<std::size_t>(n), fill);
        return a;
    }

    static PartialAssignment none(int n) { return PartialAssignment(n); }

    int size() const { return static_cast<int>(value_.size()); }

    bool has(int v) const { return in_domain_[static_cast<std::size_t>(v)] != 0; }

    int at(int v) const { return value_[static_cast<std::size_t>(v)]; }

    void set(int v, int val) {
        value_[static_cast<std::size_t>(v)] = val;
        in_domain_[static_cast<std::size_t>(v)] = 1;
    }

    void unset(int v) { in_domain_[static_cast<std::size_t>(v)] = 0; }

    int domain_size() const {
        int c = 0;
        for (auto b : in_domain_) c += b != 0;
        return c;
    }

    bool operator==(const PartialAssignment& o) const {
        if (in_domain_ != o.in_domain_) return false;
        for (std::size_t i = 0; i < value_.size(); ++i) {
            if (in_domain_[i] && value_[i] != o.value_[i]) return false;
        }
        return true;
    }
    bool operator!=(const PartialAssignment& o) const { return !(*this == o); }

    const std::vector<int>& values() const { return value_; }

private:
    std::vector<int> value_;
    std::vector<std::uint8_t> in_domain_;
};

using ProjectedConfig = PartialAssignment<struct BucketTag>;
using Colouring = PartialAssignment<struct ColourTag>;

} // namespace hycol

#endif // HYCOL_ASSIGNMENT_HPP
