#ifndef HYCOL_PROJECTION_HPP
#define HYCOL_PROJECTION_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "hycol/errors.hpp"
#include "hycol/rng.hpp"

namespace hycol {

/// Balanced bucket map from colours [1..q] onto buckets [1..s], built as
/// consecutive intervals: the first (q mod s) buckets hold ceil(q/s) colours,
/// the rest floor(q/s). Default image size is s = ceil(sqrt(q)).
class ProjectionScheme {
public:
    static ProjectionScheme build(int q) {
        if (q < 1) throw InvalidQError("projection: q must be >= 1, got " + std::to_string(q));
        int s = 1;
        while (static_cast<long long>(s) * s < q) ++s;
        return with_image_size(q, s);
    }

    /// Experiment-mode constructor with an explicit image size.
    static ProjectionScheme with_image_size(int q, int s) {
        if (q < 1) throw InvalidQError("projection: q must be >= 1, got " + std::to_string(q));
        if (s < 1 || s > q) throw InvalidQError("projection: image size must lie in [1, q]");
        ProjectionScheme h;
        h.q_ = q;
        h.s_ = s;
        h.starts_.resize(static_cast<std::size_t>(s) + 1);
        const int lo = q / s;
        const int big = q % s; // number of buckets of size lo+1
        int next = 1;
        for (int j = 0; j < s; ++j) {
            h.starts_[static_cast<std::size_t>(j)] = next;
            next += lo + (j < big ? 1 : 0);
        }
        h.starts_[static_cast<std::size_t>(s)] = next; // == q + 1
        return h;
    }

    int colour_count() const { return q_; }
    int image_size() const { return s_; }

    /// Bucket containing `colour`; O(log q) boundary search.
    int evaluate(int colour) const {
        if (colour < 1 || colour > q_)
            throw ColourOutOfRangeError("projection: colour " + std::to_string(colour) +
                                        " outside [1, " + std::to_string(q_) + "]");
        auto it = std::upper_bound(starts_.begin(), starts_.end(), colour);
        return static_cast<int>(it - starts_.begin() - 1) + 1;
    }

    /// Uniform colour from the preimage of `bucket`.
    int invert_uniform(int bucket, Rng& rng) const {
        check_bucket(bucket);
        const int lo = bucket_begin(bucket);
        const int width = bucket_size(bucket);
        return lo + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(width)));
    }

    /// First colour of `bucket`.
    int bucket_begin(int bucket) const {
        check_bucket(bucket);
        return starts_[static_cast<std::size_t>(bucket - 1)];
    }

    int bucket_size(int bucket) const {
        check_bucket(bucket);
        return starts_[static_cast<std::size_t>(bucket)] - starts_[static_cast<std::size_t>(bucket - 1)];
    }

private:
    void check_bucket(int bucket) const {
        if (bucket < 1 || bucket > s_)
            throw BucketOutOfRangeError("projection: bucket " + std::to_string(bucket) +
                                        " outside [1, " + std::to_string(s_) + "]");
    }

    int q_ = 0;
    int s_ = 0;
    std::vector<int> starts_;
};

} // namespace hycol

#endif // HYCOL_PROJECTION_HPP
