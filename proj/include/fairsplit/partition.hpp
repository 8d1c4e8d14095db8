#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairsplit/model.hpp"
#include "fairsplit/numeric.hpp"

namespace fairsplit {

struct FeatureDomain {
    Interval range{0, 1};            // continuous features
    std::optional<unsigned> value;   // categorical features; empty = unsplit

    friend bool operator==(const FeatureDomain&, const FeatureDomain&) = default;
};

/// Axis-aligned region of the input space, one domain per feature.
/// Sensitive features always span their full declared domain.
struct Partition {
    std::vector<FeatureDomain> features;
    unsigned cursor = 0;  // round-robin position among non-sensitive continuous features
    unsigned depth = 0;   // continuous halvings along this lineage

    friend bool operator==(const Partition&, const Partition&) = default;
};

class no_split_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

Partition full_partition(const InputSpec& spec);
Partition root_partition(const InputSpec& spec, const Query& query);

// Input-node box; unsplit one-hot groups relax to [0,1] per node.
Box input_box(const InputSpec& spec, const Partition& p);

// Fraction of the declared input space covered by p (sensitive dims count as
// fully covered, a fixed categorical contributes 1/arity).
Rational measure(const InputSpec& spec, const Partition& p);

// Lexicographic on lower bounds, then upper bounds, of the input box.
int compare(const InputSpec& spec, const Partition& a, const Partition& b);

struct SplitLimits {
    Rational min_width{0};  // L
    unsigned max_depth = 12;
};

bool can_split(const InputSpec& spec, const Partition& p, const SplitLimits& limits);

// Unsplit non-sensitive categoricals are enumerated first; otherwise the
// round-robin cursor picks the next non-sensitive continuous dimension whose
// halves stay at least L wide.
std::vector<Partition> split(const InputSpec& spec, const Partition& p, const SplitLimits& limits);

// Concrete boxes obtained by fixing every unsplit non-sensitive categorical.
struct Expansion {
    Box box;
    std::vector<std::pair<std::size_t, unsigned>> fixed;  // (feature, value)
};
std::vector<Expansion> expand_categoricals(const InputSpec& spec, const Partition& p);

std::string describe(const InputSpec& spec, const Partition& p);

}  // namespace fairsplit
