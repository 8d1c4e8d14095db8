#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairsplit/model.hpp"
#include "fairsplit/numeric.hpp"

namespace fairsplit {

enum class Domain { boxes, symbolic, deeppoly };

std::string_view to_string(Domain d);
Domain parse_domain(std::string_view name);

enum class Flag : std::uint8_t { unknown, active, inactive };

/// Activation status of every hidden node in flat order (see
/// NetworkModel::hidden_offset); `unknown` entries are absent flags.
class ActivationPattern {
public:
    ActivationPattern() = default;
    explicit ActivationPattern(std::size_t hidden_nodes) : flags_(hidden_nodes, Flag::unknown) {}

    std::size_t size() const { return flags_.size(); }
    Flag operator[](std::size_t i) const { return flags_[i]; }
    void set(std::size_t i, Flag f) { flags_[i] = f; }
    const std::vector<Flag>& flags() const { return flags_; }

    // Number of fixed flags.
    std::size_t fixed_count() const;
    std::size_t unknown_count() const { return flags_.size() - fixed_count(); }
    // flags(*this) is a subset of flags(other), i.e. *this is at least as
    // abstract as other.
    bool flags_subset_of(const ActivationPattern& other) const;

    // One character per hidden node: 'A' active, 'I' inactive, '?' unknown.
    std::string to_string() const;
    static ActivationPattern parse(std::string_view s);

    friend auto operator<=>(const ActivationPattern&, const ActivationPattern&) = default;

private:
    std::vector<Flag> flags_;
};

/// Bounds per network layer (index 0 is layer 1). For hidden layers `pre`
/// holds pre-activation bounds and `post` the ReLU outputs; for the output
/// layer both coincide.
struct NodeBounds {
    std::vector<std::vector<Interval>> pre;
    std::vector<std::vector<Interval>> post;

    const std::vector<Interval>& outputs() const { return post.back(); }
};

struct ForwardResult {
    NodeBounds bounds;
    ActivationPattern pattern;
};

/// Relational bounds of one ReLU output in terms of its own pre-activation.
struct DeepPolyNode {
    LinExpr lower_rel;
    LinExpr upper_rel;
    Rational lo;
    Rational hi;
};

ForwardResult forward(const NetworkModel& m, Domain domain, const Box& inputs);

// Some(j) iff the lower bound of output j exceeds every other upper bound.
std::optional<std::size_t> uniquely_classified(const NodeBounds& b);

}  // namespace fairsplit
