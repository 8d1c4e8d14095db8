#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "fairsplit/forward.hpp"
#include "fairsplit/model.hpp"
#include "fairsplit/partition.hpp"

namespace fairsplit {

struct BudgetConfig {
    Rational lower{0};      // L: minimum width of a continuous dimension
    std::size_t upper = 0;  // U: tolerated unknown ReLUs
    unsigned max_depth = 12;

    SplitLimits limits() const { return SplitLimits{lower, max_depth}; }
};

struct ForwardCompleted {
    Partition partition;
    ActivationPattern pattern;
    std::size_t cls;
};

struct FeasiblePartition {
    Partition partition;
    ActivationPattern pattern;  // the partition's own forward pattern
};

struct ExcludedPartition {
    ActivationPattern pattern;
    Partition partition;
};

/// Feasible partitions grouped by abstract activation pattern; a partition
/// joins the group of any key whose flags are a subset of its own.
class FeasibleMap {
public:
    struct Group {
        ActivationPattern key;
        std::vector<FeasiblePartition> members;
    };

    void insert(FeasiblePartition entry);
    const std::vector<Group>& groups() const { return groups_; }
    std::size_t partition_count() const;

private:
    std::vector<Group> groups_;
};

struct PreanalysisResult {
    std::vector<ForwardCompleted> completed;
    FeasibleMap feasible;
    std::vector<ExcludedPartition> excluded;
    std::size_t forward_runs = 0;
    bool timed_out = false;
};

using Clock = std::chrono::steady_clock;

PreanalysisResult run_preanalysis(const NetworkModel& m, const InputSpec& spec, std::vector<Partition> roots,
                                  Domain domain, const BudgetConfig& budget, unsigned workers = 1,
                                  std::optional<Clock::time_point> deadline = std::nullopt);

}  // namespace fairsplit
