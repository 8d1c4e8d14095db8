#pragma once

#include <optional>
#include <vector>

#include "fairsplit/backward.hpp"
#include "fairsplit/preanalysis.hpp"

namespace fairsplit {

struct AnalysisConfig {
    Domain domain = Domain::symbolic;
    BudgetConfig budget;
    unsigned workers = 1;
    std::optional<double> timeout_seconds;  // preanalysis only
    WitnessOptions witness;
};

struct AnalysisResult {
    std::vector<PartitionVerdict> verdicts;  // every completed partition, canonical order
    std::vector<ExcludedPartition> excluded;
    Rational y_measure{0};
    std::size_t forward_runs = 0;
    std::size_t group_count = 0;
    bool timed_out = false;
    GroupStats stats;

    bool biased() const;
};

// Budget defaults U to min(hidden nodes, 10).
AnalysisConfig default_config(const NetworkModel& m);

AnalysisResult analyze(const NetworkModel& m, const InputSpec& spec, std::vector<Partition> roots,
                       const AnalysisConfig& config);

}  // namespace fairsplit
