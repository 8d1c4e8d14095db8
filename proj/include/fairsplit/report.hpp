#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fairsplit/analyzer.hpp"

namespace fairsplit {

/// Box in normalized feature coordinates: one [0,1]-scaled interval per
/// non-sensitive feature (categorical value v of arity k maps to [v/k, (v+1)/k]).
using UnitBox = std::vector<Interval>;

UnitBox unit_box(const InputSpec& spec, const Box& bbox);
// Volume of a union of boxes, overlaps counted once.
Rational union_volume(const std::vector<UnitBox>& boxes);
// Fraction of the declared input space covered by the bounding boxes of the
// confirmed bias regions.
Rational quantify_bias(const std::vector<BiasRegion>& regions, const InputSpec& spec);

struct ReportConfig {
    Domain domain = Domain::symbolic;
    Rational lower{0};
    std::size_t upper = 0;
    unsigned max_depth = 12;
};

struct AnalysisReport {
    bool biased = false;
    Rational covered_fraction{0};
    Rational fair_fraction{0};
    Rational bias_fraction{0};
    Rational bias_of_covered{0};
    Rational excluded_fraction{0};
    std::vector<const PartitionVerdict*> completed;
    std::vector<std::pair<const PartitionVerdict*, const BiasRegion*>> regions;
    std::vector<UnitBox> fused;
    const std::vector<ExcludedPartition>* excluded = nullptr;
    bool timed_out = false;
    ReportConfig config;
};

// The report borrows from `result`, which must outlive it.
AnalysisReport build_report(const AnalysisResult& result, const InputSpec& spec, const ReportConfig& config);
std::string emit_report(const AnalysisReport& r, const InputSpec& spec);

std::string partition_json(const InputSpec& spec, const Partition& p);
Partition parse_partition_json(std::string_view text, const InputSpec& spec);
// Partitions of a report's `excluded` array.
std::vector<Partition> parse_resume(std::string_view report, const InputSpec& spec);

class report_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fairsplit
