#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "fairsplit/forward.hpp"
#include "fairsplit/model.hpp"
#include "fairsplit/partition.hpp"
#include "fairsplit/polyhedra.hpp"
#include "fairsplit/preanalysis.hpp"

namespace fairsplit {

struct BackwardStats {
    std::size_t peak_disjuncts = 0;  // largest non-pruned disjunct count seen
    std::size_t pruned = 0;
};

/// Union of polyhedra over the inputs whose execution, restricted to the
/// activation statuses allowed by `pattern`, can end with class `cls`
/// maximal. When `hull` is given, disjuncts that miss it are dropped.
PolySet backward(const NetworkModel& m, std::size_t cls, const ActivationPattern& pattern,
                 BackwardStats* stats = nullptr, const Box* hull = nullptr);

/// Region of one class under one sensitive choice, projected on the
/// non-sensitive inputs. `choice` is empty when choices are not tracked.
struct LabeledRegion {
    std::size_t cls = 0;
    std::optional<std::size_t> choice;
    Polyhedron projected;
    Polyhedron full;  // before projection; used for witness search
};

struct WitnessPair {
    std::vector<Rational> first;
    std::vector<Rational> second;
    std::size_t first_class = 0;
    std::size_t second_class = 0;
};

struct BiasRegion {
    Polyhedron region;  // over the non-sensitive inputs
    std::pair<std::size_t, std::size_t> classes;
    std::pair<std::optional<std::size_t>, std::optional<std::size_t>> choices;
    // populated by analyze_pattern_group
    Box bbox;
    std::vector<std::pair<std::size_t, unsigned>> categorical;  // fixed (feature, value)
    bool nonzero_volume = false;
    std::optional<WitnessPair> witness;
    // sources for witness search
    Polyhedron first_full;
    Polyhedron second_full;

    // Without a concrete witness the overlap only comes from tied outputs
    // (possibly on a full-dimensional set) and does not make a partition biased.
    bool potential_only() const { return !witness; }
};

// Non-empty intersections between regions of different classes whose
// choices differ (when both carry a choice).
std::vector<BiasRegion> check(const std::vector<LabeledRegion>& regions);
std::vector<BiasRegion> check(const std::map<std::size_t, PolySet>& by_class);

struct PartitionVerdict {
    Partition partition;
    ActivationPattern pattern;
    ActivationPattern group_key;
    std::optional<std::size_t> forward_class;  // set when completed by the forward pass
    bool biased = false;
    std::vector<BiasRegion> regions;
};

struct GroupStats {
    BackwardStats backward;
    std::size_t backward_runs = 0;
};

struct WitnessOptions {
    std::size_t budget = 10000;  // oracle evaluations per region
    std::uint64_t seed = 0x5eed;
};

std::vector<PartitionVerdict> analyze_pattern_group(const NetworkModel& m, const InputSpec& spec,
                                                    const ActivationPattern& key,
                                                    const std::vector<FeasiblePartition>& parts,
                                                    const WitnessOptions& options = {},
                                                    GroupStats* stats = nullptr);

// Samples concrete input pairs that differ only on sensitive features and
// receive different classes; fills region.witness and region.nonzero_volume.
void search_witness(const NetworkModel& m, const InputSpec& spec, BiasRegion& region,
                    const WitnessOptions& options);

}  // namespace fairsplit
