#include "fairsplit/preanalysis.hpp"

#include <algorithm>
#include <thread>

#include "fairsplit/work_queue.hpp"

namespace fairsplit {

void FeasibleMap::insert(FeasiblePartition entry) {
    for (Group& g : groups_) {
        if (g.key.flags_subset_of(entry.pattern)) {
            g.members.push_back(std::move(entry));
            return;
        }
    }
    Group merged{entry.pattern, {}};
    std::vector<Group> kept;
    for (Group& g : groups_) {
        if (entry.pattern.flags_subset_of(g.key)) {
            for (auto& member : g.members) merged.members.push_back(std::move(member));
        } else {
            kept.push_back(std::move(g));
        }
    }
    merged.members.push_back(std::move(entry));
    kept.push_back(std::move(merged));
    groups_ = std::move(kept);
}

std::size_t FeasibleMap::partition_count() const {
    std::size_t n = 0;
    for (const Group& g : groups_) n += g.members.size();
    return n;
}

namespace {

struct Collected {
    std::vector<ForwardCompleted> completed;
    std::vector<FeasiblePartition> feasible;
    std::vector<ExcludedPartition> excluded;
    std::size_t forward_runs = 0;
    bool timed_out = false;

    void absorb(Collected&& o) {
        std::move(o.completed.begin(), o.completed.end(), std::back_inserter(completed));
        std::move(o.feasible.begin(), o.feasible.end(), std::back_inserter(feasible));
        std::move(o.excluded.begin(), o.excluded.end(), std::back_inserter(excluded));
        forward_runs += o.forward_runs;
        timed_out = timed_out || o.timed_out;
    }
};

void drain(const NetworkModel& m, const InputSpec& spec, Domain domain, const BudgetConfig& budget,
           const std::optional<Clock::time_point>& deadline, WorkQueue<Partition>& queue, Collected& out) {
    while (auto item = queue.pop()) {
        Partition p = std::move(*item);
        if (deadline && Clock::now() >= *deadline) {
            out.excluded.push_back({ActivationPattern(m.hidden_node_count()), std::move(p)});
            out.timed_out = true;
            queue.done();
            continue;
        }
        ForwardResult fr = forward(m, domain, input_box(spec, p));
        ++out.forward_runs;
        if (auto cls = uniquely_classified(fr.bounds)) {
            out.completed.push_back({std::move(p), std::move(fr.pattern), *cls});
        } else if (fr.pattern.unknown_count() <= budget.upper) {
            out.feasible.push_back({std::move(p), std::move(fr.pattern)});
        } else if (!can_split(spec, p, budget.limits())) {
            out.excluded.push_back({std::move(fr.pattern), std::move(p)});
        } else {
            for (Partition& child : split(spec, p, budget.limits())) queue.push(std::move(child));
        }
        queue.done();
    }
}

}  // namespace

PreanalysisResult run_preanalysis(const NetworkModel& m, const InputSpec& spec, std::vector<Partition> roots,
                                  Domain domain, const BudgetConfig& budget, unsigned workers,
                                  std::optional<Clock::time_point> deadline) {
    WorkQueue<Partition> queue;
    for (Partition& r : roots) queue.push(std::move(r));

    Collected all;
    if (workers <= 1) {
        drain(m, spec, domain, budget, deadline, queue, all);
    } else {
        std::vector<Collected> local(workers);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] { drain(m, spec, domain, budget, deadline, queue, local[w]); });
            }
        }
        for (auto& l : local) all.absorb(std::move(l));
    }

    auto by_partition = [&](const auto& a, const auto& b) { return compare(spec, a.partition, b.partition) < 0; };
    std::sort(all.completed.begin(), all.completed.end(), by_partition);
    std::sort(all.feasible.begin(), all.feasible.end(), by_partition);
    std::sort(all.excluded.begin(), all.excluded.end(), by_partition);

    PreanalysisResult result;
    result.completed = std::move(all.completed);
    result.excluded = std::move(all.excluded);
    result.forward_runs = all.forward_runs;
    result.timed_out = all.timed_out;
    for (auto& f : all.feasible) result.feasible.insert(std::move(f));
    return result;
}

}  // namespace fairsplit
