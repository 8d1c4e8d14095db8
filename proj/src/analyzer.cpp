#include "fairsplit/analyzer.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace fairsplit {

bool AnalysisResult::biased() const {
    return std::any_of(verdicts.begin(), verdicts.end(), [](const PartitionVerdict& v) { return v.biased; });
}

AnalysisConfig default_config(const NetworkModel& m) {
    AnalysisConfig c;
    c.budget.upper = std::min<std::size_t>(m.hidden_node_count(), 10);
    return c;
}

AnalysisResult analyze(const NetworkModel& m, const InputSpec& spec, std::vector<Partition> roots,
                       const AnalysisConfig& config) {
    spec.check_against(m);
    if (config.workers == 0) throw std::invalid_argument("workers must be at least 1");

    AnalysisResult result;
    for (const Partition& r : roots) result.y_measure += measure(spec, r);

    std::optional<Clock::time_point> deadline;
    if (config.timeout_seconds) {
        deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(*config.timeout_seconds));
    }
    PreanalysisResult pre =
        run_preanalysis(m, spec, std::move(roots), config.domain, config.budget, config.workers, deadline);
    result.forward_runs = pre.forward_runs;
    result.timed_out = pre.timed_out;
    result.excluded = std::move(pre.excluded);

    for (ForwardCompleted& c : pre.completed) {
        PartitionVerdict v;
        v.partition = std::move(c.partition);
        v.group_key = c.pattern;
        v.pattern = std::move(c.pattern);
        v.forward_class = c.cls;
        result.verdicts.push_back(std::move(v));
    }

    const auto& groups = pre.feasible.groups();
    result.group_count = groups.size();
    std::vector<std::vector<PartitionVerdict>> slots(groups.size());
    std::vector<GroupStats> slot_stats(groups.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t g; (g = next++) < groups.size();) {
            try {
                slots[g] = analyze_pattern_group(m, spec, groups[g].key, groups[g].members, config.witness,
                                                 &slot_stats[g]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (config.workers <= 1 || groups.size() <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < std::min<std::size_t>(config.workers, groups.size()); ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (auto& v : slots[g]) result.verdicts.push_back(std::move(v));
        const GroupStats& s = slot_stats[g];
        result.stats.backward.peak_disjuncts =
            std::max(result.stats.backward.peak_disjuncts, s.backward.peak_disjuncts);
        result.stats.backward.pruned += s.backward.pruned;
        result.stats.backward_runs += s.backward_runs;
    }
    std::sort(result.verdicts.begin(), result.verdicts.end(), [&](const auto& a, const auto& b) {
        return compare(spec, a.partition, b.partition) < 0;
    });
    return result;
}

}  // namespace fairsplit
