#include "fairsplit/backward.hpp"

#include <algorithm>

namespace fairsplit {

PolySet backward(const NetworkModel& m, std::size_t cls, const ActivationPattern& pattern, BackwardStats* stats,
                 const Box* hull) {
    const auto out_layer = static_cast<unsigned>(m.layer_count());
    std::vector<Polyhedron> cur{assume_outcome(m, cls)};
    const Layer& out = m.layers().back();
    for (std::size_t j = out.rows(); j-- > 0;) {
        cur[0] = backward_assign(cur[0], make_var(out_layer, static_cast<unsigned>(j)), out.affine(j, out_layer - 1));
    }
    if (cur[0].is_empty()) cur.clear();

    auto note_peak = [&] {
        if (stats) stats->peak_disjuncts = std::max(stats->peak_disjuncts, cur.size());
    };
    note_peak();
    for (unsigned l = out_layer - 1; l >= 1; --l) {
        const Layer& layer = m.layers()[l - 1];
        for (std::size_t j = layer.rows(); j-- > 0;) {
            Flag flag = pattern[m.hidden_offset(l) + j];
            VarId post = make_var(l, static_cast<unsigned>(j));
            VarId pre = make_var(l, static_cast<unsigned>(j), true);
            LinExpr rhs = layer.affine(j, l - 1);
            std::vector<Polyhedron> next;
            for (const Polyhedron& d : cur) {
                PolySet branches = backward_relu(d, post, pre, flag);
                for (const Polyhedron& b : branches.disjuncts) {
                    Polyhedron q = backward_assign(b, pre, rhs);
                    if (q.is_empty()) {
                        if (stats) ++stats->pruned;
                        continue;
                    }
                    next.push_back(std::move(q));
                }
            }
            cur = std::move(next);
            note_peak();
        }
    }
    PolySet result;
    for (Polyhedron& d : cur) {
        if (hull) {
            Polyhedron q = meet(d, *hull);
            if (q.is_empty()) {
                if (stats) ++stats->pruned;
                continue;
            }
        }
        result.disjuncts.push_back(std::move(d));
    }
    return result;
}

std::vector<BiasRegion> check(const std::vector<LabeledRegion>& regions) {
    std::vector<BiasRegion> out;
    for (std::size_t a = 0; a < regions.size(); ++a) {
        for (std::size_t b = a + 1; b < regions.size(); ++b) {
            const LabeledRegion* lo = &regions[a];
            const LabeledRegion* hi = &regions[b];
            if (lo->cls == hi->cls) continue;
            if (lo->choice && hi->choice && *lo->choice == *hi->choice) continue;
            if (lo->cls > hi->cls) std::swap(lo, hi);
            Polyhedron both = meet(lo->projected, hi->projected);
            if (both.is_empty()) continue;
            BiasRegion r;
            r.region = std::move(both);
            r.classes = {lo->cls, hi->cls};
            r.choices = {lo->choice, hi->choice};
            r.first_full = lo->full;
            r.second_full = hi->full;
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<BiasRegion> check(const std::map<std::size_t, PolySet>& by_class) {
    std::vector<LabeledRegion> regions;
    for (const auto& [cls, set] : by_class) {
        for (const Polyhedron& p : set.disjuncts) regions.push_back({cls, std::nullopt, p, p});
    }
    return check(regions);
}

std::vector<PartitionVerdict> analyze_pattern_group(const NetworkModel& m, const InputSpec& spec,
                                                    const ActivationPattern& key,
                                                    const std::vector<FeasiblePartition>& parts,
                                                    const WitnessOptions& options, GroupStats* stats) {
    std::vector<PartitionVerdict> verdicts;
    if (parts.empty()) return verdicts;

    Box hull = input_box(spec, parts.front().partition);
    for (const auto& fp : parts) {
        for (const auto& [v, iv] : input_box(spec, fp.partition)) {
            Interval& h = hull[v];
            if (iv.lo < h.lo) h.lo = iv.lo;
            if (iv.hi > h.hi) h.hi = iv.hi;
        }
    }

    std::vector<PolySet> per_class;
    for (std::size_t j = 0; j < m.output_size(); ++j) {
        BackwardStats bs;
        per_class.push_back(backward(m, j, key, &bs, &hull));
        if (stats) {
            stats->backward.peak_disjuncts = std::max(stats->backward.peak_disjuncts, bs.peak_disjuncts);
            stats->backward.pruned += bs.pruned;
            ++stats->backward_runs;
        }
    }

    const std::vector<VarId> sensitive = spec.sensitive_vars();
    for (const auto& fp : parts) {
        PartitionVerdict verdict;
        verdict.partition = fp.partition;
        verdict.pattern = fp.pattern;
        verdict.group_key = key;
        for (const Expansion& e : expand_categoricals(spec, fp.partition)) {
            std::vector<LabeledRegion> labeled;
            for (std::size_t j = 0; j < per_class.size(); ++j) {
                for (const Polyhedron& d : per_class[j].disjuncts) {
                    Polyhedron q = meet(d, e.box);
                    if (q.is_empty()) continue;
                    for (std::size_t c = 0; c < spec.choices().size(); ++c) {
                        Polyhedron r = meet(q, spec.choice_box(spec.choices()[c]));
                        if (r.is_empty()) continue;
                        Polyhedron proj = project_out(r, sensitive);
                        labeled.push_back({j, c, std::move(proj), std::move(r)});
                    }
                }
            }
            for (BiasRegion& r : check(labeled)) {
                r.categorical = e.fixed;
                search_witness(m, spec, r, options);
                verdict.regions.push_back(std::move(r));
            }
        }
        verdict.biased = std::any_of(verdict.regions.begin(), verdict.regions.end(),
                                     [](const BiasRegion& r) { return !r.potential_only(); });
        verdicts.push_back(std::move(verdict));
    }
    return verdicts;
}

}  // namespace fairsplit
