#include <random>

#include "fairsplit/backward.hpp"

namespace fairsplit {

namespace {

constexpr unsigned kRandomBits = 16;
constexpr std::size_t kSensitiveSamples = 6;
constexpr std::size_t kFlatSamples = 32;

Rational sample_in(const Interval& iv, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint64_t> dist(0, (1u << kRandomBits));
    Rational t = ratio(static_cast<unsigned long>(dist(rng)), 1ul << kRandomBits);
    return iv.lo + (iv.hi - iv.lo) * t;
}

std::vector<LinIneq> fix_vars(const std::set<LinIneq>& rows, const Point& fixed) {
    std::vector<LinIneq> out;
    for (const auto& r : rows) {
        LinExpr e = r.expr();
        for (const auto& [v, val] : fixed) e = substitute(e, v, LinExpr(val));
        LinIneq row(std::move(e), r.relation());
        if (row.is_tautology()) continue;  // fixed one-hot rows would pin the slack at 0
        out.push_back(std::move(row));
    }
    return out;
}

class WitnessSearch {
public:
    WitnessSearch(const NetworkModel& m, const InputSpec& spec, const WitnessOptions& options)
        : m_(m), spec_(spec), budget_(options.budget), rng_(options.seed) {
        for (std::size_t i = 0; i < spec.features().size(); ++i) {
            const Feature& f = spec.feature(i);
            if (f.sensitive) continue;
            for (unsigned k = 0; k < f.width(); ++k) {
                (f.kind == FeatureKind::continuous ? continuous_ : categorical_).push_back(make_var(0, f.first_node + k));
            }
        }
    }

    void run(BiasRegion& r) {
        r.bbox = r.region.bounding_box();
        Point fixed;
        for (VarId v : categorical_) fixed[v] = r.bbox.at(v).lo;
        auto reduced = fix_vars(r.region.constraints(), fixed);
        auto ip = interior_point(reduced);
        r.nonzero_volume = ip && ip->slack > 0;

        auto with_fixed = [&](Point p) {
            for (const auto& [v, val] : fixed) p[v] = val;
            for (VarId v : continuous_) p.try_emplace(v, r.bbox.at(v).lo);
            return p;
        };
        auto try_point = [&](const Point& p) {
            if (!r.witness && budget_ > 0) r.witness = probe(r, p);
        };

        if (ip) try_point(with_fixed(ip->point));
        std::vector<Point> vertices;
        for (VarId v : continuous_) {
            if (r.witness) break;
            for (bool up : {false, true}) {
                LpResult lp = up ? maximize(reduced, LinExpr::var(v)) : minimize(reduced, LinExpr::var(v));
                if (lp.status != LpStatus::optimal) continue;
                vertices.push_back(with_fixed(lp.point));
                try_point(vertices.back());
            }
        }
        if (!r.nonzero_volume) {
            // box sampling almost never lands on a flat region; mix its vertices instead
            for (std::size_t i = 0; i < kFlatSamples && !r.witness && budget_ > 0 && vertices.size() > 1; ++i) {
                std::uniform_int_distribution<std::size_t> pick(0, vertices.size() - 1);
                const Point& a = vertices[pick(rng_)];
                const Point& b = vertices[pick(rng_)];
                Rational t = sample_in(Interval{0, 1}, rng_);
                Point p = fixed;
                for (VarId v : continuous_) p[v] = a.at(v) + (b.at(v) - a.at(v)) * t;
                try_point(p);
            }
            return;
        }
        while (!r.witness && budget_ > 0 && attempts_ < budget_) {
            ++attempts_;
            Point p = fixed;
            for (VarId v : continuous_) p[v] = sample_in(r.bbox.at(v), rng_);
            if (r.region.contains(p)) try_point(p);
        }
    }

private:
    // Classes reached at the non-sensitive point `base` inside `full`, and
    // the matching concrete inputs.
    std::vector<std::pair<std::size_t, std::vector<Rational>>> classes_at(const Polyhedron& full,
                                                                          const std::optional<std::size_t>& choice,
                                                                          const Point& base) {
        std::vector<std::pair<std::size_t, std::vector<Rational>>> out;
        Box sens_box;
        if (choice) {
            sens_box = spec_.choice_box(spec_.choices()[*choice]);
        } else {
            for (const auto& [v, iv] : input_box(spec_, full_partition(spec_))) {
                if (spec_.is_sensitive_node(var_index(v))) sens_box[v] = iv;
            }
        }
        std::vector<Point> candidates;
        auto rows = fix_vars(full.constraints(), base);
        if (auto ip = interior_point(rows)) candidates.push_back(ip->point);
        Point mid;
        for (const auto& [v, iv] : sens_box) mid[v] = (iv.lo + iv.hi) / 2;
        candidates.push_back(mid);
        for (std::size_t s = 0; s < kSensitiveSamples; ++s) {
            Point p;
            for (const auto& [v, iv] : sens_box) p[v] = sample_in(iv, rng_);
            candidates.push_back(std::move(p));
        }
        for (const Point& sens : candidates) {
            if (budget_ == 0) break;
            std::vector<Rational> x(m_.input_size());
            bool ok = true;
            for (unsigned k = 0; k < x.size(); ++k) {
                VarId v = make_var(0, k);
                const Point& src = spec_.is_sensitive_node(k) ? sens : base;
                auto it = src.find(v);
                if (it == src.end()) {
                    if (!spec_.is_sensitive_node(k)) {
                        ok = false;
                        break;
                    }
                    x[k] = sens_box.at(v).lo;
                } else {
                    x[k] = it->second;
                }
            }
            if (!ok) continue;
            --budget_;
            out.emplace_back(eval_concrete(m_, x), std::move(x));
        }
        return out;
    }

    std::optional<WitnessPair> probe(const BiasRegion& r, const Point& base) {
        auto first = classes_at(r.first_full, r.choices.first, base);
        auto second = classes_at(r.second_full, r.choices.second, base);
        for (const auto& [c1, x1] : first) {
            for (const auto& [c2, x2] : second) {
                if (c1 != c2) return WitnessPair{x1, x2, c1, c2};
            }
        }
        return std::nullopt;
    }

    const NetworkModel& m_;
    const InputSpec& spec_;
    std::size_t budget_;
    std::size_t attempts_ = 0;
    std::mt19937_64 rng_;
    std::vector<VarId> continuous_;
    std::vector<VarId> categorical_;
};

}  // namespace

void search_witness(const NetworkModel& m, const InputSpec& spec, BiasRegion& region, const WitnessOptions& options) {
    WitnessSearch(m, spec, options).run(region);
}

}  // namespace fairsplit
