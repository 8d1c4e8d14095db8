#include "fairsplit/report.hpp"

#include <algorithm>

#include <json.hpp>

namespace fairsplit {

using json = nlohmann::json;

namespace {

// Value of a one-hot group when the box pins it, else nullopt.
std::optional<unsigned> pinned_value(const Feature& f, const Box& bbox) {
    std::optional<unsigned> v;
    for (unsigned k = 0; k < f.arity; ++k) {
        auto it = bbox.find(make_var(0, f.first_node + k));
        if (it == bbox.end()) return std::nullopt;
        if (it->second.lo == 1 && it->second.hi == 1) {
            if (v) return std::nullopt;
            v = k;
        }
    }
    return v;
}

// Disjoint boxes covering the union, dims from `dim` on.
std::vector<UnitBox> fuse(const std::vector<const UnitBox*>& boxes, std::size_t dim, std::size_t dims) {
    if (dim == dims) return {UnitBox{}};
    std::vector<Rational> cuts;
    for (const UnitBox* b : boxes) {
        cuts.push_back((*b)[dim].lo);
        cuts.push_back((*b)[dim].hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<UnitBox> out;
    std::vector<UnitBox> open;  // cells of the previous slab, extended while unchanged
    Rational open_lo;
    auto flush = [&](const Rational& hi) {
        for (UnitBox& cell : open) {
            cell.insert(cell.begin(), Interval{open_lo, hi});
            out.push_back(std::move(cell));
        }
        open.clear();
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Rational& lo = cuts[i];
        const Rational& hi = cuts[i + 1];
        std::vector<const UnitBox*> covering;
        for (const UnitBox* b : boxes) {
            if ((*b)[dim].lo <= lo && hi <= (*b)[dim].hi) covering.push_back(b);
        }
        std::vector<UnitBox> cells = covering.empty() ? std::vector<UnitBox>{} : fuse(covering, dim + 1, dims);
        if (cells != open || open.empty()) {
            flush(lo);
            open = std::move(cells);
            open_lo = lo;
        }
    }
    if (!cuts.empty()) flush(cuts.back());
    return out;
}

Rational volume(const UnitBox& b) {
    Rational v = 1;
    for (const Interval& iv : b) v *= iv.width();
    return v;
}

std::vector<UnitBox> fuse_all(const std::vector<UnitBox>& boxes) {
    std::vector<const UnitBox*> ptrs;
    for (const UnitBox& b : boxes) {
        bool degenerate = std::any_of(b.begin(), b.end(), [](const Interval& iv) { return iv.lo >= iv.hi; });
        if (!degenerate) ptrs.push_back(&b);
    }
    if (ptrs.empty()) return {};
    return fuse(ptrs, 0, boxes.front().size());
}

json rat(const Rational& r) { return to_fraction_string(r); }

json partition_value(const InputSpec& spec, const Partition& p) {
    json features = json::object();
    for (std::size_t i = 0; i < spec.features().size(); ++i) {
        const Feature& f = spec.feature(i);
        const FeatureDomain& d = p.features[i];
        if (f.kind == FeatureKind::continuous) {
            features[f.name] = {{"range", {rat(d.range.lo), rat(d.range.hi)}}};
        } else {
            features[f.name] = {{"value", d.value ? json(*d.value) : json(nullptr)}};
        }
    }
    return {{"cursor", p.cursor}, {"depth", p.depth}, {"features", features}};
}

json box_value(const InputSpec& spec, const Box& bbox) {
    json out = json::object();
    for (const Feature& f : spec.features()) {
        if (f.sensitive) continue;
        if (f.kind == FeatureKind::continuous) {
            const Interval& iv = bbox.at(make_var(0, f.first_node));
            out[f.name] = {rat(iv.lo), rat(iv.hi)};
        } else {
            auto v = pinned_value(f, bbox);
            out[f.name] = v ? json(*v) : json(nullptr);
        }
    }
    return out;
}

json point_value(const std::vector<Rational>& x) {
    json out = json::array();
    for (const Rational& r : x) out.push_back(rat(r));
    return out;
}

Rational parse_rat(const json& j) {
    if (!j.is_string()) throw report_error("expected a rational string");
    return parse_rational(j.get<std::string>());
}

Partition partition_from(const json& j, const InputSpec& spec) {
    if (!j.is_object() || !j.contains("features")) throw report_error("partition entry lacks 'features'");
    const json& feats = j.at("features");
    Partition p = full_partition(spec);
    for (std::size_t i = 0; i < spec.features().size(); ++i) {
        const Feature& f = spec.feature(i);
        if (!feats.contains(f.name)) throw report_error("partition lacks feature '" + f.name + "'");
        const json& d = feats.at(f.name);
        if (f.kind == FeatureKind::continuous) {
            if (!d.contains("range") || !d.at("range").is_array() || d.at("range").size() != 2) {
                throw report_error("feature '" + f.name + "' needs a two-element range");
            }
            Interval iv{parse_rat(d.at("range")[0]), parse_rat(d.at("range")[1])};
            if (iv.lo > iv.hi || !f.range.contains(iv)) throw report_error("range of '" + f.name + "' is invalid");
            if (f.sensitive && iv != f.range) throw report_error("sensitive feature '" + f.name + "' is restricted");
            p.features[i].range = iv;
        } else {
            if (!d.contains("value")) throw report_error("feature '" + f.name + "' needs a value");
            const json& v = d.at("value");
            if (v.is_null()) continue;
            if (f.sensitive) throw report_error("sensitive feature '" + f.name + "' is restricted");
            if (!v.is_number_unsigned() || v.get<unsigned>() >= f.arity) {
                throw report_error("value of '" + f.name + "' is out of range");
            }
            p.features[i].value = v.get<unsigned>();
        }
    }
    if (j.contains("cursor")) p.cursor = j.at("cursor").get<unsigned>();
    if (j.contains("depth")) p.depth = j.at("depth").get<unsigned>();
    return p;
}

}  // namespace

UnitBox unit_box(const InputSpec& spec, const Box& bbox) {
    UnitBox out;
    for (const Feature& f : spec.features()) {
        if (f.sensitive) continue;
        if (f.kind == FeatureKind::continuous) {
            const Interval& iv = bbox.at(make_var(0, f.first_node));
            Rational w = f.range.width();
            out.push_back({(iv.lo - f.range.lo) / w, (iv.hi - f.range.lo) / w});
        } else if (auto v = pinned_value(f, bbox)) {
            out.push_back({ratio(*v, f.arity), ratio(*v + 1, f.arity)});
        } else {
            out.push_back({0, 1});
        }
    }
    return out;
}

Rational union_volume(const std::vector<UnitBox>& boxes) {
    Rational v = 0;
    for (const UnitBox& b : fuse_all(boxes)) v += volume(b);
    return v;
}

Rational quantify_bias(const std::vector<BiasRegion>& regions, const InputSpec& spec) {
    std::vector<UnitBox> boxes;
    for (const BiasRegion& r : regions) {
        if (!r.potential_only()) boxes.push_back(unit_box(spec, r.bbox));
    }
    return union_volume(boxes);
}

AnalysisReport build_report(const AnalysisResult& result, const InputSpec& spec, const ReportConfig& config) {
    AnalysisReport r;
    r.config = config;
    r.excluded = &result.excluded;
    r.timed_out = result.timed_out;
    r.biased = result.biased();

    Rational covered = 0;
    Rational fair = 0;
    Rational excluded = 0;
    std::vector<UnitBox> boxes;
    for (const PartitionVerdict& v : result.verdicts) {
        r.completed.push_back(&v);
        Rational mu = measure(spec, v.partition);
        covered += mu;
        if (!v.biased) fair += mu;
        for (const BiasRegion& b : v.regions) {
            r.regions.emplace_back(&v, &b);
            if (!b.potential_only()) boxes.push_back(unit_box(spec, b.bbox));
        }
    }
    for (const ExcludedPartition& e : result.excluded) excluded += measure(spec, e.partition);

    r.fused = fuse_all(boxes);
    for (const UnitBox& b : r.fused) r.bias_fraction += volume(b);
    if (result.y_measure > 0) {
        r.covered_fraction = covered / result.y_measure;
        r.fair_fraction = fair / result.y_measure;
        r.excluded_fraction = excluded / result.y_measure;
    }
    if (covered > 0) r.bias_of_covered = r.bias_fraction / covered;
    return r;
}

std::string emit_report(const AnalysisReport& r, const InputSpec& spec) {
    json out = json::object();
    out["verdict"] = r.biased ? "biased" : "fair";
    out["timed_out"] = r.timed_out;
    auto fraction = [&](const char* key, const Rational& value) {
        out[key] = rat(value);
        out[std::string(key) + "_decimal"] = to_decimal_string(value);
    };
    fraction("covered_fraction", r.covered_fraction);
    fraction("fair_fraction", r.fair_fraction);
    fraction("bias_fraction", r.bias_fraction);
    fraction("bias_fraction_of_covered", r.bias_of_covered);
    fraction("excluded_fraction", r.excluded_fraction);

    json completed = json::array();
    for (const PartitionVerdict* v : r.completed) {
        completed.push_back({{"partition", partition_value(spec, v->partition)},
                             {"pattern", v->pattern.to_string()},
                             {"group", v->group_key.to_string()},
                             {"stage", v->forward_class ? "forward" : "backward"},
                             {"class", v->forward_class ? json(*v->forward_class) : json(nullptr)},
                             {"verdict", v->biased ? "biased" : "fair"}});
    }
    out["completed"] = std::move(completed);

    json regions = json::array();
    for (const auto& [v, b] : r.regions) {
        auto label = [&](const std::optional<std::size_t>& c) {
            return c ? json(spec.choice_label(spec.choices()[*c])) : json(nullptr);
        };
        json witness = nullptr;
        if (b->witness) {
            witness = {{"first", point_value(b->witness->first)},
                       {"second", point_value(b->witness->second)},
                       {"classes", {b->witness->first_class, b->witness->second_class}}};
        }
        regions.push_back({{"partition", partition_value(spec, v->partition)},
                           {"bounding_box", box_value(spec, b->bbox)},
                           {"classes", {b->classes.first, b->classes.second}},
                           {"choices", {label(b->choices.first), label(b->choices.second)}},
                           {"nonzero_volume", b->nonzero_volume},
                           {"status", b->potential_only() ? "potential" : "biased"},
                           {"witness", witness}});
    }
    out["biased_regions"] = std::move(regions);

    json fused = json::array();
    std::vector<std::string> names;
    for (const Feature& f : spec.features()) {
        if (!f.sensitive) names.push_back(f.name);
    }
    for (const UnitBox& b : r.fused) {
        json box = json::object();
        for (std::size_t i = 0; i < b.size(); ++i) box[names[i]] = {rat(b[i].lo), rat(b[i].hi)};
        fused.push_back(std::move(box));
    }
    out["fused_bias_boxes"] = std::move(fused);

    json excluded = json::array();
    if (r.excluded) {
        for (const ExcludedPartition& e : *r.excluded) {
            excluded.push_back({{"partition", partition_value(spec, e.partition)}, {"pattern", e.pattern.to_string()}});
        }
    }
    out["excluded"] = std::move(excluded);

    out["config"] = {{"domain", std::string(to_string(r.config.domain))},
                     {"lower", rat(r.config.lower)},
                     {"upper", r.config.upper},
                     {"max_depth", r.config.max_depth}};
    return out.dump(2) + "\n";
}

std::string partition_json(const InputSpec& spec, const Partition& p) { return partition_value(spec, p).dump(); }

Partition parse_partition_json(std::string_view text, const InputSpec& spec) {
    try {
        return partition_from(json::parse(text), spec);
    } catch (const json::exception& e) {
        throw report_error(std::string("malformed partition: ") + e.what());
    }
}

std::vector<Partition> parse_resume(std::string_view report, const InputSpec& spec) {
    try {
        json j = json::parse(report);
        if (!j.is_object() || !j.contains("excluded") || !j.at("excluded").is_array()) {
            throw report_error("resume file has no 'excluded' array");
        }
        std::vector<Partition> out;
        for (const json& e : j.at("excluded")) {
            if (!e.is_object() || !e.contains("partition")) throw report_error("excluded entry lacks 'partition'");
            out.push_back(partition_from(e.at("partition"), spec));
        }
        return out;
    } catch (const json::exception& e) {
        throw report_error(std::string("malformed resume file: ") + e.what());
    }
}

}  // namespace fairsplit
