#include "fairsplit/partition.hpp"

namespace fairsplit {

namespace {

std::vector<std::size_t> splittable_continuous(const InputSpec& spec) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < spec.features().size(); ++i) {
        const Feature& f = spec.feature(i);
        if (!f.sensitive && f.kind == FeatureKind::continuous) out.push_back(i);
    }
    return out;
}

std::optional<std::size_t> unsplit_categorical(const InputSpec& spec, const Partition& p) {
    for (std::size_t i = 0; i < spec.features().size(); ++i) {
        const Feature& f = spec.feature(i);
        if (!f.sensitive && f.kind == FeatureKind::categorical && !p.features[i].value) return i;
    }
    return std::nullopt;
}

bool halvable(const Partition& p, std::size_t feature, const SplitLimits& limits) {
    if (p.depth >= limits.max_depth) return false;
    const Interval& r = p.features[feature].range;
    return r.width() / 2 >= limits.min_width && r.lo < r.hi;
}

}  // namespace

Partition full_partition(const InputSpec& spec) {
    Partition p;
    for (const Feature& f : spec.features()) {
        FeatureDomain d;
        if (f.kind == FeatureKind::continuous) d.range = f.range;
        p.features.push_back(d);
    }
    return p;
}

Partition root_partition(const InputSpec& spec, const Query& query) {
    Partition p = full_partition(spec);
    for (const Restriction& r : query.constraints) {
        if (r.range) p.features[r.feature].range = *r.range;
        if (r.value) p.features[r.feature].value = *r.value;
    }
    return p;
}

Box input_box(const InputSpec& spec, const Partition& p) {
    Box box;
    for (std::size_t i = 0; i < spec.features().size(); ++i) {
        const Feature& f = spec.feature(i);
        const FeatureDomain& d = p.features[i];
        if (f.kind == FeatureKind::continuous) {
            box[make_var(0, f.first_node)] = d.range;
            continue;
        }
        for (unsigned k = 0; k < f.arity; ++k) {
            Interval iv{0, 1};
            if (d.value) iv = *d.value == k ? Interval{1, 1} : Interval{0, 0};
            box[make_var(0, f.first_node + k)] = iv;
        }
    }
    return box;
}

Rational measure(const InputSpec& spec, const Partition& p) {
    Rational m = 1;
    for (std::size_t i = 0; i < spec.features().size(); ++i) {
        const Feature& f = spec.feature(i);
        if (f.sensitive) continue;
        if (f.kind == FeatureKind::continuous) {
            m *= p.features[i].range.width() / f.range.width();
        } else if (p.features[i].value) {
            m /= f.arity;
        }
    }
    return m;
}

int compare(const InputSpec& spec, const Partition& a, const Partition& b) {
    Box ba = input_box(spec, a);
    Box bb = input_box(spec, b);
    for (const auto& [v, iv] : ba) {
        if (int c = cmp(iv.lo, bb.at(v).lo); c != 0) return c < 0 ? -1 : 1;
    }
    for (const auto& [v, iv] : ba) {
        if (int c = cmp(iv.hi, bb.at(v).hi); c != 0) return c < 0 ? -1 : 1;
    }
    return 0;
}

bool can_split(const InputSpec& spec, const Partition& p, const SplitLimits& limits) {
    if (unsplit_categorical(spec, p)) return true;
    for (std::size_t f : splittable_continuous(spec)) {
        if (halvable(p, f, limits)) return true;
    }
    return false;
}

std::vector<Partition> split(const InputSpec& spec, const Partition& p, const SplitLimits& limits) {
    std::vector<Partition> children;
    if (auto cat = unsplit_categorical(spec, p)) {
        for (unsigned v = 0; v < spec.feature(*cat).arity; ++v) {
            Partition c = p;
            c.features[*cat].value = v;
            children.push_back(std::move(c));
        }
        return children;
    }
    auto dims = splittable_continuous(spec);
    for (std::size_t step = 0; step < dims.size(); ++step) {
        std::size_t pos = (p.cursor + step) % dims.size();
        std::size_t f = dims[pos];
        if (!halvable(p, f, limits)) continue;
        const Interval& r = p.features[f].range;
        Rational mid = (r.lo + r.hi) / 2;
        Partition left = p, right = p;
        left.features[f].range.hi = mid;
        right.features[f].range.lo = mid;
        for (Partition* c : {&left, &right}) {
            c->cursor = static_cast<unsigned>((pos + 1) % dims.size());
            c->depth = p.depth + 1;
        }
        children.push_back(std::move(left));
        children.push_back(std::move(right));
        return children;
    }
    throw no_split_error("partition " + describe(spec, p) + " has no splittable dimension");
}

std::vector<Expansion> expand_categoricals(const InputSpec& spec, const Partition& p) {
    std::vector<Expansion> out{{input_box(spec, p), {}}};
    for (std::size_t i = 0; i < spec.features().size(); ++i) {
        const Feature& f = spec.feature(i);
        if (f.sensitive || f.kind != FeatureKind::categorical || p.features[i].value) continue;
        std::vector<Expansion> next;
        for (const Expansion& e : out) {
            for (unsigned v = 0; v < f.arity; ++v) {
                Expansion x = e;
                for (unsigned k = 0; k < f.arity; ++k) {
                    Rational val = k == v ? 1 : 0;
                    x.box[make_var(0, f.first_node + k)] = Interval{val, val};
                }
                x.fixed.emplace_back(i, v);
                next.push_back(std::move(x));
            }
        }
        out = std::move(next);
    }
    return out;
}

std::string describe(const InputSpec& spec, const Partition& p) {
    std::string s;
    for (std::size_t i = 0; i < spec.features().size(); ++i) {
        const Feature& f = spec.feature(i);
        if (!s.empty()) s += " ";
        s += f.name + ":";
        if (f.kind == FeatureKind::continuous) {
            s += "[" + p.features[i].range.lo.get_str() + "," + p.features[i].range.hi.get_str() + "]";
        } else {
            s += p.features[i].value ? std::to_string(*p.features[i].value) : "*";
        }
    }
    return s;
}

}  // namespace fairsplit
