#include "fairsplit/forward.hpp"

#include <algorithm>
#include <stdexcept>

namespace fairsplit {

std::string_view to_string(Domain d) {
    switch (d) {
        case Domain::boxes: return "boxes";
        case Domain::symbolic: return "symbolic";
        case Domain::deeppoly: return "deeppoly";
    }
    return "?";
}

Domain parse_domain(std::string_view name) {
    if (name == "boxes") return Domain::boxes;
    if (name == "symbolic") return Domain::symbolic;
    if (name == "deeppoly") return Domain::deeppoly;
    throw std::invalid_argument("unknown domain '" + std::string(name) + "'");
}

std::size_t ActivationPattern::fixed_count() const {
    return static_cast<std::size_t>(std::count_if(flags_.begin(), flags_.end(), [](Flag f) { return f != Flag::unknown; }));
}

bool ActivationPattern::flags_subset_of(const ActivationPattern& other) const {
    for (std::size_t i = 0; i < flags_.size(); ++i) {
        if (flags_[i] != Flag::unknown && other.flags_[i] != flags_[i]) return false;
    }
    return true;
}

std::string ActivationPattern::to_string() const {
    std::string s;
    for (Flag f : flags_) s += f == Flag::active ? 'A' : (f == Flag::inactive ? 'I' : '?');
    return s;
}

ActivationPattern ActivationPattern::parse(std::string_view s) {
    ActivationPattern p(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        switch (s[i]) {
            case 'A': p.flags_[i] = Flag::active; break;
            case 'I': p.flags_[i] = Flag::inactive; break;
            case '?': break;
            default: throw std::invalid_argument("bad activation pattern '" + std::string(s) + "'");
        }
    }
    return p;
}

namespace {

Flag classify(const Interval& pre) {
    if (pre.lo >= 0) return Flag::active;
    if (pre.hi <= 0) return Flag::inactive;
    return Flag::unknown;
}

Interval relu_bounds(const Interval& pre, Flag f) {
    switch (f) {
        case Flag::active: return pre;
        case Flag::inactive: return Interval{0, 0};
        case Flag::unknown: break;
    }
    return Interval{0, pre.hi};
}

ForwardResult run_boxes(const NetworkModel& m, const Box& inputs) {
    ForwardResult r{{}, ActivationPattern(m.hidden_node_count())};
    Box prev = inputs;
    for (unsigned li = 0; li < m.layer_count(); ++li) {
        const Layer& layer = m.layers()[li];
        unsigned net_layer = li + 1;
        std::vector<Interval> pre(layer.rows()), post(layer.rows());
        Box next;
        for (std::size_t j = 0; j < layer.rows(); ++j) {
            pre[j] = interval_of(layer.affine(j, li), prev);
            if (layer.activation == Activation::relu) {
                Flag f = classify(pre[j]);
                r.pattern.set(m.hidden_offset(net_layer) + j, f);
                post[j] = relu_bounds(pre[j], f);
            } else {
                post[j] = pre[j];
            }
            next[make_var(net_layer, static_cast<unsigned>(j))] = post[j];
        }
        r.bounds.pre.push_back(std::move(pre));
        r.bounds.post.push_back(std::move(post));
        prev = std::move(next);
    }
    return r;
}

// Affine form over the inputs plus an interval remainder collecting the
// contributions of nodes whose ReLU status is unknown.
struct SymbolicValue {
    LinExpr form;
    Interval extra{0, 0};
};

ForwardResult run_symbolic(const NetworkModel& m, const Box& inputs) {
    ForwardResult r{{}, ActivationPattern(m.hidden_node_count())};
    std::vector<SymbolicValue> prev(m.input_size());
    for (unsigned k = 0; k < m.input_size(); ++k) prev[k].form = LinExpr::var(make_var(0, k));
    for (unsigned li = 0; li < m.layer_count(); ++li) {
        const Layer& layer = m.layers()[li];
        unsigned net_layer = li + 1;
        std::vector<Interval> pre_b(layer.rows()), post_b(layer.rows());
        std::vector<SymbolicValue> next(layer.rows());
        for (std::size_t j = 0; j < layer.rows(); ++j) {
            SymbolicValue v;
            v.form = LinExpr(layer.biases[j]);
            for (std::size_t k = 0; k < prev.size(); ++k) {
                const Rational& w = layer.weights[j][k];
                if (w == 0) continue;
                v.form += prev[k].form * w;
                if (w > 0) {
                    v.extra.lo += w * prev[k].extra.lo;
                    v.extra.hi += w * prev[k].extra.hi;
                } else {
                    v.extra.lo += w * prev[k].extra.hi;
                    v.extra.hi += w * prev[k].extra.lo;
                }
            }
            Interval range = interval_of(v.form, inputs);
            pre_b[j] = Interval{range.lo + v.extra.lo, range.hi + v.extra.hi};
            if (layer.activation == Activation::relu) {
                Flag f = classify(pre_b[j]);
                r.pattern.set(m.hidden_offset(net_layer) + j, f);
                post_b[j] = relu_bounds(pre_b[j], f);
                if (f == Flag::inactive) {
                    v = SymbolicValue{};
                } else if (f == Flag::unknown) {
                    v = SymbolicValue{LinExpr(), post_b[j]};
                }
            } else {
                post_b[j] = pre_b[j];
            }
            next[j] = std::move(v);
        }
        r.bounds.pre.push_back(std::move(pre_b));
        r.bounds.post.push_back(std::move(post_b));
        prev = std::move(next);
    }
    return r;
}

class DeepPoly {
public:
    DeepPoly(const NetworkModel& m, const Box& inputs) : m_(m), inputs_(inputs) {}

    ForwardResult run() {
        ForwardResult r{{}, ActivationPattern(m_.hidden_node_count())};
        for (unsigned li = 0; li < m_.layer_count(); ++li) {
            const Layer& layer = m_.layers()[li];
            unsigned net_layer = li + 1;
            std::vector<Interval> pre_b(layer.rows()), post_b(layer.rows());
            std::vector<DeepPolyNode> nodes(layer.rows());
            for (std::size_t j = 0; j < layer.rows(); ++j) {
                LinExpr affine = layer.affine(j, li);
                pre_b[j] = Interval{bound(affine, li, false), bound(affine, li, true)};
                if (layer.activation != Activation::relu) {
                    post_b[j] = pre_b[j];
                    continue;
                }
                Flag f = classify(pre_b[j]);
                r.pattern.set(m_.hidden_offset(net_layer) + j, f);
                post_b[j] = relu_bounds(pre_b[j], f);
                VarId pre_var = make_var(net_layer, static_cast<unsigned>(j), true);
                DeepPolyNode& node = nodes[j];
                node.lo = post_b[j].lo;
                node.hi = post_b[j].hi;
                if (f == Flag::active) {
                    node.lower_rel = node.upper_rel = LinExpr::var(pre_var);
                } else if (f == Flag::unknown) {
                    // triangle relaxation: 0 <= y <= hi * (x - lo) / (hi - lo)
                    const Interval& p = pre_b[j];
                    Rational slope = p.hi / (p.hi - p.lo);
                    node.upper_rel = (LinExpr::var(pre_var) - LinExpr(p.lo)) * slope;
                }
            }
            relations_.push_back(std::move(nodes));
            r.bounds.pre.push_back(std::move(pre_b));
            r.bounds.post.push_back(std::move(post_b));
        }
        return r;
    }

private:
    // Concrete bound of `e`, an expression over the post variables of
    // network layer `layer`, by back-substitution down to the inputs.
    Rational bound(LinExpr e, unsigned layer, bool upper) const {
        for (unsigned l = layer; l >= 1; --l) {
            const Layer& lay = m_.layers()[l - 1];
            const auto& nodes = relations_[l - 1];
            LinExpr next(e.constant());
            for (const auto& [v, c] : e.coeffs()) {
                unsigned j = var_index(v);
                if (lay.activation == Activation::relu) {
                    const DeepPolyNode& n = nodes[j];
                    const LinExpr& rel = (c > 0) == upper ? n.upper_rel : n.lower_rel;
                    LinExpr in_prev = rel;
                    if (auto it = rel.coeffs().find(make_var(l, j, true)); it != rel.coeffs().end()) {
                        in_prev = substitute(rel, make_var(l, j, true), lay.affine(j, l - 1));
                    }
                    next += in_prev * c;
                } else {
                    next += lay.affine(j, l - 1) * c;
                }
            }
            e = std::move(next);
        }
        Interval iv = interval_of(e, inputs_);
        return upper ? iv.hi : iv.lo;
    }

    const NetworkModel& m_;
    const Box& inputs_;
    std::vector<std::vector<DeepPolyNode>> relations_;
};

}  // namespace

ForwardResult forward(const NetworkModel& m, Domain domain, const Box& inputs) {
    switch (domain) {
        case Domain::boxes: return run_boxes(m, inputs);
        case Domain::symbolic: return run_symbolic(m, inputs);
        case Domain::deeppoly: return DeepPoly(m, inputs).run();
    }
    throw std::logic_error("unreachable domain");
}

std::optional<std::size_t> uniquely_classified(const NodeBounds& b) {
    const auto& out = b.outputs();
    for (std::size_t j = 0; j < out.size(); ++j) {
        bool dominates = true;
        for (std::size_t i = 0; i < out.size() && dominates; ++i) {
            if (i != j && !(out[j].lo > out[i].hi)) dominates = false;
        }
        if (dominates) return j;
    }
    return std::nullopt;
}

}  // namespace fairsplit
