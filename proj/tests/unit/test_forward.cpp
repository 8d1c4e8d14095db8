#include <doctest.h>

#include <random>

#include "fairsplit/forward.hpp"
#include "fairsplit/partition.hpp"
#include "oracle.hpp"

using namespace fairsplit;

namespace {

const VarId x0 = make_var(0, 0);
const Domain kDomains[] = {Domain::boxes, Domain::symbolic, Domain::deeppoly};

NetworkModel single_node() { return parse_model("inputs 1\nlayer 1 1 relu\n1\nbias -0.5\nlayer 2 1 identity\n1\n-1\nbias 0 0\n"); }

// a = ReLU(x), b = ReLU(1 - x), output a - b against 0
NetworkModel two_nodes() {
    return parse_model("inputs 1\nlayer 2 1 relu\n1\n-1\nbias 0 1\nlayer 2 2 identity\n1 -1\n0 0\nbias 0 0\n");
}

bool inside(const Interval& outer, const Interval& inner) { return outer.contains(inner); }

}  // namespace

TEST_CASE("domain names") {
    CHECK(parse_domain("boxes") == Domain::boxes);
    CHECK(to_string(Domain::deeppoly) == "deeppoly");
    CHECK_THROWS(parse_domain("octagons"));
}

TEST_CASE("inactive node pins to zero") {
    for (Domain d : kDomains) {
        ForwardResult r = forward(single_node(), d, {{x0, {0, ratio(1, 2)}}});
        CHECK(r.pattern[0] == Flag::inactive);
        CHECK(r.bounds.post[0][0] == Interval{0, 0});
    }
}

TEST_CASE("unknown node keeps the upper bound") {
    for (Domain d : kDomains) {
        ForwardResult r = forward(single_node(), d, {{x0, {0, 1}}});
        CHECK(r.pattern[0] == Flag::unknown);
        CHECK(r.bounds.post[0][0] == Interval{0, ratio(1, 2)});
    }
}

TEST_CASE("two nodes per half box") {
    NetworkModel m = two_nodes();
    ForwardResult box = forward(m, Domain::boxes, {{x0, {0, 1}}});
    CHECK(box.bounds.outputs()[0] == Interval{-1, 1});
    ForwardResult dp = forward(m, Domain::deeppoly, {{x0, {0, 1}}});
    CHECK(dp.bounds.outputs()[0] == Interval{-1, 1});

    // on x in [1/2, 1] both nodes are decided by every domain; the output is 2x - 1
    for (Domain d : kDomains) {
        ForwardResult r = forward(m, d, {{x0, {ratio(1, 2), 1}}});
        CHECK(r.pattern[0] == Flag::active);
        CHECK(r.pattern[1] == Flag::active);
        CHECK(r.bounds.outputs()[0] == Interval{0, 1});
    }
    // a + b is constantly 1 on active nodes; boxes lose that correlation
    NetworkModel sum =
        parse_model("inputs 1\nlayer 2 1 relu\n1\n-1\nbias 0 1\nlayer 2 2 identity\n1 1\n0 0\nbias 0 0\n");
    Box mid{{x0, {ratio(1, 4), ratio(3, 4)}}};
    CHECK(forward(sum, Domain::boxes, mid).bounds.outputs()[0] == Interval{ratio(1, 2), ratio(3, 2)});
    for (Domain d : {Domain::symbolic, Domain::deeppoly}) {
        CHECK(forward(sum, d, mid).bounds.outputs()[0] == Interval{1, 1});
    }
}

TEST_CASE("uniquely_classified") {
    NodeBounds b;
    b.post = {{{2, 3}, {0, 1}}};
    CHECK(uniquely_classified(b) == std::optional<std::size_t>(0));
    b.post = {{{0, 2}, {1, 3}}};
    CHECK_FALSE(uniquely_classified(b));
    b.post = {{{1, 2}, {2, 3}}};
    CHECK_FALSE(uniquely_classified(b));
    b.post = {{{1, 2}, {3, 4}, {0, 1}}};
    CHECK(uniquely_classified(b) == std::optional<std::size_t>(1));
}

TEST_CASE("pattern string round trip") {
    ActivationPattern p(4);
    p.set(0, Flag::active);
    p.set(2, Flag::inactive);
    CHECK(p.to_string() == "A?I?");
    CHECK(ActivationPattern::parse("A?I?") == p);
    CHECK(p.fixed_count() == 2);
    CHECK(p.unknown_count() == 2);
    ActivationPattern q(4);
    q.set(0, Flag::active);
    CHECK(q.flags_subset_of(p));
    CHECK_FALSE(p.flags_subset_of(q));
    CHECK_THROWS(ActivationPattern::parse("AX"));
}

TEST_CASE("forward bounds are sound on samples") {
    std::mt19937_64 rng(23);
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        auto inst = oracle::random_instance(seed);
        const NetworkModel& m = inst.model;
        Partition p = full_partition(inst.spec);
        Box box = input_box(inst.spec, p);
        // shrink continuous dims to a random sub box
        for (auto& [v, iv] : box) {
            if (iv.lo == iv.hi) continue;
            Point a = oracle::sample_point({{v, iv}}, rng), b = oracle::sample_point({{v, iv}}, rng);
            Rational lo = std::min(a[v], b[v]), hi = std::max(a[v], b[v]);
            iv = {lo, hi};
        }
        for (Domain d : kDomains) {
            ForwardResult r = forward(m, d, box);
            for (int s = 0; s < 1000; ++s) {
                Point pt = oracle::sample_point(box, rng);
                std::vector<Rational> cur = oracle::to_input(pt, m.input_size());
                for (std::size_t l = 0; l < m.layers().size(); ++l) {
                    const Layer& layer = m.layers()[l];
                    std::vector<Rational> next(layer.rows());
                    bool hidden = l + 1 < m.layers().size();
                    for (std::size_t j = 0; j < layer.rows(); ++j) {
                        Rational pre = layer.biases[j];
                        for (std::size_t c = 0; c < cur.size(); ++c) pre += layer.weights[j][c] * cur[c];
                        REQUIRE(r.bounds.pre[l][j].contains(pre));
                        next[j] = hidden && pre < 0 ? Rational(0) : pre;
                        REQUIRE(r.bounds.post[l][j].contains(next[j]));
                    }
                    cur = std::move(next);
                }
            }
        }
    }
}

TEST_CASE("relational domains refine boxes") {
    std::mt19937_64 rng(29);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto inst = oracle::random_instance(seed);
        Box box = input_box(inst.spec, full_partition(inst.spec));
        for (auto& [v, iv] : box) {
            if (iv.lo == iv.hi) continue;
            std::uniform_int_distribution<int> k(0, 8);
            int a = k(rng), b = k(rng);
            if (a > b) std::swap(a, b);
            if (a == b) b = a + 1;
            iv = {ratio(a, 9), ratio(b, 9)};
        }
        ForwardResult rb = forward(inst.model, Domain::boxes, box);
        for (Domain d : {Domain::symbolic, Domain::deeppoly}) {
            ForwardResult r = forward(inst.model, d, box);
            for (std::size_t l = 0; l < rb.bounds.pre.size(); ++l) {
                for (std::size_t j = 0; j < rb.bounds.pre[l].size(); ++j) {
                    CHECK(inside(rb.bounds.pre[l][j], r.bounds.pre[l][j]));
                    CHECK(inside(rb.bounds.post[l][j], r.bounds.post[l][j]));
                }
            }
            CHECK(rb.pattern.flags_subset_of(r.pattern));
            if (auto c = uniquely_classified(rb.bounds)) CHECK(uniquely_classified(r.bounds) == c);
        }
    }
}

TEST_CASE("patterns only grow under splitting") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto inst = oracle::random_instance(seed);
        SplitLimits limits{0, 12};
        Partition root = full_partition(inst.spec);
        for (Domain d : kDomains) {
            ActivationPattern parent = forward(inst.model, d, input_box(inst.spec, root)).pattern;
            for (const Partition& child : split(inst.spec, root, limits)) {
                ActivationPattern cp = forward(inst.model, d, input_box(inst.spec, child)).pattern;
                CHECK(parent.flags_subset_of(cp));
                for (const Partition& grandchild : split(inst.spec, child, limits)) {
                    CHECK(cp.flags_subset_of(forward(inst.model, d, input_box(inst.spec, grandchild)).pattern));
                }
            }
        }
    }
}
