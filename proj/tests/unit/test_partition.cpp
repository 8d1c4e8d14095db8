#include <doctest.h>

#include "fairsplit/partition.hpp"
#include "oracle.hpp"

using namespace fairsplit;

namespace {

InputSpec two_dim() { return parse_spec("continuous amount 0 1\ncontinuous age 0 1 sensitive\nchoices 0:1/2,1/2:1\n"); }

Interval half(int a, int b) { return {ratio(a, 2), ratio(b, 2)}; }

}  // namespace

TEST_CASE("first split halves the non-sensitive dimension") {
    InputSpec s = two_dim();
    auto kids = split(s, full_partition(s), {});
    REQUIRE(kids.size() == 2);
    CHECK(kids[0].features[0].range == half(0, 1));
    CHECK(kids[1].features[0].range == half(1, 2));
    CHECK(kids[0].features[1].range == Interval{0, 1});
    CHECK(kids[1].features[1].range == Interval{0, 1});
    CHECK(kids[0].depth == 1);
}

TEST_CASE("categorical features split by enumeration") {
    InputSpec s = parse_spec("categorical work 4\ncontinuous amount 0 1\ncategorical g 2 sensitive\n");
    auto kids = split(s, full_partition(s), {});
    REQUIRE(kids.size() == 4);
    for (unsigned v = 0; v < 4; ++v) {
        CHECK(kids[v].features[0].value == v);
        CHECK(measure(s, kids[v]) == ratio(1, 4));
        Box b = input_box(s, kids[v]);
        for (unsigned k = 0; k < 4; ++k) CHECK(b.at(make_var(0, k)) == Interval{k == v ? 1 : 0, k == v ? 1 : 0});
    }
    // the continuous dimension is next
    auto grand = split(s, kids[2], {});
    REQUIRE(grand.size() == 2);
    CHECK(grand[0].features[1].range == half(0, 1));
}

TEST_CASE("round robin over continuous dimensions") {
    InputSpec s = parse_spec("continuous a 0 1\ncontinuous b 0 1\ncontinuous c 0 1 sensitive\nchoices 0:1/2,1/2:1\n");
    auto first = split(s, full_partition(s), {});
    CHECK(first[0].features[0].range == half(0, 1));
    auto second = split(s, first[0], {});
    CHECK(second[0].features[0].range == half(0, 1));
    CHECK(second[0].features[1].range == half(0, 1));
    auto third = split(s, second[1], {});
    CHECK(third[0].features[0].range == Interval{0, ratio(1, 4)});
}

TEST_CASE("width limit and depth limit") {
    InputSpec s = two_dim();
    Partition p = full_partition(s);
    p.features[0].range = {0, ratio(1, 4)};
    CHECK(can_split(s, p, {ratio(1, 8), 12}));
    CHECK_FALSE(can_split(s, p, {ratio(1, 4), 12}));
    CHECK_THROWS_AS(split(s, p, {ratio(1, 4), 12}), no_split_error);
    p.depth = 3;
    CHECK_FALSE(can_split(s, p, {0, 3}));
    // skipping an exhausted dimension moves on to the next one
    InputSpec s2 = parse_spec("continuous a 0 1\ncontinuous b 0 1\ncontinuous c 0 1 sensitive\nchoices 0:1/2,1/2:1\n");
    Partition q = full_partition(s2);
    q.features[0].range = {0, ratio(1, 4)};
    auto kids = split(s2, q, {ratio(1, 4), 12});
    CHECK(kids[0].features[1].range == half(0, 1));
    CHECK(kids[0].features[0].range == Interval{0, ratio(1, 4)});
}

TEST_CASE("measure") {
    InputSpec s = parse_spec("continuous amount 0 10\ncategorical purpose 3\ncontinuous age 0 1 sensitive\nchoices 0:1/2,1/2:1\n");
    Partition p = full_partition(s);
    CHECK(measure(s, p) == 1);
    p.features[0].range = {0, 5};
    p.features[1].value = 2;
    CHECK(measure(s, p) == ratio(1, 6));
}

TEST_CASE("split children tile the parent") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto inst = oracle::random_instance(seed);
        Partition root = full_partition(inst.spec);
        std::vector<Partition> level{root};
        for (int d = 0; d < 4; ++d) {
            std::vector<Partition> next;
            for (const Partition& p : level) {
                auto kids = split(inst.spec, p, {});
                Rational total = 0;
                for (const Partition& k : kids) total += measure(inst.spec, k);
                CHECK(total == measure(inst.spec, p));
                next.insert(next.end(), kids.begin(), kids.end());
            }
            level = std::move(next);
        }
        Rational all = 0;
        for (const Partition& p : level) all += measure(inst.spec, p);
        CHECK(all == 1);
    }
}

TEST_CASE("expand_categoricals") {
    InputSpec s = parse_spec("categorical p 3\ncategorical q 2\ncontinuous a 0 1\ncategorical g 2 sensitive\n");
    Partition p = full_partition(s);
    CHECK(expand_categoricals(s, p).size() == 6);
    p.features[0].value = 1;
    auto e = expand_categoricals(s, p);
    REQUIRE(e.size() == 2);
    CHECK(e[1].fixed == std::vector<std::pair<std::size_t, unsigned>>{{1, 1}});
    // sensitive one-hot nodes stay relaxed
    CHECK(e[0].box.at(make_var(0, 6)) == Interval{0, 1});
}

TEST_CASE("compare orders by lower then upper bounds") {
    InputSpec s = two_dim();
    auto kids = split(s, full_partition(s), {});
    CHECK(compare(s, kids[0], kids[1]) < 0);
    CHECK(compare(s, kids[1], kids[0]) > 0);
    CHECK(compare(s, kids[0], kids[0]) == 0);
    Partition wide = full_partition(s);
    CHECK(compare(s, kids[0], wide) < 0);
}
