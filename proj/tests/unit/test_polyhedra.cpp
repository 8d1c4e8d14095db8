#include <doctest.h>

#include <random>

#include "fairsplit/backward.hpp"
#include "fairsplit/polyhedra.hpp"
#include "oracle.hpp"

using namespace fairsplit;

namespace {

const VarId x = make_var(0, 0);
const VarId y = make_var(0, 1);
const VarId z = make_var(0, 2);
const VarId n = make_var(1, 0);
const VarId npre = make_var(1, 0, true);
const VarId m1 = make_var(1, 1);

LinExpr V(VarId v, Rational c = 1) { return LinExpr::var(v, c); }
LinExpr K(Rational c) { return LinExpr(c); }

Polyhedron poly(std::initializer_list<LinIneq> rows) {
    Polyhedron p;
    for (const auto& r : rows) p.add(r);
    return p;
}

bool same_rows(const Polyhedron& p, std::initializer_list<LinIneq> rows) {
    std::set<LinIneq> want(rows);
    return p.constraints() == want;
}

}  // namespace

TEST_CASE("assume_outcome") {
    NetworkModel two = parse_model("inputs 1\nlayer 2 1 identity\n1\n-1\nbias 0 0\n");
    VarId o0 = make_var(1, 0), o1 = make_var(1, 1), o2 = make_var(1, 2);
    CHECK(same_rows(assume_outcome(two, 0), {LinIneq::ge(V(o0), V(o1))}));
    NetworkModel three = parse_model("inputs 1\nlayer 3 1 identity\n1\n-1\n0\nbias 0 0 0\n");
    CHECK(same_rows(assume_outcome(three, 2), {LinIneq::ge(V(o2), V(o0)), LinIneq::ge(V(o2), V(o1))}));
    Polyhedron tie = meet(assume_outcome(two, 0), assume_outcome(two, 1));
    CHECK_FALSE(tie.is_empty());
    CHECK(tie.contains({{o0, 3}, {o1, 3}}));
    CHECK_FALSE(tie.contains({{o0, 3}, {o1, 2}}));
}

TEST_CASE("backward_assign") {
    Polyhedron a = backward_assign(poly({LinIneq::le(V(n), K(1))}), n, V(x, 2) + K(1));
    CHECK(same_rows(a, {LinIneq(V(x))}));
    CHECK_FALSE(a.scope().count(n));

    Polyhedron b = backward_assign(poly({LinIneq::ge(V(n), V(m1))}), n, V(m1));
    CHECK(b.constraints().empty());

    LinExpr h = V(x, parse_rational("-0.31")) + V(y, parse_rational("0.99")) + K(parse_rational("-0.63"));
    Polyhedron c = backward_assign(poly({LinIneq::ge(V(n), K(ratio(1, 2)))}), n, h);
    REQUIRE(c.size() == 1);
    const LinIneq& row = *c.constraints().begin();
    // -31x + 99y >= 113, stored as 31x - 99y + 113 <= 0
    CHECK(row.expr().coeff(x) == 31);
    CHECK(row.expr().coeff(y) == -99);
    CHECK(row.expr().constant() == 113);
}

TEST_CASE("backward_relu") {
    PolySet act = backward_relu(poly({LinIneq::ge(V(n), K(1))}), n, npre, Flag::active);
    REQUIRE(act.size() == 1);
    CHECK(same_rows(remove_redundant(act.disjuncts[0]), {LinIneq::ge(V(npre), K(1))}));

    PolySet inact = backward_relu(poly({LinIneq::ge(V(n), K(1))}), n, npre, Flag::inactive);
    CHECK(inact.empty());

    PolySet both = backward_relu(poly({LinIneq::le(V(n), K(1))}), n, npre, Flag::unknown);
    REQUIRE(both.size() == 2);
    CHECK(same_rows(both.disjuncts[0], {LinIneq::le(V(npre), K(1)), LinIneq::ge(V(npre), K(0))}));
    CHECK(same_rows(both.disjuncts[1], {LinIneq::le(V(npre), K(0))}));
    for (int k = -8; k <= 8; ++k) {
        Point p{{npre, ratio(k, 4)}};
        bool in_union = both.disjuncts[0].contains(p) || both.disjuncts[1].contains(p);
        CHECK(in_union == (ratio(k, 4) <= 1));
    }
}

TEST_CASE("meet") {
    Polyhedron unit = meet(poly({LinIneq::le(V(x), K(1))}), poly({LinIneq::ge(V(x), K(0))}));
    CHECK(unit.size() == 2);
    Polyhedron bottom = poly({LinIneq::ge(K(0), K(1))});
    CHECK(meet(unit, bottom).is_empty());
    Polyhedron tri = meet(poly({LinIneq::le(V(x) + V(y), K(1))}), Box{{x, {0, 1}}, {y, {0, 1}}});
    CHECK(tri.contains({{x, ratio(1, 2)}, {y, ratio(1, 2)}}));
    CHECK_FALSE(tri.contains({{x, 1}, {y, ratio(1, 2)}}));
    CHECK_FALSE(tri.is_empty());
}

TEST_CASE("project_out") {
    Polyhedron tri = poly({LinIneq::le(V(x) + V(y), K(1)), LinIneq::ge(V(x), K(0)), LinIneq::ge(V(y), K(0))});
    VarId ys[] = {y};
    Polyhedron px = project_out(tri, ys);
    CHECK(same_rows(px, {LinIneq::ge(V(x), K(0)), LinIneq::le(V(x), K(1))}));
    CHECK_FALSE(px.scope().count(y));

    Polyhedron eq = poly({LinIneq::ge(V(y), V(x)), LinIneq::le(V(y), V(x))});
    CHECK(project_out(eq, ys).constraints().empty());
}

TEST_CASE("is_empty") {
    CHECK(poly({LinIneq::le(V(x), K(0)), LinIneq::ge(V(x), K(1))}).is_empty());
    CHECK_FALSE(poly({LinIneq::ge(V(x), K(0))}).is_empty());
    CHECK(poly({LinIneq::le(V(x) + V(y), K(1)), LinIneq::ge(V(x), K(ratio(3, 4))),
                LinIneq::ge(V(y), K(ratio(3, 4)))})
              .is_empty());
}

TEST_CASE("bounding_box") {
    Polyhedron tri = poly({LinIneq::le(V(x) + V(y), K(1)), LinIneq::ge(V(x), K(0)), LinIneq::ge(V(y), K(0))});
    Box b = tri.bounding_box();
    CHECK(b.at(x) == Interval{0, 1});
    CHECK(b.at(y) == Interval{0, 1});

    Polyhedron seg = poly({LinIneq::ge(V(y), V(x)), LinIneq::le(V(y), V(x)), LinIneq::ge(V(x), K(0)),
                           LinIneq::le(V(x), K(ratio(1, 2)))});
    Box s = seg.bounding_box();
    CHECK(s.at(x) == Interval{0, ratio(1, 2)});
    CHECK(s.at(y) == Interval{0, ratio(1, 2)});

    Polyhedron wedge = poly({LinIneq::le(V(x, 2) + V(y), K(2)), LinIneq::ge(V(x), K(0)), LinIneq::ge(V(y), K(0))});
    Box w = wedge.bounding_box();
    CHECK(w.at(x) == Interval{0, 1});
    CHECK(w.at(y) == Interval{0, 2});

    CHECK_THROWS_AS(poly({LinIneq::ge(V(x), K(0))}).bounding_box(), unbounded_error);
}

TEST_CASE("projection round trip on random polyhedra") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> k(-6, 6);
    VarId zs[] = {z};
    int nonempty = 0;
    for (int round = 0; round < 40; ++round) {
        Polyhedron p = Polyhedron::from_box({{x, {0, 1}}, {y, {0, 1}}, {z, {0, 1}}});
        // keep the centre feasible so most draws are non-empty
        std::uniform_int_distribution<int> slack(0, 6);
        for (int r = 0; r < 5; ++r) {
            Rational a = k(rng), b = k(rng), c = k(rng);
            p.add(LinIneq(V(x, a) + V(y, b) + V(z, c) - K((a + b + c) / 2 + ratio(slack(rng), 8))));
        }
        if (p.is_empty()) continue;
        ++nonempty;
        Polyhedron q = project_out(p, zs);
        for (int s = 0; s < 60; ++s) {
            std::uniform_int_distribution<int> g(0, 32);
            Rational px = ratio(g(rng), 32), py = ratio(g(rng), 32);
            Polyhedron fixed = meet(p, Box{{x, {px, px}}, {y, {py, py}}});
            CHECK(q.contains({{x, px}, {y, py}}) == !fixed.is_empty());
        }
        // projections of original points satisfy the shadow
        for (int s = 0; s < 20; ++s) {
            Point pt = oracle::sample_point({{x, {0, 1}}, {y, {0, 1}}, {z, {0, 1}}}, rng);
            if (p.contains(pt)) CHECK(q.contains({{x, pt[x]}, {y, pt[y]}}));
        }
    }
    CHECK(nonempty > 30);
}

TEST_CASE("witness of a non-empty meet lies in both") {
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<int> k(-5, 5);
    for (int round = 0; round < 60; ++round) {
        Polyhedron a = Polyhedron::from_box({{x, {0, 1}}, {y, {0, 1}}});
        Polyhedron b = a;
        for (int r = 0; r < 3; ++r) {
            a.add(LinIneq(V(x, k(rng)) + V(y, k(rng)) + K(ratio(k(rng), 3))));
            b.add(LinIneq(V(x, k(rng)) + V(y, k(rng)) + K(ratio(k(rng), 3))));
        }
        Polyhedron both = meet(a, b);
        if (both.is_empty()) continue;
        auto w = both.witness();
        REQUIRE(w);
        CHECK(a.contains(*w));
        CHECK(b.contains(*w));
    }
}

TEST_CASE("backward preimages match the oracle on grid points") {
    std::mt19937_64 rng(47);
    for (std::uint64_t seed = 100; seed < 112; ++seed) {
        auto inst = oracle::random_instance(seed);
        const NetworkModel& m = inst.model;
        ActivationPattern all(m.hidden_node_count());
        std::vector<PolySet> per_class;
        for (std::size_t j = 0; j < m.output_size(); ++j) per_class.push_back(backward(m, j, all));
        std::uniform_int_distribution<int> g(0, 32);
        for (int s = 0; s < 400; ++s) {
            Point pt;
            std::vector<Rational> xin(m.input_size());
            for (unsigned i = 0; i < m.input_size(); ++i) {
                xin[i] = ratio(g(rng), 32);
                pt[make_var(0, i)] = xin[i];
            }
            std::vector<Rational> scores = eval_scores(m, xin);
            for (std::size_t j = 0; j < m.output_size(); ++j) {
                bool maximal = std::all_of(scores.begin(), scores.end(), [&](const Rational& v) { return v <= scores[j]; });
                bool covered = std::any_of(per_class[j].disjuncts.begin(), per_class[j].disjuncts.end(),
                                           [&](const Polyhedron& d) { return d.contains(pt); });
                CHECK(covered == maximal);
            }
        }
    }
}
