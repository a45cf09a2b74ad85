#include "doctest.h"
#include "forge/simplex_core.hpp"
#include "forge/zoo.hpp"
#include "support.hpp"

using namespace forge;
using forge::testing::frac;

namespace {

// Brute-force argmin by direct expected-loss comparison.
std::vector<std::size_t> naive_argmin(const DiscreteLoss& l, const Vec& p) {
    std::vector<Rational> values;
    for (std::size_t r = 0; r < l.num_reports(); ++r) {
        Rational v = 0;
        for (std::size_t y = 0; y < p.size(); ++y) v += p[y] * l.row(r)[y];
        values.push_back(v);
    }
    Rational best = *std::min_element(values.begin(), values.end());
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < values.size(); ++r)
        if (values[r] == best) out.push_back(r);
    return out;
}

DiscreteLoss random_loss(testing::Gen& gen, std::size_t n, std::size_t reports) {
    std::vector<std::string> names;
    std::vector<Vec> rows;
    for (std::size_t r = 0; r < reports; ++r) {
        names.push_back("r" + std::to_string(r));
        Vec row(n);
        for (auto& x : row) x = frac(gen.integer(0, 6), gen.integer(1, 3));
        rows.push_back(row);
    }
    return DiscreteLoss(multiclass_outcomes(n), names, rows);
}

std::size_t binomial(std::size_t a, std::size_t b) {
    std::size_t r = 1;
    for (std::size_t i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
}

}  // namespace

TEST_CASE("outcome space and distribution validation") {
    CHECK_THROWS_AS(OutcomeSpace({"a"}), std::invalid_argument);
    CHECK_THROWS_AS(OutcomeSpace({"a", "a"}), std::invalid_argument);
    OutcomeSpace o({"a", "b", "c"});
    CHECK(o.index_of("c") == 2);
    CHECK_THROWS_AS(o.index_of("z"), std::invalid_argument);
    CHECK_THROWS_AS(validate_distribution({frac(1, 2), frac(1, 3)}, 2), std::invalid_argument);
    CHECK_THROWS_AS(validate_distribution({frac(3, 2), frac(-1, 2)}, 2), std::invalid_argument);
    CHECK_THROWS_AS(validate_distribution({Rational(1)}, 2), std::invalid_argument);
    CHECK_NOTHROW(validate_distribution(uniform_distribution(3), 3));
}

TEST_CASE("discrete loss construction errors") {
    auto o = binary_outcomes();
    CHECK_THROWS_AS(DiscreteLoss(o, {}, {}), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteLoss(o, {"a", "a"}, {{0, 1}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteLoss(o, {"a"}, {{0, -1}}), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteLoss(o, {"a"}, {{0, 1, 2}}), std::invalid_argument);
}

TEST_CASE("expected discrete loss examples") {
    auto l = zero_one(2);
    // p(-1) = 3/10, p(+1) = 7/10 in outcome order (+1, -1).
    CHECK(expected_discrete_loss(l, "+1", {frac(7, 10), frac(3, 10)}) == frac(3, 10));
    for (std::size_t y = 0; y < 2; ++y)
        for (std::size_t r = 0; r < 2; ++r) CHECK(expected_discrete_loss(l, r, point_mass(2, y)) == l.row(r)[y]);
    auto a = abstain_loss(3, frac(1, 2));
    CHECK(expected_discrete_loss(a, "abstain", {frac(1, 5), frac(3, 10), frac(1, 2)}) == frac(1, 2));
    CHECK_THROWS_AS(expected_discrete_loss(l, "zero", uniform_distribution(2)), std::invalid_argument);
}

TEST_CASE("discrete Bayes risk examples") {
    auto half = discrete_bayes_risk(zero_one(2), uniform_distribution(2));
    CHECK(half.value == frac(1, 2));
    CHECK(half.argmin == std::vector<std::size_t>{0, 1});

    auto l3 = zero_one(3);
    auto r3 = discrete_bayes_risk(l3, {frac(1, 2), frac(3, 10), frac(1, 5)});
    CHECK(r3.value == frac(1, 2));
    CHECK(r3.argmin == std::vector<std::size_t>{l3.report_index("y1")});

    auto a = abstain_loss(3, frac(1, 2));
    auto ra = discrete_bayes_risk(a, uniform_distribution(3));
    CHECK(ra.value == frac(1, 2));
    REQUIRE(ra.argmin.size() == 1);
    CHECK(a.report(ra.argmin[0]) == "abstain");
}

TEST_CASE("level sets") {
    auto l = zero_one(2);
    auto plus = level_set_polyhedron(l, "+1");
    CHECK(plus.contains({frac(1, 2), frac(1, 2)}));
    CHECK(plus.contains({Rational(1), Rational(0)}));
    CHECK_FALSE(plus.contains({frac(49, 100), frac(51, 100)}));

    DiscreteLoss single(binary_outcomes(), {"c"}, {{2, 2}});
    auto all = level_set_polyhedron(single, "c");
    for (const auto& p : simplex_grid(2, 7)) CHECK(all.contains(p));

    auto a = abstain_loss(3, frac(1, 2));
    auto cell = level_set_polyhedron(a, "abstain");
    for (const auto& p : simplex_grid(3, 12)) {
        bool expected = *std::max_element(p.begin(), p.end()) <= frac(1, 2);
        CHECK(cell.contains(p) == expected);
    }
    CHECK_THROWS_AS(level_set_polyhedron(a, "nope"), std::invalid_argument);
}

TEST_CASE("non-redundancy") {
    auto ok = check_non_redundant(zero_one(2));
    CHECK(ok.ok());
    REQUIRE(ok.witnesses.size() == 2);
    CHECK(ok.witnesses.at("+1")[0] > frac(1, 2));
    CHECK(ok.witnesses.at("-1")[1] > frac(1, 2));

    DiscreteLoss twins(binary_outcomes(), {"a", "b", "c"}, {{0, 1}, {0, 1}, {1, 0}});
    auto bad = check_non_redundant(twins);
    CHECK_FALSE(bad.ok());
    CHECK(bad.failures == std::vector<std::string>{"a", "b"});

    auto a = abstain_loss(3, frac(1, 2));
    auto res = check_non_redundant(a);
    CHECK(res.ok());
    auto at_uniform = discrete_bayes_risk(a, uniform_distribution(3));
    CHECK(a.report(at_uniform.argmin.at(0)) == "abstain");

    // Dominated report: never optimal.
    DiscreteLoss dom(binary_outcomes(), {"a", "b", "c"}, {{0, 2}, {2, 0}, {2, 2}});
    auto d = check_non_redundant(dom);
    CHECK(d.failures == std::vector<std::string>{"c"});
}

TEST_CASE("simplex grid") {
    auto g = simplex_grid(2, 2);
    REQUIRE(g.size() == 3);
    CHECK(g[0] == Vec{0, 1});
    CHECK(g[1] == Vec{frac(1, 2), frac(1, 2)});
    CHECK(g[2] == Vec{1, 0});
    auto v = simplex_grid(3, 1);
    CHECK(v.size() == 3);
    for (const auto& p : v) CHECK(std::count(p.begin(), p.end(), Rational(1)) == 1);
    CHECK(simplex_grid(3, 4).size() == 15);
    for (std::size_t n = 2; n <= 4; ++n)
        for (std::size_t m = 1; m <= 6; ++m) {
            auto grid = simplex_grid(n, m);
            CHECK(grid.size() == binomial(m + n - 1, n - 1));
            for (const auto& p : grid) CHECK_NOTHROW(validate_distribution(p, n));
        }
    CHECK_THROWS_AS(simplex_grid(3, 0), std::invalid_argument);
}

TEST_CASE("property: Bayes risk, argmin and level sets agree with brute force") {
    testing::Gen gen(11);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = static_cast<std::size_t>(gen.integer(2, 4));
        auto l = random_loss(gen, n, static_cast<std::size_t>(gen.integer(1, 5)));
        auto prop = finite_property(l);
        for (const auto& p : simplex_grid(n, 6)) {
            auto risk = discrete_bayes_risk(l, p);
            CHECK(risk.argmin == naive_argmin(l, p));
            bool covered = false;
            for (std::size_t r = 0; r < l.num_reports(); ++r) {
                Rational e = expected_discrete_loss(l, r, p);
                CHECK(risk.value <= e);
                bool in_argmin = std::binary_search(risk.argmin.begin(), risk.argmin.end(), r);
                CHECK((risk.value == e) == in_argmin);
                CHECK(prop.cells[r].contains(p) == in_argmin);
                covered = covered || prop.cells[r].contains(p);
            }
            CHECK(covered);
        }
    }
}

TEST_CASE("property: non-redundancy witnesses are unique minimizers") {
    testing::Gen gen(12);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = static_cast<std::size_t>(gen.integer(2, 4));
        auto l = random_loss(gen, n, static_cast<std::size_t>(gen.integer(1, 5)));
        auto res = check_non_redundant(l);
        CHECK(res.witnesses.size() + res.failures.size() == l.num_reports());
        for (const auto& [name, p] : res.witnesses) {
            auto argmin = naive_argmin(l, p);
            REQUIRE(argmin.size() == 1);
            CHECK(l.report(argmin[0]) == name);
        }
        // A failing report is never the unique grid minimizer.
        for (const auto& name : res.failures) {
            for (const auto& p : simplex_grid(n, 8)) {
                auto argmin = naive_argmin(l, p);
                CHECK_FALSE((argmin.size() == 1 && l.report(argmin[0]) == name));
            }
        }
    }
}
