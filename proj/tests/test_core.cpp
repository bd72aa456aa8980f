#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "pandora/errors.hpp"
#include "pandora/instance_io.hpp"

using namespace pandora;
using namespace pandora::testing;

TEST_CASE("distribution canonicalization and invariants") {
    const auto d = dist({{10, {1, 2}}, {0, {1, 4}}, {0, {1, 4}}});
    CHECK(d.size() == 2);  // duplicate atoms merged
    CHECK(d.value(0) == 0);
    CHECK(d.prob(0) == Rat(1, 2));
    CHECK(d.expectation() == 5);
    CHECK(d.max_value() == 10);

    CHECK_THROWS_AS(dist({{3, {1, 2}}}), StructuralError);             // sums to 1/2
    CHECK_THROWS_AS(DiscreteDistribution({{Rat(-1), Rat(1)}}), StructuralError);
    // zero-probability atoms are dropped, not kept
    const auto e = DiscreteDistribution({{Rat(2), Rat(1)}, {Rat(5), Rat(0)}});
    CHECK(e.size() == 1);
}

TEST_CASE("expectation_of_max: spec examples") {
    const auto two_point = dist({{10, {1, 2}}, {0, {1, 2}}});
    const auto six = dist({{6, {1, 1}}});

    std::vector<DiscreteDistribution> single{two_point};
    std::vector<Rat> one{Rat(1)};
    CHECK(expectation_of_max(single, one) == 5);

    CHECK(expectation_of_max(std::vector<DiscreteDistribution>{}, std::vector<Rat>{}) == 0);

    std::vector<DiscreteDistribution> pair{two_point, six};
    std::vector<Rat> ones{Rat(1), Rat(1)};
    CHECK(expectation_of_max(pair, ones) == 8);  // 1/2 * 10 + 1/2 * 6, enumerated by hand
    CHECK(expectation_of_max(pair, ones) == emax_bruteforce(pair, ones));

    CHECK_THROWS_AS(expectation_of_max(pair, one), StructuralError);
}

TEST_CASE("expectation_of_max agrees with brute force on random inputs") {
    Rng rng(20240617);
    for (int round = 0; round < 200; ++round) {
        const int k = static_cast<int>(rng.range(0, 3));
        std::vector<DiscreteDistribution> dists;
        std::vector<Rat> probs;
        for (int e = 0; e < k; ++e) {
            GeneratorParams params;
            params.support_min = 1;
            params.support_max = 3;
            std::vector<DiscreteDistribution::Atom> atoms;
            const int support = static_cast<int>(rng.range(1, 3));
            long total = 0;
            std::vector<long> w(support), v(support);
            for (int s = 0; s < support; ++s) {
                w[s] = rng.range(1, 5);
                total += w[s];
                v[s] = rng.range(0, 9) * (s + 1);  // may collide; constructor merges
            }
            for (int s = 0; s < support; ++s) atoms.push_back({Rat(v[s]), make_rat(w[s], total)});
            dists.emplace_back(std::move(atoms));
            probs.push_back(make_rat(rng.range(0, 4), 4));
        }
        CHECK(expectation_of_max(dists, probs) == emax_bruteforce(dists, probs));
    }
}

TEST_CASE("expectation_of_max monotone in inclusion probabilities") {
    Rng rng(7);
    for (int round = 0; round < 100; ++round) {
        std::vector<DiscreteDistribution> dists{dist({{0, {1, 2}}, {7, {1, 2}}}),
                                                dist({{2, {1, 3}}, {5, {2, 3}}})};
        std::vector<Rat> lo{make_rat(rng.range(0, 8), 8), make_rat(rng.range(0, 8), 8)};
        std::vector<Rat> hi = lo;
        const int bump = static_cast<int>(rng.below(2));
        hi[bump] = std::min(Rat(1), Rat(hi[bump] + make_rat(rng.range(1, 3), 8)));
        CHECK(expectation_of_max(dists, lo) <= expectation_of_max(dists, hi));
    }
}

TEST_CASE("capped: spec examples and expectation bound") {
    const auto d = dist({{10, {1, 2}}, {0, {1, 2}}});
    const auto c8 = capped(d, Rat(8));
    CHECK(c8.size() == 2);
    CHECK(c8.value(1) == 8);
    CHECK(c8.prob(1) == Rat(1, 2));

    const auto d3 = dist({{3, {1, 1}}});
    CHECK(capped(d3, Rat(5)) == d3);
    CHECK(capped(d3, Rat(0)) == DiscreteDistribution::point(Rat(0)));
    CHECK_THROWS_AS(capped(d3, Rat(-1)), StructuralError);

    Rng rng(99);
    for (int round = 0; round < 50; ++round) {
        const Rat cap = make_rat(rng.range(0, 12), 1 + static_cast<long>(rng.below(3)));
        const auto cd = capped(d, cap);
        CHECK(cd.expectation() <= d.expectation());
        CHECK(cd.expectation() <= cap);
    }
}

TEST_CASE("validate: horizon and discount rules") {
    Instance f1 = fixture_f1();
    CHECK(validate(f1).empty());

    Instance bad = f1;
    bad.horizon = 2;  // n + sum p = 3
    for (auto& b : bad.boxes) {
        b.cost.resize(2);
        b.rewards.resize(2);
    }
    const auto violations = validate(bad);
    REQUIRE(!violations.empty());
    CHECK(violations[0].find("horizon") != std::string::npos);

    Instance increasing = f1;
    increasing.boxes[0].discount = DiscountRule::table({Rat(1), Rat(1, 2), Rat(3, 4)});
    bool found = false;
    for (const auto& v : validate(increasing))
        if (v.find("non-increasing") != std::string::npos) found = true;
    CHECK(found);

    Instance not_identity = f1;
    not_identity.boxes[0].discount = DiscountRule::table({Rat(1, 2)});
    CHECK(!validate(not_identity).empty());

    Instance wrong_variant = f1;
    wrong_variant.variant = VariantTag::Instant;  // box 0 has p = 1
    CHECK(!validate(wrong_variant).empty());
}

TEST_CASE("discount rules: identity at 0, non-increasing, clamped table") {
    const auto commit = DiscountRule::commit();
    CHECK(commit.apply(Rat(7), 0) == 7);
    CHECK(commit.apply(Rat(7), 1) == 0);

    const auto mult = DiscountRule::multiplicative(Rat(1, 2));
    CHECK(mult.apply(Rat(8), 0) == 8);
    CHECK(mult.apply(Rat(8), 3) == 1);

    const auto table = DiscountRule::table({Rat(1), Rat(1, 2)});
    CHECK(table.apply(Rat(4), 0) == 4);
    CHECK(table.apply(Rat(4), 1) == 2);
    CHECK(table.apply(Rat(4), 9) == 2);  // clamps to the last entry
}

TEST_CASE("instance json round trip") {
    const Instance f1 = fixture_f1();
    const auto j = instance_to_json(f1);
    CHECK(j.at("format") == "pandora-time/1");
    const Instance back = instance_from_json(j);
    CHECK(back.horizon == f1.horizon);
    CHECK(back.variant == f1.variant);
    REQUIRE(back.n() == f1.n());
    for (int i = 0; i < f1.n(); ++i) {
        CHECK(back.boxes[i].processing_time == f1.boxes[i].processing_time);
        for (int t = 1; t <= f1.horizon; ++t) {
            CHECK(back.cost_at(i, t) == f1.cost_at(i, t));
            CHECK(back.reward_at(i, t) == f1.reward_at(i, t));
        }
    }
    // serialization is canonical: a second trip is byte-identical
    CHECK(instance_to_json(back).dump() == j.dump());

    CHECK_THROWS_AS(instance_from_json(nlohmann::json{{"horizon", 3}}), StructuralError);
}

TEST_CASE("rational parsing") {
    CHECK(rat_from_string("3/4") == Rat(3, 4));
    CHECK(rat_from_string("5") == 5);
    CHECK(rat_to_string(Rat(6, 4)) == "3/2");
    CHECK_THROWS_AS(rat_from_string("x"), StructuralError);
    CHECK_THROWS_AS(rat_from_string(""), StructuralError);
}
