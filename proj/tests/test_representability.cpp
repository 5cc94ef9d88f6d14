#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracle_helpers.hpp"
#include "pba/representability.hpp"

using namespace pba;
using pba::testing::random_measure;

TEST_CASE("a single-context PPT is represented by its own measure") {
    for (int rep = 0; rep < 10; ++rep) {
        Pba pba(3, {Context({0, 1, 2})});
        State<Rat> st;
        st.measures = {random_measure(3)};
        Ppt<Rat> ppt{pba, st};
        auto r = classical_representable(ppt);
        REQUIRE(r.representable);
        REQUIRE(r.extension.has_value());
        CHECK(*r.extension == st.measures[0]);
        CHECK(verify_certificate(r.p, r.spec, r.certificate));
    }
}

TEST_CASE("uncovered generators are padded independently") {
    Pba pba(3, {Context({0, 1})});
    State<Rat> st;
    st.measures = {random_measure(2)};
    Ppt<Rat> ppt{pba, st};
    auto r = classical_representable(ppt);
    REQUIRE(r.representable);
    REQUIRE(r.extension.has_value());
    CHECK(r.extension->arity() == 3);
    CHECK(r.extension->restrict_to({0, 1}) == st.measures[0]);
    CHECK(r.extension->restrict_to({2}) == Measure<Rat>::uniform(1));
}

TEST_CASE("the induced correlation spec covers every nonempty context subset") {
    Pba pba(4, {Context({0, 2}), Context({1, 2, 3})});
    auto [spec, covered] = correlation_spec_of(pba);
    CHECK(covered == std::vector<GeneratorId>({0, 1, 2, 3}));
    // 3 subsets of the pair + 7 of the triple, minus the shared singleton {2}
    CHECK(spec.dim() == 9);
    for (int g = 0; g < 4; ++g) CHECK(spec.index_of(std::uint32_t(1) << g) >= 0);
}

TEST_CASE("infeasible states yield a verified separator over the induced spec") {
    // PR-box pattern
    Pba pba(4, {Context({0, 2}), Context({0, 3}), Context({1, 2}), Context({1, 3})});
    auto pairm = [](const Rat& q) {
        return measure_from_intersections<Rat>(2, {1, Rat(1, 2), Rat(1, 2), q});
    };
    State<Rat> st;
    st.measures = {pairm(Rat(1, 2)), pairm(Rat(1, 2)), pairm(0), pairm(Rat(1, 2))};
    Ppt<Rat> ppt{pba, st};
    auto r = classical_representable(ppt);
    REQUIRE(!r.representable);
    CHECK(verify_certificate(r.p, r.spec, r.certificate));
}
