#include "doctest.h"

#include "invariants.hpp"

TEST_CASE("emission invariants over the fuzz corpus") {
    for (unsigned seed = 1; seed <= 1000; ++seed) {
        try {
            invariants::check_emission(seed);
        } catch (const invariants::Violation& v) {
            FAIL(v.what());
        }
    }
}

TEST_CASE("validator is order-sensitive for auxiliary tables") {
    int exercised = 0;
    for (unsigned seed = 1; seed <= 1000; ++seed) {
        try {
            if (invariants::check_order_sensitivity(seed)) ++exercised;
        } catch (const invariants::Violation& v) {
            FAIL(v.what());
        }
    }
    CHECK(exercised > 300);
}
