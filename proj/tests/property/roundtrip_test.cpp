#include "doctest.h"

#include "invariants.hpp"

// 1000 generated scripts must survive parse -> render -> parse structurally
// unchanged.
TEST_CASE("parse/render round trip over the fuzz corpus") {
    for (unsigned seed = 1; seed <= 1000; ++seed) {
        try {
            invariants::check_roundtrip(seed);
        } catch (const invariants::Violation& v) {
            FAIL(v.what());
        }
    }
}
