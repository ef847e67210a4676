#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "axired/acceptance.hpp"

TEST_CASE("acceptance criteria") {
    auto results = axired::run_acceptance(42);
    bool all = true;
    for (const auto& r : results) {
        std::printf("[%s] %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        std::fflush(stdout);
        all = all && r.pass;
        CHECK(r.pass);
    }
    REQUIRE(all);
}
