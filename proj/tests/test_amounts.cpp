#include <catch2/catch_amalgamated.hpp>

#include "stablesim/amounts.hpp"

using namespace stablesim;

TEST_CASE("round-half-down division") {
    CHECK(div_round_half_down(10, 4) == 2);   // 2.5 -> 2
    CHECK(div_round_half_down(11, 4) == 3);   // 2.75 -> 3
    CHECK(div_round_half_down(9, 4) == 2);    // 2.25 -> 2
    CHECK(div_round_half_down(10, 5) == 2);
    CHECK(div_round_half_down(0, 7) == 0);
    CHECK(div_round_half_down(1, 2) == 0);    // 0.5 -> 0
    CHECK(div_round_half_down(3, 2) == 1);    // 1.5 -> 1
    CHECK(div_round_half_down(7, 2) == 3);    // 3.5 -> 3
    CHECK_THROWS_AS(div_round_half_down(1, 0), std::domain_error);
    CHECK_THROWS_AS(div_round_half_down(1, -2), std::domain_error);
    CHECK_THROWS_AS(div_round_half_down(-1, 2), std::domain_error);
}

TEST_CASE("round-half-down matches a float oracle away from halves") {
    for (int64_t n = 0; n < 500; ++n)
        for (int64_t d = 1; d < 40; ++d) {
            double exact = static_cast<double>(n) / d;
            double frac = exact - std::floor(exact);
            Amount got = div_round_half_down(n, d);
            if (std::abs(frac - 0.5) < 1e-9)
                CHECK(got == static_cast<Amount>(std::floor(exact)));
            else
                CHECK(got == static_cast<Amount>(std::llround(exact)));
        }
}

TEST_CASE("mul_div_half_down wide intermediates") {
    // 9e18-ish products must not wrap
    Amount big = 4'000'000'000'000'000'000LL;
    CHECK(mul_div_half_down(big, 3, 4) == 3'000'000'000'000'000'000LL);
    CHECK(mul_div_half_down(2'375'000'000LL, 90, 95) == 2'250'000'000LL);
}

TEST_CASE("unit conversions") {
    CHECK(to_units(1.0) == kCoin);
    CHECK(to_units(0.0) == 0);
    CHECK(to_units(12.5) == 1'250'000'000LL);
    CHECK(to_units(23.75) == 2'375'000'000LL);
    CHECK(to_coins(kCoin) == 1.0);
    CHECK(to_coins(150) == Catch::Approx(0.0000015));
    CHECK_THROWS_AS(to_units(-1.0), std::domain_error);
    CHECK_THROWS_AS(to_units(std::nan("")), std::domain_error);
}

TEST_CASE("coin formatting is fixed-width decimal") {
    CHECK(format_coins(0) == "0.00000000");
    CHECK(format_coins(1) == "0.00000001");
    CHECK(format_coins(kCoin) == "1.00000000");
    CHECK(format_coins(2'375'000'000LL) == "23.75000000");
    CHECK(format_coins(123'456'789'012LL) == "1234.56789012");
}
