#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "vitalcast/rng.hpp"

using vitalcast::Rng;

TEST_CASE("raw 64-bit stream matches the reference vectors") {
    Rng r0(0);
    CHECK(r0.next_u64() == 0x53175d61490b23dfULL);
    CHECK(r0.next_u64() == 0x61da6f3dc380d507ULL);
    CHECK(r0.next_u64() == 0x5c0fdf91ec9a7bfcULL);

    Rng r42(42);
    CHECK(r42.next_u64() == 0xd0764d4f4476689fULL);
}

TEST_CASE("uniform doubles are the top-53-bit mapping of the raw stream") {
    Rng r(0);
    CHECK(r.uniform() == 0.3245752680314067);
    CHECK(r.uniform() == 0.38223929651167343);
    CHECK(r.uniform() == 0.3596172076473553);

    Rng r42(42);
    CHECK(r42.uniform() == 0.8143051451229099);

    Rng range(7);
    for (int i = 0; i < 10000; ++i) {
        double u = range.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("uniform_vec replays the scalar stream") {
    Rng a(3), b(3);
    auto vec = a.uniform_vec(17);
    for (double v : vec) CHECK(v == b.uniform());
}

TEST_CASE("normal draws match the Box-Muller cos branch") {
    Rng r(0);
    CHECK(r.normal() == doctest::Approx(-0.6542651266405949).epsilon(1e-15));
    CHECK(r.normal() == doctest::Approx(0.9416837800043749).epsilon(1e-15));
}

TEST_CASE("normal_vec replays the scalar stream and has sane moments") {
    Rng a(11), b(11);
    auto vec = a.normal_vec(9);
    for (double v : vec) CHECK(v == b.normal());

    Rng m(5);
    const int n = 20000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        double z = m.normal();
        sum += z;
        sumsq += z * z;
    }
    double mean = sum / n;
    double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 0.03);
    CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("below stays in range and covers small supports") {
    Rng r(9);
    for (int i = 0; i < 1000; ++i) CHECK(r.below(1) == 0);

    std::vector<int> counts(10, 0);
    for (int i = 0; i < 60000; ++i) {
        auto v = r.below(10);
        REQUIRE(v < 10);
        ++counts[static_cast<std::size_t>(v)];
    }
    for (int c : counts) {
        CHECK(c > 5400);
        CHECK(c < 6600);
    }
}

TEST_CASE("shuffle produces the frozen Fisher-Yates permutations") {
    std::vector<int> ten(10);
    std::iota(ten.begin(), ten.end(), 0);
    Rng r(1);
    r.shuffle(ten);
    CHECK(ten == std::vector<int>{4, 7, 9, 3, 2, 1, 5, 0, 6, 8});

    std::vector<int> five(5);
    std::iota(five.begin(), five.end(), 0);
    Rng r2(1);
    r2.shuffle(five);
    CHECK(five == std::vector<int>{3, 1, 0, 2, 4});
}

TEST_CASE("shuffle is a permutation and is stable for short inputs") {
    Rng r(123);
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    r.shuffle(v);
    std::set<int> seen(v.begin(), v.end());
    CHECK(seen.size() == 50);
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == 49);

    std::vector<int> single{42};
    r.shuffle(single);
    CHECK(single == std::vector<int>{42});
    std::vector<int> empty;
    r.shuffle(empty);
    CHECK(empty.empty());
}

TEST_CASE("derive is keyed, reproducible, and does not advance the parent") {
    Rng parent(5);
    Rng child = parent.derive("stream-a");
    double after_derive = parent.uniform();

    Rng fresh(5);
    CHECK(after_derive == fresh.uniform());

    // Same (seed, label) always yields the same substream, independent of
    // how much the parent has been consumed.
    Rng consumed(5);
    (void)consumed.uniform_vec(100);
    Rng child2 = consumed.derive("stream-a");
    CHECK(child.next_u64() == child2.next_u64());
    CHECK(child.next_u64() == child2.next_u64());
}

TEST_CASE("derive separates labels, indices, and seeds") {
    Rng parent(5);
    Rng a = parent.derive("alpha");
    Rng b = parent.derive("beta");
    CHECK(a.next_u64() != b.next_u64());

    Rng i0 = parent.derive("worker", 0);
    Rng i1 = parent.derive("worker", 1);
    Rng plain = parent.derive("worker");
    CHECK(i0.next_u64() != i1.next_u64());
    CHECK(parent.derive("worker", 0).next_u64() != plain.next_u64());

    Rng other(6);
    CHECK(parent.derive("alpha").next_u64() != other.derive("alpha").next_u64());
}

TEST_CASE("seed accessor reports the creation seed") {
    CHECK(Rng(0).seed() == 0);
    CHECK(Rng(99).seed() == 99);
}
