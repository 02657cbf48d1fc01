#include <doctest.h>

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "advens/common.hpp"

using namespace advens;

TEST_CASE("rng streams are deterministic per seed") {
    Rng a(42), b(42), c(43);
    bool all_equal = true, any_differ = false;
    for (int i = 0; i < 100; ++i) {
        double va = a.uniform(), vb = b.uniform(), vc = c.uniform();
        all_equal = all_equal && va == vb;
        any_differ = any_differ || va != vc;
        CHECK(va >= 0.0);
        CHECK(va < 1.0);
    }
    CHECK(all_equal);
    CHECK(any_differ);
}

TEST_CASE("uniform_int stays inside inclusive bounds and hits both ends") {
    Rng rng(7);
    std::set<std::int64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        std::int64_t v = rng.uniform_int(-2, 3);
        CHECK(v >= -2);
        CHECK(v <= 3);
        seen.insert(v);
    }
    CHECK(seen.size() == 6);
}

TEST_CASE("normal draws have roughly standard moments") {
    Rng rng(11);
    double sum = 0.0, sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        double v = rng.normal();
        sum += v;
        sq += v * v;
    }
    double mean = sum / n;
    double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.03);
    CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("shuffle permutes without losing elements") {
    std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    Rng rng(5);
    rng.shuffle(v);
    std::set<int> s(v.begin(), v.end());
    CHECK(s.size() == 10);
    std::vector<int> w{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    Rng rng2(5);
    rng2.shuffle(w);
    CHECK(v == w);
}

TEST_CASE("seed_mix separates stage streams") {
    CHECK(seed_mix(7, 1) != seed_mix(7, 2));
    CHECK(seed_mix(7, 1) != seed_mix(8, 1));
    CHECK(seed_mix(7, 1, 0) != seed_mix(7, 1, 1));
    CHECK(seed_mix(7, 1) == seed_mix(7, 1));
}

TEST_CASE("median handles odd, even and unsorted input") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
    CHECK(median({5.0}) == 5.0);
    CHECK_THROWS_AS(median({}), ConfigError);
}

TEST_CASE("csv parser follows quoting rules") {
    auto rows = parse_csv("a,b\n\"x,y\",\"he said \"\"hi\"\"\"\r\n1,2\n");
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == "x,y");
    CHECK(rows[1][1] == "he said \"hi\"");
    CHECK(rows[2][0] == "1");

    auto multiline = parse_csv("a\n\"two\nlines\"\n");
    REQUIRE(multiline.size() == 2);
    CHECK(multiline[1][0] == "two\nlines");
}

TEST_CASE("csv_field escapes only when needed") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("double_to_string round-trips exactly") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 811650.0, 0.0, 1e300}) {
        double back;
        REQUIRE(parse_double(double_to_string(v), &back));
        CHECK(back == v);
    }
}

TEST_CASE("parse_double rejects trailing garbage and empties") {
    double out;
    CHECK(parse_double("1.5", &out));
    CHECK(out == 1.5);
    CHECK_FALSE(parse_double("1.5x", &out));
    CHECK_FALSE(parse_double("", &out));
    CHECK_FALSE(parse_double(" ", &out));
}

TEST_CASE("base64 round-trips binary data") {
    std::vector<unsigned char> data;
    Rng rng(3);
    for (int i = 0; i < 257; ++i) data.push_back(static_cast<unsigned char>(rng.raw() & 0xff));
    auto decoded = base64_decode(base64_encode(data.data(), data.size()));
    CHECK(decoded == data);
}
