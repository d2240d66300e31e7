// SPDX-License-Identifier: Apache-2.0
#include "spdrag/tokenizer.hpp"

#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace spdrag;

TEST_CASE("whitespace counter counts words") {
    WhitespaceTokenCounter counter;
    CHECK(counter.count("") == 0);
    CHECK(counter.count("a b c") == 3);
    CHECK(counter.count("  a \t b\nc  ") == 3);
    CHECK(counter.count("one") == 1);
}

TEST_CASE("bpe counter basics") {
    BpeTokenCounter counter;
    CHECK(counter.count("") == 0);
    CHECK(counter.count("the") >= 1);
    // deterministic
    CHECK(counter.count("chunk the document into pieces") ==
          counter.count("chunk the document into pieces"));
    // never more tokens than bytes
    std::string text = "a retrieval pipeline with reranking and synthesis";
    CHECK(counter.count(text) <= text.size());
}

TEST_CASE("bpe matches the sequential-merge reference") {
    BpeTokenCounter counter;
    const auto& merges = builtin_bpe_merges();

    std::vector<std::string> samples = {
        "The engine loads every document from the corpus directory.",
        "revenue of 12 million dollars in fiscal year 2023",
        "word-piece boundaries, punctuation! and: numbers 0123456789",
        "unusual zzzzqqqq bytes \x07 mixed with text",
        testutil::words_doc(300, "token"),
    };

    std::mt19937_64 rng(7);
    for (int i = 0; i < 60; ++i) {
        std::string s;
        std::size_t len = rng() % 80;
        for (std::size_t j = 0; j < len; ++j) {
            int pick = static_cast<int>(rng() % 30);
            if (pick < 24) {
                s.push_back(static_cast<char>('a' + rng() % 26));
            } else if (pick < 28) {
                s.push_back(' ');
            } else {
                s.push_back(static_cast<char>('0' + rng() % 10));
            }
        }
        samples.push_back(s);
    }

    for (const auto& s : samples) {
        CHECK(counter.count(s) == oracles::naive_bpe_count(counter, merges, s));
    }
}

TEST_CASE("bpe matches the reference on a fixed corpus file") {
    BpeTokenCounter counter;
    std::string text = testutil::read_file(std::string(SPDRAG_TEST_DATA_DIR) + "/sample.md");
    REQUIRE(!text.empty());
    std::size_t count = counter.count(text);
    CHECK(count == oracles::naive_bpe_count(counter, builtin_bpe_merges(), text));
    CHECK(count > 0);
    CHECK(count <= text.size());
}

TEST_CASE("token counters are nearly additive over concatenation") {
    WhitespaceTokenCounter ws;
    BpeTokenCounter bpe;
    std::mt19937_64 rng(11);

    auto random_text = [&](std::size_t max_len) {
        std::string s;
        std::size_t len = rng() % max_len;
        for (std::size_t j = 0; j < len; ++j) {
            int pick = static_cast<int>(rng() % 12);
            if (pick < 9) {
                s.push_back(static_cast<char>('a' + rng() % 26));
            } else {
                s.push_back(' ');
            }
        }
        return s;
    };

    for (int i = 0; i < 500; ++i) {
        std::string a = random_text(40);
        std::string b = random_text(40);
        CHECK(ws.count(a + b) <= ws.count(a) + ws.count(b) + 1);
        CHECK(bpe.count(a + b) <= bpe.count(a) + bpe.count(b) + 1);
    }
}

TEST_CASE("pretokenizer partitions the input exactly") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        std::string s;
        std::size_t len = rng() % 60;
        for (std::size_t j = 0; j < len; ++j) {
            int pick = static_cast<int>(rng() % 10);
            if (pick < 6) {
                s.push_back(static_cast<char>('a' + rng() % 4));
            } else if (pick < 8) {
                s.push_back(' ');
            } else {
                s.push_back('\n');
            }
        }
        std::string joined;
        for (const auto& seg : BpeTokenCounter::pretokenize(s)) joined += seg;
        CHECK(joined == s);
    }
}

TEST_CASE("unknown tokenizer name is a config error") {
    CHECK_THROWS_AS(make_token_counter("gpt9"), Error);
}
