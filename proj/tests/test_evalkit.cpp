// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The relex Authors

#include <cmath>

#include <gtest/gtest.h>

#include "relex/error.hpp"
#include "relex/evalkit.hpp"
#include "relex/text.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace relex {
namespace {

Tokens T(const std::string& s) { return tokenize(s); }

ConnectionInstance conn(const std::string& a, const std::string& b, const std::string& type) {
    return {Iri(a), Iri(b), type, {}, ""};
}

TEST(Gold, ParseKeysAndReferences) {
    auto g = parse_gold_standard(
        "# comment\n"
        "<http://x/b> <http://x/a> born_in\tfirst ref\n"
        "\n"
        "http://x/a http://x/b born_in\tsecond ref\n"
        "<http://x/c> <http://x/d> works_in\n");
    ASSERT_EQ(g.entries.size(), 2u);
    auto k = gold_key(Iri("http://x/a"), Iri("http://x/b"), "born_in");
    EXPECT_EQ(g.entries[0], k);
    EXPECT_EQ(k, gold_key(Iri("http://x/b"), Iri("http://x/a"), "born_in"));
    EXPECT_EQ(g.references.at(k), (std::vector<std::string>{"first ref", "second ref"}));
    EXPECT_TRUE(g.references.at(g.entries[1]).empty());
    EXPECT_FALSE(g.contains(gold_key(Iri("http://x/a"), Iri("http://x/b"), "works_in")));

    EXPECT_THROW(parse_gold_standard("<http://x/a> born_in\tx\n"), ParseError);
    auto fixture = load_gold_standard_file(test::fixture("gold.tsv"));
    EXPECT_EQ(fixture.entries.size(), 19u);
}

TEST(Ratings, Parse) {
    auto r = parse_ratings("<http://x/a> <http://x/b> t\t4.5\n");
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].rating, 4.5);
    EXPECT_THROW(parse_ratings("<http://x/a> <http://x/b> t 4\n"), ParseError);
    EXPECT_THROW(parse_ratings("<http://x/a> <http://x/b> t\tfour\n"), ParseError);
    EXPECT_THROW(parse_ratings("<http://x/a> <http://x/b> t\t4 x\n"), ParseError);
    EXPECT_EQ(load_ratings_file(test::fixture("ratings.tsv")).size(), 16u);
}

TEST(Retrieval, PrecisionRecallF1) {
    auto g = parse_gold_standard(
        "<http://x/a> <http://x/b> t\n<http://x/a> <http://x/c> t\n<http://x/a> <http://x/d> t\n"
        "<http://x/a> <http://x/e> t\n");
    std::vector<ConnectionInstance> got{conn("http://x/b", "http://x/a", "t"), conn("http://x/a", "http://x/b", "t"),
                                        conn("http://x/a", "http://x/c", "t"), conn("http://x/a", "http://x/z", "t")};
    auto s = precision_recall_f1(got, g);
    // Distinct retrieved keys: ab, ac, az; hits ab, ac.
    EXPECT_DOUBLE_EQ(s.precision, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.recall, 0.5);
    EXPECT_DOUBLE_EQ(s.f1, 2 * (2.0 / 3.0) * 0.5 / (2.0 / 3.0 + 0.5));

    auto none = precision_recall_f1({}, g);
    EXPECT_EQ(none.precision, 0.0);
    EXPECT_EQ(none.f1, 0.0);
    EXPECT_THROW(precision_recall_f1(got, GoldStandard{}), DomainError);
}

TEST(Bleu, HandComputed) {
    // All n-gram precisions 1; c = 5, r = 7.
    std::vector<Tokens> refs{T("a b c d e f g")};
    EXPECT_NEAR(bleu(T("a b c d e"), refs), std::exp(1.0 - 7.0 / 5.0), 1e-12);

    // p1 = 5/6, p2 = 3/5, p3 = 1/4, p4 = 0 -> epsilon; no brevity penalty.
    std::vector<Tokens> mat{T("the cat is on the mat")};
    double expect = std::exp((std::log(5.0 / 6) + std::log(3.0 / 5) + std::log(0.25) + std::log(kBleuEpsilon)) / 4);
    EXPECT_NEAR(bleu(T("the cat sat on the mat"), mat), expect, 1e-15);

    // Clipping takes the max count over references; closest length is 3.
    std::vector<Tokens> two{T("the cat"), T("the the x")};
    double clip = std::exp((std::log(0.5) + std::log(1.0 / 3) + 2 * std::log(kBleuEpsilon)) / 4);
    EXPECT_NEAR(bleu(T("the the the the"), two), clip, 1e-15);
}

TEST(Bleu, IdentityAndErrors) {
    for (const auto& s : {"a b c d", "one two three four five six", "x y z w x y z w"}) {
        std::vector<Tokens> refs{T(s)};
        EXPECT_NEAR(bleu(T(s), refs), 1.0, 1e-9) << s;
    }
    // Shorter than four tokens: the missing 4-gram precision is smoothed.
    std::vector<Tokens> short_ref{T("a b c")};
    EXPECT_LT(bleu(T("a b c"), short_ref), 1e-2);
    EXPECT_THROW(bleu({}, short_ref), DomainError);
    EXPECT_THROW(bleu(T("a"), std::vector<Tokens>{}), DomainError);
    EXPECT_THROW(bleu(T("a"), std::vector<Tokens>{Tokens{}}), DomainError);
}

TEST(RougeL, MatchesDpOracleExhaustively) {
    auto seqs = test::all_sequences({"a", "b", "c"}, 5);
    for (const auto& x : seqs)
        for (const auto& y : seqs) {
            ASSERT_EQ(lcs_length(x, y), test::lcs_oracle(x, y));
            ASSERT_NEAR(rouge_l(x, y), test::rouge_l_oracle(x, y), 1e-15);
        }
}

TEST(RougeL, HandValues) {
    // LCS 4 of 6 and 6: P = R = 2/3.
    EXPECT_NEAR(rouge_l(T("the cat sat on the mat"), T("the cat is on the mat")), 5.0 / 6.0, 1e-15);
    EXPECT_EQ(rouge_l(T("x"), T("y")), 0.0);
    EXPECT_THROW(rouge_l({}, T("y")), DomainError);
}

TEST(Meteor, IdentityClosedForm) {
    for (std::size_t n = 1; n <= 12; ++n) {
        Tokens c;
        for (std::size_t i = 0; i < n; ++i) c.push_back("w" + std::to_string(i % 3));
        EXPECT_EQ(meteor_lite(c, c), 1.0 - 0.5 / static_cast<double>(n * n * n)) << n;
    }
}

TEST(Meteor, MatchesExhaustiveAlignment) {
    auto seqs = test::all_sequences({"a", "b", "c"}, 4);
    for (const auto& x : seqs)
        for (const auto& y : seqs) {
            auto [m, ch] = test::alignment_oracle(x, y);
            ASSERT_EQ(min_chunks(x, y), ch);
            ASSERT_NEAR(meteor_lite(x, y), test::meteor_oracle(x, y), 1e-15);
        }
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> len(5, 7), sym(0, 2);
    for (int i = 0; i < 300; ++i) {
        Tokens x, y;
        for (int k = len(rng); k > 0; --k) x.push_back(std::string(1, static_cast<char>('a' + sym(rng))));
        for (int k = len(rng); k > 0; --k) y.push_back(std::string(1, static_cast<char>('a' + sym(rng))));
        ASSERT_NEAR(meteor_lite(x, y), test::meteor_oracle(x, y), 1e-15);
    }
}

TEST(Meteor, HandValue) {
    // Matches: the cat / on the mat -> m = 5, 2 chunks; P = R = 5/6.
    double fmean = 5.0 / 6.0;
    EXPECT_NEAR(meteor_lite(T("the cat sat on the mat"), T("the cat is on the mat")),
                fmean * (1 - 0.5 * std::pow(2.0 / 5.0, 3)), 1e-15);
    EXPECT_EQ(meteor_lite(T("x"), T("y")), 0.0);
}

TEST(Spearman, ClosedForms) {
    std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> same{10, 20, 30, 40, 50}, rev{5, 4, 3, 2, 1}, swap{1, 3, 2, 4, 5};
    EXPECT_NEAR(spearman(x, same), 1.0, 1e-12);
    EXPECT_NEAR(spearman(x, rev), -1.0, 1e-12);
    EXPECT_NEAR(spearman(x, swap), 0.9, 1e-12);
    // Symmetric around the middle: rho = 0.
    std::vector<double> vee{2, 1, 0, 1, 2};
    EXPECT_NEAR(spearman(x, vee), 0.0, 1e-12);
}

TEST(Spearman, TiesAndErrors) {
    std::vector<double> t{1, 2, 2, 3};
    EXPECT_EQ(average_ranks(t), (std::vector<double>{1, 2.5, 2.5, 4}));
    std::vector<double> a{1, 2}, c{3, 3}, one{1};
    EXPECT_THROW(spearman(a, c), DomainError);
    EXPECT_THROW(spearman(one, one), DomainError);
    EXPECT_THROW(spearman(a, one), DomainError);
}

TEST(Spearman, InvariantUnderMonotoneMaps) {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g;
    for (int i = 0; i < 200; ++i) {
        std::vector<double> x(8), y(8), fx(8);
        for (int k = 0; k < 8; ++k) {
            x[k] = g(rng);
            y[k] = g(rng);
            fx[k] = std::exp(3 * x[k]) + 1;
        }
        double r = spearman(x, y);
        EXPECT_NEAR(r, spearman(fx, y), 1e-12);
        EXPECT_NEAR(r, spearman(y, x), 1e-12);
        EXPECT_LE(std::abs(r), 1.0);
    }
}

TEST(Diversity, DistinctNGrams) {
    std::vector<std::string> texts{"a b a", "a b"};
    std::vector<ConnectionInstance> cs{conn("http://x/a", "http://x/b", "t1"), conn("http://x/a", "http://x/c", "t1"),
                                       conn("http://x/a", "http://x/d", "t2")};
    auto d = diversity(texts, cs);
    EXPECT_DOUBLE_EQ(d.distinct1, 2.0 / 5.0);
    EXPECT_DOUBLE_EQ(d.distinct2, 2.0 / 3.0);
    EXPECT_EQ(d.type_count, 2u);
    auto empty = diversity({}, {});
    EXPECT_EQ(empty.distinct1, 0.0);
}

TEST(Evaluate, ReportCombinesMetrics) {
    auto g = parse_gold_standard(
        "<http://x/a> <http://x/b> t\tthe cat sat on the mat\n"
        "<http://x/a> <http://x/b> t\ta different reference sentence here\n"
        "<http://x/a> <http://x/c> t\tsomething else entirely\n");
    std::vector<SystemOutput> out{{conn("http://x/b", "http://x/a", "t"), "the cat sat on the mat"},
                                  {conn("http://x/a", "http://x/z", "t"), "unrelated words"}};
    std::vector<ScorePair> pairs{{0.1, 1}, {0.5, 2}, {0.9, 5}};
    auto r = evaluate_system(out, g, pairs);
    EXPECT_DOUBLE_EQ(r.precision, 0.5);
    EXPECT_DOUBLE_EQ(r.recall, 0.5);
    EXPECT_EQ(r.text_scored, 1u);
    EXPECT_EQ(r.retrieved, 2u);
    EXPECT_NEAR(r.rouge_l, 1.0, 1e-15);
    EXPECT_NEAR(r.meteor, 1.0 - 0.5 / 216.0, 1e-15);
    std::vector<Tokens> refs{T("the cat sat on the mat"), T("a different reference sentence here")};
    EXPECT_NEAR(r.bleu, bleu(T("the cat sat on the mat"), refs), 1e-15);
    ASSERT_TRUE(r.spearman);
    EXPECT_NEAR(*r.spearman, 1.0, 1e-12);

    auto no_pairs = evaluate_system(out, g, {});
    EXPECT_FALSE(no_pairs.spearman);
    auto text = format_report_text(no_pairs);
    EXPECT_NE(text.find("precision: 0.5000"), std::string::npos);
    EXPECT_NE(text.find("spearman: n/a"), std::string::npos);
}

}  // namespace
}  // namespace relex
