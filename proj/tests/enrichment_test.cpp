#include <cmath>

#include <gtest/gtest.h>

#include "quasifix/enrichment.hpp"

namespace {

using quasifix::Map;
using quasifix::QuasiNorm;
using quasifix::Vector;
using quasifix::VectorPair;

std::vector<VectorPair> random_pairs(int dim, int count, std::uint64_t seed) {
    quasifix::SampleSpec spec;
    spec.count = count;
    spec.seed = seed;
    return quasifix::make_sample_pairs(dim, spec);
}

TEST(EnrichedParamsTest, DerivedFieldsSatisfyConstructionIdentities) {
    const auto params = quasifix::make_enriched_params(0.5, 0.5);
    EXPECT_DOUBLE_EQ(params.lambda, 2.0 / 3.0);
    EXPECT_NEAR(params.c, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(params.lambda * (params.b + 1.0), 1.0, 1e-15);
    EXPECT_NEAR(params.c * (params.b + 1.0), params.theta, 1e-15);

    for (const auto& [b, theta] : std::vector<std::pair<double, double>>{
             {0.0, 0.5}, {0.25, 1.2}, {2.0, 2.9}, {9.0, 9.99}, {3.0, 0.0}}) {
        const auto p = quasifix::make_enriched_params(b, theta);
        EXPECT_NEAR(p.lambda * (b + 1.0), 1.0, 1e-15);
        EXPECT_NEAR(p.c * (b + 1.0), theta, 1e-15 * std::max(1.0, theta));
        EXPECT_LT(p.c, 1.0);
        EXPECT_GT(p.lambda, 0.0);
        EXPECT_LE(p.lambda, 1.0);
    }
}

TEST(EnrichedParamsTest, Validation) {
    EXPECT_NO_THROW(quasifix::make_enriched_params(0.5, 0.0)); // theta = 0 is allowed
    EXPECT_THROW(quasifix::make_enriched_params(0.5, 1.5), quasifix::InvalidParameter);
    EXPECT_THROW(quasifix::make_enriched_params(0.5, -0.1), quasifix::InvalidParameter);
    EXPECT_THROW(quasifix::make_enriched_params(-1.0, 0.5), quasifix::InvalidParameter);
    EXPECT_THROW(quasifix::make_enriched_params(0.0, 1.0), quasifix::InvalidParameter);
}

TEST(EstimateThetaTest, ReflectionGivesAbsBMinusOneUnderEveryNorm) {
    const Map T = Map::reflection();
    const auto pairs = random_pairs(2, 2000, 1);
    const std::vector<QuasiNorm> norms = {
        QuasiNorm::standard_p(1.0, 2),
        QuasiNorm::standard_p(quasifix::kInfinity, 2),
        QuasiNorm::maligranda_ap(2.0, 1.0),
        QuasiNorm::tychonoff_half(2),
        QuasiNorm::p_quasi(0.5, 2),
    };
    for (const auto& norm : norms) {
        for (double b : {0.0, 0.25, 0.5, 0.9}) {
            EXPECT_NEAR(quasifix::estimate_theta(T, b, norm, pairs), std::abs(b - 1.0), 1e-12);
        }
    }
}

TEST(EstimateThetaTest, IdentityAndScalarContractions) {
    const auto pairs = random_pairs(2, 500, 2);
    const auto l1 = QuasiNorm::standard_p(1.0, 2);
    const Map identity = Map::affine({{1.0, 0.0}, {0.0, 1.0}}, {0.0, 0.0});
    EXPECT_NEAR(quasifix::estimate_theta(identity, 0.0, l1, pairs), 1.0, 1e-12);

    const Map half = Map::affine({{0.5, 0.0}, {0.0, 0.5}}, {0.0, 0.0});
    EXPECT_NEAR(quasifix::estimate_theta(half, 0.0, l1, pairs), 0.5, 1e-12);
}

TEST(EstimateThetaTest, MonotoneInSampleSet) {
    const Map T = Map::affine({{0.3, 0.1}, {-0.2, 0.6}}, {1.0, -1.0});
    const auto norm = QuasiNorm::standard_p(2.0, 2);
    const auto pairs = random_pairs(2, 1000, 3);
    const std::vector<VectorPair> subset(pairs.begin(), pairs.begin() + 100);
    const double theta_subset = quasifix::estimate_theta(T, 0.5, norm, subset);
    const double theta_full = quasifix::estimate_theta(T, 0.5, norm, pairs);
    EXPECT_GE(theta_full, theta_subset);
}

TEST(EstimateThetaTest, DegenerateAndEmptySamples) {
    const Map T = Map::reflection();
    const auto l1 = QuasiNorm::standard_p(1.0, 2);
    EXPECT_THROW(quasifix::estimate_theta(T, 0.5, l1, {}), quasifix::EmptySampleSet);
    const std::vector<VectorPair> identical = {{Vector{1.0, 2.0}, Vector{1.0, 2.0}}};
    EXPECT_THROW(quasifix::estimate_theta(T, 0.5, l1, identical), quasifix::DegeneratePair);
}

TEST(EstimateThetaTest, ParallelMatchesSerial) {
    const Map T = Map::affine({{0.3, 0.1}, {-0.2, 0.6}}, {1.0, -1.0});
    const auto norm = QuasiNorm::standard_p(2.0, 2);
    const auto pairs = random_pairs(2, 5000, 4);
    EXPECT_DOUBLE_EQ(quasifix::estimate_theta(T, 0.5, norm, pairs, 1),
                     quasifix::estimate_theta(T, 0.5, norm, pairs, 8));
}

TEST(SearchEnrichmentTest, ReflectionPicksLargestBBelowOneOnSmallGrid) {
    const auto found = quasifix::search_enrichment(Map::reflection(),
                                                   QuasiNorm::standard_p(1.0, 2),
                                                   {0.0, 0.25, 0.5, 0.75},
                                                   random_pairs(2, 2000, 5));
    ASSERT_TRUE(found.has_value());
    EXPECT_DOUBLE_EQ(found->b, 0.75);
    EXPECT_NEAR(found->theta, 0.25, 1e-12);
    EXPECT_NEAR(found->c, 1.0 / 7.0, 1e-12);
    EXPECT_TRUE(found->empirical);
}

TEST(SearchEnrichmentTest, OrdinaryContractionAtBZero) {
    const Map half = Map::affine({{0.5, 0.0}, {0.0, 0.5}}, {0.0, 0.0});
    const auto found = quasifix::search_enrichment(half, QuasiNorm::standard_p(1.0, 2), {0.0},
                                                   random_pairs(2, 500, 6));
    ASSERT_TRUE(found.has_value());
    EXPECT_DOUBLE_EQ(found->b, 0.0);
    EXPECT_NEAR(found->theta, 0.5, 1e-12);
    EXPECT_DOUBLE_EQ(found->lambda, 1.0);
    EXPECT_NEAR(found->c, 0.5, 1e-12);
}

TEST(SearchEnrichmentTest, ExpansiveMapHasNoQualifyingB) {
    const Map twice = Map::affine({{2.0, 0.0}, {0.0, 2.0}}, {0.0, 0.0});
    const auto found = quasifix::search_enrichment(twice, QuasiNorm::standard_p(1.0, 2),
                                                   {0.0, 1.0, 2.0}, random_pairs(2, 500, 7));
    EXPECT_FALSE(found.has_value());
}

TEST(SearchEnrichmentTest, DefaultGridSkipsDegenerateEstimates) {
    // On the default grid b = 1 makes the reflection's probe field vanish
    // identically; that entry must not win with an unsupported c = 0.
    const auto found =
        quasifix::search_enrichment(Map::reflection(), QuasiNorm::maligranda_ap(2.0, 1.0),
                                    quasifix::default_b_grid(), random_pairs(2, 2000, 8));
    ASSERT_TRUE(found.has_value());
    EXPECT_DOUBLE_EQ(found->b, 0.5);
    EXPECT_NEAR(found->c, 1.0 / 3.0, 1e-12);
}

TEST(SearchEnrichmentTest, Validation) {
    const auto l1 = QuasiNorm::standard_p(1.0, 2);
    EXPECT_THROW(
        quasifix::search_enrichment(Map::reflection(), l1, {}, random_pairs(2, 10, 9)),
        quasifix::InvalidParameter);
    EXPECT_THROW(quasifix::search_enrichment(Map::reflection(), l1, {0.5}, {}),
                 quasifix::EmptySampleSet);
}

TEST(AnalyticThetaTest, ClosedFormsForCatalogMaps) {
    const auto refl = quasifix::analytic_theta(Map::reflection(), 0.5);
    ASSERT_TRUE(refl.has_value());
    EXPECT_DOUBLE_EQ(*refl, 0.5);
    EXPECT_DOUBLE_EQ(*quasifix::analytic_theta(Map::reflection(), 2.0), 1.0);

    const Map scalar = Map::affine({{-0.5, 0.0}, {0.0, -0.5}}, {1.0, 2.0});
    const auto affine = quasifix::analytic_theta(scalar, 0.0);
    ASSERT_TRUE(affine.has_value());
    EXPECT_DOUBLE_EQ(*affine, 0.5); // |b + alpha| with alpha = -1/2

    const Map skew = Map::affine({{0.5, 0.1}, {0.0, 0.5}}, {0.0, 0.0});
    EXPECT_FALSE(quasifix::analytic_theta(skew, 0.0).has_value());
    EXPECT_FALSE(quasifix::analytic_theta(Map::step(), 0.0).has_value());
}

TEST(DefaultGridTest, SpansDocumentedWeights) {
    const auto grid = quasifix::default_b_grid();
    ASSERT_EQ(grid.size(), 7u);
    EXPECT_EQ(grid, (std::vector<double>{0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 9.0}));
}

} // namespace
