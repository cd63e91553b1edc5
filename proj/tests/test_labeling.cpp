#include "triage/corpus.hpp"
#include "triage/error.hpp"
#include "triage/labeling.hpp"
#include "triage/orgchart.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace triage;

namespace {

OutputEncoding three_devs()
{
    return build_encoding(parse_chart("root: R\nM1 -> R\nM2 -> R\na -> M1\nb -> M1\nc -> M2\n"));
}

} // namespace

TEST(RawScores, AccumulatesRepeatedResponses)
{
    const auto enc = three_devs();
    const OwnerHistory h{{"a", "a"}, {"b"}, "c"};
    EXPECT_EQ(raw_scores(h, enc, {}, Level::developer), (std::vector<double>{1.0, 0.5, 0.5}));
}

TEST(RawScores, CloserOnly)
{
    const auto enc = three_devs();
    EXPECT_EQ(raw_scores({{}, {}, "b"}, enc, {}, Level::developer), (std::vector<double>{0.0, 0.5, 0.0}));
}

TEST(RawScores, TeamLevelCreditsTheManager)
{
    const auto enc = three_devs();
    const OwnerHistory h{{"a"}, {}, "c"};
    EXPECT_EQ(raw_scores(h, enc, {}, Level::team), (std::vector<double>{0.5, 0.5}));
}

TEST(RawScores, TeamScoresAreBlockSums)
{
    const auto enc = three_devs();
    const OwnerHistory h{{"a", "c", "b"}, {"c", "c", "a"}, "b"};
    const WeightConfig w{0.7, 0.2, 1.3};
    const auto dev = raw_scores(h, enc, w, Level::developer);
    const auto team = raw_scores(h, enc, w, Level::team);
    for (std::size_t t = 0; t < enc.n_teams(); ++t) {
        const auto [begin, end] = enc.team_block(t);
        EXPECT_NEAR(team[t], std::accumulate(dev.begin() + static_cast<long>(begin), dev.begin() + static_cast<long>(end), 0.0),
                    1e-12);
    }
}

TEST(RawScores, UnknownIdIsAnError)
{
    EXPECT_THROW(raw_scores({{"zz"}, {}, "a"}, three_devs(), {}, Level::developer), ValidationError);
}

TEST(SoftTargetFn, HandSoftmax)
{
    const auto p = soft_target({1.0, 0.5, 0.5});
    const double z = std::exp(1.0) + 2 * std::exp(0.5);
    EXPECT_NEAR(p[0], std::exp(1.0) / z, 1e-15);
    EXPECT_NEAR(p[0], 0.4519, 1e-4);
    EXPECT_NEAR(p[1], 0.2741, 1e-4);
    EXPECT_NEAR(p[2], 0.2741, 1e-4);
}

TEST(SoftTargetFn, UniformAndShiftInvariant)
{
    for (double v : soft_target({0, 0, 0, 0})) {
        EXPECT_DOUBLE_EQ(v, 0.25);
    }
    const auto a = soft_target({0.3, -2.0, 5.0});
    const auto b = soft_target({100.3, 98.0, 105.0});
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(a[i], b[i], 1e-12);
    }
    const auto big = soft_target({1000.0, 0.0});
    EXPECT_TRUE(std::isfinite(big[0]));
}

TEST(Temperature, EqualHalfWeightsGiveTwo)
{
    EXPECT_EQ(effective_temperature({3, 1, 1}, {}), 2.0);
    EXPECT_EQ(effective_temperature({1, 0, 0}, {1.0, 0.3, 0.3}), 1.0);
    EXPECT_NEAR(*effective_temperature({2, 1, 1}, {0.5, 0.25, 0.25}), 8.0 / 3.0, 1e-15);
    EXPECT_FALSE(effective_temperature({0, 0, 0}, {}).has_value());
}

TEST(OneHot, ArgmaxAndTies)
{
    EXPECT_EQ(one_hot_target({1.0, 0.5, 0.5}), (std::vector<double>{1, 0, 0}));
    EXPECT_EQ(one_hot_target({0.5, 0.5}), (std::vector<double>{1, 0}));
    EXPECT_THROW(one_hot_target({0.0, 0.0}), ValidationError);
}

TEST(OneHot, CloserModeLabelsTheCloser)
{
    const auto enc = three_devs();
    const OwnerHistory h{{"a", "a"}, {"a"}, "c"};
    const auto t = make_target(h, enc, {}, LabelMode::closer);
    EXPECT_EQ(t.dev_pmf, (std::vector<double>{0, 0, 1}));
    EXPECT_EQ(t.team_pmf, (std::vector<double>{0, 1}));
    const auto w = make_one_hot_target(h, enc, {}, LabelMode::weighted);
    EXPECT_EQ(w.dev_pmf, (std::vector<double>{1, 0, 0}));
}

TEST(OneHot, CommonScalingKeepsArgmax)
{
    const auto enc = three_devs();
    const OwnerHistory h{{"b", "c"}, {"c", "a"}, "b"};
    const WeightConfig w{0.4, 0.3, 0.9};
    const WeightConfig scaled{0.4 * 7, 0.3 * 7, 0.9 * 7};
    EXPECT_EQ(argmax(raw_scores(h, enc, w, Level::developer)), argmax(raw_scores(h, enc, scaled, Level::developer)));
    EXPECT_NE(soft_target(raw_scores(h, enc, w, Level::developer)),
              soft_target(raw_scores(h, enc, scaled, Level::developer)));
}

TEST(SoftTargets, StrictlyPositiveAndNormalized)
{
    const auto data = generate_synthetic(SyntheticConfig{}, 9);
    const auto enc = build_encoding(data.chart);
    for (const auto& bug : data.corpus.cases) {
        const auto t = make_soft_target(bug.history, enc, {});
        for (const auto* pmf : {&t.team_pmf, &t.dev_pmf}) {
            double sum = 0;
            for (double v : *pmf) {
                EXPECT_GT(v, 0.0);
                sum += v;
            }
            EXPECT_NEAR(sum, 1.0, 1e-9);
        }
    }
}

TEST(SoftTargets, SingleResponderIsArgmax)
{
    const auto enc = three_devs();
    const auto t = make_soft_target({{}, {}, "b"}, enc, {});
    EXPECT_EQ(argmax(t.dev_pmf), 1u);
}

TEST(Weights, Validation)
{
    EXPECT_THROW(validate(WeightConfig{0, 0, 0}), ValidationError);
    EXPECT_THROW(validate(WeightConfig{-1, 1, 1}), ValidationError);
    EXPECT_THROW(validate(WeightConfig{NAN, 1, 1}), ValidationError);
    EXPECT_NO_THROW(validate(WeightConfig{}));
    EXPECT_EQ(parse_label_mode(to_string(LabelMode::closer)), LabelMode::closer);
}
