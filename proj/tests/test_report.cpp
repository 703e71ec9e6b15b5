#include <gtest/gtest.h>

#include "foi/report.hpp"

using namespace foi;

TEST(Report, IndexCellFormatting) {
    EXPECT_EQ(format_index_cell(5.2, 2), "5.2 (2)");
    EXPECT_EQ(format_index_cell(5.2, 0), "5.2");
    EXPECT_EQ(format_index_cell(std::nullopt, 3), "-");
    EXPECT_EQ(format_1dp(5.25), "5.3");
    EXPECT_EQ(format_1dp(5.24), "5.2");
    EXPECT_EQ(format_1dp(4.0), "4.0");
    EXPECT_EQ(format_1dp(6.96), "7.0");
    EXPECT_EQ(format_1dp(-0.04), "0.0");
}

TEST(Report, ParseFormat) {
    EXPECT_EQ(parse_format("csv"), OutputFormat::Csv);
    EXPECT_EQ(parse_format("json"), OutputFormat::Json);
    EXPECT_EQ(parse_format("table"), OutputFormat::Table);
    EXPECT_THROW(parse_format("xml"), InputError);
}

TEST(Report, ScoresJsonRoundTrip) {
    FoiScores s;
    s.epoch = 2020;
    s.rows = {{"AAA", {5.123456789012345, std::nullopt, 1.0}, {1, 0, 2}}, {"BBB", {3.0, 2.5, 6.999999999999}, {2, 1, 1}}};
    const auto back = scores_from_json(nlohmann::json::parse(render_scores(s, OutputFormat::Json)));
    ASSERT_EQ(back.rows.size(), 2u);
    EXPECT_EQ(back.epoch, 2020);
    for (std::size_t r = 0; r < 2; ++r) {
        EXPECT_EQ(back.rows[r].country, s.rows[r].country);
        EXPECT_EQ(back.rows[r].index, s.rows[r].index);
        EXPECT_EQ(back.rows[r].rank, s.rows[r].rank);
    }
}

TEST(Report, ScoresCsvLeavesMissingEmpty) {
    FoiScores s;
    s.rows = {{"AAA", {5.5, std::nullopt, 1.0}, {1, 0, 2}}};
    EXPECT_EQ(render_scores(s, OutputFormat::Csv), "country,f_index,f_rank,o_index,o_rank,i_index,i_rank\nAAA,5.5,1,,0,1,2\n");
}

TEST(Report, ScoresTableUsesRankedCells) {
    FoiScores s;
    s.epoch = 2020;
    s.rows = {{"CHE", {5.2, 5.4, 5.6}, {2, 3, 1}}};
    const auto text = render_scores(s, OutputFormat::Table);
    EXPECT_NE(text.find("F-2020"), std::string::npos);
    EXPECT_NE(text.find("5.6 (1)"), std::string::npos);
}

TEST(Report, AssignmentsCsv) {
    const std::vector<ClusterAssignment> list{classify("CZE", 4.0, 4.2, 3.9)};
    EXPECT_EQ(render_assignments(list, OutputFormat::Csv),
              "country,f_index,o_index,i_index,levels,cluster,label,borderline\nCZE,4,4.2,3.9,HHL,7,Government-led / Bureaucratic,F\n");
}

TEST(Report, FactorScoresCsvEmptyForMissing) {
    fa::FactorScores s{{"CHE", "AUS"}, 2, {{kMissing, 0.5}, {-1.25, 2.0}}};
    EXPECT_EQ(render_factor_scores_csv(s, {"F1", "F2"}), "country,F1,F2\nCHE,,0.5\nAUS,-1.25,2\n");
}
