// Writes the synthetic demonstration inputs shipped under data/:
//   default_manifest.json, demo_panel_2010.csv, demo_panel_2020.csv, demo_fa_panel.csv
// The values are random draws, not real statistics.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "foi/foi.hpp"

namespace {

const std::vector<std::string> kCountries = {"AUS", "AUT", "BEL", "CAN", "CHE", "CHL", "CZE", "DEU", "DNK", "ESP", "EST", "FIN",
                                             "FRA", "GBR", "GRC", "HUN", "IRL", "ISL", "ISR", "ITA", "JPN", "KOR", "LUX", "MEX",
                                             "NLD", "NOR", "NZL", "POL", "PRT", "SVK", "SVN", "SWE", "TUR", "USA"};

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw foi::InputError("cannot write '" + path.string() + "'");
    out << text;
}

std::string panel_csv(const foi::IndicatorManifest& manifest, const std::vector<std::vector<foi::Cell>>& grid) {
    foi::CsvTable table;
    for (const auto& s : manifest.specs()) table.columns.push_back(s.id);
    table.keys = kCountries;
    table.rows = grid;
    std::ostringstream out;
    foi::write_csv_table(out, table);
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
    std::filesystem::create_directories(dir);
    const auto manifest = foi::default_manifest();
    write_file(dir / "default_manifest.json", manifest.to_json().dump(2) + "\n");

    std::mt19937_64 rng(20201);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // latent pillar strength per country, drifting between epochs
    std::vector<std::array<double, 3>> latent_2010(kCountries.size()), latent_2020(kCountries.size());
    for (std::size_t c = 0; c < kCountries.size(); ++c) {
        for (std::size_t p = 0; p < 3; ++p) {
            latent_2010[c][p] = normal(rng);
            latent_2020[c][p] = 0.8 * latent_2010[c][p] + 0.6 * normal(rng);
        }
    }

    auto make_grid = [&](const std::vector<std::array<double, 3>>& latent, std::size_t missing) {
        std::vector<std::vector<foi::Cell>> grid(kCountries.size());
        for (std::size_t c = 0; c < kCountries.size(); ++c) {
            for (std::size_t i = 0; i < manifest.size(); ++i) {
                const auto& spec = manifest.specs()[i];
                const double strength = 0.75 * latent[c][static_cast<std::size_t>(spec.pillar)] + 0.66 * normal(rng);
                const double signed_strength = spec.direction == foi::Direction::HigherIsBetter ? strength : -strength;
                const double base = 10.0 + 5.0 * static_cast<double>(i);
                grid[c].push_back(std::round((base + 2.5 * signed_strength) * 1000.0) / 1000.0);
            }
        }
        for (std::size_t m = 0; m < missing; ++m) {
            const auto c = static_cast<std::size_t>(unit(rng) * static_cast<double>(kCountries.size()));
            const auto i = static_cast<std::size_t>(unit(rng) * static_cast<double>(manifest.size()));
            grid[c][i] = foi::kMissing;
        }
        return grid;
    };
    write_file(dir / "demo_panel_2010.csv", panel_csv(manifest, make_grid(latent_2010, 5)));
    write_file(dir / "demo_panel_2020.csv", panel_csv(manifest, make_grid(latent_2020, 5)));

    // 15-variable, two-factor panel for the factor-analysis demo
    const std::size_t p = 15, k = 2;
    const auto generator = foi::fa::block_loadings(p, k, 0.8, 0.15);
    const auto fa = foi::fa::synthesize_known_factors(p, k, kCountries.size(), generator, 0.5, 7);
    foi::CsvTable table;
    table.columns = fa.variables();
    table.keys = kCountries;
    for (std::size_t r = 0; r < fa.rows(); ++r) {
        std::vector<foi::Cell> row;
        for (std::size_t c = 0; c < fa.cols(); ++c) row.push_back(std::round(*fa.at(r, c) * 1e4) / 1e4);
        table.rows.push_back(std::move(row));
    }
    table.rows[4][0] = foi::kMissing;  // CHE: one missing input, so its scores are MISSING
    table.rows[32][7] = foi::kMissing;
    std::ostringstream out;
    foi::write_csv_table(out, table);
    write_file(dir / "demo_fa_panel.csv", out.str());

    std::cout << "wrote demo data to " << dir.string() << '\n';
    return 0;
}
