#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "genut/report.hpp"
#include "genut/reproduce.hpp"

using genut::Matrix;
using genut::ReproReport;
using genut::ReproTarget;
using genut::Vector;

namespace {

const genut::ReproRow* find_row(const ReproReport& rep, const std::string& scheme,
                                const std::string& quantity,
                                const std::string& dist = "") {
    for (const auto& r : rep.rows) {
        if (r.scheme == scheme && r.quantity == quantity &&
            (dist.empty() || r.distribution == dist)) {
            return &r;
        }
    }
    return nullptr;
}

}  // namespace

TEST(PercentageError, ExactAndZeroHandling) {
    Matrix a(1, 1), t(1, 1);
    a << 18.0;
    t << 18.0;
    EXPECT_DOUBLE_EQ(genut::percentage_error(a, t).values(0, 0), 0.0);

    // Zero truth with (near) zero approximation reports zero...
    a << 1e-13;
    t << 0.0;
    const auto z = genut::percentage_error(a, t);
    EXPECT_DOUBLE_EQ(z.values(0, 0), 0.0);
    EXPECT_FALSE(z.absolute_marker(0, 0));

    // ...but a real deviation from a zero truth is flagged as absolute.
    a << 0.25;
    const auto nz = genut::percentage_error(a, t);
    EXPECT_DOUBLE_EQ(nz.values(0, 0), 25.0);
    EXPECT_TRUE(nz.absolute_marker(0, 0));

    Matrix wrong(2, 1);
    wrong.setZero();
    EXPECT_THROW(genut::percentage_error(wrong, t), genut::Error);
}

TEST(PercentageError, KnownUtCovarianceCell) {
    // Symmetric-transform variance of 3x + 2x^2 over an exponential with rate
    // 2 is 6.75 against the true 13.25.
    Matrix a(1, 1), t(1, 1);
    a << 6.75;
    t << 13.25;
    EXPECT_NEAR(genut::percentage_error(a, t).values(0, 0), 49.0566, 1e-3);
}

TEST(Reproduce, Example1AllRowsPass) {
    const ReproReport rep = genut::reproduce(ReproTarget::Example1, 42);
    EXPECT_TRUE(rep.all_pass());
    const auto* w0 = find_row(rep, "genut", "w[0]");
    ASSERT_NE(w0, nullptr);
    EXPECT_NEAR(*w0->value, 0.3333, 5e-4);
    const auto* chi = find_row(rep, "genut", "chi[0][1]");
    ASSERT_NE(chi, nullptr);
    EXPECT_NEAR(*chi->value, -0.1794, 5e-4);
}

TEST(Reproduce, Example2AllRowsPass) {
    const ReproReport rep = genut::reproduce(ReproTarget::Example2, 42);
    EXPECT_TRUE(rep.all_pass());
    const auto* w0 = find_row(rep, "genut-constrained", "w[0]");
    ASSERT_NE(w0, nullptr);
    EXPECT_NEAR(*w0->value, -0.0576, 5e-4);
    const auto* k0 = find_row(rep, "genut-constrained", "kurt_hat[0]");
    ASSERT_NE(k0, nullptr);
    EXPECT_NEAR(*k0->value, 6.2587, 5e-4);
}

TEST(Reproduce, ScalarExampleAllRowsPass) {
    const ReproReport rep = genut::reproduce(ReproTarget::ScalarExample, 42);
    EXPECT_TRUE(rep.all_pass());
    const auto* u = find_row(rep, "genut", "u");
    ASSERT_NE(u, nullptr);
    EXPECT_NEAR(*u->value, 5.8055, 5e-4);
}

TEST(Reproduce, Table2GenutColumnIsZero) {
    const ReproReport rep = genut::reproduce(ReproTarget::Table2, 42);
    EXPECT_TRUE(rep.all_pass());
    int genut_rows = 0;
    for (const auto& r : rep.rows) {
        if (r.scheme == "genut") {
            EXPECT_LE(*r.value, 1e-8) << r.distribution;
            ++genut_rows;
        }
    }
    EXPECT_EQ(genut_rows, 10);
}

TEST(Reproduce, Table3UtColumnMatchesPublished) {
    const ReproReport rep = genut::reproduce(ReproTarget::Table3, 42);
    EXPECT_TRUE(rep.all_pass());
    const auto* e2 = find_row(rep, "ut", "covariance", "E(2)");
    ASSERT_NE(e2, nullptr);
    EXPECT_NEAR(*e2->value, 49.057, 0.5);
    const auto* ge = find_row(rep, "ut", "covariance", "GE(0.5)");
    ASSERT_NE(ge, nullptr);
    EXPECT_NEAR(*ge->value, 67.662, 0.5);
    const auto* g12 = find_row(rep, "ut", "covariance", "G(1,2)");
    ASSERT_NE(g12, nullptr);
    EXPECT_NEAR(*g12->value, 64.0, 0.5);
}

TEST(Reproduce, DeterministicGivenSeed) {
    const ReproReport a = genut::reproduce(ReproTarget::Table2, 7);
    const ReproReport b = genut::reproduce(ReproTarget::Table2, 7);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (size_t i = 0; i < a.rows.size(); ++i) {
        if (a.rows[i].value) {
            EXPECT_DOUBLE_EQ(*a.rows[i].value, *b.rows[i].value);
        }
    }
}

TEST(Reproduce, WritesCsvAndJson) {
    const ReproReport rep = genut::reproduce(ReproTarget::ScalarExample, 42);
    const auto dir = std::filesystem::temp_directory_path() / "genut_repro_test";
    std::filesystem::remove_all(dir);
    const auto csv_path = genut::write_csv(rep, dir);
    const auto json_path = genut::write_json(rep, dir);

    std::ifstream csv(csv_path);
    ASSERT_TRUE(csv.good());
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "distribution,scheme,quantity,error_pct,paper_value,pass");
    size_t lines = 0;
    for (std::string line; std::getline(csv, line);) ++lines;
    EXPECT_EQ(lines, rep.rows.size());

    // Fields containing commas (distribution labels) must be quoted so every
    // record keeps exactly six columns.
    const genut::ReproReport t3 = genut::reproduce(ReproTarget::Table3, 42);
    std::ifstream csv3(genut::write_csv(t3, dir));
    std::getline(csv3, header);
    for (std::string line; std::getline(csv3, line);) {
        size_t cols = 1;
        bool quoted = false;
        for (char c : line) {
            if (c == '"') quoted = !quoted;
            if (c == ',' && !quoted) ++cols;
        }
        EXPECT_EQ(cols, 6u) << line;
    }

    std::ifstream jf(json_path);
    ASSERT_TRUE(jf.good());
    genut::json j;
    jf >> j;
    EXPECT_EQ(j.at("selector"), "scalar-example");
    EXPECT_EQ(j.at("seed"), 42);
    EXPECT_EQ(j.at("generator_id"), "xoshiro256++");
    EXPECT_TRUE(j.at("all_pass").get<bool>());
    EXPECT_TRUE(j.contains("tolerances"));
    EXPECT_EQ(j.at("rows").size(), rep.rows.size());
    std::filesystem::remove_all(dir);
}

TEST(Reproduce, WriteFailureSurfacesPath) {
    const ReproReport rep = genut::reproduce(ReproTarget::ScalarExample, 42);
    try {
        genut::write_csv(rep, "/proc/genut-no-such-dir");
        FAIL() << "expected a write error";
    } catch (const std::exception& e) {
        EXPECT_NE(std::string(e.what()).find("genut-no-such-dir"), std::string::npos);
    }
}

TEST(Reproduce, SelectorParsing) {
    EXPECT_EQ(genut::repro_target_from_string("case3"), ReproTarget::Case3);
    EXPECT_EQ(genut::repro_target_from_string("scalar-example"), ReproTarget::ScalarExample);
    EXPECT_THROW(genut::repro_target_from_string("table9"), genut::ParameterDomainError);
}
