#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "supoly/harness.hpp"

using namespace supoly;

namespace {

ExperimentConfig make(const std::string& sub) {
    ExperimentConfig c;
    c.subcommand = sub;
    c.threads = 2;
    return c;
}

// CSV body without the metadata lines
std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream is(csv);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '#') out.push_back(line);
    return out;
}

}  // namespace

TEST(ParseLists, Degrees) {
    EXPECT_EQ(parse_degree_list("20:200:20"), (std::vector<int>{20, 40, 60, 80, 100, 120, 140, 160, 180, 200}));
    EXPECT_EQ(parse_degree_list("4,8,12"), (std::vector<int>{4, 8, 12}));
    EXPECT_EQ(parse_degree_list("7"), (std::vector<int>{7}));
    EXPECT_EQ(parse_degree_list("5:6:4"), (std::vector<int>{5}));
    EXPECT_THROW(parse_degree_list("1:2"), ConfigError);
    EXPECT_THROW(parse_degree_list("5:1:1"), ConfigError);
    EXPECT_THROW(parse_degree_list("1:5:0"), ConfigError);
    EXPECT_THROW(parse_degree_list("a,b"), ConfigError);
    EXPECT_THROW(parse_degree_list("3x"), ConfigError);
}

TEST(ParseLists, Radii) {
    EXPECT_EQ(parse_radius_list("0.5,1,2e0"), (std::vector<double>{0.5, 1.0, 2.0}));
    EXPECT_THROW(parse_radius_list("1,x"), ConfigError);
    EXPECT_THROW(parse_radius_list(""), ConfigError);
}

TEST(Validate, RejectsBadConfigs) {
    auto bad = [](ExperimentConfig c) { EXPECT_THROW(c.validate(), ConfigError) << c.subcommand; };
    auto c = make("nonsense");
    bad(c);
    c = make("hole-mc");
    c.m = 2;
    bad(c);
    c = make("deviation");
    c.Delta = 1.0;
    bad(c);
    c = make("counting");
    c.kappa = 1.0;
    bad(c);
    c = make("fit-exponent");
    c.N_list = {4, 8};
    bad(c);
    c.N_list = {4, 12, 8};
    bad(c);
    c = make("omega-bound");
    c.fit = true;
    c.N_list = {10, 20, 20};
    bad(c);
    c = make("invariance-check");
    c.N_list = {31};
    bad(c);
    c = make("hole-mc");
    c.r_list = {-1.0};
    bad(c);
    c.r_list = {1.0};
    c.threads = 0;
    bad(c);

    auto ok = make("fit-exponent");
    ok.source = "omega";
    ok.m = 3;
    ok.N_list = {10, 20, 30};
    EXPECT_NO_THROW(ok.validate());
}

TEST(Metadata, HeaderAndCommandIgnoreThreads) {
    auto c = make("hole-mc");
    c.N_list = {1};
    c.trials = 10;
    c.seed = 7;
    const std::string h = metadata_header(c);
    EXPECT_EQ(h.rfind("# supoly " + std::string(kVersion) + "\n# generator philox4x32-10\n# command ", 0), 0u);
    EXPECT_EQ(canonical_command(c), "supoly hole-mc --m 1 --N-list 1 --r-list 1 --seed 7 --trials 10");
    auto d = c;
    d.threads = 9;
    EXPECT_EQ(canonical_command(c), canonical_command(d));
}

TEST(Csv, SchemasAreFixed) {
    EXPECT_STREQ(csv::kHoleMc, "m,N,r,trials,hits,p_hat,stderr");
    EXPECT_STREQ(csv::kCounting, "m,N,r,trial,n_exact,n_jensen,stat_error,kappa");
    EXPECT_STREQ(csv::kOmega, "m,N,r,log_prob");
    EXPECT_STREQ(csv::kDeviation, "m,N,r,Delta,trials,violations,frequency");
}

TEST(Run, HoleMcRowsAndJson) {
    auto c = make("hole-mc");
    c.N_list = {1};
    c.trials = 2000;
    c.seed = 7;
    const auto out = run_experiment(c);
    const auto lines = data_lines(out.csv);
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0], csv::kHoleMc);
    const auto h = hole_probability_mc({1, 1, 7}, 1.0, 2000, 1);
    EXPECT_EQ(lines[1], csv::hole_row(h));
    const std::string js = out.summary.str();
    EXPECT_NE(js.find("\"generator\":\"philox4x32-10\""), std::string::npos);
    EXPECT_NE(js.find("\"p_hat\":" + fmt17(h.p_hat)), std::string::npos);
}

TEST(Run, OmegaCertificateAndFit) {
    auto c = make("omega-bound");
    c.m = 1;
    c.N_list = parse_degree_list("20:200:20");
    c.fit = true;
    const auto out = run_experiment(c);
    EXPECT_EQ(data_lines(out.csv).size(), 11u);
    std::istringstream cert(out.stdout_text);
    int m = 0, N = 0;
    double r = 0, lp = 0;
    cert >> m >> N >> r >> lp;
    EXPECT_EQ(m, 1);
    EXPECT_EQ(N, 20);
    EXPECT_EQ(lp, omega_lower_bound({1, 20, 0}, 1.0).log_prob);
    EXPECT_NE(out.summary.str().find("\"beta\":1.875021"), std::string::npos);
}

TEST(Run, CountingMarksMissingColumns) {
    auto c = make("counting");
    c.m = 2;
    c.N_list = {3};
    c.trials = 2;
    c.samples = 50;
    const auto lines = data_lines(run_experiment(c).csv);
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_NE(lines[1].find(",NA,"), std::string::npos);

    c.m = 1;
    c.samples = 0;
    const auto exact = data_lines(run_experiment(c).csv);
    EXPECT_NE(exact[1].find(",NA,NA,"), std::string::npos);
}

TEST(Run, ThreadCountDoesNotChangeCsv) {
    for (const std::string sub : {"hole-mc", "counting", "deviation", "sphere-avg", "roots"}) {
        auto c = make(sub);
        c.N_list = {6};
        c.r_list = {0.8};
        c.trials = 300;
        c.samples = sub == "counting" ? 0 : 20;
        c.seed = 3;
        c.threads = 1;
        const auto ref = run_experiment(c).csv;
        for (int th : {4, 16}) {
            c.threads = th;
            EXPECT_EQ(run_experiment(c).csv, ref) << sub << " threads=" << th;
        }
    }
}

TEST(Run, InvarianceCheck) {
    auto c = make("invariance-check");
    c.N_list = {10};
    c.zeta_im = 0.3;
    c.trials = 200;
    const auto lines = data_lines(run_experiment(c).csv);
    ASSERT_EQ(lines.size(), 2u);
    std::vector<double> v;
    std::istringstream is(lines[1]);
    std::string f;
    while (std::getline(is, f, ',')) v.push_back(std::stod(f));
    ASSERT_EQ(v.size(), 8u);
    EXPECT_LT(v[4], 1e-10);  // unitarity
    EXPECT_LT(v[5], 1e-8);   // group
    EXPECT_LT(v[6], 1e-8);   // pointwise
}

TEST(Run, SampleDumpIsDeterministic) {
    auto c = make("sample");
    c.N_list = {3};
    c.seed = 1;
    const auto a = run_experiment(c);
    EXPECT_TRUE(a.csv.empty());
    EXPECT_EQ(a.dump, run_experiment(c).dump);
    EXPECT_EQ(a.dump.rfind("1 3 1\n", 0), 0u);
}

TEST(FitReport, SyntheticAndSkippedRows) {
    std::ostringstream os;
    os << "# comment\nN,p\n";
    for (int N : {5, 10, 20, 40}) os << N << "," << fmt17(std::exp(-0.1 * N * N)) << "\n";
    os << "60,0\n";
    std::istringstream in(os.str());
    const auto rep = fit_report(in);
    EXPECT_NEAR(rep.fit.beta, 2.0, 1e-9);
    EXPECT_EQ(rep.fit.points.size(), 4u);
    EXPECT_EQ(rep.warnings.size(), 1u);
    EXPECT_FALSE(rep.m.has_value());
}

TEST(FitReport, Malformed) {
    auto expect_bad = [](const std::string& text) {
        std::istringstream in(text);
        EXPECT_THROW(fit_report(in), ConfigError) << text;
    };
    expect_bad("");
    expect_bad("a,b\n1,2\n");
    expect_bad("N,p\n1,0.5\n2,0.4\n");
    expect_bad("N,p\n1,0.5\n2\n3,0.2\n");
    expect_bad("N,p\n1,0.5\nx,0.4\n3,0.2\n");
}

TEST(FitReport, RoundTripMatchesInProcessFit) {
    auto c = make("fit-exponent");
    c.source = "mc";
    c.N_list = {4, 8, 12};
    c.r_list = {0.3};
    c.trials = 20000;
    c.seed = 42;
    const auto out = run_experiment(c);
    std::istringstream in(out.csv);
    const auto rep = fit_report(in);
    ASSERT_TRUE(rep.m.has_value());
    EXPECT_EQ(*rep.m, 1);

    std::vector<DecayPoint> pts;
    for (int N : c.N_list)
        pts.push_back(DecayPoint::from_probability(N, hole_probability_mc({1, N, 42}, 0.3, 20000).p_hat));
    EXPECT_NEAR(rep.fit.beta, fit_decay_exponent(pts).beta, 1e-12);
    EXPECT_NEAR(rep.fit.log_c, fit_decay_exponent(pts).log_c, 1e-12);

    auto o = make("omega-bound");
    o.N_list = parse_degree_list("20:200:20");
    o.fit = true;
    std::istringstream oin(run_experiment(o).csv);
    EXPECT_NEAR(fit_report(oin).fit.beta, 1.87502198, 1e-6);
}
