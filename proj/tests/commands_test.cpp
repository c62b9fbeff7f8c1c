#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace novikov;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

class Commands : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("novikov_cmd_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path out(const std::string& name = "out") const { return root_ / name; }

  static std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::ifstream is(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(is, line)) {
      std::vector<std::string> cells;
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      if (!line.empty() && line.back() == ',') cells.emplace_back();
      rows.push_back(cells);
    }
    return rows;
  }

  std::vector<fs::path> entries() const {
    std::vector<fs::path> all;
    for (const auto& e : fs::recursive_directory_iterator(root_)) all.push_back(e.path());
    return all;
  }

  fs::path root_;
};

}  // namespace

TEST_F(Commands, SimulateZeroDataGivesZeroNorms) {
  const RunConfig cfg = parse_config("initial = gaussian-potentials\namplitude = 0\npoints = 256\nfinal-time = 0.1\n");
  std::ostringstream err;
  ASSERT_EQ(cli::cmd_simulate(cfg, out(), err), cli::kSuccess) << err.str();
  const auto rows = read_csv(out() / "diagnostics.csv");
  ASSERT_GE(rows.size(), 3u);
  EXPECT_EQ(rows[0].size(), 15u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (std::size_t c = 1; c < 14; ++c) EXPECT_EQ(std::stod(rows[i][c]), 0.0) << "row " << i << " col " << c;
    EXPECT_EQ(rows[i][14], "");
  }
  EXPECT_TRUE(fs::exists(out() / "config.txt"));
  EXPECT_TRUE(fs::exists(out() / "snapshots" / "snapshot_000000.csv"));
}

TEST_F(Commands, SimulateDefaultMollifiedPeakonConservesEnergy) {
  const RunConfig cfg = parse_config("");
  std::ostringstream err;
  ASSERT_EQ(cli::cmd_simulate(cfg, out(), err), cli::kSuccess) << err.str();
  const auto rows = read_csv(out() / "diagnostics.csv");
  const double e0 = std::stod(rows[1][1]);
  double drift = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) drift = std::max(drift, std::abs(std::stod(rows[i][1]) - e0) / e0);
  EXPECT_LE(drift, 1e-6);
  // Snapshot count: t = 0 plus every record_every steps.
  std::size_t snapshots = 0;
  for (const auto& e : fs::directory_iterator(out() / "snapshots")) snapshots += e.is_regular_file();
  EXPECT_EQ(snapshots, rows.size() - 1);
}

TEST_F(Commands, SimulateBlowUpKeepsPartialOutput) {
  const RunConfig cfg = parse_config(
      "initial = gaussian-potentials\namplitude = 50\npoints = 256\ndt = 2\nfinal-time = 20\nrecord-every = 1\n");
  std::ostringstream err;
  EXPECT_EQ(cli::cmd_simulate(cfg, out(), err), cli::kBlowUp);
  EXPECT_NE(err.str().find("kind=blow-up"), std::string::npos);
  EXPECT_GE(read_csv(out() / "diagnostics.csv").size(), 2u);
}

TEST_F(Commands, ErrorsBeforeOutputWriteNothing) {
  std::ostringstream err;
  const RunConfig missing = parse_config("initial = from-file\ninput-file = " + (root_ / "absent.csv").string() + "\n");
  EXPECT_EQ(cli::cmd_simulate(missing, out(), err), cli::kConfigError);
  EXPECT_FALSE(fs::exists(out()));
  const std::string text = err.str();
  EXPECT_NE(text.find("kind=config"), std::string::npos);
  // One machine-readable line per diagnostic.
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
}

TEST_F(Commands, FromFileRestartsFromSnapshot) {
  const RunConfig first = parse_config("points = 256\nmollifier-n = 4\nfinal-time = 0.05\nrecord-every = 50\n");
  std::ostringstream err;
  ASSERT_EQ(cli::cmd_simulate(first, out("a"), err), cli::kSuccess);
  const fs::path snap = out("a") / "snapshots" / "snapshot_000001.csv";
  ASSERT_TRUE(fs::exists(snap));
  const RunConfig second =
      parse_config("points = 256\nfinal-time = 0\ninitial = from-file\ninput-file = " + snap.string() + "\n");
  ASSERT_EQ(cli::cmd_simulate(second, out("b"), err), cli::kSuccess) << err.str();
  std::ifstream a(snap), b(out("b") / "snapshots" / "snapshot_000000.csv");
  std::string la, lb;
  // Data rows agree; only the time header differs.
  std::getline(a, la);
  std::getline(b, lb);
  std::getline(a, la);
  std::getline(b, lb);
  std::stringstream ra, rb;
  ra << a.rdbuf();
  rb << b.rdbuf();
  EXPECT_EQ(ra.str(), rb.str());
}

TEST_F(Commands, PeakonValidateZeroDuration) {
  const RunConfig cfg = parse_config("final-time = 0\ninitial = peakon\npoints = 512\n");
  std::ostringstream err;
  EXPECT_EQ(cli::cmd_peakon_validate(cfg, out(), err), cli::kSuccess);
  const auto rows = read_csv(out() / "peakon_error.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(std::stod(rows[1][1]), 0.0);
  EXPECT_EQ(std::stod(rows[1][2]), 0.0);
}

TEST_F(Commands, RawPeakonWarnsAndRuns) {
  const RunConfig cfg = parse_config("final-time = 0.1\ninitial = peakon\npoints = 1024\ntolerance = 0.5\n");
  std::ostringstream err;
  EXPECT_EQ(cli::cmd_peakon_validate(cfg, out(), err), cli::kSuccess);
  EXPECT_NE(err.str().find("warning kind=point-mass-potential"), std::string::npos);
  EXPECT_TRUE(fs::exists(out() / "peakon_error.csv"));
}

TEST_F(Commands, PeakonValidateToleranceFailureStillWritesCsv) {
  const RunConfig cfg = parse_config("final-time = 0.2\npoints = 256\nmollifier-n = 4\ntolerance = 1e-9\n");
  std::ostringstream err;
  EXPECT_EQ(cli::cmd_peakon_validate(cfg, out(), err), cli::kPropertyFailure);
  EXPECT_TRUE(fs::exists(out() / "peakon_error.csv"));
  const RunConfig wrong = parse_config("initial = gaussian-potentials\npoints = 256\n");
  EXPECT_EQ(cli::cmd_peakon_validate(wrong, out("x"), err), cli::kConfigError);
  EXPECT_FALSE(fs::exists(out("x")));
}

TEST_F(Commands, WeakCheckZeroTrajectory) {
  const RunConfig cfg = parse_config("initial = gaussian-potentials\namplitude = 0\npoints = 256\n");
  std::ostringstream err;
  ASSERT_EQ(cli::cmd_weak_check(cfg, out(), err), cli::kSuccess) << err.str();
  const auto rows = read_csv(out() / "residuals.csv");
  ASSERT_EQ(rows.size(), 10u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(std::stod(rows[i][4]), 0.0);
    EXPECT_EQ(std::stod(rows[i][5]), 0.0);
  }
}

TEST_F(Commands, WeakCheckRejectsSupportOutsideInterior) {
  const RunConfig cfg = parse_config("final-time = 0.3\npoints = 256\nmollifier-n = 4\nphi-st = 0.2\n");
  std::ostringstream err;
  EXPECT_EQ(cli::cmd_weak_check(cfg, out(), err), cli::kConfigError);
  EXPECT_FALSE(fs::exists(out()));
}

TEST_F(Commands, WeakCheckExactPeakonAndRandomSweep) {
  const RunConfig cfg =
      parse_config("initial = periodic-peakon\nweak-source = exact\npoints = 512\nphi-random = 5\nseed = 3\nweak-bound = 1\n");
  std::ostringstream err;
  EXPECT_EQ(cli::cmd_weak_check(cfg, out("a"), err), cli::kSuccess) << err.str();
  EXPECT_EQ(read_csv(out("a") / "residuals.csv").size(), 1u + 9u + 5u);
  // The seed fixes the random centres.
  EXPECT_EQ(cli::cmd_weak_check(cfg, out("b"), err), cli::kSuccess);
  std::ifstream a(out("a") / "residuals.csv"), b(out("b") / "residuals.csv");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  EXPECT_EQ(sa.str(), sb.str());
}

TEST_F(Commands, MollifyStudySingleton) {
  const RunConfig cfg = parse_config("initial = peakon\npoints = 512\nks = 4\nfinal-time = 0.2\n");
  std::ostringstream err;
  EXPECT_EQ(cli::cmd_mollify_study(cfg, out(), err), cli::kSuccess) << err.str();
  const auto rows = read_csv(out() / "convergence.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "4");
  EXPECT_EQ(rows[1][1], "nan");
}

TEST_F(Commands, MollifyStudyRejectsUnresolvedK) {
  const RunConfig cfg = parse_config("initial = peakon\npoints = 512\nks = 4, 64\n");
  std::ostringstream err;
  EXPECT_EQ(cli::cmd_mollify_study(cfg, out(), err), cli::kConfigError);
  EXPECT_FALSE(fs::exists(out()));
}

TEST_F(Commands, DependWritesTable) {
  const RunConfig cfg = parse_config("initial = gaussian-potentials\npoints = 512\nfinal-time = 0.5\n");
  std::ostringstream err;
  EXPECT_EQ(cli::cmd_depend(cfg, out(), err), cli::kSuccess) << err.str();
  const auto rows = read_csv(out() / "dependence.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"delta", "A0", "AT", "ratio", "c_hat", "envelope", "blew_up"}));
}

TEST_F(Commands, ZeroDeltaIsAConfigError) {
  EXPECT_THROW(parse_config("deltas = 0.01, 0"), ConfigError);
}

TEST_F(Commands, RerunFromEchoedConfigIsByteIdentical) {
  const RunConfig cfg = parse_config("points = 256\nmollifier-n = 4\nfinal-time = 0.3\nrecord-every = 30\n");
  std::ostringstream err;
  ASSERT_EQ(cli::cmd_simulate(cfg, out("a"), err), cli::kSuccess);
  std::ifstream echoed(out("a") / "config.txt");
  std::stringstream text;
  text << echoed.rdbuf();
  ASSERT_EQ(cli::cmd_simulate(parse_config(text.str()), out("b"), err), cli::kSuccess);
  for (const auto& e : fs::recursive_directory_iterator(out("a"))) {
    if (!e.is_regular_file()) continue;
    const fs::path twin = out("b") / fs::relative(e.path(), out("a"));
    std::ifstream a(e.path(), std::ios::binary), b(twin, std::ios::binary);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    EXPECT_EQ(sa.str(), sb.str()) << e.path();
  }
}

TEST_F(Commands, WritesOnlyInsideOutputDirectory) {
  const RunConfig cfg = parse_config("points = 256\nmollifier-n = 4\nfinal-time = 0.05\n");
  std::ostringstream err;
  ASSERT_EQ(cli::cmd_simulate(cfg, out(), err), cli::kSuccess);
  for (const auto& p : entries()) {
    const auto rel = fs::relative(p, out());
    EXPECT_FALSE(rel.empty() || *rel.begin() == "..") << p;
  }
}
