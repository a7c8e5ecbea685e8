#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "rqt/sweep.hpp"

using namespace rqt;
using Catch::Approx;

TEST_CASE("sweep output is deterministic") {
  SweepConfig cfg;
  cfg.channel = ChannelKind::GHZ;
  cfg.r_step = 0.1;
  cfg.branch_selection = BranchSelection::AllBranches;
  const std::string a = sweep_csv(sweep(cfg));
  const std::string b = sweep_csv(sweep(cfg));
  CHECK(a == b);
  CHECK(a.substr(0, a.find('\n')) == kSweepCsvHeader);
}

TEST_CASE("zero-acceleration sweep teleports exactly") {
  SweepConfig cfg;
  cfg.channel = ChannelKind::GHZ;
  cfg.r_stop = 0.0;
  const auto records = sweep(cfg);
  REQUIRE_FALSE(records.empty());
  for (const auto& r : records) CHECK(r.fidelity_oracle == Approx(1.0).margin(tol::exact));
}

TEST_CASE("accelerated information lowers the fidelity at a resting channel") {
  SweepConfig cfg;
  cfg.channel = ChannelKind::W;
  cfg.info_kind = InfoKind::Accelerated;
  cfg.r0_values = {0.1, 0.7};
  cfg.r_stop = 0.0;
  const auto records = sweep(cfg);
  REQUIRE(records.size() == 2);
  CHECK(records[0].r0 == Approx(0.1));
  CHECK(records[1].r0 == Approx(0.7));
  CHECK(records[1].fidelity_oracle < records[0].fidelity_oracle);
}

TEST_CASE("all-branch sweeps carry one record per branch and closed forms where tabulated") {
  SweepConfig cfg;
  cfg.channel = ChannelKind::GHZLike;
  cfg.r_stop = 0.0;
  cfg.branch_selection = BranchSelection::AllBranches;
  const auto records = sweep(cfg);
  CHECK(records.size() == 8);
  int with_closed = 0;
  for (const auto& r : records) with_closed += r.fidelity_closed ? 1 : 0;
  CHECK(with_closed == 2);  // phi+ with z0 and z1
}

TEST_CASE("W reference branch matches its closed form across the grid") {
  SweepConfig cfg;
  cfg.channel = ChannelKind::W;
  cfg.r_step = 0.05;
  const auto records = sweep(cfg);
  for (const auto& r : records) {
    REQUIRE(r.fidelity_closed.has_value());
    CHECK(r.fidelity_oracle == Approx(*r.fidelity_closed).margin(tol::chain));
  }
}

TEST_CASE("figure records slice into the six panels") {
  const auto records = figure_records(0.5, 0.2);
  const auto figures = build_figures(records);
  REQUIRE(figures.size() == 6);
  CHECK(figures[0].name == "fig2a");
  CHECK(figures[1].name == "fig2b");
  CHECK(figures[5].name == "fig4b");

  const std::size_t grid_size = SweepConfig{.r_step = 0.2}.r_grid().size();
  // panel (b): exactly three r0 curves
  const std::string& fig2b = figures[1].csv;
  const std::size_t rows = static_cast<std::size_t>(std::count(fig2b.begin(), fig2b.end(), '\n')) - 1;
  CHECK(rows == 3 * grid_size);

  // panel (a) curves start at 1 when everything is at rest
  for (const auto& f : {figures[0], figures[2], figures[4]}) {
    std::istringstream is(f.csv);
    std::string line;
    std::getline(is, line);  // header
    int ones = 0;
    while (std::getline(is, line)) {
      std::istringstream ls(line);
      std::string curve, r0, r, fid;
      std::getline(ls, curve, ',');
      std::getline(ls, r0, ',');
      std::getline(ls, r, ',');
      std::getline(ls, fid, ',');
      if (std::stod(r) == 0.0 && std::stod(r0) == 0.0)
        if (std::abs(std::stod(fid) - 1.0) < 1e-9) ++ones;
    }
    CHECK(ones == 2);  // one inertial curve, one tied curve
  }
}

TEST_CASE("comparison at zero acceleration is a three-way tie") {
  SweepConfig cfg;
  cfg.r_stop = 0.0;
  const ComparisonSummary s = compare_channels(cfg);
  REQUIRE(s.per_channel.size() == 3);
  for (const auto& st : s.per_channel) {
    CHECK(st.min_fidelity == Approx(1.0).margin(tol::exact));
    CHECK(st.wins == 1);
  }
  CHECK(s.ghz_exceptions.empty());
}

TEST_CASE("GHZ dominates the full-grid comparison") {
  SweepConfig cfg;
  cfg.r_step = 0.05;
  const ComparisonSummary s = compare_channels(cfg);
  double ghz_min = 0.0, w_min = 0.0, gl_min = 0.0;
  for (const auto& st : s.per_channel) {
    if (st.kind == ChannelKind::GHZ) ghz_min = st.min_fidelity;
    if (st.kind == ChannelKind::W) w_min = st.min_fidelity;
    if (st.kind == ChannelKind::GHZLike) gl_min = st.min_fidelity;
  }
  CHECK(ghz_min > w_min);
  CHECK(ghz_min > gl_min);
  CHECK(s.ghz_exceptions.empty());
  CHECK(s.monotonicity_violations.empty());
}

TEST_CASE("formula audit confirms the exact expressions and flags the rest") {
  FormulaAuditOptions opt;
  opt.grid_step = 0.26;
  opt.r0_values = {0.0, 0.4};
  opt.alpha_sq_values = {0.5, 0.7};
  const auto audits = audit_formulas(opt);
  REQUIRE(audits.size() == 8);
  for (const auto& f : audits) {
    if (f.name == "w_na" || f.name == "ghzlike_na_z0" || f.name == "ghzlike_na_z1") {
      CHECK(f.confirmed);
    } else if (f.name == "ghz_na") {
      // missing C2^2 factor: worst case alpha^2 beta^2 S1^2 S2^2
      CHECK_FALSE(f.confirmed);
      CHECK(f.max_abs_diff ==
            Approx(0.25 * 0.5 * 0.5).margin(1e-6));  // at alpha^2 = 1/2, r1 = r2 = pi/4
    } else {
      CHECK_FALSE(f.confirmed);
    }
  }
  const std::string csv = formula_audit_csv(audits);
  CHECK(csv.substr(0, csv.find('\n')) == kFormulaAuditCsvHeader);
  CHECK(csv == formula_audit_csv(audit_formulas(opt)));
}

TEST_CASE("element audit csv is byte-stable") {
  const auto grid = audit_grid(0.35);
  std::vector<ElementDiscrepancy> rows;
  for (ChannelKind kind : kAllChannels) {
    auto part = audit_channel(kind, grid, 1e-10);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  const std::string a = element_audit_csv(rows);
  std::vector<ElementDiscrepancy> rows2;
  for (ChannelKind kind : kAllChannels) {
    auto part = audit_channel(kind, grid, 1e-10);
    rows2.insert(rows2.end(), part.begin(), part.end());
  }
  CHECK(a == element_audit_csv(rows2));
  CHECK(a.find("W,7,7") != std::string::npos);
  CHECK(a.find("\nGHZ,") == std::string::npos);  // the GHZ table has no discrepancies
  CHECK(a.find("\nGHZLike,") != std::string::npos);
}

TEST_CASE("full-precision formatting round-trips") {
  for (double x : {1.0 / 3.0, 0.6816419756498732, std::numbers::pi / 4, 1e-17}) {
    CHECK(std::stod(fmt17(x)) == x);
  }
}

TEST_CASE("config validation") {
  SweepConfig bad;
  bad.r_step = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  SweepConfig outside;
  outside.r_stop = 1.0;
  CHECK_THROWS_AS(outside.validate(), std::invalid_argument);
  SweepConfig alpha;
  alpha.alpha_sq = 1.5;
  CHECK_THROWS_AS(alpha.validate(), std::invalid_argument);
}
