#pragma once

// Parameter sweeps, channel comparison and the closed-form audits. This is
// the layer behind the command-line front end: everything here is a pure
// function of its configuration, output ordering is deterministic and two
// runs of the same configuration produce byte-identical files.

#include <algorithm>
#include <array>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rqt/channels.hpp"
#include "rqt/io.hpp"
#include "rqt/protocol.hpp"

namespace rqt {

enum class BranchSelection { Reference, AllBranches, Average };

struct SweepConfig {
  std::optional<ChannelKind> channel;  // nullopt = all three
  InfoKind info_kind = InfoKind::NonAccelerated;
  std::vector<double> r0_values{0.1, 0.4, 0.7};
  bool r0_follows_channel = false;  // accelerated info with r0 = r at every grid point
  double r_start = 0.0;
  double r_stop = std::numbers::pi / 4;
  double r_step = 0.02;
  double alpha_sq = 0.5;
  BranchSelection branch_selection = BranchSelection::Reference;

  void validate() const {
    detail::require(r_step > 0.0, "SweepConfig: step must be positive");
    detail::require(r_start >= 0.0 && r_stop <= std::numbers::pi / 4 + tol::exact &&
                        r_start <= r_stop,
                    "SweepConfig: grid must lie within [0, pi/4]");
    detail::require(alpha_sq >= 0.0 && alpha_sq <= 1.0, "SweepConfig: alpha_sq must be in [0,1]");
    if (info_kind == InfoKind::Accelerated && !r0_follows_channel)
      detail::require(!r0_values.empty(), "SweepConfig: accelerated sweep needs r0 values");
    for (double r0 : r0_values)
      detail::require(r0 >= 0.0 && r0 <= std::numbers::pi / 4 + tol::exact,
                      "SweepConfig: r0 must lie in [0, pi/4]");
  }

  std::vector<double> r_grid() const {
    std::vector<double> g;
    for (double r = r_start; r <= r_stop + tol::exact; r += r_step) g.push_back(r);
    return g;
  }

  std::vector<ChannelKind> channels() const {
    if (channel) return {*channel};
    return {ChannelKind::W, ChannelKind::GHZ, ChannelKind::GHZLike};
  }
};

// One row of the sweep CSV. Aggregated (average) rows leave the branch tags
// empty.
struct SweepRecord {
  ChannelKind channel;
  InfoKind info_kind;
  double r0 = 0.0, r1 = 0.0, r2 = 0.0, r3 = 0.0;
  double alpha_sq = 0.5;
  std::optional<BellOutcome> bell;
  std::optional<CharlieOutcome> charlie;
  double probability = 0.0;
  double fidelity_oracle = 0.0;
  std::optional<double> fidelity_closed;
  bool valid = true;
};

namespace detail {

inline InfoQubit make_info(double alpha_sq, std::optional<double> r0) {
  const double alpha = std::sqrt(alpha_sq);
  const double beta = std::sqrt(1.0 - alpha_sq);
  std::optional<AccelerationParam> acc;
  if (r0) acc = AccelerationParam(*r0);
  return InfoQubit(cplx{alpha, 0.0}, cplx{beta, 0.0}, acc);
}

inline SweepRecord record_from_branch(ChannelKind kind, InfoKind info_kind, double r0, double r,
                                      double alpha_sq, const BranchResult& b) {
  SweepRecord rec;
  rec.channel = kind;
  rec.info_kind = info_kind;
  rec.r0 = r0;
  rec.r1 = rec.r2 = rec.r3 = r;
  rec.alpha_sq = alpha_sq;
  rec.bell = b.bell;
  rec.charlie = b.charlie;
  rec.probability = b.probability;
  rec.fidelity_oracle = b.fidelity_oracle;
  rec.fidelity_closed = b.fidelity_closed;
  rec.valid = b.valid;
  return rec;
}

}  // namespace detail

// Deterministic enumeration over (channel x r0 x r x branch); the common
// channel acceleration r1 = r2 = r3 = r runs along the grid.
inline std::vector<SweepRecord> sweep(const SweepConfig& config) {
  config.validate();
  std::vector<SweepRecord> out;
  const std::vector<double> grid = config.r_grid();

  std::vector<std::optional<double>> r0_list;
  if (config.info_kind == InfoKind::NonAccelerated) {
    r0_list.push_back(std::nullopt);
  } else if (config.r0_follows_channel) {
    r0_list.push_back(-1.0);  // sentinel: replaced by r below
  } else {
    std::vector<double> sorted = config.r0_values;
    std::sort(sorted.begin(), sorted.end());
    for (double r0 : sorted) r0_list.push_back(r0);
  }

  for (ChannelKind kind : config.channels()) {
    for (const auto& r0_opt : r0_list) {
      for (double r : grid) {
        std::optional<double> r0 = r0_opt;
        if (r0 && *r0 < 0.0) r0 = r;  // tied to the channel acceleration
        const InfoQubit info = detail::make_info(config.alpha_sq, r0);
        const ChannelRealization chan =
            ChannelRealization::make(kind, RegisterAcceleration::uniform(3, AccelerationParam(r)));
        const double r0_col = r0 ? *r0 : 0.0;

        switch (config.branch_selection) {
          case BranchSelection::Reference: {
            const auto [b, c] = reference_branch(kind);
            out.push_back(detail::record_from_branch(kind, config.info_kind, r0_col, r,
                                                     config.alpha_sq,
                                                     run_branch(chan, info, b, c, true)));
            break;
          }
          case BranchSelection::AllBranches: {
            for (const BranchResult& b : enumerate_branches(chan, info, true))
              out.push_back(detail::record_from_branch(kind, config.info_kind, r0_col, r,
                                                       config.alpha_sq, b));
            break;
          }
          case BranchSelection::Average: {
            const AverageFidelity avg = average_fidelity(chan, info, true);
            SweepRecord rec;
            rec.channel = kind;
            rec.info_kind = config.info_kind;
            rec.r0 = r0_col;
            rec.r1 = rec.r2 = rec.r3 = r;
            rec.alpha_sq = config.alpha_sq;
            rec.probability = avg.valid_probability;
            rec.fidelity_oracle = avg.average;
            rec.valid = true;
            out.push_back(rec);
            break;
          }
        }
      }
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const SweepRecord& a, const SweepRecord& b) {
    if (a.channel != b.channel) return a.channel < b.channel;
    if (a.info_kind != b.info_kind) return a.info_kind < b.info_kind;
    if (a.r0 != b.r0) return a.r0 < b.r0;
    if (a.r1 != b.r1) return a.r1 < b.r1;
    if (a.bell != b.bell) return a.bell < b.bell;
    return a.charlie < b.charlie;
  });
  return out;
}

inline constexpr const char* kSweepCsvHeader =
    "channel,info_kind,r0,r1,r2,r3,alpha_sq,bell,charlie,probability,fidelity_oracle,"
    "fidelity_closed,valid";

inline std::string sweep_csv(const std::vector<SweepRecord>& records) {
  std::string s = kSweepCsvHeader;
  s += '\n';
  for (const SweepRecord& r : records) {
    s += channel_name(r.channel);
    s += ',';
    s += info_kind_name(r.info_kind);
    s += ',';
    s += fmt17(r.r0) + ',' + fmt17(r.r1) + ',' + fmt17(r.r2) + ',' + fmt17(r.r3) + ',' +
         fmt17(r.alpha_sq) + ',';
    s += r.bell ? bell_name(*r.bell) : "average";
    s += ',';
    s += r.charlie ? charlie_name(*r.charlie) : "average";
    s += ',';
    s += fmt17(r.probability) + ',' + fmt17(r.fidelity_oracle) + ',';
    if (r.fidelity_closed) s += fmt17(*r.fidelity_closed);
    s += ',';
    s += r.valid ? "true" : "false";
    s += '\n';
  }
  return s;
}

inline constexpr const char* kElementAuditCsvHeader =
    "kind,row,col,r1,r2,r3,closed_re,closed_im,oracle_re,oracle_im,abs_diff";

inline std::string element_audit_csv(const std::vector<ElementDiscrepancy>& rows) {
  std::string s = kElementAuditCsvHeader;
  s += '\n';
  for (const ElementDiscrepancy& d : rows) {
    s += channel_name(d.kind);
    s += ',' + std::to_string(d.row) + ',' + std::to_string(d.col) + ',';
    s += fmt17(d.r[0]) + ',' + fmt17(d.r[1]) + ',' + fmt17(d.r[2]) + ',';
    s += fmt17(d.closed_value.real()) + ',' + fmt17(d.closed_value.imag()) + ',';
    s += fmt17(d.oracle_value.real()) + ',' + fmt17(d.oracle_value.imag()) + ',';
    s += fmt17(d.abs_diff);
    s += '\n';
  }
  return s;
}

// The audit grid used by the element and formula audits: {0, step, 2 step,
// ..., <= pi/4} with pi/4 appended when the stepped grid stops short of it.
inline std::vector<double> audit_axis(double step) {
  detail::require(step > 0.0, "audit_axis: step must be positive");
  std::vector<double> v;
  for (double r = 0.0; r <= std::numbers::pi / 4 + tol::exact; r += step) v.push_back(r);
  if (v.back() < std::numbers::pi / 4 - tol::exact) v.push_back(std::numbers::pi / 4);
  return v;
}

inline std::vector<std::array<double, 3>> audit_grid(double step) {
  const std::vector<double> axis = audit_axis(step);
  std::vector<std::array<double, 3>> grid;
  for (double a : axis)
    for (double b : axis)
      for (double c : axis) grid.push_back({a, b, c});
  return grid;
}

// ---------------------------------------------------------------------------
// Closed-form fidelity audit: for every branch with a tabulated polynomial,
// the maximum |closed - oracle| over a deterministic grid, with the
// worst-case point. Formulas within tolerance everywhere are CONFIRMED.

struct FormulaAudit {
  std::string name;
  ChannelKind kind;
  InfoKind info_kind;
  BellOutcome bell;
  CharlieOutcome charlie;
  double max_abs_diff = 0.0;
  double worst_r0 = 0.0;
  std::array<double, 3> worst_r{};
  double worst_alpha_sq = 0.0;
  bool confirmed = false;
};

struct FormulaAuditOptions {
  double grid_step = 0.2;
  std::vector<double> r0_values{0.0, 0.3, 0.6};
  std::vector<double> alpha_sq_values{0.3, 0.5, 0.7};
  double tolerance = 1e-10;
};

inline std::vector<FormulaAudit> audit_formulas(const FormulaAuditOptions& opt = {}) {
  struct Entry {
    const char* name;
    ChannelKind kind;
    InfoKind info;
    BellOutcome bell;
    CharlieOutcome charlie;
  };
  static const Entry entries[] = {
      {"w_na", ChannelKind::W, InfoKind::NonAccelerated, BellOutcome::PsiPlus, CharlieOutcome::Z0},
      {"w_ac", ChannelKind::W, InfoKind::Accelerated, BellOutcome::PhiPlus, CharlieOutcome::Z0},
      {"ghz_na", ChannelKind::GHZ, InfoKind::NonAccelerated, BellOutcome::PsiPlus,
       CharlieOutcome::XPlus},
      {"ghz_ac", ChannelKind::GHZ, InfoKind::Accelerated, BellOutcome::PsiPlus,
       CharlieOutcome::XPlus},
      {"ghzlike_na_z0", ChannelKind::GHZLike, InfoKind::NonAccelerated, BellOutcome::PhiPlus,
       CharlieOutcome::Z0},
      {"ghzlike_na_z1", ChannelKind::GHZLike, InfoKind::NonAccelerated, BellOutcome::PhiPlus,
       CharlieOutcome::Z1},
      {"ghzlike_ac_z0", ChannelKind::GHZLike, InfoKind::Accelerated, BellOutcome::PhiPlus,
       CharlieOutcome::Z0},
      {"ghzlike_ac_z1", ChannelKind::GHZLike, InfoKind::Accelerated, BellOutcome::PhiPlus,
       CharlieOutcome::Z1},
  };

  const std::vector<std::array<double, 3>> grid = audit_grid(opt.grid_step);
  std::vector<FormulaAudit> out;
  for (const Entry& e : entries) {
    FormulaAudit fa;
    fa.name = e.name;
    fa.kind = e.kind;
    fa.info_kind = e.info;
    fa.bell = e.bell;
    fa.charlie = e.charlie;

    const std::vector<double> r0s =
        (e.info == InfoKind::Accelerated) ? opt.r0_values : std::vector<double>{0.0};
    for (double a2 : opt.alpha_sq_values) {
      for (double r0 : r0s) {
        std::optional<double> r0_opt;
        if (e.info == InfoKind::Accelerated) r0_opt = r0;
        const InfoQubit info = detail::make_info(a2, r0_opt);
        for (const auto& r : grid) {
          const ChannelRealization chan = ChannelRealization::make(
              e.kind, RegisterAcceleration(
                          {AccelerationParam(r[0]), AccelerationParam(r[1]),
                           AccelerationParam(r[2])}));
          const BranchResult b = run_branch(chan, info, e.bell, e.charlie, true);
          if (!b.fidelity_closed) continue;
          const double d = std::abs(*b.fidelity_closed - b.fidelity_oracle);
          if (d > fa.max_abs_diff) {
            fa.max_abs_diff = d;
            fa.worst_r0 = r0;
            fa.worst_r = r;
            fa.worst_alpha_sq = a2;
          }
        }
      }
    }
    fa.confirmed = fa.max_abs_diff <= opt.tolerance;
    out.push_back(std::move(fa));
  }
  return out;
}

inline constexpr const char* kFormulaAuditCsvHeader =
    "formula,channel,info_kind,bell,charlie,max_abs_diff,worst_r0,worst_r1,worst_r2,worst_r3,"
    "worst_alpha_sq,confirmed";

inline std::string formula_audit_csv(const std::vector<FormulaAudit>& rows) {
  std::string s = kFormulaAuditCsvHeader;
  s += '\n';
  for (const FormulaAudit& f : rows) {
    s += f.name;
    s += ',';
    s += channel_name(f.kind);
    s += ',';
    s += info_kind_name(f.info_kind);
    s += ',';
    s += bell_name(f.bell);
    s += ',';
    s += charlie_name(f.charlie);
    s += ',';
    s += fmt17(f.max_abs_diff) + ',' + fmt17(f.worst_r0) + ',' + fmt17(f.worst_r[0]) + ',' +
         fmt17(f.worst_r[1]) + ',' + fmt17(f.worst_r[2]) + ',' + fmt17(f.worst_alpha_sq) + ',';
    s += f.confirmed ? "CONFIRMED" : "DISCREPANT";
    s += '\n';
  }
  return s;
}

// ---------------------------------------------------------------------------
// Channel comparison.

struct ChannelStats {
  ChannelKind kind;
  double min_fidelity = 1.0;
  double mean_fidelity = 0.0;
  int wins = 0;  // grid points where this channel attains the maximum
};

struct ComparisonException {
  double r = 0.0;
  ChannelKind better;
  double ghz_fidelity = 0.0;
  double better_fidelity = 0.0;
};

struct MonotonicityViolation {
  ChannelKind kind;
  double r_prev = 0.0, r = 0.0;
  double increase = 0.0;
};

struct ComparisonSummary {
  std::vector<double> grid;
  std::vector<ChannelStats> per_channel;
  std::vector<ComparisonException> ghz_exceptions;  // points where GHZ is not on top
  std::vector<MonotonicityViolation> monotonicity_violations;
};

// Oracle fidelity of each channel's reference branch over the grid; closed
// forms are audit subjects, not inputs to the comparison.
inline ComparisonSummary compare_channels(const SweepConfig& config) {
  SweepConfig cfg = config;
  cfg.channel.reset();
  cfg.branch_selection = BranchSelection::Reference;
  cfg.validate();

  const std::vector<double> grid = cfg.r_grid();
  std::optional<double> r0;
  if (cfg.info_kind == InfoKind::Accelerated) r0 = cfg.r0_values.empty() ? 0.0 : cfg.r0_values.front();

  std::map<ChannelKind, std::vector<double>> fid;
  for (ChannelKind kind : cfg.channels()) {
    const auto [b, c] = reference_branch(kind);
    const InfoQubit info = detail::make_info(cfg.alpha_sq, r0);
    std::vector<double> vals;
    for (double r : grid) {
      const ChannelRealization chan =
          ChannelRealization::make(kind, RegisterAcceleration::uniform(3, AccelerationParam(r)));
      vals.push_back(run_branch(chan, info, b, c, true).fidelity_oracle);
    }
    fid[kind] = std::move(vals);
  }

  ComparisonSummary out;
  out.grid = grid;
  for (ChannelKind kind : cfg.channels()) {
    ChannelStats st;
    st.kind = kind;
    const auto& v = fid[kind];
    for (double f : v) {
      st.min_fidelity = std::min(st.min_fidelity, f);
      st.mean_fidelity += f;
    }
    st.mean_fidelity /= static_cast<double>(v.size());
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] > v[i - 1] + 1e-9)
        out.monotonicity_violations.push_back({kind, grid[i - 1], grid[i], v[i] - v[i - 1]});
    out.per_channel.push_back(st);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double best = -1.0;
    for (ChannelKind kind : cfg.channels()) best = std::max(best, fid[kind][i]);
    for (auto& st : out.per_channel)
      if (fid[st.kind][i] >= best - tol::exact) ++st.wins;
    const double ghz = fid[ChannelKind::GHZ][i];
    for (ChannelKind kind : {ChannelKind::W, ChannelKind::GHZLike}) {
      if (fid[kind][i] > ghz + tol::exact)
        out.ghz_exceptions.push_back({grid[i], kind, ghz, fid[kind][i]});
    }
  }
  return out;
}

inline std::string comparison_csv(const ComparisonSummary& s) {
  std::string out = "channel,min_fidelity,mean_fidelity,wins,grid_points\n";
  for (const ChannelStats& st : s.per_channel) {
    out += channel_name(st.kind);
    out += ',' + fmt17(st.min_fidelity) + ',' + fmt17(st.mean_fidelity) + ',' +
           std::to_string(st.wins) + ',' + std::to_string(s.grid.size()) + '\n';
  }
  return out;
}

inline std::string comparison_text(const ComparisonSummary& s) {
  std::ostringstream os;
  os << "channel comparison over " << s.grid.size() << " grid points (reference branches)\n";
  for (const ChannelStats& st : s.per_channel)
    os << "  " << channel_name(st.kind) << ": min=" << st.min_fidelity
       << " mean=" << st.mean_fidelity << " wins=" << st.wins << "\n";
  if (s.ghz_exceptions.empty()) {
    os << "  GHZ attains the pointwise maximum everywhere on the grid\n";
  } else {
    os << "  points where GHZ is not on top:\n";
    for (const auto& e : s.ghz_exceptions)
      os << "    r=" << e.r << " " << channel_name(e.better) << "=" << e.better_fidelity
         << " vs GHZ=" << e.ghz_fidelity << "\n";
  }
  for (const auto& m : s.monotonicity_violations)
    os << "  monotonicity violation: " << channel_name(m.kind) << " between r=" << m.r_prev
       << " and r=" << m.r << " (+" << m.increase << ")\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Figure emission. The standard record set holds, per channel, the inertial
// curve, the information-accelerated curve tied to r0 = r, and the three
// fixed-r0 curves; emit_figures slices it into one CSV (and optional SVG)
// per figure panel.

inline std::vector<SweepRecord> figure_records(double alpha_sq, double r_step = 0.02,
                                               double r_stop = std::numbers::pi / 4) {
  std::vector<SweepRecord> all;
  SweepConfig base;
  base.alpha_sq = alpha_sq;
  base.r_step = r_step;
  base.r_stop = r_stop;
  base.branch_selection = BranchSelection::Reference;

  SweepConfig na = base;
  na.info_kind = InfoKind::NonAccelerated;
  SweepConfig tied = base;
  tied.info_kind = InfoKind::Accelerated;
  tied.r0_follows_channel = true;
  SweepConfig fixed = base;
  fixed.info_kind = InfoKind::Accelerated;

  for (const SweepConfig* cfg : {&na, &tied, &fixed}) {
    std::vector<SweepRecord> part = sweep(*cfg);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

struct FigureFile {
  std::string name;
  std::string csv;
  std::string svg;
};

inline std::vector<FigureFile> build_figures(const std::vector<SweepRecord>& records) {
  auto curve_csv = [](const std::vector<const SweepRecord*>& rows) {
    std::string s = "curve,r0,r,fidelity_oracle,fidelity_closed\n";
    for (const SweepRecord* r : rows) {
      s += (r->info_kind == InfoKind::NonAccelerated ? "non_accelerated" : "accelerated");
      s += ',' + fmt17(r->r0) + ',' + fmt17(r->r1) + ',' + fmt17(r->fidelity_oracle) + ',';
      if (r->fidelity_closed) s += fmt17(*r->fidelity_closed);
      s += '\n';
    }
    return s;
  };

  std::vector<FigureFile> files;
  const struct {
    ChannelKind kind;
    const char* panel_a;
    const char* panel_b;
  } figs[] = {{ChannelKind::W, "fig2a", "fig2b"},
              {ChannelKind::GHZ, "fig3a", "fig3b"},
              {ChannelKind::GHZLike, "fig4a", "fig4b"}};

  for (const auto& f : figs) {
    // deduplicate by grid point; a record may belong to both the tied curve
    // and a fixed-r0 curve where they cross (identical values either way)
    std::map<double, const SweepRecord*> na_rows, tied_rows;
    std::map<double, std::map<double, const SweepRecord*>> by_r0;
    for (const SweepRecord& r : records) {
      if (r.channel != f.kind) continue;
      if (r.info_kind == InfoKind::NonAccelerated) {
        na_rows.emplace(r.r1, &r);
      } else {
        if (r.r0 == r.r1) tied_rows.emplace(r.r1, &r);
        by_r0[r.r0].emplace(r.r1, &r);
      }
    }

    // panel (a): inertial curve vs accelerated information tied to r0 = r
    std::vector<const SweepRecord*> a_rows;
    Curve cn{"non-accelerated", {}}, ca{"accelerated (r0 = r)", {}};
    for (const auto& [r, rec] : na_rows) {
      a_rows.push_back(rec);
      cn.points.push_back({r, rec->fidelity_oracle});
    }
    for (const auto& [r, rec] : tied_rows) {
      a_rows.push_back(rec);
      ca.points.push_back({r, rec->fidelity_oracle});
    }

    FigureFile fa;
    fa.name = f.panel_a;
    fa.csv = curve_csv(a_rows);
    fa.svg = svg_plot(std::string(channel_name(f.kind)) + " channel, reference branch", {cn, ca},
                      0.0, std::numbers::pi / 4);
    files.push_back(std::move(fa));

    // panel (b): one curve per fixed r0 value; groups with a single grid
    // point are the tied curve's footprint, not fixed-r0 curves
    std::vector<const SweepRecord*> b_rows;
    std::vector<Curve> curves;
    for (const auto& [r0, group] : by_r0) {
      if (group.size() < 2) continue;
      Curve c{"r0 = " + fmt17(r0).substr(0, 4), {}};
      for (const auto& [r, rec] : group) {
        b_rows.push_back(rec);
        c.points.push_back({r, rec->fidelity_oracle});
      }
      curves.push_back(std::move(c));
    }

    FigureFile fb;
    fb.name = f.panel_b;
    fb.csv = curve_csv(b_rows);
    fb.svg = svg_plot(std::string(channel_name(f.kind)) + " channel, accelerated information",
                      curves, 0.0, std::numbers::pi / 4);
    files.push_back(std::move(fb));
  }
  return files;
}

// Writes one CSV per figure panel into `dir` (and SVG renderings when
// `with_svg` is set); returns the written paths.
inline std::vector<std::string> emit_figures(const std::vector<SweepRecord>& records,
                                             const std::filesystem::path& dir, bool with_svg) {
  std::vector<std::string> written;
  for (const FigureFile& f : build_figures(records)) {
    const auto csv_path = dir / (f.name + ".csv");
    write_file(csv_path, f.csv);
    written.push_back(csv_path.string());
    if (with_svg) {
      const auto svg_path = dir / (f.name + ".svg");
      write_file(svg_path, f.svg);
      written.push_back(svg_path.string());
    }
  }
  return written;
}

}  // namespace rqt
