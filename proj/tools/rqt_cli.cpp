// Command-line front end: channel matrices, single teleportation runs,
// figure sweeps, closed-form audits and the channel comparison report.
//
// Exit codes: 0 success, 1 invalid configuration, 2 I/O failure,
// 3 internal invariant violation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rqt/channels.hpp"
#include "rqt/io.hpp"
#include "rqt/protocol.hpp"
#include "rqt/sweep.hpp"

namespace {

using namespace rqt;

// Flat key=value configuration file mirroring the subcommand's flags;
// values given on the command line win over the file.
void apply_flat_config(CLI::App* cmd, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file not readable: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + " has no '='");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    CLI::Option* opt = nullptr;
    try {
      opt = cmd->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw std::invalid_argument("unknown config key: " + key);
    }
    if (opt->count() > 0) continue;  // command line overrides the file
    std::stringstream vs(value);
    std::string token;
    while (std::getline(vs, token, ',')) opt->add_result(token);
    opt->run_callback();
  }
}

ChannelKind parse_channel(const std::string& s) {
  if (s == "W" || s == "w") return ChannelKind::W;
  if (s == "GHZ" || s == "ghz") return ChannelKind::GHZ;
  if (s == "GHZLike" || s == "ghzlike" || s == "ghz-like") return ChannelKind::GHZLike;
  throw CLI::ValidationError("--channel", "expected W, GHZ or GHZLike");
}

BellOutcome parse_bell(const std::string& s) {
  if (s == "psi_plus") return BellOutcome::PsiPlus;
  if (s == "psi_minus") return BellOutcome::PsiMinus;
  if (s == "phi_plus") return BellOutcome::PhiPlus;
  if (s == "phi_minus") return BellOutcome::PhiMinus;
  throw CLI::ValidationError("--bell", "expected psi_plus, psi_minus, phi_plus or phi_minus");
}

CharlieOutcome parse_charlie(const std::string& s) {
  if (s == "z0") return CharlieOutcome::Z0;
  if (s == "z1") return CharlieOutcome::Z1;
  if (s == "x_plus") return CharlieOutcome::XPlus;
  if (s == "x_minus") return CharlieOutcome::XMinus;
  throw CLI::ValidationError("--charlie", "expected z0, z1, x_plus or x_minus");
}

void print_matrix(const DensityOperator& rho) {
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    for (std::size_t j = 0; j < rho.dim(); ++j) {
      const cplx z = rho.entry(i, j);
      std::cout << (j ? "," : "") << '(' << fmt17(z.real()) << ',' << fmt17(z.imag()) << ')';
    }
    std::cout << '\n';
  }
}

struct SweepFlags {
  std::string channel = "all";
  std::string info = "non_accelerated";
  std::vector<double> r0_values{0.1, 0.4, 0.7};
  bool r0_follows = false;
  double r_start = 0.0;
  double r_stop = std::numbers::pi / 4;
  double r_step = 0.02;
  double alpha_sq = 0.5;
  std::string branch = "reference";

  void add_to(CLI::App* cmd, bool with_branch = true) {
    cmd->add_option("--channel", channel, "W, GHZ, GHZLike or all")->capture_default_str();
    cmd->add_option("--info", info, "non_accelerated or accelerated")->capture_default_str();
    cmd->add_option("--r0", r0_values, "information acceleration values (accelerated sweeps)")
        ->capture_default_str();
    cmd->add_flag("--r0-follows-r", r0_follows, "tie the information acceleration to r");
    cmd->add_option("--r-start", r_start, "grid start")->capture_default_str();
    cmd->add_option("--r-stop", r_stop, "grid stop (clamped at pi/4)")->capture_default_str();
    cmd->add_option("--r-step", r_step, "grid step")->capture_default_str();
    cmd->add_option("--alpha-sq", alpha_sq, "|alpha|^2 of the information state")
        ->capture_default_str();
    if (with_branch)
      cmd->add_option("--branch", branch, "reference, all_branches or average")
          ->capture_default_str();
  }

  SweepConfig to_config() const {
    SweepConfig cfg;
    if (channel != "all") cfg.channel = parse_channel(channel);
    if (info == "accelerated") cfg.info_kind = InfoKind::Accelerated;
    else if (info != "non_accelerated")
      throw CLI::ValidationError("--info", "expected non_accelerated or accelerated");
    cfg.r0_values = r0_values;
    cfg.r0_follows_channel = r0_follows;
    cfg.r_start = r_start;
    cfg.r_stop = r_stop;
    cfg.r_step = r_step;
    cfg.alpha_sq = alpha_sq;
    if (branch == "reference") cfg.branch_selection = BranchSelection::Reference;
    else if (branch == "all_branches") cfg.branch_selection = BranchSelection::AllBranches;
    else if (branch == "average") cfg.branch_selection = BranchSelection::Average;
    else throw CLI::ValidationError("--branch", "expected reference, all_branches or average");
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"teleportation through accelerated tripartite channels"};
  app.require_subcommand(1);

  // state
  auto* state = app.add_subcommand("state", "print a channel density matrix");
  std::string st_channel = "GHZ", st_form = "oracle";
  double st_r1 = 0.0, st_r2 = 0.0, st_r3 = 0.0;
  state->add_option("--channel", st_channel)->capture_default_str();
  state->add_option("--r1", st_r1)->capture_default_str();
  state->add_option("--r2", st_r2)->capture_default_str();
  state->add_option("--r3", st_r3)->capture_default_str();
  state->add_option("--form", st_form, "oracle or closed")->capture_default_str();

  // teleport
  auto* teleport = app.add_subcommand("teleport", "run a single measurement branch");
  std::string tp_channel = "GHZ", tp_bell = "psi_plus", tp_charlie = "x_plus";
  double tp_alpha_sq = 0.5, tp_r = 0.0;
  double tp_r0 = -1.0;
  teleport->add_option("--channel", tp_channel)->capture_default_str();
  teleport->add_option("--alpha-sq", tp_alpha_sq)->capture_default_str();
  teleport->add_option("--r0", tp_r0, "information acceleration; omit for inertial information");
  teleport->add_option("--r", tp_r, "common channel acceleration r1 = r2 = r3")
      ->capture_default_str();
  teleport->add_option("--bell", tp_bell)->capture_default_str();
  teleport->add_option("--charlie", tp_charlie)->capture_default_str();

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "fidelity sweeps and figure data");
  SweepFlags sw;
  sw.add_to(sweep_cmd);
  std::string sw_out = "out";
  bool sw_svg = false;
  sweep_cmd->add_option("--out", sw_out, "output directory")->capture_default_str();
  sweep_cmd->add_flag("--svg", sw_svg, "also render SVG line plots");

  // audit
  auto* audit = app.add_subcommand("audit", "closed-form element and fidelity audits");
  double au_step = 0.1, au_tol = 1e-10;
  std::string au_out = "audit.csv", au_formulas;
  audit->add_option("--grid-step", au_step)->capture_default_str();
  audit->add_option("--tolerance", au_tol)->capture_default_str();
  audit->add_option("--out", au_out, "element audit CSV path")->capture_default_str();
  audit->add_option("--formulas-out", au_formulas,
                    "fidelity-formula audit CSV path (default: <out>.formulas.csv)");

  // compare
  auto* compare = app.add_subcommand("compare", "channel comparison report");
  SweepFlags cmp;
  cmp.add_to(compare, false);
  std::string cmp_out;
  compare->add_option("--out", cmp_out, "optional directory for comparison.csv");

  std::string config_path;
  for (CLI::App* sub : {state, teleport, sweep_cmd, audit, compare})
    sub->add_option("--config", config_path,
                    "flat key=value configuration file; command line overrides");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!config_path.empty())
      for (CLI::App* sub : {state, teleport, sweep_cmd, audit, compare})
        if (sub->parsed()) apply_flat_config(sub, config_path);
    if (*state) {
      const ChannelKind kind = parse_channel(st_channel);
      RegisterAcceleration acc(
          {AccelerationParam(st_r1), AccelerationParam(st_r2), AccelerationParam(st_r3)});
      if (st_form == "oracle") print_matrix(oracle_density(kind, acc));
      else if (st_form == "closed") print_matrix(closed_form_density(kind, acc));
      else throw std::invalid_argument("--form must be oracle or closed");
      return 0;
    }

    if (*teleport) {
      const ChannelKind kind = parse_channel(tp_channel);
      std::optional<AccelerationParam> r0;
      if (teleport->count("--r0")) r0 = AccelerationParam(tp_r0);
      const double alpha = std::sqrt(tp_alpha_sq), beta = std::sqrt(1.0 - tp_alpha_sq);
      const InfoQubit info(cplx{alpha, 0.0}, cplx{beta, 0.0}, r0);
      const ChannelRealization chan = ChannelRealization::make(
          kind, RegisterAcceleration::uniform(3, AccelerationParam(tp_r)));
      const BellOutcome bell = parse_bell(tp_bell);
      const CharlieOutcome charlie = parse_charlie(tp_charlie);
      const auto dom = charlie_domain(kind);
      if (charlie != dom[0] && charlie != dom[1])
        throw std::invalid_argument("Charlie basis does not match this channel");
      const BranchResult b = run_branch(chan, info, bell, charlie, true);
      std::cout << "channel=" << channel_name(kind) << " bell=" << bell_name(bell)
                << " charlie=" << charlie_name(charlie) << '\n';
      std::cout << "probability=" << fmt17(b.probability) << '\n';
      std::cout << "fidelity_oracle=" << fmt17(b.fidelity_oracle) << '\n';
      std::cout << "fidelity_closed="
                << (b.fidelity_closed ? fmt17(*b.fidelity_closed) : std::string("n/a")) << '\n';
      std::cout << "valid=" << (b.valid ? "true" : "false") << '\n';
      if (b.rho_bob) {
        std::cout << "rho_bob:\n";
        print_matrix(*b.rho_bob);
      }
      return 0;
    }

    if (*sweep_cmd) {
      const SweepConfig cfg = sw.to_config();
      std::vector<SweepRecord> records = rqt::sweep(cfg);
      // figure data uses the standard record set (inertial + tied + fixed r0)
      std::vector<SweepRecord> figrecs = figure_records(cfg.alpha_sq, cfg.r_step, cfg.r_stop);
      const std::filesystem::path dir(sw_out);
      write_file(dir / "sweep.csv", sweep_csv(records));
      emit_figures(figrecs, dir, sw_svg);
      std::cout << "wrote " << (dir / "sweep.csv").string() << " and figure data ("
                << records.size() << " sweep records)\n";
      return 0;
    }

    if (*audit) {
      std::vector<ElementDiscrepancy> rows;
      const auto grid = audit_grid(au_step);
      for (ChannelKind kind : kAllChannels) {
        auto part = audit_channel(kind, grid, au_tol);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      write_file(au_out, element_audit_csv(rows));
      FormulaAuditOptions fopt;
      fopt.tolerance = au_tol;
      const auto formulas = audit_formulas(fopt);
      const std::string fpath = au_formulas.empty() ? au_out + ".formulas.csv" : au_formulas;
      write_file(fpath, formula_audit_csv(formulas));
      std::cout << "element discrepancies: " << rows.size() << " rows -> " << au_out << '\n';
      int confirmed = 0;
      for (const auto& f : formulas) confirmed += f.confirmed ? 1 : 0;
      std::cout << "fidelity formulas: " << confirmed << "/" << formulas.size()
                << " confirmed -> " << fpath << '\n';
      return 0;
    }

    if (*compare) {
      const SweepConfig cfg = cmp.to_config();
      const ComparisonSummary s = compare_channels(cfg);
      std::cout << comparison_text(s);
      if (!cmp_out.empty())
        write_file(std::filesystem::path(cmp_out) / "comparison.csv", comparison_csv(s));
      return 0;
    }
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 2;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return 3;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
