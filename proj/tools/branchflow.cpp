#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "branchflow/io.hpp"
#include "branchflow/svg.hpp"
#include "branchflow/verify.hpp"

namespace {

using branchflow::ProblemFile;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kErrOther = 1;
constexpr int kErrParse = 2;
constexpr int kErrBalance = 3;
constexpr int kErrTooLarge = 4;
constexpr int kErrVerify = 5;

struct FileArgs {
  std::string path;
  std::optional<double> alpha;
  std::optional<double> capacity;
};

void add_file_args(CLI::App* cmd, FileArgs& args) {
  cmd->add_option("file", args.path, "problem JSON file")->required();
  cmd->add_option("--alpha", args.alpha, "override the file's alpha");
  cmd->add_option("--capacity", args.capacity, "override the file's capacity");
}

ProblemFile load(const FileArgs& args) {
  ProblemFile f = branchflow::load_problem(args.path);
  if (args.alpha) f.params.alpha = *args.alpha;
  if (args.capacity) f.params.capacity = *args.capacity;
  if (!branchflow::params_valid(f.params))
    throw branchflow::ParseError("alpha must lie in [0,1] and capacity must be positive");
  return f;
}

// Exits 3 when the problem data is inconsistent, with diagnostics on stderr.
int require_valid(const ProblemFile& f) {
  const branchflow::TransportProblem problem{f.source, f.sink, f.params};
  const auto violations = branchflow::validate_problem(problem);
  if (violations.empty()) return kOk;
  for (const auto& v : violations) std::cerr << "violation: " << v.what << "\n";
  return kErrBalance;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw branchflow::Error("cannot write " + path);
  out << content;
}

branchflow::RenderSpec render_spec_from(const std::string& stroke, int size,
                                        bool labels,
                                        const branchflow::CostParams& params) {
  branchflow::RenderSpec spec;
  spec.stroke = stroke == "h" ? branchflow::RenderSpec::Stroke::kHValue
                              : branchflow::RenderSpec::Stroke::kWeight;
  spec.canvas = size;
  spec.labels = labels;
  spec.params = params;
  return spec;
}

int cmd_eval(const FileArgs& args) {
  const ProblemFile f = load(args);
  if (int rc = require_valid(f)) return rc;
  const branchflow::TransportGraph g =
      f.graph.value_or(branchflow::TransportGraph{});
  const branchflow::TransportProblem problem{f.source, f.sink, f.params};
  const branchflow::BalanceReport balance = branchflow::check_balance(g, problem);
  if (!balance.ok()) {
    std::cerr << branchflow::balance_to_json(balance).dump(2) << "\n";
    return kErrBalance;
  }
  const branchflow::CostBreakdown breakdown = branchflow::m_alpha_c(g, f.params);
  json out = branchflow::breakdown_to_json(breakdown);
  out["m_alpha_c"] = breakdown.total;
  out["m_alpha"] = branchflow::m_alpha(g, f.params.alpha);
  out["mass"] = branchflow::mass(g);
  out["size"] = branchflow::support_size(g);
  std::cout << out.dump(2) << "\n";
  return kOk;
}

int cmd_decompose(const FileArgs& args, const std::string& out_dir) {
  const ProblemFile f = load(args);
  if (int rc = require_valid(f)) return rc;
  if (!f.graph) throw branchflow::ParseError("problem file has no graph");
  const branchflow::Decomposition d = branchflow::decompose(*f.graph, f.params);
  write_file(out_dir + "/t1.json", branchflow::graph_to_json(d.t1).dump(2) + "\n");
  write_file(out_dir + "/t2.json", branchflow::graph_to_json(d.t2).dump(2) + "\n");
  const json cert = branchflow::certificate_to_json(d.certificate);
  write_file(out_dir + "/certificate.json", cert.dump(2) + "\n");
  std::cout << cert.dump(2) << "\n";
  return kOk;
}

int cmd_optimize(const FileArgs& args, bool with_oracle,
                 const std::string& svg_path, const std::string& stroke,
                 int svg_size, bool svg_labels, bool oracle_only) {
  const ProblemFile f = load(args);
  if (int rc = require_valid(f)) return rc;
  const branchflow::TransportProblem problem{f.source, f.sink, f.params};

  json out;
  branchflow::OptimizeResult shown;
  if (oracle_only) {
    shown = branchflow::oracle_best(problem);
    out = branchflow::optimize_result_to_json(shown);
  } else {
    shown = branchflow::optimize(f.graph, problem, f.params);
    out = branchflow::optimize_result_to_json(shown);
    if (with_oracle) {
      const branchflow::OptimizeResult oracle = branchflow::oracle_best(problem);
      out["oracle_cost"] = oracle.cost;
      out["delta"] = shown.cost - oracle.cost;
    }
  }
  if (!svg_path.empty()) {
    const branchflow::RenderSpec spec =
        render_spec_from(stroke, svg_size, svg_labels, f.params);
    write_file(svg_path, branchflow::render_svg(shown.graph, spec));
  }
  std::cout << out.dump(2) << "\n";
  return kOk;
}

int cmd_verify(long trials, std::uint64_t seed, std::optional<double> alpha,
               std::optional<double> capacity) {
  const branchflow::VerifyReport report =
      branchflow::run_verify_suites(trials, seed, alpha, capacity);
  json families = json::array();
  std::string counterexample;
  for (const auto& fam : report.families) {
    families.push_back({{"name", fam.name},
                        {"trials", fam.trials},
                        {"violations", fam.violations}});
    if (counterexample.empty() && !fam.counterexample.empty())
      counterexample = fam.counterexample;
  }
  json out{{"seed", seed},
           {"trials", trials},
           {"families", families},
           {"all_pass", report.all_pass}};
  if (!counterexample.empty())
    out["counterexample"] = json::parse(counterexample);
  std::cout << out.dump(2) << "\n";
  return report.all_pass ? kOk : kErrVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"capacity-constrained branched transport networks"};
  app.require_subcommand(1);

  std::uint64_t default_seed = 42;
  if (const char* env = std::getenv("BRANCHFLOW_SEED"))
    default_seed = std::strtoull(env, nullptr, 10);

  FileArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "evaluate graph costs");
  add_file_args(eval, eval_args);

  FileArgs dec_args;
  std::string dec_out = ".";
  CLI::App* dec = app.add_subcommand("decompose",
                                     "split into full-channel and remainder parts");
  add_file_args(dec, dec_args);
  dec->add_option("--out", dec_out, "output directory");

  FileArgs opt_args;
  bool opt_oracle = false;
  std::string opt_svg, opt_stroke = "weight";
  int opt_svg_size = 800;
  bool opt_svg_labels = false;
  CLI::App* opt = app.add_subcommand("optimize", "run the optimization pipeline");
  add_file_args(opt, opt_args);
  opt->add_flag("--oracle", opt_oracle, "compare against the brute-force oracle");
  opt->add_option("--svg", opt_svg, "write the final network as SVG");
  opt->add_option("--stroke-mode", opt_stroke, "stroke scale: weight or h")
      ->check(CLI::IsMember({"weight", "h"}));
  opt->add_option("--svg-size", opt_svg_size, "canvas size in pixels");
  opt->add_flag("--svg-labels", opt_svg_labels, "label edges with weights");

  FileArgs ora_args;
  std::string ora_svg;
  CLI::App* ora = app.add_subcommand("oracle", "brute-force small instances");
  add_file_args(ora, ora_args);
  ora->add_option("--svg", ora_svg, "write the oracle network as SVG");

  long ver_trials = 1000;
  std::uint64_t ver_seed = default_seed;
  std::optional<double> ver_alpha, ver_capacity;
  CLI::App* ver = app.add_subcommand("verify", "randomized inequality suites");
  ver->add_option("--trials", ver_trials, "trials per family");
  ver->add_option("--seed", ver_seed, "random seed");
  ver->add_option("--alpha", ver_alpha, "fix alpha for all trials");
  ver->add_option("--capacity", ver_capacity, "fix capacity for all trials");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(eval)) return cmd_eval(eval_args);
    if (app.got_subcommand(dec)) return cmd_decompose(dec_args, dec_out);
    if (app.got_subcommand(opt))
      return cmd_optimize(opt_args, opt_oracle, opt_svg, opt_stroke,
                          opt_svg_size, opt_svg_labels, false);
    if (app.got_subcommand(ora))
      return cmd_optimize(ora_args, false, ora_svg, "weight", 800, false, true);
    if (app.got_subcommand(ver))
      return cmd_verify(ver_trials, ver_seed, ver_alpha, ver_capacity);
  } catch (const branchflow::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kErrParse;
  } catch (const branchflow::TooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kErrTooLarge;
  } catch (const branchflow::MissingBoundaryVertex& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kErrBalance;
  } catch (const branchflow::Infeasible& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kErrBalance;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kErrOther;
  }
  return kErrOther;
}
