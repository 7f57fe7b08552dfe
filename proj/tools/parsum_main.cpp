// Command line interface: parallel sums and Lebesgue-type decompositions of
// forms, charges, matrix functionals and operator kernels, plus a randomized
// self-verification suite. Reports are JSON on stdout, byte-identical across
// runs for identical inputs.
//
// Exit codes: 0 success, 1 internal failure or failed verification, 2 parse
// or schema problem, 3 dimension mismatch, 4 positivity validation failure,
// 5 non-convergence (decomposition reports are still emitted).

#include "CLI11.hpp"

#include "parsum/charges.hpp"
#include "parsum/decompose.hpp"
#include "parsum/forms.hpp"
#include "parsum/functionals.hpp"
#include "parsum/json_io.hpp"
#include "parsum/kernels.hpp"
#include "parsum/oracle.hpp"
#include "parsum/verify.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using nlohmann::ordered_json;
using namespace parsum;

double env_psd_tol() {
  const char* env = std::getenv("PARSUM_TOL");
  if (!env || !*env) return kDefaultPsdTol;
  char* end = nullptr;
  double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v > 0))
    throw SchemaError("PARSUM_TOL must be a positive number");
  return v;
}

struct CommonOpts {
  double epsilon = 1e-10;
  int max_iter = 10000;
  bool trace = false;
  bool oracle_check = false;
  std::string output;
};

void emit(const ordered_json& report, const std::string& output_path) {
  std::string text = dump_json(report);
  text += '\n';
  std::cout << text;
  if (!output_path.empty()) {
    std::ofstream f(output_path, std::ios::binary);
    f << text;
    if (!f) throw std::runtime_error("cannot write output file: " + output_path);
  }
}

ordered_json iteration_json(const IterationTrace& tr, bool include_residuals) {
  ordered_json j;
  j["steps"] = tr.steps_taken;
  j["converged"] = tr.converged;
  if (!tr.residuals.empty()) j["final_residual"] = tr.residuals.back();
  j["slow_decay_warning"] = tr.slow_decay_warning;
  if (include_residuals) {
    ordered_json r = ordered_json::array();
    for (double v : tr.residuals) r.push_back(v);
    j["residuals"] = std::move(r);
  }
  return j;
}

// Deviation of the iteratively computed regular part from the two
// independent oracles, relative to the magnitude of t.
ordered_json oracle_json(const HermitianForm& t, const HermitianForm& w,
                         const HermitianForm& regular) {
  double scale = std::max(detail::max_abs(t.gram()), 1e-300);
  double dev_short = detail::rel_deviation(
      regular.gram(), shorted_operator(t, w).gram(), scale);
  double dev_ladder =
      detail::rel_deviation(regular.gram(), scale_ladder_limit(t, w).gram(), scale);
  ordered_json j;
  j["shorted_rel_dev"] = dev_short;
  j["ladder_rel_dev"] = dev_ladder;
  j["within_tolerance"] = std::max(dev_short, dev_ladder) <= 1e-6;
  return j;
}

ordered_json config_json(const CommonOpts& opt, double psd_tol) {
  ordered_json j;
  j["epsilon"] = opt.epsilon;
  j["max_iter"] = opt.max_iter;
  j["psd_tolerance"] = psd_tol;
  return j;
}

int run_parallel_sum(const std::string& t_path, const std::string& w_path,
                     bool oracle_check, const std::string& output) {
  double tol = env_psd_tol();
  HermitianForm t = HermitianForm::from_gram(read_matrix(load_json_file(t_path)), tol);
  HermitianForm w = HermitianForm::from_gram(read_matrix(load_json_file(w_path)), tol);
  HermitianForm p = parallel_sum(t, w);

  ordered_json report;
  report["command"] = "parallel-sum";
  report["inputs"] = {{"t", write_matrix(t.gram())}, {"w", write_matrix(w.gram())}};
  report["psd_tolerance"] = tol;
  report["result"] = write_matrix(p.gram());
  if (oracle_check) {
    // Spot-check the variational characterization on the coordinate axes.
    double worst = 0;
    for (Eigen::Index i = 0; i < t.dim(); ++i) {
      Vector x = Vector::Zero(t.dim());
      x[i] = 1;
      double a = quadratic_eval(p, x);
      double b = variational_minimum(t, w, x);
      double scale = 1.0 + t.trace() + w.trace();
      worst = std::max(worst, std::abs(a - b) / scale);
    }
    ordered_json oj;
    oj["variational_max_dev"] = worst;
    oj["within_tolerance"] = worst <= 1e-9;
    report["oracle_check"] = std::move(oj);
  }
  emit(report, output);
  return 0;
}

int run_decompose_form(const std::string& t_path, const std::string& w_path,
                       const CommonOpts& opt) {
  double tol = env_psd_tol();
  HermitianForm t = HermitianForm::from_gram(read_matrix(load_json_file(t_path)), tol);
  HermitianForm w = HermitianForm::from_gram(read_matrix(load_json_file(w_path)), tol);
  IterationConfig cfg{opt.epsilon, opt.max_iter, true};
  DecompositionResult dec = iterate_decompose(t, w, cfg);

  ordered_json report;
  report["command"] = "decompose-form";
  report["inputs"] = {{"t", write_matrix(t.gram())}, {"w", write_matrix(w.gram())}};
  report["config"] = config_json(opt, tol);
  report["result"] = {{"regular", write_matrix(dec.regular.gram())},
                      {"singular", write_matrix(dec.singular.gram())}};
  report["iteration"] = iteration_json(dec.trace, opt.trace);
  if (opt.oracle_check) report["oracle_check"] = oracle_json(t, w, dec.regular);
  emit(report, opt.output);
  return dec.trace.converged ? 0 : 5;
}

int run_decompose_charge(const std::string& mu_path, const std::string& nu_path,
                         const CommonOpts& opt) {
  double tol = env_psd_tol();
  Charge mu = read_charge(load_json_file(mu_path));
  Charge nu = read_charge(load_json_file(nu_path));
  IterationConfig cfg{opt.epsilon, opt.max_iter, true};
  IterationTrace tr;
  auto [regular, singular] = decompose_charge(mu, nu, cfg, &tr);

  ordered_json report;
  report["command"] = "decompose-charge";
  report["inputs"] = {{"mu", write_charge(mu)}, {"nu", write_charge(nu)}};
  report["config"] = config_json(opt, tol);
  report["result"] = {{"regular", write_charge(regular)},
                      {"singular", write_charge(singular)}};
  report["iteration"] = iteration_json(tr, opt.trace);
  if (opt.oracle_check)
    report["oracle_check"] = oracle_json(charge_to_form(mu, tol),
                                         charge_to_form(nu, tol),
                                         charge_to_form(regular, tol));
  emit(report, opt.output);
  return tr.converged ? 0 : 5;
}

int run_decompose_functional(const std::string& w_path,
                             const std::string& v_path,
                             const CommonOpts& opt) {
  double tol = env_psd_tol();
  MatrixFunctional w = read_functional(load_json_file(w_path), tol);
  MatrixFunctional v = read_functional(load_json_file(v_path), tol);
  IterationConfig cfg{opt.epsilon, opt.max_iter, true};
  IterationTrace tr;
  auto [regular, singular] = decompose_functional(w, v, cfg, &tr);

  ordered_json report;
  report["command"] = "decompose-functional";
  report["inputs"] = {{"w", write_functional(w)}, {"v", write_functional(v)}};
  report["config"] = config_json(opt, tol);
  report["result"] = {{"regular", write_functional(regular)},
                      {"singular", write_functional(singular)}};
  report["iteration"] = iteration_json(tr, opt.trace);
  if (opt.oracle_check)
    report["oracle_check"] = oracle_json(functional_to_form(w),
                                         functional_to_form(v),
                                         functional_to_form(regular));
  emit(report, opt.output);
  return tr.converged ? 0 : 5;
}

int run_decompose_kernel(const std::string& k_path, const std::string& l_path,
                         const CommonOpts& opt) {
  double tol = env_psd_tol();
  OperatorKernel k = read_kernel(load_json_file(k_path), tol);
  OperatorKernel l = read_kernel(load_json_file(l_path), tol);
  IterationConfig cfg{opt.epsilon, opt.max_iter, true};
  IterationTrace tr;
  auto [regular, singular] = decompose_kernel(k, l, cfg, &tr);

  ordered_json report;
  report["command"] = "decompose-kernel";
  report["inputs"] = {{"k", write_kernel(k)}, {"l", write_kernel(l)}};
  report["config"] = config_json(opt, tol);
  report["result"] = {{"regular", write_kernel(regular)},
                      {"singular", write_kernel(singular)}};
  report["iteration"] = iteration_json(tr, opt.trace);
  if (opt.oracle_check)
    report["oracle_check"] = oracle_json(kernel_to_form(k), kernel_to_form(l),
                                         kernel_to_form(regular));
  emit(report, opt.output);
  return tr.converged ? 0 : 5;
}

int run_verify(std::uint64_t seed, int dim, int trials,
               const std::string& output) {
  VerifyOptions opt{seed, dim, trials};
  std::vector<PropertyResult> results = run_all(opt);

  bool all_pass = true;
  ordered_json props = ordered_json::array();
  for (const PropertyResult& r : results) {
    all_pass = all_pass && r.pass;
    ordered_json p;
    p["name"] = r.name;
    p["pass"] = r.pass;
    p["worst"] = r.worst;
    p["threshold"] = r.threshold;
    props.push_back(std::move(p));
  }

  ordered_json report;
  report["command"] = "verify";
  report["seed"] = static_cast<unsigned long long>(seed);
  report["dim"] = dim;
  report["trials"] = trials;
  report["properties"] = std::move(props);
  report["all_pass"] = all_pass;
  emit(report, output);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parallel sums and Lebesgue-type decompositions of "
               "nonnegative forms, charges, functionals and kernels"};
  app.require_subcommand(1);

  std::string a_path, b_path;
  CommonOpts common;
  std::uint64_t seed = 42;
  int dim = 4, trials = 100;

  auto add_common = [&common](CLI::App* cmd) {
    cmd->add_option("--epsilon", common.epsilon,
                    "stopping threshold factor (relative to trace + 1)");
    cmd->add_option("--max-iter", common.max_iter, "iteration budget");
    cmd->add_flag("--trace", common.trace, "include the residual history");
    cmd->add_flag("--oracle-check", common.oracle_check,
                  "cross-check against the independent oracles");
    cmd->add_option("--output", common.output, "also write the report here");
  };

  CLI::App* psum = app.add_subcommand("parallel-sum",
                                      "parallel sum of two PSD forms");
  psum->add_option("--t", a_path, "Gram matrix JSON")->required();
  psum->add_option("--w", b_path, "Gram matrix JSON")->required();
  psum->add_flag("--oracle-check", common.oracle_check,
                 "cross-check against the variational characterization");
  psum->add_option("--output", common.output, "also write the report here");

  CLI::App* dform = app.add_subcommand("decompose-form",
                                       "decompose a form along another");
  dform->add_option("--t", a_path, "Gram matrix JSON")->required();
  dform->add_option("--w", b_path, "Gram matrix JSON")->required();
  add_common(dform);

  CLI::App* dcharge = app.add_subcommand("decompose-charge",
                                         "decompose a charge along another");
  dcharge->add_option("--mu", a_path, "charge JSON")->required();
  dcharge->add_option("--nu", b_path, "charge JSON")->required();
  add_common(dcharge);

  CLI::App* dfunc = app.add_subcommand(
      "decompose-functional", "decompose a matrix functional along another");
  dfunc->add_option("--w", a_path, "functional JSON")->required();
  dfunc->add_option("--v", b_path, "functional JSON")->required();
  add_common(dfunc);

  CLI::App* dkern = app.add_subcommand("decompose-kernel",
                                       "decompose an operator kernel");
  dkern->add_option("--k", a_path, "kernel JSON")->required();
  dkern->add_option("--l", b_path, "kernel JSON")->required();
  add_common(dkern);

  CLI::App* verify = app.add_subcommand("verify",
                                        "run the randomized property suites");
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_option("--dim", dim, "dimension for the random forms");
  verify->add_option("--trials", trials, "trials per property");
  verify->add_option("--output", common.output, "also write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(psum))
      return run_parallel_sum(a_path, b_path, common.oracle_check,
                              common.output);
    if (app.got_subcommand(dform)) return run_decompose_form(a_path, b_path, common);
    if (app.got_subcommand(dcharge))
      return run_decompose_charge(a_path, b_path, common);
    if (app.got_subcommand(dfunc))
      return run_decompose_functional(a_path, b_path, common);
    if (app.got_subcommand(dkern))
      return run_decompose_kernel(a_path, b_path, common);
    if (app.got_subcommand(verify))
      return run_verify(seed, dim, trials, common.output);
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const PsdError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
