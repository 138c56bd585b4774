#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "kamnls/algebra.hpp"
#include "kamnls/errors.hpp"
#include "kamnls/lemma_lab.hpp"
#include "kamnls/norms.hpp"
#include "kamnls/run.hpp"
#include "kamnls/serialize.hpp"

using namespace kamnls;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kConfig = 2, kResonance = 3, kContract = 4, kLemma = 5 };

struct Overrides {
  std::string config_path;
  std::string out;
  std::optional<double> sigma, gamma, eps, target_r0, drop_threshold;
  std::optional<int> window, steps, degree_cap, order_cap, threads, lemma_trials;
  std::optional<std::uint64_t> seed, dioph_samples;
  std::optional<std::string> backend, freeze, c_override;
  std::vector<std::string> suites;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_path, "config document (JSON)");
    app->add_option("-o,--out", out, "output path (default: config output, else stdout)");
    app->add_option("--sigma", sigma);
    app->add_option("--gamma", gamma);
    app->add_option("--eps", eps);
    app->add_option("--target-r0", target_r0, "rescale eps so the initial ||R0||^+ equals this");
    app->add_option("--drop-threshold", drop_threshold);
    app->add_option("--window", window, "mode window M");
    app->add_option("--steps", steps);
    app->add_option("--degree-cap", degree_cap);
    app->add_option("--order-cap", order_cap);
    app->add_option("--threads", threads);
    app->add_option("--seed", seed);
    app->add_option("--backend", backend, "float64 | rational");
    app->add_option("--freeze", freeze, "on | off");
    app->add_option("--c-override", c_override, "number >= e, or none");
  }

  RunConfig resolve() const {
    json j = config_path.empty() ? json::object() : read_json_file(config_path);
    if (!j.is_object()) throw ConfigError("config: document must be an object");
    auto set = [&](const char* key, const auto& v) {
      if (v) j[key] = *v;
    };
    set("sigma", sigma);
    set("gamma", gamma);
    set("eps", eps);
    set("target_r0", target_r0);
    set("drop_threshold", drop_threshold);
    set("window", window);
    set("steps", steps);
    set("degree_cap", degree_cap);
    set("order_cap", order_cap);
    set("threads", threads);
    set("lemma_trials", lemma_trials);
    set("seed", seed);
    set("dioph_samples", dioph_samples);
    set("backend", backend);
    set("freeze", freeze);
    if (eps && !target_r0) j["target_r0"] = nullptr;
    if (c_override) {
      if (*c_override == "none") j["c_override"] = "none";
      else {
        try {
          j["c_override"] = std::stod(*c_override);
        } catch (const std::exception&) {
          throw ConfigError("--c-override must be a number or none");
        }
      }
    }
    if (!suites.empty()) j["suites"] = suites;
    RunConfig c = RunConfig::from_json(j);
    if (!out.empty()) c.output = out;
    return c;
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text << std::flush;
  else write_text_file(path, text);
}

ModeVector frequencies(const RunConfig& c) {
  if (c.omega) {
    ModeVector v(c.window);
    for (int n = -c.window; n <= c.window; ++n) v(n) = (*c.omega)[n + c.window];
    return v;
  }
  return sample_omega(c.window, c.seed, false, c.degree_cap, 0.0, 1).first;
}

int cmd_build(const RunConfig& c) {
  const SigmaWeight w = c.weight();
  const ModeVector v = frequencies(c);
  const double eps = resolve_eps(c);
  const json doc = c.backend == "rational" ? to_json(build_nls<ExactComplex>(c.window, eps, v, w))
                                           : to_json(build_nls<Complex>(c.window, eps, v, w));
  emit(c.output, dump_document(doc));
  return kOk;
}

int cmd_run(const RunConfig& c) {
  const RunReport rep = run(c);
  emit(c.output, report_lines(rep));
  if (rep.status != "ok") std::cerr << "run: " << rep.status << ": " << rep.message << "\n";
  return rep.exit_code();
}

int cmd_dioph(const RunConfig& c) {
  std::string out;
  const json head{{"record", "dioph_header"},
                  {"config_hash", hex64(c.hash())},
                  {"seed", c.seed},
                  {"window", c.window},
                  {"height", c.height},
                  {"samples", c.dioph_samples}};
  out += head.dump() + "\n";
  for (double g : c.dioph_gammas) {
    const double frac = diophantine_measure(g, c.window, c.height, c.dioph_samples, c.seed);
    out += json{{"record", "dioph_measure"}, {"gamma", g}, {"violation_fraction", frac},
                {"fraction_over_gamma", g > 0 ? json(frac / g) : json(nullptr)}}
               .dump() +
           "\n";
  }
  out += to_json(diophantine_verify(frequencies(c), c.gamma, c.window, c.height)).dump() + "\n";
  emit(c.output, out);
  return kOk;
}

int cmd_lemmas(const RunConfig& c, bool strict) {
  SuiteOptions opts;
  opts.seed = c.seed;
  opts.c_override = c.c_override;
  opts.suites = c.suites;
  if (c.lemma_trials > 0) {
    opts.trials = c.lemma_trials;
    opts.algebra_trials = std::max(1, c.lemma_trials / 10);
  }
  const auto verdicts = run_lemma_suites(opts);
  std::string out;
  bool failed = false;
  for (const auto& v : verdicts) {
    out += to_json(v).dump() + "\n";
    if (!v.pass) {
      std::cerr << (v.advisory ? "advisory failure: " : "FAIL: ") << v.id << " [" << v.grid << "] " << v.witness
                << "\n";
      failed |= !v.advisory;
    }
  }
  emit(c.output, out);
  return strict && failed ? kLemma : kOk;
}

template <CoefficientScalar S>
json bracket_docs(const json& a, const json& b, const BracketCaps& caps) {
  const auto ha = hamiltonian_from_json_as<S>(a);
  const auto hb = hamiltonian_from_json_as<S>(b);
  return to_json(poisson_bracket(ha, hb, caps));
}

int cmd_bracket(const RunConfig& c, const std::string& left, const std::string& right) {
  const json a = read_json_file(left), b = read_json_file(right);
  const std::string backend = a.value("backend", "");
  if (backend != b.value("backend", "")) throw ConfigError("bracket: operands use different backends");
  const json doc = backend == "rational" ? bracket_docs<ExactComplex>(a, b, c.caps()) : bracket_docs<Complex>(a, b, c.caps());
  emit(c.output, dump_document(doc));
  return kOk;
}

int cmd_norm(const RunConfig& c, const std::string& path, double rho) {
  const json doc = read_json_file(path);
  json res{{"record", "norm"}, {"file", path}, {"rho", rho}};
  const bool classified = doc.value("format", "") == "classified";
  const bool exact = doc.value("backend", "") == "rational";
  if (classified) {
    const ClassNorms n = exact ? class_norms(classified_from_json<ExactComplex>(doc), rho)
                               : class_norms(classified_from_json<Complex>(doc), rho);
    res["plus_norm"] = n.max();
    res["classes"] = to_json(n);
  } else {
    res["norm"] = std::visit([&](const auto& h) { return weighted_norm(h, rho); }, hamiltonian_from_json(doc));
  }
  emit(c.output, res.dump() + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KAM normal-form construction for the quintic NLS on a truncated mode window"};
  app.require_subcommand(1);
  Overrides ov;

  auto* build = app.add_subcommand("build", "write the quintic NLS Hamiltonian document");
  auto* run_cmd = app.add_subcommand("run", "run the KAM iteration and write report records");
  auto* dioph = app.add_subcommand("dioph", "Diophantine verification and Monte-Carlo measure");
  auto* lemmas = app.add_subcommand("lemmas", "run the estimate verification suites");
  auto* bracket = app.add_subcommand("bracket", "Poisson bracket of two Hamiltonian documents");
  auto* norm = app.add_subcommand("norm", "weighted norm of a Hamiltonian document");
  for (auto* sub : {build, run_cmd, dioph, lemmas, bracket, norm}) ov.attach(sub);

  bool strict = false;
  lemmas->add_flag("--strict", strict, "exit 5 when any suite fails");
  lemmas->add_option("--suite", ov.suites, "suite name (repeatable)");
  lemmas->add_option("--trials", ov.lemma_trials);
  dioph->add_option("--samples", ov.dioph_samples);
  std::string left, right, input;
  bracket->add_option("left", left)->required();
  bracket->add_option("right", right)->required();
  double rho = kRho0;
  norm->add_option("input", input)->required();
  norm->add_option("--rho", rho);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfig;
  }

  try {
    const RunConfig c = ov.resolve();
    if (*build) return cmd_build(c);
    if (*run_cmd) return cmd_run(c);
    if (*dioph) return cmd_dioph(c);
    if (*lemmas) return cmd_lemmas(c, strict);
    if (*bracket) return cmd_bracket(c, left, right);
    if (*norm) {
      if (!(rho >= 0.0)) throw ConfigError("--rho must be non-negative");
      return cmd_norm(c, input, rho);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ResonanceError& e) {
    std::cerr << "resonance: " << e.what() << "\n";
    return kResonance;
  } catch (const ContractFailure& e) {
    std::cerr << "contract failure: " << e.what() << "\n";
    return kContract;
  } catch (const KamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
