#include "kamnls/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "kamnls/errors.hpp"

namespace kamnls {

using nlohmann::json;

namespace {

json scalar_part(const mpq_class& x) { return x.get_num().get_str() + "/" + x.get_den().get_str(); }

void coefficient_json(const Complex& c, json& term) {
  term["re"] = c.real();
  term["im"] = c.imag();
}

void coefficient_json(const ExactComplex& c, json& term) {
  term["re"] = scalar_part(c.re);
  term["im"] = scalar_part(c.im);
}

mpq_class parse_rational(const json& j) {
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  if (!j.is_string()) throw ConfigError("rational coefficient must be a \"num/den\" string");
  mpq_class q;
  if (q.set_str(j.get<std::string>(), 10) != 0) throw ConfigError("malformed rational: " + j.get<std::string>());
  q.canonicalize();
  return q;
}

template <CoefficientScalar S>
S parse_coefficient(const json& term) {
  if constexpr (std::is_same_v<S, Complex>) {
    return {term.at("re").get<double>(), term.at("im").get<double>()};
  } else {
    return {parse_rational(term.at("re")), parse_rational(term.at("im"))};
  }
}

json key_json(const MonomialKey& key) {
  json t = json::object();
  t["a"] = multi_index_json(key.a);
  t["k"] = multi_index_json(key.k);
  t["kp"] = multi_index_json(key.kp);
  return t;
}

MonomialKey key_from_json(const json& t) {
  return {multi_index_from_json(t.at("a")), multi_index_from_json(t.at("k")), multi_index_from_json(t.at("kp"))};
}

json header(const SigmaWeight& w, int window, std::string_view backend, const char* format) {
  json j = json::object();
  j["format"] = format;
  j["version"] = kFormatVersion;
  j["sigma"] = w.sigma;
  j["c_effective"] = w.cutoff();
  j["window"] = window;
  j["backend"] = std::string(backend);
  return j;
}

SigmaWeight weight_from_json(const json& j) {
  const double sigma = j.at("sigma").get<double>();
  const double c = j.at("c_effective").get<double>();
  if (c == compute_c_sigma(sigma)) return SigmaWeight::exact(sigma);
  return SigmaWeight::make(sigma, c);
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("malformed document: ") + e.what());
  }
}

}  // namespace

json multi_index_json(const MultiIndex& m) {
  json j = json::object();
  for (auto [n, e] : m) j[std::to_string(n)] = e;
  return j;
}

MultiIndex multi_index_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("multi-index must be an object {mode: exponent}");
  MultiIndex m;
  for (const auto& [mode, e] : j.items()) {
    std::size_t pos = 0;
    const int n = std::stoi(mode, &pos);
    if (pos != mode.size()) throw ConfigError("bad mode label: " + mode);
    const int ex = e.get<int>();
    if (ex <= 0) throw ConfigError("exponents must be positive");
    m.add(n, ex);
  }
  return m;
}

template <CoefficientScalar S>
json to_json(const Hamiltonian<S>& h) {
  json j = header(h.weight(), h.window(), ScalarTraits<S>::backend, "hamiltonian");
  json terms = json::array();
  for (const auto& [key, c] : h.terms()) {
    json t = key_json(key);
    coefficient_json(c, t);
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

template <CoefficientScalar S>
json to_json(const ClassifiedPerturbation<S>& p) {
  json j = header(p.weight, p.window, ScalarTraits<S>::backend, "classified");
  j["i0"] = to_json(p.i0);
  json terms = json::array();
  auto push = [&](const char* cls, const MonomialKey& key, json jm, const S& c) {
    json t = key_json(key);
    t["class"] = cls;
    t["j_modes"] = std::move(jm);
    coefficient_json(c, t);
    terms.push_back(std::move(t));
  };
  for (const auto& [key, c] : p.r0) push("R0", key, json::array(), c);
  for (const auto& [rk, c] : p.r1) push("R1", rk.key, json::array({rk.j}), c);
  for (const auto& [rk, c] : p.r2) push("R2", rk.key, json::array({rk.j1, rk.j2}), c);
  j["terms"] = std::move(terms);
  return j;
}

template <CoefficientScalar S>
Hamiltonian<S> hamiltonian_from_json_as(const json& j) {
  return guarded([&] {
    if (j.at("backend").get<std::string>() != ScalarTraits<S>::backend) throw ConfigError("backend mismatch");
    Hamiltonian<S> h(weight_from_json(j), j.at("window").get<int>());
    for (const auto& t : j.at("terms")) {
      const MonomialKey key = key_from_json(t);
      if (!key.within(h.window())) throw ConfigError("term outside window: " + key.str());
      h.add(key, parse_coefficient<S>(t));
    }
    return h;
  });
}

AnyHamiltonian hamiltonian_from_json(const json& j) {
  const std::string backend = guarded([&] { return j.at("backend").get<std::string>(); });
  if (backend == "float64") return hamiltonian_from_json_as<Complex>(j);
  if (backend == "rational") return hamiltonian_from_json_as<ExactComplex>(j);
  throw ConfigError("unknown backend: " + backend);
}

template <CoefficientScalar S>
ClassifiedPerturbation<S> classified_from_json(const json& j) {
  return guarded([&] {
    if (j.at("backend").get<std::string>() != ScalarTraits<S>::backend) throw ConfigError("backend mismatch");
    const int window = j.at("window").get<int>();
    const auto i0v = j.at("i0").get<std::vector<double>>();
    if (static_cast<int>(i0v.size()) != 2 * window + 1) throw ConfigError("i0 does not match window");
    ActionVector i0(window);
    for (int n = -window; n <= window; ++n) i0(n) = i0v[n + window];
    ClassifiedPerturbation<S> p(weight_from_json(j), window, i0);
    for (const auto& t : j.at("terms")) {
      const MonomialKey key = key_from_json(t);
      const auto jm = t.at("j_modes").get<std::vector<int>>();
      const std::string cls = t.at("class").get<std::string>();
      const S c = parse_coefficient<S>(t);
      if (cls == "R0" && jm.empty()) p.add_r0(key, c);
      else if (cls == "R1" && jm.size() == 1) p.add_r1(jm[0], key, c);
      else if (cls == "R2" && jm.size() == 2) p.add_r2(std::min(jm[0], jm[1]), std::max(jm[0], jm[1]), key, c);
      else throw ConfigError("bad class/j_modes combination: " + cls);
    }
    return p;
  });
}

template json to_json(const Hamiltonian<Complex>&);
template json to_json(const Hamiltonian<ExactComplex>&);
template json to_json(const ClassifiedPerturbation<Complex>&);
template json to_json(const ClassifiedPerturbation<ExactComplex>&);
template Hamiltonian<Complex> hamiltonian_from_json_as(const json&);
template Hamiltonian<ExactComplex> hamiltonian_from_json_as(const json&);
template ClassifiedPerturbation<Complex> classified_from_json(const json&);
template ClassifiedPerturbation<ExactComplex> classified_from_json(const json&);

std::string dump_document(const json& j) { return j.dump(2) + "\n"; }

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

json to_json(const ModeVector& v) {
  json a = json::array();
  // unset vectors (a run stopped before producing them) serialize as []
  for (double x : v.values()) a.push_back(x);
  return a;
}

json to_json(const ClassNorms& n) { return {{"r0", n.r0}, {"r1", n.r1}, {"r2", n.r2}}; }

json to_json(const Schedule& s) {
  return {{"s", s.s},
          {"eps", s.eps},
          {"eps_next", s.eps_next},
          {"log_eps", s.log_eps},
          {"log_eps_next", s.log_eps_next},
          {"delta", s.delta},
          {"rho", s.rho},
          {"lambda", s.lambda},
          {"eta", s.eta},
          {"d", s.d},
          {"B", s.B},
          {"N", s.N},
          {"log_N_star_raw", s.log_N_star_raw},
          {"N_star", s.N_star},
          {"small_divisor_budget", s.small_divisor_budget}};
}

json to_json(const StepReport& r) {
  const auto& d = r.divisors;
  const auto& t = r.targets;
  json j = json::object();
  j["record"] = "step";
  j["s"] = r.s;
  j["schedule"] = to_json(r.schedule);
  j["next_schedule"] = to_json(r.next_schedule);
  j["before"] = to_json(r.before);
  j["after"] = to_json(r.after);
  j["f_norms"] = to_json(r.f_norms);
  j["divisors"] = {{"solved", d.solved},
                   {"deferred", d.deferred},
                   {"resonant", d.resonant},
                   {"worst_divisor", d.worst_divisor},
                   {"divisor_floor", d.divisor_floor},
                   {"worst_unit_floor", d.worst_unit_floor},
                   {"unit_floor_above_lambda", d.unit_floor_above_lambda},
                   {"truncation_threshold", d.truncation_threshold}};
  j["shift"] = to_json(r.shift);
  j["shift_sup"] = r.shift_sup;
  j["shift_imag"] = r.shift_imag;
  j["constant_increment"] = r.constant_increment;
  auto tail = [](const TailEstimate& e) {
    return json{{"last_term_norm", e.last_term_norm},
                {"geometric_ratio", e.geometric_ratio},
                {"converged", e.converged},
                {"orders", e.orders}};
  };
  j["tail_r"] = tail(r.tail_r);
  j["tail_s"] = tail(r.tail_s);
  j["brackets"] = {{"products", r.brackets.products},
                   {"dropped_terms", r.brackets.dropped_terms},
                   {"dropped_mass", r.brackets.dropped_mass},
                   {"pruned_terms", r.brackets.pruned_terms}};
  j["flow"] = {{"pass", r.flow.pass}, {"log_lhs", r.flow.log_lhs}, {"overridden", r.flow_overridden}};
  j["terms_after"] = r.terms_after;
  j["targets"] = {{"r0_contraction", t.r0_contraction},     {"r1_bound", t.r1_bound},
                  {"r2_bound", t.r2_bound},                 {"strict_r0", t.strict_r0},
                  {"shift_bound", t.shift_bound},           {"shift_loose_bound", t.shift_loose_bound},
                  {"shift_growth_bound", t.shift_growth_bound},   {"homological_f0", t.homological_f0},
                  {"homological_f1", t.homological_f1},     {"divisor_floor", t.divisor_floor},
                  {"conserving", t.conserving},             {"contract", t.contract()}};
  return j;
}

json to_json(const DiophantineReport& r) {
  json w = json::array();
  for (auto [n, l] : r.witness) w.push_back({n, l});
  return {{"record", "dioph_verify"}, {"gamma", r.gamma},     {"min_ratio", r.min_ratio},
          {"witness", w},             {"checked", r.checked_count}, {"pass", r.pass}};
}

json to_json(const LemmaVerdict& v) {
  return {{"record", "verdict"},          {"id", v.id},         {"grid", v.grid},
          {"trials", v.trials},           {"worst_margin", v.worst_margin}, {"witness", v.witness},
          {"pass", v.pass},               {"advisory", v.advisory},         {"seed", v.seed}};
}

std::string report_lines(const RunReport& rep) {
  std::string out;
  auto line = [&](const json& j) { out += j.dump() + "\n"; };
  line({{"record", "header"},
        {"version", kFormatVersion},
        {"config", rep.config},
        {"config_hash", hex64(rep.config_hash)},
        {"seed", rep.seed},
        {"eps", rep.eps},
        {"eps0", rep.eps0},
        {"omega", to_json(rep.omega)},
        {"omega_draws", rep.omega_draws},
        {"i0", to_json(rep.i0)},
        {"actions_within_bound", rep.actions_within_bound},
        {"actions_within_band", rep.actions_within_band},
        {"initial_norms", to_json(rep.initial_norms)},
        {"initial_terms", rep.initial_terms}});
  for (std::size_t i = 0; i < rep.outer.size(); ++i)
    line({{"record", "freeze"},
          {"iteration", i},
          {"v", to_json(rep.outer[i].v)},
          {"vtilde", to_json(rep.outer[i].vtilde)},
          {"residual", rep.outer[i].residual}});
  for (const auto& s : rep.steps) line(to_json(s));
  line({{"record", "final"},
        {"status", rep.status},
        {"message", rep.message},
        {"exit_code", rep.exit_code()},
        {"freeze_converged", rep.freeze_converged},
        {"v_star", to_json(rep.v_star)},
        {"freeze_residual", rep.freeze_residual},
        {"vtilde", to_json(rep.final_normal.vtilde)},
        {"constant", rep.final_normal.constant},
        {"torus_residual", rep.torus_residual},
        {"torus_bound", rep.torus_bound}});
  return out;
}

}  // namespace kamnls
