#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "json.hpp"
#include "kamnls/classify.hpp"
#include "kamnls/divisors.hpp"
#include "kamnls/lemma_lab.hpp"
#include "kamnls/run.hpp"

namespace kamnls {

inline constexpr int kFormatVersion = 1;

nlohmann::json multi_index_json(const MultiIndex& m);
MultiIndex multi_index_from_json(const nlohmann::json& j);

template <CoefficientScalar S>
nlohmann::json to_json(const Hamiltonian<S>& h);
template <CoefficientScalar S>
nlohmann::json to_json(const ClassifiedPerturbation<S>& p);

using AnyHamiltonian = std::variant<Hamiltonian<Complex>, Hamiltonian<ExactComplex>>;

/// Dispatches on the backend field; throws ConfigError on malformed documents.
AnyHamiltonian hamiltonian_from_json(const nlohmann::json& j);
template <CoefficientScalar S>
Hamiltonian<S> hamiltonian_from_json_as(const nlohmann::json& j);
template <CoefficientScalar S>
ClassifiedPerturbation<S> classified_from_json(const nlohmann::json& j);

/// Canonical text: two-space indent and a trailing newline.
std::string dump_document(const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

nlohmann::json to_json(const ModeVector& v);
nlohmann::json to_json(const ClassNorms& n);
nlohmann::json to_json(const Schedule& s);
nlohmann::json to_json(const StepReport& r);
nlohmann::json to_json(const DiophantineReport& r);
nlohmann::json to_json(const LemmaVerdict& v);

/// Report records, one JSON object per line: header, freeze iterations, steps, final.
std::string report_lines(const RunReport& rep);

std::string hex64(std::uint64_t x);

}  // namespace kamnls
