#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nrh/algebra.hpp"

namespace nrh {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SpecError((where.empty() ? std::string("spec") : where) + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

int require_int(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<int>();
}

Radical parse_coeff(const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.size() != Radical::kDim) {
    fail(where, "expected an array of 8 \"num/den\" strings");
  }
  std::array<Rational, Radical::kDim> coeffs;
  for (int s = 0; s < Radical::kDim; ++s) {
    const std::string at = where + "[" + std::to_string(s) + "]";
    if (!arr[s].is_string()) fail(at, "expected a \"num/den\" string");
    try {
      coeffs[s] = parse_rational(arr[s].get<std::string>());
    } catch (const ParseError& e) {
      fail(at, e.what());
    }
  }
  return Radical::from_coeffs(coeffs);
}

json coeff_json(const Radical& r) {
  json arr = json::array();
  for (int s = 0; s < Radical::kDim; ++s) arr.push_back(to_string(r.coeff(s)));
  return arr;
}

}  // namespace

AlgebraSpec parse_spec(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("", "top level must be an object");

  const json& name = require(doc, "name", "");
  if (!name.is_string()) fail("name", "expected a string");
  const int dim_g = require_int(doc, "dim_g", "");
  const int dim_m = require_int(doc, "dim_m", "");
  if (dim_g <= 0) fail("dim_g", "must be positive");
  if (dim_m <= 0 || dim_m > dim_g) fail("dim_m", "must lie in [1, dim_g] (got " + std::to_string(dim_m) + ")");

  std::vector<std::string> labels;
  if (auto it = doc.find("labels"); it != doc.end()) {
    if (!it->is_array()) fail("labels", "expected an array of strings");
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_string()) fail("labels[" + std::to_string(i) + "]", "expected a string");
      labels.push_back((*it)[i].get<std::string>());
    }
    if (static_cast<int>(labels.size()) != dim_g) fail("labels", "length differs from dim_g");
  }
  bool normal = false;
  if (auto it = doc.find("normal"); it != doc.end()) {
    if (!it->is_boolean()) fail("normal", "expected a boolean");
    normal = it->get<bool>();
  }

  AlgebraSpec spec(name.get<std::string>(), dim_g, dim_m, labels, normal);
  const json& brackets = require(doc, "brackets", "");
  if (!brackets.is_array()) fail("brackets", "expected an array");
  for (std::size_t b = 0; b < brackets.size(); ++b) {
    const std::string where = "brackets[" + std::to_string(b) + "]";
    const json& entry = brackets[b];
    if (!entry.is_object()) fail(where, "expected an object");
    const int i = require_int(entry, "i", where);
    const int j = require_int(entry, "j", where);
    if (i < 1 || i > dim_g) fail(where + ".i", "index out of range 1.." + std::to_string(dim_g));
    if (j < 1 || j > dim_g) fail(where + ".j", "index out of range 1.." + std::to_string(dim_g));
    const json& terms = require(entry, "terms", where);
    if (!terms.is_array()) fail(where + ".terms", "expected an array");
    std::vector<BracketTerm> parsed;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tw = where + ".terms[" + std::to_string(t) + "]";
      if (!terms[t].is_object()) fail(tw, "expected an object");
      const int k = require_int(terms[t], "k", tw);
      if (k < 1 || k > dim_g) fail(tw + ".k", "index out of range 1.." + std::to_string(dim_g));
      parsed.push_back({k - 1, parse_coeff(require(terms[t], "coeff", tw), tw + ".coeff")});
    }
    spec.set_bracket(i - 1, j - 1, parsed);
  }
  return spec;
}

std::string serialize_spec(const AlgebraSpec& spec) {
  json doc;
  doc["name"] = spec.name();
  doc["dim_g"] = spec.dim_g();
  doc["dim_m"] = spec.dim_m();
  doc["labels"] = spec.labels();
  doc["normal"] = spec.normal();
  json brackets = json::array();
  for (int i = 0; i < spec.dim_g(); ++i) {
    for (int j = 0; j < spec.dim_g(); ++j) {
      if (!spec.is_explicit(i, j)) continue;
      json terms = json::array();
      for (const auto& t : spec.terms(i, j)) terms.push_back({{"k", t.k + 1}, {"coeff", coeff_json(t.coeff)}});
      brackets.push_back({{"i", i + 1}, {"j", j + 1}, {"terms", terms}});
    }
  }
  doc["brackets"] = brackets;
  return doc.dump(2);
}

AlgebraSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_spec(buf.str());
  } catch (const SpecError& e) {
    throw SpecError(path.string() + ": " + e.what());
  }
}

void save_spec(const AlgebraSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw SpecError("cannot write spec file '" + path.string() + "'");
  out << serialize_spec(spec) << "\n";
}

AlgebraSpec resolve_space(const std::string& space) {
  if (auto builtin = builtin_spec(space)) return *builtin;
  return load_spec(space);
}

}  // namespace nrh
