#include "nrh/algebra.hpp"

#include <regex>

namespace nrh {

namespace {

struct Entry {
  int i;
  int j;
  std::vector<std::pair<int, Radical>> terms;  // 1-based target, coefficient
};

void apply(AlgebraSpec& spec, const std::vector<Entry>& entries) {
  for (const auto& e : entries) {
    std::vector<BracketTerm> terms;
    for (const auto& [k, c] : e.terms) terms.push_back({k - 1, c});
    spec.set_bracket(e.i - 1, e.j - 1, terms);
  }
}

}  // namespace

AlgebraSpec sp2_su2() {
  std::vector<std::string> labels;
  for (int i = 1; i <= 10; ++i) labels.push_back("Q" + std::to_string(i));
  AlgebraSpec spec("sp2_su2", 10, 7, labels, true);

  const Radical one(1);
  const Radical r6 = Radical::sqrt_of(6);
  const Radical r32 = Radical::term(Rational(1, 2), 6);   // sqrt(3/2)
  const Radical r52 = Radical::term(Rational(1, 2), 10);  // sqrt(5/2)

  // Unordered pairs with zero bracket ([Q1,Q8]) are simply absent.
  apply(spec, {
      {1, 2, {{3, one}}},
      {1, 3, {{2, -one}}},
      {1, 4, {{5, -one}, {10, -r6}}},
      {1, 5, {{4, one}, {9, r6}}},
      {1, 6, {{7, -one}}},
      {1, 7, {{6, one}}},
      {1, 9, {{5, -r6}}},
      {1, 10, {{4, r6}}},
      {2, 3, {{1, one}, {8, Radical(3)}}},
      {2, 4, {{6, one}}},
      {2, 5, {{7, -one}}},
      {2, 6, {{4, -one}, {9, r32}}},
      {2, 7, {{5, one}, {10, -r32}}},
      {2, 8, {{3, Radical(-3)}}},
      {2, 9, {{6, -r32}}},
      {2, 10, {{7, r32}}},
      {3, 4, {{7, one}}},
      {3, 5, {{6, one}}},
      {3, 6, {{5, -one}, {10, Radical::term(Rational(1, 2), 6)}}},
      {3, 7, {{4, -one}, {9, Radical::term(Rational(1, 2), 6)}}},
      {3, 8, {{2, Radical(3)}}},
      {3, 9, {{7, -r32}}},
      {3, 10, {{6, -r32}}},
      {4, 5, {{1, -one}, {8, one}}},
      {4, 6, {{2, one}, {9, r52}}},
      {4, 7, {{3, one}, {10, r52}}},
      {4, 8, {{5, -one}}},
      {4, 9, {{6, -r52}}},
      {4, 10, {{1, Radical(-2) * r32}, {7, -r52}}},
      {5, 6, {{3, one}, {10, -r52}}},
      {5, 7, {{2, -one}, {9, r52}}},
      {5, 8, {{4, one}}},
      {5, 9, {{1, Radical(2) * r32}, {7, -r52}}},
      {5, 10, {{6, r52}}},
      {6, 7, {{1, -one}, {8, Radical(2)}}},
      {6, 8, {{7, Radical(-2)}}},
      {6, 9, {{2, r32}, {4, r52}}},
      {6, 10, {{3, r32}, {5, -r52}}},
      {7, 8, {{6, Radical(2)}}},
      {7, 9, {{3, r32}, {5, r52}}},
      {7, 10, {{2, -r32}, {4, r52}}},
      {8, 9, {{10, one}}},
      {8, 10, {{9, -one}}},
      {9, 10, {{8, one}}},
  });
  return spec;
}

AlgebraSpec su2_biinv() {
  AlgebraSpec spec("su2_biinv", 3, 3, {"e1", "e2", "e3"}, true);
  const Radical one(1);
  apply(spec, {
      {1, 2, {{3, one}}},
      {2, 3, {{1, one}}},
      {3, 1, {{2, one}}},
  });
  return spec;
}

AlgebraSpec abelian(int dim) { return AlgebraSpec("abelian" + std::to_string(dim), dim, dim, {}, true); }

std::optional<AlgebraSpec> builtin_spec(const std::string& name) {
  if (name == "sp2_su2") return sp2_su2();
  if (name == "su2_biinv") return su2_biinv();
  static const std::regex abelian_re("abelian([1-9][0-9]?)");
  std::smatch match;
  if (std::regex_match(name, match, abelian_re)) return abelian(std::stoi(match[1].str()));
  return std::nullopt;
}

}  // namespace nrh
