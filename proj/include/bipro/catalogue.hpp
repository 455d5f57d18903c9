#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "bipro/error.hpp"
#include "bipro/group.hpp"
#include "bipro/perm.hpp"

namespace bipro {

/// Generators for a named group together with their common degree.
struct GroupSpec {
  std::string name;
  std::size_t degree = 1;
  std::vector<Permutation> generators;
};

namespace detail {

inline std::vector<std::uint32_t> range_points(std::uint32_t first, std::uint32_t last) {
  std::vector<std::uint32_t> pts;
  for (auto i = first; i < last; ++i) pts.push_back(i);
  return pts;
}

inline GroupSpec cyclic_spec(std::size_t n) {
  GroupSpec s{"Z" + std::to_string(n), n, {}};
  if (n > 1) s.generators.push_back(Permutation::cycle(n, range_points(0, static_cast<std::uint32_t>(n))));
  return s;
}

inline GroupSpec symmetric_spec(std::size_t n) {
  GroupSpec s{"S" + std::to_string(n), n, {}};
  if (n >= 2) s.generators.push_back(Permutation::cycle(n, {0, 1}));
  if (n >= 3) s.generators.push_back(Permutation::cycle(n, range_points(0, static_cast<std::uint32_t>(n))));
  return s;
}

inline GroupSpec alternating_spec(std::size_t n) {
  GroupSpec s{"A" + std::to_string(n), n, {}};
  if (n >= 3) s.generators.push_back(Permutation::cycle(n, {0, 1, 2}));
  if (n >= 4) {
    const auto m = static_cast<std::uint32_t>(n);
    s.generators.push_back(Permutation::cycle(n, n % 2 ? range_points(0, m) : range_points(1, m)));
  }
  return s;
}

// D_n has order 2n. D1 and D2 have no faithful action on n points and use
// Z2 on two points and Z2xZ2 on four points.
inline GroupSpec dihedral_spec(std::size_t n) {
  GroupSpec s{"D" + std::to_string(n), n, {}};
  if (n == 1) {
    s.degree = 2;
    s.generators.push_back(Permutation::cycle(2, {0, 1}));
    return s;
  }
  if (n == 2) {
    s.degree = 4;
    s.generators.push_back(Permutation::cycle(4, {0, 1}));
    s.generators.push_back(Permutation::cycle(4, {2, 3}));
    return s;
  }
  s.generators.push_back(Permutation::cycle(n, range_points(0, static_cast<std::uint32_t>(n))));
  std::vector<std::uint32_t> im(n);
  for (std::size_t i = 0; i < n; ++i) im[i] = static_cast<std::uint32_t>((n - i) % n);
  s.generators.push_back(Permutation(im));
  return s;
}

// Quaternion units ±1, ±i, ±j, ±k as index 2*unit + (sign < 0); generators
// act by right multiplication, giving the regular representation on 8 points.
inline GroupSpec quaternion_spec() {
  // unit product table: kUnit[a][b] = unit of e_a e_b, kSign[a][b] its sign
  static constexpr int kUnit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static constexpr int kSign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  auto right_mult = [&](int unit) {
    std::vector<std::uint32_t> im(8);
    for (int x = 0; x < 8; ++x) {
      const int xu = x / 2;
      const int xs = x % 2 ? -1 : 1;
      const int u = kUnit[xu][unit];
      const int sg = xs * kSign[xu][unit];
      im[static_cast<std::size_t>(x)] = static_cast<std::uint32_t>(2 * u + (sg < 0 ? 1 : 0));
    }
    return Permutation(im);
  };
  return GroupSpec{"Q8", 8, {right_mult(1), right_mult(2)}};
}

inline GroupSpec direct_product(const GroupSpec& a, const GroupSpec& b) {
  GroupSpec s{a.name + "x" + b.name, a.degree + b.degree, {}};
  for (const auto& g : a.generators) s.generators.push_back(g.extended(s.degree));
  for (const auto& g : b.generators) {
    std::vector<std::uint32_t> im(s.degree);
    for (std::size_t i = 0; i < a.degree; ++i) im[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < b.degree; ++i) im[a.degree + i] = static_cast<std::uint32_t>(a.degree + g[i]);
    s.generators.push_back(Permutation(im));
  }
  return s;
}

inline GroupSpec parse_factor(std::string_view name, std::size_t& pos) {
  auto fail = [&](const std::string& what) -> GroupSpec {
    throw ParseError("group descriptor \"" + std::string(name) + "\": " + what);
  };
  if (pos >= name.size()) return fail("expected a group family");
  const char fam = name[pos++];
  if (fam == 'Q') {
    if (name.substr(pos, 1) != "8") return fail("only Q8 is supported in the Q family");
    ++pos;
    if (pos < name.size() && std::isdigit(static_cast<unsigned char>(name[pos]))) return fail("only Q8 is supported");
    return quaternion_spec();
  }
  if (fam != 'S' && fam != 'A' && fam != 'D' && fam != 'Z') return fail(std::string("unknown family '") + fam + "'");
  std::size_t start = pos;
  std::size_t n = 0;
  while (pos < name.size() && std::isdigit(static_cast<unsigned char>(name[pos]))) {
    n = n * 10 + static_cast<std::size_t>(name[pos] - '0');
    if (n > 100000) return fail("parameter too large");
    ++pos;
  }
  if (pos == start) return fail("missing size parameter");
  if (n == 0) return fail("size parameter must be positive");
  switch (fam) {
    case 'S': return symmetric_spec(n);
    case 'A': return alternating_spec(n);
    case 'D': return dihedral_spec(n);
    default: return cyclic_spec(n);
  }
}

}  // namespace detail

/// Canonical generators for a descriptor: NAME := FAMILY INT | FAMILY INT "x" NAME,
/// families S (symmetric), A (alternating), D (dihedral of order 2n),
/// Z (cyclic) and Q8. Factors of a direct product act on disjoint points.
inline GroupSpec catalogue(std::string_view name) {
  std::size_t pos = 0;
  auto spec = detail::parse_factor(name, pos);
  while (pos < name.size()) {
    if (name[pos] != 'x') throw ParseError("group descriptor \"" + std::string(name) + "\": expected 'x'");
    ++pos;
    spec = detail::direct_product(spec, detail::parse_factor(name, pos));
  }
  spec.name = std::string(name);
  return spec;
}

inline bool looks_like_descriptor(std::string_view text) {
  return !text.empty() && text.find('(') == std::string_view::npos;
}

/// Descriptor or comma-separated cycle-notation generator list -> Group.
inline GroupPtr parse_group(std::string_view text, std::size_t max_order = kDefaultMaxOrder) {
  std::string trimmed(text);
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) trimmed.pop_back();
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) trimmed.erase(0, 1);
  if (looks_like_descriptor(trimmed)) {
    auto spec = catalogue(trimmed);
    auto g = Group::closure(spec.degree, spec.generators, max_order);
    g.set_name(spec.name);
    return make_group(std::move(g));
  }
  auto gens = parse_permutation_list(trimmed);
  const std::size_t degree = gens.empty() ? 1 : gens.front().degree();
  auto g = Group::closure(degree, gens, max_order);
  g.set_name(trimmed);
  return make_group(std::move(g));
}

/// The fixed verification corpus: one descriptor for each isomorphism class
/// of order at most 48 that the descriptor grammar can express, in order of
/// group order, plus A5 as a larger spot check.
inline const std::vector<std::string>& default_catalogue() {
  static const std::vector<std::string> kNames = {
      "Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "S3", "Z6", "Z7", "D4", "Q8", "Z8", "Z2xZ4", "Z2xZ2xZ2", "Z9",
      "Z3xZ3", "D5", "Z10", "Z11", "A4", "D6", "Z12", "Z2xZ6", "Z13", "D7", "Z14", "Z15", "D8", "Z16", "Z2xD4",
      "Z2xQ8", "Z2xZ8", "Z4xZ4", "Z2xZ2xZ4", "Z2xZ2xZ2xZ2", "Z17", "D9", "Z18", "Z3xS3", "Z3xZ6", "Z19", "D10",
      "Z20", "Z2xZ10", "Z21", "D11", "Z22", "Z23", "S4", "D12", "Z24", "Z2xA4", "Z2xD6", "Z3xD4", "Z3xQ8",
      "Z4xS3", "Z4xZ6", "Z2xZ2xZ6", "Z25", "Z5xZ5", "D13", "Z26", "Z27", "Z3xZ9", "Z3xZ3xZ3", "D14", "Z28",
      "Z2xZ14", "Z29", "D15", "Z30", "Z3xD5", "Z5xS3", "Z31", "D16", "Z32", "Z2xD8", "Z4xD4", "Z4xQ8", "Z4xZ8",
      "Z2xZ16", "Z2xZ2xD4", "Z2xZ2xQ8", "Z2xZ2xZ8", "Z2xZ4xZ4", "Z2xZ2xZ2xZ4", "Z2xZ2xZ2xZ2xZ2", "Z33", "D17",
      "Z34", "Z35", "D18", "Z36", "S3xS3", "Z3xA4", "Z3xD6", "Z6xZ6", "Z2xZ18", "Z3xZ12", "Z37", "D19", "Z38",
      "Z39", "D20", "Z40", "Z4xD5", "Z5xD4", "Z5xQ8", "Z2xD10", "Z2xZ20", "Z2xZ2xZ10", "Z41", "D21", "Z42",
      "Z3xD7", "Z7xS3", "Z43", "D22", "Z44", "Z2xZ22", "Z45", "Z3xZ15", "D23", "Z46", "Z47", "D24", "Z48",
      "S3xD4", "S3xQ8", "Z2xS4", "Z3xD8", "Z4xA4", "Z4xD6", "Z6xD4", "Z6xQ8", "Z6xZ8", "Z8xS3", "Z2xD12",
      "Z4xZ12", "Z2xZ2xA4", "Z2xZ2xD6", "Z2xZ4xZ6", "Z2xZ2xZ2xZ6", "A5",
  };
  return kNames;
}

}  // namespace bipro
