#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "bipro/error.hpp"

namespace bipro {

/// A bijection of {0, ..., degree-1}. Products compose left to right:
/// (p * q)(i) = q(p(i)).
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::size_t degree) : images_(degree) {
    std::iota(images_.begin(), images_.end(), std::uint32_t{0});
  }

  explicit Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (auto im : images_) {
      if (im >= images_.size() || seen[im]) throw DomainError("images do not form a bijection");
      seen[im] = true;
    }
  }

  /// A single cycle on the given points, as a permutation of `degree` points.
  static Permutation cycle(std::size_t degree, const std::vector<std::uint32_t>& points) {
    Permutation p(degree);
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i] >= degree) throw DomainError("cycle point outside degree");
      p.images_[points[i]] = points[(i + 1) % points.size()];
    }
    return Permutation(p.images_);
  }

  std::size_t degree() const { return images_.size(); }
  std::uint32_t operator[](std::size_t i) const { return images_[i]; }
  const std::vector<std::uint32_t>& images() const { return images_; }

  Permutation operator*(const Permutation& rhs) const {
    if (rhs.degree() != degree()) throw DomainError("degree mismatch in permutation product");
    Permutation out;
    out.images_.resize(degree());
    for (std::size_t i = 0; i < degree(); ++i) out.images_[i] = rhs.images_[images_[i]];
    return out;
  }

  Permutation inverse() const {
    Permutation out;
    out.images_.resize(degree());
    for (std::size_t i = 0; i < degree(); ++i) out.images_[images_[i]] = static_cast<std::uint32_t>(i);
    return out;
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < degree(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  /// Same action, padded with fixed points up to `degree`.
  Permutation extended(std::size_t degree) const {
    if (degree < this->degree()) throw DomainError("cannot shrink a permutation");
    Permutation out(degree);
    std::copy(images_.begin(), images_.end(), out.images_.begin());
    return out;
  }

  /// Largest moved point + 1 (0 for the identity).
  std::size_t support_bound() const {
    for (std::size_t i = degree(); i-- > 0;)
      if (images_[i] != i) return i + 1;
    return 0;
  }

  std::size_t order() const {
    std::size_t ord = 1;
    std::vector<bool> seen(degree(), false);
    for (std::size_t i = 0; i < degree(); ++i) {
      if (seen[i]) continue;
      std::size_t len = 0;
      for (std::size_t j = i; !seen[j]; j = images_[j]) {
        seen[j] = true;
        ++len;
      }
      ord = std::lcm(ord, len);
    }
    return ord;
  }

  /// Disjoint-cycle notation, fixed points omitted; identity is "()".
  std::string to_cycles() const {
    std::string out;
    std::vector<bool> seen(degree(), false);
    for (std::size_t i = 0; i < degree(); ++i) {
      if (seen[i] || images_[i] == i) continue;
      out += '(';
      for (std::size_t j = i; !seen[j]; j = images_[j]) {
        seen[j] = true;
        if (j != i) out += ' ';
        out += std::to_string(j);
      }
      out += ')';
    }
    return out.empty() ? "()" : out;
  }

  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<std::uint32_t> images_;
};

namespace detail {

struct CycleParser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("cycle notation: " + what + " at offset " + std::to_string(pos) + " in \"" +
                     std::string(text) + "\"");
  }

  std::uint32_t number() {
    skip_ws();
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) fail("expected point");
    std::uint64_t v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + static_cast<std::uint64_t>(text[pos] - '0');
      if (v > 1'000'000) fail("point too large");
      ++pos;
    }
    return static_cast<std::uint32_t>(v);
  }

  // One permutation: a (possibly empty) sequence of cycles, at least one "(...)".
  std::vector<std::vector<std::uint32_t>> permutation() {
    std::vector<std::vector<std::uint32_t>> cycles;
    if (peek() != '(') fail("expected '('");
    while (peek() == '(') {
      ++pos;
      std::vector<std::uint32_t> cyc;
      while (peek() != ')') {
        if (at_end()) fail("unterminated cycle");
        if (!cyc.empty() && peek() == ',') ++pos;
        cyc.push_back(number());
      }
      ++pos;
      std::vector<std::uint32_t> sorted = cyc;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) fail("repeated point in cycle");
      if (!cyc.empty()) cycles.push_back(std::move(cyc));
    }
    return cycles;
  }
};

inline Permutation assemble(const std::vector<std::vector<std::uint32_t>>& cycles, std::size_t degree) {
  Permutation p(degree);
  for (const auto& c : cycles) p = p * Permutation::cycle(degree, c);
  return p;
}

inline std::size_t cycles_bound(const std::vector<std::vector<std::uint32_t>>& cycles) {
  std::size_t bound = 0;
  for (const auto& c : cycles)
    for (auto x : c) bound = std::max<std::size_t>(bound, x + 1);
  return bound;
}

}  // namespace detail

/// Parses "(0 1 2)(3 4)"; cycles are composed left to right. With
/// degree == 0 the degree is the largest mentioned point + 1.
inline Permutation parse_cycles(std::string_view text, std::size_t degree = 0) {
  detail::CycleParser p{text};
  auto cycles = p.permutation();
  if (!p.at_end()) p.fail("trailing characters");
  const auto bound = detail::cycles_bound(cycles);
  if (degree == 0) degree = std::max<std::size_t>(bound, 1);
  if (bound > degree) throw ParseError("cycle notation: point exceeds degree " + std::to_string(degree));
  return detail::assemble(cycles, degree);
}

/// Parses a comma-separated list "(0 1 2 3),(0 1)". All results share one
/// degree: the given one, or the largest point + 1 over the whole list.
inline std::vector<Permutation> parse_permutation_list(std::string_view text, std::size_t degree = 0) {
  detail::CycleParser p{text};
  std::vector<std::vector<std::vector<std::uint32_t>>> all;
  if (p.at_end()) return {};
  while (true) {
    all.push_back(p.permutation());
    if (p.at_end()) break;
    if (p.peek() != ',') p.fail("expected ',' between permutations");
    ++p.pos;
  }
  std::size_t bound = 0;
  for (const auto& c : all) bound = std::max(bound, detail::cycles_bound(c));
  if (degree == 0) degree = std::max<std::size_t>(bound, 1);
  if (bound > degree) throw ParseError("cycle notation: point exceeds degree " + std::to_string(degree));
  std::vector<Permutation> out;
  for (const auto& c : all) out.push_back(detail::assemble(c, degree));
  return out;
}

}  // namespace bipro
