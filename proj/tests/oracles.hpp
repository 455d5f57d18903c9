#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's closure, lattice or character code.

#include <complex>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "bipro/group.hpp"
#include "bipro/perm.hpp"

namespace oracle {

using Images = std::vector<std::uint32_t>;

inline Images compose(const Images& a, const Images& b) {
  Images out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = b[a[i]];
  return out;
}

/// Breadth-first word enumeration over the generators.
inline std::set<Images> word_closure(std::size_t degree, const std::vector<bipro::Permutation>& gens) {
  Images id(degree);
  for (std::size_t i = 0; i < degree; ++i) id[i] = static_cast<std::uint32_t>(i);
  std::set<Images> seen{id};
  std::deque<Images> queue{id};
  while (!queue.empty()) {
    auto x = queue.front();
    queue.pop_front();
    for (const auto& s : gens) {
      auto y = compose(x, s.images());
      if (seen.insert(y).second) queue.push_back(y);
    }
  }
  return seen;
}

/// Element-index subsets closed under the group law; by finiteness these are
/// exactly the subgroups. Exhaustive over 2^(n-1) subsets containing e.
inline std::set<std::vector<bool>> subgroups_by_subsets(const bipro::Group& g) {
  const std::size_t n = g.order();
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  std::map<Images, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[g.element(i).images()] = i;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a][b] = index.at(compose(g.element(a).images(), g.element(b).images()));
  std::set<std::vector<bool>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
    std::vector<bool> in(n, false);
    in[0] = true;
    for (std::size_t i = 1; i < n; ++i) in[i] = (mask >> (i - 1)) & 1U;
    bool closed = true;
    for (std::size_t a = 0; a < n && closed; ++a)
      for (std::size_t b = 0; b < n && closed; ++b)
        if (in[a] && in[b] && !in[table[a][b]]) closed = false;
    if (closed) out.insert(in);
  }
  return out;
}

/// Subgroups generated by at most three elements, by word closure. For groups
/// whose subgroups are all 3-generated this is the full list.
inline std::set<std::set<Images>> subgroups_by_triples(const bipro::Group& g) {
  std::set<std::set<Images>> out;
  const std::size_t n = g.order();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b)
      for (std::size_t c = b; c < n; ++c)
        out.insert(word_closure(g.degree(), {g.element(a), g.element(b), g.element(c)}));
  return out;
}

inline std::size_t divisor_count(std::size_t n) {
  std::size_t c = 0;
  for (std::size_t d = 1; d <= n; ++d) c += n % d == 0;
  return c;
}

/// Cover relations d | e with e/d prime.
inline std::size_t divisor_covers(std::size_t n) {
  auto prime = [](std::size_t p) {
    if (p < 2) return false;
    for (std::size_t q = 2; q * q <= p; ++q)
      if (p % q == 0) return false;
    return true;
  };
  std::size_t c = 0;
  for (std::size_t d = 1; d <= n; ++d)
    for (std::size_t e = d + 1; e <= n; ++e)
      if (n % d == 0 && n % e == 0 && e % d == 0 && prime(e / d)) ++c;
  return c;
}

/// Conjugacy class sizes by direct orbit computation.
inline std::multiset<std::size_t> class_sizes(const bipro::Group& g) {
  std::set<Images> done;
  std::multiset<std::size_t> sizes;
  for (const auto& x : g.elements()) {
    if (done.count(x.images())) continue;
    std::set<Images> orbit;
    for (const auto& y : g.elements())
      orbit.insert(compose(compose(y.inverse().images(), x.images()), y.images()));
    done.insert(orbit.begin(), orbit.end());
    sizes.insert(orbit.size());
  }
  return sizes;
}

using Mat = Eigen::Matrix2cd;

/// Matrix representation defined on generators and extended along words;
/// `consistent` is false when the assignment does not extend to a homomorphism.
struct MatrixRep {
  std::vector<Mat> rho;
  bool consistent = true;

  std::complex<double> character(std::size_t x) const { return rho[x].trace(); }
};

inline MatrixRep extend(const bipro::Group& g, const std::vector<std::size_t>& gens, const std::vector<Mat>& mats) {
  MatrixRep r;
  r.rho.assign(g.order(), Mat::Zero());
  std::vector<bool> set(g.order(), false);
  r.rho[0] = Mat::Identity();
  set[0] = true;
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    auto x = queue.front();
    queue.pop_front();
    for (std::size_t k = 0; k < gens.size(); ++k) {
      auto y = g.mul(x, gens[k]);
      Mat m = r.rho[x] * mats[k];
      if (!set[y]) {
        set[y] = true;
        r.rho[y] = m;
        queue.push_back(y);
      }
    }
  }
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t b = 0; b < g.order(); ++b)
      if ((r.rho[g.mul(a, b)] - r.rho[a] * r.rho[b]).cwiseAbs().maxCoeff() > 1e-12) r.consistent = false;
  return r;
}

inline std::size_t first_of_order(const bipro::Group& g, std::size_t order, std::size_t after = 0) {
  for (std::size_t x = after + 1; x < g.order(); ++x)
    if (g.element(x).order() == order) return x;
  return 0;
}

/// Standard representation of S3: rotation by 120 degrees and a reflection.
inline MatrixRep s3_standard(const bipro::Group& g) {
  const double c = -0.5, s = std::sqrt(3.0) / 2;
  Mat r, f;
  r << c, -s, s, c;
  f << 1, 0, 0, -1;
  return extend(g, {first_of_order(g, 3), first_of_order(g, 2)}, {r, f});
}

/// Quaternion units i, j as 2x2 complex matrices.
inline MatrixRep q8_quaternion(const bipro::Group& g) {
  const std::complex<double> I(0, 1);
  Mat i, j;
  i << I, 0, 0, -I;
  j << 0, 1, -1, 0;
  const auto a = first_of_order(g, 4);
  std::size_t b = a;
  while (true) {
    b = first_of_order(g, 4, b);
    if (b != g.mul(a, g.mul(a, a))) break;
  }
  return extend(g, {a, b}, {i, j});
}

}  // namespace oracle
