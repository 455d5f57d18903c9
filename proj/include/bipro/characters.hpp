#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bipro/config.hpp"
#include "bipro/error.hpp"
#include "bipro/group.hpp"
#include "bipro/random.hpp"

namespace bipro {

using cplx = std::complex<double>;

/// a(C, D, E) = #{(c, d) in C x D : c d = e0} for a fixed representative e0 of E.
struct StructureConstants {
  std::size_t k = 0;
  std::vector<long> a;
  long operator()(std::size_t c, std::size_t d, std::size_t e) const { return a[(c * k + d) * k + e]; }
};

inline StructureConstants class_structure_constants(const Group& g) {
  const auto& classes = g.classes();
  StructureConstants sc{classes.size(), std::vector<long>(classes.size() * classes.size() * classes.size(), 0)};
  const std::size_t k = sc.k;
  for (std::size_t e = 0; e < k; ++e) {
    const auto e0 = classes[e].front();
    for (std::size_t c = 0; c < k; ++c)
      for (auto x : classes[c]) {
        const auto y = g.mul(g.inv(x), e0);  // x y = e0
        sc.a[(c * k + g.class_of(y)) * k + e] += 1;
      }
  }
  return sc;
}

/// Irreducible complex characters, one row per irrep, one column per class
/// (in Group::classes() order). Row 0 is the trivial character; rows are
/// sorted by degree, then by character values.
struct CharacterTable {
  GroupPtr group;
  std::vector<std::size_t> class_sizes;
  std::vector<int> degrees;
  std::vector<std::vector<cplx>> chi;
  std::uint64_t seed = kDefaultSeed;  // seed that produced the table
  Tolerances tol;
  double orthogonality_residual = 0.0;

  std::size_t size() const { return degrees.size(); }
  cplx value(std::size_t irrep, std::size_t element) const { return chi[irrep][group->class_of(element)]; }
};

namespace detail {

inline double row_orthogonality_residual(const std::vector<std::vector<cplx>>& chi,
                                         const std::vector<std::size_t>& sizes, std::size_t order) {
  double worst = 0.0;
  for (std::size_t i = 0; i < chi.size(); ++i)
    for (std::size_t j = 0; j < chi.size(); ++j) {
      cplx s = 0;
      for (std::size_t c = 0; c < sizes.size(); ++c)
        s += static_cast<double>(sizes[c]) * chi[i][c] * std::conj(chi[j][c]);
      s /= static_cast<double>(order);
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

inline bool character_less(const std::vector<cplx>& a, int da, const std::vector<cplx>& b, int db) {
  if (da != db) return da < db;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double ar = std::round(a[c].real() * 1e6), br = std::round(b[c].real() * 1e6);
    if (ar != br) return ar > br;
    const double ai = std::round(a[c].imag() * 1e6), bi = std::round(b[c].imag() * 1e6);
    if (ai != bi) return ai > bi;
  }
  return false;
}

}  // namespace detail

/// Character table from the class-multiplication matrices.
///
/// The matrices A_C with (A_C)_{D,E} = a(C,D,E) commute and share the
/// eigenvectors w_E = |E| chi(E) / chi(1). A seeded random real combination
/// of them has simple spectrum with probability one; its eigenvectors are
/// normalized at the identity class and scaled by the degree recovered from
/// the first orthogonality relation. A clustered spectrum or a failed
/// validation retries with seed + 1.
inline CharacterTable character_table(GroupPtr group, const Tolerances& tol = {}, std::uint64_t seed = kDefaultSeed,
                                      int retries = kDefaultRetries) {
  const Group& g = *group;
  const auto sc = class_structure_constants(g);
  const std::size_t k = sc.k;
  std::vector<std::size_t> sizes;
  for (const auto& c : g.classes()) sizes.push_back(c.size());
  const double order = static_cast<double>(g.order());

  std::string last_failure = "no attempt made";
  for (int attempt = 0; attempt < retries; ++attempt) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
    Rng rng(s);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t c = 0; c < k; ++c) {
      const double r = rng.symmetric();
      for (std::size_t d = 0; d < k; ++d)
        for (std::size_t e = 0; e < k; ++e)
          m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(e)) += r * static_cast<double>(sc(c, d, e));
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success) {
      last_failure = "eigen solver did not converge";
      continue;
    }
    const auto& vals = solver.eigenvalues();
    double scale = 1.0;
    for (Eigen::Index i = 0; i < vals.size(); ++i) scale = std::max(scale, std::abs(vals(i)));
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < vals.size(); ++i)
      for (Eigen::Index j = i + 1; j < vals.size(); ++j) gap = std::min(gap, std::abs(vals(i) - vals(j)));
    if (gap < std::sqrt(tol.eigen) * scale) {
      last_failure = "eigenvalue clustering (gap " + std::to_string(gap) + ")";
      continue;
    }

    std::vector<std::vector<cplx>> chi;
    std::vector<int> degrees;
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) {
      Eigen::VectorXcd w = solver.eigenvectors().col(static_cast<Eigen::Index>(i));
      if (std::abs(w(0)) < tol.eigen) {
        ok = false;
        last_failure = "eigenvector vanishes at the identity class";
        break;
      }
      w /= w(0);
      double norm = 0.0;
      for (std::size_t c = 0; c < k; ++c) norm += std::norm(w(static_cast<Eigen::Index>(c))) / static_cast<double>(sizes[c]);
      const double d = std::sqrt(order / norm);
      const double rd = std::round(d);
      if (std::abs(d - rd) > tol.rounding || rd < 1) {
        ok = false;
        last_failure = "non-integral degree " + std::to_string(d);
        break;
      }
      std::vector<cplx> row(k);
      for (std::size_t c = 0; c < k; ++c) row[c] = rd * w(static_cast<Eigen::Index>(c)) / static_cast<double>(sizes[c]);
      chi.push_back(std::move(row));
      degrees.push_back(static_cast<int>(rd));
    }
    if (!ok) continue;

    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      return detail::character_less(chi[a], degrees[a], chi[b], degrees[b]);
    });
    CharacterTable ct;
    ct.group = group;
    ct.class_sizes = sizes;
    ct.seed = s;
    ct.tol = tol;
    for (auto p : perm) {
      ct.chi.push_back(chi[p]);
      ct.degrees.push_back(degrees[p]);
    }
    long sum_sq = 0;
    for (int d : ct.degrees) sum_sq += static_cast<long>(d) * d;
    ct.orthogonality_residual = detail::row_orthogonality_residual(ct.chi, sizes, g.order());
    if (sum_sq != static_cast<long>(g.order())) {
      last_failure = "sum of squared degrees " + std::to_string(sum_sq) + " != |G|";
      continue;
    }
    if (ct.orthogonality_residual >= tol.eigen) {
      last_failure = "orthogonality residual " + std::to_string(ct.orthogonality_residual);
      continue;
    }
    return ct;
  }
  throw IntegrityError("character table failed after " + std::to_string(retries) + " seeds from " +
                       std::to_string(seed) + ": " + last_failure);
}

/// dim V_i^K = |K|^-1 sum_{k in K} chi_i(k), rounded; residual-checked.
inline int fixed_dim(const CharacterTable& ct, std::size_t irrep, const SubgroupHandle& k) {
  cplx s = 0;
  for (auto x : k.elements()) s += ct.value(irrep, x);
  s /= static_cast<double>(k.order());
  const double r = std::round(s.real());
  if (std::abs(s - r) >= ct.tol.rounding)
    throw IntegrityError("fixed-point dimension " + std::to_string(s.real()) + " is not integral");
  return static_cast<int>(r);
}

/// Greedy small generating set of a subgroup (element indices).
inline std::vector<std::size_t> small_generators(const Group& g, const SubgroupHandle& h) {
  std::vector<std::size_t> gens;
  auto current = trivial_subgroup(g);
  for (auto x : h.elements()) {
    if (current.contains(x)) continue;
    gens.push_back(x);
    current = generated_subgroup(g, gens);
  }
  return gens;
}

/// G_(V_i^H): g fixes V^H pointwise iff V^<H,g> = V^H, and the fixed spaces
/// are nested, so comparing dimensions suffices.
inline SubgroupHandle pointwise_stabilizer(const CharacterTable& ct, std::size_t irrep, const SubgroupHandle& h) {
  const Group& g = *ct.group;
  const int base = fixed_dim(ct, irrep, h);
  auto seed = small_generators(g, h);
  seed.push_back(0);
  Bitset out(g.order());
  for (std::size_t x = 0; x < g.order(); ++x) {
    if (h.contains(x)) {
      out.set(x);
      continue;
    }
    seed.back() = x;
    if (fixed_dim(ct, irrep, generated_subgroup(g, seed)) == base) out.set(x);
  }
  if (!h.members().is_subset_of(out) || !is_subgroup(g, out))
    throw IntegrityError("pointwise stabilizer is not a subgroup containing H");
  return SubgroupHandle(std::move(out));
}

/// First irrep V with G_(V^H) = H, if any.
inline std::optional<std::size_t> is_linearly_primitive(const CharacterTable& ct, const SubgroupHandle& h) {
  for (std::size_t i = 0; i < ct.size(); ++i)
    if (pointwise_stabilizer(ct, i, h) == h) return i;
  return std::nullopt;
}

/// ker chi_i = {g : |chi_i(g) - d_i| < tol}.
inline SubgroupHandle kernel(const CharacterTable& ct, std::size_t irrep) {
  Bitset b(ct.group->order());
  for (std::size_t x = 0; x < ct.group->order(); ++x)
    if (std::abs(ct.value(irrep, x) - static_cast<double>(ct.degrees[irrep])) < ct.tol.rounding) b.set(x);
  return SubgroupHandle(std::move(b));
}

struct FaithfulComponents {
  std::size_t count = 0;
  std::vector<std::size_t> irreps;
};

/// Smallest set of irreps whose kernels intersect trivially.
inline FaithfulComponents min_faithful_components(const CharacterTable& ct) {
  const std::size_t n = ct.size();
  if (ct.group->order() == 1) return {};
  std::vector<Bitset> kernels;
  for (std::size_t i = 0; i < n; ++i) kernels.push_back(kernel(ct, i).members());
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    while (true) {
      Bitset acc = kernels[pick[0]];
      for (std::size_t t = 1; t < k; ++t) acc &= kernels[pick[t]];
      if (acc.count() == 1) return {k, pick};
      // next combination in lexicographic order
      std::size_t t = k;
      while (t > 0 && pick[t - 1] == n - k + t - 1) --t;
      if (t == 0) break;
      ++pick[t - 1];
      for (std::size_t u = t; u < k; ++u) pick[u] = pick[u - 1] + 1;
    }
  }
  throw IntegrityError("no set of irreducible characters is faithful");
}

/// n(i, j, k): multiplicity of V_k in V_i ⊗ V_j.
struct FusionTensor {
  std::size_t n = 0;
  std::vector<int> data;
  int operator()(std::size_t i, std::size_t j, std::size_t k) const { return data[(i * n + j) * n + k]; }
};

inline FusionTensor fusion_coeffs(const CharacterTable& ct) {
  const std::size_t n = ct.size();
  FusionTensor ft{n, std::vector<int>(n * n * n, 0)};
  const double order = static_cast<double>(ct.group->order());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      long dims = 0;
      for (std::size_t k = 0; k < n; ++k) {
        cplx s = 0;
        for (std::size_t c = 0; c < ct.class_sizes.size(); ++c)
          s += static_cast<double>(ct.class_sizes[c]) * ct.chi[i][c] * ct.chi[j][c] * std::conj(ct.chi[k][c]);
        s /= order;
        const double r = std::round(s.real());
        if (std::abs(s - r) >= ct.tol.rounding || r < 0)
          throw IntegrityError("fusion coefficient is not a non-negative integer");
        ft.data[(i * n + j) * n + k] = static_cast<int>(r);
        dims += static_cast<long>(r) * ct.degrees[k];
      }
      if (dims != static_cast<long>(ct.degrees[i]) * ct.degrees[j])
        throw IntegrityError("fusion dimension identity fails");
    }
  return ft;
}

/// Irreps occurring in some tensor power V_i^{⊗m}, m >= 1.
inline std::vector<std::size_t> tensor_reachability(const FusionTensor& ft, std::size_t irrep) {
  std::vector<bool> seen(ft.n, false);
  std::vector<std::size_t> frontier{irrep};
  seen[irrep] = true;
  for (std::size_t f = 0; f < frontier.size(); ++f)
    for (std::size_t k = 0; k < ft.n; ++k)
      if (!seen[k] && ft(irrep, frontier[f], k) > 0) {
        seen[k] = true;
        frontier.push_back(k);
      }
  std::sort(frontier.begin(), frontier.end());
  return frontier;
}

}  // namespace bipro
