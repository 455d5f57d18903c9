#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bipro/characters.hpp"
#include "bipro/config.hpp"
#include "bipro/error.hpp"
#include "bipro/group.hpp"
#include "bipro/random.hpp"

namespace bipro {

/// The two concrete 2-box spaces of a finite group G.
///
/// function:       C^G, the 2-boxes of R ⊆ R⋊G. Pointwise product,
///                 tr(x) = |G|^-1 Σ x(g), e_1 = δ_e, id = 1.
/// group_algebra:  CG, the 2-boxes of R^G ⊆ R. Convolution product,
///                 tr(a) = a_e, e_1 = |G|^-1 Σ g, id = e.
///
/// In both, δ = |G|^{1/2}, tr(id) = 1 and tr(e_1) = δ^-2.
enum class Model { function, group_algebra };

inline const char* model_name(Model m) { return m == Model::function ? "function" : "group_algebra"; }
inline Model opposite(Model m) { return m == Model::function ? Model::group_algebra : Model::function; }

/// A 2-box: a coefficient vector over the group's canonical element order.
class TwoBoxElement {
 public:
  TwoBoxElement(Model model, GroupPtr group, std::vector<cplx> coeffs)
      : model_(model), group_(std::move(group)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != group_->order()) throw DomainError("coefficient count differs from group order");
  }

  static TwoBoxElement zero(Model m, GroupPtr g) {
    const auto n = g->order();
    return {m, std::move(g), std::vector<cplx>(n, 0.0)};
  }
  /// The unit id of the model's product.
  static TwoBoxElement identity(Model m, GroupPtr g) {
    auto z = zero(m, std::move(g));
    if (m == Model::function)
      std::fill(z.coeffs_.begin(), z.coeffs_.end(), 1.0);
    else
      z.coeffs_[Group::identity()] = 1.0;
    return z;
  }
  /// The Jones projection e_1.
  static TwoBoxElement jones(Model m, GroupPtr g) {
    auto z = zero(m, std::move(g));
    if (m == Model::function)
      z.coeffs_[Group::identity()] = 1.0;
    else
      std::fill(z.coeffs_.begin(), z.coeffs_.end(), 1.0 / static_cast<double>(z.size()));
    return z;
  }
  /// e_g in the function model, the group element g in the group algebra.
  static TwoBoxElement basis(Model m, GroupPtr g, std::size_t element) {
    auto z = zero(m, std::move(g));
    z.coeffs_.at(element) = 1.0;
    return z;
  }

  Model model() const { return model_; }
  const Group& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  double delta() const { return std::sqrt(static_cast<double>(group_->order())); }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx operator[](std::size_t i) const { return coeffs_[i]; }
  cplx& operator[](std::size_t i) { return coeffs_[i]; }

  TwoBoxElement& operator+=(const TwoBoxElement& o) {
    require_same(o);
    for (std::size_t i = 0; i < size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  TwoBoxElement& operator-=(const TwoBoxElement& o) {
    require_same(o);
    for (std::size_t i = 0; i < size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  TwoBoxElement& operator*=(cplx s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  friend TwoBoxElement operator+(TwoBoxElement a, const TwoBoxElement& b) { return a += b; }
  friend TwoBoxElement operator-(TwoBoxElement a, const TwoBoxElement& b) { return a -= b; }
  friend TwoBoxElement operator*(cplx s, TwoBoxElement a) { return a *= s; }
  friend TwoBoxElement operator*(double s, TwoBoxElement a) { return a *= s; }

  void require_same(const TwoBoxElement& o) const {
    if (o.model_ != model_) throw DomainError("2-box model mismatch");
    if (o.group_ != group_ && o.group_->elements() != group_->elements())
      throw DomainError("2-box elements over different groups");
  }

 private:
  Model model_;
  GroupPtr group_;
  std::vector<cplx> coeffs_;
};

inline double max_abs(const TwoBoxElement& a) {
  double m = 0.0;
  for (auto c : a.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

/// Max-abs coefficient difference.
inline double distance(const TwoBoxElement& a, const TwoBoxElement& b) { return max_abs(a - b); }

/// The model's own product: pointwise (function) or convolution (group algebra).
inline TwoBoxElement mult(const TwoBoxElement& a, const TwoBoxElement& b) {
  a.require_same(b);
  auto out = TwoBoxElement::zero(a.model(), a.group_ptr());
  if (a.model() == Model::function) {
    for (std::size_t g = 0; g < a.size(); ++g) out[g] = a[g] * b[g];
    return out;
  }
  const auto& grp = a.group();
  for (std::size_t h = 0; h < a.size(); ++h) {
    if (a[h] == cplx{}) continue;
    for (std::size_t k = 0; k < a.size(); ++k)
      if (b[k] != cplx{}) out[grp.mul(h, k)] += a[h] * b[k];
  }
  return out;
}

inline TwoBoxElement adjoint(const TwoBoxElement& a) {
  auto out = TwoBoxElement::zero(a.model(), a.group_ptr());
  for (std::size_t g = 0; g < a.size(); ++g)
    out[a.model() == Model::function ? g : a.group().inv(g)] = std::conj(a[g]);
  return out;
}

/// Model-crossing Fourier map: φ(x)_g = δ^-1 x(g) from the function model to
/// the group algebra, and its inverse in the other direction.
inline TwoBoxElement fourier(const TwoBoxElement& a) {
  const double s = a.model() == Model::function ? 1.0 / a.delta() : a.delta();
  std::vector<cplx> c = a.coeffs();
  for (auto& x : c) x *= s;
  return {opposite(a.model()), a.group_ptr(), std::move(c)};
}

/// a ∗ b = φ(φ^-1(a) φ^-1(b)) in the group algebra, φ^-1(φ(a) φ(b)) in the
/// function model; closed forms δ a_g b_g and δ^-1 Σ_h x(h) y(h^-1 g).
inline TwoBoxElement coproduct(const TwoBoxElement& a, const TwoBoxElement& b) {
  a.require_same(b);
  auto out = TwoBoxElement::zero(a.model(), a.group_ptr());
  if (a.model() == Model::group_algebra) {
    for (std::size_t g = 0; g < a.size(); ++g) out[g] = a.delta() * a[g] * b[g];
    return out;
  }
  const auto& grp = a.group();
  for (std::size_t h = 0; h < a.size(); ++h) {
    if (a[h] == cplx{}) continue;
    for (std::size_t k = 0; k < a.size(); ++k)
      if (b[k] != cplx{}) out[grp.mul(h, k)] += a[h] * b[k];
  }
  out *= 1.0 / a.delta();
  return out;
}

inline cplx trace(const TwoBoxElement& a) {
  if (a.model() == Model::group_algebra) return a[Group::identity()];
  cplx s = 0;
  for (auto c : a.coeffs()) s += c;
  return s / static_cast<double>(a.size());
}

/// ⟨a|b⟩ = tr(b* a).
inline cplx inner(const TwoBoxElement& a, const TwoBoxElement& b) { return trace(mult(adjoint(b), a)); }

/// Reindex g -> g^-1 (no conjugation).
inline TwoBoxElement contragredient(const TwoBoxElement& a) {
  auto out = TwoBoxElement::zero(a.model(), a.group_ptr());
  for (std::size_t g = 0; g < a.size(); ++g) out[a.group().inv(g)] = a[g];
  return out;
}

/// Operator realization: diagonal matrix (function model) or the left
/// regular representation λ(a)_{x,y} = a_{x y^-1} (group algebra).
inline Eigen::MatrixXcd operator_matrix(const TwoBoxElement& a) {
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  if (a.model() == Model::function) {
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = a[static_cast<std::size_t>(i)];
    return m;
  }
  const auto& g = a.group();
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < a.size(); ++y)
      m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = a[g.mul(x, g.inv(y))];
  return m;
}

/// Inverse of operator_matrix for the group algebra: a_g = |G|^-1 Σ_y M(g y, y).
/// Throws IntegrityError if the matrix is not in λ(CG) within tolerance.
inline TwoBoxElement from_operator(const GroupPtr& group, const Eigen::MatrixXcd& m, double tol) {
  const auto& g = *group;
  const std::size_t n = g.order();
  auto out = TwoBoxElement::zero(Model::group_algebra, group);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      out[g.mul(x, g.inv(y))] += m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
  out *= 1.0 / static_cast<double>(n);
  double residual = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      residual = std::max(residual, std::abs(m(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) -
                                             out[g.mul(x, g.inv(y))]));
  if (residual >= tol)
    throw IntegrityError("operator is not in the group algebra (residual " + std::to_string(residual) + ")");
  return out;
}

inline bool is_hermitian(const TwoBoxElement& a, double tol) { return distance(a, adjoint(a)) < tol; }

namespace detail {

struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

inline Spectrum hermitian_spectrum(const TwoBoxElement& a) {
  Eigen::MatrixXcd m = operator_matrix(a);
  m = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() == Eigen::Success) return {solver.eigenvalues(), solver.eigenvectors()};
  // The tridiagonal QR can stall on large degenerate clusters; a Jacobi SVD
  // of the shifted, positive definite matrix yields the same eigenpairs.
  if (!m.allFinite()) throw IntegrityError("Hermitian eigensolver failed on non-finite input");
  const double shift = m.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  const auto n = m.rows();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m + shift * Eigen::MatrixXcd::Identity(n, n), Eigen::ComputeFullU);
  Spectrum out{Eigen::VectorXd(n), Eigen::MatrixXcd(n, n)};
  // singular values are descending; store ascending like the QR path
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = svd.singularValues()(n - 1 - i) - shift;
    out.vectors.col(i) = svd.matrixU().col(n - 1 - i);
  }
  return out;
}

/// Groups ascending eigenvalues into clusters [begin, end).
inline std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters(const Eigen::VectorXd& vals, double tol) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= vals.size(); ++i)
    if (i == vals.size() || vals(i) - vals(i - 1) > tol) {
      out.emplace_back(start, i);
      start = i;
    }
  return out;
}

inline Eigen::MatrixXcd projector(const Eigen::MatrixXcd& vecs, const std::vector<Eigen::Index>& cols) {
  const auto n = vecs.rows();
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
  for (auto c : cols) p += vecs.col(c) * vecs.col(c).adjoint();
  return p;
}

}  // namespace detail

/// Hermitian with spectrum ≥ -tol in the operator realization.
inline bool is_positive(const TwoBoxElement& a, double tol = 1e-8) {
  if (a.model() == Model::function) {
    for (auto c : a.coeffs())
      if (std::abs(c.imag()) >= tol || c.real() <= -tol) return false;
    return true;
  }
  if (!is_hermitian(a, tol)) return false;
  return detail::hermitian_spectrum(a).values.minCoeff() > -tol;
}

inline bool is_projection(const TwoBoxElement& p, double tol) {
  return distance(mult(p, p), p) < tol && distance(adjoint(p), p) < tol;
}

/// p ≤ q for projections: p q = p.
inline bool projection_leq(const TwoBoxElement& p, const TwoBoxElement& q, double tol) {
  return distance(mult(p, q), p) < tol;
}

/// Range projection of a positive element. Eigenvalues above
/// tol * max(1, spectral radius) count as range.
inline TwoBoxElement range_projection(const TwoBoxElement& a, const Tolerances& tol = {}) {
  const auto not_positive = [] { return DomainError("range_projection requires a positive element"); };
  if (a.model() == Model::function) {
    if (!is_positive(a, tol.eigen)) throw not_positive();
    double top = 0.0;
    for (auto c : a.coeffs()) top = std::max(top, c.real());
    const double thr = tol.eigen * std::max(1.0, top);
    auto out = TwoBoxElement::zero(Model::function, a.group_ptr());
    for (std::size_t g = 0; g < a.size(); ++g)
      if (a[g].real() > thr) out[g] = 1.0;
    return out;
  }
  if (!is_hermitian(a, tol.eigen)) throw not_positive();
  const auto spec = detail::hermitian_spectrum(a);
  if (spec.values.minCoeff() <= -tol.eigen) throw not_positive();
  const double thr = tol.eigen * std::max(1.0, spec.values.maxCoeff());
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < spec.values.size(); ++i)
    if (spec.values(i) > thr) cols.push_back(i);
  auto p = from_operator(a.group_ptr(), detail::projector(spec.vectors, cols), tol.projection);
  if (!is_projection(p, tol.projection)) throw IntegrityError("range projection is not a projection");
  return p;
}

/// a ⪯ b: R(a) ≤ R(b).
inline bool precedes(const TwoBoxElement& a, const TwoBoxElement& b, const Tolerances& tol = {}) {
  return projection_leq(range_projection(a, tol), range_projection(b, tol), tol.projection);
}

/// a ∼ b: R(a) = R(b).
inline bool similar(const TwoBoxElement& a, const TwoBoxElement& b, const Tolerances& tol = {}) {
  return distance(range_projection(a, tol), range_projection(b, tol)) < tol.projection;
}

/// Central in the model's product (every element of C^G is central).
inline bool is_central(const TwoBoxElement& a, double tol) {
  if (a.model() == Model::function) return true;
  const auto& g = a.group();
  for (std::size_t s = 0; s < g.order(); ++s)
    for (std::size_t x = 0; x < g.order(); ++x)
      if (std::abs(a[x] - a[g.mul(g.mul(s, x), g.inv(s))]) >= tol) return false;
  return true;
}

/// Per-clause outcome of the biprojection characterization
/// e_1 ≤ b = b² = b* = b̄ ∼ b∗b, b∗b = δ tr(b) b, φ(b) ∝ projection.
struct BiprojectionCheck {
  bool ok = false;
  std::map<std::string, double> residuals;
  double max_residual() const {
    double m = 0.0;
    for (const auto& [k, v] : residuals) m = std::max(m, v);
    return m;
  }
};

inline BiprojectionCheck is_biprojection(const TwoBoxElement& b, const Tolerances& tol = {}) {
  constexpr double kFail = std::numeric_limits<double>::infinity();
  BiprojectionCheck r;
  const auto e1 = TwoBoxElement::jones(b.model(), b.group_ptr());
  r.residuals["nonzero"] = max_abs(b) > tol.projection ? 0.0 : kFail;
  r.residuals["idempotent"] = distance(mult(b, b), b);
  r.residuals["self_adjoint"] = distance(adjoint(b), b);
  r.residuals["contragredient"] = distance(contragredient(b), b);
  r.residuals["e1_below"] = distance(mult(b, e1), e1);
  const auto bb = coproduct(b, b);
  r.residuals["coproduct_scalar"] = distance(bb, (b.delta() * trace(b)) * b);
  try {
    r.residuals["coproduct_range"] = is_positive(bb, tol.eigen) ? distance(range_projection(bb, tol), b) : kFail;
  } catch (const IntegrityError&) {
    r.residuals["coproduct_range"] = kFail;
  }
  const auto f = fourier(b);
  const cplx tf = trace(f);
  if (std::abs(tf) > tol.projection) {
    const cplx lambda = trace(mult(f, f)) / tf;
    const auto fp = (1.0 / lambda) * f;
    r.residuals["fourier_projection"] = std::max(distance(mult(fp, fp), fp), distance(adjoint(fp), fp));
  } else {
    r.residuals["fourier_projection"] = kFail;
  }
  r.ok = r.max_residual() < tol.projection;
  return r;
}

struct Biprojection {
  TwoBoxElement element;
  SubgroupHandle subgroup;
};

/// Jones projection of the intermediate object for K: indicator of K in the
/// function model, |K|^-1 Σ_{k∈K} k in the group algebra. The group-algebra
/// correspondence reverses order: {e} gives id and G gives e_1.
inline Biprojection biprojection_of_subgroup(Model m, const GroupPtr& g, const SubgroupHandle& k) {
  if (!is_subgroup(*g, k.members())) throw DomainError("biprojection_of_subgroup: not a subgroup");
  auto e = TwoBoxElement::zero(m, g);
  const double v = m == Model::function ? 1.0 : 1.0 / static_cast<double>(k.order());
  for (auto x : k.elements()) e[x] = v;
  return {std::move(e), k};
}

/// Reads the subgroup off a biprojection's support; the coefficients must be
/// constant on a support that is a subgroup.
inline SubgroupHandle subgroup_of_biprojection(const TwoBoxElement& b, const Tolerances& tol = {}) {
  const auto& g = b.group();
  const double top = max_abs(b);
  Bitset support(g.order());
  for (std::size_t x = 0; x < g.order(); ++x)
    if (std::abs(b[x]) > 0.5 * top) support.set(x);
  if (!is_subgroup(g, support)) throw IntegrityError("biprojection support is not a subgroup");
  const double expected = b.model() == Model::function ? 1.0 : 1.0 / static_cast<double>(support.count());
  for (std::size_t x = 0; x < g.order(); ++x) {
    const double want = support.test(x) ? expected : 0.0;
    if (std::abs(b[x] - want) >= tol.projection)
      throw IntegrityError("biprojection coefficients are not constant on a subgroup");
  }
  return SubgroupHandle(std::move(support));
}

/// Smallest biprojection ⪰ a: the stable range projection p_n of
/// Σ_{k≤n} a^{∗k}. Ranges of positive sums are joins and R(x∗y) depends only
/// on R(x), R(y), so p_{2n} = R(p_n + p_n∗p_n). Doubling reaches the fixed
/// point in O(log |G|) steps, and p_{2n} = p_n already forces p_{n+1} = p_n.
inline Biprojection generate_biprojection(const TwoBoxElement& a, const Tolerances& tol = {}) {
  if (max_abs(a) < tol.projection) throw DomainError("generate_biprojection requires a nonzero element");
  auto p = range_projection(a, tol);
  bool stable = false;
  for (std::size_t span = 1; span <= 2 * a.size() + 2; span *= 2) {
    auto next = range_projection(p + coproduct(p, p), tol);
    if (distance(next, p) < tol.projection) {
      stable = true;
      break;
    }
    p = std::move(next);
  }
  if (!stable) throw IntegrityError("generated biprojection did not stabilize within |G| steps");
  const auto check = is_biprojection(p, tol);
  if (!check.ok)
    throw IntegrityError("generated projection fails the biprojection test (residual " +
                         std::to_string(check.max_residual()) + ")");
  auto k = subgroup_of_biprojection(p, tol);
  return {std::move(p), std::move(k)};
}

/// ⟨S⟩ = ⟨Σ_{s∈S} R(s)⟩ for positive s.
inline Biprojection generate_biprojection(const std::vector<TwoBoxElement>& set, const Tolerances& tol = {}) {
  if (set.empty()) throw DomainError("generate_biprojection: empty set");
  auto sum = range_projection(set.front(), tol);
  for (std::size_t i = 1; i < set.size(); ++i) sum += range_projection(set[i], tol);
  return generate_biprojection(sum, tol);
}

/// p_i = (d_i/|G|) Σ_g χ_i(g^-1) g, checked to be orthogonal idempotents
/// summing to id.
inline std::vector<TwoBoxElement> minimal_central_projections(const CharacterTable& ct, const Tolerances& tol = {}) {
  const auto& g = *ct.group;
  std::vector<TwoBoxElement> out;
  for (std::size_t i = 0; i < ct.size(); ++i) {
    auto p = TwoBoxElement::zero(Model::group_algebra, ct.group);
    for (std::size_t x = 0; x < g.order(); ++x)
      p[x] = static_cast<double>(ct.degrees[i]) / static_cast<double>(g.order()) * std::conj(ct.value(i, x));
    out.push_back(std::move(p));
  }
  auto sum = TwoBoxElement::zero(Model::group_algebra, ct.group);
  for (std::size_t i = 0; i < out.size(); ++i) {
    sum += out[i];
    for (std::size_t j = 0; j < out.size(); ++j) {
      const auto prod = mult(out[i], out[j]);
      const double r = i == j ? distance(prod, out[i]) : max_abs(prod);
      if (r >= tol.projection) throw IntegrityError("minimal central projections are not orthogonal idempotents");
    }
  }
  if (distance(sum, TwoBoxElement::identity(Model::group_algebra, ct.group)) >= tol.projection)
    throw IntegrityError("minimal central projections do not sum to id");
  return out;
}

/// Random Hermitian x + x* in the given model.
inline TwoBoxElement random_hermitian(Model m, const GroupPtr& g, Rng& rng) {
  auto x = TwoBoxElement::zero(m, g);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = m == Model::function ? cplx{rng.symmetric(), 0.0} : rng.complex();
  return x + adjoint(x);
}

/// A minimal projection u ≤ q sampled as the top spectral projection of q h q
/// for a random Hermitian h; `block_degree` is the degree d of the irrep
/// carrying q (central support), so minimality means tr(u) = d/|G|.
/// Returns nullopt when the sample is degenerate.
inline std::optional<TwoBoxElement> sample_minimal_projection(const TwoBoxElement& q, int block_degree, Rng& rng,
                                                              const Tolerances& tol = {}) {
  if (q.model() != Model::group_algebra) throw DomainError("sample_minimal_projection needs the group algebra");
  const auto h = mult(mult(q, random_hermitian(Model::group_algebra, q.group_ptr(), rng)), q);
  const auto spec = detail::hermitian_spectrum(h);
  const double scale = std::max(spec.values.cwiseAbs().maxCoeff(), 1e-300);
  const auto cl = detail::clusters(spec.values, 1e-6 * scale);
  // the largest-magnitude nonzero cluster
  std::optional<std::pair<Eigen::Index, Eigen::Index>> pick;
  double best = 0.0;
  for (const auto& c : cl) {
    const double v = std::abs(spec.values(c.first));
    if (v > 1e-6 * scale && v > best) {
      best = v;
      pick = c;
    }
  }
  if (!pick) return std::nullopt;
  std::vector<Eigen::Index> cols;
  for (auto i = pick->first; i < pick->second; ++i) cols.push_back(i);
  try {
    auto u = from_operator(q.group_ptr(), detail::projector(spec.vectors, cols), tol.projection);
    const double t = trace(u).real() * static_cast<double>(u.size());
    if (!is_projection(u, tol.projection) || !projection_leq(u, q, tol.projection) ||
        std::abs(t - block_degree) > 1e-6)
      return std::nullopt;
    return u;
  } catch (const IntegrityError&) {
    return std::nullopt;
  }
}

/// A minimal projection u ≤ p with ⟨u⟩ = ⟨p⟩, for a minimal central
/// projection p. Degree-1 blocks are already minimal.
inline TwoBoxElement minimal_projection_below(const TwoBoxElement& p, std::uint64_t seed = kDefaultSeed,
                                              const Tolerances& tol = {}, int retries = kDefaultRetries) {
  if (p.model() != Model::group_algebra) throw DomainError("minimal_projection_below needs the group algebra");
  if (!is_projection(p, tol.projection) || !is_central(p, tol.projection))
    throw DomainError("minimal_projection_below requires a central projection");
  const double d_real = std::sqrt(trace(p).real() * static_cast<double>(p.size()));
  const int d = static_cast<int>(std::lround(d_real));
  if (d < 1 || std::abs(d_real - d) > tol.rounding) throw DomainError("projection is not a minimal central projection");
  if (d == 1) return p;
  const auto target = generate_biprojection(p, tol).subgroup;
  for (int attempt = 0; attempt < retries; ++attempt) {
    Rng rng(seed + static_cast<std::uint64_t>(attempt));
    auto u = sample_minimal_projection(p, d, rng, tol);
    if (u && generate_biprojection(*u, tol).subgroup == target) return *u;
  }
  throw IntegrityError("no minimal projection u <= p with <u> = <p> found; seeds " + std::to_string(seed) + ".." +
                       std::to_string(seed + static_cast<std::uint64_t>(retries) - 1));
}

/// Uniformly random projection: a random nonempty support indicator
/// (function model), or the spectral projection of a random Hermitian onto a
/// random nonempty set of its eigenvalue clusters (group algebra).
inline TwoBoxElement random_projection(Model m, const GroupPtr& g, Rng& rng, const Tolerances& tol = {}) {
  if (m == Model::function) {
    auto p = TwoBoxElement::zero(m, g);
    bool any = false;
    for (std::size_t x = 0; x < p.size(); ++x)
      if (rng.coin()) {
        p[x] = 1.0;
        any = true;
      }
    if (!any) p[rng.below(p.size())] = 1.0;
    return p;
  }
  for (int attempt = 0; attempt < kDefaultRetries; ++attempt) {
    const auto spec = detail::hermitian_spectrum(random_hermitian(m, g, rng));
    const double scale = std::max(1.0, spec.values.cwiseAbs().maxCoeff());
    const auto cl = detail::clusters(spec.values, 1e-6 * scale);
    std::vector<Eigen::Index> cols;
    for (const auto& c : cl)
      if (rng.coin())
        for (auto i = c.first; i < c.second; ++i) cols.push_back(i);
    if (cols.empty())
      for (auto i = cl.front().first; i < cl.front().second; ++i) cols.push_back(i);
    try {
      auto p = from_operator(g, detail::projector(spec.vectors, cols), tol.projection);
      if (is_projection(p, tol.projection)) return p;
    } catch (const IntegrityError&) {
    }
  }
  throw IntegrityError("could not sample a random projection");
}

/// Random positive element, max-abs normalized, whose range is generically
/// a random projection.
inline TwoBoxElement random_positive(Model m, const GroupPtr& g, Rng& rng, const Tolerances& tol = {}) {
  const auto p = random_projection(m, g, rng, tol);
  auto y = TwoBoxElement::zero(m, g);
  for (std::size_t x = 0; x < y.size(); ++x) y[x] = m == Model::function ? cplx{0.2 + rng.uniform(), 0.0} : rng.complex();
  auto a = mult(mult(p, mult(adjoint(y), y)), p);
  const double scale = max_abs(a);
  return scale > 0 ? (1.0 / scale) * a : p;
}

/// Random positive element with range inside R(a).
inline TwoBoxElement random_positive_below(const TwoBoxElement& a, Rng& rng, const Tolerances& tol = {}) {
  const auto q = range_projection(a, tol);
  const auto r = random_positive(a.model(), a.group_ptr(), rng, tol);
  auto out = mult(mult(q, r), q);
  if (max_abs(out) < tol.projection) return q;  // r happened to be orthogonal to q
  return out;
}

/// G_(X) for X the range of a group-algebra projection p: g fixes X pointwise
/// iff tr(λ(g) P) = tr(P), i.e. p_{g^-1} = p_e.
inline SubgroupHandle range_pointwise_stabilizer(const TwoBoxElement& p, const Tolerances& tol = {}) {
  if (p.model() != Model::group_algebra) throw DomainError("range_pointwise_stabilizer needs the group algebra");
  const auto& g = p.group();
  Bitset b(g.order());
  for (std::size_t x = 0; x < g.order(); ++x)
    if (std::abs(p[g.inv(x)] - p[Group::identity()]) < tol.projection) b.set(x);
  if (!is_subgroup(g, b)) throw IntegrityError("pointwise stabilizer of a range is not a subgroup");
  return SubgroupHandle(std::move(b));
}

enum class CompressMode { mult, conv };

/// The compressed subalgebra {b·x·b} or {b∗x∗b} with an orthonormal
/// coefficient basis.
struct CompressedSubalgebra {
  CompressMode mode = CompressMode::mult;
  std::vector<TwoBoxElement> basis;
  std::size_t dimension = 0;
  double closure_residual = 0.0;
};

namespace detail {

inline TwoBoxElement sandwich(const TwoBoxElement& b, const TwoBoxElement& x, CompressMode mode) {
  return mode == CompressMode::mult ? mult(mult(b, x), b) : coproduct(coproduct(b, x), b);
}

}  // namespace detail

/// Builds the compression by b and checks that it is closed under both
/// products, including the exchange identities
///   (b·a1·b) ∗ (b·a2·b) = b·(a1 ∗ (b·a2·b))·b = b·((b·a1·b) ∗ a2)·b
///   (b∗a1∗b) · (b∗a2∗b) = b∗(a1 · (b∗a2∗b))∗b = b∗((b∗a1∗b) · a2)∗b.
inline CompressedSubalgebra compress(const Biprojection& bp, CompressMode mode, const Tolerances& tol = {},
                                     std::uint64_t seed = kDefaultSeed) {
  const auto& b = bp.element;
  const auto n = static_cast<Eigen::Index>(b.size());
  Eigen::MatrixXcd span(n, n);
  for (Eigen::Index g = 0; g < n; ++g) {
    const auto y = detail::sandwich(b, TwoBoxElement::basis(b.model(), b.group_ptr(), static_cast<std::size_t>(g)), mode);
    for (Eigen::Index i = 0; i < n; ++i) span(i, g) = y[static_cast<std::size_t>(i)];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(span, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double thr = 1e-9 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > thr) ++rank;
  CompressedSubalgebra out;
  out.mode = mode;
  out.dimension = static_cast<std::size_t>(rank);
  const Eigen::MatrixXcd basis = svd.matrixU().leftCols(rank);
  for (Eigen::Index c = 0; c < rank; ++c) {
    std::vector<cplx> coeffs(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) coeffs[static_cast<std::size_t>(i)] = basis(i, c);
    out.basis.emplace_back(b.model(), b.group_ptr(), std::move(coeffs));
  }

  auto off_span = [&](const TwoBoxElement& v) {
    Eigen::VectorXcd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = v[static_cast<std::size_t>(i)];
    const Eigen::VectorXcd r = x - basis * (basis.adjoint() * x);
    return r.cwiseAbs().maxCoeff();
  };
  Rng rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    const auto a1 = random_hermitian(b.model(), b.group_ptr(), rng);
    const auto a2 = random_hermitian(b.model(), b.group_ptr(), rng);
    const auto s1 = detail::sandwich(b, a1, mode);
    const auto s2 = detail::sandwich(b, a2, mode);
    worst = std::max({worst, off_span(mult(s1, s2)), off_span(coproduct(s1, s2))});
    if (mode == CompressMode::mult) {
      const auto lhs = coproduct(s1, s2);
      worst = std::max({worst, distance(lhs, mult(mult(b, coproduct(a1, s2)), b)),
                        distance(lhs, mult(mult(b, coproduct(s1, a2)), b))});
    } else {
      const auto lhs = mult(s1, s2);
      worst = std::max({worst, distance(lhs, coproduct(coproduct(b, mult(a1, s2)), b)),
                        distance(lhs, coproduct(coproduct(b, mult(s1, a2)), b))});
    }
  }
  out.closure_residual = worst;
  if (worst >= tol.projection)
    throw IntegrityError("compressed subalgebra is not closed (residual " + std::to_string(worst) + ")");
  return out;
}

}  // namespace bipro
