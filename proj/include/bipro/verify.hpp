#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bipro/characters.hpp"
#include "bipro/config.hpp"
#include "bipro/error.hpp"
#include "bipro/group.hpp"
#include "bipro/lattice.hpp"
#include "bipro/random.hpp"
#include "bipro/twobox.hpp"

namespace bipro {

enum class Verdict { pass, fail, skip };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "skip";
  }
}

/// Outcome of one check inside a suite. Failing reports always carry a
/// counterexample in `witness`.
struct Report {
  std::string suite;
  std::string group;
  std::string low;
  std::string high;
  Verdict verdict = Verdict::pass;
  nlohmann::json witness = nlohmann::json::object();
  std::map<std::string, double> constants;
  double residual_max = 0.0;
  std::uint64_t seed = 0;
  double ms = 0.0;
  bool integrity_error = false;
  std::string detail;
};

/// Shared, read-only inputs of every suite for one group.
struct VerifyContext {
  GroupPtr group;
  std::shared_ptr<const SubgroupLattice> lattice;
  std::shared_ptr<const CharacterTable> table;
  std::vector<TwoBoxElement> central;  // minimal central projections
  Config config;

  static VerifyContext make(GroupPtr g, const Config& cfg) {
    VerifyContext cx;
    cx.group = g;
    cx.config = cfg;
    cx.lattice = std::make_shared<const SubgroupLattice>(SubgroupLattice::build(g, cfg.max_subgroups));
    cx.table = std::make_shared<const CharacterTable>(character_table(g, cfg.tol, cfg.seed));
    cx.central = minimal_central_projections(*cx.table, cfg.tol);
    return cx;
  }
};

inline std::string element_label(const Group& g, std::size_t x) { return g.element(x).to_cycles(); }

/// "1" for the trivial subgroup, the group name for the whole group and
/// "<gens>" otherwise.
inline std::string subgroup_label(const SubgroupLattice& l, std::size_t i) {
  if (i == l.top()) return l.group().name().empty() ? "G" : l.group().name();
  if (i == l.bottom()) return "1";
  std::string s = "<";
  const auto& gens = l.generators(i);
  for (std::size_t k = 0; k < gens.size(); ++k) {
    if (k) s += ",";
    s += element_label(l.group(), gens[k]);
  }
  return s + ">";
}

namespace detail {

class SuiteRun {
 public:
  SuiteRun(const VerifyContext& cx, std::string suite) : cx_(cx), suite_(std::move(suite)), last_(Clock::now()) {}

  Report start(std::size_t low, std::size_t high) const {
    Report r;
    r.suite = suite_;
    r.group = cx_.group->name();
    r.low = subgroup_label(*cx_.lattice, low);
    r.high = subgroup_label(*cx_.lattice, high);
    r.seed = cx_.config.seed;
    return r;
  }
  Report start_group() const { return start(cx_.lattice->bottom(), cx_.lattice->top()); }

  void finish(Report r) {
    const auto now = Clock::now();
    if (cx_.config.timing) r.ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    out_.push_back(std::move(r));
  }
  std::vector<Report> take() { return std::move(out_); }

 private:
  using Clock = std::chrono::steady_clock;
  const VerifyContext& cx_;
  std::string suite_;
  Clock::time_point last_;
  std::vector<Report> out_;
};

/// Collects named boolean checks; the first failure becomes the witness.
struct Checks {
  std::vector<std::string> failed;
  void require(bool ok, const std::string& what) {
    if (!ok) failed.push_back(what);
  }
  void apply(Report& r) const {
    if (failed.empty()) return;
    r.verdict = Verdict::fail;
    r.witness["failed_checks"] = failed;
  }
};

inline std::vector<std::size_t> with(std::vector<std::size_t> v, std::size_t x) {
  v.push_back(x);
  return v;
}

}  // namespace detail

/// Every distributive or top-Boolean interval [H, K] is H-cyclic. On top
/// Boolean intervals the witness of the top interval [t, K] is also checked
/// to generate K together with H; distributive intervals must have Boolean
/// top and bottom intervals.
inline std::vector<Report> verify_ore(const VerifyContext& cx) {
  const auto& l = *cx.lattice;
  const auto& g = *cx.group;
  detail::SuiteRun run(cx, "ore");
  for (std::size_t lo = 0; lo < l.size(); ++lo)
    for (std::size_t hi = lo; hi < l.size(); ++hi) {
      if (!l.leq(lo, hi)) continue;
      const auto iv = interval(l, lo, hi);
      const auto prof = analyze(iv);
      auto r = run.start(lo, hi);
      const auto w = is_h_cyclic(iv);
      r.witness["distributive"] = prof.is_distributive;
      r.witness["top_boolean"] = prof.is_top_boolean;
      r.witness["h_cyclic"] = w ? nlohmann::json(element_label(g, *w)) : nlohmann::json(nullptr);
      if (!prof.is_distributive && !prof.is_top_boolean) {
        r.verdict = Verdict::skip;
        r.detail = "not top Boolean";
        run.finish(std::move(r));
        continue;
      }
      detail::Checks c;
      c.require(w.has_value(), "no H-cyclic witness");
      if (prof.is_distributive)
        c.require(prof.is_top_boolean && prof.is_bottom_boolean, "distributive with non-Boolean top or bottom interval");
      if (prof.is_top_boolean) {
        const auto top_w = is_h_cyclic(interval(l, prof.top_interval.first, prof.top_interval.second));
        c.require(top_w.has_value(), "top interval not cyclic over its bottom");
        if (top_w) {
          r.witness["top_interval_witness"] = element_label(g, *top_w);
          c.require(generated_subgroup(g, detail::with(l.generators(lo), *top_w)) == l.node(hi),
                    "top interval witness does not generate the interval");
        }
      }
      c.apply(r);
      run.finish(std::move(r));
    }
  return run.take();
}

/// Every distributive or bottom-Boolean interval [H, K] carries an irrep V of
/// K with K_(V^H) = H.
inline std::vector<Report> verify_dual_ore(const VerifyContext& cx) {
  const auto& l = *cx.lattice;
  const auto& g = *cx.group;
  detail::SuiteRun run(cx, "dual_ore");
  std::map<std::size_t, std::pair<EmbeddedGroup, std::shared_ptr<const CharacterTable>>> tables;
  auto table_of = [&](std::size_t k) -> const std::pair<EmbeddedGroup, std::shared_ptr<const CharacterTable>>& {
    auto it = tables.find(k);
    if (it != tables.end()) return it->second;
    auto emb = subgroup_as_group(g, l.node(k), l.generators(k));
    std::shared_ptr<const CharacterTable> ct =
        k == l.top() ? cx.table : std::make_shared<const CharacterTable>(character_table(emb.group, cx.config.tol, cx.config.seed));
    return tables.emplace(k, std::make_pair(std::move(emb), std::move(ct))).first->second;
  };
  for (std::size_t lo = 0; lo < l.size(); ++lo)
    for (std::size_t hi = lo; hi < l.size(); ++hi) {
      if (!l.leq(lo, hi)) continue;
      const auto prof = analyze(interval(l, lo, hi));
      auto r = run.start(lo, hi);
      r.witness["distributive"] = prof.is_distributive;
      r.witness["bottom_boolean"] = prof.is_bottom_boolean;
      if (!prof.is_distributive && !prof.is_bottom_boolean) {
        r.verdict = Verdict::skip;
        r.detail = "not bottom Boolean";
        run.finish(std::move(r));
        continue;
      }
      const auto& [emb, ct] = table_of(hi);
      const SubgroupHandle h(emb.restrict(l.node(lo).members()));
      const auto w = is_linearly_primitive(*ct, h);
      detail::Checks c;
      c.require(w.has_value(), "no irrep V with K_(V^H) = H");
      if (prof.is_distributive)
        c.require(prof.is_top_boolean && prof.is_bottom_boolean, "distributive with non-Boolean top or bottom interval");
      if (w) {
        r.witness["irrep"] = *w;
        r.witness["degree"] = ct->degrees[*w];
        r.witness["fixed_dim"] = fixed_dim(*ct, *w, h);
      }
      c.apply(r);
      run.finish(std::move(r));
    }
  return run.take();
}

/// Both w-cyclicity equivalences on [H, G]: in C^G, <b_H, e_g> = id iff
/// <H, g> = G for every g; in CG, a sampled minimal projection u <= p_i b_H
/// has <u> = b_H for some i iff [H, G] is linearly primitive.
inline std::vector<Report> verify_wcyclic(const VerifyContext& cx) {
  const auto& l = *cx.lattice;
  const auto& g = *cx.group;
  const auto& ct = *cx.table;
  const auto& tol = cx.config.tol;
  const auto n = g.order();
  detail::SuiteRun run(cx, "wcyclic");
  for (std::size_t lo = 0; lo < l.size(); ++lo) {
    const auto& h = l.node(lo);
    auto r = run.start(lo, l.top());
    detail::Checks c;

    const auto h_cyclic = is_h_cyclic(interval(l, lo, l.top()));
    const auto bf = biprojection_of_subgroup(Model::function, cx.group, h).element;
    std::optional<std::size_t> fn_witness;
    for (std::size_t x = 0; x < n; ++x) {
      const bool fn = generate_biprojection({bf, TwoBoxElement::basis(Model::function, cx.group, x)}, tol)
                          .subgroup.order() == n;
      const bool grp = generated_subgroup(g, detail::with(l.generators(lo), x)).order() == n;
      if (fn != grp) {
        c.require(false, "generation in C^G disagrees with group closure");
        r.witness["element"] = element_label(g, x);
        break;
      }
      if (fn && !fn_witness) fn_witness = x;
    }
    c.require(fn_witness.has_value() == h_cyclic.has_value(), "C^G w-cyclicity differs from H-cyclicity");
    r.witness["function_witness"] = fn_witness ? nlohmann::json(element_label(g, *fn_witness)) : nlohmann::json(nullptr);

    const auto bg = biprojection_of_subgroup(Model::group_algebra, cx.group, h).element;
    std::optional<std::size_t> ga_witness;
    for (std::size_t i = 0; i < ct.size(); ++i) {
      if (fixed_dim(ct, i, h) == 0) continue;
      const auto expected = pointwise_stabilizer(ct, i, h);
      const auto q = mult(cx.central[i], bg);
      bool reached = false;
      for (int attempt = 0; attempt < kDefaultRetries && !reached; ++attempt) {
        Rng rng(mix_seed(cx.config.seed, (lo * 64 + i) * 64 + static_cast<std::size_t>(attempt)));
        const auto u = sample_minimal_projection(q, ct.degrees[i], rng, tol);
        if (!u) continue;
        const auto s = generate_biprojection(*u, tol).subgroup;
        c.require(expected.is_subgroup_of(s), "sampled stabilizer misses the character stabilizer");
        reached = s == expected;
        if (s == h && !ga_witness) ga_witness = i;
      }
      c.require(reached, "sampling never reached the character stabilizer for irrep " + std::to_string(i));
    }
    const auto lin_prim = is_linearly_primitive(ct, h);
    c.require(ga_witness.has_value() == lin_prim.has_value(), "CG w-cyclicity differs from linear primitivity");
    r.witness["group_algebra_witness"] = ga_witness ? nlohmann::json(*ga_witness) : nlohmann::json(nullptr);
    r.witness["h_cyclic"] = h_cyclic.has_value();
    r.witness["linearly_primitive"] = lin_prim.has_value();
    c.apply(r);
    run.finish(std::move(r));
  }
  return run.take();
}

namespace detail {

inline SubgroupHandle relative_core(const Group& g, const SubgroupHandle& h, const SubgroupHandle& within) {
  Bitset acc = h.members();
  for (auto x : within.elements()) acc &= conjugate(g, h, x).members();
  return SubgroupHandle(std::move(acc));
}

inline std::vector<std::string> chain_labels(const SubgroupLattice& l, const std::vector<std::size_t>& chain) {
  std::vector<std::string> out;
  for (auto c : chain) out.push_back(subgroup_label(l, c));
  return out;
}

}  // namespace detail

/// minimal generating size <= top-Boolean chain length, minimal faithful
/// components <= bottom-Boolean chain length (also with a core-free first
/// step), and explicit witnesses for every chain step: e_g in C^G with
/// <b_i, e_g> = b_{i+1}, and minimal u in CG with <b_{i+1}, u> = b_i.
inline std::vector<Report> verify_bounds(const VerifyContext& cx) {
  const auto& l = *cx.lattice;
  const auto& g = *cx.group;
  const auto& ct = *cx.table;
  const auto& tol = cx.config.tol;
  detail::SuiteRun run(cx, "bounds");
  auto r = run.start_group();
  detail::Checks c;

  const auto mingen = minimal_generating_size(g);
  const auto top = boolean_chain_length(l, ChainMode::top);
  const auto faithful = min_faithful_components(ct);
  const auto bottom = boolean_chain_length(l, ChainMode::bottom);
  c.require(mingen <= top.length, "minimal generating size exceeds top chain length");
  c.require(faithful.count <= bottom.length, "faithful components exceed bottom chain length");

  // first step H0 < H1 with H0 core-free in H1 and [H0, H1] bottom Boolean
  std::vector<std::size_t> firsts;
  for (std::size_t h1 = 1; h1 < l.size(); ++h1)
    for (std::size_t h0 = 0; h0 < h1; ++h0)
      if (l.less(h0, h1) && detail::relative_core(g, l.node(h0), l.node(h1)).order() == 1 &&
          is_bottom_boolean(l, h0, h1)) {
        firsts.push_back(h1);
        break;
      }
  std::size_t refined = 0;
  if (l.size() > 1) {
    const auto rest = shortest_boolean_chain(l, ChainMode::bottom, firsts, l.top());
    refined = 1 + rest.length;
    r.witness["core_free_chain"] = detail::chain_labels(l, rest.chain);
  }
  c.require(refined <= bottom.length, "core-free refinement longer than the bottom chain");
  c.require(faithful.count <= refined, "faithful components exceed the core-free refined bound");

  // top chain steps in C^G
  std::vector<TwoBoxElement> fn_units;
  for (std::size_t s = 0; s + 1 < top.chain.size(); ++s) {
    const auto a = top.chain[s], b = top.chain[s + 1];
    const auto w = is_h_cyclic(interval(l, a, b));
    c.require(w.has_value(), "top chain step is not cyclic");
    if (!w) continue;
    const auto e = TwoBoxElement::basis(Model::function, cx.group, *w);
    const auto gen = generate_biprojection({biprojection_of_subgroup(Model::function, cx.group, l.node(a)).element, e}, tol);
    c.require(gen.subgroup == l.node(b), "top chain step witness does not generate the next biprojection");
    fn_units.push_back(e);
  }
  if (!fn_units.empty())
    c.require(generate_biprojection(fn_units, tol).subgroup.order() == g.order(),
              "top chain witnesses do not generate id");

  // bottom chain steps in CG; b_{H_i} decreases along the chain
  std::vector<TwoBoxElement> ga_units;
  for (std::size_t s = 0; s + 1 < bottom.chain.size(); ++s) {
    const auto a = bottom.chain[s], b = bottom.chain[s + 1];
    const auto bb = biprojection_of_subgroup(Model::group_algebra, cx.group, l.node(b)).element;
    const auto ba = biprojection_of_subgroup(Model::group_algebra, cx.group, l.node(a)).element;
    std::optional<TwoBoxElement> found;
    for (std::size_t i = 0; i < ct.size() && !found; ++i) {
      if (fixed_dim(ct, i, l.node(a)) == 0) continue;
      const auto q = mult(cx.central[i], ba);
      for (int attempt = 0; attempt < 4 && !found; ++attempt) {
        Rng rng(mix_seed(cx.config.seed, (s * 64 + i) * 64 + static_cast<std::size_t>(attempt) + 0x5EED));
        auto u = sample_minimal_projection(q, ct.degrees[i], rng, tol);
        if (u && generate_biprojection({bb, *u}, tol).subgroup == l.node(a)) found = std::move(u);
      }
    }
    c.require(found.has_value(), "no minimal projection for bottom chain step " + std::to_string(s));
    if (found) ga_units.push_back(*found);
  }
  if (!ga_units.empty())
    c.require(generate_biprojection(ga_units, tol).subgroup.order() == 1, "bottom chain witnesses do not generate id");

  r.constants["minimal_generating_size"] = static_cast<double>(mingen);
  r.constants["top_chain_length"] = static_cast<double>(top.length);
  r.constants["min_faithful_components"] = static_cast<double>(faithful.count);
  r.constants["bottom_chain_length"] = static_cast<double>(bottom.length);
  r.constants["core_free_chain_length"] = static_cast<double>(refined);
  r.witness["top_chain"] = detail::chain_labels(l, top.chain);
  r.witness["bottom_chain"] = detail::chain_labels(l, bottom.chain);
  r.witness["faithful_irreps"] = faithful.irreps;
  c.apply(r);
  run.finish(std::move(r));
  return run.take();
}

/// Fusion support law, centrality of p_i ∗ p_j, the dimension identity and
/// the measured scalar constants.
inline std::vector<Report> verify_fusion(const VerifyContext& cx) {
  const auto& ct = *cx.table;
  const auto& tol = cx.config.tol;
  const auto& p = cx.central;
  const auto ft = fusion_coeffs(ct);
  const std::size_t n = ct.size();
  const double delta = std::sqrt(static_cast<double>(cx.group->order()));
  detail::SuiteRun run(cx, "fusion");
  auto r = run.start_group();
  detail::Checks c;
  double ratio_min = std::numeric_limits<double>::infinity(), ratio_max = 0.0, derived = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto x = coproduct(p[i], p[j]);
      auto support = TwoBoxElement::zero(Model::group_algebra, cx.group);
      long dims = 0;
      for (std::size_t k = 0; k < n; ++k) {
        dims += static_cast<long>(ft(i, j, k)) * ct.degrees[k];
        if (ft(i, j, k) > 0) support += p[k];
        const double coeff = (trace(mult(x, p[k])) / trace(p[k])).real();
        const double want = static_cast<double>(ct.degrees[i] * ct.degrees[j]) * ft(i, j, k) / (delta * ct.degrees[k]);
        derived = std::max(derived, std::abs(coeff - want));
        if (ft(i, j, k) > 0) {
          const double ratio = coeff / (delta * ft(i, j, k));
          ratio_min = std::min(ratio_min, ratio);
          ratio_max = std::max(ratio_max, ratio);
          if (n <= 4)
            r.constants["ratio[" + std::to_string(i) + "," + std::to_string(j) + "->" + std::to_string(k) + "]"] = ratio;
        }
      }
      const double res = distance(range_projection(x, tol), support);
      r.residual_max = std::max(r.residual_max, res);
      const bool ok = res < tol.projection && is_central(x, tol.projection) &&
                      dims == static_cast<long>(ct.degrees[i]) * ct.degrees[j];
      if (!ok && c.failed.empty()) r.witness["pair"] = {i, j};
      c.require(res < tol.projection, "support law fails");
      c.require(is_central(x, tol.projection), "coproduct of central projections is not central");
      c.require(dims == static_cast<long>(ct.degrees[i]) * ct.degrees[j], "dimension identity fails");
    }
  // ⟨a∗b|x⟩ against Σ conj(x_g) a_g b_g on random elements
  Rng rng(mix_seed(cx.config.seed, 0xF05));
  double pairing_min = std::numeric_limits<double>::infinity(), pairing_max = 0.0;
  for (std::size_t t = 0; t < cx.config.samples; ++t) {
    auto a = random_hermitian(Model::group_algebra, cx.group, rng);
    auto b = random_hermitian(Model::group_algebra, cx.group, rng);
    auto x = random_hermitian(Model::group_algebra, cx.group, rng);
    cplx plain = 0;
    for (std::size_t gi = 0; gi < a.size(); ++gi) plain += std::conj(x[gi]) * a[gi] * b[gi];
    if (std::abs(plain) < 1e-6) continue;
    const double ratio = std::abs(inner(coproduct(a, b), x) / plain);
    pairing_min = std::min(pairing_min, ratio);
    pairing_max = std::max(pairing_max, ratio);
  }
  c.require(pairing_max - pairing_min < tol.projection * std::max(1.0, pairing_max),
            "trace pairing is not a single constant");
  r.constants["fusion_ratio_min"] = ratio_min;
  r.constants["fusion_ratio_max"] = ratio_max;
  r.constants["fusion_derived_residual"] = derived;
  r.constants["pairing_constant"] = pairing_max;
  r.constants["delta"] = delta;
  c.apply(r);
  run.finish(std::move(r));
  return run.take();
}

/// Generation against group closure in C^G (every single element, random
/// subsets) and against the trace-criterion stabilizer in CG (random
/// projections and p_j b_H for every irrep and subgroup).
inline std::vector<Report> verify_generation(const VerifyContext& cx) {
  const auto& l = *cx.lattice;
  const auto& g = *cx.group;
  const auto& ct = *cx.table;
  const auto& tol = cx.config.tol;
  const auto n = g.order();
  detail::SuiteRun run(cx, "generation");
  {
    auto r = run.start_group();
    r.detail = "function model";
    detail::Checks c;
    std::size_t count = 0;
    for (std::size_t x = 0; x < n; ++x, ++count) {
      const auto gen = generate_biprojection(TwoBoxElement::basis(Model::function, cx.group, x), tol).subgroup;
      if (gen != generated_subgroup(g, {x})) {
        c.require(false, "single-element generation differs from closure");
        r.witness["element"] = element_label(g, x);
        break;
      }
    }
    Rng rng(mix_seed(cx.config.seed, 0x6E1));
    for (std::size_t t = 0; t < cx.config.samples; ++t, ++count) {
      const std::size_t k = 2 + rng.below(3);
      std::vector<std::size_t> s;
      std::vector<TwoBoxElement> es;
      for (std::size_t q = 0; q < k; ++q) {
        s.push_back(rng.below(n));
        es.push_back(TwoBoxElement::basis(Model::function, cx.group, s.back()));
      }
      if (generate_biprojection(es, tol).subgroup != generated_subgroup(g, s)) {
        c.require(false, "set generation differs from closure");
        std::vector<std::string> labels;
        for (auto x : s) labels.push_back(element_label(g, x));
        r.witness["set"] = labels;
        break;
      }
    }
    r.constants["instances"] = static_cast<double>(count);
    c.apply(r);
    run.finish(std::move(r));
  }
  {
    auto r = run.start_group();
    r.detail = "group algebra";
    detail::Checks c;
    Rng rng(mix_seed(cx.config.seed, 0x6E2));
    for (std::size_t t = 0; t < cx.config.samples; ++t) {
      const auto p = random_projection(Model::group_algebra, cx.group, rng, tol);
      const auto gen = generate_biprojection(p, tol).subgroup;
      const auto stab = range_pointwise_stabilizer(p, tol);
      if (gen != stab) {
        c.require(false, "generated subgroup differs from the range stabilizer");
        r.witness["sample"] = t;
        r.witness["generated_order"] = gen.order();
        r.witness["stabilizer_order"] = stab.order();
        break;
      }
    }
    std::size_t cross = 0;
    for (std::size_t j = 0; j < ct.size() && c.failed.empty(); ++j)
      for (std::size_t k = 0; k < l.size(); ++k) {
        if (fixed_dim(ct, j, l.node(k)) == 0) continue;
        const auto q = mult(cx.central[j], biprojection_of_subgroup(Model::group_algebra, cx.group, l.node(k)).element);
        ++cross;
        if (generate_biprojection(q, tol).subgroup != pointwise_stabilizer(ct, j, l.node(k))) {
          c.require(false, "<p_j b_H> differs from G_(V_j^H)");
          r.witness["irrep"] = j;
          r.witness["subgroup"] = subgroup_label(l, k);
          break;
        }
      }
    r.constants["random_projections"] = static_cast<double>(cx.config.samples);
    r.constants["isotypic_cross_checks"] = static_cast<double>(cross);
    c.apply(r);
    run.finish(std::move(r));
  }
  return run.take();
}

/// The biprojection characterization for b_K of every subgroup K in both
/// models, and the subgroup round trip.
inline std::vector<Report> verify_biprojection_axioms(const VerifyContext& cx) {
  const auto& l = *cx.lattice;
  detail::SuiteRun run(cx, "biprojection_axioms");
  for (Model m : {Model::function, Model::group_algebra}) {
    auto r = run.start_group();
    r.detail = model_name(m);
    detail::Checks c;
    for (std::size_t k = 0; k < l.size(); ++k) {
      const auto b = biprojection_of_subgroup(m, cx.group, l.node(k));
      const auto check = is_biprojection(b.element, cx.config.tol);
      r.residual_max = std::max(r.residual_max, check.max_residual());
      bool round_trip = subgroup_of_biprojection(b.element, cx.config.tol) == l.node(k);
      if ((!check.ok || !round_trip) && c.failed.empty()) {
        r.witness["subgroup"] = subgroup_label(l, k);
        r.witness["residuals"] = check.residuals;
      }
      c.require(check.ok, "biprojection clause fails");
      c.require(round_trip, "subgroup round trip fails");
    }
    r.constants["subgroups"] = static_cast<double>(l.size());
    c.apply(r);
    run.finish(std::move(r));
  }
  return run.take();
}

/// Orthogonality, Σ d² = |G|, and faithfulness ⇔ full tensor reachability ⇔ <p_i> = id.
inline std::vector<Report> verify_character_integrity(const VerifyContext& cx) {
  const auto& ct = *cx.table;
  const auto order = cx.group->order();
  detail::SuiteRun run(cx, "character_integrity");
  auto r = run.start_group();
  detail::Checks c;
  r.residual_max = ct.orthogonality_residual;
  c.require(ct.orthogonality_residual < cx.config.tol.eigen, "orthogonality residual too large");
  long sum = 0;
  for (auto d : ct.degrees) sum += static_cast<long>(d) * d;
  c.require(sum == static_cast<long>(order), "sum of squared degrees differs from |G|");
  const auto ft = fusion_coeffs(ct);
  for (std::size_t i = 0; i < ct.size(); ++i) {
    const bool faithful = kernel(ct, i).order() == 1;
    const bool reaches_all = tensor_reachability(ft, i).size() == ct.size();
    const bool generates_id = generate_biprojection(cx.central[i], cx.config.tol).subgroup.order() == 1;
    if ((faithful != reaches_all || faithful != generates_id) && c.failed.empty()) r.witness["irrep"] = i;
    c.require(faithful == reaches_all, "faithfulness differs from tensor reachability");
    c.require(faithful == generates_id, "faithfulness differs from <p_i> = id");
  }
  r.constants["sum_squared_degrees"] = static_cast<double>(sum);
  r.constants["irreps"] = static_cast<double>(ct.size());
  c.apply(r);
  run.finish(std::move(r));
  return run.take();
}

namespace detail {

/// Runs `body` on `count` instances and reports the first failing index.
inline Report lemma_report(SuiteRun& run, const std::string& name, std::uint64_t seed, std::size_t count,
                           const std::function<bool(std::size_t, Rng&)>& body) {
  auto r = run.start_group();
  r.detail = name;
  r.seed = seed;
  std::uint64_t salt = 0xcbf29ce484222325ULL;  // FNV-1a of the name
  for (unsigned char ch : name) salt = (salt ^ ch) * 0x100000001b3ULL;
  Rng rng(mix_seed(seed, salt));
  for (std::size_t t = 0; t < count; ++t)
    if (!body(t, rng)) {
      r.verdict = Verdict::fail;
      r.witness["instance"] = t;
      break;
    }
  r.constants["instances"] = static_cast<double>(count);
  return r;
}

}  // namespace detail

/// Randomized identities of the 2-box calculus, three seeds, both models.
inline std::vector<Report> verify_lemmas(const VerifyContext& cx) {
  const auto& l = *cx.lattice;
  const auto& tol = cx.config.tol;
  const auto& G = cx.group;
  const auto n = G->order();
  const std::size_t samples = cx.config.samples;
  detail::SuiteRun run(cx, "lemmas");

  {
    // pairs of basis projections, exhaustive
    auto r = run.start_group();
    r.detail = "e_1 <= p * conj(q) iff pq != 0 (basis projections)";
    const auto e1 = TwoBoxElement::jones(Model::function, G);
    for (std::size_t x = 0; x < n && r.verdict == Verdict::pass; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        const auto p = TwoBoxElement::basis(Model::function, G, x);
        const auto q = TwoBoxElement::basis(Model::function, G, y);
        if (precedes(e1, coproduct(p, contragredient(q)), tol) != (x == y)) {
          r.verdict = Verdict::fail;
          r.witness["pair"] = {element_label(*G, x), element_label(*G, y)};
          break;
        }
      }
    r.constants["instances"] = static_cast<double>(n * n);
    run.finish(std::move(r));
  }

  for (int s = 0; s < 3; ++s) {
    const std::uint64_t seed = cx.config.seed + static_cast<std::uint64_t>(s);
    for (Model m : {Model::function, Model::group_algebra}) {
      const std::string tag = std::string(" [") + model_name(m) + "]";
      const auto e1 = TwoBoxElement::jones(m, G);
      const auto id = TwoBoxElement::identity(m, G);

      run.finish(detail::lemma_report(run, "e_1 <= p * conj(q) iff pq != 0" + tag, seed, samples,
                                      [&](std::size_t t, Rng& rng) {
                                        const auto p = random_projection(m, G, rng, tol);
                                        auto q = random_projection(m, G, rng, tol);
                                        if (t % 3 == 1) q = id - p;
                                        if (t % 3 == 2) q = range_projection(random_positive_below(p, rng, tol), tol);
                                        const bool meets = max_abs(mult(p, q)) > tol.projection;
                                        return precedes(e1, coproduct(p, contragredient(q)), tol) == meets;
                                      }));
      run.finish(detail::lemma_report(run, "coproduct of positives is positive" + tag, seed, samples,
                                      [&](std::size_t, Rng& rng) {
                                        return is_positive(coproduct(random_positive(m, G, rng, tol),
                                                                     random_positive(m, G, rng, tol)),
                                                           tol.eigen);
                                      }));
      run.finish(detail::lemma_report(run, "a <~ b, c <~ d => a*c <~ b*d" + tag, seed, samples,
                                      [&](std::size_t, Rng& rng) {
                                        const auto b = random_positive(m, G, rng, tol);
                                        const auto d = random_positive(m, G, rng, tol);
                                        const auto a = random_positive_below(b, rng, tol);
                                        const auto c = random_positive_below(d, rng, tol);
                                        return precedes(coproduct(a, c), coproduct(b, d), tol);
                                      }));
      run.finish(detail::lemma_report(run, "a <~ b => <a> <= <b>" + tag, seed, samples,
                                      [&](std::size_t, Rng& rng) {
                                        const auto b = random_positive(m, G, rng, tol);
                                        const auto a = random_positive_below(b, rng, tol);
                                        return projection_leq(generate_biprojection(a, tol).element,
                                                              generate_biprojection(b, tol).element, tol.projection);
                                      }));
      run.finish(detail::lemma_report(run, "a ~ b => <a> = <b>" + tag, seed, samples, [&](std::size_t, Rng& rng) {
        const auto b = random_positive(m, G, rng, tol);
        const auto a = mult(b, b) + 0.5 * b;
        return distance(generate_biprojection(a, tol).element, generate_biprojection(b, tol).element) <
               tol.projection;
      }));
      run.finish(detail::lemma_report(run, "<b*v*b> = <b, v>" + tag, seed, std::max(samples, l.size()),
                                      [&](std::size_t t, Rng& rng) {
                                        const auto b = biprojection_of_subgroup(m, G, l.node(t % l.size())).element;
                                        const auto v = random_positive(m, G, rng, tol);
                                        const auto lhs = generate_biprojection(coproduct(coproduct(b, v), b), tol);
                                        const auto rhs = generate_biprojection(std::vector<TwoBoxElement>{b, v}, tol);
                                        return distance(lhs.element, rhs.element) < tol.projection;
                                      }));
    }
    run.finish(detail::lemma_report(run, "central * central is central [group_algebra]", seed, samples,
                                    [&](std::size_t, Rng& rng) {
                                      auto a = TwoBoxElement::zero(Model::group_algebra, G);
                                      auto b = a;
                                      for (const auto& p : cx.central) {
                                        a += rng.complex() * p;
                                        b += rng.complex() * p;
                                      }
                                      return is_central(coproduct(a, b), tol.projection);
                                    }));
  }
  return run.take();
}

using SuiteFn = std::vector<Report> (*)(const VerifyContext&);

inline const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> kSuites = {
      {"ore", verify_ore},
      {"dual_ore", verify_dual_ore},
      {"wcyclic", verify_wcyclic},
      {"bounds", verify_bounds},
      {"fusion", verify_fusion},
      {"generation", verify_generation},
      {"biprojection_axioms", verify_biprojection_axioms},
      {"character_integrity", verify_character_integrity},
      {"lemmas", verify_lemmas},
  };
  return kSuites;
}

/// Runs one suite; an integrity error inside it becomes a failing report.
inline std::vector<Report> run_suite(const VerifyContext& cx, const std::string& name) {
  for (const auto& [n, fn] : suites()) {
    if (n != name) continue;
    try {
      return fn(cx);
    } catch (const IntegrityError& e) {
      Report r;
      r.suite = name;
      r.group = cx.group->name();
      r.low = subgroup_label(*cx.lattice, cx.lattice->bottom());
      r.high = subgroup_label(*cx.lattice, cx.lattice->top());
      r.verdict = Verdict::fail;
      r.integrity_error = true;
      r.seed = cx.config.seed;
      r.detail = e.what();
      r.witness["integrity_error"] = e.what();
      return {r};
    }
  }
  throw DomainError("unknown suite \"" + name + "\"");
}

/// Runs the named suites (all when empty) on up to `jobs` threads; reports
/// come back in suite order regardless of scheduling.
inline std::vector<Report> run_suites(const VerifyContext& cx, std::vector<std::string> names = {}) {
  if (names.empty())
    for (const auto& s : suites()) names.push_back(s.first);
  std::vector<std::vector<Report>> parts(names.size());
  const std::size_t jobs = std::max<std::size_t>(1, cx.config.jobs);
  for (std::size_t start = 0; start < names.size(); start += jobs) {
    std::vector<std::future<std::vector<Report>>> batch;
    const std::size_t stop = std::min(names.size(), start + jobs);
    for (std::size_t i = start; i < stop; ++i)
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, run_suite, std::cref(cx),
                                 names[i]));
    for (std::size_t i = start; i < stop; ++i) parts[i] = batch[i - start].get();
  }
  std::vector<Report> out;
  for (auto& p : parts)
    for (auto& r : p) out.push_back(std::move(r));
  return out;
}

/// 0 all pass or skip, 1 any failure, 2 any integrity error.
inline int exit_code(const std::vector<Report>& reports) {
  int code = 0;
  for (const auto& r : reports) {
    if (r.integrity_error) return 2;
    if (r.verdict == Verdict::fail) code = 1;
  }
  return code;
}

}  // namespace bipro
