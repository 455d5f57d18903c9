#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bipro/characters.hpp"
#include "bipro/config.hpp"
#include "bipro/error.hpp"
#include "bipro/group.hpp"
#include "bipro/lattice.hpp"
#include "bipro/twobox.hpp"
#include "bipro/verify.hpp"

namespace bipro {

using Json = nlohmann::json;

/// 12 significant digits, -0 folded to 0, non-finite values to null.
inline Json stable_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  double r = std::strtod(buf, nullptr);
  if (r == 0.0) r = 0.0;
  return r;
}

/// Applies stable_number to every float in a document; objects already
/// serialize with sorted keys.
inline void stabilize(Json& j) {
  if (j.is_number_float()) {
    j = stable_number(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& v : j) stabilize(v);
  }
}

inline std::string dump(Json j) {
  stabilize(j);
  return j.dump(2) + "\n";
}

inline Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

inline Json subgroup_json(const SubgroupLattice& l, std::size_t i) {
  Json gens = Json::array();
  for (auto x : l.generators(i)) gens.push_back(element_label(l.group(), x));
  return {{"index", i},
          {"order", l.node(i).order()},
          {"label", subgroup_label(l, i)},
          {"generators", gens},
          {"normal", is_normal(l.group(), l.node(i))}};
}

inline Json profile_json(const SubgroupLattice& l, const LatticeProfile& p) {
  auto labels = [&](const std::vector<std::size_t>& xs) {
    Json a = Json::array();
    for (auto x : xs) a.push_back(subgroup_label(l, x));
    return a;
  };
  Json j{{"distributive", p.is_distributive},
         {"boolean", p.is_boolean},
         {"top_boolean", p.is_top_boolean},
         {"bottom_boolean", p.is_bottom_boolean},
         {"atoms", labels(p.atoms)},
         {"coatoms", labels(p.coatoms)},
         {"top_interval", labels({p.top_interval.first, p.top_interval.second})},
         {"bottom_interval", labels({p.bottom_interval.first, p.bottom_interval.second})}};
  j["boolean_rank"] = p.boolean_rank ? Json(*p.boolean_rank) : Json(nullptr);
  return j;
}

inline Json lattice_json(const SubgroupLattice& l) {
  Json nodes = Json::array();
  for (std::size_t i = 0; i < l.size(); ++i) nodes.push_back(subgroup_json(l, i));
  Json covers = Json::array();
  for (auto [a, b] : l.covers()) covers.push_back({a, b});
  return {{"group", l.group().name()},
          {"order", l.group().order()},
          {"subgroups", nodes},
          {"covers", covers},
          {"profile", profile_json(l, analyze(interval(l, l.bottom(), l.top())))}};
}

/// Hasse diagram, bottom to top.
inline std::string lattice_dot(const SubgroupLattice& l) {
  std::ostringstream os;
  os << "digraph lattice {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < l.size(); ++i)
    os << "  n" << i << " [label=\"" << subgroup_label(l, i) << " (" << l.node(i).order() << ")\"];\n";
  for (auto [a, b] : l.covers()) os << "  n" << a << " -> n" << b << ";\n";
  os << "}\n";
  return os.str();
}

inline Json tolerances_json(const Tolerances& t) {
  return {{"eigen", t.eigen}, {"rounding", t.rounding}, {"projection", t.projection}};
}

inline Json character_table_json(const CharacterTable& ct) {
  const auto& g = *ct.group;
  Json classes = Json::array();
  for (std::size_t c = 0; c < g.num_classes(); ++c)
    classes.push_back({{"size", ct.class_sizes[c]}, {"representative", element_label(g, g.classes()[c].front())}});
  Json chi = Json::array();
  for (const auto& row : ct.chi) {
    Json r = Json::array();
    for (auto z : row) r.push_back(complex_json(z));
    chi.push_back(r);
  }
  return {{"group", g.name()},
          {"classes", classes},
          {"degrees", ct.degrees},
          {"characters", chi},
          {"seed", ct.seed},
          {"tolerances", tolerances_json(ct.tol)},
          {"orthogonality_residual", ct.orthogonality_residual}};
}

inline Json fusion_json(const CharacterTable& ct, const FusionTensor& ft) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < ft.n; ++i)
    for (std::size_t j = 0; j < ft.n; ++j)
      for (std::size_t k = 0; k < ft.n; ++k)
        if (ft(i, j, k) > 0) entries.push_back({{"i", i}, {"j", j}, {"k", k}, {"multiplicity", ft(i, j, k)}});
  return {{"group", ct.group->name()}, {"degrees", ct.degrees}, {"fusion", entries}};
}

inline Json twobox_json(const TwoBoxElement& a) {
  Json coeffs = Json::array();
  for (auto z : a.coeffs()) coeffs.push_back(complex_json(z));
  return {{"model", model_name(a.model())}, {"group", a.group().name()}, {"coeffs", coeffs}};
}

inline Json report_json(const Report& r) {
  Json constants = Json::object();
  for (const auto& [k, v] : r.constants) constants[k] = v;
  return {{"suite", r.suite},
          {"group", r.group},
          {"interval", {{"low", r.low}, {"high", r.high}}},
          {"verdict", verdict_name(r.verdict)},
          {"witness", r.witness},
          {"constants", constants},
          {"residual_max", r.residual_max},
          {"seed", r.seed},
          {"ms", r.ms},
          {"integrity_error", r.integrity_error},
          {"detail", r.detail}};
}

inline Json reports_json(const std::vector<Report>& reports) {
  Json a = Json::array();
  for (const auto& r : reports) a.push_back(report_json(r));
  return a;
}

inline OutputFormat parse_format(const std::string& s) {
  if (s == "text") return OutputFormat::text;
  if (s == "json") return OutputFormat::json;
  if (s == "dot") return OutputFormat::dot;
  throw ParseError("unsupported output format \"" + s + "\"");
}

}  // namespace bipro
