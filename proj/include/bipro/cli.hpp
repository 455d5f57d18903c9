#pragma once

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bipro/catalogue.hpp"
#include "bipro/characters.hpp"
#include "bipro/config.hpp"
#include "bipro/error.hpp"
#include "bipro/io.hpp"
#include "bipro/lattice.hpp"
#include "bipro/twobox.hpp"
#include "bipro/verify.hpp"

namespace bipro::cli {

namespace detail {

inline std::string format_complex(cplx z) {
  auto clean = [](double x) { return std::abs(x) < 5e-7 ? 0.0 : x; };
  const double re = clean(z.real()), im = clean(z.imag());
  char buf[64];
  if (im == 0.0)
    std::snprintf(buf, sizeof buf, "%.4g", re);
  else if (re == 0.0)
    std::snprintf(buf, sizeof buf, "%.4gi", im);
  else
    std::snprintf(buf, sizeof buf, "%.4g%+.4gi", re, im);
  return buf;
}

inline std::size_t factorial(std::size_t k) {
  std::size_t f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= i;
  return f;
}

/// "Sk" when the subgroup is the full symmetric group on the points it moves,
/// otherwise the usual label.
inline std::string short_label(const SubgroupLattice& l, std::size_t i) {
  if (i == l.bottom() || i == l.top()) return subgroup_label(l, i);
  const auto& g = l.group();
  std::vector<bool> moved(g.degree(), false);
  for (auto x : l.node(i).elements())
    for (std::size_t p = 0; p < g.degree(); ++p)
      if (g.element(x).images()[p] != p) moved[p] = true;
  const auto k = static_cast<std::size_t>(std::count(moved.begin(), moved.end(), true));
  if (k >= 2 && k <= 12 && l.node(i).order() == factorial(k)) return "S" + std::to_string(k);
  return subgroup_label(l, i);
}

inline std::size_t subgroup_from_generators(const SubgroupLattice& l, const std::string& text) {
  const auto& g = l.group();
  std::vector<std::size_t> idx;
  for (const auto& p : parse_permutation_list(text, g.degree())) idx.push_back(g.index_of(p));
  return l.index_of(generated_subgroup(g, std::span<const std::size_t>(idx)));
}

inline void emit(std::ostream& out, const Config& cfg, const Json& j, const std::string& text,
                 const std::string& dot = {}) {
  switch (cfg.format) {
    case OutputFormat::json: out << dump(j); break;
    case OutputFormat::dot:
      if (dot.empty()) throw ParseError("dot output is only available for lattices");
      out << dot;
      break;
    case OutputFormat::text: out << text; break;
  }
}

inline std::string chain_text(const SubgroupLattice& l, const std::vector<std::size_t>& chain) {
  std::string s;
  for (std::size_t k = 0; k < chain.size(); ++k) s += (k ? " < " : "") + subgroup_label(l, chain[k]);
  return s;
}

}  // namespace detail

inline void cmd_lattice(const Config& cfg, const std::string& group, std::ostream& out) {
  auto g = parse_group(group, cfg.max_order);
  auto l = SubgroupLattice::build(g, cfg.max_subgroups);
  std::ostringstream os;
  os << g->name() << ": order " << g->order() << ", " << l.size() << " subgroups\n";
  for (std::size_t i = 0; i < l.size(); ++i)
    os << "  " << std::setw(3) << i << "  order " << std::setw(3) << l.node(i).order() << "  "
       << subgroup_label(l, i) << (is_normal(*g, l.node(i)) ? "  normal" : "") << "\n";
  const auto p = analyze(interval(l, l.bottom(), l.top()));
  os << "distributive: " << (p.is_distributive ? "yes" : "no") << "\n";
  os << "boolean: " << (p.is_boolean ? "yes, rank " + std::to_string(*p.boolean_rank) : std::string("no")) << "\n";
  os << "top boolean: " << (p.is_top_boolean ? "yes" : "no")
     << ", bottom boolean: " << (p.is_bottom_boolean ? "yes" : "no") << "\n";
  detail::emit(out, cfg, lattice_json(l), os.str(), lattice_dot(l));
}

inline void cmd_interval(const Config& cfg, const std::string& group, const std::string& gens, std::ostream& out) {
  auto g = parse_group(group, cfg.max_order);
  auto l = SubgroupLattice::build(g, cfg.max_subgroups);
  const auto h = detail::subgroup_from_generators(l, gens);
  const auto iv = interval(l, h, l.top());
  const auto p = analyze(iv);
  const auto witness = is_h_cyclic(iv);
  const auto ct = character_table(g, cfg.tol, cfg.seed);
  const auto primitive = is_linearly_primitive(ct, l.node(h));

  std::ostringstream os;
  os << "[" << detail::short_label(l, h) << "," << subgroup_label(l, l.top()) << "] "
     << (p.is_top_boolean ? "top Boolean" : "not top Boolean") << "; "
     << (witness ? "H-cyclic witness " + element_label(*g, *witness) : std::string("not H-cyclic")) << "\n";
  os << "distributive: " << (p.is_distributive ? "yes" : "no") << ", boolean: " << (p.is_boolean ? "yes" : "no")
     << ", bottom Boolean: " << (p.is_bottom_boolean ? "yes" : "no") << "\n";
  os << "top interval: [" << subgroup_label(l, p.top_interval.first) << "," << subgroup_label(l, p.top_interval.second)
     << "], bottom interval: [" << subgroup_label(l, p.bottom_interval.first) << ","
     << subgroup_label(l, p.bottom_interval.second) << "]\n";
  os << (primitive ? "linearly primitive: irrep " + std::to_string(*primitive) : std::string("not linearly primitive"))
     << "\n";

  Json j{{"group", g->name()},
         {"interval", {{"low", subgroup_label(l, h)}, {"high", subgroup_label(l, l.top())}}},
         {"low_name", detail::short_label(l, h)},
         {"profile", profile_json(l, p)},
         {"h_cyclic_witness", witness ? Json(element_label(*g, *witness)) : Json(nullptr)},
         {"linearly_primitive_irrep", primitive ? Json(*primitive) : Json(nullptr)}};
  detail::emit(out, cfg, j, os.str());
}

inline void cmd_chain(const Config& cfg, const std::string& group, const std::string& mode, std::ostream& out) {
  if (mode != "top" && mode != "bottom") throw ParseError("chain mode must be top or bottom");
  auto g = parse_group(group, cfg.max_order);
  auto l = SubgroupLattice::build(g, cfg.max_subgroups);
  const auto r = boolean_chain_length(l, mode == "top" ? ChainMode::top : ChainMode::bottom);
  std::ostringstream os;
  os << mode << " Boolean chain length " << r.length << ": " << detail::chain_text(l, r.chain) << "\n";
  if (mode == "top")
    os << "minimal generating set size " << minimal_generating_size(*g) << "\n";
  else
    os << "minimal faithful components " << min_faithful_components(character_table(g, cfg.tol, cfg.seed)).count
       << "\n";
  Json j{{"group", g->name()}, {"mode", mode}, {"length", r.length}, {"chain", bipro::detail::chain_labels(l, r.chain)}};
  detail::emit(out, cfg, j, os.str());
}

inline void cmd_chartable(const Config& cfg, const std::string& group, std::ostream& out) {
  auto g = parse_group(group, cfg.max_order);
  const auto ct = character_table(g, cfg.tol, cfg.seed);
  std::ostringstream os;
  os << g->name() << ": " << ct.size() << " classes\n  class   ";
  for (std::size_t c = 0; c < g->num_classes(); ++c)
    os << std::setw(12) << element_label(*g, g->classes()[c].front());
  os << "\n  size    ";
  for (auto s : ct.class_sizes) os << std::setw(12) << s;
  os << "\n";
  for (std::size_t i = 0; i < ct.size(); ++i) {
    os << "  chi" << std::left << std::setw(5) << i << std::right;
    for (auto z : ct.chi[i]) os << std::setw(12) << detail::format_complex(z);
    os << "\n";
  }
  detail::emit(out, cfg, character_table_json(ct), os.str());
}

inline void cmd_fusion(const Config& cfg, const std::string& group, std::ostream& out) {
  auto g = parse_group(group, cfg.max_order);
  const auto ct = character_table(g, cfg.tol, cfg.seed);
  const auto ft = fusion_coeffs(ct);
  std::ostringstream os;
  for (std::size_t i = 0; i < ft.n; ++i)
    for (std::size_t j = i; j < ft.n; ++j) {
      os << "chi" << i << " x chi" << j << " =";
      bool first = true;
      for (std::size_t k = 0; k < ft.n; ++k) {
        if (ft(i, j, k) == 0) continue;
        os << (first ? " " : " + ");
        if (ft(i, j, k) > 1) os << ft(i, j, k) << " ";
        os << "chi" << k;
        first = false;
      }
      os << "\n";
    }
  detail::emit(out, cfg, fusion_json(ct, ft), os.str());
}

inline void cmd_twobox_demo(const Config& cfg, const std::string& group, std::ostream& out) {
  auto g = parse_group(group, cfg.max_order);
  const std::size_t x = g->order() > 1 ? 1 : 0;
  const auto k = generated_subgroup(*g, {x});
  std::ostringstream os;
  Json models = Json::array();
  for (auto m : {Model::function, Model::group_algebra}) {
    const auto id = TwoBoxElement::identity(m, g);
    const auto e1 = TwoBoxElement::jones(m, g);
    const auto b = biprojection_of_subgroup(m, g, k);
    const auto check = is_biprojection(b.element, cfg.tol);
    Json residuals = Json::object();
    for (const auto& [name, v] : check.residuals) residuals[name] = v;
    Json entry{{"model", model_name(m)},
               {"delta", id.delta()},
               {"identity", twobox_json(id)},
               {"jones", twobox_json(e1)},
               {"fourier_jones", twobox_json(fourier(e1))},
               {"subgroup_order", k.order()},
               {"biprojection", twobox_json(b.element)},
               {"biprojection_ok", check.ok},
               {"biprojection_residuals", residuals}};
    const auto fe1 = fourier(e1);
    const cplx c = fe1[0];
    entry["fourier_jones_scalar"] = complex_json(c);
    os << model_name(m) << " model, delta " << id.delta() << "\n"
       << "  F(e1) = " << detail::format_complex(c) << " id, residual "
       << distance(fe1, c * TwoBoxElement::identity(opposite(m), g)) << "\n"
       << "  biprojection of <" << element_label(*g, x) << "> (order " << k.order() << "): "
       << (check.ok ? "ok" : "FAILED") << ", max residual " << check.max_residual() << "\n";
    if (m == Model::function) {
      const auto gen = generate_biprojection(TwoBoxElement::basis(m, g, x), cfg.tol);
      entry["generated_from_element"] = element_label(*g, x);
      entry["generated_order"] = gen.subgroup.order();
      os << "  <e_g> for g = " << element_label(*g, x) << " is the biprojection of a subgroup of order "
         << gen.subgroup.order() << "\n";
    }
    models.push_back(entry);
  }
  detail::emit(out, cfg, Json{{"group", g->name()}, {"models", models}}, os.str());
}

inline int cmd_verify(const Config& cfg, const std::vector<std::string>& groups, const std::vector<std::string>& names,
                      std::ostream& out) {
  std::vector<Report> all;
  for (const auto& name : groups) {
    auto g = parse_group(name, cfg.max_order);
    auto cx = VerifyContext::make(g, cfg);
    auto reports = run_suites(cx, names);
    all.insert(all.end(), reports.begin(), reports.end());
  }
  std::ostringstream os;
  std::size_t pass = 0, fail = 0, skip = 0;
  for (const auto& r : all) {
    if (r.verdict == Verdict::pass) ++pass;
    if (r.verdict == Verdict::skip) ++skip;
    if (r.verdict != Verdict::fail) continue;
    ++fail;
    os << "FAIL " << r.suite << " " << r.group << " [" << r.low << "," << r.high << "] " << r.detail << "\n";
  }
  os << all.size() << " reports: " << pass << " pass, " << fail << " fail, " << skip << " skip\n";
  detail::emit(out, cfg, reports_json(all), os.str());
  return exit_code(all);
}

/// Parses and runs one command line (args exclude the program name).
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Subgroup lattices, intervals and 2-box calculus for finite groups", "bipro"};
  app.require_subcommand(1);

  Config cfg;
  bool json = false;
  std::string format = "text";
  app.add_flag("--json", json, "JSON output (same as --format json)");
  app.add_option("--format", format, "text, json or dot")->envname("BIPRO_FORMAT");
  app.add_option("--seed", cfg.seed, "random seed")->envname("BIPRO_SEED");
  app.add_option("--tol-eigen", cfg.tol.eigen, "eigenvalue tolerance")->envname("BIPRO_TOL_EIGEN");
  app.add_option("--tol-round", cfg.tol.rounding, "integer rounding tolerance")->envname("BIPRO_TOL_ROUND");
  app.add_option("--tol-proj", cfg.tol.projection, "2-box equality tolerance")->envname("BIPRO_TOL_PROJ");
  app.add_option("--max-order", cfg.max_order, "group order cap")->envname("BIPRO_MAX_ORDER");
  app.add_option("--max-subgroups", cfg.max_subgroups, "subgroup count cap")->envname("BIPRO_MAX_SUBGROUPS");
  app.add_option("--jobs", cfg.jobs, "suites run concurrently")->envname("BIPRO_JOBS");
  app.add_option("--samples", cfg.samples, "randomized instances per group and seed")->envname("BIPRO_SAMPLES");
  app.add_flag("--timing", cfg.timing, "record wall-clock ms in reports");
  app.fallthrough();

  std::string group, gens, mode = "top";
  bool demo = false, list = false, whole = false;
  std::vector<std::string> suite_names;

  auto* lattice = app.add_subcommand("lattice", "enumerate subgroups and profile the lattice");
  lattice->add_option("group", group, "descriptor or generators")->required();
  auto* iv = app.add_subcommand("interval", "analyze [H,G]");
  iv->add_option("group", group)->required();
  iv->add_option("generators", gens, "generators of H, e.g. \"(0 1)\"")->required();
  auto* chain = app.add_subcommand("chain", "shortest Boolean chain from 1 to G");
  chain->add_option("group", group)->required();
  chain->add_option("--mode", mode, "top or bottom")->check(CLI::IsMember({"top", "bottom"}));
  auto* chartable = app.add_subcommand("chartable", "character table");
  chartable->add_option("group", group)->required();
  auto* fusion = app.add_subcommand("fusion", "tensor product multiplicities");
  fusion->add_option("group", group)->required();
  auto* twobox = app.add_subcommand("twobox", "2-box calculus demo");
  twobox->add_option("group", group)->required();
  twobox->add_flag("--demo", demo, "run the demo");
  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("group", group);
  verify->add_flag("--catalogue", whole, "run on every catalogue group");
  verify->add_option("--suite", suite_names, "suite name (repeatable)");
  auto* cat = app.add_subcommand("catalogue", "default catalogue");
  cat->add_flag("--list", list, "list group names");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
    if (json) format = "json";
    cfg.format = parse_format(format);
    cfg.validate();

    if (*lattice) cmd_lattice(cfg, group, out);
    if (*iv) cmd_interval(cfg, group, gens, out);
    if (*chain) cmd_chain(cfg, group, mode, out);
    if (*chartable) cmd_chartable(cfg, group, out);
    if (*fusion) cmd_fusion(cfg, group, out);
    if (*twobox) {
      if (!demo) throw ParseError("twobox requires --demo");
      cmd_twobox_demo(cfg, group, out);
    }
    if (*verify) {
      if (whole == !group.empty()) throw ParseError("verify needs exactly one of <group> or --catalogue");
      for (const auto& s : suite_names) {
        const auto& all = suites();
        if (std::none_of(all.begin(), all.end(), [&](const auto& e) { return e.first == s; }))
          throw ParseError("unknown suite \"" + s + "\"");
      }
      return cmd_verify(cfg, whole ? default_catalogue() : std::vector<std::string>{group}, suite_names, out);
    }
    if (*cat) {
      Json names = default_catalogue();
      std::string text;
      for (const auto& n : default_catalogue()) text += n + "\n";
      if (!list) text = std::to_string(default_catalogue().size()) + " groups (use --list)\n";
      detail::emit(out, cfg, names, text);
    }
    return 0;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 64;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 64;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 64;
  } catch (const CapacityError& e) {
    err << "capacity exceeded: " << e.what() << "\n";
    return 65;
  } catch (const IntegrityError& e) {
    err << "integrity error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace bipro::cli
