#include "facons/report.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "facons/asymptotic_set.hpp"
#include "facons/facon.hpp"
#include "facons/map_parser.hpp"
#include "facons/stratifier.hpp"
#include "facons/tube.hpp"

namespace facons {

namespace {

using json = nlohmann::ordered_json;

class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

ParsedMap load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_map(ss.str());
}

MonomialOrder order_for(const std::string& name, std::size_t n) {
  if (name == "lex") return MonomialOrder::lex(n);
  if (name == "grevlex") return MonomialOrder::grevlex(n);
  throw InputError("unknown monomial order '" + name + "'");
}

json poly_list(const std::vector<Polynomial>& ps) {
  json out = json::array();
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

json reduced(const Ideal& i, const RunConfig& cfg) {
  auto gb = buchberger(i.with_order(order_for(cfg.order, i.arena()->size())));
  return poly_list(gb.basis());
}

json index_list(const std::vector<std::size_t>& v) {
  json out = json::array();
  for (auto x : v) out.push_back(x + 1);
  return out;
}

json facon_list(const std::vector<Facon>& fs) {
  json out = json::array();
  for (const auto& f : fs) out.push_back(f.to_string());
  return out;
}

json rational_list(const std::vector<Rational>& q) {
  json out = json::array();
  for (const auto& r : q) out.push_back(to_string(r));
  return out;
}

json set_json(const LocallyClosed& s, const RunConfig& cfg) {
  json ex = json::array();
  for (const auto& h : s.exclusions) ex.push_back(reduced(h, cfg));
  return json{{"text", s.to_string()}, {"equations", reduced(s.equations, cfg)}, {"exclusions", ex}};
}

json asymptotic_json(const AsymptoticSet& sf) {
  json comps = json::array();
  for (const auto& c : sf.components)
    comps.push_back({{"equation", c.equation.to_string()},
                     {"possibly_reducible", c.possibly_reducible},
                     {"sources", index_list(c.sources)}});
  json elim = json::array();
  for (const auto& e : sf.per_coordinate)
    elim.push_back({{"coordinate", e.index + 1}, {"eliminant", e.eliminant.to_string()}, {"phi0", e.phi0.to_string()}});
  return json{{"components", comps}, {"eliminants", elim}};
}

json cell_json(const Cell& c, const RunConfig& cfg) {
  json classes = json::array();
  for (const auto& w : c.facons.classes)
    classes.push_back({{"weights", w.weights},
                       {"facon", w.facon.to_string()},
                       {"uple", w.uple.to_string()},
                       {"image", ideal_to_string(w.image)},
                       {"image_dim", w.image_dim},
                       {"generic", w.generic}});
  json witnesses = json::object();
  for (const auto& f : c.facons.facons())
    if (const WeightClass* w = c.facons.witness(f)) witnesses[f.to_string()] = w->weights;
  return json{{"set", set_json(c.set, cfg)},
              {"dimension", c.dimension},
              {"components", index_list(c.components)},
              {"facons", facon_list(c.facons.facons())},
              {"witnesses", witnesses},
              {"classes", classes}};
}

json coverage_json(const CoverageReport& r) {
  return json{{"trials", r.trials},
              {"covered", r.covered},
              {"via_asymptotic_set", r.via_asymptotic_set},
              {"via_fiber", r.via_fiber}};
}

json header(const RunConfig& cfg, const ParsedMap& pm) {
  json comps = json::array();
  for (const auto& c : pm.map.components()) comps.push_back(c.to_string());
  return json{{"schema", "facons-kit/1"},
              {"command", cfg.command},
              {"input",
               {{"file", std::filesystem::path(cfg.input).filename().string()},
                {"source", pm.document.source_vars},
                {"target", pm.document.target_vars},
                {"components", comps}}},
              {"config", {{"weight_box", cfg.weight_box}, {"order", cfg.order}, {"seed", cfg.seed}, {"tol", cfg.tol}}}};
}

struct Pipeline {
  ParsedMap pm;
  AsymptoticSet sf;
  FaconPartition partition;
  Stratification strata;
};

Pipeline run_pipeline(const RunConfig& cfg, bool stratify) {
  if (cfg.weight_box < 1) throw InputError("weight box must be at least 1");
  Pipeline p{load(cfg.input), {}, {}, {}};
  p.sf = asymptotic_set(p.pm.map);
  if (stratify) {
    FaconEngine engine(p.pm.map, cfg.weight_box);
    p.partition = partition_by_facons(engine, p.sf);
    p.strata = star_stratify(p.partition, p.pm.map.target(), cfg.weight_box);
  }
  return p;
}

json strata_json(const Pipeline& p, const RunConfig& cfg) {
  json out = json::array();
  for (const auto& s : p.strata.strata)
    out.push_back({{"name", s.name},
                   {"set", set_json(s.set, cfg)},
                   {"dimension", s.dimension},
                   {"facons", facon_list(s.facon_set)},
                   {"order", order_of(s)},
                   {"incomplete", s.incomplete}});
  return out;
}

std::string text_summary(const Pipeline& p, const FrontierReport& fr) {
  std::ostringstream os;
  os << "asymptotic set:";
  for (const auto& c : p.sf.components) os << " {" << c.equation.to_string() << " = 0}";
  os << "\n";
  for (const auto& s : p.strata.strata)
    os << s.name << "  dim " << s.dimension << "  " << s.label() << "  " << s.facon_string()
       << (s.incomplete ? "  (incomplete)" : "") << "\n";
  for (const auto& [lo, up] : p.strata.frontier_edges)
    os << p.strata.strata[lo].name << " -> " << p.strata.strata[up].name << "\n";
  os << (fr.ok() ? "frontier: ok" : "frontier: " + std::to_string(fr.violations.size()) + " violations") << "\n";
  for (const auto& v : fr.violations) os << "  " << v << "\n";
  return os.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

RunResult cmd_analyze(const RunConfig& cfg) {
  if (cfg.format != "json" && cfg.format != "dot" && cfg.format != "text")
    throw InputError("unknown format '" + cfg.format + "'");
  order_for(cfg.order, 1);
  Pipeline p = run_pipeline(cfg, true);
  FrontierReport fr = check_frontier(p.strata);
  CoverageReport cov = coverage_check(p.pm.map, p.sf, cfg.coverage_trials, cfg.seed);
  bool clean = fr.ok() && p.strata.complete() && cov.covered == cov.trials;
  RunResult res;
  res.exit_code = clean ? 0 : 1;
  if (cfg.format == "dot") {
    res.output = render_dot(p.strata);
    return res;
  }
  if (cfg.format == "text") {
    res.output = text_summary(p, fr);
    return res;
  }
  json j = header(cfg, p.pm);
  j["dominant"] = true;
  j["asymptotic_set"] = asymptotic_json(p.sf);
  json cells = json::array();
  for (const auto& c : p.partition.cells) cells.push_back(cell_json(c, cfg));
  j["cells"] = cells;
  j["strata"] = strata_json(p, cfg);
  json edges = json::array();
  for (const auto& [lo, up] : p.strata.frontier_edges)
    edges.push_back({p.strata.strata[lo].name, p.strata.strata[up].name});
  j["frontier"] = {{"edges", edges},
                   {"pairs_checked", fr.pairs.size()},
                   {"equivalence_violations", fr.equivalence_violations},
                   {"monotonicity_violations", fr.monotonicity_violations},
                   {"frontier_violations", fr.frontier_violations},
                   {"dimension_violations", fr.dimension_violations},
                   {"violations", fr.violations}};
  j["coverage"] = coverage_json(cov);
  j["status"] = clean ? "ok" : (fr.ok() ? "incomplete" : "violations");
  res.output = dump(j);
  return res;
}

RunResult cmd_asymptotic(const RunConfig& cfg) {
  Pipeline p = run_pipeline(cfg, false);
  json j = header(cfg, p.pm);
  j["asymptotic_set"] = asymptotic_json(p.sf);
  return RunResult{0, dump(j), {}, {}};
}

RunResult cmd_facons(const RunConfig& cfg) {
  Pipeline p = run_pipeline(cfg, true);
  json j = header(cfg, p.pm);
  json cells = json::array();
  for (const auto& c : p.partition.cells) cells.push_back(cell_json(c, cfg));
  json classes = json::array();
  for (const auto& c : p.partition.classes) classes.push_back({{"cells", c.cells}, {"facons", facon_list(c.xi)}});
  j["cells"] = cells;
  j["partition"] = classes;
  bool complete = std::none_of(p.partition.cells.begin(), p.partition.cells.end(),
                               [](const Cell& c) { return c.facons.empty(); });
  return RunResult{complete ? 0 : 1, dump(j), {}, {}};
}

std::vector<Rational> parse_point(const std::string& text, std::size_t n) {
  std::vector<Rational> out;
  auto empty = make_arena({});
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(parse_polynomial(part, empty).constant_value());
  if (out.size() != n) throw InputError("start point has the wrong dimension");
  return out;
}

/// Smallest |w|_1, then lexicographic, among the weights of one star group.
std::optional<std::vector<int>> star_witness(const Cell& cell, const Facon& f) {
  auto groups = star_refine(cell.facons, f.base());
  if (f.star_level < 0 || static_cast<std::size_t>(f.star_level) >= groups.size()) return std::nullopt;
  auto ws = groups[f.star_level].weights;
  if (ws.empty()) return std::nullopt;
  auto l1 = [](const std::vector<int>& w) {
    int s = 0;
    for (int x : w) s += std::abs(x);
    return s;
  };
  std::sort(ws.begin(), ws.end(), [&](const auto& a, const auto& b) { return l1(a) != l1(b) ? l1(a) < l1(b) : a < b; });
  return ws.front();
}

RunResult cmd_tube_verify(const RunConfig& cfg) {
  if (!(cfg.tol > 0)) throw InputError("tolerance must be positive");
  Pipeline p = run_pipeline(cfg, true);
  const auto& f = p.pm.map;
  std::size_t n = f.dim();
  RunResult res;

  std::vector<RayTemplate> supplied;
  for (const auto& [key, value] : p.pm.document.options)
    if (key.rfind("ray", 0) == 0) supplied.push_back(parse_ray_template(value, n));
  std::optional<std::vector<Rational>> start;
  if (auto it = p.pm.document.options.find("start"); it != p.pm.document.options.end())
    start = parse_point(it->second, n);
  if (start && p.sf.contains(*start)) throw InputError("start point lies on the asymptotic set");
  if (!start) {
    // First point (1+k, 2+k, ...) off the asymptotic set.
    for (long k = 0; !start; ++k) {
      std::vector<Rational> a;
      for (std::size_t i = 0; i < n; ++i) a.emplace_back(static_cast<long>(i) + 1 + k);
      if (!p.sf.contains(a)) start = a;
    }
  }

  auto template_for = [&](const Stratum& s, const Facon& k) -> std::optional<RayTemplate> {
    for (const auto& t : supplied)
      if (t.facon.same_label(k)) return t;
    auto w = star_witness(p.partition.cells[s.cell], k);
    if (!w) return std::nullopt;
    return infer_template(k, *w);
  };

  json pairs = json::array(), skipped = json::array();
  bool violations = false;
  for (const auto& [lo, up] : p.strata.frontier_edges) {
    const Stratum& lower = p.strata.strata[lo];
    const Stratum& upper = p.strata.strata[up];
    std::optional<std::pair<Facon, Facon>> chain;
    // A strict chain if there is one, else a facon shared by both strata.
    for (bool strict : {true, false}) {
      for (const auto& kl : lower.facon_set) {
        for (const auto& ku : upper.facon_set)
          if (strict ? facon_less(kl, ku) : kl == ku) {
            chain = {kl, ku};
            break;
          }
        if (chain) break;
      }
      if (chain) break;
    }
    auto skip = [&](const std::string& why) {
      skipped.push_back({{"lower", lower.name}, {"upper", upper.name}, {"reason", why}});
      res.warnings.push_back(lower.name + " -> " + upper.name + " skipped: " + why);
    };
    if (!chain) {
      skip("no facon chain");
      continue;
    }
    TubeSpec spec;
    spec.start = *start;
    spec.tol = cfg.tol;
    spec.lower_template = template_for(lower, chain->first);
    spec.upper_template = template_for(upper, chain->second);
    if (!spec.lower_template || !spec.upper_template) {
      skip("missing ray template");
      continue;
    }
    try {
      TubeReport rep = verify_thom_mather(f, lower, upper, spec, &p.sf);
      if (!rep.ok()) violations = true;
      pairs.push_back({{"lower", lower.name},
                       {"upper", upper.name},
                       {"lower_facon", chain->first.to_string()},
                       {"upper_facon", chain->second.to_string()},
                       {"max_pi_residual", rep.max_pi_residual},
                       {"max_rho_residual", rep.max_rho_residual},
                       {"rank_ok", rep.rank_ok},
                       {"samples", rep.samples.size()},
                       {"rho_monotone", rep.rho_monotone},
                       {"limit_curve_exact", rep.limit_curve_exact},
                       {"taper_base", to_string(rep.taper_base)},
                       {"violations", rep.violations}});
    } catch (const RayError& e) {
      skip(e.what());
    } catch (const DivergentIntegral& e) {
      skip(e.what());
    }
  }
  CoverageReport cov = coverage_check(f, p.sf, cfg.coverage_trials, cfg.seed);
  if (cov.covered != cov.trials) violations = true;

  json j = header(cfg, p.pm);
  j["start"] = rational_list(*start);
  j["pairs"] = pairs;
  j["skipped"] = skipped;
  j["coverage"] = {{"trials", cov.trials}, {"covered", cov.covered}};
  j["status"] = violations ? "violations" : "ok";
  res.exit_code = violations ? 1 : 0;
  res.output = dump(j);
  return res;
}

}  // namespace

RunResult run_command(const RunConfig& cfg) {
  try {
    if (cfg.command == "analyze") return cmd_analyze(cfg);
    if (cfg.command == "asymptotic-set") return cmd_asymptotic(cfg);
    if (cfg.command == "facons") return cmd_facons(cfg);
    if (cfg.command == "tube-verify") return cmd_tube_verify(cfg);
    return RunResult{2, "", {}, "unknown command '" + cfg.command + "'"};
  } catch (const ParseError& e) {
    return RunResult{2, "", {}, cfg.input + ": " + e.what()};
  } catch (const InputError& e) {
    return RunResult{2, "", {}, e.what()};
  } catch (const NonDominantMap& e) {
    return RunResult{2, "", {}, e.what()};
  } catch (const ResourceLimitExceeded& e) {
    return RunResult{3, "", {}, std::string("resource limit: ") + e.what()};
  } catch (const std::invalid_argument& e) {
    return RunResult{2, "", {}, e.what()};
  }
}

}  // namespace facons
