#include "qt/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace qt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::optional<int> int_or_auto(const json& j, const char* key, const char* auto_word) {
  if (!j.contains(key)) return std::nullopt;
  const auto& v = j.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() != auto_word) {
      throw Error(std::string("config: ") + key + " must be an integer or \"" + auto_word + "\"");
    }
    return std::nullopt;
  }
  if (!v.is_number_integer()) throw Error(std::string("config: ") + key + " must be an integer");
  return v.get<int>();
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(std::string("config: bad value for ") + key);
  }
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

class Stages {
 public:
  Stages(std::ostream* log) : log_(log) {}

  template <class F>
  auto run(const std::string& name, F&& f) {
    if (log_) *log_ << "[" << name << "]" << std::endl;
    try {
      return f();
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(name, e.what());
    }
  }

 private:
  std::ostream* log_;
};

std::vector<std::pair<VertexId, VertexId>> sample_pairs(std::mt19937_64& rng, std::size_t n,
                                                        std::size_t count) {
  std::vector<std::pair<VertexId, VertexId>> out;
  if (n == 0) return out;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t k = 0; k < count; ++k) {
    const auto a = static_cast<VertexId>(pick(rng));
    const auto b = static_cast<VertexId>(pick(rng));
    out.emplace_back(a, b);
  }
  return out;
}

json axiom_json(const AxiomReport& a) {
  json v = json::array();
  for (const auto& t : a.p1_violations) v.push_back({t.x, t.y, t.z});
  json prof = json::object();
  for (const auto& [k, c] : a.p2_profile) prof[std::to_string(k)] = c;
  return {{"xi", a.xi},
          {"p0_max", a.p0_max},
          {"p1_violations", v},
          {"p2_profile", prof},
          {"p2_max_count", a.p2_max_count},
          {"strong_ok", a.strong_ok},
          {"members", a.members},
          {"safe_pairs", a.safe_pairs},
          {"unsafe_pairs", a.unsafe_pairs},
          {"triples", a.triples}};
}

// Members of one class listed in the same order in two families built from
// the same axes; the second family comes from a larger ball.
std::vector<std::size_t> remap(const ProjectionFamily& from, const ProjectionFamily& to,
                               const std::vector<std::size_t>& members) {
  std::vector<std::size_t> out;
  for (std::size_t m : members) {
    const auto& mm = from.member(m);
    const auto t = to.find(mm.orbit, mm.shift);
    if (!t) throw Error("member " + mm.label + " missing from the stability family");
    out.push_back(*t);
  }
  return out;
}

struct ColoringStage {
  ColorClasses col;
  std::size_t within_violations = 0;
};

ColoringStage color(const ProjectionFamily& fam, int theta) {
  ColoringStage s{greedy_color(fam, theta), 0};
  for (const auto& cls : s.col.classes) {
    for (std::size_t i = 0; i < cls.size(); ++i) {
      for (std::size_t j = i + 1; j < cls.size(); ++j) {
        if (conflict(fam, cls[i], cls[j], theta)) ++s.within_violations;
      }
    }
  }
  return s;
}

json check(bool passed, json detail) {
  detail["passed"] = passed;
  return detail;
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw Error("config: top level must be an object");
  PipelineConfig c;
  if (j.contains("synthetic")) {
    const auto& s = j.at("synthetic");
    SyntheticOptions o;
    read(s, "seed", o.seed);
    read(s, "n", o.n);
    read(s, "spread", o.spread);
    read(s, "planted", o.planted);
    c.synthetic = o;
  } else {
    if (!j.contains("presentation")) throw Error("config: missing presentation");
    fs::path pres = j.at("presentation").get<std::string>();
    if (pres.is_relative() && fs::exists(base_dir / pres)) pres = base_dir / pres;
    if (!fs::exists(pres)) throw Error("config: presentation file not found: " + pres.string());
    c.presentation = pres;
  }
  read(j, "radius", c.radius);
  read(j, "L_cand", c.L_cand);
  read(j, "L", c.L);
  if (!j.contains("L_cand")) c.L_cand = 2 * c.L;
  if (j.contains("estimate_L")) {
    const auto& v = j.at("estimate_L");
    if (v.is_string() && v.get<std::string>() == "2K") {
      c.estimate_L = -1;
    } else if (v.is_number_integer() && v.get<int>() > 0) {
      c.estimate_L = v.get<int>();
    } else {
      throw Error("config: estimate_L must be a positive integer or \"2K\"");
    }
  }
  c.R = int_or_auto(j, "R", "auto");
  c.theta = int_or_auto(j, "theta", "auto");
  c.K = int_or_auto(j, "K", "4xi");
  if (j.contains("K_policy")) {
    const auto pol = j.at("K_policy").get<std::string>();
    if (pol != "4xi" && pol != "none") throw Error("config: K_policy must be \"4xi\" or \"none\"");
    c.K_policy = pol == "4xi";
  }
  read(j, "family_radius", c.family_radius);
  read(j, "axiom_window", c.axiom_window);
  read(j, "stability_step", c.stability_step);
  read(j, "cert_radius", c.cert_radius);
  if (j.contains("samples")) {
    const auto& s = j.at("samples");
    read(s, "hyperbolicity_tuples", c.samples.hyperbolicity_tuples);
    read(s, "formula_pairs", c.samples.formula_pairs);
    read(s, "bottleneck_pairs", c.samples.bottleneck_pairs);
    read(s, "main_pairs", c.samples.main_pairs);
  }
  read(j, "seed", c.seed);
  if (j.contains("output")) c.output = j.at("output").get<std::string>();
  read(j, "dump_family", c.dump_family);
  read(j, "dump_complexes", c.dump_complexes);

  if (!c.synthetic) {
    if (c.radius < 1) throw Error("config: radius must be positive");
    if (c.L < 1 || c.L_cand < c.L) throw Error("config: need 1 <= L <= L_cand");
    if (c.family_radius < 0 || c.family_radius > c.radius) {
      throw Error("config: family_radius must lie in [0, radius]");
    }
    if (c.cert_radius > c.radius) throw Error("config: cert_radius exceeds radius");
    if (c.stability_step < 0) throw Error("config: stability_step must be non-negative");
    if (!c.theta && c.stability_step == 0) {
      throw Error("config: theta \"auto\" needs a positive stability_step");
    }
  }
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("config: " + std::string(e.what()));
  }
  return from_json(j, path.parent_path());
}

json PipelineConfig::to_json() const {
  auto opt = [](const std::optional<int>& v, const char* word) -> json {
    return v ? json(*v) : json(word);
  };
  json j{{"radius", radius},
         {"L_cand", L_cand},
         {"L", L},
         {"estimate_L", estimate_L == 0 ? json(L) : estimate_L < 0 ? json("2K") : json(estimate_L)},
         {"R", opt(R, "auto")},
         {"theta", opt(theta, "auto")},
         {"K", opt(K, "4xi")},
         {"K_policy", K_policy ? "4xi" : "none"},
         {"family_radius", family_radius},
         {"axiom_window", axiom_window},
         {"stability_step", stability_step},
         {"cert_radius", cert_radius},
         {"samples",
          {{"hyperbolicity_tuples", samples.hyperbolicity_tuples},
           {"formula_pairs", samples.formula_pairs},
           {"bottleneck_pairs", samples.bottleneck_pairs},
           {"main_pairs", samples.main_pairs}}},
         {"seed", seed}};
  if (synthetic) {
    j["synthetic"] = {{"seed", synthetic->seed},
                      {"n", synthetic->n},
                      {"spread", synthetic->spread},
                      {"planted", synthetic->planted}};
  } else {
    j["presentation"] = presentation.filename().string();
  }
  return j;
}

namespace {

// Checks shared by Cayley and synthetic runs once a family exists.
struct ComplexStage {
  std::vector<QuasiTreeComplex> complexes;
};

json formula_and_bottleneck(const PipelineConfig& cfg, const ProjectionFamily& fam,
                            const ColorClasses& col, int K, std::optional<int> xi,
                            std::mt19937_64& rng, ComplexStage& cs, Stages& st,
                            const ProjectionFamily* fam2, json& checks, json& rows_out) {
  cs.complexes = st.run("complexes", [&] {
    std::vector<QuasiTreeComplex> out;
    for (const auto& cls : col.classes) {
      out.push_back(build_complex(fam, cls, {K, cfg.K_policy}, xi));
    }
    return out;
  });
  json info = json::array();
  for (std::size_t i = 0; i < cs.complexes.size(); ++i) {
    const auto& c = cs.complexes[i];
    info.push_back({{"members", c.members().size()},
                    {"vertices", c.graph().size()},
                    {"edges", c.graph().edge_count()},
                    {"cross_pairs", c.cross_pairs().size()},
                    {"connected", c.graph().connected()}});
    if (cfg.dump_complexes) {
      std::ostringstream os;
      c.graph().write_adjacency(os);
      write_file(cfg.output / ("complex_" + std::to_string(i) + ".adj"), os.str());
    }
  }

  st.run("distance formula", [&] {
    std::size_t evaluated = 0, unsafe = 0, violations = 0;
    double max_lower = 0.0, max_upper = 0.0;
    rows_out = json::array();
    for (std::size_t i = 0; i < cs.complexes.size(); ++i) {
      const auto& c = cs.complexes[i];
      const auto pairs = sample_pairs(rng, c.graph().size(), cfg.samples.formula_pairs);
      const auto rep = verify_distance_formula(c, fam, pairs);
      evaluated += rep.rows.size();
      unsafe += rep.unsafe;
      violations += rep.violations;
      max_lower = std::max(max_lower, rep.max_sigma_over_d);
      max_upper = std::max(max_upper, rep.max_excess_over_sigma);
      for (const auto& r : rep.rows) {
        rows_out.push_back({{"class", i},
                            {"x", c.graph().name(r.x)},
                            {"z", c.graph().name(r.z)},
                            {"lhs", r.sigma / 4.0},
                            {"mid", r.d},
                            {"rhs", 2 * r.sigma + 3 * K},
                            {"ok", r.ok}});
      }
    }
    checks["distance formula"] =
        check(violations == 0, {{"evaluated", evaluated},
                                {"unsafe", unsafe},
                                {"violations", violations},
                                {"K", K},
                                {"max_sigma_over_d", max_lower},
                                {"max_excess_over_sigma", max_upper}});
    return 0;
  });

  st.run("quasi-tree bottleneck", [&] {
    std::vector<QuasiTreeComplex> larger;
    if (fam2) {
      for (const auto& c : cs.complexes) {
        larger.push_back(build_complex(*fam2, remap(fam, *fam2, c.members()), {K, cfg.K_policy}, xi));
      }
    }
    json deltas = json::array(), deltas2 = json::array();
    std::size_t disconnected = 0, evaluated = 0;
    bool stable = true;
    for (std::size_t i = 0; i < cs.complexes.size(); ++i) {
      const auto& g = cs.complexes[i].graph();
      std::vector<std::pair<VertexId, VertexId>> pairs;
      for (const auto& [x, z] : sample_pairs(rng, g.size(), cfg.samples.bottleneck_pairs)) {
        if (g.distances_from(x)[z] == kUnreachable) {
          ++disconnected;
          continue;
        }
        pairs.emplace_back(x, z);
      }
      evaluated += pairs.size();
      const auto res = bottleneck_check(g, pairs);
      deltas.push_back(res.delta);
      if (fam2) {
        const auto& g2 = larger[i].graph();
        std::vector<std::pair<VertexId, VertexId>> pairs2;
        for (const auto& [x, z] : pairs) {
          const auto x2 = g2.find(g.name(x));
          const auto z2 = g2.find(g.name(z));
          if (!x2 || !z2) throw Error("vertex " + g.name(x) + " missing at the larger radius");
          if (g2.distances_from(*x2)[*z2] != kUnreachable) pairs2.emplace_back(*x2, *z2);
        }
        const auto res2 = bottleneck_check(g2, pairs2);
        deltas2.push_back(res2.delta);
        if (res2.delta > res.delta) stable = false;
      }
    }
    json detail{{"delta", deltas}, {"evaluated", evaluated}, {"disconnected", disconnected}};
    if (fam2) {
      detail["delta_larger_radius"] = deltas2;
      detail["stable"] = stable;
    }
    checks["quasi-tree bottleneck"] = check(stable, detail);
    return 0;
  });
  return info;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg, std::ostream* log) {
  Stages st(log);
  std::error_code ec;
  fs::create_directories(cfg.output, ec);
  if (ec) throw StageError("output", "cannot create " + cfg.output.string());

  std::mt19937_64 rng(cfg.seed);
  json report;
  report["config"] = cfg.to_json();
  json checks = json::object();
  json formula_rows;

  if (cfg.synthetic) {
    auto syn = st.run("family", [&] { return synthetic_family(*cfg.synthetic); });
    const auto& fam = syn.family;
    const auto ax = st.run("axioms", [&] { return verify_axioms(fam); });
    report["axioms"] = axiom_json(ax);
    write_file(cfg.output / "axioms.json", report["axioms"].dump(2) + "\n");
    checks["projection axioms"] =
        check(ax.p1_violations.empty(), {{"p1_violations", ax.p1_violations.size()},
                                         {"xi", ax.xi},
                                         {"declared_xi", *fam.declared_xi}});
    const int xi = *fam.declared_xi;
    const int K = cfg.K ? *cfg.K : std::max(1, 4 * xi);
    report["K"] = K;
    const int theta = cfg.theta ? *cfg.theta : orbit_conflict_bound(fam);
    auto cst = st.run("coloring", [&] { return color(fam, theta); });
    report["coloring"] = {{"theta", theta}, {"m", cst.col.m()}};
    checks["coloring"] = check(cst.within_violations == 0,
                               {{"within_class_violations", cst.within_violations}});
    ComplexStage cs;
    report["complexes"] = formula_and_bottleneck(cfg, fam, cst.col, K, xi, rng, cs, st, nullptr,
                                                 checks, formula_rows);
  } else {
    const auto p = st.run("presentation", [&] { return Presentation::load(cfg.presentation); });
    const CayleyBall ball = st.run("ball", [&] { return CayleyBall(p, cfg.radius); });
    st.run("hyperbolicity", [&] {
      std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(ball.size()) - 1);
      std::vector<FourTuple> tuples;
      for (std::size_t k = 0; k < cfg.samples.hyperbolicity_tuples; ++k) {
        tuples.push_back({pick(rng), pick(rng), pick(rng), pick(rng)});
      }
      const auto h = estimate_hyperbolicity(ball.graph(), tuples);
      report["ball"] = {{"radius", cfg.radius},
                        {"vertices", ball.size()},
                        {"edges", ball.graph().edge_count()},
                        {"spheres", ball.sphere_sizes()},
                        {"delta", h.delta},
                        {"tuples", h.tuples}};
      return 0;
    });

    const auto candidates = st.run("axes", [&] { return candidate_axes(p, cfg.L_cand); });
    AxesConfig acfg;
    acfg.L = cfg.L;
    acfg.L_cand = cfg.L_cand;
    const auto selected =
        st.run("axes", [&] { return select_preferred_axes(p, candidates, acfg, ball); });
    {
      const auto cov = coverage(candidates, selected, cfg.L);
      json sel = json::array(), unc = json::array();
      for (const auto& a : selected.axes) sel.push_back(p.format(a.g()));
      for (const auto& w : cov.uncovered) unc.push_back(p.format(w));
      report["axes"] = {{"candidates", candidates.axes.size()},
                        {"selected", sel},
                        {"subwords", cov.words.size()},
                        {"uncovered", unc}};
      std::ostringstream os;
      write_axes(os, p, selected);
      write_file(cfg.output / "axes.txt", os.str());
    }

    const auto fam = st.run("family", [&] {
      return materialize_family(selected, ball, {cfg.family_radius});
    });
    if (cfg.dump_family) {
      std::ostringstream os;
      fam.write_csv(os);
      write_file(cfg.output / "family.csv", os.str());
    }
    std::optional<CayleyBall> ball2;
    std::optional<ProjectionFamily> fam2;
    if (cfg.stability_step > 0) {
      ball2 = st.run("stability ball",
                     [&] { return CayleyBall(p, cfg.radius + cfg.stability_step); });
      fam2 = st.run("stability family", [&] {
        return materialize_family(selected, *ball2, {cfg.family_radius});
      });
    }

    const auto ax = st.run("axioms", [&] {
      return verify_axioms(fam, cfg.axiom_window < 0 ? std::vector<std::size_t>{}
                                                     : shift_window(fam, cfg.axiom_window));
    });
    report["axioms"] = axiom_json(ax);
    bool p2_stable = true;
    if (fam2) {
      const auto ax2 = st.run("axioms", [&] {
        return verify_axioms(*fam2, cfg.axiom_window < 0 ? std::vector<std::size_t>{}
                                                         : shift_window(*fam2, cfg.axiom_window));
      });
      p2_stable = ax2.p2_profile == ax.p2_profile;
      report["axioms"]["larger_radius"] = axiom_json(ax2);
      report["axioms"]["p2_stable"] = p2_stable;
    }
    write_file(cfg.output / "axioms.json", report["axioms"].dump(2) + "\n");
    checks["projection axioms"] = check(ax.p1_violations.empty() && p2_stable,
                                        {{"p1_violations", ax.p1_violations.size()},
                                         {"xi", ax.xi},
                                         {"p2_stable", p2_stable}});

    const int xi = ax.xi;
    const int K = st.run("threshold", [&] {
      const int k = cfg.K ? *cfg.K : std::max(1, 4 * xi);
      if (k <= 0) throw Error("threshold K must be positive");
      return k;
    });
    report["K"] = K;

    const int theta = st.run("theta", [&] {
      const int bound = orbit_conflict_bound(fam);
      json scans = json::array();
      std::vector<ScanResult> r1, r2;
      for (const auto& a : selected.axes) {
        r1.push_back(double_coset_scan(a, ball, 0));
        if (ball2) r2.push_back(double_coset_scan(a, *ball2, 0));
      }
      auto keys_above = [](const ScanResult& s, int t) {
        std::set<Word> out;
        for (const auto& e : s.entries) {
          if (e.diam > t) out.insert(e.key);
        }
        return out;
      };
      auto stable_at = [&](int t) {
        for (std::size_t i = 0; i < r1.size(); ++i) {
          if (keys_above(r1[i], t) != keys_above(r2[i], t)) return false;
        }
        return true;
      };
      int value = 0;
      if (cfg.theta) {
        value = *cfg.theta;
      } else {
        std::set<int> cands{bound};
        for (const auto& s : r1) {
          for (const auto& e : s.entries) {
            if (e.diam >= bound) cands.insert(e.diam);
          }
        }
        for (const auto& s : r2) {
          for (const auto& e : s.entries) {
            if (e.diam >= bound) cands.insert(e.diam);
          }
        }
        value = *cands.rbegin();
        for (int t : cands) {
          if (stable_at(t)) {
            value = t;
            break;
          }
        }
      }
      for (std::size_t i = 0; i < r1.size(); ++i) {
        ScanResult above;
        above.truncated = r1[i].truncated;
        above.scanned = r1[i].scanned;
        for (const auto& e : r1[i].entries) {
          if (e.diam > value) above.entries.push_back(e);
        }
        std::ostringstream os;
        write_scan_csv(os, p, above);
        write_file(cfg.output / ("scan_" + std::to_string(i) + ".csv"), os.str());
        json s{{"axis", p.format(selected.axes[i].g())},
               {"keys", above.entries.size()},
               {"truncated", r1[i].truncated}};
        if (ball2) s["stable"] = keys_above(r1[i], value) == keys_above(r2[i], value);
        scans.push_back(s);
      }
      report["theta"] = {{"value", value},
                         {"auto", !cfg.theta.has_value()},
                         {"orbit_bound", bound},
                         {"scans", scans}};
      return value;
    });

    auto cst = st.run("coloring", [&] { return color(fam, theta); });
    {
      json sizes = json::array(), split = json::array();
      for (const auto& c : cst.col.classes) sizes.push_back(c.size());
      for (auto o : cst.col.split_orbits) split.push_back(o);
      report["coloring"] = {{"theta", theta},
                            {"m", cst.col.m()},
                            {"class_sizes", sizes},
                            {"split_orbits", split}};
      checks["coloring"] = check(cst.within_violations == 0,
                                 {{"within_class_violations", cst.within_violations}});
    }

    ComplexStage cs;
    report["complexes"] = formula_and_bottleneck(cfg, fam, cst.col, K, xi, rng, cs, st,
                                                 fam2 ? &*fam2 : nullptr, checks, formula_rows);

    const int L_est = cfg.resolved_estimate_L(K);
    const int R_used = st.run("main estimate", [&] {
      std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(ball.size()) - 1);
      std::vector<std::pair<Word, Word>> pairs;
      for (std::size_t k = 0; k < cfg.samples.main_pairs; ++k) {
        const VertexId a = pick(rng), b = pick(rng);
        pairs.emplace_back(ball.word(a), ball.word(b));
      }
      const auto rep = verify_main_estimate(ball, candidates, fam, {K, L_est, cfg.R ? *cfg.R : -1},
                                            pairs);
      json rows = json::array();
      for (const auto& r : rep.rows) {
        rows.push_back({{"x", p.format(r.x)},
                        {"y", p.format(r.y)},
                        {"d", r.d},
                        {"sigma", r.sigma},
                        {"rhs", r.rhs},
                        {"witness_R", r.witness_R},
                        {"ok", r.ok}});
      }
      write_file(cfg.output / "main_estimate.json", rows.dump(2) + "\n");
      checks["main estimate"] = check(rep.violations == 0, {{"evaluated", rep.rows.size()},
                                                            {"skipped", rep.skipped},
                                                            {"violations", rep.violations},
                                                            {"K", K},
                                                            {"L", L_est},
                                                            {"R", rep.R},
                                                            {"min_margin", rep.min_margin}});
      return rep.R;
    });

    if (cfg.cert_radius >= 0) {
      st.run("embedding", [&] {
        ProductSpace sp{cs.complexes};
        const auto x = identity_basepoint(sp, fam, ball);
        const auto rep = qi_certify(sp, x, fam, selected, ball, {L_est, R_used, cfg.cert_radius});
        std::ostringstream csv;
        csv << "h,|h|,dist\n";
        for (const auto& r : rep.rows) csv << p.format(r.h) << "," << r.length << "," << r.dist << "\n";
        write_file(cfg.output / "embedding.csv", csv.str());
        write_file(cfg.output / "embedding.svg", scatter_svg(rep));
        json summary{{"c_up", rep.c_up},
                     {"certified", rep.rows.size()},
                     {"lower_violations", rep.lower_violations},
                     {"upper_violations", rep.upper_violations},
                     {"min_ratio", rep.min_ratio},
                     {"m", cst.col.m()},
                     {"theta", theta},
                     {"xi", xi},
                     {"K", K},
                     {"L", L_est},
                     {"R", R_used}};
        write_file(cfg.output / "embedding.json", summary.dump(2) + "\n");
        checks["orbit lower bound"] =
            check(rep.lower_violations == 0 && rep.upper_violations == 0, summary);
        return 0;
      });
    }
  }

  write_file(cfg.output / "distance_formula.json", formula_rows.dump(2) + "\n");
  bool passed = true;
  for (const auto& [_, c] : checks.items()) passed = passed && c.at("passed").get<bool>();
  report["checks"] = checks;
  report["passed"] = passed;
  write_file(cfg.output / "report.json", report.dump(2) + "\n");
  return {report, passed};
}

std::string explain(const json& report) {
  std::ostringstream out;
  if (!report.is_object() || !report.contains("checks") || report.at("checks").empty()) {
    return "no checks run\n";
  }
  for (const auto& [name, c] : report.at("checks").items()) {
    const bool ok = c.value("passed", false);
    out << (ok ? "PASS " : "FAIL ") << name;
    std::vector<std::string> bits;
    for (const auto& [k, v] : c.items()) {
      if (k == "passed" || v.is_array() || v.is_object()) continue;
      bits.push_back(k + "=" + v.dump());
    }
    if (!bits.empty()) {
      out << " (";
      for (std::size_t i = 0; i < bits.size(); ++i) out << (i ? ", " : "") << bits[i];
      out << ")";
    }
    out << "\n";
  }
  if (report.contains("passed")) out << (report.at("passed").get<bool>() ? "all checks passed\n" : "some checks failed\n");
  return out.str();
}

std::string scatter_svg(const EmbeddingReport& rep) {
  constexpr int W = 640, H = 480, M = 50;
  int max_len = 1, max_d = 1;
  for (const auto& r : rep.rows) {
    max_len = std::max(max_len, r.length);
    if (r.dist != kUnreachable) max_d = std::max(max_d, r.dist);
  }
  auto sx = [&](int v) { return M + (W - 2 * M) * v / max_len; };
  auto sy = [&](int v) { return H - M - (H - 2 * M) * v / max_d; };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M << "\" y2=\"" << H - M
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << M << "\" y2=\"" << M
    << "\" stroke=\"black\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">|h| (max "
    << max_len << ")</text>\n";
  o << "<text x=\"15\" y=\"" << H / 2 << "\" transform=\"rotate(-90 15 " << H / 2
    << ")\" text-anchor=\"middle\">d(x, hx) (max " << max_d << ")</text>\n";
  std::set<std::pair<int, int>> seen;
  for (const auto& r : rep.rows) {
    if (r.dist == kUnreachable || !seen.insert({r.length, r.dist}).second) continue;
    o << "<circle cx=\"" << sx(r.length) << "\" cy=\"" << sy(r.dist) << "\" r=\"3\" fill=\""
      << (r.lower_ok && r.upper_ok ? "steelblue" : "crimson") << "\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace qt
