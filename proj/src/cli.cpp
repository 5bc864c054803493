#include "seqlab/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "seqlab/ainfty.hpp"
#include "seqlab/dehn.hpp"
#include "seqlab/elimination.hpp"
#include "seqlab/errors.hpp"
#include "seqlab/fixtures.hpp"
#include "seqlab/index_lab.hpp"
#include "seqlab/json_io.hpp"
#include "seqlab/spectral.hpp"
#include "seqlab/triangle.hpp"

namespace seqlab {

namespace {

struct Outcome {
  Json report;
  ExitCode code = ExitCode::Success;
};

std::string error_kind(const std::exception& e) {
#define SEQLAB_KIND(Name) \
  if (dynamic_cast<const Name*>(&e)) return #Name
  SEQLAB_KIND(InputError);
  SEQLAB_KIND(ZeroDivision);
  SEQLAB_KIND(NotInvertible);
  SEQLAB_KIND(OddIndex);
  SEQLAB_KIND(ZeroMap);
  SEQLAB_KIND(InconsistentEquivalence);
  SEQLAB_KIND(NotAComplex);
  SEQLAB_KIND(Unsupported);
  SEQLAB_KIND(NotGapped);
  SEQLAB_KIND(CapTooSmall);
  SEQLAB_KIND(NotStabilized);
  SEQLAB_KIND(HypothesisFailed);
  SEQLAB_KIND(ExactnessFailure);
  SEQLAB_KIND(DivergenceRisk);
  SEQLAB_KIND(SquareNonzero);
  SEQLAB_KIND(NotClosed);
  SEQLAB_KIND(SamplingTooCoarse);
  SEQLAB_KIND(DegenerateCrossing);
  SEQLAB_KIND(CornerMismatch);
  SEQLAB_KIND(JumpTooLarge);
  SEQLAB_KIND(NotLagrangian);
  SEQLAB_KIND(ZeroSection);
  SEQLAB_KIND(OnSingularity);
  SEQLAB_KIND(DomainError);
#undef SEQLAB_KIND
  return "Error";
}

// Errors that state a mathematical verdict on valid input rather than reject it.
bool is_verdict(const std::string& kind) {
  for (const char* k : {"NotGapped", "CapTooSmall", "NotStabilized", "HypothesisFailed", "ExactnessFailure",
                        "SquareNonzero", "DivergenceRisk"})
    if (kind == k) return true;
  return false;
}

// 12 significant digits, stored back as a double so the dump stays numeric.
Json decimal(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

const std::string& single_input(const RunConfig& cfg) {
  if (cfg.inputs.empty()) throw InputError("", "command '" + cfg.command + "' needs an input file");
  return cfg.inputs.front();
}

Json cells_json(const SpectralPage& page) {
  Json cells = Json::array();
  for (const auto& [pq, elems] : page.cells) {
    if (elems.empty()) continue;
    Json c;
    c["p"] = pq.first;
    c["q"] = pq.second;
    c["rank"] = elems.size();
    cells.push_back(c);
  }
  return cells;
}

Outcome cmd_spectral(const RunConfig& cfg) {
  FilteredComplex c = read_complex(read_json_file(single_input(cfg)), "");
  if (cfg.cap) c.cap = *cfg.cap;
  auto rep = check_complex(c);
  if (!rep.ok()) throw NotAComplex(rep.violations.front().kind + ": " + rep.violations.front().witness);
  FiltrationScheme scheme = default_scheme(c);
  SpectralResult s = compute_pages(c, scheme);
  Outcome o;
  o.report["lambda0"] = write_rational(scheme.lambda0);
  o.report["step"] = write_rational(s.step);
  o.report["cap"] = write_rational(c.cap);
  Json pages = Json::array();
  for (const auto& page : s.pages) {
    Json pj;
    pj["r"] = page.r;
    pj["cells"] = cells_json(page);
    pages.push_back(pj);
  }
  o.report["pages"] = pages;
  o.report["stabilized_at"] = stabilization(c, s);
  o.report["limit"] = cells_json(s.limit);
  Json hom = Json::object();
  for (const auto& [p, r] : field_homology(c)) hom[std::to_string(p)] = r;
  o.report["field_homology"] = hom;
  return o;
}

Outcome cmd_triangle(const RunConfig& cfg) {
  TriangleData t = read_triangle(read_json_file(single_input(cfg)), "");
  Outcome o;
  HypothesisReport hyp = check_triangle_hypotheses(t);
  Json items = Json::array();
  for (const auto& item : hyp.items) {
    Json ij;
    ij["name"] = item.name;
    ij["passed"] = item.passed;
    ij["witnesses"] = item.witnesses;
    items.push_back(ij);
  }
  o.report["hypotheses"] = items;
  LongExactSequence les = compute_les(t, cfg.cap);
  Json nodes = Json::array();
  for (const auto& n : les.nodes) {
    Json nj;
    nj["space"] = n.space;
    nj["degree"] = n.degree;
    nj["dim"] = n.dim;
    nj["rank_in"] = n.rank_in;
    nj["rank_out"] = n.rank_out;
    nj["exact"] = n.exact;
    nodes.push_back(nj);
  }
  Json maps = Json::array();
  for (const auto& m : les.maps) {
    Json mj;
    mj["name"] = m.name;
    mj["degree"] = m.degree;
    mj["rank"] = m.rank;
    maps.push_back(mj);
  }
  o.report["les"] = {{"cap", write_rational(les.cap)}, {"nodes", nodes}, {"maps", maps}};
  o.report["exact"] = les.exact();
  o.report["exactness_level"] = "module";  // ranks of induced maps; chain-level exactness of low parts is not asserted
  if (!hyp.ok() || !les.exact()) o.code = ExitCode::Negative;
  return o;
}

Json residuals_json(const AInftyData& a, const RelationReport& rep) {
  Json arr = Json::array();
  for (const auto& r : rep.residuals) {
    Json rj;
    Json names = Json::array();
    for (auto i : r.inputs) names.push_back(a.generators[i].name);
    rj["inputs"] = names;
    rj["value"] = write_element(r.value, a.generators);
    arr.push_back(rj);
  }
  return arr;
}

Outcome cmd_ainfty_check(const RunConfig& cfg) {
  AInftyData a = read_ainfty(read_json_file(single_input(cfg)), "");
  if (cfg.cap) a.cap = *cfg.cap;
  Outcome o;
  CheckReport data = check_ainfty_data(a);
  Json vs = Json::array();
  for (const auto& v : data.violations) vs.push_back({{"kind", v.kind}, {"witness", v.witness}});
  o.report["data_violations"] = vs;
  RelationReport direct = ainfty_relation_check(a);
  RelationReport bar = ainfty_relation_check_bar(a);
  o.report["relations_ok"] = direct.ok();
  o.report["residuals"] = residuals_json(a, direct);
  o.report["bar_agrees"] = residuals_json(a, direct) == residuals_json(a, bar);
  if (!data.ok() || !direct.ok()) o.code = ExitCode::Negative;
  return o;
}

Json mc_json(const AInftyData& a, const McOutcome& mc) {
  Json r;
  if (!mc.obstructed) {
    r["status"] = "solved";
    r["solution"] = write_element(mc.solution.b, a.generators);
    return r;
  }
  r["status"] = "obstructed";
  r["level"] = write_rational(mc.level);
  r["mu"] = write_mu2(mc.e2);
  Json cls = Json::array();
  for (std::size_t i = 0; i < mc.basis.size(); ++i)
    if (mc.obstruction_class[i] != 0)
      cls.push_back({{"generator", a.generators[mc.basis[i]].name}, {"c", write_rational(mc.obstruction_class[i])}});
  r["class"] = cls;
  return r;
}

Outcome cmd_mc_solve(const RunConfig& cfg) {
  AInftyData a = read_ainfty(read_json_file(single_input(cfg)), "");
  McOutcome mc = mc_solve(a, cfg.cap ? *cfg.cap : a.cap);
  Outcome o;
  o.report = mc_json(a, mc);
  if (mc.obstructed) o.code = ExitCode::Negative;
  return o;
}

Outcome cmd_deform(const RunConfig& cfg) {
  AInftyData a = read_ainfty(read_json_file(single_input(cfg)), "");
  if (cfg.cap) a.cap = *cfg.cap;
  Outcome o;
  BoundingCochain b;
  if (cfg.inputs.size() > 1) {
    b.b = read_element(read_json_file(cfg.inputs[1]), "", a.generators);
  } else {
    McOutcome mc = mc_solve(a, a.cap);
    if (mc.obstructed) {
      o.report["maurer_cartan"] = mc_json(a, mc);
      o.code = ExitCode::Negative;
      return o;
    }
    b = mc.solution;
  }
  AInftyData d = deform(a, b);
  o.report["b"] = write_element(b.b, a.generators);
  o.report["deformed"] = write_ainfty(d);
  o.report["curvature_vanishes"] = d.ops.find({}) == d.ops.end();
  // m_1^b squared, truncated at the cap.
  bool square_zero = true;
  for (std::size_t g = 0; g < d.generators.size() && square_zero; ++g) {
    Element x{{g, NovikovScalar::constant(1)}};
    Element once = evaluate(d, {&x});
    Element twice = evaluate(d, {&once});
    square_zero = element_is_zero(truncate_element(d, twice, d.cap));
  }
  o.report["m1_squares_to_zero"] = square_zero;
  if (!square_zero || d.ops.count({})) o.code = ExitCode::Negative;
  return o;
}

Json path_summary(const LagrangianPath& p) { return {{"samples", p.size()}, {"n", p.n()}}; }

Outcome cmd_index(const RunConfig& cfg) {
  Json in = read_json_file(single_input(cfg));
  Outcome o;
  o.report["mode"] = cfg.mode;
  auto field = [&](const char* key) -> const Json& {
    if (!in.is_object() || !in.contains(key)) throw InputError(pointer_append("", key), "missing field");
    return in[key];
  };
  if (cfg.mode == "loop") {
    LagrangianPath p = read_path(field("path"), "/path");
    o.report["path"] = path_summary(p);
    o.report["maslov"] = loop_maslov(p);
  } else if (cfg.mode == "rs") {
    LagrangianPath p = read_path(field("path"), "/path");
    Frame ref = read_frame(field("reference"), "/reference");
    o.report["path"] = path_summary(p);
    o.report["rs_index_doubled"] = rs_index_doubled(p, ref);
  } else if (cfg.mode == "mm") {
    const Json& edges = field("edges");
    if (!edges.is_array() || edges.size() != 4) throw InputError("/edges", "expected four edges");
    std::vector<LagrangianPath> es;
    for (std::size_t i = 0; i < 4; ++i) es.push_back(read_path(edges[i], pointer_append("/edges", i)));
    o.report["maslov_morse"] = maslov_morse(es);
  } else if (cfg.mode == "dim") {
    IndexFormulaInput f;
    auto get_int = [&](const char* key) {
      const Json& j = field(key);
      if (!j.is_number_integer()) throw InputError(pointer_append("", key), "expected an integer");
      return j.get<int>();
    };
    f.n = get_int("n");
    f.c1 = in.contains("c1") ? get_int("c1") : 0;
    std::string mode = in.contains("formula") ? in["formula"].get<std::string>() : "morse-bott";
    DimensionMode dm;
    if (mode == "morse-bott") {
      dm = DimensionMode::MorseBott;
      f.morse = get_int("morse");
    } else if (mode == "cz") {
      dm = DimensionMode::CZ;
      f.mu_cz2 = get_int("mu_cz2");
    } else {
      throw InputError("/formula", "expected \"cz\" or \"morse-bott\"");
    }
    DimensionVerdict v = sft_dimension(f, dm);
    o.report["dimension"] = v.dimension;
    o.report["empty_for_generic"] = v.empty_for_generic;
  } else {
    throw InputError("", "index mode must be loop, rs, mm or dim");
  }
  return o;
}

Outcome cmd_dehn(const RunConfig& cfg) {
  DehnTolerances tol;
  if (cfg.tolerance_profile == "strict") tol = tol.scaled(0.01);
  DehnReport r = dehn_report(cfg.n, cfg.lambda, cfg.delta, cfg.samples, cfg.seed, tol);
  Outcome o;
  Json& j = o.report;
  j["n"] = r.n;
  j["lambda"] = decimal(r.lambda);
  j["delta"] = decimal(r.delta);
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["residuals"] = {{"sigma_identity", decimal(r.sigma_identity)},
                    {"sigma_antipode", decimal(r.sigma_antipode)},
                    {"sigma_composition", decimal(r.sigma_composition)},
                    {"symplecticity", decimal(r.symplecticity)},
                    {"exactness", decimal(r.exactness)},
                    {"exactness_printed_primitive", decimal(r.exactness_printed)},
                    {"functional_equation", decimal(r.functional_equation)},
                    {"phi_equivariance", decimal(r.phi_equivariance)},
                    {"phi_pullback", decimal(r.phi_pullback)},
                    {"twist_equivariance", decimal(r.twist_equivariance)},
                    {"fixed_outside", decimal(r.fixed_outside)},
                    {"zero_section", decimal(r.zero_section)},
                    {"max_projection", decimal(r.max_projection)}};
  j["tolerances"] = {{"sigma_endpoint", decimal(tol.sigma_endpoint)},
                     {"sigma_composition", decimal(tol.sigma_composition)},
                     {"symplecticity", decimal(tol.symplecticity)},
                     {"exactness", decimal(tol.exactness)},
                     {"functional_equation", decimal(tol.functional_equation)},
                     {"phi_equivariance", decimal(tol.phi_equivariance)},
                     {"phi_pullback", decimal(tol.phi_pullback)},
                     {"twist_equivariance", decimal(tol.twist_equivariance)}};
  j["wobbly"] = r.wobbly;
  j["within_tolerance"] = r.within_tolerance;
  if (!r.within_tolerance) o.code = ExitCode::Negative;
  return o;
}

Outcome cmd_novikov_eval(const RunConfig& cfg) {
  Json in = read_json_file(single_input(cfg));
  if (!in.is_object() || !in.contains("op") || !in["op"].is_string()) throw InputError("/op", "missing operation");
  std::string op = in["op"].get<std::string>();
  auto scalar = [&](const char* key) {
    if (!in.contains(key)) throw InputError(pointer_append("", key), "missing operand");
    return read_scalar(in[key], pointer_append("", key));
  };
  std::optional<Rational> cap = cfg.cap;
  if (!cap && in.contains("cap")) cap = read_rational(in["cap"], "/cap");
  Outcome o;
  o.report["op"] = op;
  if (op == "add") {
    o.report["result"] = write_scalar(nov_add(scalar("a"), scalar("b")));
  } else if (op == "mul") {
    o.report["result"] = write_scalar(nov_mul(scalar("a"), scalar("b")));
  } else if (op == "invert") {
    if (!cap) throw InputError("/cap", "invert needs a cap");
    o.report["result"] = write_scalar(nov_invert(scalar("a"), *cap));
  } else if (op == "valuation") {
    auto v = valuation(scalar("a"));
    o.report["result"] = v ? write_rational(*v) : Json(nullptr);
  } else {
    throw InputError("/op", "unknown operation '" + op + "'");
  }
  return o;
}

Outcome cmd_generate(const RunConfig& cfg) {
  Outcome o;
  o.report = generate_fixture(cfg.kind, cfg.seed);
  return o;
}

Outcome dispatch(const RunConfig& cfg) {
  if (cfg.cap && *cfg.cap <= 0) throw InputError("", "cap must be positive");
  if (cfg.tolerance_profile != "default" && cfg.tolerance_profile != "strict")
    throw InputError("", "tolerance profile must be strict or default");
  if (cfg.command == "spectral") return cmd_spectral(cfg);
  if (cfg.command == "triangle") return cmd_triangle(cfg);
  if (cfg.command == "ainfty-check") return cmd_ainfty_check(cfg);
  if (cfg.command == "mc-solve") return cmd_mc_solve(cfg);
  if (cfg.command == "deform") return cmd_deform(cfg);
  if (cfg.command == "index") return cmd_index(cfg);
  if (cfg.command == "dehn") return cmd_dehn(cfg);
  if (cfg.command == "novikov-eval") return cmd_novikov_eval(cfg);
  if (cfg.command == "generate-fixture") return cmd_generate(cfg);
  throw InputError("", "unknown command '" + cfg.command + "'");
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  RunResult res;
  Json report;
  try {
    Outcome o = dispatch(cfg);
    report = std::move(o.report);
    // Fixtures are inputs for other commands, so they stay free of report fields.
    if (cfg.command != "generate-fixture") report["command"] = cfg.command;
    res.code = o.code;
  } catch (const InputError& e) {
    report = {{"command", cfg.command}, {"error", e.what()}, {"kind", "InputError"}, {"pointer", e.pointer}};
    res.code = ExitCode::InputError;
  } catch (const Error& e) {
    std::string kind = error_kind(e);
    report = {{"command", cfg.command}, {"error", e.what()}, {"kind", kind}, {"pointer", ""}};
    res.code = is_verdict(kind) ? ExitCode::Negative : ExitCode::InputError;
  } catch (const Json::exception& e) {
    report = {{"command", cfg.command}, {"error", e.what()}, {"kind", "InputError"}, {"pointer", ""}};
    res.code = ExitCode::InputError;
  }
  res.report = dump_json(report);
  if (!cfg.out.empty()) {
    std::ofstream out(cfg.out, std::ios::binary);
    out << res.report;
    if (!out) {
      res.code = ExitCode::InputError;
      res.report = dump_json({{"command", cfg.command}, {"error", "cannot write '" + cfg.out + "'"},
                              {"kind", "InputError"}, {"pointer", ""}});
    }
  }
  return res;
}

}  // namespace seqlab
