// Acceptance run: one PASS/FAIL line per criterion with wall time.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "seqlab/dehn.hpp"
#include "seqlab/fixtures.hpp"
#include "seqlab/index_lab.hpp"
#include "seqlab/json_io.hpp"
#include "seqlab/spectral.hpp"
#include "seqlab/triangle.hpp"

using namespace seqlab;
namespace fs = std::filesystem;

namespace {

const double kPi = 3.14159265358979323846;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

NovikovScalar random_scalar(std::mt19937_64& rng, bool nonneg) {
  std::uniform_int_distribution<int> nterms(0, 4), coeff(-5, 5), num(nonneg ? 0 : -4, 12), mu(-2, 2);
  std::vector<Term> t;
  int k = nterms(rng);
  for (int i = 0; i < k; ++i) t.push_back({Rational(coeff(rng)), Rational(Rational(num(rng)) / 4), 2 * mu(rng)});
  return NovikovScalar(t);
}

bool agree_below(const Element& x, const Element& y, const Rational& cap) {
  std::set<std::size_t> keys;
  for (const auto& [g, s] : x) keys.insert(g);
  for (const auto& [g, s] : y) keys.insert(g);
  for (auto g : keys) {
    NovikovScalar a = x.count(g) ? x.at(g) : NovikovScalar{};
    NovikovScalar b = y.count(g) ? y.at(g) : NovikovScalar{};
    if (!a.agrees_below(b, cap)) return false;
  }
  return true;
}

// ---- 1: Novikov field

void novikov_suite() {
  std::mt19937_64 rng(1001);
  for (int i = 0; i < 1000; ++i) {
    auto a = random_scalar(rng, false), b = random_scalar(rng, false), c = random_scalar(rng, false);
    auto one = NovikovScalar::constant(1);
    expect((a * b) * c == a * (b * c), "associativity");
    expect(a * (b + c) == a * b + a * c, "distributivity");
    expect(a + b == b + a && a * b == b * a, "commutativity");
    expect((a + b) + c == a + (b + c), "additive associativity");
    expect(a * one == a && (a + (-a)).is_zero(), "units");
    Rational cap = Rational(std::uniform_int_distribution<int>(1, 12)(rng)) / 4;
    auto ap = random_scalar(rng, true).truncated(cap), bp = random_scalar(rng, true).truncated(cap),
         cp = random_scalar(rng, true).truncated(cap);
    expect((ap * bp) * cp == ap * (bp * cp), "capped associativity");
    expect(ap * (bp + cp) == ap * bp + ap * cp, "capped distributivity");
  }
  std::uniform_int_distribution<int> lead(-4, 4), c0(1, 6), capn(1, 16);
  for (int i = 0; i < 100; ++i) {
    auto tail = random_scalar(rng, true);
    Rational shift = Rational(lead(rng)) / 2;
    // Leading monomial with a single e-power, strictly above-leading tail.
    auto a = NovikovScalar::monomial(c0(rng) * (i % 2 ? 1 : -1), 0, 2 * (i % 3 - 1)) +
             tail.energy_window(Rational(1, 4), std::nullopt);
    a = a.shifted(shift);
    Rational cap = Rational(capn(rng)) / 4;
    auto inv = nov_invert(a, cap);
    expect((a * inv).agrees_below(NovikovScalar::constant(1), cap), "inversion round trip");
  }
  for (int i = 0; i < 1000; ++i) {
    auto a = random_scalar(rng, false), b = random_scalar(rng, false);
    auto va = valuation(a), vb = valuation(b), vs = valuation(a + b);
    if (va && vb) {
      if (vs) expect(*vs >= Rational(std::min(*va, *vb)), "ultrametric");
      if (*va != *vb) expect(vs && *vs == Rational(std::min(*va, *vb)), "strict ultrametric");
    }
    // Multiplicativity on e-free elements, where the field has no zero divisors.
    std::vector<Term> ta, tb;
    for (auto t : a.terms()) ta.push_back({t.coeff, t.energy, 0});
    for (auto t : b.terms()) tb.push_back({t.coeff, t.energy, 0});
    NovikovScalar fa(ta), fb(tb);
    auto fva = valuation(fa), fvb = valuation(fb), fvab = valuation(fa * fb);
    if (fva && fvb)
      expect(fvab && *fvab == *fva + *fvb, "multiplicative valuation");
    else
      expect(!fvab, "zero product");
  }
}

// ---- 2: E2 identification

std::size_t layer_count(const SpectralResult& s, const Rational& cap, int q) {
  std::size_t n = 0;
  for (Rational e = 0; e < cap; e += s.step)
    if (floor_div(e / s.scheme.lambda0) == q) ++n;
  return n;
}

void e2_suite() {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto c = random_gapped_complex(seed);
    expect(c.size() <= 12, "fixture size");
    auto s = compute_pages(c, default_scheme(c));
    expect(s.pages.size() >= 2, "E2 computed");
    auto h = oracle::residue_homology(c);
    for (int p : c.degrees())
      for (int q = 0; q < s.layers; ++q)
        expect(s.pages[1].rank(p, q) == h[p] * layer_count(s, c.cap, q), "E2 rank, seed " + std::to_string(seed));
  }
}

// ---- 3: vanishing criterion

void vanishing_suite() {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto c = random_perturbed_acyclic(seed);
    expect(vanishing_criterion(c), "criterion, seed " + std::to_string(seed));
    auto v = oracle::truncated_space(c, lattice_step(c, {c.cap}));
    for (int p : c.degrees())
      expect(oracle::filtered_homology_dim(v, p, 0) == 0, "elimination, seed " + std::to_string(seed));
  }
}

// ---- 4: exact triangle

void triangle_suite() {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto t = random_triangle(seed);
    expect(check_triangle_hypotheses(t).ok(), "hypotheses, seed " + std::to_string(seed));
    auto les = extract_les(t);
    expect(les.exact(), "exactness");
    std::set<int> degrees;
    for (const auto& n : les.nodes) {
      expect(n.rank_in + n.rank_out == n.dim, "im = ker");
      degrees.insert(n.degree);
    }
    expect(degrees.size() >= 3, "three degrees");
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto les = extract_les(random_triangle(seed, true));
    for (const auto& m : les.maps)
      if (m.name == "connecting") expect(m.rank == 0, "split connecting map");
  }
}

// ---- 5: stabilization

FilteredComplex pair_example() {
  FilteredComplex c;
  c.generators = {{"x", 0, 1}, {"y", 1, 0}};
  c.add_entry(0, 1, NovikovScalar::monomial(1, 1));
  c.cap = 2;
  return c;
}

void stabilization_suite() {
  std::vector<FilteredComplex> cases = {pair_example()};
  for (std::uint64_t seed = 0; seed < 50; ++seed) cases.push_back(random_gapped_complex(seed));
  for (const auto& c : cases) {
    auto s = compute_pages(c, default_scheme(c));
    int r0 = stabilization(c, s);
    expect(Rational(r0) <= c.cap / s.scheme.lambda0, "r0 bound");
    auto v = oracle::truncated_space(c, s.step);
    for (int p : c.degrees())
      for (int q = 0; q < s.layers; ++q) {
        Rational lo = s.scheme.lambda0 * q, hi = s.scheme.lambda0 * (q + 1);
        expect(s.limit.rank(p, q) ==
                   oracle::filtered_homology_dim(v, p, lo) - oracle::filtered_homology_dim(v, p, hi),
               "limit ranks");
      }
  }
}

// ---- 6: A-infinity

void ainfty_suite() {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto a = associative_toy(seed);
    expect(ainfty_relation_check(a).ok() && ainfty_relation_check_bar(a).ok(), "associative relation");
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto t = solvable_toy(seed);
    auto s = mc_solve(t.algebra, t.algebra.cap);
    expect(!s.obstructed && agree_below(s.solution.b, t.planted, t.algebra.cap), "planted solution");
    auto d = deform(t.algebra, s.solution);
    expect(!d.ops.count({}) || d.ops.at({}).empty(), "m0 vanishes");
    expect(ainfty_relation_check(d).ok(), "deformed relation");
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto t = obstructed_toy(seed);
    auto s = mc_solve(t.algebra, t.algebra.cap);
    expect(s.obstructed && s.level == t.level, "obstruction level");
    for (std::size_t i = 0; i < s.basis.size(); ++i)
      expect(s.obstruction_class[i] == (s.basis[i] == t.obstruction_generator ? t.obstruction_coeff : Rational(0)),
             "obstruction class");
  }
}

// ---- 7: Dehn model

void dehn_suite() {
  for (int n : {1, 2})
    for (double lambda : {1.0, 0.5}) {
      auto rep = dehn_report(n, lambda, 0.1, 200, 7);
      expect(rep.sigma_identity <= 1e-12 && rep.sigma_antipode <= 1e-12, "sigma endpoints");
      expect(rep.symplecticity <= 1e-6, "symplecticity");
      expect(rep.exactness <= 1e-4, "exactness");
      expect(rep.phi_equivariance <= 1e-10 && rep.phi_pullback <= 1e-4, "Lefschetz map");
      expect(rep.within_tolerance, "report verdict");
    }
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> lam(0.05, 1.0), unit(-0.5, 0.5);
  double worst = 0;
  for (int i = 0; i < 300; ++i) {
    double l = lam(rng);
    worst = std::max(worst, functional_equation_residual(default_profile(l), {unit(rng) * l}));
  }
  expect(worst <= 1e-12, "functional equation");
}

// ---- 8: index suite

void index_suite() {
  std::mt19937_64 rng(808);
  std::uniform_int_distribution<int> wind(-3, 3);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 3;
    std::vector<double> start(n), s1(n), s2(n), mid(n);
    for (std::size_t k = 0; k < n; ++k) {
      start[k] = ang(rng);
      s1[k] = kPi * wind(rng);
      s2[k] = kPi * wind(rng);
      mid[k] = start[k] + s1[k];
    }
    auto l1 = rotation_path(start, s1, 96), l2 = rotation_path(mid, s2, 96);
    expect(loop_maslov(concatenate(l1, l2)) == loop_maslov(l1) + loop_maslov(l2), "additivity");
  }
  std::uniform_real_distribution<double> a(-2.0, 2.0), sp(-7.0, 7.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 2;
    std::vector<double> start, speed;
    for (std::size_t k = 0; k < n; ++k) {
      start.push_back(a(rng));
      speed.push_back(sp(rng));
    }
    auto path = rotation_path(start, speed, 200);
    Frame ref = rotation_frame(std::vector<double>(n, 0.0));
    expect(rs_index_doubled(path.reversed(), ref) == -rs_index_doubled(path, ref), "antisymmetry");
  }
  for (int n = 2; n <= 6; ++n) {
    IndexFormulaInput in;
    in.n = n;
    in.c1 = 0;
    in.dim_r_sim = n;
    in.morse = n - 1;
    auto v = sft_dimension(in, DimensionMode::MorseBott);
    expect(v.dimension == -(n - 1) + (n - 3) && v.dimension == -2, "sft arithmetic");
  }
  std::uniform_int_distribution<int> nn(1, 12), mu(-20, 20), kk(0, 10);
  for (int i = 0; i < 1000; ++i) {
    int n = nn(rng), m = mu(rng), k = kk(rng);
    // Fredholm index n + mu plus k + 1 boundary points minus the 3-dimensional automorphisms.
    int expected = (n + m) + (k + 1) - 3;
    expect(disc_moduli_dimension(n, m, k) == expected, "disc dimension");
  }
}

// ---- 9: determinism

int tool(const std::string& args) {
  std::string cmd = std::string(SEQLAB_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void run_suite(const fs::path& dir) {
  fs::create_directories(dir);
  const std::string data = SEQLAB_DATA_DIR;
  auto out = [&](const std::string& name) { return " --out " + (dir / name).string(); };
  const std::pair<const char*, const char*> fixtures[] = {
      {"gapped-complex", "spectral"}, {"perturbed-acyclic", "spectral"}, {"triangle", "triangle"},
      {"ainfty-assoc", "ainfty-check"}, {"ainfty-solvable", "mc-solve"}, {"ainfty-obstructed", "mc-solve"}};
  for (int seed = 0; seed < 3; ++seed)
    for (const auto& [kind, cmd] : fixtures) {
      std::string base = std::string(kind) + "_" + std::to_string(seed);
      tool(std::string("generate-fixture --kind ") + kind + " --seed " + std::to_string(seed) + out(base + ".json"));
      tool(std::string(cmd) + " " + (dir / (base + ".json")).string() + out(base + "_report.json"));
    }
  tool("deform " + (dir / "ainfty-solvable_0.json").string() + out("deform_report.json"));
  tool("spectral " + data + "/spectral_example.json" + out("spectral_example_report.json"));
  tool("triangle " + data + "/triangle_split.json" + out("triangle_split_report.json"));
  for (const char* mode : {"loop", "rs", "mm", "dim"})
    tool(std::string("index --mode ") + mode + " " + data + "/index_" + mode + ".json" + out(std::string("index_") + mode + ".json"));
  tool("novikov-eval " + data + "/novikov_invert.json" + out("novikov.json"));
  for (int n : {1, 2})
    for (const char* lambda : {"1", "0.5"})
      tool("dehn --n " + std::to_string(n) + " --lambda " + lambda + " --samples 200 --seed 7" +
           out("dehn_" + std::to_string(n) + "_" + lambda + ".json"));
}

void determinism_suite() {
  auto root = fs::temp_directory_path() / ("seqlab_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  run_suite(root / "first");
  run_suite(root / "second");
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(root / "first")) {
    auto other = root / "second" / e.path().filename();
    expect(fs::exists(other), "missing " + other.string());
    auto bytes = slurp(e.path());
    expect(!bytes.empty() && bytes == slurp(other), "differs: " + e.path().filename().string());
    ++files;
  }
  std::size_t second = std::distance(fs::directory_iterator(root / "second"), fs::directory_iterator{});
  expect(files == second && files >= 45, "report count");
  fs::remove_all(root);
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // <= 0: no runtime bound
  std::function<void()> body;
};

}  // namespace

int main() {
  const Criterion all[] = {
      {1, "Novikov field arithmetic", 5, novikov_suite},
      {2, "E2 equals residue homology", 30, e2_suite},
      {3, "vanishing criterion", 60, vanishing_suite},
      {4, "exact triangle", 60, triangle_suite},
      {5, "stabilization and limit ranks", 0, stabilization_suite},
      {6, "A-infinity relations and Maurer-Cartan", 60, ainfty_suite},
      {7, "Dehn twist model", 30, dehn_suite},
      {8, "index suite", 10, index_suite},
      {9, "determinism of reports", 0, determinism_suite},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    std::string why;
    try {
      c.body();
    } catch (const std::exception& e) {
      why = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (why.empty() && c.budget_s > 0 && secs >= c.budget_s) why = "over the time budget";
    bool pass = why.empty();
    failed += !pass;
    std::printf("criterion %d %s: %s (%.3f s%s)%s%s\n", c.id, c.name, pass ? "PASS" : "FAIL", secs,
                c.budget_s > 0 ? (", budget " + std::to_string(static_cast<int>(c.budget_s)) + " s").c_str() : "",
                pass ? "" : " - ", why.c_str());
  }
  return failed == 0 ? 0 : 1;
}
