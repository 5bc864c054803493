#include "seqlab/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "seqlab/errors.hpp"

namespace seqlab {

namespace {

struct Frame_ {
  bool array = false;
  std::size_t index = 0;
  std::string key;
  std::set<std::string> keys;
};

std::string escape_token(const std::string& t) {
  std::string out;
  for (char ch : t) {
    if (ch == '~')
      out += "~0";
    else if (ch == '/')
      out += "~1";
    else
      out += ch;
  }
  return out;
}

std::string path_of(const std::vector<Frame_>& stack) {
  std::string p;
  for (const auto& f : stack) {
    if (f.array)
      p += "/" + std::to_string(f.index);
    else if (!f.key.empty() || !f.keys.empty())
      p += "/" + escape_token(f.key);
  }
  return p;
}

const Json& member(const Json& j, const std::string& ptr, const char* key) {
  if (!j.is_object()) throw InputError(ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(pointer_append(ptr, key), "missing field");
  return *it;
}

const Json& array_at(const Json& j, const std::string& ptr) {
  if (!j.is_array()) throw InputError(ptr, "expected an array");
  return j;
}

std::string read_string(const Json& j, const std::string& ptr) {
  if (!j.is_string()) throw InputError(ptr, "expected a string");
  return j.get<std::string>();
}

int read_int(const Json& j, const std::string& ptr) {
  if (!j.is_number_integer()) throw InputError(ptr, "expected an integer");
  return j.get<int>();
}

double read_double(const Json& j, const std::string& ptr) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return to_double(read_rational(j, ptr));
  throw InputError(ptr, "expected a number");
}

void check_keys(const Json& j, const std::string& ptr, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw InputError(ptr, "expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw InputError(pointer_append(ptr, k), "unknown field");
}

std::size_t generator_index(const std::vector<Generator>& gens, const Json& j, const std::string& ptr) {
  std::string name = read_string(j, ptr);
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (gens[i].name == name) return i;
  throw InputError(ptr, "unknown generator '" + name + "'");
}

Json write_entries(const std::vector<Generator>& src, const std::vector<Generator>& dst, const SparseMatrix& m) {
  Json arr = Json::array();
  for (const auto& [key, s] : m) {
    Json e;
    e["src"] = src[key.first].name;
    e["dst"] = dst[key.second].name;
    e["scalar"] = write_scalar(s);
    arr.push_back(e);
  }
  return arr;
}

void read_entries(const Json& j, const std::string& ptr, const std::vector<Generator>& src,
                  const std::vector<Generator>& dst, SparseMatrix& out) {
  const Json& arr = array_at(j, ptr);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string p = pointer_append(ptr, i);
    check_keys(arr[i], p, {"src", "dst", "scalar"});
    std::size_t s = generator_index(src, member(arr[i], p, "src"), pointer_append(p, "src"));
    std::size_t t = generator_index(dst, member(arr[i], p, "dst"), pointer_append(p, "dst"));
    if (out.count({s, t})) throw InputError(p, "duplicate entry");
    NovikovScalar v = read_scalar(member(arr[i], p, "scalar"), pointer_append(p, "scalar"));
    if (!v.is_zero()) out[{s, t}] = v;
  }
}

}  // namespace

std::string pointer_append(const std::string& ptr, const std::string& token) { return ptr + "/" + escape_token(token); }
std::string pointer_append(const std::string& ptr, std::size_t index) { return ptr + "/" + std::to_string(index); }

Json parse_json(const std::string& text) {
  std::vector<Frame_> stack;
  auto bump = [&] {
    if (!stack.empty() && stack.back().array) ++stack.back().index;
  };
  Json::parser_callback_t cb = [&](int, Json::parse_event_t ev, Json& parsed) {
    switch (ev) {
      case Json::parse_event_t::object_start:
        stack.push_back({});
        break;
      case Json::parse_event_t::array_start:
        stack.push_back({true, 0, {}, {}});
        break;
      case Json::parse_event_t::key: {
        std::string k = parsed.get<std::string>();
        auto& top = stack.back();
        top.key = k;
        if (!top.keys.insert(k).second) throw InputError(path_of(stack), "duplicate key");
        break;
      }
      case Json::parse_event_t::object_end:
      case Json::parse_event_t::array_end:
        stack.pop_back();
        bump();
        break;
      case Json::parse_event_t::value:
        bump();
        break;
    }
    return true;
  };
  try {
    return Json::parse(text, cb);
  } catch (const Json::parse_error& e) {
    throw InputError(path_of(stack), std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Rational read_rational(const Json& j, const std::string& ptr) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw InputError(ptr, "expected a rational string \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    throw InputError(ptr, std::string("bad rational: ") + e.what());
  }
}

Json write_rational(const Rational& q) { return to_string(q); }

int read_mu2(const Json& j, const std::string& ptr) {
  if (j.is_number_integer()) return 2 * j.get<int>();
  Rational m = read_rational(j, ptr);
  Rational twice = 2 * m;
  if (twice.get_den() != 1) throw InputError(ptr, "index must be an integer or a half-integer");
  return static_cast<int>(twice.get_num().get_si());
}

Json write_mu2(int e2) {
  if (e2 % 2 == 0) return e2 / 2;
  return std::to_string(e2) + "/2";
}

NovikovScalar read_scalar(const Json& j, const std::string& ptr) {
  const Json* terms = &j;
  std::string tptr = ptr;
  std::optional<Rational> cap;
  if (j.is_object()) {
    check_keys(j, ptr, {"terms", "cap"});
    tptr = pointer_append(ptr, "terms");
    terms = &member(j, ptr, "terms");
    if (j.contains("cap")) cap = read_rational(j["cap"], pointer_append(ptr, "cap"));
  }
  const Json& arr = array_at(*terms, tptr);
  std::vector<Term> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string p = pointer_append(tptr, i);
    check_keys(arr[i], p, {"c", "lambda", "mu"});
    Term t;
    t.coeff = read_rational(member(arr[i], p, "c"), pointer_append(p, "c"));
    t.energy = arr[i].contains("lambda") ? read_rational(arr[i]["lambda"], pointer_append(p, "lambda")) : Rational(0);
    t.e2 = arr[i].contains("mu") ? read_mu2(arr[i]["mu"], pointer_append(p, "mu")) : 0;
    if (t.coeff == 0) throw InputError(pointer_append(p, "c"), "zero coefficient");
    if (!out.empty()) {
      const Term& prev = out.back();
      if (prev.energy == t.energy && prev.e2 == t.e2) throw InputError(p, "duplicate (lambda, mu) key");
      if (prev.energy > t.energy || (prev.energy == t.energy && prev.e2 > t.e2))
        throw InputError(p, "terms are not sorted by (lambda, mu)");
    }
    if (cap && t.energy >= *cap) throw InputError(pointer_append(p, "lambda"), "term at or above the cap");
    out.push_back(t);
  }
  return NovikovScalar(std::move(out), cap);
}

Json write_scalar(const NovikovScalar& s) {
  Json terms = Json::array();
  for (const auto& t : s.terms()) {
    Json e;
    e["c"] = write_rational(t.coeff);
    e["lambda"] = write_rational(t.energy);
    e["mu"] = write_mu2(t.e2);
    terms.push_back(e);
  }
  if (!s.cap()) return terms;
  Json out;
  out["terms"] = terms;
  out["cap"] = write_rational(*s.cap());
  return out;
}

std::vector<Generator> read_generators(const Json& j, const std::string& ptr) {
  const Json& arr = array_at(j, ptr);
  std::vector<Generator> out;
  std::set<std::string> names;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string p = pointer_append(ptr, i);
    check_keys(arr[i], p, {"name", "degree", "level"});
    Generator g;
    g.name = read_string(member(arr[i], p, "name"), pointer_append(p, "name"));
    if (g.name.empty()) throw InputError(pointer_append(p, "name"), "empty name");
    if (!names.insert(g.name).second) throw InputError(pointer_append(p, "name"), "duplicate generator name");
    g.degree = read_int(member(arr[i], p, "degree"), pointer_append(p, "degree"));
    g.level = arr[i].contains("level") ? read_rational(arr[i]["level"], pointer_append(p, "level")) : Rational(0);
    out.push_back(g);
  }
  return out;
}

Json write_generators(const std::vector<Generator>& gens) {
  Json arr = Json::array();
  for (const auto& g : gens) {
    Json e;
    e["name"] = g.name;
    e["degree"] = g.degree;
    e["level"] = write_rational(g.level);
    arr.push_back(e);
  }
  return arr;
}

FilteredComplex read_complex(const Json& j, const std::string& ptr) {
  check_keys(j, ptr, {"generators", "differential", "cap"});
  FilteredComplex c;
  c.generators = read_generators(member(j, ptr, "generators"), pointer_append(ptr, "generators"));
  if (j.contains("cap")) {
    c.cap = read_rational(j["cap"], pointer_append(ptr, "cap"));
    if (c.cap <= 0) throw InputError(pointer_append(ptr, "cap"), "cap must be positive");
  }
  if (j.contains("differential"))
    read_entries(j["differential"], pointer_append(ptr, "differential"), c.generators, c.generators, c.differential);
  return c;
}

Json write_complex(const FilteredComplex& c) {
  Json out;
  out["generators"] = write_generators(c.generators);
  out["differential"] = write_entries(c.generators, c.generators, c.differential);
  out["cap"] = write_rational(c.cap);
  return out;
}

FilteredMap read_map(const Json& j, const std::string& ptr, const std::vector<Generator>& source,
                     const std::vector<Generator>& target, int default_degree) {
  check_keys(j, ptr, {"degree", "entries"});
  FilteredMap f;
  f.source = source;
  f.target = target;
  f.degree = j.contains("degree") ? read_int(j["degree"], pointer_append(ptr, "degree")) : default_degree;
  if (j.contains("entries")) read_entries(j["entries"], pointer_append(ptr, "entries"), source, target, f.matrix);
  return f;
}

Json write_map(const FilteredMap& f) {
  Json out;
  out["degree"] = f.degree;
  out["entries"] = write_entries(f.source, f.target, f.matrix);
  return out;
}

TriangleData read_triangle(const Json& j, const std::string& ptr) {
  check_keys(j, ptr, {"Cprime", "C", "Cdoubleprime", "b", "c", "h", "epsilon"});
  TriangleData t;
  t.cprime = read_complex(member(j, ptr, "Cprime"), pointer_append(ptr, "Cprime"));
  t.c = read_complex(member(j, ptr, "C"), pointer_append(ptr, "C"));
  t.cdoubleprime = read_complex(member(j, ptr, "Cdoubleprime"), pointer_append(ptr, "Cdoubleprime"));
  t.b = read_map(member(j, ptr, "b"), pointer_append(ptr, "b"), t.cprime.generators, t.c.generators, 0);
  t.cmap = read_map(member(j, ptr, "c"), pointer_append(ptr, "c"), t.c.generators, t.cdoubleprime.generators, 0);
  t.h = read_map(member(j, ptr, "h"), pointer_append(ptr, "h"), t.cprime.generators, t.cdoubleprime.generators, -1);
  t.eps = read_rational(member(j, ptr, "epsilon"), pointer_append(ptr, "epsilon"));
  if (t.eps <= 0) throw InputError(pointer_append(ptr, "epsilon"), "epsilon must be positive");
  return t;
}

Json write_triangle(const TriangleData& t) {
  Json out;
  out["Cprime"] = write_complex(t.cprime);
  out["C"] = write_complex(t.c);
  out["Cdoubleprime"] = write_complex(t.cdoubleprime);
  out["b"] = write_map(t.b);
  out["c"] = write_map(t.cmap);
  out["h"] = write_map(t.h);
  out["epsilon"] = write_rational(t.eps);
  return out;
}

AInftyData read_ainfty(const Json& j, const std::string& ptr) {
  check_keys(j, ptr, {"generators", "operations", "k_max", "cap"});
  AInftyData a;
  a.generators = read_generators(member(j, ptr, "generators"), pointer_append(ptr, "generators"));
  if (j.contains("k_max")) {
    a.k_max = read_int(j["k_max"], pointer_append(ptr, "k_max"));
    if (a.k_max < 0) throw InputError(pointer_append(ptr, "k_max"), "k_max must be nonnegative");
  }
  if (j.contains("cap")) {
    a.cap = read_rational(j["cap"], pointer_append(ptr, "cap"));
    if (a.cap <= 0) throw InputError(pointer_append(ptr, "cap"), "cap must be positive");
  }
  if (!j.contains("operations")) return a;
  std::string optr = pointer_append(ptr, "operations");
  const Json& arr = array_at(j["operations"], optr);
  std::set<std::pair<std::vector<std::size_t>, std::size_t>> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string p = pointer_append(optr, i);
    check_keys(arr[i], p, {"k", "inputs", "output", "scalar"});
    const Json& ins = array_at(member(arr[i], p, "inputs"), pointer_append(p, "inputs"));
    std::vector<std::size_t> inputs;
    for (std::size_t m = 0; m < ins.size(); ++m)
      inputs.push_back(generator_index(a.generators, ins[m], pointer_append(pointer_append(p, "inputs"), m)));
    if (arr[i].contains("k") && read_int(arr[i]["k"], pointer_append(p, "k")) != static_cast<int>(inputs.size()))
      throw InputError(pointer_append(p, "k"), "arity does not match the number of inputs");
    std::size_t out = generator_index(a.generators, member(arr[i], p, "output"), pointer_append(p, "output"));
    if (!seen.insert({inputs, out}).second) throw InputError(p, "duplicate operation entry");
    a.add(inputs, out, read_scalar(member(arr[i], p, "scalar"), pointer_append(p, "scalar")));
  }
  return a;
}

Json write_ainfty(const AInftyData& a) {
  Json out;
  out["generators"] = write_generators(a.generators);
  out["k_max"] = a.k_max;
  out["cap"] = write_rational(a.cap);
  Json ops = Json::array();
  for (const auto& [inputs, outs] : a.ops)
    for (const auto& [o, s] : outs) {
      Json e;
      e["k"] = inputs.size();
      Json names = Json::array();
      for (auto i : inputs) names.push_back(a.generators[i].name);
      e["inputs"] = names;
      e["output"] = a.generators[o].name;
      e["scalar"] = write_scalar(s);
      ops.push_back(e);
    }
  out["operations"] = ops;
  return out;
}

Element read_element(const Json& j, const std::string& ptr, const std::vector<Generator>& gens) {
  const Json& arr = array_at(j, ptr);
  Element x;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string p = pointer_append(ptr, i);
    check_keys(arr[i], p, {"generator", "scalar"});
    std::size_t g = generator_index(gens, member(arr[i], p, "generator"), pointer_append(p, "generator"));
    if (x.count(g)) throw InputError(p, "duplicate generator");
    NovikovScalar s = read_scalar(member(arr[i], p, "scalar"), pointer_append(p, "scalar"));
    if (!s.is_zero()) x[g] = s;
  }
  return x;
}

Json write_element(const Element& x, const std::vector<Generator>& gens) {
  Json arr = Json::array();
  for (const auto& [g, s] : x) {
    Json e;
    e["generator"] = gens[g].name;
    e["scalar"] = write_scalar(s);
    arr.push_back(e);
  }
  return arr;
}

Frame read_frame(const Json& j, const std::string& ptr) {
  const Json& rows = array_at(j, ptr);
  if (rows.empty() || rows.size() % 2 != 0) throw InputError(ptr, "frame needs 2n rows");
  const std::size_t n = rows.size() / 2;
  Frame f(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string rp = pointer_append(ptr, r);
    const Json& row = array_at(rows[r], rp);
    if (row.size() != n) throw InputError(rp, "frame rows need n entries");
    for (std::size_t c = 0; c < n; ++c)
      f(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = read_double(row[c], pointer_append(rp, c));
  }
  return f;
}

LagrangianPath read_path(const Json& j, const std::string& ptr) {
  check_keys(j, ptr, {"frames", "t", "rotation"});
  if (j.contains("rotation")) {
    std::string rp = pointer_append(ptr, "rotation");
    const Json& rot = j["rotation"];
    check_keys(rot, rp, {"start", "speed", "samples"});
    auto vec = [&](const char* key) {
      std::string p = pointer_append(rp, key);
      const Json& arr = array_at(member(rot, rp, key), p);
      std::vector<double> out;
      for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(read_double(arr[i], pointer_append(p, i)));
      return out;
    };
    std::vector<double> start = vec("start"), speed = vec("speed");
    if (start.empty() || start.size() != speed.size())
      throw InputError(pointer_append(rp, "speed"), "start and speed need the same positive length");
    int samples = read_int(member(rot, rp, "samples"), pointer_append(rp, "samples"));
    if (samples < 1) throw InputError(pointer_append(rp, "samples"), "samples must be positive");
    return rotation_path(start, speed, samples);
  }
  std::string fp = pointer_append(ptr, "frames");
  const Json& frames = array_at(member(j, ptr, "frames"), fp);
  LagrangianPath path;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    path.frames.push_back(read_frame(frames[i], pointer_append(fp, i)));
    if (path.frames.back().cols() != path.frames.front().cols())
      throw InputError(pointer_append(fp, i), "frames change dimension");
  }
  if (j.contains("t")) {
    std::string tp = pointer_append(ptr, "t");
    const Json& ts = array_at(j["t"], tp);
    if (ts.size() != frames.size()) throw InputError(tp, "t needs one entry per frame");
    for (std::size_t i = 0; i < ts.size(); ++i) path.t.push_back(read_double(ts[i], pointer_append(tp, i)));
  } else {
    for (std::size_t i = 0; i < frames.size(); ++i)
      path.t.push_back(frames.size() == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(frames.size() - 1));
  }
  return path;
}

}  // namespace seqlab
