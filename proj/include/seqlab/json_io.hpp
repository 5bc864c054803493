#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "seqlab/ainfty.hpp"
#include "seqlab/filtered_complex.hpp"
#include "seqlab/index_lab.hpp"
#include "seqlab/novikov.hpp"
#include "seqlab/triangle.hpp"

namespace seqlab {

using Json = nlohmann::json;

/// Parses text, rejecting duplicate object keys. Errors are InputError with the
/// JSON pointer of the offending (or last reached) location.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
/// Two-space indented dump with a trailing newline. Keys come out sorted.
std::string dump_json(const Json& j);

std::string pointer_append(const std::string& ptr, const std::string& token);
std::string pointer_append(const std::string& ptr, std::size_t index);

/// Rationals are "p/q" strings; plain JSON integers are accepted on input.
Rational read_rational(const Json& j, const std::string& ptr);
Json write_rational(const Rational& q);

/// Doubled e-exponent from an integer or a "k/2" string.
int read_mu2(const Json& j, const std::string& ptr);
Json write_mu2(int e2);

/// Either a term list [{"c","lambda","mu"}] or {"terms": [...], "cap": "p/q"}.
/// Terms must be strictly increasing in (lambda, mu) with nonzero coefficients.
NovikovScalar read_scalar(const Json& j, const std::string& ptr);
Json write_scalar(const NovikovScalar& s);

std::vector<Generator> read_generators(const Json& j, const std::string& ptr);
Json write_generators(const std::vector<Generator>& g);

/// {"generators":[{"name","degree","level"}], "differential":[{"src","dst","scalar"}], "cap"}
FilteredComplex read_complex(const Json& j, const std::string& ptr);
Json write_complex(const FilteredComplex& c);

/// {"degree", "entries":[{"src","dst","scalar"}]} between given generator lists.
FilteredMap read_map(const Json& j, const std::string& ptr, const std::vector<Generator>& source,
                     const std::vector<Generator>& target, int default_degree);
Json write_map(const FilteredMap& f);

/// {"Cprime","C","Cdoubleprime","b","c","h","epsilon"}
TriangleData read_triangle(const Json& j, const std::string& ptr);
Json write_triangle(const TriangleData& t);

/// {"generators", "operations":[{"k","inputs","output","scalar"}], "k_max", "cap"}
AInftyData read_ainfty(const Json& j, const std::string& ptr);
Json write_ainfty(const AInftyData& a);

/// [{"generator", "scalar"}]
Element read_element(const Json& j, const std::string& ptr, const std::vector<Generator>& gens);
Json write_element(const Element& x, const std::vector<Generator>& gens);

/// 2n rows of n numbers.
Frame read_frame(const Json& j, const std::string& ptr);
/// {"frames":[...], "t":[...]} or {"rotation":{"start","speed","samples"}}.
LagrangianPath read_path(const Json& j, const std::string& ptr);

}  // namespace seqlab
