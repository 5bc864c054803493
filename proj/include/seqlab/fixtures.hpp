#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqlab/ainfty.hpp"
#include "seqlab/filtered_complex.hpp"
#include "seqlab/json_io.hpp"
#include "seqlab/triangle.hpp"

namespace seqlab {

/// Seeded synthetic instances. Every generator is a pure function of its seed.

/// Up to `max_generators` generators in degrees 0..2, energies on the 1/2 lattice,
/// cap 4. Positive-order part starts at order 1/2 or later.
FilteredComplex random_gapped_complex(std::uint64_t seed, int max_generators = 12);

/// Every generator paired by an order-zero unit, then conjugated: acyclic residue.
FilteredComplex random_perturbed_acyclic(std::uint64_t seed, int max_generators = 12);

/// eps = 1, caps 10, degrees 0..2. `split` gives C = C' + C'' with no twisting.
TriangleData random_triangle(std::uint64_t seed, bool split = false);

/// Scaled matrix units of a small matrix algebra, m_2 only.
AInftyData associative_toy(std::uint64_t seed);

struct McToy {
  AInftyData algebra;
  Element planted;  // the solution for solvable toys
  bool obstructed = false;
  Rational level;                   // first obstructed level
  std::size_t obstruction_generator = 0;
  Rational obstruction_coeff;
};

/// Curved by deformation along a planted element; the unique solution is its negative.
McToy solvable_toy(std::uint64_t seed);
/// Same, plus a curvature term on a cycle outside the image of m_1.
McToy obstructed_toy(std::uint64_t seed);

const std::vector<std::string>& fixture_kinds();
/// Throws InputError for an unknown kind.
Json generate_fixture(const std::string& kind, std::uint64_t seed);

}  // namespace seqlab
