#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mkf/vec4.hpp"

namespace mkf {

/// Integer-coefficient Laurent polynomial; zero coefficients are never
/// stored. `var` is "A" for bracket polynomials and "t" for Jones.
struct LaurentPoly {
  std::map<int, long long> coeff;
  std::string var = "t";

  bool is_zero() const { return coeff.empty(); }
  long long at(int e) const;
  void add(int e, long long c);
  LaurentPoly mirrored() const;  // substitutes var -> var^-1
  std::string to_string() const;

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.var == b.var && a.coeff == b.coeff;
  }
};

LaurentPoly laurent_one(std::string var = "t");

/// A crossing of a planar diagram: the four incident arc labels in planar
/// counterclockwise order starting from the incoming under-strand end, plus
/// the crossing sign. For sign +1 the tuple reads (under-in, over-out,
/// under-out, over-in); for sign -1 it reads (under-in, over-in, under-out,
/// over-out).
struct Crossing {
  int a = 0, b = 0, c = 0, d = 0;
  int sign = 0;

  std::array<int, 4> labels() const { return {a, b, c, d}; }
};

/// Planar diagram of a single closed curve. extra_loops counts crossing-free
/// circles carried next to the diagram (they multiply the bracket by
/// -A^2 - A^-2 each).
struct KnotDiagram {
  std::vector<Crossing> crossings;
  int extra_loops = 0;

  int n() const { return static_cast<int>(crossings.size()); }
  int writhe() const;
};

/// Each arc label must occur exactly twice across all crossing tuples.
void validate_diagram(const KnotDiagram& d);

/// Relabels arcs consecutively along the knot traversal (0-based), so the
/// exported PD code carries the orientation implicitly.
KnotDiagram canonical_relabel(const KnotDiagram& d);

/// Removes Reidemeister I kinks and Reidemeister II clasps until no
/// reduction applies. Never increases the crossing count; the bracket and
/// Jones invariants are preserved.
KnotDiagram simplify_diagram(KnotDiagram d);

/// Kauffman bracket by state sum over all 2^n smoothings, exact integer
/// arithmetic. Throws TooManyCrossings above the cap.
LaurentPoly kauffman_bracket(const KnotDiagram& d, int crossing_cap = 24);

/// (-A)^(-3 w) <d> with A = t^(-1/4); quarter powers always clear for a
/// knot diagram, leaving an integer Laurent polynomial in t.
LaurentPoly jones_polynomial(const KnotDiagram& d, int crossing_cap = 24);

enum class DistinctVerdict { Distinct, Inconclusive };

/// DISTINCT when the Jones polynomials differ as unoriented invariants
/// (i.e. differ under both mirror conventions); such a pair of links can
/// not be isotopic. Equal invariants prove nothing, hence INCONCLUSIVE.
DistinctVerdict certify_distinct(const KnotDiagram& d1, const KnotDiagram& d2);
DistinctVerdict certify_distinct_jones(const LaurentPoly& j1, const LaurentPoly& j2);

// ---- PD files ---------------------------------------------------------------
// Header line "PD n=<crossings>" followed by one whitespace-separated
// 4-tuple of 1-based arc labels per crossing.

void write_pd(const KnotDiagram& d, std::ostream& os);
void write_pd(const KnotDiagram& d, const std::string& path);
KnotDiagram read_pd(std::istream& is);
KnotDiagram read_pd_file(const std::string& path);

}  // namespace mkf
