#include "mkf/diagram.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mkf/errors.hpp"
#include "mkf/kernels.hpp"

namespace mkf {

long long LaurentPoly::at(int e) const {
  auto it = coeff.find(e);
  return it == coeff.end() ? 0 : it->second;
}

void LaurentPoly::add(int e, long long c) {
  if (c == 0) return;
  auto it = coeff.find(e);
  if (it == coeff.end()) {
    coeff[e] = c;
  } else {
    it->second += c;
    if (it->second == 0) coeff.erase(it);
  }
}

LaurentPoly LaurentPoly::mirrored() const {
  LaurentPoly out;
  out.var = var;
  for (auto [e, c] : coeff) out.coeff[-e] = c;
  return out;
}

std::string LaurentPoly::to_string() const {
  if (coeff.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto [e, c] : coeff) {
    if (!first) os << " + ";
    os << c << "*" << var << "^" << e;
    first = false;
  }
  return os.str();
}

LaurentPoly laurent_one(std::string var) {
  LaurentPoly p;
  p.var = std::move(var);
  p.coeff[0] = 1;
  return p;
}

int KnotDiagram::writhe() const {
  int w = 0;
  for (const Crossing& x : crossings) w += x.sign;
  return w;
}

void validate_diagram(const KnotDiagram& d) {
  std::map<int, int> count;
  for (const Crossing& x : d.crossings) {
    if (x.sign != 1 && x.sign != -1) fail(Err::ConfigInvalid, "crossing sign must be +-1");
    for (int l : x.labels()) ++count[l];
  }
  for (auto [l, c] : count)
    if (c != 2)
      fail(Err::ConfigInvalid,
           "arc label " + std::to_string(l) + " occurs " + std::to_string(c) + " times");
}

namespace {

enum Role { kUnderIn = 0, kOverOut = 1, kUnderOut = 2, kOverIn = 3 };

// Position of each role in the ccw tuple, by sign.
inline int role_pos(int sign, Role r) {
  // sign +1: (under-in, over-out, under-out, over-in)
  // sign -1: (under-in, over-in, under-out, over-out)
  if (sign > 0) {
    switch (r) {
      case kUnderIn: return 0;
      case kOverOut: return 1;
      case kUnderOut: return 2;
      case kOverIn: return 3;
    }
  }
  switch (r) {
    case kUnderIn: return 0;
    case kOverIn: return 1;
    case kUnderOut: return 2;
    case kOverOut: return 3;
  }
  return 0;
}

inline int get_label(const Crossing& x, int pos) {
  switch (pos) {
    case 0: return x.a;
    case 1: return x.b;
    case 2: return x.c;
    default: return x.d;
  }
}

inline void set_label(Crossing& x, int pos, int l) {
  switch (pos) {
    case 0: x.a = l; break;
    case 1: x.b = l; break;
    case 2: x.c = l; break;
    default: x.d = l; break;
  }
}

inline int label_of(const Crossing& x, Role r) { return get_label(x, role_pos(x.sign, r)); }

}  // namespace

KnotDiagram canonical_relabel(const KnotDiagram& d) {
  if (d.n() == 0) return d;
  validate_diagram(d);
  // map: label -> (crossing, incoming role)
  std::map<int, std::pair<int, Role>> incoming;
  for (int i = 0; i < d.n(); ++i) {
    const Crossing& x = d.crossings[static_cast<std::size_t>(i)];
    incoming[label_of(x, kUnderIn)] = {i, kUnderIn};
    incoming[label_of(x, kOverIn)] = {i, kOverIn};
  }
  std::map<int, int> relabel;
  int start = label_of(d.crossings.front(), kUnderIn);
  int cur = start;
  int next_id = 0;
  do {
    if (relabel.count(cur)) fail(Err::ConfigInvalid, "diagram is not a single closed strand");
    relabel[cur] = next_id++;
    auto it = incoming.find(cur);
    if (it == incoming.end())
      fail(Err::ConfigInvalid, "arc label has no incoming end; orientation inconsistent");
    auto [ci, role] = it->second;
    const Crossing& x = d.crossings[static_cast<std::size_t>(ci)];
    cur = label_of(x, role == kUnderIn ? kUnderOut : kOverOut);
  } while (cur != start);
  if (static_cast<int>(relabel.size()) != 2 * d.n())
    fail(Err::ConfigInvalid, "diagram is not a single closed strand");
  KnotDiagram out = d;
  for (Crossing& x : out.crossings) {
    x.a = relabel.at(x.a);
    x.b = relabel.at(x.b);
    x.c = relabel.at(x.c);
    x.d = relabel.at(x.d);
  }
  return out;
}

namespace {

// Replaces label `from` with `to` in every crossing. Returns true when the
// two ends carried the same label already, i.e. the merge closed a loop.
bool merge_labels(std::vector<Crossing>& cs, int from, int to) {
  if (from == to) return true;
  for (Crossing& x : cs)
    for (int p = 0; p < 4; ++p)
      if (get_label(x, p) == from) set_label(x, p, to);
  return false;
}

bool try_r1(std::vector<Crossing>& cs, int* closed) {
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const Crossing x = cs[i];
    int lab[4] = {x.a, x.b, x.c, x.d};
    for (int p = 0; p < 4; ++p) {
      int q = (p + 1) % 4;
      if (lab[p] != lab[q]) continue;
      // kink arc at (p, q); the complementary adjacent ends splice together
      int keep = lab[(p + 2) % 4];
      int drop = lab[(p + 3) % 4];
      cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(i));
      if (merge_labels(cs, drop, keep)) ++*closed;
      return true;
    }
  }
  return false;
}

bool try_r2(std::vector<Crossing>& cs, int* closed) {
  const int n = static_cast<int>(cs.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Crossing& x = cs[static_cast<std::size_t>(i)];
      const Crossing& y = cs[static_cast<std::size_t>(j)];
      int lx[4] = {x.a, x.b, x.c, x.d};
      int ly[4] = {y.a, y.b, y.c, y.d};
      for (int px = 0; px < 4; ++px) {
        int qx = (px + 1) % 4;
        for (int py = 0; py < 4; ++py) {
          int qy = (py + 1) % 4;
          // bigon faces: arc alpha at (px in x) == (qy in y), arc beta at
          // (qx in x) == (py in y), so the two arcs are ccw-consecutive in
          // x and cw-consecutive in y (a bigon seen from both sides)
          int alpha = lx[px], beta = lx[qx];
          if (alpha == beta) continue;
          if (ly[qy] != alpha || ly[py] != beta) continue;
          // reducible iff one strand is over on both ends of the bigon:
          // under ends sit at tuple positions 0 and 2
          bool alpha_under_x = (px % 2 == 0);
          bool alpha_under_y = (qy % 2 == 0);
          bool beta_under_x = (qx % 2 == 0);
          bool beta_under_y = (py % 2 == 0);
          if (alpha_under_x != alpha_under_y || beta_under_x != beta_under_y) continue;
          if (alpha_under_x == beta_under_x) continue;  // same strand type twice
          // outer continuations: opposite ends of the bigon positions
          int ax = lx[(px + 2) % 4];
          int ay = ly[(qy + 2) % 4];
          int bx = lx[(qx + 2) % 4];
          int by = ly[(py + 2) % 4];
          cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(j));
          cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(i));
          // strand through alpha fuses ax with ay, strand through beta
          // fuses bx with by; a merge of an arc with itself closes a loop
          if (merge_labels(cs, ay, ax)) ++*closed;
          if (bx == ay) bx = ax;
          if (by == ay) by = ax;
          if (merge_labels(cs, by, bx)) ++*closed;
          return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

KnotDiagram simplify_diagram(KnotDiagram d) {
  int closed = 0;
  bool changed = true;
  while (changed) {
    changed = try_r1(d.crossings, &closed);
    if (!changed) changed = try_r2(d.crossings, &closed);
  }
  if (d.n() == 0) {
    if (closed > 0) d.extra_loops += closed - 1;  // last closure is the curve itself
  } else {
    d.extra_loops += closed;
  }
  return d;
}

LaurentPoly kauffman_bracket(const KnotDiagram& d, int crossing_cap) {
  if (d.n() > crossing_cap)
    fail(Err::TooManyCrossings,
         std::to_string(d.n()) + " crossings exceed the cap " + std::to_string(crossing_cap));
  LaurentPoly out;
  out.var = "A";
  if (d.n() == 0) {
    // delta^extra_loops with delta = -A^2 - A^-2
    LaurentPoly acc = laurent_one("A");
    for (int i = 0; i < d.extra_loops; ++i) {
      LaurentPoly next;
      next.var = "A";
      for (auto [e, c] : acc.coeff) {
        next.add(e + 2, -c);
        next.add(e - 2, -c);
      }
      acc = std::move(next);
    }
    return acc;
  }
  validate_diagram(d);
  // compact arc labels
  std::map<int, int> compact;
  for (const Crossing& x : d.crossings)
    for (int l : x.labels())
      if (!compact.count(l)) compact[l] = static_cast<int>(compact.size());
  kernels::BracketInput in;
  in.n_arcs = static_cast<int>(compact.size());
  in.extra_loops = d.extra_loops;
  for (const Crossing& x : d.crossings)
    in.crossings.push_back({compact.at(x.a), compact.at(x.b), compact.at(x.c), compact.at(x.d)});
  std::vector<long long> dense = kernels::bracket_state_sum(in);
  int offset = kernels::bracket_offset(d.n());
  for (int i = 0; i < static_cast<int>(dense.size()); ++i)
    out.add(i - offset, dense[static_cast<std::size_t>(i)]);
  return out;
}

LaurentPoly jones_polynomial(const KnotDiagram& d, int crossing_cap) {
  LaurentPoly br = kauffman_bracket(d, crossing_cap);
  int w = d.writhe();
  // (-A)^(-3w) * <d>
  long long sgn = (w % 2 == 0) ? 1 : -1;
  LaurentPoly shifted;
  shifted.var = "A";
  for (auto [e, c] : br.coeff) shifted.add(e - 3 * w, sgn * c);
  LaurentPoly jones;
  jones.var = "t";
  for (auto [e, c] : shifted.coeff) {
    if (e % 4 != 0)
      fail(Err::ConfigInvalid, "bracket exponent not divisible by 4; not a knot diagram");
    jones.add(-e / 4, c);
  }
  return jones;
}

DistinctVerdict certify_distinct_jones(const LaurentPoly& j1, const LaurentPoly& j2) {
  if (j1 == j2 || j1 == j2.mirrored()) return DistinctVerdict::Inconclusive;
  return DistinctVerdict::Distinct;
}

DistinctVerdict certify_distinct(const KnotDiagram& d1, const KnotDiagram& d2) {
  return certify_distinct_jones(jones_polynomial(d1), jones_polynomial(d2));
}

void write_pd(const KnotDiagram& d, std::ostream& os) {
  KnotDiagram c = canonical_relabel(d);
  os << "PD n=" << c.n() << "\n";
  for (const Crossing& x : c.crossings)
    os << x.a + 1 << ' ' << x.b + 1 << ' ' << x.c + 1 << ' ' << x.d + 1 << "\n";
}

void write_pd(const KnotDiagram& d, const std::string& path) {
  std::ofstream f(path);
  if (!f) fail(Err::IoError, "cannot open " + path);
  write_pd(d, f);
}

KnotDiagram read_pd(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("PD n=", 0) != 0)
    fail(Err::IoError, "missing PD header");
  int n = std::stoi(header.substr(5));
  KnotDiagram d;
  int two_n = 2 * n;
  auto succ = [two_n](int l) { return l % two_n + 1; };  // 1-based successor
  for (int i = 0; i < n; ++i) {
    Crossing x;
    if (!(is >> x.a >> x.b >> x.c >> x.d)) fail(Err::IoError, "truncated PD file");
    if (x.c != succ(x.a))
      fail(Err::IoError, "PD labels must be consecutive along the strand");
    if (x.b == succ(x.d)) {
      x.sign = 1;  // over strand flows d -> b
    } else if (x.d == succ(x.b)) {
      x.sign = -1;  // over strand flows b -> d
    } else {
      fail(Err::IoError, "over strand labels not consecutive");
    }
    x.a -= 1;
    x.b -= 1;
    x.c -= 1;
    x.d -= 1;
    d.crossings.push_back(x);
  }
  validate_diagram(d);
  return d;
}

KnotDiagram read_pd_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Err::MissingArtifact, "cannot open " + path);
  return read_pd(f);
}

}  // namespace mkf
