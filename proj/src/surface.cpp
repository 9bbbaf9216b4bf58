#include "mkf/surface.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mkf/errors.hpp"

namespace mkf {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double SampledSurface::link_pitch() const {
  double pitch = 0.0;
  for (int k = 0; k < n_scales(); ++k) {
    double inv_t = 1.0 / ladder[static_cast<std::size_t>(k)];
    int last = theta_wraps ? n_theta : n_theta - 1;
    for (int j = 0; j < last; ++j) {
      int jn = (j + 1) % n_theta;
      double gap = distance(at(j, k), at(jn, k)) * inv_t;
      if (gap > pitch) pitch = gap;
    }
  }
  return pitch;
}

void SampledSurface::validate() const {
  if (n_theta <= 0 || ladder.empty())
    fail(Err::ConfigInvalid, "surface '" + name + "' has an empty grid");
  if (pts.size() != static_cast<std::size_t>(size()))
    fail(Err::ConfigInvalid, "surface '" + name + "' point count mismatch");
  for (std::size_t k = 1; k < ladder.size(); ++k)
    if (!(ladder[k] < ladder[k - 1]) || !(ladder[k] > 0.0))
      fail(Err::ConfigInvalid, "ladder must be strictly decreasing and positive");
  for (int k = 0; k < n_scales(); ++k) {
    double t = ladder[static_cast<std::size_t>(k)];
    for (int j = 0; j < n_theta; ++j) {
      double n = norm(at(j, k));
      if (std::fabs(n - t) > 1e-6 * t)
        fail(Err::ConfigInvalid, "surface '" + name + "' sample off its scale sphere");
    }
  }
}

double slice_polyline_length(std::span<const Vec4> slice, bool closed) {
  double len = 0.0;
  std::size_t n = slice.size();
  if (n < 2) return 0.0;
  std::size_t last = closed ? n : n - 1;
  for (std::size_t j = 0; j < last; ++j) len += distance(slice[j], slice[(j + 1) % n]);
  return len;
}

void write_surface_csv(const SampledSurface& s, std::ostream& os) {
  os << "idx,theta_idx,t_idx,x0,x1,x2,x3,tags\n";
  int idx = 0;
  for (int k = 0; k < s.n_scales(); ++k) {
    for (int j = 0; j < s.n_theta; ++j, ++idx) {
      const Vec4& p = s.at(j, k);
      os << idx << ',' << j << ',' << k << ',' << fmt_double(p[0]) << ','
         << fmt_double(p[1]) << ',' << fmt_double(p[2]) << ',' << fmt_double(p[3]) << ',';
      if (!s.theta_tags.empty()) os << s.theta_tags[static_cast<std::size_t>(j)];
      os << '\n';
    }
  }
}

void write_surface_csv(const SampledSurface& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) fail(Err::IoError, "cannot open " + path);
  write_surface_csv(s, f);
}

SampledSurface read_surface_csv(const std::string& path, std::string name,
                                std::vector<double> ladder, bool theta_wraps) {
  std::ifstream f(path);
  if (!f) fail(Err::MissingArtifact, "cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) fail(Err::IoError, "empty csv " + path);

  SampledSurface s;
  s.name = std::move(name);
  s.ladder = std::move(ladder);
  s.theta_wraps = theta_wraps;

  std::vector<std::string> tags;
  int max_theta = -1, max_scale = -1;
  struct Row {
    int j, k;
    Vec4 p;
  };
  std::vector<Row> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    Row r;
    std::getline(ss, field, ',');  // idx (ignored)
    std::getline(ss, field, ',');
    r.j = std::stoi(field);
    std::getline(ss, field, ',');
    r.k = std::stoi(field);
    for (int c = 0; c < 4; ++c) {
      std::getline(ss, field, ',');
      r.p[static_cast<std::size_t>(c)] = std::stod(field);
    }
    std::string tag;
    std::getline(ss, tag);
    rows.push_back(r);
    if (r.j > max_theta) {
      max_theta = r.j;
      tags.resize(static_cast<std::size_t>(max_theta) + 1);
    }
    if (r.k == 0) tags[static_cast<std::size_t>(r.j)] = tag;
    if (r.k > max_scale) max_scale = r.k;
  }
  if (rows.empty()) fail(Err::IoError, "no samples in " + path);
  s.n_theta = max_theta + 1;
  if (max_scale + 1 != s.n_scales())
    fail(Err::IoError, path + ": scale count does not match the declared ladder");
  s.pts.assign(static_cast<std::size_t>(s.size()), Vec4{});
  for (const Row& r : rows) s.at(r.j, r.k) = r.p;
  s.theta_tags = std::move(tags);
  return s;
}

namespace {

struct Mesh3 {
  std::vector<std::array<double, 3>> verts;
  std::vector<std::array<int, 4>> quads;
};

Mesh3 project_mesh(const SampledSurface& s, int drop_coord) {
  if (drop_coord < 0 || drop_coord > 3) fail(Err::ConfigInvalid, "drop coordinate must be 0..3");
  Mesh3 m;
  m.verts.reserve(static_cast<std::size_t>(s.size()));
  for (int k = 0; k < s.n_scales(); ++k)
    for (int j = 0; j < s.n_theta; ++j) {
      const Vec4& p = s.at(j, k);
      std::array<double, 3> v{};
      int c = 0;
      for (int i = 0; i < 4; ++i)
        if (i != drop_coord) v[static_cast<std::size_t>(c++)] = p[static_cast<std::size_t>(i)];
      m.verts.push_back(v);
    }
  int cols = s.theta_wraps ? s.n_theta : s.n_theta - 1;
  for (int k = 0; k + 1 < s.n_scales(); ++k)
    for (int j = 0; j < cols; ++j) {
      int jn = (j + 1) % s.n_theta;
      m.quads.push_back({s.idx(j, k), s.idx(jn, k), s.idx(jn, k + 1), s.idx(j, k + 1)});
    }
  return m;
}

}  // namespace

void write_obj(const SampledSurface& s, std::ostream& os, int drop_coord) {
  Mesh3 m = project_mesh(s, drop_coord);
  os << "# " << s.name << "\n";
  for (const auto& v : m.verts)
    os << "v " << fmt_double(v[0]) << ' ' << fmt_double(v[1]) << ' ' << fmt_double(v[2])
       << '\n';
  for (const auto& q : m.quads)
    os << "f " << q[0] + 1 << ' ' << q[1] + 1 << ' ' << q[2] + 1 << ' ' << q[3] + 1 << '\n';
}

void write_ply(const SampledSurface& s, std::ostream& os, int drop_coord) {
  Mesh3 m = project_mesh(s, drop_coord);
  os << "ply\nformat ascii 1.0\n";
  os << "element vertex " << m.verts.size() << "\n";
  os << "property double x\nproperty double y\nproperty double z\n";
  os << "element face " << m.quads.size() << "\n";
  os << "property list uchar int vertex_indices\nend_header\n";
  for (const auto& v : m.verts)
    os << fmt_double(v[0]) << ' ' << fmt_double(v[1]) << ' ' << fmt_double(v[2]) << '\n';
  for (const auto& q : m.quads)
    os << "4 " << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << '\n';
}

void write_obj(const SampledSurface& s, const std::string& path, int drop_coord) {
  std::ofstream f(path);
  if (!f) fail(Err::IoError, "cannot open " + path);
  write_obj(s, f, drop_coord);
}

void write_ply(const SampledSurface& s, const std::string& path, int drop_coord) {
  std::ofstream f(path);
  if (!f) fail(Err::IoError, "cannot open " + path);
  write_ply(s, f, drop_coord);
}

}  // namespace mkf
