#include "flexlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace flexlab {

namespace {

using Eigen::Matrix3d;
using Eigen::Vector3d;

void require_euclidean3(const Polyhedron& p, const char* what) {
  if (p.space.kind != Space::euclidean || p.space.n != 3)
    throw std::invalid_argument(std::string(what) + " needs a polyhedron in E^3");
  if (p.complex->dim_top != 2)
    throw std::invalid_argument(std::string(what) + " needs a 2-dimensional complex");
}

double point_triangle_distance(const Vector3d& x, const Vector3d& a, const Vector3d& b,
                               const Vector3d& c) {
  // Ericson-style closest point on triangle
  Vector3d ab = b - a, ac = c - a, ax = x - a;
  double d1 = ab.dot(ax), d2 = ac.dot(ax);
  if (d1 <= 0 && d2 <= 0) return (x - a).norm();
  Vector3d bx = x - b;
  double d3 = ab.dot(bx), d4 = ac.dot(bx);
  if (d3 >= 0 && d4 <= d3) return (x - b).norm();
  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return (x - (a + ab * (d1 / (d1 - d3)))).norm();
  Vector3d cx = x - c;
  double d5 = ab.dot(cx), d6 = ac.dot(cx);
  if (d6 >= 0 && d5 <= d6) return (x - c).norm();
  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return (x - (a + ac * (d2 / (d2 - d6)))).norm();
  double va = d3 * d6 - d5 * d4;
  if (va <= 0 && d4 - d3 >= 0 && d5 - d6 >= 0) {
    double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return (x - (b + (c - b) * w)).norm();
  }
  double denom = 1.0 / (va + vb + vc);
  Vector3d closest = a + ab * (vb * denom) + ac * (vc * denom);
  return (x - closest).norm();
}

struct Tri {
  Vector3d a, b, c;
};

std::vector<Tri> triangles_of(const Polyhedron& p) {
  std::vector<Tri> tris;
  tris.reserve(p.complex->simplices.size());
  for (const auto& s : p.complex->simplices)
    tris.push_back({p.vertex(s[0]), p.vertex(s[1]), p.vertex(s[2])});
  return tris;
}

Vector3d random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector3d d;
  do {
    d = {g(rng), g(rng), g(rng)};
  } while (d.norm() < 1e-3);
  return d.normalized();
}

// Signed ray-crossing count; nullopt when some hit is too close to an edge,
// the ray origin, or a grazing plane to trust.
std::optional<int> ray_crossings(const std::vector<Tri>& tris, const Vector3d& x,
                                 const Vector3d& dir) {
  constexpr double kMargin = 1e-9;
  int total = 0;
  for (const Tri& t : tris) {
    Vector3d e1 = t.b - t.a, e2 = t.c - t.a;
    Matrix3d m;
    m.col(0) = e1;
    m.col(1) = e2;
    m.col(2) = -dir;
    double det = m.determinant();
    double scale = e1.norm() * e2.norm();
    if (std::abs(det) <= 1e-12 * scale) {
      // ray parallel to the plane: harmless unless it grazes the triangle
      Vector3d n = e1.cross(e2);
      if (std::abs(n.dot(x - t.a)) <= kMargin * n.norm()) return std::nullopt;
      continue;
    }
    Vector3d sol = m.inverse() * (x - t.a);
    double u = sol[0], v = sol[1], s = sol[2];
    bool inside = u > kMargin && v > kMargin && u + v < 1.0 - kMargin && s > kMargin;
    bool outside = u < -kMargin || v < -kMargin || u + v > 1.0 + kMargin || s < -kMargin;
    if (!inside && !outside) return std::nullopt;  // skims an edge / the origin
    if (inside) total += det < 0 ? 1 : -1;  // det = -dir . normal
  }
  return total;
}

int linking_with_retries(const std::vector<Tri>& tris, const Vector3d& x, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    if (auto hit = ray_crossings(tris, x, random_direction(rng))) return *hit;
  }
  throw std::runtime_error("linking number: persistent degeneracy after 16 ray retries");
}

}  // namespace

int linking_number(const Polyhedron& p, const Vector3d& x, std::uint64_t seed) {
  require_euclidean3(p, "linking_number");
  auto tris = triangles_of(p);
  for (const Tri& t : tris)
    if (point_triangle_distance(x, t.a, t.b, t.c) <= kGeoTol)
      throw std::domain_error("linking number undefined: point lies on the surface");
  std::mt19937_64 rng(seed);
  return linking_with_retries(tris, x, rng);
}

double oriented_volume(const Polyhedron& p) {
  require_euclidean3(p, "oriented_volume");
  double six_v = 0.0;
  for (const auto& s : p.complex->simplices) {
    Matrix3d m;
    m.col(0) = p.vertex(s[0]);
    m.col(1) = p.vertex(s[1]);
    m.col(2) = p.vertex(s[2]);
    six_v += m.determinant();
  }
  return six_v / 6.0;
}

MonteCarloVolume monte_carlo_volume(const Polyhedron& p, long samples, std::uint64_t seed) {
  require_euclidean3(p, "monte_carlo_volume");
  if (samples <= 1) throw std::invalid_argument("need more than one Monte-Carlo sample");
  auto tris = triangles_of(p);

  Vector3d lo = p.coords.colwise().minCoeff();
  Vector3d hi = p.coords.colwise().maxCoeff();
  double box_vol = (hi - lo).prod();
  MonteCarloVolume out;
  out.samples = samples;
  if (box_vol <= 0) return out;  // flat: lambda vanishes a.e.

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(lo[0], hi[0]), uy(lo[1], hi[1]), uz(lo[2], hi[2]);
  double sum = 0, sum2 = 0;
  for (long i = 0; i < samples; ++i) {
    Vector3d pt{ux(rng), uy(rng), uz(rng)};
    double lambda = static_cast<double>(linking_with_retries(tris, pt, rng));
    sum += lambda;
    sum2 += lambda * lambda;
  }
  double mean = sum / samples;
  double var = std::max(0.0, sum2 / samples - mean * mean);
  out.value = box_vol * mean;
  out.std_error = box_vol * std::sqrt(var / samples);
  return out;
}

double DehnInvariant::tensor_sum() const {
  double s = 0;
  for (const auto& t : raw) s += t.length * t.angle;
  return s;
}

DehnInvariant dehn(const Polyhedron& p, const EdgeLengths* exact) {
  DehnInvariant inv;
  for (const auto& sigma : codim2_faces(*p.complex)) {
    DehnInvariant::Term term;
    term.face = sigma;
    bool degen = false;
    term.length = face_volume(p, sigma.face, &degen);
    if (degen) throw std::domain_error("degenerate codimension-2 face in Dehn invariant");
    term.angle = dihedral_angle(p, sigma);
    if (exact) {
      if (sigma.face.size() != 2)
        throw std::invalid_argument("exact Dehn reduction needs edge lengths (n = 3)");
      const QuadExt* q = exact->exact_at(sigma.face[0], sigma.face[1]);
      if (!q) throw std::invalid_argument("exact length missing for an edge of the complex");
      if (std::abs(q->eval(1e-12) - term.length) > 1e-9)
        throw std::invalid_argument("exact and measured edge lengths disagree beyond 1e-9");
      term.exact_length = *q;
    }
    inv.raw.push_back(std::move(term));
  }

  if (exact) {
    std::map<long, double> alpha;
    for (const auto& t : inv.raw)
      for (const auto& [d, q] : t.exact_length->terms()) alpha[d] += to_double(q) * t.angle;
    inv.reduced = std::move(alpha);
  } else {
    // heuristic rational grouping of numeric lengths (denominators <= 64)
    std::vector<DehnInvariant::HeuristicGroup> groups;
    for (size_t i = 0; i < inv.raw.size(); ++i) {
      const auto& t = inv.raw[i];
      bool placed = false;
      for (auto& g : groups) {
        double ratio = t.length / g.unit_length;
        for (int q = 1; q <= 64 && !placed; ++q) {
          double pnum = std::round(ratio * q);
          if (pnum >= 1 && std::abs(ratio - pnum / q) <= 1e-9 * std::max(1.0, ratio)) {
            g.members.push_back(i);
            g.alpha += (pnum / q) * t.angle;
            placed = true;
          }
        }
        if (placed) break;
      }
      if (!placed)
        groups.push_back({t.length, {i}, t.angle});
    }
    inv.heuristic = std::move(groups);
  }
  return inv;
}

double flexion_length_deviation(const FlexionPath& path, int samples) {
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  EdgeLengths base;
  double dev = 0;
  for (int i = 0; i < samples; ++i) {
    double t = path.t_min + (path.t_max - path.t_min) * i / (samples - 1);
    EdgeLengths cur = edge_lengths(path.at(t));
    if (i == 0) {
      base = std::move(cur);
      continue;
    }
    for (const auto& [k, v] : cur.value) dev = std::max(dev, std::abs(v - base.value.at(k)));
  }
  return dev;
}

namespace {

struct AngleStencil {
  std::vector<Codim2Face> faces;
  std::vector<double> volumes;  // V_sigma at the centre
  std::vector<std::array<double, 3>> branches;
};

AngleStencil angle_stencil(const FlexionPath& path, double t, double h) {
  Polyhedron mid = path.at(t);
  AngleStencil st;
  st.faces = codim2_faces(*mid.complex);
  Polyhedron lo = path.at(t - h), hi = path.at(t + h);
  for (const auto& sigma : st.faces) {
    st.volumes.push_back(face_volume(mid, sigma.face));
    double a0 = dihedral_angle(mid, sigma);
    double am = unwrap_angle(a0, dihedral_angle(lo, sigma));
    double ap = unwrap_angle(a0, dihedral_angle(hi, sigma));
    if (std::abs(am - a0) > std::numbers::pi / 2 || std::abs(ap - a0) > std::numbers::pi / 2)
      throw std::runtime_error("schlafli stencil: angle branch jump above pi/2, reduce h");
    st.branches.push_back({am, a0, ap});
  }
  return st;
}

}  // namespace

SchlafliResult schlafli_residual(const FlexionPath& path, double t, double h) {
  if (!(h > 0)) throw std::invalid_argument("step must be positive");
  if (!(path.t_min <= t - h && t + h <= path.t_max))
    throw std::invalid_argument("stencil leaves the path interval");
  AngleStencil st = angle_stencil(path, t, h);
  SchlafliResult out;
  for (size_t i = 0; i < st.faces.size(); ++i) {
    out.lhs += st.volumes[i] * (st.branches[i][2] - st.branches[i][0]) / (2 * h);
    out.scale += st.volumes[i];
  }
  Polyhedron sample = path.at(t);
  if (sample.space.curved())
    out.implied_dvolume = out.lhs / (sample.space.epsilon() * (sample.space.n - 1));
  return out;
}

SweepReport dehn_sweep(const FlexionPath& path, int samples, const EdgeLengths& exact, int jobs,
                       double schlafli_h) {
  if (samples < 3) throw std::invalid_argument("sweep needs at least 3 samples");
  if (!exact.has_exact()) throw std::invalid_argument("sweep needs exact edge lengths");
  jobs = std::max(1, jobs);

  Polyhedron first = path.at(path.t_min);
  SweepReport rep;
  rep.faces = codim2_faces(*first.complex);
  for (const auto& sigma : rep.faces) {
    std::string name;
    for (int v : sigma.face) name += (name.empty() ? "" : "_") + first.complex->vertex_ids[v];
    rep.face_names.push_back(name);
  }
  const int nf = static_cast<int>(rep.faces.size());

  // radicand support of the exact lengths, and per-face coefficient rows
  std::map<long, int> rad_col;
  for (const auto& sigma : rep.faces) {
    if (sigma.face.size() != 2)
      throw std::invalid_argument("sweep reduction needs edge lengths (n = 3)");
    const QuadExt* q = exact.exact_at(sigma.face[0], sigma.face[1]);
    if (!q) throw std::invalid_argument("exact length missing for an edge of the complex");
    for (const auto& [d, c] : q->terms()) rad_col.emplace(d, 0);
  }
  for (auto& [d, col] : rad_col) {
    rep.radicands.push_back(d);
    col = static_cast<int>(rep.radicands.size()) - 1;
  }
  Eigen::MatrixXd coeff = Eigen::MatrixXd::Zero(nf, static_cast<int>(rep.radicands.size()));
  for (int f = 0; f < nf; ++f) {
    const QuadExt* q = exact.exact_at(rep.faces[f].face[0], rep.faces[f].face[1]);
    for (const auto& [d, c] : q->terms()) coeff(f, rad_col[d]) = to_double(c);
  }

  rep.t.resize(samples);
  rep.volume.resize(samples);
  rep.schlafli.resize(samples);
  rep.phi.resize(samples, nf);
  Eigen::MatrixXd raw_phi(samples, nf);
  std::vector<std::string> errors(samples);

  auto worker = [&](int begin, int end) {
    for (int s = begin; s < end; ++s) {
      try {
        double t = path.t_min + (path.t_max - path.t_min) * s / (samples - 1);
        rep.t[s] = t;
        Polyhedron poly = path.at(t);

        // flexion invariant: lengths must match the exact set
        EdgeLengths measured = edge_lengths(poly);
        for (const auto& [k, exq] : exact.exact)
          if (std::abs(measured.value.at(k) - exq.eval(1e-12)) >
              1e-9 * std::max(1.0, std::abs(exq.eval(1e-12))))
            throw std::runtime_error("edge lengths drift from the exact set: not a flexion (t = " +
                                     std::to_string(t) + ")");

        for (int f = 0; f < nf; ++f) raw_phi(s, f) = dihedral_angle(poly, rep.faces[f]);
        rep.volume[s] = (poly.space.kind == Space::euclidean && poly.space.n == 3)
                            ? oriented_volume(poly)
                            : std::numeric_limits<double>::quiet_NaN();
        double tc = std::clamp(t, path.t_min + schlafli_h, path.t_max - schlafli_h);
        rep.schlafli[s] = schlafli_residual(path, tc, schlafli_h).lhs;
      } catch (const std::exception& e) {
        errors[s] = e.what();
      }
    }
  };

  if (jobs == 1) {
    worker(0, samples);
  } else {
    std::vector<std::thread> pool;
    int chunk = (samples + jobs - 1) / jobs;
    for (int j = 0; j < jobs; ++j) {
      int begin = j * chunk, end = std::min(samples, begin + chunk);
      if (begin < end) pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  for (int s = 0; s < samples; ++s)
    if (!errors[s].empty()) throw std::runtime_error(errors[s]);

  // sequential branch unwrapping over the ordered samples
  for (int f = 0; f < nf; ++f) {
    for (int s = 0; s < samples; ++s) {
      double branch = s == 0 ? raw_phi(0, f) : unwrap_angle(rep.phi(s - 1, f), raw_phi(s, f));
      if (s > 0 && std::abs(branch - rep.phi(s - 1, f)) > std::numbers::pi / 2)
        throw std::runtime_error("angle branch jump above pi/2 between samples " +
                                 std::to_string(s - 1) + " and " + std::to_string(s) +
                                 ": sampling too coarse");
      rep.phi(s, f) = branch;
    }
  }

  rep.alpha = rep.phi * coeff;
  for (size_t d = 0; d < rep.radicands.size(); ++d) {
    double base = rep.alpha(0, static_cast<int>(d));
    double dev = 0;
    for (int s = 0; s < samples; ++s)
      dev = std::max(dev, std::abs(rep.alpha(s, static_cast<int>(d)) - base));
    rep.max_deviation[rep.radicands[d]] = dev;
  }
  return rep;
}

}  // namespace flexlab
