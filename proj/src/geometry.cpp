#include "flexlab/geometry.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace flexlab {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double model_residual(const SpaceForm& sf, const VectorXd& x) {
  return std::abs(sf.inner(x, x) - 1.0);
}

void require_on_model(const Polyhedron& p, int v) {
  if (!p.space.curved()) return;
  double r = model_residual(p.space, p.vertex(v));
  if (r > kGeoTol)
    throw std::domain_error("vertex " + p.complex->vertex_ids[v] +
                            " off the model surface (residual " + std::to_string(r) + ")");
}

// Orthogonal projection onto the tangent space at model point x (identity in
// the Euclidean case, where `x` is ignored).
VectorXd tangent_project(const SpaceForm& sf, const VectorXd& x, const VectorXd& v) {
  if (!sf.curved()) return v;
  return v - (sf.inner(v, x) / sf.inner(x, x)) * x;
}

// Gram-Schmidt in the tangent metric, dropping directions that collapse.
std::vector<VectorXd> orthonormalize(const SpaceForm& sf, const std::vector<VectorXd>& vecs,
                                     double rel_tol = 1e-10) {
  std::vector<VectorXd> out;
  for (const VectorXd& v : vecs) {
    VectorXd r = v;
    for (const VectorXd& b : out) r -= sf.tangent_inner(r, b) * b;
    double n2 = sf.tangent_inner(r, r);
    double scale = std::max(1.0, sf.tangent_inner(v, v));
    if (n2 > rel_tol * rel_tol * scale) out.push_back(r / std::sqrt(n2));
  }
  return out;
}

VectorXd interior_point(const Polyhedron& p, const std::vector<int>& face) {
  VectorXd x = VectorXd::Zero(p.space.ambient_dim());
  for (int v : face) x += p.vertex(v);
  x /= static_cast<double>(face.size());
  if (p.space.curved()) {
    double n = p.space.inner(x, x);
    if (n <= 0) throw std::domain_error("face midpoint leaves the model cone");
    x /= std::sqrt(n);
  }
  return x;
}

double edge_length_metric(const SpaceForm& sf, const VectorXd& a, const VectorXd& b) {
  if (!sf.curved()) {
    double d = (a - b).norm();
    if (d == 0) throw std::domain_error("coincident vertices give a degenerate edge");
    return d;
  }
  double c = sf.inner(a, b);
  if (sf.kind == Space::spherical) {
    if (c >= 1.0 - 1e-12 || c <= -1.0 + 1e-12)
      throw std::domain_error("coincident or antipodal spherical vertices give a degenerate edge");
    return std::acos(std::clamp(c, -1.0, 1.0));
  }
  if (c < 1.0 + 1e-12) {
    if (c > 1.0 - 1e-12) throw std::domain_error("coincident hyperbolic vertices give a degenerate edge");
    throw std::domain_error("hyperbolic scalar product below 1: not on one sheet");
  }
  return std::acosh(c);
}

}  // namespace

Polyhedron make_polyhedron(PseudoManifold complex, SpaceForm space, Eigen::MatrixXd coords) {
  if (coords.rows() != complex.vertex_count() || coords.cols() != space.ambient_dim())
    throw std::invalid_argument("coordinate matrix shape does not match complex/space");
  Polyhedron p{std::make_shared<PseudoManifold>(std::move(complex)), space, std::move(coords)};
  return p;
}

double EdgeLengths::at(int u, int v) const {
  auto it = value.find(edge_key(u, v));
  if (it == value.end()) throw std::out_of_range("no such edge in length set");
  return it->second;
}

const QuadExt* EdgeLengths::exact_at(int u, int v) const {
  auto it = exact.find(edge_key(u, v));
  return it == exact.end() ? nullptr : &it->second;
}

EdgeLengths edge_lengths(const Polyhedron& p) {
  for (int v = 0; v < p.complex->vertex_count(); ++v) require_on_model(p, v);
  EdgeLengths out;
  for (auto [u, v] : edges(*p.complex))
    out.value[{u, v}] = edge_length_metric(p.space, p.vertex(u), p.vertex(v));
  return out;
}

MembershipReport sigma_membership(const Polyhedron& p, const EdgeLengths& lengths, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  auto kedges = edges(*p.complex);
  if (kedges.size() != lengths.value.size())
    throw std::invalid_argument("edge-length index set does not match the complex");

  MembershipReport rep;
  rep.tolerance = tol;
  for (auto [u, v] : kedges) {
    auto it = lengths.value.find({u, v});
    if (it == lengths.value.end())
      throw std::invalid_argument("edge-length index set does not match the complex");
    double l = it->second;
    double res;
    if (!p.space.curved()) {
      res = std::abs((p.vertex(u) - p.vertex(v)).squaredNorm() - l * l);
    } else {
      double c = p.space.inner(p.vertex(u), p.vertex(v));
      double target = p.space.kind == Space::spherical ? std::cos(l) : std::cosh(l);
      res = std::abs(c - target);
    }
    if (res > rep.max_edge_residual) {
      rep.max_edge_residual = res;
      rep.worst_edge = {u, v};
    }
  }
  if (p.space.curved()) {
    for (int v = 0; v < p.complex->vertex_count(); ++v) {
      double r = model_residual(p.space, p.vertex(v));
      if (r > rep.max_model_residual) {
        rep.max_model_residual = r;
        rep.worst_vertex = v;
      }
      if (p.space.kind == Space::hyperbolic && p.coords(v, 0) <= 0) rep.sheet_ok = false;
    }
  }
  return rep;
}

NondegeneracyReport nondegenerate_lengths(const PseudoManifold& k, const EdgeLengths& lengths,
                                          const SpaceForm& space) {
  NondegeneracyReport rep;
  for (const auto& s : all_simplices(k)) {
    const int c = static_cast<int>(s.size());
    if (c < 2) continue;
    auto lij = [&](int i, int j) {
      auto it = lengths.value.find(edge_key(s[i], s[j]));
      if (it == lengths.value.end())
        throw std::invalid_argument("length set is missing an edge of the complex");
      return it->second;
    };

    bool ok;
    if (!space.curved()) {
      // Cayley-Menger determinant: realizable with positive (c-1)-volume
      // iff (-1)^c det > 0.
      MatrixXd m = MatrixXd::Zero(c + 1, c + 1);
      double scale = 1.0;
      for (int i = 0; i < c; ++i) {
        m(0, i + 1) = m(i + 1, 0) = 1.0;
        for (int j = i + 1; j < c; ++j) {
          double d2 = lij(i, j) * lij(i, j);
          m(i + 1, j + 1) = m(j + 1, i + 1) = d2;
          scale = std::max(scale, d2);
        }
      }
      double det = m.determinant();
      double thr = 1e-12 * std::pow(scale, c - 1);
      ok = (c % 2 == 0) ? det > thr : -det > thr;
    } else {
      MatrixXd g(c, c);
      for (int i = 0; i < c; ++i) {
        g(i, i) = 1.0;
        for (int j = i + 1; j < c; ++j) {
          double l = lij(i, j);
          g(i, j) = g(j, i) = space.kind == Space::spherical ? std::cos(l) : std::cosh(l);
        }
      }
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(g, Eigen::EigenvaluesOnly);
      const auto& ev = es.eigenvalues();
      double scale = std::max(ev.cwiseAbs().maxCoeff(), 1.0);
      if (space.kind == Space::spherical) {
        ok = ev.minCoeff() > 1e-12 * scale;  // unit vectors linearly independent
      } else {
        // Lorentzian Gram: signature (1, c-1)
        int pos = 0, neg = 0;
        for (int i = 0; i < c; ++i) {
          if (ev[i] > 1e-12 * scale) ++pos;
          if (ev[i] < -1e-12 * scale) ++neg;
        }
        ok = pos == 1 && neg == c - 1;
      }
    }
    rep.per_simplex.push_back({s, ok});
    if (!ok) {
      rep.ok = false;
      if (!rep.certificate) rep.certificate = s;
    }
  }
  return rep;
}

double face_volume(const Polyhedron& p, const std::vector<int>& face, bool* degenerate) {
  if (degenerate) *degenerate = false;
  const int k = static_cast<int>(face.size()) - 1;
  if (k < 0) throw std::invalid_argument("empty face");
  if (k == 0) return 1.0;

  if (p.space.curved()) {
    if (k != 1)
      throw std::invalid_argument("curved-space face volumes supported for dimensions 0 and 1 only");
    return edge_length_metric(p.space, p.vertex(face[0]), p.vertex(face[1]));
  }

  MatrixXd w(p.space.ambient_dim(), k);
  for (int i = 0; i < k; ++i) w.col(i) = p.vertex(face[i + 1]) - p.vertex(face[0]);
  MatrixXd g = w.transpose() * w;
  double det = g.determinant();
  double scale = std::pow(std::max(g.diagonal().maxCoeff(), 1e-300), k);
  if (det <= 1e-14 * scale) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  return std::sqrt(det) / fact;
}

namespace {

// Outer normal of P(tau) at x: unit vector of T_x orthogonal to the face's
// tangent plane, signed so that (m, positive frame of P(tau)) is positively
// oriented in the ambient coordinates (radial vector prepended for the
// curved models).
VectorXd outer_normal(const Polyhedron& p, const VectorXd& x,
                      const std::vector<VectorXd>& face_onb, const std::vector<int>& tau) {
  const SpaceForm& sf = p.space;
  const int ambient = sf.ambient_dim();

  VectorXd m;
  double best = -1.0;
  for (int j = 0; j < ambient; ++j) {
    VectorXd cand = tangent_project(sf, x, VectorXd::Unit(ambient, j));
    for (const VectorXd& b : face_onb) cand -= sf.tangent_inner(cand, b) * b;
    double n2 = sf.tangent_inner(cand, cand);
    if (n2 > best) {
      best = n2;
      m = cand;
    }
  }
  if (best < 1e-20) throw std::domain_error("degenerate face: no normal direction");
  m /= std::sqrt(best);

  MatrixXd frame(ambient, ambient);
  int col = 0;
  if (sf.curved()) frame.col(col++) = x / std::sqrt(sf.inner(x, x));
  frame.col(col++) = m;
  for (size_t i = 1; i < tau.size(); ++i)
    frame.col(col++) = tangent_project(sf, x, p.vertex(tau[i]) - p.vertex(tau[0]));
  double det = frame.determinant();
  if (det == 0) throw std::domain_error("degenerate face: orientation frame is singular");
  return det > 0 ? m : VectorXd(-m);
}

}  // namespace

double dihedral_angle(const Polyhedron& p, const Codim2Face& sigma) {
  const SpaceForm& sf = p.space;
  const auto& k = *p.complex;
  const auto& tau1 = k.simplices.at(sigma.tau1);
  const auto& tau2 = k.simplices.at(sigma.tau2);
  for (int v : tau1) require_on_model(p, v);
  for (int v : tau2) require_on_model(p, v);

  VectorXd x = interior_point(p, sigma.face);

  // tangent basis of P(sigma) at x
  std::vector<VectorXd> gens;
  if (!sf.curved()) {
    for (size_t i = 1; i < sigma.face.size(); ++i)
      gens.push_back(p.vertex(sigma.face[i]) - p.vertex(sigma.face[0]));
  } else {
    for (int v : sigma.face) gens.push_back(tangent_project(sf, x, p.vertex(v)));
  }
  std::vector<VectorXd> sigma_onb = orthonormalize(sf, gens);
  if (static_cast<int>(sigma_onb.size()) != sf.n - 2)
    throw std::domain_error("degenerate codimension-2 face");

  auto inward = [&](const std::vector<int>& tau) {
    int w = -1;
    for (int v : tau)
      if (std::find(sigma.face.begin(), sigma.face.end(), v) == sigma.face.end()) w = v;
    if (w < 0) throw std::invalid_argument("top simplex does not extend the codim-2 face");
    VectorXd d = sf.curved() ? tangent_project(sf, x, p.vertex(w)) : VectorXd(p.vertex(w) - x);
    for (const VectorXd& b : sigma_onb) d -= sf.tangent_inner(d, b) * b;
    double n2 = sf.tangent_inner(d, d);
    if (n2 < 1e-20) throw std::domain_error("degenerate incident face");
    return VectorXd(d / std::sqrt(n2));
  };

  VectorXd n1 = inward(tau1);
  VectorXd n2 = inward(tau2);

  std::vector<VectorXd> tau1_onb = sigma_onb;
  tau1_onb.push_back(n1);
  VectorXd m1 = outer_normal(p, x, tau1_onb, tau1);

  return std::atan2(-sf.tangent_inner(n2, m1), sf.tangent_inner(n2, n1));
}

double dihedral_angle(const Polyhedron& p, const std::vector<int>& sigma) {
  std::vector<int> sorted = sigma;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> hits;
  for (size_t t = 0; t < p.complex->simplices.size(); ++t) {
    std::vector<int> ss = p.complex->simplices[t];
    std::sort(ss.begin(), ss.end());
    if (std::includes(ss.begin(), ss.end(), sorted.begin(), sorted.end()))
      hits.push_back(static_cast<int>(t));
  }
  if (hits.size() != 2)
    throw std::invalid_argument("codim-2 face is contained in " + std::to_string(hits.size()) +
                                " top simplices, expected 2");
  return dihedral_angle(p, Codim2Face{sorted, hits[0], hits[1]});
}

double unwrap_angle(double previous, double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return angle + two_pi * std::round((previous - angle) / two_pi);
}

RigidityReport rigidity(const Polyhedron& p) {
  const SpaceForm& sf = p.space;
  const int ambient = sf.ambient_dim();
  const int m = p.complex->vertex_count();
  const int n_cols = m * ambient;
  auto kedges = edges(*p.complex);

  const int model_rows = sf.curved() ? m : 0;
  MatrixXd jac = MatrixXd::Zero(static_cast<int>(kedges.size()) + model_rows, n_cols);

  Eigen::VectorXd metric = Eigen::VectorXd::Ones(ambient);
  if (sf.curved()) metric.tail(sf.n).array() = sf.epsilon();

  int row = 0;
  for (auto [u, v] : kedges) {
    if (!sf.curved()) {
      VectorXd d = p.vertex(u) - p.vertex(v);
      jac.block(row, u * ambient, 1, ambient) = d.transpose();
      jac.block(row, v * ambient, 1, ambient) = -d.transpose();
    } else {
      jac.block(row, u * ambient, 1, ambient) =
          (metric.asDiagonal() * p.vertex(v)).transpose();
      jac.block(row, v * ambient, 1, ambient) =
          (metric.asDiagonal() * p.vertex(u)).transpose();
    }
    ++row;
  }
  for (int v = 0; v < model_rows; ++v, ++row)
    jac.block(row, v * ambient, 1, ambient) = (metric.asDiagonal() * p.vertex(v)).transpose();

  auto svd_rank = [](const MatrixXd& a, double* sigma_max = nullptr) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    Eigen::JacobiSVD<MatrixXd> svd(a);
    double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    if (sigma_max) *sigma_max = smax;
    if (smax == 0) return 0;
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > 1e-8 * smax) ++r;
    return r;
  };

  RigidityReport rep;
  rep.jacobian_rank = svd_rank(jac, &rep.sigma_max);

  // Killing fields of the model evaluated at P
  std::vector<VectorXd> fields;
  auto push_linear = [&](const MatrixXd& gen) {
    VectorXd f(n_cols);
    for (int v = 0; v < m; ++v) f.segment(v * ambient, ambient) = gen * p.vertex(v);
    fields.push_back(f);
  };
  if (!sf.curved()) {
    for (int j = 0; j < ambient; ++j) {
      VectorXd f = VectorXd::Zero(n_cols);
      for (int v = 0; v < m; ++v) f[v * ambient + j] = 1.0;
      fields.push_back(f);
    }
    for (int a = 0; a < ambient; ++a)
      for (int b = a + 1; b < ambient; ++b) {
        MatrixXd gen = MatrixXd::Zero(ambient, ambient);
        gen(a, b) = 1.0;
        gen(b, a) = -1.0;
        push_linear(gen);
      }
  } else if (sf.kind == Space::spherical) {
    for (int a = 0; a < ambient; ++a)
      for (int b = a + 1; b < ambient; ++b) {
        MatrixXd gen = MatrixXd::Zero(ambient, ambient);
        gen(a, b) = 1.0;
        gen(b, a) = -1.0;
        push_linear(gen);
      }
  } else {
    for (int a = 1; a < ambient; ++a)
      for (int b = a + 1; b < ambient; ++b) {
        MatrixXd gen = MatrixXd::Zero(ambient, ambient);
        gen(a, b) = 1.0;
        gen(b, a) = -1.0;
        push_linear(gen);
      }
    for (int q = 1; q < ambient; ++q) {  // boosts
      MatrixXd gen = MatrixXd::Zero(ambient, ambient);
      gen(0, q) = 1.0;
      gen(q, 0) = 1.0;
      push_linear(gen);
    }
  }
  MatrixXd orbit(static_cast<int>(fields.size()), n_cols);
  for (size_t i = 0; i < fields.size(); ++i) orbit.row(static_cast<int>(i)) = fields[i];
  rep.trivial_motion_dim = svd_rank(orbit);
  rep.orbit_degenerate = rep.trivial_motion_dim < static_cast<int>(fields.size());
  rep.nontrivial_flex_dim = n_cols - rep.jacobian_rank - rep.trivial_motion_dim;
  return rep;
}

}  // namespace flexlab
