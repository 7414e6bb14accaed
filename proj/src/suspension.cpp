#include "flexlab/suspension.hpp"

#include <cmath>
#include <numbers>

#include "flexlab/geometry.hpp"

namespace flexlab {

namespace {

Rational rational_of(double x) {
  return Rational(x);  // exact binary expansion
}

struct Parabola {
  Rational a, b, c;
};

// Exact interpolation through three points with pairwise distinct x.
Parabola fit_parabola(const std::array<std::pair<Rational, Rational>, 3>& pts) {
  const auto& [x1, y1] = pts[0];
  const auto& [x2, y2] = pts[1];
  const auto& [x3, y3] = pts[2];
  Rational den = (x1 - x2) * (x1 - x3) * (x2 - x3);
  Parabola p;
  p.a = (y1 * (x2 - x3) - y2 * (x1 - x3) + y3 * (x1 - x2)) / den;
  p.b = (-y1 * (x2 * x2 - x3 * x3) + y2 * (x1 * x1 - x3 * x3) - y3 * (x1 * x1 - x2 * x2)) / den;
  p.c = (y1 * x2 * x3 * (x2 - x3) - y2 * x1 * x3 * (x1 - x3) + y3 * x1 * x2 * (x1 - x2)) / den;
  return p;
}

}  // namespace

SuspensionModel build(const SuspensionSpec& spec) {
  const Curve& e = spec.curve;
  for (const auto& [name, p] : spec.basepoints)
    if (!on_curve(e, p))
      throw ConditionError("basepoint", 0, name + " = " + p.str() + " is off the curve");
  if (spec.sigma1 != 1 && spec.sigma1 != -1)
    throw std::invalid_argument("sigma1 must be +1 or -1");

  SuspensionModel m{e};

  auto resolve = [&](const Word& w, const std::string& what, int j) {
    CurvePoint p = combo(e, w, spec.basepoints);
    if (p.is_infinity())
      throw ConditionError("resolution", j, what + " = " + word_str(w) + " is the point at infinity");
    return p;
  };
  for (int j = 0; j < 6; ++j) {
    const auto& row = spec.rows[j];
    const int jn = (j + 1) % 6;
    m.q_minus[j] = resolve(row.q_minus, "Q_minus", j + 1);
    m.q_plus[jn] = resolve(row.q_plus_next, "Q_plus_next", j + 1);
    m.qp_minus[j] = resolve(row.qp_minus, "Qprime_minus", j + 1);
    m.qp_plus[jn] = resolve(row.qp_plus_next, "Qprime_plus_next", j + 1);
  }

  // (A): each +/- pair coincides or is x-axis symmetric; shared x-coordinate.
  for (int j = 0; j < 6; ++j) {
    if (!(m.q_minus[j] == m.q_plus[j] || m.q_minus[j] == neg(m.q_plus[j])))
      throw ConditionError("(A)", j + 1,
                           "Q_{j,-} = " + m.q_minus[j].str() + " vs Q_{j,+} = " + m.q_plus[j].str());
    if (!(m.qp_minus[j] == m.qp_plus[j] || m.qp_minus[j] == neg(m.qp_plus[j])))
      throw ConditionError("(A)", j + 1,
                           "Q'_{j,-} = " + m.qp_minus[j].str() + " vs Q'_{j,+} = " + m.qp_plus[j].str());
    m.r[j] = m.q_minus[j].x();
    m.r_prime[j] = m.qp_minus[j].x();
  }

  // (D): Q on the non-compact branch, Q' on the oval.
  for (int j = 0; j < 6; ++j) {
    if (!(m.r[j] >= e.b))
      throw ConditionError("(D)", j + 1, "r_j = " + format_rational(m.r[j]) + " < b");
    if (!(0 <= m.r_prime[j] && m.r_prime[j] <= e.b_prime))
      throw ConditionError("(D)", j + 1, "r'_j = " + format_rational(m.r_prime[j]) + " outside [0, b']");
  }

  // (C): the multiset of all 24 points is symmetric about the x-axis.
  {
    std::multiset<std::pair<Rational, Rational>> pts, mirrored;
    auto insert = [&](const CurvePoint& p) {
      pts.insert({p.x(), p.y()});
      mirrored.insert({p.x(), -p.y()});
    };
    for (int j = 0; j < 6; ++j) {
      insert(m.q_minus[j]);
      insert(m.q_plus[j]);
      insert(m.qp_minus[j]);
      insert(m.qp_plus[j]);
    }
    if (pts != mirrored)
      throw ConditionError("(C)", 0, "the 24-point multiset is not symmetric about the x-axis");
  }

  // (B) per j: group-law sum is O, no symmetric pair, and the four points lie
  // on an exact parabola whose quartic factors over r_j, r'_j, r_{j+1}, r'_{j+1}.
  for (int j = 0; j < 6; ++j) {
    const int jn = (j + 1) % 6;
    std::array<CurvePoint, 4> quad{m.q_minus[j], m.qp_minus[j], m.q_plus[jn], m.qp_plus[jn]};

    CurvePoint sum = CurvePoint::infinity();
    for (const auto& p : quad) sum = add(e, sum, p);
    if (!sum.is_infinity())
      throw ConditionError("(B)", j + 1, "group-law sum is " + sum.str() + ", not O");

    for (size_t i = 0; i < 4; ++i)
      for (size_t l = i + 1; l < 4; ++l)
        if (quad[i].x() == quad[l].x() && quad[i].y() == -quad[l].y())
          throw ConditionError("(B)", j + 1,
                               "points " + quad[i].str() + " and " + quad[l].str() +
                                   " are symmetric about the x-axis");

    std::array<std::pair<Rational, Rational>, 3> support;
    size_t found = 0;
    for (const auto& p : quad) {
      bool fresh = true;
      for (size_t i = 0; i < found; ++i)
        if (support[i].first == p.x()) fresh = false;
      if (fresh && found < 3) support[found++] = {p.x(), p.y()};
    }
    if (found < 3)
      throw ConditionError("(B)", j + 1, "fewer than 3 distinct x-coordinates among the quadruple");
    Parabola q = fit_parabola(support);
    if (q.a == 0)
      throw ConditionError("(B)", j + 1, "interpolant is not a parabola (leading coefficient 0)");
    for (const auto& p : quad)
      if (q.a * p.x() * p.x() + q.b * p.x() + q.c != p.y())
        throw ConditionError("(B)", j + 1, "point " + p.str() + " misses the interpolated parabola");

    // q(x)^2 - x(x-b')(x-b) == a^2 (x - r_j)(x - r'_j)(x - r_{j+1})(x - r'_{j+1})
    const std::array<Rational, 4> roots{m.r[j], m.r_prime[j], m.r[jn], m.r_prime[jn]};
    Rational e1 = roots[0] + roots[1] + roots[2] + roots[3];
    Rational e2 = 0, e3 = 0;
    for (int i = 0; i < 4; ++i)
      for (int l = i + 1; l < 4; ++l) e2 += roots[i] * roots[l];
    for (int i = 0; i < 4; ++i)
      for (int l = i + 1; l < 4; ++l)
        for (int h = l + 1; h < 4; ++h) e3 += roots[i] * roots[l] * roots[h];
    Rational e4 = roots[0] * roots[1] * roots[2] * roots[3];
    const Rational a2 = q.a * q.a;
    bool identity = 2 * q.a * q.b - 1 == -a2 * e1 &&
                    q.b * q.b + 2 * q.a * q.c + (e.b_prime + e.b) == a2 * e2 &&
                    2 * q.b * q.c - e.b_prime * e.b == -a2 * e3 &&
                    q.c * q.c == a2 * e4;
    if (!identity)
      throw ConditionError("(B)", j + 1, "parabola quartic does not factor over the four x-roots");

    m.par_a[j] = q.a;
    m.par_b[j] = q.b;
    m.par_c[j] = q.c;

    // Vieta: c/a = s_j sqrt(prod of the four roots) with s_j = +-1. The
    // quartic identity already forces (c/a)^2 == e4, so only the sign is new.
    Rational ratio = q.c / q.a;
    if (ratio * ratio != e4)
      throw ConditionError("(4.1)", j + 1, "(c/a)^2 differs from the root product");
    if (ratio == 0)
      throw ConditionError("(4.1)", j + 1, "c_j = 0 leaves the sign s_j undetermined");
    m.s[j] = sign(ratio);
  }

  int prod = 1;
  for (int j = 0; j < 6; ++j) prod *= m.s[j];
  if (prod != 1) throw ConditionError("closure", 0, "s_1 s_2 ... s_6 = -1");
  m.sigma[0] = spec.sigma1;
  for (int j = 0; j < 5; ++j) m.sigma[j + 1] = m.s[j] * m.sigma[j];
  if (m.s[5] * m.sigma[5] != m.sigma[0])
    throw ConditionError("closure", 6, "sigma_7 != sigma_1");

  for (int j = 0; j < 6; ++j) {
    m.sqrt_r[j] = sqrt_rational(m.r[j]);
    m.sqrt_r_prime[j] = sqrt_rational(m.r_prime[j]);
    QuadExt half(make_rational(1, 2));
    QuadExt signed_rp = m.sigma[j] == 1 ? m.sqrt_r_prime[j] : -m.sqrt_r_prime[j];
    m.len_south[j] = (m.sqrt_r[j] + signed_rp) * half;
    m.len_north[j] = (m.sqrt_r[j] - signed_rp) * half;
    m.len_equator[j] = QuadExt(Rational(1) / (2 * rational_abs(m.par_a[j])));
  }
  return m;
}

std::complex<double> suspension_F(const SuspensionModel& m, int j, double x) {
  if (j < 1 || j > 6) throw std::invalid_argument("F_j index must be 1..6");
  const Rational xr = rational_of(x);
  if (!(m.curve.b_prime < xr && xr < m.curve.b))
    throw std::domain_error("flexion parameter outside the open interval (b', b)");
  const int i = j - 1, in = j % 6;

  Rational qx = m.par_a[i] * xr * xr + m.par_b[i] * xr + m.par_c[i];
  Rational rad_cubic = -xr * (xr - m.curve.b) * (xr - m.curve.b_prime);
  Rational rad_quartic =
      (xr - m.r[i]) * (xr - m.r_prime[i]) * (xr - m.r[in]) * (xr - m.r_prime[in]);
  std::complex<double> num(-to_double(qx), std::sqrt(to_double(rad_cubic)));
  double den = to_double(m.par_a[i]) * std::sqrt(to_double(rad_quartic));
  return num / den;
}

PseudoManifold bipyramid_complex() {
  std::vector<std::vector<VertexId>> faces;
  auto p = [](int k) { return "p" + std::to_string((k - 1) % 6 + 1); };
  for (int j = 1; j <= 6; ++j) faces.push_back({"N", p(j), p(j + 1)});
  for (int j = 1; j <= 6; ++j) faces.push_back({"S", p(j + 1), p(j)});
  return PseudoManifold::from_simplices(2, faces);
}

Polyhedron vertices_at(const SuspensionModel& m, double x) {
  const Rational xr = rational_of(x);
  if (!(m.curve.b_prime < xr && xr < m.curve.b))
    throw std::domain_error("flexion parameter outside the open interval (b', b)");

  PseudoManifold complex = bipyramid_complex();
  Eigen::MatrixXd coords(complex.vertex_count(), 3);
  const double sx = std::sqrt(x);

  coords.row(complex.index_of("N")) << 0.0, 0.0, sx;
  coords.row(complex.index_of("S")) << 0.0, 0.0, 0.0;

  std::complex<double> prefix(1.0, 0.0);
  for (int k = 0; k < 6; ++k) {
    Rational rad = -(xr - m.r[k]) * (xr - m.r_prime[k]);
    std::complex<double> horizontal = std::sqrt(to_double(rad)) * prefix / (2.0 * sx);
    double z = (x + m.sigma[k] * std::sqrt(to_double(m.r[k] * m.r_prime[k]))) / (2.0 * sx);
    coords.row(complex.index_of("p" + std::to_string(k + 1)))
        << horizontal.real(), horizontal.imag(), z;
    prefix *= suspension_F(m, k + 1, x);
  }
  return make_polyhedron(std::move(complex), SpaceForm::euclidean(3), std::move(coords));
}

EdgeLengths exact_edge_lengths(const SuspensionModel& m) {
  PseudoManifold complex = bipyramid_complex();
  const int n = complex.index_of("N"), s = complex.index_of("S");
  EdgeLengths out;
  auto put = [&](int u, int v, const QuadExt& q) {
    out.exact[edge_key(u, v)] = q;
    out.value[edge_key(u, v)] = q.eval(1e-15);
  };
  for (int k = 0; k < 6; ++k) {
    int pk = complex.index_of("p" + std::to_string(k + 1));
    int pk1 = complex.index_of("p" + std::to_string((k + 1) % 6 + 1));
    put(pk, n, m.len_north[k]);
    put(pk, s, m.len_south[k]);
    put(pk, pk1, m.len_equator[k]);
  }
  return out;
}

LinkQuadrangle link_quadrangle(const SuspensionModel& m, int k, double x) {
  if (k < 1 || k > 6) throw std::invalid_argument("vertex index must be 1..6");
  const int i = k - 1;
  const int prev = (k + 4) % 6;  // k-1, 1-based -> 0-based
  const int next = k % 6;

  // law of cosines at p_k, all lengths exact
  auto corner = [&](const QuadExt& leg_a, const QuadExt& leg_b, const QuadExt& opposite) {
    QuadExt num = leg_a * leg_a + leg_b * leg_b - opposite * opposite;
    QuadExt den = QuadExt(Rational(2)) * leg_a * leg_b;
    QuadExt c = num * den.inverse();
    double cd = c.eval(1e-15);
    if (!(std::abs(cd) < 1.0))
      throw std::domain_error("degenerate corner triangle at p" + std::to_string(k));
    return c;
  };

  LinkQuadrangle q;
  q.k = k;
  auto name = [&](const char* pole, int other) {
    return std::string("angle(") + pole + " p" + std::to_string(k) + " p" + std::to_string(other + 1) + ")";
  };
  // cyclic order of the link: N~, p~_{k+1}, S~, p~_{k-1}
  q.side_name = {name("N", next), name("S", next), name("S", prev), name("N", prev)};
  q.cos_exact = {corner(m.len_north[i], m.len_equator[i], m.len_north[next]),
                 corner(m.len_south[i], m.len_equator[i], m.len_south[next]),
                 corner(m.len_south[i], m.len_equator[prev], m.len_south[prev]),
                 corner(m.len_north[i], m.len_equator[prev], m.len_north[prev])};
  for (int t = 0; t < 4; ++t) q.side[t] = std::acos(q.cos_exact[t].eval(1e-15));

  // cross-check against the embedded configuration at x
  Polyhedron p = vertices_at(m, x);
  auto at = [&](const std::string& id) { return p.vertex(p.complex->index_of(id)); };
  auto corner_coords = [&](const std::string& a, const std::string& b) {
    Eigen::VectorXd u = at(a) - at("p" + std::to_string(k));
    Eigen::VectorXd v = at(b) - at("p" + std::to_string(k));
    return std::acos(u.dot(v) / (u.norm() * v.norm()));
  };
  std::array<double, 4> geo{corner_coords("N", "p" + std::to_string(next + 1)),
                            corner_coords("S", "p" + std::to_string(next + 1)),
                            corner_coords("S", "p" + std::to_string(prev + 1)),
                            corner_coords("N", "p" + std::to_string(prev + 1))};
  for (int t = 0; t < 4; ++t)
    if (std::abs(geo[t] - q.side[t]) > 1e-9)
      throw std::logic_error("link quadrangle side disagrees with the embedded configuration");
  return q;
}

std::string AngleProfiles::classify(const Eigen::VectorXd& v) const {
  bool inc = true, dec = true;
  for (int i = 0; i + 1 < v.size(); ++i) {
    if (!(v[i] < v[i + 1])) inc = false;
    if (!(v[i] > v[i + 1])) dec = false;
  }
  if ((v.maxCoeff() - v.minCoeff()) <= 1e-12) return "constant";
  if (inc) return "increasing";
  if (dec) return "decreasing";
  return "mixed";
}

AngleProfiles angle_profiles(const SuspensionModel& m, int samples, double x_lo, double x_hi) {
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  if (!(m.x_min() < x_lo && x_lo < x_hi && x_hi < m.x_max()))
    throw std::domain_error("sample range must sit strictly inside (b', b)");

  AngleProfiles out;
  out.x.resize(samples);
  out.phi2.resize(samples);
  out.phi5.resize(samples);
  out.phi12.resize(samples);
  out.phi45.resize(samples);

  PseudoManifold complex = bipyramid_complex();
  auto idx = [&](const std::string& id) { return complex.index_of(id); };
  const std::array<std::vector<int>, 4> tracked{
      std::vector<int>{idx("N"), idx("p2")}, std::vector<int>{idx("N"), idx("p5")},
      std::vector<int>{idx("p1"), idx("p2")}, std::vector<int>{idx("p4"), idx("p5")}};
  const std::array<double, 4> anchor{std::numbers::pi, std::numbers::pi, 0.0, 0.0};

  std::array<double, 4> prev{};
  for (int si = 0; si < samples; ++si) {
    double x = x_lo + (x_hi - x_lo) * si / (samples - 1);
    out.x[si] = x;
    Polyhedron poly = vertices_at(m, x);
    for (int t = 0; t < 4; ++t) {
      double raw = dihedral_angle(poly, tracked[t]);
      double branch = unwrap_angle(si == 0 ? anchor[t] : prev[t], raw);
      if (si > 0 && std::abs(branch - prev[t]) > std::numbers::pi / 2)
        throw std::runtime_error("angle branch jump above pi/2: sampling too coarse");
      prev[t] = branch;
      (t == 0 ? out.phi2 : t == 1 ? out.phi5 : t == 2 ? out.phi12 : out.phi45)[si] = branch;
    }
  }
  return out;
}

SuspensionSpec paper_suspension_spec() {
  Curve e(Rational(51), Rational(100));
  std::map<std::string, CurvePoint> base{
      {"A", {Rational(2), Rational(98)}},
      {"B", {Rational(Integer("4039540"), Integer("762129")),
             Rational(Integer("100768585960"), Integer("665338617"))}},
      {"C", {Rational(102), Rational(-102)}},
      {"D", {Rational(30), Rational(-210)}},
  };
  SuspensionSpec spec{e, std::move(base), {}, -1};
  using W = Word;
  spec.rows = {{
      {W{{"A", 1}, {"B", -1}, {"C", 1}}, W{{"A", -1}, {"B", 2}, {"C", -1}, {"D", -1}}, W{{"B", -1}}, W{{"D", 1}}},
      {W{{"A", 1}, {"B", -2}, {"C", 1}, {"D", 1}}, W{{"B", 2}, {"C", -1}, {"D", -2}}, W{{"D", 1}}, W{{"A", -1}}},
      {W{{"B", -2}, {"C", 1}, {"D", 2}}, W{{"A", 1}, {"B", 1}, {"C", -1}, {"D", -2}}, W{{"A", -1}}, W{{"B", 1}}},
      {W{{"A", -1}, {"B", -1}, {"C", 1}, {"D", 2}}, W{{"A", 1}, {"C", -1}, {"D", -1}}, W{{"B", 1}}, W{{"D", -1}}},
      {W{{"A", -1}, {"C", 1}, {"D", 1}}, W{{"C", -1}}, W{{"D", -1}}, W{{"A", 1}}},
      {W{{"C", 1}}, W{{"A", -1}, {"B", 1}, {"C", -1}}, W{{"A", 1}}, W{{"B", -1}}},
  }};
  return spec;
}

}  // namespace flexlab
