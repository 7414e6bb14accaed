#include "flexlab/io.hpp"

#include <fstream>
#include <ostream>

#include <json.hpp>

namespace flexlab {

namespace {

using nlohmann::json;

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

SpaceForm space_of(const json& j) {
  std::string kind = j.at("space").get<std::string>();
  int n = j.at("n").get<int>();
  if (n < 3) throw ParseError("dimension n must be >= 3, got " + std::to_string(n));
  if (kind == "euclidean") return SpaceForm::euclidean(n);
  if (kind == "spherical") return SpaceForm::spherical(n);
  if (kind == "hyperbolic") return SpaceForm::hyperbolic(n);
  throw ParseError("unknown space '" + kind + "'");
}

Word word_of(const json& j) {
  Word w;
  for (auto it = j.begin(); it != j.end(); ++it) w[it.key()] = it.value().get<int>();
  return w;
}

}  // namespace

PolyhedronFile load_polyhedron(const std::filesystem::path& path) {
  json j = read_json(path);
  try {
    SpaceForm space = space_of(j);

    std::vector<VertexId> ids;
    std::vector<Eigen::VectorXd> coords;
    for (const auto& v : j.at("vertices")) {
      ids.push_back(v.at("id").get<std::string>());
      auto c = v.at("coords").get<std::vector<double>>();
      if (static_cast<int>(c.size()) != space.ambient_dim())
        throw ParseError("vertex " + ids.back() + " has " + std::to_string(c.size()) +
                         " coordinates, expected " + std::to_string(space.ambient_dim()));
      coords.push_back(Eigen::Map<Eigen::VectorXd>(c.data(), c.size()));
    }

    std::vector<std::vector<VertexId>> simplices;
    for (const auto& s : j.at("simplices")) simplices.push_back(s.get<std::vector<VertexId>>());

    PseudoManifold complex = PseudoManifold::from_simplices(space.n - 1, simplices);
    Eigen::MatrixXd m(complex.vertex_count(), space.ambient_dim());
    std::vector<char> placed(complex.vertex_count(), 0);
    for (size_t i = 0; i < ids.size(); ++i) {
      int idx = complex.index_of(ids[i]);
      if (idx < 0) continue;  // coordinates for vertices not used by any simplex are dropped
      m.row(idx) = coords[i];
      placed[idx] = 1;
    }
    for (int v = 0; v < complex.vertex_count(); ++v)
      if (!placed[v]) throw ParseError("no coordinates for vertex " + complex.vertex_ids[v]);

    PolyhedronFile out{make_polyhedron(std::move(complex), space, std::move(m)), {}};
    out.lengths = edge_lengths(out.poly);
    if (j.contains("exact_edge_lengths")) {
      for (const auto& rec : j.at("exact_edge_lengths")) {
        int u = out.poly.complex->index_of(rec.at("u").get<std::string>());
        int v = out.poly.complex->index_of(rec.at("v").get<std::string>());
        if (u < 0 || v < 0) throw ParseError("exact length names an unknown vertex");
        try {
          out.lengths.exact[edge_key(u, v)] = QuadExt::parse(rec.at("length").get<std::string>());
        } catch (const std::invalid_argument& e) {
          throw ParseError(std::string("bad exact length literal: ") + e.what());
        }
      }
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_polyhedron(const std::filesystem::path& path, const Polyhedron& poly,
                     const EdgeLengths* exact) {
  json j;
  switch (poly.space.kind) {
    case Space::euclidean: j["space"] = "euclidean"; break;
    case Space::spherical: j["space"] = "spherical"; break;
    case Space::hyperbolic: j["space"] = "hyperbolic"; break;
  }
  j["n"] = poly.space.n;
  j["vertices"] = json::array();
  for (int v = 0; v < poly.complex->vertex_count(); ++v) {
    std::vector<double> c(poly.coords.row(v).begin(), poly.coords.row(v).end());
    j["vertices"].push_back({{"id", poly.complex->vertex_ids[v]}, {"coords", c}});
  }
  j["simplices"] = json::array();
  for (const auto& s : poly.complex->simplices) {
    std::vector<std::string> ids;
    for (int v : s) ids.push_back(poly.complex->vertex_ids[v]);
    j["simplices"].push_back(ids);
  }
  if (exact && exact->has_exact()) {
    j["exact_edge_lengths"] = json::array();
    for (const auto& [key, q] : exact->exact)
      j["exact_edge_lengths"].push_back({{"u", poly.complex->vertex_ids[key.first]},
                                         {"v", poly.complex->vertex_ids[key.second]},
                                         {"length", q.str()}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

SuspensionSpec load_suspension_spec(const std::filesystem::path& path) {
  json j = read_json(path);
  try {
    Curve curve(parse_rational(j.at("b_prime").get<std::string>()),
                parse_rational(j.at("b").get<std::string>()));
    std::map<std::string, CurvePoint> base;
    for (auto it = j.at("basepoints").begin(); it != j.at("basepoints").end(); ++it) {
      const auto& xy = it.value();
      base.emplace(it.key(), CurvePoint(parse_rational(xy.at(0).get<std::string>()),
                                        parse_rational(xy.at(1).get<std::string>())));
    }
    SuspensionSpec spec{curve, std::move(base), {}, j.at("sigma1").get<int>()};
    const auto& rows = j.at("rows");
    if (rows.size() != 6) throw ParseError("suspension config needs exactly 6 rows");
    for (size_t i = 0; i < 6; ++i) {
      spec.rows[i].q_minus = word_of(rows[i].at("Q_minus"));
      spec.rows[i].q_plus_next = word_of(rows[i].at("Q_plus_next"));
      spec.rows[i].qp_minus = word_of(rows[i].at("Qprime_minus"));
      spec.rows[i].qp_plus_next = word_of(rows[i].at("Qprime_plus_next"));
    }
    return spec;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_sweep_csv(std::ostream& os, const SweepReport& rep) {
  os << "t,volume,schlafli_residual";
  for (const auto& name : rep.face_names) os << ",phi_" << name;
  for (long d : rep.radicands) os << ",alpha_sqrt" << d;
  os << "\r\n";
  for (int s = 0; s < rep.t.size(); ++s) {
    os << format_g17(rep.t[s]) << "," << format_g17(rep.volume[s]) << ","
       << format_g17(rep.schlafli[s]);
    for (int f = 0; f < rep.phi.cols(); ++f) os << "," << format_g17(rep.phi(s, f));
    for (int d = 0; d < rep.alpha.cols(); ++d) os << "," << format_g17(rep.alpha(s, d));
    os << "\r\n";
  }
}

}  // namespace flexlab
