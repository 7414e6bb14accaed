#include "flexlab/pseudomanifold.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace flexlab {

PseudoManifold PseudoManifold::from_simplices(int dim_top,
                                              const std::vector<std::vector<VertexId>>& tuples) {
  if (dim_top < 1) throw std::invalid_argument("dim_top must be >= 1");
  PseudoManifold k;
  k.dim_top = dim_top;
  std::unordered_map<VertexId, int> index;
  for (const auto& t : tuples) {
    std::vector<int> s;
    s.reserve(t.size());
    for (const auto& v : t) {
      auto [it, fresh] = index.emplace(v, static_cast<int>(k.vertex_ids.size()));
      if (fresh) k.vertex_ids.push_back(v);
      s.push_back(it->second);
    }
    k.simplices.push_back(std::move(s));
  }
  return k;
}

int PseudoManifold::index_of(const VertexId& id) const {
  auto it = std::find(vertex_ids.begin(), vertex_ids.end(), id);
  return it == vertex_ids.end() ? -1 : static_cast<int>(it - vertex_ids.begin());
}

int sort_parity(std::vector<int> tuple) {
  int parity = 1;
  for (size_t i = 0; i < tuple.size(); ++i) {
    for (size_t j = i + 1; j < tuple.size(); ++j) {
      if (tuple[i] == tuple[j]) return 0;
      if (tuple[i] > tuple[j]) {
        std::swap(tuple[i], tuple[j]);
        parity = -parity;
      }
    }
  }
  return parity;
}

namespace {

std::string face_name(const PseudoManifold& k, const std::vector<int>& face) {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < face.size(); ++i) os << (i ? "," : "") << k.vertex_ids[face[i]];
  os << "}";
  return os.str();
}

// (k-1)-face obtained by dropping position `drop`; sign of the induced
// orientation relative to the sorted representative.
struct InducedFacet {
  std::vector<int> sorted;
  int sign;
};

InducedFacet induced_facet(const std::vector<int>& simplex, size_t drop) {
  std::vector<int> f;
  f.reserve(simplex.size() - 1);
  for (size_t i = 0; i < simplex.size(); ++i)
    if (i != drop) f.push_back(simplex[i]);
  int sign = (drop % 2 == 0 ? 1 : -1) * sort_parity(f);
  std::sort(f.begin(), f.end());
  return {std::move(f), sign};
}

}  // namespace

ValidationReport validate(const PseudoManifold& k) {
  ValidationReport rep;
  const size_t arity = static_cast<size_t>(k.dim_top) + 1;

  bool structural_ok = true;
  for (size_t t = 0; t < k.simplices.size(); ++t) {
    const auto& s = k.simplices[t];
    if (s.size() != arity) {
      rep.violations.push_back({ViolationKind::structural,
                                "simplex #" + std::to_string(t) + " has arity " +
                                    std::to_string(s.size()) + ", expected " + std::to_string(arity)});
      structural_ok = false;
      continue;
    }
    std::set<int> uniq(s.begin(), s.end());
    if (uniq.size() != s.size()) {
      rep.violations.push_back({ViolationKind::structural,
                                "simplex #" + std::to_string(t) + " " + face_name(k, s) +
                                    " repeats a vertex"});
      structural_ok = false;
    }
  }
  if (!structural_ok) return rep;  // conditions below presume well-formed tuples
  if (k.simplices.empty()) {
    rep.violations.push_back({ViolationKind::connectivity, "complex has no top simplices"});
    return rep;
  }

  // facet -> incidences (top simplex, induced orientation sign)
  std::map<std::vector<int>, std::vector<std::pair<int, int>>> facets;
  for (size_t t = 0; t < k.simplices.size(); ++t) {
    for (size_t d = 0; d < arity; ++d) {
      InducedFacet f = induced_facet(k.simplices[t], d);
      facets[f.sorted].push_back({static_cast<int>(t), f.sign});
    }
  }

  for (const auto& [face, inc] : facets) {
    if (inc.size() != 2) {
      rep.violations.push_back({ViolationKind::face_count,
                                "face " + face_name(k, face) + " lies in " +
                                    std::to_string(inc.size()) + " top simplices, expected 2"});
    } else if (inc[0].second == inc[1].second) {
      rep.violations.push_back({ViolationKind::orientation,
                                "face " + face_name(k, face) + " receives equal induced orientations from simplices #" +
                                    std::to_string(inc[0].first) + " and #" + std::to_string(inc[1].first)});
    }
  }

  // strong connectivity via the dual graph across shared facets
  std::vector<std::vector<int>> adj(k.simplices.size());
  for (const auto& [face, inc] : facets) {
    for (size_t i = 0; i < inc.size(); ++i)
      for (size_t j = i + 1; j < inc.size(); ++j) {
        adj[inc[i].first].push_back(inc[j].first);
        adj[inc[j].first].push_back(inc[i].first);
      }
  }
  std::vector<char> seen(k.simplices.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  size_t reached = 1;
  while (!stack.empty()) {
    int t = stack.back();
    stack.pop_back();
    for (int u : adj[t])
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        stack.push_back(u);
      }
  }
  if (reached != k.simplices.size()) {
    rep.violations.push_back({ViolationKind::connectivity,
                              "dual graph splits: only " + std::to_string(reached) + " of " +
                                  std::to_string(k.simplices.size()) +
                                  " top simplices reachable from simplex #0"});
  }
  return rep;
}

std::string ValidationReport::to_string() const {
  if (violations.empty()) return "valid";
  std::ostringstream os;
  for (const auto& v : violations) {
    switch (v.kind) {
      case ViolationKind::structural: os << "[structural] "; break;
      case ViolationKind::face_count: os << "[face-count] "; break;
      case ViolationKind::connectivity: os << "[connectivity] "; break;
      case ViolationKind::orientation: os << "[orientation] "; break;
    }
    os << v.detail << "\n";
  }
  return os.str();
}

std::vector<Codim2Face> codim2_faces(const PseudoManifold& k) {
  ValidationReport rep = validate(k);
  if (!rep.valid())
    throw std::invalid_argument("codim2_faces on invalid complex:\n" + rep.to_string());

  std::map<std::vector<int>, std::vector<int>> facets;
  for (size_t t = 0; t < k.simplices.size(); ++t) {
    for (size_t d = 0; d < k.simplices[t].size(); ++d) {
      InducedFacet f = induced_facet(k.simplices[t], d);
      facets[f.sorted].push_back(static_cast<int>(t));
    }
  }
  std::vector<Codim2Face> out;
  out.reserve(facets.size());
  for (const auto& [face, inc] : facets) out.push_back({face, inc[0], inc[1]});
  return out;
}

std::vector<std::pair<int, int>> edges(const PseudoManifold& k) {
  std::set<std::pair<int, int>> e;
  for (const auto& s : k.simplices)
    for (size_t i = 0; i < s.size(); ++i)
      for (size_t j = i + 1; j < s.size(); ++j)
        e.insert({std::min(s[i], s[j]), std::max(s[i], s[j])});
  return {e.begin(), e.end()};
}

std::vector<std::vector<int>> all_simplices(const PseudoManifold& k) {
  std::set<std::vector<int>> out;
  for (const auto& s : k.simplices) {
    const size_t n = s.size();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> sub;
      for (size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) sub.push_back(s[i]);
      std::sort(sub.begin(), sub.end());
      out.insert(std::move(sub));
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace flexlab
