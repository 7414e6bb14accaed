#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>

#include "flexlab/geometry.hpp"
#include "flexlab/io.hpp"
#include "flexlab/measures.hpp"
#include "flexlab/suspension.hpp"

namespace {

using namespace flexlab;

std::uint64_t seed_from_env() {
  if (const char* s = std::getenv("FLEXLAB_SEED")) return std::strtoull(s, nullptr, 0);
  return kDefaultSeed;
}

// exit codes: 0 pass, 1 check failure, 2 input error
constexpr int kOk = 0, kCheckFailed = 1, kInputError = 2;

int cmd_validate(const std::string& path, double tol_geo) {
  PolyhedronFile file = load_polyhedron(path);
  bool ok = true;

  ValidationReport rep = validate(*file.poly.complex);
  if (!rep.valid()) {
    std::cout << "complex: INVALID\n" << rep.to_string();
    ok = false;
  } else {
    std::cout << "complex: valid (" << file.poly.complex->simplices.size() << " top simplices, "
              << codim2_faces(*file.poly.complex).size() << " codim-2 faces)\n";
  }

  if (rep.valid()) {
    NondegeneracyReport nd = nondegenerate_lengths(*file.poly.complex, file.lengths, file.poly.space);
    if (!nd.ok) {
      std::cout << "non-degeneracy: FAILED at simplex {";
      for (size_t i = 0; i < nd.certificate->size(); ++i)
        std::cout << (i ? "," : "") << file.poly.complex->vertex_ids[(*nd.certificate)[i]];
      std::cout << "}\n";
      ok = false;
    } else {
      std::cout << "non-degeneracy: ok\n";
    }

    MembershipReport mem = sigma_membership(file.poly, file.lengths, tol_geo);
    if (!mem.member()) {
      std::cout << "model membership: FAILED (max model residual " << mem.max_model_residual
                << ", sheet " << (mem.sheet_ok ? "ok" : "violated") << ")\n";
      ok = false;
    } else {
      std::cout << "model membership: ok\n";
    }

    if (file.lengths.has_exact()) {
      double worst = 0;
      for (const auto& [key, q] : file.lengths.exact)
        worst = std::max(worst, std::abs(q.eval(1e-12) - file.lengths.value.at(key)));
      if (worst > 1e-9) {
        std::cout << "exact lengths: INCONSISTENT with coordinates (max |delta| = " << worst << ")\n";
        ok = false;
      } else {
        std::cout << "exact lengths: consistent with coordinates (max |delta| = " << worst << ")\n";
      }
    }
  }
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kOk : kCheckFailed;
}

void print_model_summary(const SuspensionModel& m) {
  std::cout << "curve: y^2 = x(x - " << format_rational(m.curve.b_prime) << ")(x - "
            << format_rational(m.curve.b) << ")\n";
  for (int j = 0; j < 6; ++j) {
    std::cout << "j=" << j + 1 << ": Q- = " << m.q_minus[j].str() << ", Q+ = " << m.q_plus[j].str()
              << "\n      Q'- = " << m.qp_minus[j].str() << ", Q'+ = " << m.qp_plus[j].str() << "\n";
    std::cout << "      r = " << format_rational(m.r[j]) << ", r' = " << format_rational(m.r_prime[j])
              << ", s = " << (m.s[j] > 0 ? "+1" : "-1") << ", sigma = "
              << (m.sigma[j] > 0 ? "+1" : "-1") << "\n";
  }
  std::cout << "exact edge lengths:\n";
  for (int k = 0; k < 6; ++k) {
    std::cout << "  |p" << k + 1 << " S|  = " << m.len_south[k].str() << "  ("
              << m.len_south[k].eval() << ")\n";
    std::cout << "  |p" << k + 1 << " N|  = " << m.len_north[k].str() << "  ("
              << m.len_north[k].eval() << ")\n";
    std::cout << "  |p" << k + 1 << " p" << (k + 1) % 6 + 1 << "| = " << m.len_equator[k].str()
              << "  (" << m.len_equator[k].eval() << ")\n";
  }
}

int cmd_build(const std::string& config, std::optional<double> at, int grid,
              const std::string& out, const std::string& out_dir) {
  SuspensionSpec spec = load_suspension_spec(config);
  SuspensionModel model = build(spec);
  print_model_summary(model);

  EdgeLengths exact = exact_edge_lengths(model);
  auto snapshot = [&](double x, const std::filesystem::path& file) {
    save_polyhedron(file, vertices_at(model, x), &exact);
    std::cout << "snapshot at x = " << x << " -> " << file.string() << "\n";
  };
  if (at) {
    if (!(model.x_min() < *at && *at < model.x_max()))
      throw std::domain_error("--at value must lie strictly inside (b', b)");
    snapshot(*at, out.empty() ? "suspension_at_" + std::to_string(*at) + ".json" : out);
  }
  if (grid > 0) {
    double lo = model.x_min() + 0.5, hi = model.x_max() - 0.5;
    for (int i = 0; i < grid; ++i) {
      double x = grid == 1 ? (lo + hi) / 2 : lo + (hi - lo) * i / (grid - 1);
      snapshot(x, std::filesystem::path(out_dir) /
                      ("suspension_grid_" + std::to_string(i) + ".json"));
    }
  }
  return kOk;
}

int cmd_sweep(const std::string& config, double from, double to, int steps,
              const std::string& out, int jobs, double tol_dehn) {
  SuspensionSpec spec = load_suspension_spec(config);
  SuspensionModel model = build(spec);
  if (!(model.x_min() < from && from < to && to < model.x_max()))
    throw std::domain_error("sweep range must sit strictly inside the open interval (b', b) = (" +
                            format_rational(model.curve.b_prime) + ", " +
                            format_rational(model.curve.b) + ")");

  FlexionPath path{from, to, [&](double x) { return vertices_at(model, x); }};
  SweepReport rep = dehn_sweep(path, steps, exact_edge_lengths(model), jobs);
  rep.deviation_tolerance = tol_dehn;

  if (out.empty()) {
    write_sweep_csv(std::cout, rep);
  } else {
    std::ofstream os(out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + out);
    write_sweep_csv(os, rep);
    std::cout << "wrote " << out << "\n";
  }

  double vol_max = rep.volume.cwiseAbs().maxCoeff();
  double schlafli_max = rep.schlafli.cwiseAbs().maxCoeff();
  double scale = 0;
  for (const auto& t : exact_edge_lengths(model).value) scale += t.second;
  bool pass = rep.constant() && vol_max <= 1e-9 && schlafli_max <= 1e-6 * scale;
  for (const auto& [d, dev] : rep.max_deviation)
    std::cout << "alpha_sqrt" << d << " max deviation: " << format_g17(dev) << "\n";
  std::cout << "max |volume|: " << format_g17(vol_max)
            << ", max |schlafli residual|: " << format_g17(schlafli_max) << " (scale " << scale
            << ")\n";
  std::cout << (pass ? "PASS" : "FAIL") << ": Dehn coefficients "
            << (rep.constant() ? "constant" : "NOT constant") << " at " << tol_dehn << "\n";
  return pass ? kOk : kCheckFailed;
}

// alpha = (p/q) pi within 1e-9?
std::optional<std::pair<long, long>> rational_pi_multiple(double alpha) {
  double ratio = alpha / std::numbers::pi;
  for (long q = 1; q <= 64; ++q) {
    double p = std::round(ratio * q);
    if (std::abs(ratio - p / q) <= 1e-9) return std::make_pair(static_cast<long>(p), q);
  }
  return std::nullopt;
}

int cmd_dehn(const std::string& path) {
  PolyhedronFile file = load_polyhedron(path);
  DehnInvariant inv = dehn(file.poly, file.lengths.has_exact() ? &file.lengths : nullptr);

  std::cout << inv.raw.size() << " codim-2 faces\n";
  if (inv.reduced) {
    bool all_trivial = true;
    for (const auto& [d, alpha] : *inv.reduced) {
      std::cout << "sqrt(" << d << ") (x) " << format_g17(alpha);
      if (auto pq = rational_pi_multiple(alpha)) {
        std::cout << "  = " << pq->first << "/" << pq->second << " * pi  == 0 mod pi*Q";
      } else {
        all_trivial = false;
      }
      std::cout << "\n";
    }
    std::cout << (all_trivial ? "Dehn invariant == 0 in R (x) (R/pi*Q) (rational-multiple detection)"
                              : "Dehn invariant != 0 (some coefficient is no rational multiple of pi)")
              << "\n";
  } else if (inv.heuristic) {
    std::cout << "no exact lengths: heuristic grouping (denominators <= 64, UNSOUND in general)\n";
    for (const auto& g : inv.heuristic.value())
      std::cout << "unit " << format_g17(g.unit_length) << " (x) " << format_g17(g.alpha) << "  ["
                << g.members.size() << " edges]\n";
  }
  std::cout << "tensor sum (sum V*phi): " << format_g17(inv.tensor_sum()) << "\n";
  return kOk;
}

int cmd_rigidity(const std::string& path) {
  PolyhedronFile file = load_polyhedron(path);
  RigidityReport rep = rigidity(file.poly);
  std::cout << "jacobian rank: " << rep.jacobian_rank << "\n"
            << "trivial motions: " << rep.trivial_motion_dim
            << (rep.orbit_degenerate ? " (DEGENERATE orbit)" : "") << "\n"
            << "nontrivial flexes: " << rep.nontrivial_flex_dim << "\n";
  return kOk;
}

int cmd_volume(const std::string& path, long mc_samples) {
  PolyhedronFile file = load_polyhedron(path);
  double v = oriented_volume(file.poly);
  std::cout << "oriented volume (divergence form): " << format_g17(v) << "\n";
  if (mc_samples > 0) {
    MonteCarloVolume mc = monte_carlo_volume(file.poly, mc_samples, seed_from_env());
    std::cout << "Monte-Carlo estimate: " << format_g17(mc.value) << " +- "
              << format_g17(mc.std_error) << " (" << mc.samples << " samples)\n";
    double sigmas = mc.std_error > 0 ? std::abs(mc.value - v) / mc.std_error : 0.0;
    std::cout << "difference: " << format_g17(sigmas) << " standard errors\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flexible polyhedra, Dehn invariants, and Connelly suspensions"};
  app.require_subcommand(1);

  double tol_geo = kGeoTol;
  double tol_dehn = 1e-8;
  app.add_option("--tol-geo", tol_geo, "model-surface / consistency tolerance")->capture_default_str();
  app.add_option("--tol-dehn", tol_dehn, "Dehn-coefficient constancy tolerance")->capture_default_str();

  std::string in_path, config, out, out_dir = ".";
  std::optional<double> at;
  int grid = 0, steps = 0, jobs = 1;
  double from = 0, to = 0;
  long mc = 0;

  auto* validate_cmd = app.add_subcommand("validate", "check a polyhedron file");
  validate_cmd->add_option("file", in_path)->required();

  auto* build_cmd = app.add_subcommand("build", "resolve a suspension config");
  build_cmd->add_option("config", config)->required();
  build_cmd->add_option("--at", at, "write a snapshot at this flexion parameter");
  build_cmd->add_option("--snapshot-grid", grid, "write this many snapshots across the interval");
  build_cmd->add_option("--out", out, "snapshot file for --at");
  build_cmd->add_option("--out-dir", out_dir, "directory for --snapshot-grid");

  auto* sweep_cmd = app.add_subcommand("sweep", "Dehn-coefficient constancy sweep");
  sweep_cmd->add_option("config", config)->required();
  sweep_cmd->add_option("--from", from)->required();
  sweep_cmd->add_option("--to", to)->required();
  sweep_cmd->add_option("--steps", steps)->required()->check(CLI::Range(3, 100000000));
  sweep_cmd->add_option("--out", out, "CSV output path (default stdout)");
  sweep_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 1024));

  auto* dehn_cmd = app.add_subcommand("dehn", "Dehn invariant of a polyhedron file");
  dehn_cmd->add_option("file", in_path)->required();

  auto* rigidity_cmd = app.add_subcommand("rigidity", "infinitesimal rigidity of a polyhedron file");
  rigidity_cmd->add_option("file", in_path)->required();

  auto* volume_cmd = app.add_subcommand("volume", "generalized oriented volume");
  volume_cmd->add_option("file", in_path)->required();
  volume_cmd->add_option("--mc", mc, "also run a Monte-Carlo check with this many samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(in_path, tol_geo);
    if (build_cmd->parsed()) return cmd_build(config, at, grid, out, out_dir);
    if (sweep_cmd->parsed()) return cmd_sweep(config, from, to, steps, out, jobs, tol_dehn);
    if (dehn_cmd->parsed()) return cmd_dehn(in_path);
    if (rigidity_cmd->parsed()) return cmd_rigidity(in_path);
    if (volume_cmd->parsed()) return cmd_volume(in_path, mc);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ConditionError& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kInputError;
}
