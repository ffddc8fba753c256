#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "pinw/classic.hpp"
#include "pinw/error.hpp"
#include "pinw/io.hpp"
#include "pinw/meshgen.hpp"
#include "pinw/metrics.hpp"

namespace pinw::cli {

namespace {

using json = nlohmann::ordered_json;

struct MeshArgs {
  std::string coarse;
  std::string polygon;
  bool classic = false;
  bool rect12 = false;
  int levels = -1;
  double h = 0.0;
  std::string out = "mesh";
  std::string delta_mode = "theoretical";
  double delta_divisor = 1460.0;
  double cutoff = kDefaultTripartitionCutoff;
  std::string rational_guard = "on";
  std::uint64_t seed = 1;
  int threads = 1;
  double stroke_width = 1.0;
  double aspect_warning = 20.0;
};

struct MeasureArgs {
  bool classic = false;
  std::string levels = "1..5";
  std::string baseline;
  int n = 64;
  std::string mesh;
  std::string polygon;
  std::string coarse;
  std::string h_list;
  double l = 1.0;
  std::string out = "measure";
  int threads = 1;
  bool no_timing = false;
  bool tiling = false;
};

struct RenderArgs {
  std::string mesh;
  std::string out;
  std::string highlight;
  double stroke_width = 1.0;
  double width = 800.0;
};

struct ValidateArgs {
  std::string coarse;
  std::string mesh;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "bad " + what + " '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "bad " + what + " '" + s + "'");
  }
}

DeltaPolicy parse_delta(const std::string& mode, double divisor) {
  if (mode == "theoretical") return DeltaPolicy::theoretical(divisor);
  if (mode == "dynamic") return DeltaPolicy::dynamic();
  if (mode.rfind("dynamic:", 0) == 0) {
    const double eta = parse_real(mode.substr(8), "dynamic eta");
    if (eta < 0.0) throw Error(ErrorCode::InvalidArgument, "dynamic eta must be non-negative");
    auto p = DeltaPolicy::dynamic(eta);
    p.divisor = divisor;
    return p;
  }
  throw Error(ErrorCode::InvalidArgument, "delta mode must be theoretical or dynamic:<eta>, got '" + mode + "'");
}

std::optional<RationalGuard> parse_guard(const std::string& s) {
  if (s == "off") return std::nullopt;
  if (s == "on") return RationalGuard{};
  const auto parts = split(s, ':');
  if (parts.size() == 3 && parts[0] == "on") {
    RationalGuard g{parse_int(parts[1], "guard denominator"), parse_real(parts[2], "guard tolerance")};
    if (g.max_denominator < 2 || !(g.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "guard needs denominator >= 2 and tol > 0");
    return g;
  }
  throw Error(ErrorCode::InvalidArgument, "rational guard must be off, on or on:<maxden>:<tol>, got '" + s + "'");
}

std::vector<int> parse_levels(const std::string& s) {
  std::vector<int> out;
  const auto dots = s.find("..");
  if (dots != std::string::npos) {
    const int a = parse_int(s.substr(0, dots), "level");
    const int b = parse_int(s.substr(dots + 2), "level");
    for (int i = a; i <= b; ++i) out.push_back(i);
  } else {
    for (const auto& p : split(s, ',')) out.push_back(parse_int(p, "level"));
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty level list");
  for (int v : out) {
    if (v < 0 || v > 9) throw Error(ErrorCode::InvalidArgument, "levels must lie in 0..9");
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  f << text;
}

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

json quality_json(const QualityReport& q) {
  json j;
  j["triangles"] = q.triangles;
  j["min_angle"] = q.min_angle;
  j["max_aspect"] = q.max_aspect;
  j["min_min_altitude"] = q.min_min_altitude;
  j["max_min_altitude"] = q.max_min_altitude;
  j["min_angle_histogram_5deg"] = q.min_angle_histogram;
  return j;
}

json report_json(const MeshResult& r, const MeshArgs& a, const DeltaPolicy& policy) {
  json j;
  json in;
  in["source"] = a.classic ? "classic-rect12" : (!a.coarse.empty() ? a.coarse : a.polygon);
  if (a.classic) {
    in["levels"] = a.levels;
  } else {
    in["h"] = a.h;
  }
  in["delta_mode"] = policy.mode == DeltaMode::Theoretical ? "theoretical" : "dynamic";
  if (policy.mode == DeltaMode::Dynamic) {
    in["eta"] = policy.eta;
  } else {
    in["delta_divisor"] = policy.divisor;
  }
  in["tripartition_cutoff"] = a.cutoff;
  in["rational_guard"] = a.rational_guard;
  in["seed"] = a.seed;
  j["input"] = in;

  const auto& st = r.stats;
  json forest;
  forest["roots"] = st.roots;
  forest["tiles"] = st.tiles;
  forest["leaves"] = st.leaves;
  forest["splits"] = st.splits;
  forest["min_leaf_depth"] = st.depth.min_leaf_depth;
  forest["max_leaf_depth"] = st.depth.max_leaf_depth;
  forest["tripartitions"] = r.forest.build_stats().tripartitions;
  forest["guard_flags"] = r.forest.build_stats().guard_flags;
  forest["max_root_aspect"] = st.max_root_aspect;
  forest["min_leaf_min_altitude"] = st.min_leaf_minalt;
  forest["max_leaf_min_altitude"] = st.max_leaf_minalt;
  j["forest"] = forest;

  json col;
  col["delta"] = r.collapse.delta;
  col["candidates"] = r.collapse.candidates;
  col["accepted"] = r.collapse.displacements();
  col["rejected"] = r.collapse.rejected;
  col["welded"] = st.welded;
  j["collapse"] = col;

  const auto& au = r.audit;
  json audit;
  audit["max_aspect_growth"] = au.max_aspect_growth;
  audit["min_min_altitude_ratio"] = au.min_minalt_ratio;
  audit["max_min_altitude_ratio"] = au.max_minalt_ratio;
  audit["min_singular_value"] = au.min_sigma;
  audit["max_singular_value"] = au.max_sigma;
  audit["singular_value_violations"] = au.sigma_violations;
  audit["min_node_separation"] = au.min_node_separation;
  audit["max_collinearity_error"] = au.max_collinearity_error;
  audit["hanging_nodes"] = au.hanging_nodes;
  j["audit"] = audit;

  json mesh;
  mesh["nodes"] = st.nodes;
  mesh["triangles"] = st.triangles;
  const auto conf = check_conformity(r.mesh);
  mesh["conforming"] = conf.ok;
  if (!conf.ok) mesh["conformity_message"] = conf.message;
  mesh["quality"] = quality_json(quality_report(r.mesh));
  j["mesh"] = mesh;

  json warnings = json::array();
  if (st.max_root_aspect > a.aspect_warning) {
    std::ostringstream os;
    os << "max root aspect ratio " << st.max_root_aspect << " exceeds " << a.aspect_warning;
    warnings.push_back(os.str());
  }
  j["warnings"] = warnings;
  return j;
}

int cmd_mesh(const MeshArgs& a, std::ostream& out, std::ostream& err) {
  const int sources = (a.classic ? 1 : 0) + (a.coarse.empty() ? 0 : 1) + (a.polygon.empty() ? 0 : 1);
  if (sources != 1) throw Error(ErrorCode::InvalidArgument, "give exactly one of --coarse, --polygon, --classic");
  if (a.levels >= 0 && !a.classic) throw Error(ErrorCode::InvalidArgument, "--levels is only valid with --classic");

  const DeltaPolicy policy = parse_delta(a.delta_mode, a.delta_divisor);
  MeshResult r;
  if (a.classic) {
    if (!a.rect12) throw Error(ErrorCode::InvalidArgument, "--classic needs a family; only --rect12 is available");
    if (a.levels < 0) throw Error(ErrorCode::InvalidArgument, "--classic needs --levels");
    r = classic_rect12_mesh(a.levels, a.threads);
  } else {
    if (!(a.h > 0.0)) throw Error(ErrorCode::InvalidArgument, "--h must be positive");
    TriangleMesh coarse =
        a.coarse.empty() ? triangulate_polygon(read_polygon_file(a.polygon)) : read_node_mesh_file(a.coarse);
    MeshOptions opts;
    opts.forest.tripartition_cutoff = a.cutoff;
    opts.forest.rational_guard = parse_guard(a.rational_guard);
    opts.forest.seed = a.seed;
    opts.delta = policy;
    opts.threads = a.threads;
    r = generate_mesh(coarse, a.h, opts);
  }
  const auto conf = check_conformity(r.mesh);
  if (!conf.ok) {
    err << "error: output mesh is not conforming: " << conf.message << '\n';
    return kExitInvariant;
  }

  write_file(a.out + ".node", render([&](std::ostream& os) { write_node_mesh(os, r.mesh); }));
  write_file(a.out + ".off", render([&](std::ostream& os) { write_off(os, r.mesh); }));
  SvgOptions svg;
  svg.stroke_width = a.stroke_width;
  write_file(a.out + ".svg", render([&](std::ostream& os) { write_svg(os, r.mesh, svg); }));
  write_file(a.out + ".report.json", report_json(r, a, policy).dump(2) + "\n");
  out << "wrote " << a.out << ".{node,off,svg,report.json}: " << r.stats.leaves << " leaves, " << r.mesh.nodes.size()
      << " nodes, " << r.mesh.triangles.size() << " triangles\n";
  return kExitOk;
}

struct MeasureRow {
  std::string label;
  TriangleMesh mesh;
  SkeletonGraph graph;
  Polygon domain;
};

int cmd_measure(const MeasureArgs& a, std::ostream& out) {
  const int sources = (a.classic ? 1 : 0) + (a.baseline.empty() ? 0 : 1) + (a.mesh.empty() ? 0 : 1) +
                      (a.coarse.empty() && a.h_list.empty() ? 0 : 1);
  if (sources != 1) throw Error(ErrorCode::InvalidArgument, "give exactly one of --classic, --baseline, --mesh, --coarse/--polygon with --h");
  if (!(a.l > 0.0)) throw Error(ErrorCode::InvalidArgument, "--l must be positive");

  std::vector<std::function<MeasureRow()>> jobs;
  if (a.classic) {
    for (int level : parse_levels(a.levels)) {
      jobs.push_back([level, &a] {
        MeshResult r = classic_rect12_mesh(level, a.threads);
        MeasureRow row{std::to_string(level), std::move(r.mesh), {}, rect12_domain()};
        row.graph = a.tiling ? build_skeleton(r.forest) : build_skeleton(row.mesh);
        return row;
      });
    }
  } else if (!a.baseline.empty()) {
    if (a.baseline != "grid" && a.baseline != "cross") throw Error(ErrorCode::InvalidArgument, "--baseline must be grid or cross");
    jobs.push_back([&a] {
      TriangleMesh m = a.baseline == "grid" ? grid_mesh(a.n) : cross_triangle_mesh(a.n);
      MeasureRow row{a.baseline + ":" + std::to_string(a.n), std::move(m), {}, Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}})};
      row.graph = build_skeleton(row.mesh);
      return row;
    });
  } else if (!a.mesh.empty()) {
    jobs.push_back([&a] {
      TriangleMesh m = read_node_mesh_file(a.mesh);
      Polygon dom = a.polygon.empty() ? boundary_polygon(m) : read_polygon_file(a.polygon);
      MeasureRow row{a.mesh, std::move(m), {}, std::move(dom)};
      row.graph = build_skeleton(row.mesh);
      return row;
    });
  } else {
    if (a.h_list.empty()) throw Error(ErrorCode::InvalidArgument, "--coarse/--polygon measurement needs --h");
    for (const auto& hs : split(a.h_list, ',')) {
      const double h = parse_real(hs, "h");
      jobs.push_back([h, hs, &a] {
        const bool from_polygon = !a.polygon.empty() && a.coarse.empty();
        Polygon dom = from_polygon ? read_polygon_file(a.polygon) : Polygon{};
        TriangleMesh coarse = from_polygon ? triangulate_polygon(dom) : read_node_mesh_file(a.coarse);
        if (!from_polygon) dom = a.polygon.empty() ? boundary_polygon(coarse) : read_polygon_file(a.polygon);
        MeshOptions opts;
        opts.threads = a.threads;
        MeshResult r = generate_mesh(coarse, h, opts);
        MeasureRow row{hs, std::move(r.mesh), {}, std::move(dom)};
        row.graph = build_skeleton(row.mesh);
        return row;
      });
    }
  }

  std::ostringstream csv;
  csv << "level_or_target,vertices,edges,deviation_ratio,witness_p,witness_q,seconds\n";
  std::string witness_svg;
  for (auto& job : jobs) {
    const auto t0 = std::chrono::steady_clock::now();
    MeasureRow row = job();
    const GeodesicMetric metric(row.domain);
    DeviationOptions dopts;
    dopts.threads = a.threads;
    const DeviationReport rep = deviation_ratio(row.graph, a.l, metric, dopts);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    csv << row.label << ',' << row.graph.vertex_count() << ',' << row.graph.edge_count() << ','
        << std::setprecision(10) << rep.ratio << ',' << rep.p << ',' << rep.q << ',' << std::setprecision(4)
        << (a.no_timing ? 0.0 : secs) << '\n';

    TriangleMesh overlay = row.mesh;
    if (a.tiling) {
      // Path ids index the tiling skeleton, not the mesh.
      overlay.nodes = row.graph.vertices();
      overlay.triangles.clear();
    }
    SvgOptions svg;
    svg.highlight = rep.path;
    witness_svg = render([&](std::ostream& os) { write_svg(os, overlay, svg); });
  }
  write_file(a.out + ".csv", csv.str());
  write_file(a.out + ".witness.svg", witness_svg);
  out << csv.str();
  return kExitOk;
}

int cmd_render(const RenderArgs& a, std::ostream& out) {
  const TriangleMesh mesh = read_node_mesh_file(a.mesh);
  SvgOptions svg;
  svg.stroke_width = a.stroke_width;
  svg.width = a.width;
  if (!a.highlight.empty()) {
    const auto parts = split(a.highlight, ',');
    if (parts.size() != 2) throw Error(ErrorCode::InvalidArgument, "--highlight-path expects p,q");
    const int p = parse_int(parts[0], "node");
    const int q = parse_int(parts[1], "node");
    const int n = static_cast<int>(mesh.nodes.size());
    if (p < 0 || q < 0 || p >= n || q >= n) throw Error(ErrorCode::InvalidArgument, "--highlight-path node out of range");
    const SkeletonGraph g = build_skeleton(mesh);
    svg.highlight = extract_path(shortest_paths(g, p), p, q);
  }
  const std::string text = render([&](std::ostream& os) { write_svg(os, mesh, svg); });
  if (a.out.empty()) {
    out << text;
  } else {
    write_file(a.out, text);
  }
  return kExitOk;
}

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  if (a.coarse.empty() == a.mesh.empty()) throw Error(ErrorCode::InvalidArgument, "give exactly one of --coarse, --mesh");
  if (!a.coarse.empty()) {
    TriangleMesh m = read_node_mesh_file(a.coarse);
    validate_coarse_mesh(m);
    out << "ok: " << m.nodes.size() << " nodes, " << m.triangles.size() << " triangles\n";
    return kExitOk;
  }
  const TriangleMesh m = read_node_mesh_file(a.mesh);
  const auto rep = check_conformity(m);
  if (!rep.ok) throw Error(ErrorCode::NonConforming, rep.message);
  out << "ok: " << m.nodes.size() << " nodes, " << m.triangles.size() << " triangles, " << rep.interior_edges
      << " interior edges, " << rep.boundary_edges << " boundary edges\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pinwheel mesh generator"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  MeshArgs ma;
  auto* mesh = app.add_subcommand("mesh", "Generate a mesh");
  mesh->add_option("--coarse", ma.coarse, "Coarse triangulation (node format)");
  mesh->add_option("--polygon", ma.polygon, "Polygon ring, triangulated internally");
  mesh->add_flag("--classic", ma.classic, "Classic 1:2 pinwheel family");
  mesh->add_flag("--rect12", ma.rect12, "Use the 2x1 rectangle (classic mode)");
  mesh->add_option("--levels", ma.levels, "Uniform subdivision levels (classic mode)");
  mesh->add_option("--h", ma.h, "Target minimum altitude");
  mesh->add_option("--out", ma.out, "Output prefix");
  mesh->add_option("--delta-mode", ma.delta_mode, "theoretical | dynamic:<eta>");
  mesh->add_option("--delta-divisor", ma.delta_divisor, "Divisor of the theoretical delta");
  mesh->add_option("--cutoff", ma.cutoff, "Tripartition cutoff on c - a (radians)");
  mesh->add_option("--rational-guard", ma.rational_guard, "off | on | on:<maxden>:<tol>");
  mesh->add_option("--seed", ma.seed, "Seed for displaced tripartition centers");
  mesh->add_option("--threads", ma.threads, "Threads for leaf triangulation")->check(CLI::PositiveNumber);
  mesh->add_option("--stroke-width", ma.stroke_width, "SVG stroke width");
  mesh->add_option("--aspect-warning", ma.aspect_warning, "Warn when a root aspect ratio exceeds this");

  MeasureArgs sa;
  auto* measure = app.add_subcommand("measure", "Deviation ratio measurements");
  measure->add_flag("--classic", sa.classic, "Classic 1:2 rectangle family");
  measure->add_option("--levels", sa.levels, "Levels, e.g. 1..5 or 2,4");
  measure->add_option("--baseline", sa.baseline, "grid | cross");
  measure->add_option("--n", sa.n, "Baseline cells per side")->check(CLI::PositiveNumber);
  measure->add_option("--mesh", sa.mesh, "Existing mesh (node format)");
  measure->add_option("--polygon", sa.polygon, "Domain polygon (geodesic distances)");
  measure->add_option("--coarse", sa.coarse, "Coarse mesh to refine for each --h");
  measure->add_option("--h", sa.h_list, "Comma separated target sizes");
  measure->add_option("--l", sa.l, "Minimum pair distance");
  measure->add_option("--out", sa.out, "Output prefix for CSV and witness SVG");
  measure->add_option("--threads", sa.threads, "Threads for shortest paths")->check(CLI::PositiveNumber);
  measure->add_flag("--no-timing", sa.no_timing, "Write 0 in the seconds column");
  measure->add_flag("--tiling", sa.tiling, "Classic mode: measure the tiling skeleton instead of the mesh");

  RenderArgs ra;
  auto* rend = app.add_subcommand("render", "Render a mesh to SVG");
  rend->add_option("mesh", ra.mesh, "Mesh (node format)")->required();
  rend->add_option("--out", ra.out, "Output SVG (stdout when omitted)");
  rend->add_option("--highlight-path", ra.highlight, "Overlay the shortest path p,q");
  rend->add_option("--stroke-width", ra.stroke_width, "Stroke width");
  rend->add_option("--width", ra.width, "Image width");

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check a coarse or output mesh");
  validate->add_option("--coarse", va.coarse, "Coarse triangulation to validate");
  validate->add_option("--mesh", va.mesh, "Mesh to check for conformity");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (mesh->parsed()) return cmd_mesh(ma, out, err);
    if (measure->parsed()) return cmd_measure(sa, out);
    if (rend->parsed()) return cmd_render(ra, out);
    if (validate->parsed()) return cmd_validate(va, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_invariant_violation(e.code()) ? kExitInvariant : kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitValidation;
}

}  // namespace pinw::cli
