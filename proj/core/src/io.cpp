#include "pinw/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "pinw/error.hpp"

namespace pinw {

namespace {

// Whitespace tokenizer that remembers line numbers for error messages.
class Tokens {
 public:
  explicit Tokens(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    text_ = ss.str();
  }

  std::string_view next(const char* what) {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ >= text_.size()) fail(std::string("unexpected end of input, expected ") + what);
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string_view(text_).substr(start, pos_ - start);
  }

  double real(const char* what) {
    const auto tok = next(what);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) fail("bad " + std::string(what) + " '" + std::string(tok) + "'");
    return v;
  }

  long integer(const char* what) {
    const auto tok = next(what);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) fail("bad " + std::string(what) + " '" + std::string(tok) + "'");
    return v;
  }

  bool at_end() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return pos_ >= text_.size();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::Parse, "line " + std::to_string(line_) + ": " + msg);
  }

 private:
  std::string text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path);
  return in;
}

}  // namespace

TriangleMesh read_node_mesh(std::istream& in) {
  Tokens tok(in);
  const long n = tok.integer("node count");
  const long m = tok.integer("triangle count");
  if (n < 0 || m < 0) tok.fail("negative count");
  TriangleMesh mesh;
  mesh.nodes.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double x = tok.real("x coordinate");
    const double y = tok.real("y coordinate");
    mesh.nodes.push_back({x, y});
  }
  for (long i = 0; i < m; ++i) {
    std::array<int, 3> t{};
    for (auto& v : t) {
      const long idx = tok.integer("node index");
      if (idx < 0 || idx >= n) tok.fail("node index " + std::to_string(idx) + " out of range");
      v = static_cast<int>(idx);
    }
    mesh.triangles.push_back(t);
  }
  if (!tok.at_end()) tok.fail("trailing data after the last triangle");
  return mesh;
}

TriangleMesh read_node_mesh_file(const std::string& path) {
  auto in = open(path);
  return read_node_mesh(in);
}

void write_node_mesh(std::ostream& out, const TriangleMesh& mesh) {
  out << std::setprecision(17);
  out << mesh.nodes.size() << ' ' << mesh.triangles.size() << '\n';
  for (const Point& p : mesh.nodes) out << p.x << ' ' << p.y << '\n';
  for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

Polygon read_polygon(std::istream& in) {
  Tokens tok(in);
  const long n = tok.integer("vertex count");
  if (n < 3) tok.fail("polygon needs at least 3 vertices");
  std::vector<Point> ring;
  for (long i = 0; i < n; ++i) {
    const double x = tok.real("x coordinate");
    const double y = tok.real("y coordinate");
    ring.push_back({x, y});
  }
  if (!tok.at_end()) tok.fail("trailing data after the last vertex");
  return Polygon(std::move(ring));
}

Polygon read_polygon_file(const std::string& path) {
  auto in = open(path);
  return read_polygon(in);
}

void write_off(std::ostream& out, const TriangleMesh& mesh) {
  out << std::setprecision(17);
  out << "OFF\n" << mesh.nodes.size() << ' ' << mesh.triangles.size() << " 0\n";
  for (const Point& p : mesh.nodes) out << p.x << ' ' << p.y << " 0\n";
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void write_svg(std::ostream& out, const TriangleMesh& mesh, const SvgOptions& opts) {
  Point lo{0.0, 0.0}, hi{1.0, 1.0};
  if (!mesh.nodes.empty()) {
    lo = hi = mesh.nodes.front();
    for (const Point& p : mesh.nodes) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
  }
  const double span = std::max({hi.x - lo.x, hi.y - lo.y, 1e-300});
  const double margin = 10.0;
  const double scale = (opts.width - 2.0 * margin) / span;
  const double height = (hi.y - lo.y) * scale + 2.0 * margin;
  // SVG y grows downwards.
  const auto sx = [&](const Point& p) { return margin + (p.x - lo.x) * scale; };
  const auto sy = [&](const Point& p) { return margin + (hi.y - p.y) * scale; };

  out << std::fixed << std::setprecision(3);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << opts.width << ' ' << height << "\">\n";
  out << "<g fill=\"none\" stroke=\"black\" stroke-width=\"" << opts.stroke_width << "\" stroke-linejoin=\"round\">\n";
  for (const auto& t : mesh.triangles) {
    out << "<polygon points=\"";
    for (std::size_t k = 0; k < 3; ++k) {
      const Point& p = mesh.nodes[static_cast<std::size_t>(t[k])];
      out << (k ? " " : "") << sx(p) << ',' << sy(p);
    }
    out << "\"/>\n";
  }
  out << "</g>\n";
  if (opts.highlight.size() >= 2) {
    out << "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"" << opts.highlight_width << "\" points=\"";
    for (std::size_t i = 0; i < opts.highlight.size(); ++i) {
      const Point& p = mesh.nodes[static_cast<std::size_t>(opts.highlight[i])];
      out << (i ? " " : "") << sx(p) << ',' << sy(p);
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  out << std::defaultfloat;
}

}  // namespace pinw
